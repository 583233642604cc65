//! The `polymod` command line.
//!
//! Exit status is 0 on success, 1 when a verification experiment reports
//! failures, and 2 for usage errors, invalid input and unmet preconditions.

mod args;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::{Parser, ValueEnum};
use polygon_moduli::construct::{
    bend, bend_direction, bend_sites, build_degenerate, build_planar, find_bend_site, raise_to_dimension, sample,
    SignPattern,
};
use polygon_moduli::quotient::{align, phi_fiber};
use polygon_moduli::verify::{sub_seed, Experiment, ExperimentReport};
use polygon_moduli::{
    classify_feasibility, moduli_point, o_equivalent, so_equivalent, EdgeLengths, Polygon, ToleranceConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use args::{BuildKind, Cli, Command, ExperimentArg, Group, ToleranceArgs};

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable input or an unmet precondition (exit 2).
    Usage(String),
    /// An experiment ran and found failures (exit 1); carries the report.
    Verification(String),
}

impl From<polygon_moduli::Error> for Failure {
    fn from(e: polygon_moduli::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<String, Failure>;

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (output, code) = match execute(&cli) {
        Ok(text) => (text, 0),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
        Err(Failure::Verification(report)) => (report, 1),
    };
    if let Err(e) = emit(&cli, &output, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    code
}

fn emit(cli: &Cli, text: &str, stdout: &mut dyn Write) -> io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn execute(cli: &Cli) -> CmdResult {
    let tol = tolerance(&cli.tolerance)?;
    match &cli.command {
        Command::Check { lengths, ell } => check(lengths, ell.as_deref()),
        Command::Build { kind, ell, k, d, pattern } => {
            build(*kind, &parse_ell(ell)?, *k, *d, pattern.as_deref(), cli.seed, &tol)
        }
        Command::Dim { input } => Ok(format!("{}\n", read_polygon(input, &tol)?.dimension(&tol))),
        Command::Bend { input, index } => bend_once(&read_polygon(input, &tol)?, *index, cli.seed, &tol),
        Command::Equiv { a, b, group } => equiv(&read_polygon(a, &tol)?, &read_polygon(b, &tol)?, *group, &tol),
        Command::Fiber { input, from_d } => fiber(&read_polygon(input, &tol)?, *from_d, &tol),
        Command::Verify { experiment, ell, d, trials, csv } => {
            verify(*experiment, &parse_ell(ell)?, *d, *trials, cli.seed, csv.as_deref(), &tol)
        }
        Command::Sample { ell, d, count } => {
            let ell = parse_ell(ell)?;
            let mut text = String::new();
            for i in 0..*count {
                text.push_str(&sample(&ell, *d, sub_seed(cli.seed, i as u64), &tol)?.to_json());
                text.push('\n');
            }
            Ok(text)
        }
    }
}

fn tolerance(args: &ToleranceArgs) -> std::result::Result<ToleranceConfig, Failure> {
    let mut tol = ToleranceConfig::default();
    let overrides = [
        (args.eps_rank, &mut tol.eps_rank),
        (args.eps_gram, &mut tol.eps_gram),
        (args.eps_align, &mut tol.eps_align),
        (args.eps_root, &mut tol.eps_root),
        (args.cond_floor, &mut tol.cond_floor),
    ];
    for (value, slot) in overrides {
        if let Some(v) = value {
            *slot = v;
        }
    }
    tol.validate()?;
    Ok(tol)
}

/// Decimal edge lengths separated by commas.
pub fn parse_ell(s: &str) -> std::result::Result<EdgeLengths, Failure> {
    parse_lengths(s.split(',').map(str::trim))
}

fn parse_lengths<'a>(items: impl Iterator<Item = &'a str>) -> std::result::Result<EdgeLengths, Failure> {
    let values = items
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Failure::Usage(format!("edge length {t:?} is not a decimal number")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(EdgeLengths::new(values)?)
}

fn check(lengths: &[String], ell: Option<&str>) -> CmdResult {
    let ell = match (lengths.is_empty(), ell) {
        (false, None) => parse_lengths(lengths.iter().flat_map(|s| s.split(',')).map(str::trim))?,
        (true, Some(s)) => parse_ell(s)?,
        _ => return Err(Failure::Usage("give edge lengths either positionally or with --ell".into())),
    };
    Ok(format!("{}\n", classify_feasibility(&ell)))
}

fn build(
    kind: BuildKind,
    ell: &EdgeLengths,
    k: Option<usize>,
    d: Option<usize>,
    pattern: Option<&str>,
    seed: u64,
    tol: &ToleranceConfig,
) -> CmdResult {
    let p = match kind {
        BuildKind::Planar => build_planar(ell, tol)?.embed(d.unwrap_or(2))?,
        BuildKind::Degenerate => {
            let pattern: SignPattern = pattern
                .ok_or_else(|| Failure::Usage("build degenerate needs --pattern".into()))?
                .parse()?;
            build_degenerate(ell, &pattern, d.unwrap_or(2), tol)?
        }
        BuildKind::Dim => {
            let k = k.ok_or_else(|| Failure::Usage("build dim needs --k".into()))?;
            raise_to_dimension(ell, k, d.unwrap_or(k), tol, seed)?
        }
    };
    Ok(p.to_json() + "\n")
}

fn bend_once(p: &Polygon, index: Option<usize>, seed: u64, tol: &ToleranceConfig) -> CmdResult {
    let site = match index {
        None => find_bend_site(p, tol)?,
        Some(i) => bend_sites(p, tol)?
            .into_iter()
            .find(|s| s.index == i)
            .ok_or_else(|| Failure::Usage(format!("vertex {i} is not bendable")))?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = bend_direction(p, &site, &mut rng, tol)
        .ok_or_else(|| Failure::Usage("no direction leaves the span of the other vertices".into()))?;
    Ok(bend(p, &site, &u, tol)?.to_json() + "\n")
}

fn equiv(a: &Polygon, b: &Polygon, group: Group, tol: &ToleranceConfig) -> CmdResult {
    let (same, proper) = match group {
        Group::So => (so_equivalent(a, b, tol)?, true),
        Group::O => (o_equivalent(a, b, tol)?, false),
    };
    let residual = align(a, b, proper, tol)?.residual;
    Ok(format!("{same}\nresidual {residual:.16e}\n"))
}

/// Moves `p` into `R^{d+1}` (padding, or projecting onto its span when it
/// fits) and lists the classes in `R^d` mapping onto its class.
fn fiber(p: &Polygon, from_d: usize, tol: &ToleranceConfig) -> CmdResult {
    if from_d < 2 {
        return Err(Failure::Usage(format!("--from-d must be at least 2, got {from_d}")));
    }
    let target = from_d + 1;
    let q = if p.ambient_dim() <= target {
        p.embed(target)?
    } else if p.dimension(tol) <= target {
        p.project_to_span(tol).embed(target)?
    } else {
        return Err(Failure::Usage(format!(
            "polygon of dimension {} does not fit in R^{target}",
            p.dimension(tol)
        )));
    };
    let points = phi_fiber(&moduli_point(&q, tol), tol);
    serde_json::to_string(&points)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn verify(
    experiment: ExperimentArg,
    ell: &EdgeLengths,
    d: usize,
    trials: usize,
    seed: u64,
    csv: Option<&Path>,
    tol: &ToleranceConfig,
) -> CmdResult {
    let name = experiment.to_possible_value().expect("no skipped variants").get_name().to_string();
    let experiment: Experiment = name.parse()?;
    let report = experiment.run(ell, d, trials, seed, tol)?;
    if let Some(path) = csv {
        append_csv(path, &report)?;
    }
    let text = report.to_json() + "\n";
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn append_csv(path: &Path, report: &ExperimentReport) -> std::result::Result<(), Failure> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| Failure::Usage(e.to_string());
    if fresh {
        w.write_record(ExperimentReport::csv_header()).map_err(csv_err)?;
    }
    w.write_record(report.csv_row()).map_err(csv_err)?;
    w.flush()?;
    Ok(())
}

fn read_polygon(path: &Path, tol: &ToleranceConfig) -> std::result::Result<Polygon, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Polygon::from_json(&text, tol).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_lengths() {
        assert_eq!(parse_ell("1, 2.5,3e0").unwrap().as_slice(), &[1.0, 2.5, 3.0]);
        for bad in ["1/2,1,1", "1,,1", "1,1", "1,-1,1", "1,inf,1", ""] {
            assert!(parse_ell(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn tolerance_overrides_are_validated() {
        let mut args = ToleranceArgs { eps_rank: Some(1e-6), eps_gram: None, eps_align: None, eps_root: None, cond_floor: None };
        assert_eq!(tolerance(&args).unwrap().eps_rank, 1e-6);
        args.eps_root = Some(1e-3);
        assert!(tolerance(&args).is_err());
    }

    #[test]
    fn equiv_prints_two_lines() {
        let tol = ToleranceConfig::default();
        let p = build_planar(&parse_ell("1,1,1,1").unwrap(), &tol).unwrap().embed(3).unwrap();
        let text = equiv(&p, &p.reflect(), Group::So, &tol).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "true");
        assert!(lines[1].starts_with("residual "));
        assert_eq!(lines.len(), 2);
    }
}
