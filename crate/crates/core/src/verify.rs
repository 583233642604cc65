//! Randomized experiments checking the structural results on polygon
//! spaces: the dimension bound, the range of realizable dimensions,
//! chirality of full-dimensional polygons, fibers and surjectivity of the
//! embedding maps, stabilization of the moduli spaces, and the
//! 1-dimensional classes.
//!
//! Every experiment is a pure function of its inputs and seed. Trial `i`
//! draws from its own stream derived from `(seed, i)`, so trials may run in
//! parallel and the report does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construct::{
    build_degenerate, enumerate_degenerate_classes, find_bend_site, raise_to_dimension, sample,
};
use crate::error::{Error, Result};
use crate::lengths::{classify_feasibility, EdgeLengths, FeasibilityClass};
use crate::linalg;
use crate::polygon::Polygon;
use crate::quotient::{
    align, moduli_point, o_equivalent, phi, phi_fiber, preimage, so_equivalence_matrix, so_equivalent,
};
use crate::tolerance::ToleranceConfig;

/// Largest `n` accepted by the stabilization experiment.
pub const MAX_STABILIZATION_EDGES: usize = 8;

/// Pairwise class checks in the degenerate experiment are skipped above this
/// many classes.
const MAX_PAIRWISE_CLASSES: usize = 200;

/// A failing trial with the polygons needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailurePayload {
    pub trial: usize,
    pub reason: String,
    pub polygons: Vec<Polygon>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub ell: EdgeLengths,
    pub d: usize,
    pub trials: usize,
    pub failures: usize,
    pub failure_payloads: Vec<FailurePayload>,
    pub seed: u64,
    /// Counters and facts gathered along the way (skipped samples, observed
    /// dimensions, class counts).
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub elapsed_ms: u64,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// JSON with `elapsed_ms` removed; identical across reruns with the same inputs.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("elapsed_ms");
        }
        v.to_string()
    }

    pub fn csv_header() -> [&'static str; 8] {
        ["name", "ell", "d", "trials", "failures", "seed", "elapsed_ms", "pass"]
    }

    pub fn csv_row(&self) -> [String; 8] {
        [
            self.name.clone(),
            self.ell.to_string(),
            self.d.to_string(),
            self.trials.to_string(),
            self.failures.to_string(),
            self.seed.to_string(),
            self.elapsed_ms.to_string(),
            self.passed().to_string(),
        ]
    }
}

/// The available experiments, by command-line name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    DimensionBound,
    DimensionRange,
    Chirality,
    Fiber,
    Stabilization,
    Degenerate,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Self::DimensionBound,
        Self::DimensionRange,
        Self::Chirality,
        Self::Fiber,
        Self::Stabilization,
        Self::Degenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DimensionBound => "dimension-bound",
            Self::DimensionRange => "dimension-range",
            Self::Chirality => "chirality",
            Self::Fiber => "fiber",
            Self::Stabilization => "stabilization",
            Self::Degenerate => "degenerate",
        }
    }

    /// Runs the experiment; arguments it does not use are ignored.
    pub fn run(
        self,
        ell: &EdgeLengths,
        d: usize,
        trials: usize,
        seed: u64,
        tol: &ToleranceConfig,
    ) -> Result<ExperimentReport> {
        match self {
            Self::DimensionBound => verify_dimension_bound(ell, d, trials, seed, tol),
            Self::DimensionRange => verify_dimension_range(ell, d, seed, tol),
            Self::Chirality => verify_chirality(ell, d, trials, seed, tol),
            Self::Fiber => verify_fiber_and_surjectivity(ell, d, trials, seed, tol),
            Self::Stabilization => verify_stabilization(ell, trials, seed, tol),
            Self::Degenerate => verify_degenerate_classes(ell, tol),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown experiment {s:?}")))
    }
}

/// Seed for trial `index` of an experiment run with `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

#[derive(Default)]
struct Outcome {
    failure: Option<(String, Vec<Polygon>)>,
    counters: Vec<String>,
}

impl Outcome {
    fn fail(reason: impl Into<String>, polygons: Vec<Polygon>) -> Self {
        Self { failure: Some((reason.into(), polygons)), counters: Vec::new() }
    }

    fn count(mut self, key: impl Into<String>) -> Self {
        self.counters.push(key.into());
        self
    }
}

fn run_trials<F>(trials: usize, f: F) -> Vec<Outcome>
where
    F: Fn(usize) -> Outcome + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(f).collect()
    }
}

struct ReportBuilder {
    report: ExperimentReport,
    counters: BTreeMap<String, u64>,
    started: Instant,
}

impl ReportBuilder {
    fn new(name: &str, ell: &EdgeLengths, d: usize, seed: u64) -> Self {
        Self {
            report: ExperimentReport {
                name: name.to_string(),
                ell: ell.clone(),
                d,
                trials: 0,
                failures: 0,
                failure_payloads: Vec::new(),
                seed,
                metadata: BTreeMap::new(),
                elapsed_ms: 0,
            },
            counters: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    fn absorb(&mut self, first_trial: usize, outcomes: Vec<Outcome>) {
        for (offset, o) in outcomes.into_iter().enumerate() {
            self.report.trials += 1;
            for c in o.counters {
                *self.counters.entry(c).or_default() += 1;
            }
            if let Some((reason, polygons)) = o.failure {
                self.push_failure(first_trial + offset, reason, polygons);
            }
        }
    }

    fn push_failure(&mut self, trial: usize, reason: String, polygons: Vec<Polygon>) {
        self.report.failures += 1;
        self.report.failure_payloads.push(FailurePayload { trial, reason, polygons });
    }

    fn meta(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.report.metadata.insert(key.to_string(), value.into());
    }

    fn finish(mut self) -> ExperimentReport {
        for (k, v) in std::mem::take(&mut self.counters) {
            self.report.metadata.insert(k, v.into());
        }
        self.report.elapsed_ms = self.started.elapsed().as_millis() as u64;
        self.report
    }
}

fn require_interior(ell: &EdgeLengths, name: &str) -> Result<()> {
    match classify_feasibility(ell) {
        FeasibilityClass::Interior => Ok(()),
        other => Err(Error::Precondition(format!(
            "{name} needs interior edge lengths; ({ell}) is {other}"
        ))),
    }
}

fn require_ambient(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Precondition(format!("ambient dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// Sampled polygons never exceed dimension `min(n - 1, d)`.
pub fn verify_dimension_bound(
    ell: &EdgeLengths,
    d: usize,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ExperimentReport> {
    require_interior(ell, "dimension-bound")?;
    require_ambient(d)?;
    let bound = d.min(ell.len() - 1);
    let mut b = ReportBuilder::new("dimension-bound", ell, d, seed);
    b.meta("bound", bound);
    let outcomes = run_trials(trials, |t| {
        let p = match sample(ell, d, sub_seed(seed, t as u64), tol) {
            Ok(p) => p,
            Err(e) => return Outcome::fail(format!("sampling failed: {e}"), vec![]),
        };
        let dim = p.dimension(tol);
        let key = format!("dim_{dim}");
        if dim > bound {
            return Outcome::fail(format!("dimension {dim} exceeds bound {bound}"), vec![p]).count(key);
        }
        if p.relative_edge_error() > tol.eps_align {
            return Outcome::fail("edge lengths violated", vec![p]).count(key);
        }
        Outcome::default().count(key)
    });
    b.absorb(0, outcomes);
    Ok(b.finish())
}

/// Every dimension `k` in `2..=min(d, n - 1)` is realized exactly by the
/// bending construction.
pub fn verify_dimension_range(
    ell: &EdgeLengths,
    d: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ExperimentReport> {
    require_interior(ell, "dimension-range")?;
    require_ambient(d)?;
    let top = d.min(ell.len() - 1);
    let ks: Vec<usize> = (2..=top).collect();
    let mut b = ReportBuilder::new("dimension-range", ell, d, seed);
    b.meta("max_dimension", top);
    let outcomes = run_trials(ks.len(), |t| {
        let k = ks[t];
        match raise_to_dimension(ell, k, d, tol, sub_seed(seed, k as u64)) {
            Ok(p) => {
                let dim = p.dimension(tol);
                if dim != k {
                    Outcome::fail(format!("asked for dimension {k}, got {dim}"), vec![p])
                } else if p.relative_edge_error() > tol.eps_align {
                    Outcome::fail("edge lengths violated", vec![p])
                } else {
                    Outcome::default().count(format!("realized_{k}"))
                }
            }
            Err(e) => Outcome::fail(format!("dimension {k} not constructed: {e}"), vec![]),
        }
    });
    b.absorb(0, outcomes);
    Ok(b.finish())
}

/// A polygon is rotation-equivalent to its mirror image exactly when it does
/// not fill the ambient space; checked with the Gram/orientation test and
/// with proper Procrustes alignment.
pub fn verify_chirality(
    ell: &EdgeLengths,
    d: usize,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ExperimentReport> {
    require_interior(ell, "chirality")?;
    require_ambient(d)?;
    let threshold = tol.eps_align * ell.perimeter();
    let mut b = ReportBuilder::new("chirality", ell, d, seed);
    let outcomes = run_trials(trials, |t| {
        let p = match sample(ell, d, sub_seed(seed, t as u64), tol) {
            Ok(p) => p,
            Err(e) => return Outcome::fail(format!("sampling failed: {e}"), vec![]),
        };
        if !p.is_well_conditioned(tol) {
            return Outcome::default().count("ill_conditioned_skipped");
        }
        chirality_check(&p, threshold, tol)
    });
    b.absorb(0, outcomes);
    b.meta("residual_threshold", threshold);
    Ok(b.finish())
}

fn chirality_check(p: &Polygon, threshold: f64, tol: &ToleranceConfig) -> Outcome {
    let d = p.ambient_dim();
    let mirror = p.reflect();
    let dim = p.dimension(tol);
    let (same, residual) = match (so_equivalent(p, &mirror, tol), align(p, &mirror, true, tol)) {
        (Ok(s), Ok(a)) => (s, a.residual),
        (Err(e), _) | (_, Err(e)) => return Outcome::fail(e.to_string(), vec![p.clone()]),
    };
    if dim < d {
        if !same || residual > threshold {
            return Outcome::fail(
                format!("dimension {dim} < {d} but mirror not matched (so_equivalent {same}, residual {residual:e})"),
                vec![p.clone()],
            );
        }
        Outcome::default().count("achiral")
    } else {
        if same || residual <= 10.0 * threshold {
            return Outcome::fail(
                format!("full-dimensional but mirror matched (so_equivalent {same}, residual {residual:e})"),
                vec![p.clone()],
            );
        }
        Outcome::default().count("chiral")
    }
}

/// Fibers of the map from `R^d` to `R^{d+1}` and its surjectivity.
///
/// Each trial samples `Q` in `R^{d+1}` (explicit preimage when
/// `dim Q <= d`) and `P` in `R^d` (fiber of its image has two points when
/// `dim P = d`, the classes of `P` and its mirror, and one otherwise). When
/// `d < n - 1` one extra trial checks that a constructed `(d+1)`-dimensional
/// polygon has an empty fiber.
pub fn verify_fiber_and_surjectivity(
    ell: &EdgeLengths,
    d: usize,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ExperimentReport> {
    require_interior(ell, "fiber")?;
    require_ambient(d)?;
    let n = ell.len();
    let surjective = d >= n - 1;
    let mut b = ReportBuilder::new("fiber", ell, d, seed);
    b.meta("surjective_expected", surjective);
    let outcomes = run_trials(trials, |t| {
        let seed_q = sub_seed(seed, 2 * t as u64);
        let seed_p = sub_seed(seed, 2 * t as u64 + 1);
        let q = match sample(ell, d + 1, seed_q, tol) {
            Ok(q) => q,
            Err(e) => return Outcome::fail(format!("sampling failed: {e}"), vec![]),
        };
        let p = match sample(ell, d, seed_p, tol) {
            Ok(p) => p,
            Err(e) => return Outcome::fail(format!("sampling failed: {e}"), vec![]),
        };
        let mut outcome = Outcome::default();
        match preimage_check(&q, d, surjective, tol) {
            Ok(key) => outcome = outcome.count(key),
            Err(reason) => return Outcome::fail(reason, vec![q]),
        }
        match fiber_check(&p, tol) {
            Ok(key) => outcome.count(key),
            Err(reason) => Outcome::fail(reason, vec![p]),
        }
    });
    b.absorb(0, outcomes);

    if !surjective {
        let trial = b.report.trials;
        let witness = raise_to_dimension(ell, d + 1, d + 1, tol, sub_seed(seed, u64::MAX));
        let outcome = match witness {
            Ok(w) => {
                let mw = moduli_point(&w, tol);
                let fiber_empty = phi_fiber(&mw, tol).is_empty();
                let no_preimage = matches!(preimage(&w, d, tol), Ok(None));
                if w.dimension(tol) == d + 1 && fiber_empty && no_preimage {
                    Outcome::default().count("non_surjectivity_witness")
                } else {
                    Outcome::fail("constructed (d+1)-dimensional polygon has a preimage", vec![w])
                }
            }
            Err(e) => Outcome::fail(format!("witness not constructed: {e}"), vec![]),
        };
        b.absorb(trial, vec![outcome]);
    }
    Ok(b.finish())
}

fn preimage_check(q: &Polygon, d: usize, surjective: bool, tol: &ToleranceConfig) -> std::result::Result<&'static str, String> {
    let mq = moduli_point(q, tol);
    let fiber = phi_fiber(&mq, tol);
    let expected = match mq.rank.cmp(&d) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Equal => 2,
        std::cmp::Ordering::Greater => 0,
    };
    if fiber.len() != expected {
        return Err(format!("fiber of a rank-{} point has {} elements, expected {expected}", mq.rank, fiber.len()));
    }
    if mq.rank > d {
        if surjective {
            return Err(format!("rank {} exceeds d = {d} although the map should be surjective", mq.rank));
        }
        return Ok("sampled_outside_image");
    }
    let p = preimage(q, d, tol)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| "no preimage although dimension fits".to_string())?;
    if p.relative_edge_error() > tol.eps_align {
        return Err("preimage violates edge lengths".into());
    }
    let mp = moduli_point(&p, tol);
    if !phi(&mp).same_point(&mq, tol) {
        return Err("preimage does not map onto the sampled class".into());
    }
    if !fiber.iter().any(|f| f.same_point(&mp, tol)) {
        return Err("preimage class missing from the computed fiber".into());
    }
    Ok("preimage_found")
}

fn fiber_check(p: &Polygon, tol: &ToleranceConfig) -> std::result::Result<&'static str, String> {
    let d = p.ambient_dim();
    let mp = moduli_point(p, tol);
    let image = phi(&mp);
    let fiber = phi_fiber(&image, tol);
    let expected = if mp.rank == d { 2 } else { 1 };
    if fiber.len() != expected {
        return Err(format!("fiber has {} points, expected {expected} for rank {}", fiber.len(), mp.rank));
    }
    if !fiber.iter().any(|f| f.same_point(&mp, tol)) {
        return Err("class missing from the fiber of its own image".into());
    }
    // The mirror class maps to the same image and is distinct exactly at full rank.
    let mirror = moduli_point(&p.reflect(), tol);
    if !phi(&mirror).same_point(&image, tol) {
        return Err("mirror image maps elsewhere".into());
    }
    let distinct = !mirror.same_point(&mp, tol);
    if distinct != (mp.rank == d) {
        return Err(format!("mirror distinct = {distinct} at rank {} in R^{d}", mp.rank));
    }
    Ok(if mp.rank == d { "two_to_one" } else { "one_to_one" })
}

/// The moduli spaces stop changing at ambient dimension `n`.
///
/// A set of `trials` polygons in `R^n` (one per dimension from the bending
/// construction, random samples, and mirror and rotated copies) is compared
/// pairwise at ambient `n`, `n + 1` and `n + 2`; the three equivalence
/// matrices must agree. Strictness: a constructed `(n-1)`-dimensional
/// polygon in `R^{n-1}` differs from its mirror there and is identified with
/// it in `R^n`.
///
/// For border edge lengths every polygon is a segment and the moduli space is
/// a point: all constructible polygons must be mutually equivalent for
/// `d = 2, 3, 4`.
pub fn verify_stabilization(
    ell: &EdgeLengths,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ExperimentReport> {
    let n = ell.len();
    if n > MAX_STABILIZATION_EDGES {
        return Err(Error::Precondition(format!(
            "stabilization is limited to n <= {MAX_STABILIZATION_EDGES}, got {n}"
        )));
    }
    match classify_feasibility(ell) {
        FeasibilityClass::Infeasible => Err(Error::Precondition(format!(
            "stabilization needs feasible edge lengths; ({ell}) is Infeasible"
        ))),
        FeasibilityClass::Border => verify_border_singleton(ell, trials, seed, tol),
        FeasibilityClass::Interior => verify_interior_stabilization(ell, trials, seed, tol),
    }
}

/// Members of the stabilization sample set in `R^n`, with the polygon in
/// `R^{n-1}` they were built from when there is one.
struct Member {
    polygon: Polygon,
    lower: Option<Polygon>,
}

/// Groups of three: a base polygon, its mirror image and a rotated copy.
/// Bases cycle through the bending construction for every dimension
/// `2..=n-1` and random samples, built in `R^{n-1}` (and padded) or directly
/// in `R^n`. Mirrors and rotations of bases built in `R^{n-1}` are taken
/// there, so those members have an exact lower form.
fn stabilization_set(ell: &EdgeLengths, size: usize, seed: u64, tol: &ToleranceConfig) -> Result<Vec<Member>> {
    let n = ell.len();
    let lower = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = Vec::with_capacity(size);
    let mut round = 0u64;
    while set.len() < size {
        let k = 2 + (round as usize) % (lower - 1);
        let stream = sub_seed(seed, round);
        let (base, in_lower) = match (round / (lower as u64 - 1)) % 3 {
            0 => (raise_to_dimension(ell, k, lower, tol, stream)?, true),
            1 => (sample(ell, lower, stream, tol)?, true),
            _ => (sample(ell, n, stream, tol)?, false),
        };
        round += 1;
        let dim = base.ambient_dim();
        let group = [base.reflect(), base.transform(&linalg::haar_rotation(dim, &mut rng))?, base];
        for p in group.into_iter().rev() {
            if set.len() == size {
                break;
            }
            let member = if in_lower {
                Member { polygon: p.embed(n)?, lower: Some(p) }
            } else {
                Member { polygon: p, lower: None }
            };
            set.push(member);
        }
    }
    Ok(set)
}

fn verify_interior_stabilization(
    ell: &EdgeLengths,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ExperimentReport> {
    let n = ell.len();
    let mut b = ReportBuilder::new("stabilization", ell, n, seed);
    let members = stabilization_set(ell, trials, seed, tol)?;
    let set: Vec<Polygon> = members.iter().map(|m| m.polygon.clone()).collect();
    b.report.trials = set.len();

    let at_n = so_equivalence_matrix(&set, tol)?;
    let mut mismatches = 0u64;
    for extra in [1, 2] {
        let lifted: Vec<Polygon> = set.iter().map(|p| p.embed(n + extra)).collect::<Result<_>>()?;
        let m = so_equivalence_matrix(&lifted, tol)?;
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                if m[i][j] != at_n[i][j] {
                    mismatches += 1;
                    b.push_failure(
                        i,
                        format!(
                            "pair ({i}, {j}): equivalent in R^{n} = {}, in R^{} = {}",
                            at_n[i][j],
                            n + extra,
                            m[i][j]
                        ),
                        vec![set[i].clone(), set[j].clone()],
                    );
                }
            }
        }
    }
    b.meta("classes_at_n", count_classes(&at_n));
    b.meta("matrix_mismatches", mismatches);

    // On the members that live in R^{n-1}, equivalence there implies
    // equivalence in R^n, and some mirror pairs are only identified in R^n.
    let lower = n - 1;
    let (idx, below): (Vec<usize>, Vec<Polygon>) = members
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.lower.clone().map(|p| (i, p)))
        .unzip();
    let m = so_equivalence_matrix(&below, tol)?;
    let mut split = 0u64;
    let mut split_full = 0u64;
    for a in 0..idx.len() {
        for c in (a + 1)..idx.len() {
            let (i, j) = (idx[a], idx[c]);
            if m[a][c] && !at_n[i][j] {
                b.push_failure(
                    i,
                    format!("pair ({i}, {j}) equivalent in R^{lower} but not in R^{n}"),
                    vec![set[i].clone(), set[j].clone()],
                );
            } else if !m[a][c] && at_n[i][j] {
                split += 1;
                if below[a].dimension(tol) == lower {
                    split_full += 1;
                }
            }
        }
    }
    b.meta("realizable_below_n", idx.len());
    b.meta("pairs_identified_only_from_n", split);
    b.meta("full_dimensional_pairs_identified_only_from_n", split_full);

    let witness = raise_to_dimension(ell, lower, lower, tol, sub_seed(seed, u64::MAX))?;
    let mirror = witness.reflect();
    let distinct_below = !so_equivalent(&witness, &mirror, tol)?;
    let same_at_n = so_equivalent(&witness.embed(n)?, &mirror.embed(n)?, tol)?;
    b.meta("strictness_witness_dimension", witness.dimension(tol));
    if !(distinct_below && same_at_n) {
        let trial = b.report.trials;
        b.push_failure(
            trial,
            format!(
                "mirror pair of a {lower}-dimensional polygon: distinct in R^{lower} = {distinct_below}, identified in R^{n} = {same_at_n}"
            ),
            vec![witness, mirror],
        );
    }
    Ok(b.finish())
}

fn count_classes(matrix: &[Vec<bool>]) -> usize {
    let mut rep: Vec<usize> = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        if !rep.iter().any(|&r| row[r]) {
            rep.push(i);
        }
    }
    rep.len()
}

fn verify_border_singleton(
    ell: &EdgeLengths,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ExperimentReport> {
    let n = ell.len();
    let mut b = ReportBuilder::new("stabilization", ell, n, seed);
    b.meta("border", true);
    let classes = enumerate_degenerate_classes(ell, tol)?;
    b.meta("degenerate_classes", classes.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in 2..=4usize {
        let mut polygons = Vec::new();
        for class in &classes {
            let base = build_degenerate(ell, class, d, tol)?;
            polygons.push(base.reflect());
            for _ in 0..trials.max(1) {
                let r = linalg::haar_rotation(d, &mut rng);
                polygons.push(base.transform(&r)?);
            }
            polygons.push(base);
        }
        for (idx, p) in polygons.iter().enumerate() {
            b.report.trials += 1;
            let dim = p.dimension(tol);
            if dim != 1 {
                b.push_failure(idx, format!("border polygon in R^{d} has dimension {dim}"), vec![p.clone()]);
            } else if find_bend_site(p, tol).is_ok() {
                b.push_failure(idx, format!("border polygon in R^{d} offered a bend site"), vec![p.clone()]);
            }
        }
        let m = so_equivalence_matrix(&polygons, tol)?;
        for i in 0..polygons.len() {
            for j in (i + 1)..polygons.len() {
                if !m[i][j] {
                    b.push_failure(
                        i,
                        format!("border polygons {i} and {j} are not equivalent in R^{d}"),
                        vec![polygons[i].clone(), polygons[j].clone()],
                    );
                }
            }
        }
    }
    Ok(b.finish())
}

/// Independent count of 1-dimensional classes for equilateral `n`-gons:
/// `C(n, n/2) / 2` for even `n`, none for odd `n`.
fn equilateral_class_count(n: usize) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    let mut c: u64 = 1;
    for i in 0..(n / 2) as u64 {
        c = c * (n as u64 - i) / (i + 1);
    }
    c / 2
}

/// Enumerates the 1-dimensional classes, builds each in `R^2`, `R^3`, `R^4`,
/// and checks that distinct classes are never rotation-equivalent.
pub fn verify_degenerate_classes(ell: &EdgeLengths, tol: &ToleranceConfig) -> Result<ExperimentReport> {
    let n = ell.len();
    let classes = enumerate_degenerate_classes(ell, tol).map_err(|e| Error::Precondition(e.to_string()))?;
    let mut b = ReportBuilder::new("degenerate", ell, 4, 0);
    b.meta("classes", classes.len());
    b.meta(
        "patterns",
        classes.iter().take(MAX_PAIRWISE_CLASSES).map(|c| c.to_string()).collect::<Vec<_>>(),
    );

    let lengths = ell.as_slice();
    if lengths.iter().all(|&l| l == lengths[0]) {
        let expected = equilateral_class_count(n);
        b.meta("expected_classes", expected);
        if classes.len() as u64 != expected {
            b.push_failure(0, format!("found {} classes, expected {expected}", classes.len()), vec![]);
        }
    }

    let pairwise = classes.len() <= MAX_PAIRWISE_CLASSES;
    b.meta("pairwise_checked", pairwise);
    for d in 2..=4usize {
        let mut built = Vec::with_capacity(classes.len());
        for class in &classes {
            let p = build_degenerate(ell, class, d, tol)?;
            b.report.trials += 1;
            let dim = p.dimension(tol);
            if dim != 1 {
                b.push_failure(b.report.trials, format!("class {class} has dimension {dim} in R^{d}"), vec![p.clone()]);
            }
            built.push(p);
        }
        if !pairwise {
            continue;
        }
        for i in 0..built.len() {
            for j in (i + 1)..built.len() {
                b.report.trials += 1;
                let same = so_equivalent(&built[i], &built[j], tol)? || o_equivalent(&built[i], &built[j], tol)?;
                if same {
                    b.push_failure(
                        b.report.trials,
                        format!("classes {} and {} coincide in R^{d}", classes[i], classes[j]),
                        vec![built[i].clone(), built[j].clone()],
                    );
                }
            }
        }
    }
    Ok(b.finish())
}
