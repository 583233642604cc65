use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, StandardNormal};

use super::{build_planar, require_interior};
use crate::error::{Error, Result};
use crate::lengths::EdgeLengths;
use crate::linalg;
use crate::polygon::Polygon;
use crate::tolerance::ToleranceConfig;

/// Random polygon in `R^d` with edge lengths `ell`, deterministic in `seed`.
///
/// Starts from the planar cyclic polygon and applies a geometric number of
/// moves (mean `n`). Each move picks a vertex uniformly among those off the
/// line through their neighbours and swings it about that line to a uniform
/// random position on its circle. When the vertex lies in the span of the
/// others and the new direction leaves that span, the move is a bend and the
/// dimension grows by one. A Haar-random rotation is applied last.
///
/// This is a coverage device, not a uniform sampler of the polygon space.
pub fn sample(ell: &EdgeLengths, d: usize, seed: u64, tol: &ToleranceConfig) -> Result<Polygon> {
    require_interior(ell, "sampling")?;
    if d < 2 {
        return Err(Error::Precondition(format!("ambient dimension must be at least 2, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ell.len();
    let moves = Geometric::new(1.0 / (n as f64 + 1.0))
        .expect("probability in (0, 1]")
        .sample(&mut rng);
    let mut p = build_planar(ell, tol)?.embed(d)?;
    let perimeter = ell.perimeter();
    for _ in 0..moves {
        let mut candidates = Vec::new();
        for i in 1..n {
            let v = p.vertex(i);
            let a = p.vertex(i - 1);
            let b = p.vertex(i + 1);
            let span = &b - &a;
            let len = span.norm();
            let (foot, dir) = if len <= tol.eps_rank * perimeter {
                (a, None)
            } else {
                let dir = span / len;
                (&a + &dir * (&v - &a).dot(&dir), Some(dir))
            };
            let radius = (&v - &foot).norm();
            if radius > tol.eps_rank * perimeter {
                candidates.push((i, foot, radius, dir));
            }
        }
        if candidates.is_empty() {
            break;
        }
        let (i, foot, radius, dir) = &candidates[rng.random_range(0..candidates.len())];
        let Some(u) = random_unit_normal(d, dir.as_ref(), &mut rng) else {
            continue;
        };
        let w = foot + u * *radius;
        let mut m = p.vertex_matrix().clone();
        m.set_column(i - 1, &w);
        p = Polygon::from_parts(ell.clone(), m);
    }
    let rotation = linalg::haar_rotation(d, &mut rng);
    p = p.transform(&rotation)?;
    if p.relative_edge_error() > tol.eps_align {
        return Err(Error::Numerical(format!(
            "sampled polygon drifted from its edge lengths by {:e}",
            p.relative_edge_error()
        )));
    }
    Ok(p)
}

/// Uniform unit vector orthogonal to `dir` (or on the whole sphere).
fn random_unit_normal(d: usize, dir: Option<&DVector<f64>>, rng: &mut impl Rng) -> Option<DVector<f64>> {
    for _ in 0..64 {
        let mut g = DVector::<f64>::from_fn(d, |_, _| rng.sample(StandardNormal));
        if let Some(dir) = dir {
            let along = g.dot(dir);
            g -= dir * along;
        }
        let norm = g.norm();
        if norm > 1e-6 {
            return Some(g / norm);
        }
    }
    None
}
