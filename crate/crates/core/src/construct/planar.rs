use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;

use super::require_interior;
use crate::error::{Error, Result};
use crate::lengths::EdgeLengths;
use crate::polygon::Polygon;
use crate::tolerance::ToleranceConfig;

/// The convex polygon inscribed in a circle with the given edge lengths.
#[derive(Debug, Clone)]
pub struct CyclicRealization {
    pub polygon: Polygon,
    pub circumradius: f64,
    /// Whether the circumcenter lies inside the polygon (it lies beyond the
    /// longest edge otherwise).
    pub center_inside: bool,
}

/// Convex planar realization of an interior edge-length vector: all
/// vertices on one circle, the first edge along the positive x-axis, turning
/// counterclockwise.
pub fn build_planar(ell: &EdgeLengths, tol: &ToleranceConfig) -> Result<Polygon> {
    cyclic_realization(ell, tol).map(|c| c.polygon)
}

/// Solves for the cyclic polygon.
///
/// The unknown is the arc `phi` in `(0, 2 pi)` subtended by the longest edge
/// `l_m`; the circumradius is `R = l_m / (2 sin(phi / 2))` and every other
/// edge subtends the minor arc `2 asin((l_i / l_m) sin(phi / 2))`. The arcs
/// must add to a full turn. `phi <= pi` is the case with the center inside,
/// `phi > pi` the case with the center beyond the longest edge. Each arc has
/// derivative at most 1 in `phi`, so the closing condition is well
/// conditioned even when the center sits on the longest edge.
pub fn cyclic_realization(ell: &EdgeLengths, tol: &ToleranceConfig) -> Result<CyclicRealization> {
    require_interior(ell, "planar construction")?;
    let lengths = ell.as_slice();
    let m = ell.argmax();
    let l_max = lengths[m];

    let arcs = |phi: f64| -> Vec<f64> {
        let s = (0.5 * phi).sin();
        lengths
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == m {
                    phi
                } else {
                    2.0 * ((l / l_max) * s).clamp(-1.0, 1.0).asin()
                }
            })
            .collect()
    };
    let excess = |phi: f64| -> f64 { arcs(phi).iter().sum::<f64>() - TAU };

    // excess(0) = -2 pi; excess -> 0+ as phi -> 2 pi for interior lengths.
    // Bisection runs until the bracket stops shrinking; eps_root bounds the
    // bracket width that is accepted.
    let (mut lo, mut hi) = (0.0_f64, TAU);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = 0.5 * (lo + hi);
    if !(phi > 0.0 && phi < TAU) || hi - lo > tol.eps_root * TAU {
        return Err(Error::Numerical(format!("cyclic polygon bisection left its bracket for ({ell})")));
    }
    let theta = arcs(phi);

    // Edge i points along the tangent at the middle of its arc.
    let n = lengths.len();
    let mut psi = -FRAC_PI_2 - 0.5 * theta[0];
    let mut directions = Vec::with_capacity(n);
    for &t in &theta {
        directions.push(psi + 0.5 * t + FRAC_PI_2);
        psi += t;
    }
    let mut vertices = DMatrix::zeros(2, n - 1);
    let (mut x, mut y) = (0.0, 0.0);
    for k in 0..n - 1 {
        x += lengths[k] * directions[k].cos();
        y += lengths[k] * directions[k].sin();
        vertices[(0, k)] = x;
        vertices[(1, k)] = y;
    }
    let gap = ((x + lengths[n - 1] * directions[n - 1].cos()).powi(2)
        + (y + lengths[n - 1] * directions[n - 1].sin()).powi(2))
    .sqrt();
    if gap > tol.eps_align * ell.perimeter() {
        return Err(Error::Numerical(format!(
            "cyclic polygon for ({ell}) fails to close: gap {gap:e}"
        )));
    }
    let polygon = Polygon::from_matrix(ell.clone(), vertices, tol)?;
    Ok(CyclicRealization {
        polygon,
        circumradius: l_max / (2.0 * (0.5 * phi).sin()),
        center_inside: phi <= PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn ell(v: &[f64]) -> EdgeLengths {
        EdgeLengths::new(v.to_vec()).unwrap()
    }

    #[test]
    fn square() {
        let c = cyclic_realization(&ell(&[1.0; 4]), &tol()).unwrap();
        assert_relative_eq!(c.circumradius, 2f64.sqrt() / 2.0, epsilon = 1e-10);
        assert!(c.center_inside);
        let expected = [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        for (v, e) in c.polygon.vertices().iter().zip(expected) {
            assert_relative_eq!(v[0], e[0], epsilon = 1e-10);
            assert_relative_eq!(v[1], e[1], epsilon = 1e-10);
        }
        assert_eq!(c.polygon.dimension(&tol()), 2);
    }

    #[test]
    fn right_triangle() {
        let c = cyclic_realization(&ell(&[3.0, 4.0, 5.0]), &tol()).unwrap();
        assert_relative_eq!(c.circumradius, 2.5, epsilon = 1e-9);
        assert!(c.polygon.relative_edge_error() < 1e-12);
    }

    #[test]
    fn obtuse_case_puts_center_outside() {
        let c = cyclic_realization(&ell(&[1.0, 1.0, 1.9]), &tol()).unwrap();
        assert!(!c.center_inside);
        // Circumradius of the isosceles triangle: a^2 / sqrt(4a^2 - b^2).
        assert_relative_eq!(c.circumradius, 1.0 / (4.0f64 - 1.9 * 1.9).sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn nearly_degenerate_lengths_still_close() {
        let e = ell(&[1.0, 1.0, 1.0, 2.999_999]);
        let p = build_planar(&e, &tol()).unwrap();
        assert!(p.relative_edge_error() < 1e-9);
        assert_eq!(p.dimension(&tol()), 2);
    }

    #[test]
    fn refuses_non_interior() {
        assert!(matches!(build_planar(&ell(&[2.0, 1.0, 1.0]), &tol()), Err(Error::Precondition(_))));
        assert!(matches!(build_planar(&ell(&[5.0, 1.0, 1.0]), &tol()), Err(Error::Precondition(_))));
    }
}
