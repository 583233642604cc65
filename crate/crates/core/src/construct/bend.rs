//! Raising the dimension of a polygon by one: pick a vertex that lies in
//! the span of the others but off the line through its neighbours, then swing
//! it about that line out of the span.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_planar, require_interior};
use crate::error::{Error, Result};
use crate::lengths::EdgeLengths;
use crate::linalg;
use crate::polygon::Polygon;
use crate::tolerance::ToleranceConfig;

/// A bendable vertex `v_i` together with the circle it may swing along.
#[derive(Debug, Clone, PartialEq)]
pub struct BendSite {
    /// 1-based vertex index in `1..=n-1`.
    pub index: usize,
    /// Orthogonal projection of `v_i` onto the line through `v_{i-1}` and `v_{i+1}`.
    pub foot: DVector<f64>,
    /// Distance from `v_i` to `foot`.
    pub radius: f64,
    /// Unit direction of the line; `None` when the neighbours coincide and the
    /// line degenerates to the point `v_{i-1}`.
    pub line_dir: Option<DVector<f64>>,
}

/// Foot, radius and direction of the line through the neighbours of `v_i`.
fn pivot_geometry(p: &Polygon, i: usize, tol: &ToleranceConfig) -> (DVector<f64>, f64, Option<DVector<f64>>) {
    let v = p.vertex(i);
    let a = p.vertex(i - 1);
    let b = p.vertex(i + 1);
    let span = &b - &a;
    let len = span.norm();
    if len <= tol.eps_rank * p.edge_lengths().perimeter() {
        let radius = (&v - &a).norm();
        return (a, radius, None);
    }
    let dir = span / len;
    let foot = &a + &dir * (&v - &a).dot(&dir);
    let radius = (&v - &foot).norm();
    (foot, radius, Some(dir))
}

/// Orthonormal basis of `U_i`, the span of every vertex except `v_i`.
fn others_basis(p: &Polygon, i: usize, tol: &ToleranceConfig) -> DMatrix<f64> {
    let m = p.vertex_matrix();
    let keep: Vec<usize> = (0..m.ncols()).filter(|&c| c != i - 1).collect();
    let others = m.select_columns(&keep);
    linalg::column_basis(&others, tol.eps_rank)
}

/// The site at vertex `i`, if `v_i` lies in `U_i` and off the line through its
/// neighbours.
fn site_at(p: &Polygon, i: usize, tol: &ToleranceConfig) -> Option<BendSite> {
    let v = p.vertex(i);
    let basis = others_basis(p, i, tol);
    if linalg::reject(&v, &basis).norm() > tol.eps_rank * v.norm() {
        return None;
    }
    let (foot, radius, line_dir) = pivot_geometry(p, i, tol);
    if radius <= tol.eps_rank * p.edge_lengths().perimeter() {
        return None;
    }
    Some(BendSite { index: i, foot, radius, line_dir })
}

fn check_bendable(p: &Polygon, tol: &ToleranceConfig) -> Result<usize> {
    let dim = p.dimension(tol);
    let n = p.n();
    let d = p.ambient_dim();
    if dim < 2 {
        return Err(Error::Precondition(format!(
            "polygon is {dim}-dimensional; bending needs dimension at least 2"
        )));
    }
    if dim >= n - 1 {
        return Err(Error::Precondition(format!(
            "polygon already has the maximal dimension n-1 = {}",
            n - 1
        )));
    }
    if dim >= d {
        return Err(Error::Precondition(format!(
            "polygon dimension {dim} fills the ambient R^{d}; nothing to bend into"
        )));
    }
    Ok(dim)
}

/// Every bendable vertex, in increasing index order.
pub fn bend_sites(p: &Polygon, tol: &ToleranceConfig) -> Result<Vec<BendSite>> {
    check_bendable(p, tol)?;
    Ok((1..p.n()).filter_map(|i| site_at(p, i, tol)).collect())
}

/// The bendable vertex with the smallest index.
pub fn find_bend_site(p: &Polygon, tol: &ToleranceConfig) -> Result<BendSite> {
    check_bendable(p, tol)?;
    (1..p.n())
        .find_map(|i| site_at(p, i, tol))
        .ok_or_else(|| Error::Numerical("no bendable vertex found although one must exist".into()))
}

/// Uniform random unit vector orthogonal to `U_i`; such a direction is also
/// orthogonal to the pivot line, which lies in `U_i`.
pub fn bend_direction(
    p: &Polygon,
    site: &BendSite,
    rng: &mut impl rand::Rng,
    tol: &ToleranceConfig,
) -> Option<DVector<f64>> {
    let basis = others_basis(p, site.index, tol);
    linalg::random_unit_orthogonal(p.ambient_dim(), &basis, rng)
}

/// Replaces `v_i` by `w = foot + radius * u`.
///
/// `u` must be a unit vector outside `U_i` and orthogonal to the pivot line;
/// the second condition is what keeps `|w - v_{i-1}|` and `|w - v_{i+1}|`
/// equal to the old edge lengths.
pub fn bend(p: &Polygon, site: &BendSite, u: &DVector<f64>, tol: &ToleranceConfig) -> Result<Polygon> {
    check_bendable(p, tol)?;
    let d = p.ambient_dim();
    let i = site.index;
    if i == 0 || i >= p.n() {
        return Err(Error::Precondition(format!("bend site index {i} out of range 1..={}", p.n() - 1)));
    }
    if u.len() != d {
        return Err(Error::InvalidDirection(format!("direction has {} coordinates, expected {d}", u.len())));
    }
    if (u.norm() - 1.0).abs() > tol.eps_rank {
        return Err(Error::InvalidDirection(format!("direction is not a unit vector (norm {})", u.norm())));
    }
    let Some(current) = site_at(p, i, tol) else {
        return Err(Error::Precondition(format!("vertex {i} is not bendable in this polygon")));
    };
    let scale = tol.eps_align * p.edge_lengths().perimeter();
    if (&current.foot - &site.foot).norm() > scale || (current.radius - site.radius).abs() > scale {
        return Err(Error::Precondition(format!("bend site at vertex {i} does not belong to this polygon")));
    }
    let basis = others_basis(p, i, tol);
    if linalg::reject(u, &basis).norm() <= tol.eps_rank {
        return Err(Error::InvalidDirection(format!(
            "direction lies in the span of the vertices other than v_{i}"
        )));
    }
    if let Some(dir) = &current.line_dir {
        let along = u.dot(dir);
        if along.abs() > tol.eps_rank {
            return Err(Error::InvalidDirection(format!(
                "direction has component {along:e} along the pivot line; it must be orthogonal"
            )));
        }
    }
    let w = &current.foot + u * current.radius;
    let mut m = p.vertex_matrix().clone();
    m.set_column(i - 1, &w);
    Ok(Polygon::from_parts(p.edge_lengths().clone(), m))
}

/// A `k`-dimensional polygon in `R^d`: the planar cyclic polygon, padded to
/// `R^d`, bent `k - 2` times at the first available site with random
/// directions orthogonal to the span.
pub fn raise_to_dimension(
    ell: &EdgeLengths,
    k: usize,
    d: usize,
    tol: &ToleranceConfig,
    seed: u64,
) -> Result<Polygon> {
    require_interior(ell, "raising dimension")?;
    let n = ell.len();
    let top = d.min(n - 1);
    if d < 2 || k < 2 || k > top {
        return Err(Error::Precondition(format!(
            "target dimension {k} outside 2..={top} for n = {n}, d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = build_planar(ell, tol)?.embed(d)?;
    let mut dim = p.dimension(tol);
    while dim < k {
        let site = find_bend_site(&p, tol)?;
        let u = bend_direction(&p, &site, &mut rng, tol)
            .ok_or_else(|| Error::Numerical("no direction outside the span".into()))?;
        p = bend(&p, &site, &u, tol)?;
        let next = p.dimension(tol);
        if next != dim + 1 {
            return Err(Error::Numerical(format!("bend produced dimension {next} from {dim}")));
        }
        dim = next;
    }
    Ok(p)
}
