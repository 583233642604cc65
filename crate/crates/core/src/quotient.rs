//! Rotation and reflection classes of polygons, and the maps between moduli
//! spaces of consecutive ambient dimensions.
//!
//! Equivalence is decided on the Gram matrix, which determines a polygon up
//! to O(d). Inside one O(d)-orbit the SO(d)-classes are told apart by the
//! sign of a pivoted vertex determinant, which exists only when the polygon
//! fills its ambient space. Orthogonal Procrustes alignment is kept as an
//! independent cross-check.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramForm;
use crate::lengths::EdgeLengths;
use crate::linalg;
use crate::polygon::Polygon;
use crate::tolerance::ToleranceConfig;

/// Canonical representative of a polygon's class in the moduli space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModuliPointRecord")]
pub struct ModuliPoint {
    pub edge_lengths: EdgeLengths,
    pub ambient_dim: usize,
    pub rank: usize,
    /// `Some(+1 | -1)` exactly when `rank == ambient_dim`.
    pub orientation: Option<i8>,
    pub gram: GramForm,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuliPointRecord {
    edge_lengths: EdgeLengths,
    ambient_dim: usize,
    rank: usize,
    orientation: Option<i8>,
    gram: GramForm,
}

impl TryFrom<ModuliPointRecord> for ModuliPoint {
    type Error = Error;

    fn try_from(r: ModuliPointRecord) -> Result<Self> {
        let n = r.edge_lengths.len();
        if r.ambient_dim < 2 {
            return Err(Error::InvalidPolygon("ambient_dim must be at least 2".into()));
        }
        if r.gram.size() != n - 1 {
            return Err(Error::InvalidPolygon(format!(
                "gram must be {0}x{0} for {n} edges",
                n - 1
            )));
        }
        if r.rank == 0 || r.rank > r.ambient_dim.min(n - 1) {
            return Err(Error::InvalidPolygon(format!(
                "rank {} outside 1..={}",
                r.rank,
                r.ambient_dim.min(n - 1)
            )));
        }
        match (r.rank == r.ambient_dim, r.orientation) {
            (true, Some(1 | -1)) | (false, None) => {}
            _ => {
                return Err(Error::InvalidPolygon(
                    "orientation must be 1 or -1 exactly when rank equals ambient_dim".into(),
                ))
            }
        }
        Ok(Self {
            edge_lengths: r.edge_lengths,
            ambient_dim: r.ambient_dim,
            rank: r.rank,
            orientation: r.orientation,
            gram: r.gram,
        })
    }
}

impl ModuliPoint {
    /// Same class: Gram forms agree within `eps_gram`, and rank, ambient
    /// dimension and orientation match exactly.
    pub fn same_point(&self, other: &Self, tol: &ToleranceConfig) -> bool {
        self.edge_lengths == other.edge_lengths
            && self.ambient_dim == other.ambient_dim
            && self.rank == other.rank
            && self.orientation == other.orientation
            && self.gram.approx_eq(&other.gram, tol.eps_gram)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("moduli point serializes")
    }
}

fn check_comparable(p: &Polygon, q: &Polygon) -> Result<()> {
    if p.edge_lengths() != q.edge_lengths() {
        return Err(Error::Mismatch(format!(
            "edge lengths differ: ({}) vs ({})",
            p.edge_lengths(),
            q.edge_lengths()
        )));
    }
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::Mismatch(format!(
            "ambient dimensions differ: {} vs {}",
            p.ambient_dim(),
            q.ambient_dim()
        )));
    }
    Ok(())
}

/// Vertex indices (0-based) whose columns are used for the orientation sign
/// of a full-dimensional polygon; chosen from the Gram matrix alone.
pub fn orientation_pivots(p: &Polygon, tol: &ToleranceConfig) -> Vec<usize> {
    linalg::gram_pivots(p.gram().matrix(), p.ambient_dim(), tol.eps_rank)
}

/// Chirality sign: `None` when the polygon spans less than its ambient space
/// (its mirror image is then a rotation of it), otherwise the sign of the
/// determinant of the pivot vertex columns.
pub fn orientation_sign(p: &Polygon, tol: &ToleranceConfig) -> Option<i8> {
    let d = p.ambient_dim();
    if p.dimension(tol) < d {
        return None;
    }
    let pivots = orientation_pivots(p, tol);
    if pivots.len() < d {
        return None;
    }
    let det = p.vertex_matrix().select_columns(&pivots).determinant();
    Some(if det < 0.0 { -1 } else { 1 })
}

/// Same O(d)-orbit: Gram matrices agree within `eps_gram`.
pub fn o_equivalent(p: &Polygon, q: &Polygon, tol: &ToleranceConfig) -> Result<bool> {
    check_comparable(p, q)?;
    Ok(p.gram().approx_eq(&q.gram(), tol.eps_gram))
}

/// Same SO(d)-orbit: O(d)-equivalent, and either not full-dimensional or of
/// equal orientation.
pub fn so_equivalent(p: &Polygon, q: &Polygon, tol: &ToleranceConfig) -> Result<bool> {
    if !o_equivalent(p, q, tol)? {
        return Ok(false);
    }
    if p.dimension(tol) < p.ambient_dim() {
        return Ok(true);
    }
    Ok(orientation_sign(p, tol) == orientation_sign(q, tol))
}

fn points_so_equivalent(a: &ModuliPoint, b: &ModuliPoint, tol: &ToleranceConfig) -> bool {
    a.gram.approx_eq(&b.gram, tol.eps_gram)
        && (a.rank < a.ambient_dim || a.orientation == b.orientation)
}

/// Pairwise [`so_equivalent`] over a list of polygons sharing edge lengths and
/// ambient dimension; invariants are computed once per polygon.
pub fn so_equivalence_matrix(polygons: &[Polygon], tol: &ToleranceConfig) -> Result<Vec<Vec<bool>>> {
    if let Some(first) = polygons.first() {
        for p in &polygons[1..] {
            check_comparable(first, p)?;
        }
    }
    let points: Vec<ModuliPoint> = polygons.iter().map(|p| moduli_point(p, tol)).collect();
    Ok(points
        .iter()
        .map(|a| points.iter().map(|b| points_so_equivalent(a, b, tol)).collect())
        .collect())
}

/// Result of an orthogonal Procrustes fit.
#[derive(Debug, Clone)]
pub struct Alignment {
    /// `|T V_P - V_Q|_F` at the optimum.
    pub residual: f64,
    pub transform: DMatrix<f64>,
}

/// Orthogonal (or, with `proper_only`, special orthogonal) `T` minimizing
/// `|T V_P - V_Q|_F`, from the SVD of `V_Q V_P^T`. In the proper case a
/// negative determinant is fixed by flipping the direction belonging to the
/// smallest singular value.
pub fn align(p: &Polygon, q: &Polygon, proper_only: bool, _tol: &ToleranceConfig) -> Result<Alignment> {
    check_comparable(p, q)?;
    let vp = p.vertex_matrix();
    let vq = q.vertex_matrix();
    let svd = linalg::svd(&(vq * vp.transpose()));
    let mut u = svd.u;
    let mut t = &u * &svd.v_t;
    if proper_only && t.determinant() < 0.0 {
        // Singular values are sorted, so the last direction costs least to flip.
        u.column_mut(u.ncols() - 1).neg_mut();
        t = &u * &svd.v_t;
    }
    let residual = (&t * vp - vq).norm();
    Ok(Alignment { residual, transform: t })
}

/// Point of the moduli space represented by `p`.
pub fn moduli_point(p: &Polygon, tol: &ToleranceConfig) -> ModuliPoint {
    ModuliPoint {
        edge_lengths: p.edge_lengths().clone(),
        ambient_dim: p.ambient_dim(),
        rank: p.dimension(tol),
        orientation: orientation_sign(p, tol),
        gram: p.gram(),
    }
}

/// Image under the map induced by embedding `R^d` into `R^{d+1}`. The rank
/// is at most `d`, so the image never carries an orientation.
pub fn phi(mp: &ModuliPoint) -> ModuliPoint {
    ModuliPoint {
        edge_lengths: mp.edge_lengths.clone(),
        ambient_dim: mp.ambient_dim + 1,
        rank: mp.rank,
        orientation: None,
        gram: mp.gram.clone(),
    }
}

/// Preimage of `image` under the map from `R^{d}` with `d = image.ambient_dim - 1`.
pub fn phi_fiber(image: &ModuliPoint, tol: &ToleranceConfig) -> Vec<ModuliPoint> {
    if image.ambient_dim < 3 {
        return Vec::new();
    }
    fiber_over(image, image.ambient_dim - 1, tol)
}

/// Preimage of `image` in the moduli space of `R^d`, `2 <= d < image.ambient_dim`,
/// under the composite of the embedding maps.
///
/// Rank below `d`: a single point. Rank `d`: the two mirror classes. Rank
/// above `d`: empty, the point is not in the image.
pub fn fiber_over(image: &ModuliPoint, d: usize, _tol: &ToleranceConfig) -> Vec<ModuliPoint> {
    if d < 2 || d >= image.ambient_dim {
        return Vec::new();
    }
    let point = |orientation| ModuliPoint {
        edge_lengths: image.edge_lengths.clone(),
        ambient_dim: d,
        rank: image.rank,
        orientation,
        gram: image.gram.clone(),
    };
    match image.rank.cmp(&d) {
        std::cmp::Ordering::Less => vec![point(None)],
        std::cmp::Ordering::Equal => vec![point(Some(1)), point(Some(-1))],
        std::cmp::Ordering::Greater => Vec::new(),
    }
}

/// Explicit polygon in `R^d` whose class maps onto the class of `q`, when
/// `dim(q) <= d`: coordinates in an orthonormal basis of the span, padded.
pub fn preimage(q: &Polygon, d: usize, tol: &ToleranceConfig) -> Result<Option<Polygon>> {
    if d < 2 {
        return Err(Error::Precondition(format!("ambient dimension must be at least 2, got {d}")));
    }
    if q.dimension(tol) > d {
        return Ok(None);
    }
    q.project_to_span(tol).embed(d).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_planar, raise_to_dimension};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn unit4() -> EdgeLengths {
        EdgeLengths::new(vec![1.0; 4]).unwrap()
    }

    fn square2() -> Polygon {
        Polygon::new(unit4(), 2, vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]], &tol()).unwrap()
    }

    fn bent_square() -> Polygon {
        let h = 2f64.sqrt() / 2.0;
        Polygon::new(unit4(), 3, vec![vec![0.5, 0.5, h], vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0]], &tol())
            .unwrap()
    }

    fn collinear2() -> Polygon {
        Polygon::new(unit4(), 2, vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.0]], &tol()).unwrap()
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation_pivots(&square2(), &tol()), vec![0, 1]);
        assert_eq!(orientation_sign(&square2(), &tol()), Some(1));
        assert_eq!(orientation_sign(&square2().reflect(), &tol()), Some(-1));
        assert_eq!(orientation_sign(&square2().embed(3).unwrap(), &tol()), None);
    }

    #[test]
    fn equivalence_examples() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = linalg::haar_rotation(2, &mut rng);
        let sq = square2();
        assert!(o_equivalent(&sq, &sq.transform(&r).unwrap(), &t).unwrap());
        assert!(o_equivalent(&sq, &sq.reflect(), &t).unwrap());
        assert!(!o_equivalent(&sq, &collinear2(), &t).unwrap());

        let sq3 = sq.embed(3).unwrap();
        assert!(so_equivalent(&sq3, &sq3.reflect(), &t).unwrap());
        assert!(!so_equivalent(&sq, &sq.reflect(), &t).unwrap());
        assert!(!so_equivalent(&bent_square(), &bent_square().reflect(), &t).unwrap());
        assert!(so_equivalent(&sq, &sq.transform(&r).unwrap(), &t).unwrap());

        assert!(o_equivalent(&sq, &sq3, &t).is_err());
        let other = build_planar(&EdgeLengths::new(vec![1.0, 1.0, 1.0, 1.5]).unwrap(), &t).unwrap();
        assert!(so_equivalent(&sq, &other, &t).is_err());
    }

    #[test]
    fn alignment_examples() {
        let t = tol();
        let sq = square2();
        let a = align(&sq, &sq, true, &t).unwrap();
        assert!(a.residual < 1e-12);
        assert!((&a.transform - DMatrix::identity(2, 2)).abs().max() < 1e-12);

        assert!(align(&sq, &sq.reflect(), true, &t).unwrap().residual > 0.1);
        assert!(align(&sq, &sq.reflect(), false, &t).unwrap().residual < 1e-12);

        // Mirror in the first coordinate of the square in R^3.
        let sq3 = sq.embed(3).unwrap();
        let flip = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0]));
        let mirror = sq3.transform(&flip).unwrap();
        let a = align(&sq3, &mirror, true, &t).unwrap();
        assert!(a.residual <= t.eps_align * 4.0);
        assert!((a.transform.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_and_fibers() {
        let t = tol();
        let mp = moduli_point(&square2(), &t);
        assert_eq!(mp.orientation, Some(1));
        let img = phi(&mp);
        assert_eq!(img.ambient_dim, 3);
        assert_eq!(img.orientation, None);
        assert_eq!(img.gram, mp.gram);
        assert_eq!(phi(&img).gram, mp.gram);

        let b = moduli_point(&bent_square(), &t);
        let bm = moduli_point(&bent_square().reflect(), &t);
        assert_eq!(b.orientation.unwrap(), -bm.orientation.unwrap());
        assert!(phi(&b).same_point(&phi(&bm), &t));

        let square4 = moduli_point(&square2().embed(4).unwrap(), &t);
        assert_eq!(phi_fiber(&square4, &t).len(), 1);
        let bent4 = moduli_point(&bent_square().embed(4).unwrap(), &t);
        assert_eq!(phi_fiber(&bent4, &t).len(), 2);
        assert!(phi_fiber(&moduli_point(&bent_square(), &t), &t).is_empty());
    }

    #[test]
    fn moduli_point_examples() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = raise_to_dimension(&unit4(), 3, 3, &t, 2).unwrap();
        let r = linalg::haar_rotation(3, &mut rng);
        assert!(moduli_point(&p, &t).same_point(&moduli_point(&p.transform(&r).unwrap(), &t), &t));
        assert!(!moduli_point(&square2(), &t).same_point(&moduli_point(&square2().reflect(), &t), &t));
        let sq3 = square2().embed(3).unwrap();
        assert!(moduli_point(&sq3, &t).same_point(&moduli_point(&sq3.reflect(), &t), &t));
    }

    #[test]
    fn moduli_point_json() {
        let t = tol();
        let mp = moduli_point(&square2(), &t);
        let s = mp.to_json();
        assert_eq!(
            s,
            r#"{"edge_lengths":[1.0,1.0,1.0,1.0],"ambient_dim":2,"rank":2,"orientation":1,"gram":[[1.0,1.0,0.0],[1.0,2.0,1.0],[0.0,1.0,1.0]]}"#
        );
        let back: ModuliPoint = serde_json::from_str(&s).unwrap();
        assert!(back.same_point(&mp, &t));
        let bad = s.replace(r#""orientation":1"#, r#""orientation":null"#);
        assert!(serde_json::from_str::<ModuliPoint>(&bad).is_err());
    }

    #[test]
    fn explicit_preimage() {
        let t = tol();
        let q = raise_to_dimension(&unit4(), 2, 4, &t, 0).unwrap();
        let p = preimage(&q, 3, &t).unwrap().unwrap();
        assert_eq!(p.ambient_dim(), 3);
        assert!(phi(&moduli_point(&p, &t)).same_point(&moduli_point(&q, &t), &t));
        let full = raise_to_dimension(&unit4(), 3, 3, &t, 0).unwrap();
        assert!(preimage(&full, 2, &t).unwrap().is_none());
    }
}
