//! Polygons in `R^d` with prescribed edge lengths.
//!
//! A polygon is stored as its `n - 1` free vertices `v_1 .. v_{n-1}`; the
//! closing vertex `v_0 = v_n = 0` is the origin and is never stored.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramForm;
use crate::lengths::EdgeLengths;
use crate::linalg;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    edge_lengths: EdgeLengths,
    /// `d x (n - 1)`, one vertex per column.
    vertices: DMatrix<f64>,
}

/// On-disk form: `{"edge_lengths": [...], "ambient_dim": d, "vertices": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonRecord {
    edge_lengths: EdgeLengths,
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl Polygon {
    /// Builds a polygon from vertex coordinates, checking every edge length
    /// to within `eps_align` times the perimeter.
    pub fn new(
        edge_lengths: EdgeLengths,
        ambient_dim: usize,
        vertices: Vec<Vec<f64>>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let n = edge_lengths.len();
        if ambient_dim < 2 {
            return Err(Error::InvalidPolygon(format!(
                "ambient dimension must be at least 2, got {ambient_dim}"
            )));
        }
        if vertices.len() != n - 1 {
            return Err(Error::InvalidPolygon(format!(
                "{n} edges need {} vertices, got {}",
                n - 1,
                vertices.len()
            )));
        }
        for (k, v) in vertices.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {} has {} coordinates, expected {ambient_dim}",
                    k + 1,
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidPolygon(format!("vertex {} is not finite", k + 1)));
            }
        }
        let flat: Vec<f64> = vertices.into_iter().flatten().collect();
        let matrix = DMatrix::from_column_slice(ambient_dim, n - 1, &flat);
        Self::from_matrix(edge_lengths, matrix, tol)
    }

    /// Like [`Polygon::new`] with the vertices already laid out as columns.
    pub fn from_matrix(
        edge_lengths: EdgeLengths,
        vertices: DMatrix<f64>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        if vertices.ncols() + 1 != edge_lengths.len() {
            return Err(Error::InvalidPolygon(format!(
                "{} edges need {} vertices, got {}",
                edge_lengths.len(),
                edge_lengths.len() - 1,
                vertices.ncols()
            )));
        }
        if vertices.nrows() < 2 {
            return Err(Error::InvalidPolygon(format!(
                "ambient dimension must be at least 2, got {}",
                vertices.nrows()
            )));
        }
        let p = Self { edge_lengths, vertices };
        let (worst_edge, err) = p.worst_edge_error();
        let limit = tol.eps_align * p.edge_lengths.perimeter();
        if err.is_nan() || err > limit {
            return Err(Error::InvalidPolygon(format!(
                "edge {worst_edge} deviates from its prescribed length by {err:e} (limit {limit:e})"
            )));
        }
        Ok(p)
    }

    /// Constructs without checking edge lengths; callers guarantee validity.
    pub(crate) fn from_parts(edge_lengths: EdgeLengths, vertices: DMatrix<f64>) -> Self {
        debug_assert_eq!(vertices.ncols() + 1, edge_lengths.len());
        Self { edge_lengths, vertices }
    }

    pub fn edge_lengths(&self) -> &EdgeLengths {
        &self.edge_lengths
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices.nrows()
    }

    /// Number of edges `n`.
    pub fn n(&self) -> usize {
        self.edge_lengths.len()
    }

    /// Vertex matrix, `d x (n - 1)`.
    pub fn vertex_matrix(&self) -> &DMatrix<f64> {
        &self.vertices
    }

    /// Vertex `v_k` for `k` in `0..=n`; `v_0` and `v_n` are the origin.
    pub fn vertex(&self, k: usize) -> DVector<f64> {
        let n = self.n();
        assert!(k <= n, "vertex index {k} out of range 0..={n}");
        if k == 0 || k == n {
            DVector::zeros(self.ambient_dim())
        } else {
            self.vertices.column(k - 1).into_owned()
        }
    }

    pub fn vertices(&self) -> Vec<Vec<f64>> {
        self.vertices
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect()
    }

    /// Largest absolute edge-length error, with the 1-based edge it occurs on.
    pub fn worst_edge_error(&self) -> (usize, f64) {
        let mut worst = (1, 0.0);
        for i in 1..=self.n() {
            let len = (self.vertex(i) - self.vertex(i - 1)).norm();
            let err = (len - self.edge_lengths.edge(i)).abs();
            if err > worst.1 || err.is_nan() {
                worst = (i, err);
            }
        }
        worst
    }

    /// Largest edge-length error relative to the perimeter.
    pub fn relative_edge_error(&self) -> f64 {
        self.worst_edge_error().1 / self.edge_lengths.perimeter()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(&self.vertices)
    }

    /// Dimension of the linear span of the vertices: the number of singular
    /// values of the vertex matrix above `eps_rank * sigma_1`.
    pub fn dimension(&self, tol: &ToleranceConfig) -> usize {
        linalg::numerical_rank(&self.vertices, tol.eps_rank)
    }

    /// `sigma_k / sigma_1` where `k` is the polygon dimension.
    pub fn conditioning(&self, tol: &ToleranceConfig) -> f64 {
        let sv = self.singular_values();
        let k = linalg::rank_from_singular_values(&sv, tol.eps_rank);
        if k == 0 {
            return 0.0;
        }
        sv[k - 1] / sv[0]
    }

    pub fn is_well_conditioned(&self, tol: &ToleranceConfig) -> bool {
        self.conditioning(tol) >= tol.cond_floor
    }

    pub fn gram(&self) -> GramForm {
        GramForm::from_vertices(&self.vertices)
    }

    /// Zero-pads every vertex to `target_dim` coordinates.
    pub fn embed(&self, target_dim: usize) -> Result<Self> {
        let d = self.ambient_dim();
        if target_dim < d {
            return Err(Error::Precondition(format!(
                "cannot embed a polygon in R^{d} into R^{target_dim}"
            )));
        }
        let mut m = DMatrix::zeros(target_dim, self.vertices.ncols());
        m.rows_mut(0, d).copy_from(&self.vertices);
        Ok(Self::from_parts(self.edge_lengths.clone(), m))
    }

    /// Rewrites the polygon in an orthonormal basis of its vertex span, so the
    /// result lives in `R^k` with `k = max(2, dimension)`.
    pub fn project_to_span(&self, tol: &ToleranceConfig) -> Self {
        let basis = linalg::column_basis(&self.vertices, tol.eps_rank);
        let coords = basis.tr_mul(&self.vertices);
        let k = coords.nrows();
        let target = k.max(2);
        let mut m = DMatrix::zeros(target, self.vertices.ncols());
        m.rows_mut(0, k).copy_from(&coords);
        Self::from_parts(self.edge_lengths.clone(), m)
    }

    /// Negates the last coordinate of every vertex.
    pub fn reflect(&self) -> Self {
        let mut m = self.vertices.clone();
        let last = m.nrows() - 1;
        m.row_mut(last).neg_mut();
        Self::from_parts(self.edge_lengths.clone(), m)
    }

    /// Applies a `d x d` orthogonal matrix to every vertex.
    pub fn transform(&self, t: &DMatrix<f64>) -> Result<Self> {
        let d = self.ambient_dim();
        if t.nrows() != d || t.ncols() != d {
            return Err(Error::Mismatch(format!(
                "transform is {}x{}, polygon lives in R^{d}",
                t.nrows(),
                t.ncols()
            )));
        }
        Ok(Self::from_parts(self.edge_lengths.clone(), t * &self.vertices))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polygon serializes")
    }

    pub fn from_json(s: &str, tol: &ToleranceConfig) -> Result<Self> {
        let rec: PolygonRecord =
            serde_json::from_str(s).map_err(|e| Error::InvalidPolygon(e.to_string()))?;
        Self::new(rec.edge_lengths, rec.ambient_dim, rec.vertices, tol)
    }
}

impl Serialize for Polygon {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonRecord {
            edge_lengths: self.edge_lengths.clone(),
            ambient_dim: self.ambient_dim(),
            vertices: self.vertices(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = PolygonRecord::deserialize(deserializer)?;
        Polygon::new(
            rec.edge_lengths,
            rec.ambient_dim,
            rec.vertices,
            &ToleranceConfig::default(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn unit4() -> EdgeLengths {
        EdgeLengths::new(vec![1.0; 4]).unwrap()
    }

    pub(crate) fn square() -> Polygon {
        Polygon::new(unit4(), 2, vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]], &tol()).unwrap()
    }

    fn collinear() -> Polygon {
        Polygon::new(unit4(), 2, vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.0]], &tol()).unwrap()
    }

    fn bent_square() -> Polygon {
        let h = 2f64.sqrt() / 2.0;
        Polygon::new(
            unit4(),
            3,
            vec![vec![0.5, 0.5, h], vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0]],
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn dimension_of_reference_polygons() {
        assert_eq!(square().dimension(&tol()), 2);
        assert_eq!(collinear().dimension(&tol()), 1);
        assert_eq!(bent_square().dimension(&tol()), 3);
        assert_relative_eq!(bent_square().vertex_matrix().determinant(), 2f64.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn gram_of_reference_polygons() {
        let g = square().gram();
        assert_eq!(g.to_rows(), vec![vec![1.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 1.0]]);
        let g = collinear().gram();
        assert_eq!(g.to_rows(), vec![vec![1.0, 2.0, 1.0], vec![2.0, 4.0, 2.0], vec![1.0, 2.0, 1.0]]);
    }

    #[test]
    fn embed_pads_with_zeros() {
        let p = square().embed(3).unwrap();
        assert_eq!(p.vertices(), vec![vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert_eq!(p.gram(), square().gram());
        assert!(square().embed(1).is_err());
        assert!(bent_square().embed(2).is_err());
    }

    #[test]
    fn projection_recovers_span_dimension() {
        let q = square().embed(5).unwrap().project_to_span(&tol());
        assert_eq!(q.ambient_dim(), 2);
        assert!(q.gram().approx_eq(&square().gram(), tol().eps_gram));

        let q = bent_square().embed(6).unwrap().project_to_span(&tol());
        assert_eq!(q.ambient_dim(), 3);
        assert!(q.gram().approx_eq(&bent_square().gram(), tol().eps_gram));

        let q = collinear().embed(4).unwrap().project_to_span(&tol());
        assert_eq!(q.ambient_dim(), 2);
        assert_eq!(q.dimension(&tol()), 1);
        assert!(q.relative_edge_error() < 1e-12);
    }

    #[test]
    fn reflect_negates_last_coordinate() {
        let r = square().reflect();
        assert_eq!(r.vertices(), vec![vec![1.0, 0.0], vec![1.0, -1.0], vec![0.0, -1.0]]);
        assert_eq!(r.reflect(), square());
        assert_eq!(r.gram(), square().gram());
    }

    #[test]
    fn rejects_bad_polygons() {
        let t = tol();
        assert!(Polygon::new(unit4(), 1, vec![vec![1.0], vec![2.0], vec![1.0]], &t).is_err());
        assert!(Polygon::new(unit4(), 2, vec![vec![1.0, 0.0], vec![1.0, 1.0]], &t).is_err());
        assert!(Polygon::new(unit4(), 2, vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.5]], &t).is_err());
        assert!(Polygon::new(unit4(), 2, vec![vec![1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 1.0]], &t).is_err());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let p = square();
        let s = p.to_json();
        assert_eq!(
            s,
            r#"{"edge_lengths":[1.0,1.0,1.0,1.0],"ambient_dim":2,"vertices":[[1.0,0.0],[1.0,1.0],[0.0,1.0]]}"#
        );
        let back: Polygon = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(Polygon::from_json(r#"{"edge_lengths":[1,1,1,1],"ambient_dim":2,"vertices":[[1,0],[1,1],[0,2]]}"#, &tol()).is_err());
        assert!(Polygon::from_json(r#"{"edge_lengths":[1,1,1,1],"ambient_dim":2,"vertices":[[1,0],[1,1],[0,1]],"x":1}"#, &tol()).is_err());
    }

    #[test]
    fn virtual_origin() {
        let p = square();
        assert_eq!(p.vertex(0), DVector::zeros(2));
        assert_eq!(p.vertex(4), DVector::zeros(2));
        assert_eq!(p.vertex(2), DVector::from_vec(vec![1.0, 1.0]));
    }
}
