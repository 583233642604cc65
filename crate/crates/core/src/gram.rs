use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Matrix of vertex inner products `G[i][j] = <v_i, v_j>`.
///
/// Two polygons with the same edge lengths and ambient dimension lie in the
/// same O(d)-orbit exactly when their Gram forms agree.
#[derive(Debug, Clone, PartialEq)]
pub struct GramForm(DMatrix<f64>);

impl GramForm {
    pub fn from_vertices(vertices: &DMatrix<f64>) -> Self {
        let mut g = vertices.tr_mul(vertices);
        // Symmetrize exactly; tr_mul computes both triangles independently.
        for i in 0..g.nrows() {
            for j in 0..i {
                let avg = 0.5 * (g[(i, j)] + g[(j, i)]);
                g[(i, j)] = avg;
                g[(j, i)] = avg;
            }
        }
        Self(g)
    }

    /// Accepts a square, symmetric, positive-semidefinite matrix (within
    /// relative `eps`).
    pub fn from_rows(rows: Vec<Vec<f64>>, eps: f64) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidPolygon("Gram matrix must be square".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPolygon("Gram matrix must be finite".into()));
        }
        let g = DMatrix::from_fn(m, m, |i, j| rows[i][j]);
        let scale = g.abs().max().max(1.0);
        if (&g - g.transpose()).abs().max() > eps * scale {
            return Err(Error::InvalidPolygon("Gram matrix is not symmetric".into()));
        }
        let gram = Self(g);
        if gram.eigenvalues().iter().any(|&l| l < -eps * scale) {
            return Err(Error::InvalidPolygon("Gram matrix is not positive semidefinite".into()));
        }
        Ok(gram)
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.abs().max()
    }

    /// Largest entrywise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.size() != other.size() {
            return f64::INFINITY;
        }
        (&self.0 - &other.0).abs().max()
    }

    /// Entrywise comparison within `eps * max(1, largest |entry|)`.
    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        self.distance(other) <= eps * scale
    }

    /// Eigenvalues in non-increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::linalg::symmetric_eigenvalues(&self.0)
    }

    /// Rank read off the eigenvalues: counts `lambda_i` above
    /// `max(eps^2, 64 m u) * lambda_1`, where `u` is the unit roundoff.
    ///
    /// Eigenvalues are squared singular values of the vertex matrix, so this
    /// only resolves singular-value ratios down to roughly `1e-7`; the vertex
    /// matrix rank is the sharper test when coordinates are available.
    pub fn rank(&self, eps: f64) -> usize {
        let ev = self.eigenvalues();
        let Some(&top) = ev.first() else { return 0 };
        if top <= 0.0 {
            return 0;
        }
        let floor = (eps * eps).max(64.0 * self.size() as f64 * f64::EPSILON);
        ev.iter().filter(|&&l| l > floor * top).count()
    }
}

impl Serialize for GramForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GramForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        GramForm::from_rows(rows, 1e-7).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_comparison() {
        let v = DMatrix::from_column_slice(3, 3, &[1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
        let g = GramForm::from_vertices(&v);
        assert_eq!(g.rank(1e-8), 2);
        let mut bumped = g.clone();
        bumped.0[(0, 0)] += 1e-9;
        assert!(g.approx_eq(&bumped, 1e-7));
        bumped.0[(0, 0)] += 1e-5;
        assert!(!g.approx_eq(&bumped, 1e-7));
    }

    #[test]
    fn from_rows_validates() {
        assert!(GramForm::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]], 1e-7).is_ok());
        assert!(GramForm::from_rows(vec![vec![1.0, 2.0], vec![0.0, 1.0]], 1e-7).is_err());
        assert!(GramForm::from_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]], 1e-7).is_err());
        assert!(GramForm::from_rows(vec![vec![1.0, 0.0]], 1e-7).is_err());
    }
}
