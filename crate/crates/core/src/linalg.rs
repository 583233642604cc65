//! Small dense linear-algebra helpers on `nalgebra` matrices.
//!
//! Singular value and symmetric eigenvalue decompositions go through `faer`:
//! `nalgebra`'s SVD loses accuracy on some small matrices with a tiny or
//! repeated singular value (reconstruction errors of order 1e-4 relative
//! were observed on 4x4 cross-covariance matrices of mirror pairs).

use faer::Mat;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Thin SVD `m = u * diag(singular_values) * v_t`, singular values in
/// non-increasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v_t: DMatrix<f64>,
}

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn svd(m: &DMatrix<f64>) -> Svd {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Svd { u: DMatrix::zeros(r, 0), singular_values: Vec::new(), v_t: DMatrix::zeros(0, c) };
    }
    let f = to_faer(m);
    let svd = f.thin_svd().expect("SVD of a finite matrix converges");
    let s = svd.S().column_vector();
    let (fu, fv) = (svd.U(), svd.V());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    Svd {
        u: DMatrix::from_fn(r, k, |i, j| fu[(i, order[j])]),
        singular_values: order.iter().map(|&j| s[j]).collect(),
        v_t: DMatrix::from_fn(k, c, |i, j| fv[(j, order[i])]),
    }
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = to_faer(m)
        .singular_values()
        .expect("SVD of a finite matrix converges");
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Eigenvalues of a symmetric matrix in non-increasing order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut ev: Vec<f64> = to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("symmetric eigenvalues converge");
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Number of singular values above `eps * sigma_1`; zero for the zero matrix.
pub fn rank_from_singular_values(sv: &[f64], eps: f64) -> usize {
    let Some(&top) = sv.first() else { return 0 };
    if top <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > eps * top).count()
}

pub fn numerical_rank(m: &DMatrix<f64>, eps: f64) -> usize {
    rank_from_singular_values(&singular_values(m), eps)
}

/// Orthonormal basis (as columns) of the numerical column span of `m`.
pub fn column_basis(m: &DMatrix<f64>, eps: f64) -> DMatrix<f64> {
    let rows = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::zeros(rows, 0);
    }
    let svd = svd(m);
    let k = rank_from_singular_values(&svd.singular_values, eps);
    svd.u.columns(0, k).into_owned()
}

/// Component of `v` orthogonal to the span of the orthonormal columns of `basis`.
pub fn reject(v: &DVector<f64>, basis: &DMatrix<f64>) -> DVector<f64> {
    if basis.ncols() == 0 {
        return v.clone();
    }
    let coeffs = basis.tr_mul(v);
    v - basis * coeffs
}

/// Haar-distributed rotation in SO(d): QR of a Gaussian matrix with the
/// diagonal of R made positive, then one column negated if needed to make
/// the determinant +1.
pub fn haar_rotation<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Uniform unit vector in the orthogonal complement of the orthonormal
/// columns of `basis`, or `None` when the complement is numerically empty.
pub fn random_unit_orthogonal<R: Rng + ?Sized>(
    d: usize,
    basis: &DMatrix<f64>,
    rng: &mut R,
) -> Option<DVector<f64>> {
    if basis.ncols() >= d {
        return None;
    }
    for _ in 0..64 {
        let g = DVector::<f64>::from_fn(d, |_, _| rng.sample(StandardNormal));
        let r = reject(&g, basis);
        let norm = r.norm();
        if norm > 1e-6 * g.norm() && norm > 0.0 {
            return Some(r / norm);
        }
    }
    None
}

/// Gram-only greedy pivot selection: walks indices in ascending order and
/// keeps an index when its squared distance to the span of the kept ones,
/// relative to its squared norm, exceeds `eps`. Falls back to full pivoting
/// by largest residual when the ascending pass finds fewer than `want`.
pub fn gram_pivots(gram: &DMatrix<f64>, want: usize, eps: f64) -> Vec<usize> {
    let m = gram.nrows();
    let ascending = greedy_pivots(gram, want, eps, false);
    if ascending.len() >= want || m == 0 {
        return ascending;
    }
    greedy_pivots(gram, want, 0.0, true)
}

fn greedy_pivots(gram: &DMatrix<f64>, want: usize, eps: f64, largest_first: bool) -> Vec<usize> {
    let m = gram.nrows();
    // Partial Cholesky factor rows for the kept pivots.
    let mut factor: Vec<Vec<f64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let residual = |i: usize, factor: &Vec<Vec<f64>>, pivots: &Vec<usize>| -> (f64, Vec<f64>) {
        let mut coeffs = Vec::with_capacity(pivots.len());
        for (k, _) in pivots.iter().enumerate() {
            let dot: f64 = (0..k).map(|j| coeffs[j] * factor[k][j]).sum();
            let c = (gram[(i, pivots[k])] - dot) / factor[k][k];
            coeffs.push(c);
        }
        let r = gram[(i, i)] - coeffs.iter().map(|c| c * c).sum::<f64>();
        (r, coeffs)
    };
    if largest_first {
        while pivots.len() < want {
            let mut best: Option<(usize, f64, Vec<f64>)> = None;
            for i in (0..m).filter(|i| !pivots.contains(i)) {
                let (r, coeffs) = residual(i, &factor, &pivots);
                if best.as_ref().is_none_or(|(_, br, _)| r > *br) {
                    best = Some((i, r, coeffs));
                }
            }
            let Some((i, r, mut coeffs)) = best else { break };
            if r <= 0.0 {
                break;
            }
            coeffs.push(r.sqrt());
            factor.push(coeffs);
            pivots.push(i);
        }
        pivots.sort_unstable();
    } else {
        for i in 0..m {
            if pivots.len() == want {
                break;
            }
            let (r, mut coeffs) = residual(i, &factor, &pivots);
            if gram[(i, i)] > 0.0 && r > eps * gram[(i, i)] {
                coeffs.push(r.sqrt());
                factor.push(coeffs);
                pivots.push(i);
            }
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_counts_relative_to_top() {
        assert_eq!(rank_from_singular_values(&[2.0, 1.0, 1e-9], 1e-8), 2);
        assert_eq!(rank_from_singular_values(&[2.0, 1.0, 1e-7], 1e-8), 3);
        assert_eq!(rank_from_singular_values(&[0.0, 0.0], 1e-8), 0);
        assert_eq!(rank_from_singular_values(&[], 1e-8), 0);
    }

    fn reconstruction_error(m: &DMatrix<f64>) -> f64 {
        let s = svd(m);
        (&s.u * DMatrix::from_diagonal(&DVector::from_vec(s.singular_values.clone())) * &s.v_t - m).norm()
    }

    #[test]
    fn svd_is_accurate_on_mirror_cross_covariance() {
        // V_Q V_P^T for a rank-3 polygon in R^4 and its mirror image; two
        // nearly equal singular values and an exact zero.
        let v = [
            [0.0884490006077785, 0.6769314714748417, 0.044404709157791475, 0.7293618985270637],
            [-0.008129465990814863, -0.03098637703993545, 0.043237193318897575, 0.029702298113806588],
            [-0.6976839807208781, -0.27724222145445704, -0.5438086494863513, 0.37502795420114904],
        ];
        let p = DMatrix::from_fn(4, 3, |i, j| v[j][i]);
        let mut q = p.clone();
        q.row_mut(3).neg_mut();
        let m = &q * p.transpose();
        assert!(reconstruction_error(&m) < 1e-14);
        let sv = singular_values(&m);
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        assert!(sv[3] < 1e-15);
    }

    #[test]
    fn svd_is_accurate_on_nearly_singular_2x2() {
        let m = DMatrix::from_column_slice(2, 2, &[0.2649596365, 0.2288424873, -0.2288424873, -0.1976485683]);
        assert!(reconstruction_error(&m) < 1e-15);
        let s = svd(&m);
        assert!((&s.u.transpose() * &s.u - DMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn symmetric_eigenvalues_sorted() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0]);
        let ev = symmetric_eigenvalues(&m);
        for (a, b) in ev.iter().zip([5.0, 3.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn haar_rotation_is_proper_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..7 {
            let q = haar_rotation(d, &mut rng);
            let err = (q.transpose() * &q - DMatrix::identity(d, d)).abs().max();
            assert!(err < 1e-12);
            assert!((q.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_orthogonal_direction_avoids_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = DMatrix::from_column_slice(4, 2, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
        let basis = column_basis(&m, 1e-8);
        assert_eq!(basis.ncols(), 2);
        let u = random_unit_orthogonal(4, &basis, &mut rng).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-12);
        assert!(basis.tr_mul(&u).abs().max() < 1e-12);
        let full = DMatrix::<f64>::identity(3, 3);
        assert!(random_unit_orthogonal(3, &full, &mut rng).is_none());
    }

    #[test]
    fn pivots_skip_dependent_columns() {
        // Vertices (1,0), (2,0), (0,1): second is a multiple of the first.
        let v = DMatrix::from_column_slice(2, 3, &[1.0, 0.0, 2.0, 0.0, 0.0, 1.0]);
        let g = v.tr_mul(&v);
        assert_eq!(gram_pivots(&g, 2, 1e-8), vec![0, 2]);
        // Square: first two vertices already independent.
        let v = DMatrix::from_column_slice(2, 3, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
        assert_eq!(gram_pivots(&v.tr_mul(&v), 2, 1e-8), vec![0, 1]);
    }
}
