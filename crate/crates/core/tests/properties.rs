use nalgebra::DMatrix;
use num::{BigRational, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polygon_moduli::construct::{
    bend, bend_direction, bend_sites, build_degenerate, enumerate_degenerate_classes, raise_to_dimension, sample,
};
use polygon_moduli::linalg::haar_rotation;
use polygon_moduli::quotient::{align, phi};
use polygon_moduli::{
    classify_feasibility, moduli_point, o_equivalent, so_equivalent, EdgeLengths, FeasibilityClass, ToleranceConfig,
};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// Exact rational check of `2 max l_i` against the perimeter.
fn feasibility_oracle(v: &[f64]) -> FeasibilityClass {
    let rs: Vec<BigRational> = v.iter().map(|&x| BigRational::from_float(x).unwrap()).collect();
    let total = rs.iter().fold(BigRational::zero(), |a, b| a + b);
    let max = rs.iter().max().unwrap().clone();
    let slack = total - max.clone() - max;
    if slack.is_positive() {
        FeasibilityClass::Interior
    } else if slack.is_zero() {
        FeasibilityClass::Border
    } else {
        FeasibilityClass::Infeasible
    }
}

fn lengths(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..10.0, n)
}

fn interior(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = EdgeLengths> {
    lengths(n)
        .prop_map(|v| EdgeLengths::new(v).unwrap())
        .prop_filter("interior", |e| {
            classify_feasibility(e) == FeasibilityClass::Interior && e.perimeter() - 2.0 * e.max() > 1e-3 * e.perimeter()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn feasibility_matches_exact_oracle(v in lengths(3..=9)) {
        let e = EdgeLengths::new(v.clone()).unwrap();
        prop_assert_eq!(classify_feasibility(&e), feasibility_oracle(&v));
    }

    #[test]
    fn feasibility_on_integer_vectors(v in prop::collection::vec(1u32..8, 3..=7)) {
        let v: Vec<f64> = v.into_iter().map(f64::from).collect();
        let e = EdgeLengths::new(v.clone()).unwrap();
        prop_assert_eq!(classify_feasibility(&e), feasibility_oracle(&v));
    }

    #[test]
    fn feasibility_is_scale_invariant(v in lengths(3..=8), k in -20i32..20) {
        let e = EdgeLengths::new(v).unwrap();
        let scaled = e.scaled(2f64.powi(k)).unwrap();
        prop_assert_eq!(classify_feasibility(&e), classify_feasibility(&scaled));
    }

    #[test]
    fn samples_respect_lengths_and_dimension_bound(e in interior(3..=7), d in 2usize..7, seed: u64) {
        let p = sample(&e, d, seed, &tol()).unwrap();
        prop_assert!(p.relative_edge_error() <= 1e-9);
        prop_assert!(p.dimension(&tol()) <= d.min(e.len() - 1));
    }

    #[test]
    fn rotation_preserves_class(e in interior(3..=6), d in 2usize..6, seed: u64) {
        let p = sample(&e, d, seed, &tol()).unwrap();
        let r = haar_rotation(d, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let q = p.transform(&r).unwrap();
        prop_assert!(p.gram().approx_eq(&q.gram(), tol().eps_gram));
        prop_assert!(so_equivalent(&p, &q, &tol()).unwrap());
        prop_assert!(align(&p, &q, true, &tol()).unwrap().residual <= 1e-6 * e.perimeter());
    }

    #[test]
    fn orbit_partition(e in interior(3..=6), d in 2usize..5, s1: u64, s2: u64, mix in 0u8..3) {
        let p = sample(&e, d, s1, &tol()).unwrap();
        let q = match mix {
            0 => sample(&e, d, s2, &tol()).unwrap(),
            1 => p.reflect(),
            _ => p.transform(&haar_rotation(d, &mut ChaCha8Rng::seed_from_u64(s2))).unwrap().reflect(),
        };
        let o = o_equivalent(&p, &q, &tol()).unwrap();
        let so = so_equivalent(&p, &q, &tol()).unwrap() || so_equivalent(&p, &q.reflect(), &tol()).unwrap();
        prop_assert_eq!(o, so);
    }

    #[test]
    fn embedding_commutes_with_phi(e in interior(3..=6), d in 2usize..6, seed: u64) {
        let p = sample(&e, d, seed, &tol()).unwrap();
        let lifted = moduli_point(&p.embed(d + 1).unwrap(), &tol());
        prop_assert!(phi(&moduli_point(&p, &tol())).same_point(&lifted, &tol()));
    }

    #[test]
    fn projection_undoes_embedding(e in interior(3..=6), d in 2usize..5, extra in 1usize..3, seed: u64) {
        let p = sample(&e, d, seed, &tol()).unwrap();
        let back = p.embed(d + extra).unwrap().project_to_span(&tol()).embed(d).unwrap();
        prop_assert!(o_equivalent(&p, &back, &tol()).unwrap());
    }

    #[test]
    fn bends_preserve_lengths_and_raise_dimension(e in interior(4..=7), seed: u64) {
        let d = e.len();
        let k = 2 + (seed as usize) % (e.len() - 2);
        let p = raise_to_dimension(&e, k, d, &tol(), seed).unwrap();
        prop_assert_eq!(p.dimension(&tol()), k);
        if k < e.len() - 1 {
            let sites = bend_sites(&p, &tol()).unwrap();
            prop_assert!(!sites.is_empty());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let site = &sites[(seed as usize / 7) % sites.len()];
            let u = bend_direction(&p, site, &mut rng, &tol()).unwrap();
            let q = bend(&p, site, &u, &tol()).unwrap();
            prop_assert!(q.relative_edge_error() <= 1e-9);
            prop_assert_eq!(q.dimension(&tol()), k + 1);
        }
    }

    #[test]
    fn degenerate_count_is_permutation_invariant(v in prop::collection::vec(1u32..5, 3..=10), seed: u64) {
        let v: Vec<f64> = v.into_iter().map(f64::from).collect();
        let mut w = v.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(&mut w[..], &mut rng);
        let a = enumerate_degenerate_classes(&EdgeLengths::new(v).unwrap(), &tol()).unwrap();
        let b = enumerate_degenerate_classes(&EdgeLengths::new(w).unwrap(), &tol()).unwrap();
        prop_assert_eq!(a.len(), b.len());
    }
}

/// Brute force over all `2^n` sign vectors, halved for `e ~ -e`.
#[test]
fn degenerate_enumeration_matches_brute_force() {
    for v in [vec![1.0, 1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0, 4.0, 2.0], vec![1.0; 8]] {
        let n = v.len();
        let brute = (0u32..(1 << n))
            .filter(|mask| {
                let s: f64 = (0..n).map(|i| if mask & (1 << i) != 0 { -v[i] } else { v[i] }).sum();
                s == 0.0
            })
            .count()
            / 2;
        let e = EdgeLengths::new(v).unwrap();
        let classes = enumerate_degenerate_classes(&e, &tol()).unwrap();
        assert_eq!(classes.len(), brute);
        for c in &classes {
            let p = build_degenerate(&e, c, 3, &tol()).unwrap();
            assert_eq!(p.dimension(&tol()), 1);
            assert!(p.relative_edge_error() < 1e-15);
        }
    }
}

/// The three collinear equilateral quadrilaterals lie at the pairwise
/// intersections of the three circles of the square's moduli space: each is
/// fixed by reflection and none is a rotation of another.
#[test]
fn square_degenerate_classes() {
    let e = EdgeLengths::new(vec![1.0; 4]).unwrap();
    let classes = enumerate_degenerate_classes(&e, &tol()).unwrap();
    let names: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
    assert_eq!(names, ["++--", "+-+-", "+--+"]);
    for d in 2..=4 {
        let ps: Vec<_> = classes.iter().map(|c| build_degenerate(&e, c, d, &tol()).unwrap()).collect();
        for i in 0..3 {
            assert!(so_equivalent(&ps[i], &ps[i].reflect(), &tol()).unwrap());
            for j in (i + 1)..3 {
                assert!(!o_equivalent(&ps[i], &ps[j], &tol()).unwrap());
            }
        }
    }
}

#[test]
fn reflection_in_a_coordinate_plane_is_not_a_rotation_of_a_full_polygon() {
    let e = EdgeLengths::new(vec![1.0; 4]).unwrap();
    let p = raise_to_dimension(&e, 3, 3, &tol(), 4).unwrap();
    let mut flip = DMatrix::<f64>::identity(3, 3);
    flip[(0, 0)] = -1.0;
    let q = p.transform(&flip).unwrap();
    assert!(!so_equivalent(&p, &q, &tol()).unwrap());
    assert!(o_equivalent(&p, &q, &tol()).unwrap());
    assert!(so_equivalent(&p.embed(4).unwrap(), &q.embed(4).unwrap(), &tol()).unwrap());
}
