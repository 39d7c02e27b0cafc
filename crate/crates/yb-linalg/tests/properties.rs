use proptest::prelude::*;
use yb_linalg::{embed_factor, kron, max_rel_residual, permutation_op, Matrix, C64};

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n)
        .prop_map(move |v| Matrix::new(n, n, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(3)) {
        let l = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let r = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(max_rel_residual(&l, &r).unwrap().value < 1e-15);
    }

    #[test]
    fn disjoint_embeddings_commute(m in matrix(4), k in matrix(4)) {
        let a = embed_factor(&m, 1, 2, 4, 2).unwrap();
        let b = embed_factor(&k, 3, 4, 4, 2).unwrap();
        prop_assert!(max_rel_residual(&(&a * &b), &(&b * &a)).unwrap().value < 1e-13);
        let a = embed_factor(&m, 1, 3, 4, 2).unwrap();
        let b = embed_factor(&k, 2, 4, 4, 2).unwrap();
        prop_assert!(max_rel_residual(&(&a * &b), &(&b * &a)).unwrap().value < 1e-13);
    }

    #[test]
    fn residual_is_symmetric(a in matrix(3), b in matrix(3)) {
        let x = max_rel_residual(&a, &b).unwrap().value;
        let y = max_rel_residual(&b, &a).unwrap().value;
        prop_assert_eq!(x, y);
        prop_assert!(x >= 0.0);
        prop_assert_eq!(max_rel_residual(&a, &a).unwrap().value, 0.0);
    }

    #[test]
    fn similarity_preserves_trace(a in matrix(4), g in matrix(4)) {
        if let Ok(conj) = a.conjugate_by(&g) {
            if g.inverse().map(|i| i.max_abs() * g.max_abs() < 1e4).unwrap_or(false) {
                prop_assert!((conj.trace() - a.trace()).norm() < 1e-9 * (1.0 + a.max_abs()));
            }
        }
    }

    #[test]
    fn inverse_roundtrip(a in matrix(3)) {
        if let Ok(inv) = a.inverse() {
            if inv.max_abs() < 1e4 {
                prop_assert!(max_rel_residual(&(&a * &inv), &Matrix::identity(3)).unwrap().value < 1e-9);
            }
        }
    }
}

#[test]
fn embed_13_brute_force() {
    // Entry-level bookkeeping oracle over all 8x8 positions.
    let m = Matrix::from_fn(4, 4, |i, j| C64::new((3 * i + j) as f64, (i as f64) - (j as f64)));
    let e = embed_factor(&m, 1, 3, 3, 2).unwrap();
    for r in 0..8 {
        for c in 0..8 {
            let (a1, a2, a3) = (r >> 2 & 1, r >> 1 & 1, r & 1);
            let (b1, b2, b3) = (c >> 2 & 1, c >> 1 & 1, c & 1);
            let want = if a2 == b2 { m[(a1 * 2 + a3, b1 * 2 + b3)] } else { C64::new(0.0, 0.0) };
            assert_eq!(e[(r, c)], want, "entry ({r},{c})");
        }
    }
}

#[test]
fn permutation_squares_to_identity_d3() {
    let p = permutation_op(3).unwrap();
    assert_eq!(&p * &p, Matrix::identity(9));
}
