mod common;

use common::*;
use gaplab_core::fredholm::{
    fredholm_index, homotopy_path, kernel_dims, validate_path, Dimension, HomotopyOutcome,
};
use gaplab_core::{ComplexMatrix, Operator, SymbolSpec, Tail, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank by Gaussian elimination with partial pivoting.
fn gauss_rank(mut rows: Vec<Vec<C64>>, eps: f64) -> usize {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let scale = rows
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows)
            .max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm()))
        else {
            break;
        };
        if rows[pivot][col].norm() <= eps * scale {
            continue;
        }
        rows.swap(rank, pivot);
        let p = rows[rank][col];
        for r in rank + 1..n_rows {
            let factor = rows[r][col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for c in col..n_cols {
                let v = rows[rank][c];
                rows[r][c] -= factor * v;
            }
        }
        rank += 1;
    }
    rank
}

/// `N×N` truncation of `S^k diag(d)`: column `j` carries `d_j` in row `j + k`.
fn truncated_shift(k: usize, d: &SymbolSpec, n: usize) -> Vec<Vec<C64>> {
    let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        if j + k < n {
            m[j + k][j] = d.value(j + 1);
        }
    }
    m
}

fn random_symbol(rng: &mut ChaCha8Rng) -> SymbolSpec {
    let len = rng.random_range(0..8);
    let prefix = (0..len)
        .map(|_| {
            if rng.random_bool(0.3) {
                C64::new(0.0, 0.0)
            } else {
                C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
            }
        })
        .collect();
    let tail = if rng.random_bool(0.5) {
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        Tail::constant(C64::from_polar(rng.random_range(0.5..3.0), angle)).unwrap()
    } else {
        let lead = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        Tail::polynomial(vec![rng.random_range(-3.0..3.0), lead]).unwrap()
    };
    SymbolSpec::new(prefix, tail).unwrap()
}

#[test]
fn shifted_index_matches_truncated_oracle() {
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_symbol(&mut rng);
        let k = rng.random_range(0..4usize);
        let n = d.prefix_len().max(d.tail().monotone_from()) + k + 10;
        let m = truncated_shift(k, &d, n);
        let rank = gauss_rank(m, 1e-10);
        // The last k columns leave the truncation; in ℓ² they are not in the kernel.
        let ker = n - rank - k;
        let coker = n - rank;
        let t = Operator::shifted(k, d.clone());
        assert_eq!(
            kernel_dims(&t).unwrap(),
            (Dimension::Finite(ker), Dimension::Finite(coker)),
            "seed {seed}"
        );
        let r = fredholm_index(&t).unwrap();
        assert!(r.fredholm);
        assert_eq!(r.index, Some(-(k as i64)), "seed {seed}");
        assert_eq!(r.index, Some(ker as i64 - coker as i64));
    }
}

#[test]
fn selfadjoint_diagonals_connect() {
    let mut rng = ChaCha8Rng::seed_from_u64(4300);
    let symbol = |rng: &mut ChaCha8Rng| {
        let len = rng.random_range(0..6);
        let prefix = (0..len).map(|_| real(rng.random_range(-5.0..5.0))).collect();
        let coeffs = vec![rng.random_range(-3.0..3.0), rng.random_range(0.5..2.0)];
        Operator::Diagonal(SymbolSpec::polynomial(prefix, coeffs).unwrap())
    };
    for trial in 0..50 {
        let a = symbol(&mut rng);
        let b = symbol(&mut rng);
        assert_eq!(fredholm_index(&a).unwrap().index, Some(0));
        assert_eq!(fredholm_index(&b).unwrap().index, Some(0));
        let out = homotopy_path(&a, &b, 21, 0.05).unwrap();
        let HomotopyOutcome::Connected(p) = out else {
            panic!("trial {trial}: {out:?}")
        };
        assert!(p.indices.iter().all(|&i| i == 0));
        assert_eq!(p.samples.first(), Some(&a));
        assert_eq!(p.samples.last(), Some(&b));
        assert!(validate_path(&p, 0.05), "trial {trial}");
    }
}

fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::block2x2(
        a,
        &ComplexMatrix::zeros(a.rows(), b.cols()),
        &ComplexMatrix::zeros(b.rows(), a.cols()),
        b,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_is_additive(a in matrix(5), b in matrix(5)) {
        let ia = fredholm_index(&Operator::Matrix(a.clone())).unwrap().index.unwrap();
        let ib = fredholm_index(&Operator::Matrix(b.clone())).unwrap().index.unwrap();
        let s = fredholm_index(&Operator::Matrix(direct_sum(&a, &b))).unwrap();
        prop_assert_eq!(s.index, Some(ia + ib));
        prop_assert_eq!(ia, a.cols() as i64 - a.rows() as i64);
    }

    #[test]
    fn matrix_paths_keep_their_index((a, b) in matrix_pair(4)) {
        let (t, s) = (Operator::Matrix(a.clone()), Operator::Matrix(b));
        let HomotopyOutcome::Connected(p) = homotopy_path(&t, &s, 5, 0.1).unwrap() else {
            panic!("matrices of one shape are always connected")
        };
        let expected = a.cols() as i64 - a.rows() as i64;
        prop_assert!(p.indices.iter().all(|&i| i == expected));
        prop_assert!(p.max_step_gap() <= 0.1);
        prop_assert!(validate_path(&p, 0.1));
    }

    #[test]
    fn shifts_of_different_order_never_connect(k0 in 0usize..4, k1 in 0usize..4) {
        prop_assume!(k0 != k1);
        let out = homotopy_path(&Operator::unilateral_shift(k0), &Operator::unilateral_shift(k1), 5, 0.1).unwrap();
        let is_no_path = matches!(out, HomotopyOutcome::NoPath { .. });
        prop_assert!(is_no_path);
    }
}

#[test]
fn constant_path_is_valid() {
    let t = Operator::unilateral_shift(2);
    let HomotopyOutcome::Connected(p) = homotopy_path(&t, &t, 3, 1e-6).unwrap() else {
        panic!()
    };
    assert_eq!(p.max_step_gap(), 0.0);
    assert!(validate_path(&p, 1e-6));
}
