mod common;

use common::*;
use gaplab_core::metrics::{
    complement_residual, equivalence_constants, gap_projection_distance, gap_sup_distance,
    graph_projection, riesz_distance, tilde_distance,
};
use gaplab_core::operators::{
    bounded_transform, density_approximant, fuglede_operator, odd_lift, tensor_extend,
};
use gaplab_core::{ComplexMatrix, Operator, SymbolSpec, C64};
use proptest::prelude::*;

const SLACK: f64 = 1e-10;

fn op(m: &ComplexMatrix) -> Operator {
    Operator::Matrix(m.clone())
}

/// Sup-form gap from explicit inverses.
fn gap_oracle(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let r = |m: &ComplexMatrix| {
        (&ComplexMatrix::identity(m.cols()) + &(&m.adjoint() * m))
            .inverse()
            .unwrap()
    };
    let (ra, rb) = (r(a), r(b));
    let (rsa, rsb) = (r(&a.adjoint()), r(&b.adjoint()));
    dist(&ra, &rb)
        .max(dist(&rsa, &rsb))
        .max(dist(&(a * &ra), &(b * &rb)))
}

fn gap(a: &Operator, b: &Operator) -> f64 {
    gap_sup_distance(a, b).unwrap().value
}

fn riesz_bound_holds(g: f64, sigma: f64) -> bool {
    g <= 2.0 * sigma + (2.0 * sigma).sqrt() + SLACK
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projection_laws(a in matrix(6)) {
        let p = graph_projection(&op(&a)).unwrap();
        prop_assert!(dist(&(&p * &p), &p) <= SLACK);
        prop_assert!(dist(&p.adjoint(), &p) <= SLACK);
        prop_assert!(complement_residual(&op(&a)).unwrap() <= SLACK);
    }

    #[test]
    fn sup_gap_matches_oracle((a, b) in matrix_pair(6)) {
        let r = gap_sup_distance(&op(&a), &op(&b)).unwrap();
        prop_assert_eq!(r.certified_error, 0.0);
        prop_assert!((r.value - gap_oracle(&a, &b)).abs() <= 1e-12);
    }

    #[test]
    fn block_sandwich((a, b) in matrix_pair(8)) {
        let s = gap(&op(&a), &op(&b));
        let p = gap_projection_distance(&op(&a), &op(&b)).unwrap().value;
        prop_assert!(s <= p + SLACK && p <= 2.0 * s + SLACK, "sup {s} proj {p}");
    }

    #[test]
    fn cayley_sandwich((h, k) in hermitian_pair(8)) {
        let (t, s) = (op(&h), op(&k));
        let d = tilde_distance(&t, &s).unwrap().value;
        let g = gap(&t, &s);
        prop_assert!(0.5 * d <= g + SLACK && g <= d + SLACK, "tilde {d} gap {g}");
    }

    #[test]
    fn norm_gap_equivalence((a, b) in matrix_pair(8), scale in 0.1..4.0f64) {
        let (a, b) = (a.scale_real(scale), b.scale_real(scale));
        let (t, s) = (op(&a), op(&b));
        let c = equivalence_constants(&t, &s).unwrap();
        let d = dist(&a, &b);
        let g = gap(&t, &s);
        prop_assert!(c.m2 <= c.m1);
        prop_assert!(c.m2 * d <= g + SLACK && g <= c.m1 * d + SLACK, "m2 {} d {d} g {g} m1 {}", c.m2, c.m1);
    }

    #[test]
    fn riesz_controls_gap((a, b) in matrix_pair(8), scale in 0.1..10.0f64) {
        let (t, s) = (op(&a.scale_real(scale)), op(&b.scale_real(scale)));
        let sigma = riesz_distance(&t, &s).unwrap().value;
        prop_assert!(riesz_bound_holds(gap(&t, &s), sigma));
    }

    #[test]
    fn openness_of_bounded((a, b) in matrix_pair(6), scale in 0.1..10.0f64) {
        let (t, s) = (op(&a.scale_real(scale)), op(&b.scale_real(scale)));
        let fs = bounded_transform(&s).unwrap().norm().unwrap();
        if gap(&t, &s) < 1.0 - fs * fs {
            prop_assert!(bounded_transform(&t).unwrap().norm().unwrap() < 1.0);
        }
    }

    #[test]
    fn odd_lift_is_isometric((a, b) in matrix_pair(6)) {
        prop_assume!(a.is_square());
        let (t, s) = (op(&a), op(&b));
        let lifted = gap(&odd_lift(&t).unwrap(), &odd_lift(&s).unwrap());
        prop_assert!((gap(&t, &s) - lifted).abs() <= 1e-10);
    }

    #[test]
    fn tensor_extension_is_isometric((a, b) in matrix_pair(5), k in 1usize..=3) {
        let base = gap(&op(&a), &op(&b));
        let ext = gap(&tensor_extend(&a, k).unwrap(), &tensor_extend(&b, k).unwrap());
        prop_assert!((base - ext).abs() <= 1e-12);
    }

    #[test]
    fn metric_axioms((a, b, c) in matrix_triple(5)) {
        let (x, y, z) = (op(&a), op(&b), op(&c));
        let metrics: [fn(&Operator, &Operator) -> f64; 3] = [
            |p, q| gap_sup_distance(p, q).unwrap().value,
            |p, q| gap_projection_distance(p, q).unwrap().value,
            |p, q| riesz_distance(p, q).unwrap().value,
        ];
        for d in metrics {
            prop_assert!(d(&x, &x) <= SLACK);
            prop_assert!((d(&x, &y) - d(&y, &x)).abs() <= SLACK);
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + SLACK);
        }
    }

    #[test]
    fn tilde_axioms((h, k) in hermitian_pair(5), shift in -2.0..2.0f64) {
        let (x, y) = (op(&h), op(&k));
        let z = op(&h.shift_diagonal(C64::new(shift, 0.0)));
        let d = |p: &Operator, q: &Operator| tilde_distance(p, q).unwrap().value;
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() <= SLACK);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + SLACK);
    }

    #[test]
    fn diagonal_sup_gap_matches_brute_force(a in divergent_real_symbol(), b in divergent_real_symbol()) {
        let (t, s) = (Operator::Diagonal(a.clone()), Operator::Diagonal(b.clone()));
        let r = gap_sup_distance(&t, &s).unwrap();
        let coord = |x: C64, y: C64| {
            let (rx, ry) = (1.0 / (1.0 + x.norm_sqr()), 1.0 / (1.0 + y.norm_sqr()));
            (rx - ry).abs().max((x * rx - y * ry).norm())
        };
        let brute = (1..20_000).map(|j| coord(a.value(j), b.value(j))).fold(0.0, f64::max);
        prop_assert!(brute <= r.value + r.certified_error + 1e-14);
        prop_assert!(r.value <= brute + r.certified_error + 1e-12);
        prop_assert!(r.certified_error <= 1e-9);
    }

    #[test]
    fn diagonal_tilde_matches_closed_form(a in divergent_real_symbol(), b in divergent_real_symbol()) {
        let (t, s) = (Operator::Diagonal(a.clone()), Operator::Diagonal(b.clone()));
        let r = tilde_distance(&t, &s).unwrap();
        let closed = |x: f64, y: f64| (x - y).abs() / ((1.0 + x * x) * (1.0 + y * y)).sqrt();
        let brute = (1..20_000).map(|j| closed(a.value(j).re, b.value(j).re)).fold(0.0, f64::max);
        prop_assert!(brute <= r.value + r.certified_error + 1e-14);
        prop_assert!(r.value <= brute + r.certified_error + 1e-12);
        let g = gap(&t, &s);
        prop_assert!(0.5 * r.value <= g + SLACK && g <= r.value + r.certified_error + SLACK);
    }

    #[test]
    fn diagonal_odd_lift_is_isometric(a in divergent_real_symbol(), b in constant_symbol()) {
        let (t, s) = (Operator::Diagonal(a), Operator::Diagonal(b));
        let plain = gap_sup_distance(&t, &s).unwrap();
        let lifted = gap_sup_distance(&odd_lift(&t).unwrap(), &odd_lift(&s).unwrap()).unwrap();
        prop_assert!((plain.value - lifted.value).abs() <= 1e-10);
    }
}

#[test]
fn fuglede_pairs_obey_sandwich_and_riesz_bound() {
    let t0 = fuglede_operator(0);
    for n in 1..=1000usize {
        let tn = fuglede_operator(n);
        let g = gap(&tn, &t0);
        let d = tilde_distance(&tn, &t0).unwrap().value;
        let sigma = riesz_distance(&tn, &t0).unwrap().value;
        assert!(0.5 * d <= g + SLACK && g <= d + SLACK, "n = {n}");
        assert!(riesz_bound_holds(g, sigma), "n = {n}");
    }
}

#[test]
fn fuglede_closed_forms() {
    let t0 = fuglede_operator(0);
    for n in [1usize, 3, 17, 1000] {
        let x = n as f64;
        let tn = fuglede_operator(n);
        // Only coordinate n differs: 1/(i−n) − 1/(i+n) has modulus 2n/(1+n²).
        let tilde = (C64::new(-x, 1.0).inv() - C64::new(x, 1.0).inv()).norm();
        assert!((tilde_distance(&tn, &t0).unwrap().value - tilde).abs() < 1e-15);
        let riesz = 2.0 * x / (1.0 + x * x).sqrt();
        assert!((riesz_distance(&tn, &t0).unwrap().value - riesz).abs() < 1e-14);
    }
}

#[test]
fn density_approximants_converge_in_gap() {
    let t = Operator::Diagonal(SymbolSpec::polynomial(vec![], vec![0.0, 1.0]).unwrap());
    let mut last = f64::INFINITY;
    for n in [1usize, 2, 5, 10, 50, 200, 20_000] {
        let tn = density_approximant(&t, n).unwrap();
        let g = gap_sup_distance(&tn, &t).unwrap();
        // Per coordinate the distance increases to its limit, where R → 1 − δ² and
        // aR → δ√(1 − δ²) against 0 for the unbounded symbol, δ = n/(n+1).
        let delta = n as f64 / (n as f64 + 1.0);
        let limit = (1.0 - delta * delta).max(delta * (1.0 - delta * delta).sqrt());
        assert!((g.value - limit).abs() <= 1e-12, "n = {n}: {g:?} vs {limit}");
        assert!(g.certified_error <= 1e-12);
        assert!(g.value < last);
        last = g.value;
        let r = riesz_distance(&tn, &t).unwrap();
        assert!((r.value - 1.0 / (n as f64 + 1.0)).abs() <= 1e-12);
        // Openness: an unbounded T stays at gap ≥ 1 − ‖F_S‖² from a bounded S.
        let fs = bounded_transform(&tn).unwrap().norm().unwrap();
        assert!(g.value + g.certified_error >= 1.0 - fs * fs - 1e-12);
    }
    assert!(last < 1e-2);
}
