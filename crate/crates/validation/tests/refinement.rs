//! Halving the homotopy grid never increases the largest step gap.

use gaplab_core::fredholm::homotopy_path;
use gaplab_core::{ComplexMatrix, HomotopyOutcome, Operator, SymbolSpec, C64};
use proptest::prelude::*;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn matrix_pair(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    let entry = (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im));
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(m, n)| {
        let one = prop::collection::vec(entry.clone(), m * n)
            .prop_map(move |e| ComplexMatrix::from_row_major(m, n, e).unwrap());
        (one.clone(), one)
    })
}

/// Real prefix with a polynomial tail diverging to `+∞`.
fn divergent_real_symbol() -> impl Strategy<Value = SymbolSpec> {
    (
        prop::collection::vec(-5.0..5.0f64, 0..6),
        prop::collection::vec(-3.0..3.0f64, 1..3),
        0.5..2.0f64,
    )
        .prop_map(|(prefix, mut coeffs, lead)| {
            coeffs.push(lead);
            SymbolSpec::polynomial(prefix.into_iter().map(real).collect(), coeffs).unwrap()
        })
}

/// Largest step gap on the uniform grid of `steps` samples, with no refinement.
fn unrefined_max_gap(a: &Operator, b: &Operator, steps: usize) -> f64 {
    match homotopy_path(a, b, steps, 1e9).unwrap() {
        HomotopyOutcome::Connected(p) => {
            assert_eq!(p.samples.len(), steps);
            p.max_step_gap()
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_never_increases_step_gaps((a, b) in matrix_pair(4), steps in 2usize..9) {
        let (t, s) = (Operator::Matrix(a), Operator::Matrix(b));
        let coarse = unrefined_max_gap(&t, &s, steps);
        let fine = unrefined_max_gap(&t, &s, 2 * steps - 1);
        prop_assert!(fine <= coarse + 1e-12, "coarse {coarse} fine {fine}");
    }

    #[test]
    fn refinement_never_increases_step_gaps_on_diagonals(
        a in divergent_real_symbol(),
        b in divergent_real_symbol(),
        steps in 2usize..9,
    ) {
        let (t, s) = (Operator::Diagonal(a), Operator::Diagonal(b));
        let coarse = unrefined_max_gap(&t, &s, steps);
        let fine = unrefined_max_gap(&t, &s, 2 * steps - 1);
        prop_assert!(fine <= coarse + 1e-12, "coarse {coarse} fine {fine}");
    }
}

#[test]
fn refinement_never_increases_step_gaps_on_peak_crossing() {
    // Coordinate 1 runs from −0.7486 to 2.3780 and crosses |a| = 1, where aR peaks.
    let a = SymbolSpec::polynomial(vec![real(-0.748590229997299)], vec![0.0, 0.5]).unwrap();
    let b = SymbolSpec::polynomial(vec![], vec![1.8779607835596555, 0.5]).unwrap();
    let (t, s) = (Operator::Diagonal(a), Operator::Diagonal(b));
    let coarse = unrefined_max_gap(&t, &s, 2);
    let fine = unrefined_max_gap(&t, &s, 3);
    assert!(fine <= coarse + 1e-12, "coarse {coarse} fine {fine}");
}
