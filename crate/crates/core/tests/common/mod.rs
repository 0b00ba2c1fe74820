#![allow(dead_code)]

use gaplab_core::numkernel::operator_norm;
use gaplab_core::{ComplexMatrix, SymbolSpec, C64};
use proptest::prelude::*;

pub fn entry() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

pub fn matrix_of(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(entry(), rows * cols)
        .prop_map(move |e| ComplexMatrix::from_row_major(rows, cols, e).unwrap())
}

pub fn matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| matrix_of(m, n))
}

pub fn square(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|n| matrix_of(n, n))
}

pub fn matrix_pair(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| (matrix_of(m, n), matrix_of(m, n)))
}

pub fn matrix_triple(
    max_dim: usize,
) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(m, n)| (matrix_of(m, n), matrix_of(m, n), matrix_of(m, n)))
}

/// `(M + M*)/2`, scaled up so the spectrum is not confined to `[-1, 1]`.
pub fn hermitian_part(m: &ComplexMatrix, scale: f64) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5 * scale)
}

pub fn hermitian_pair(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (matrix_pair(max_dim), 0.1..5.0f64).prop_filter_map("square", |((a, b), s)| {
        a.is_square()
            .then(|| (hermitian_part(&a, s), hermitian_part(&b, s)))
    })
}

pub fn norm(m: &ComplexMatrix) -> f64 {
    operator_norm(m).unwrap()
}

pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    norm(&(a - b))
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Real prefix and a polynomial tail with positive leading coefficient, so
/// the tail diverges to `+∞`.
pub fn divergent_real_symbol() -> impl Strategy<Value = SymbolSpec> {
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

/// Complex prefix with a nonzero complex constant tail.
pub fn constant_symbol() -> impl Strategy<Value = SymbolSpec> {
    (prop::collection::vec(entry(), 0..6), entry(), 0.2..3.0f64).prop_map(
        |(prefix, c, m)| {
            let c = if c.norm() < 1e-3 { C64::new(1.0, 0.0) } else { c };
            SymbolSpec::constant(
                prefix.into_iter().map(|z| z * 3.0).collect(),
                c / c.norm() * m,
            )
            .unwrap()
        },
    )
}
