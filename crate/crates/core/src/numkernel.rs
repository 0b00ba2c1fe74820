//! Dense complex linear algebra used by every other module.
//!
//! Factorizations are delegated to `nalgebra`; this module fixes the
//! conventions the rest of the crate relies on (descending singular values,
//! strict Hermitian checks, finite entries only).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{GapError, Result};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

const MAX_ITERATIONS: usize = 10_000;

/// Tolerances shared by the numerical routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative threshold below which a singular value (or symbol modulus) counts as zero.
    pub eps_rank: f64,
    /// Slack for identities that hold exactly in exact arithmetic.
    pub eps_residual: f64,
    /// Margin separating `‖F‖ < 1` from `‖F‖ = 1`.
    pub eps_bounded: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_rank: 1e-10,
            eps_residual: 1e-10,
            eps_bounded: 1e-12,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_rank", self.eps_rank),
            ("eps_residual", self.eps_residual),
            ("eps_bounded", self.eps_bounded),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(GapError::InvalidInput(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A finite dense complex matrix with at least one row and one column.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{}) [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                let z = self.0[(i, j)];
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GapError::InvalidInput(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(GapError::InvalidInput(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !z.is_finite()) {
            return Err(GapError::InvalidInput(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Builds a matrix from real rows; handy for tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(GapError::InvalidInput("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::from_row_major(r, c, entries)
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(GapError::InvalidInput("empty matrix".into()));
        }
        if m.iter().any(|z| !z.is_finite()) {
            return Err(GapError::InvalidInput("non-finite entry".into()));
        }
        Ok(Self(m))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimensions must be positive");
        Self(DMatrix::identity(n, n))
    }

    pub fn scalar(z: C64) -> Self {
        Self(DMatrix::from_element(1, 1, z))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        assert!(!diag.is_empty(), "matrix dimensions must be positive");
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// `[[a, b], [c, d]]` assembled from compatible blocks.
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows() != b.rows()
            || c.rows() != d.rows()
            || a.cols() != c.cols()
            || b.cols() != d.cols()
        {
            return Err(GapError::ShapeMismatch(format!(
                "incompatible blocks {}x{}, {}x{}, {}x{}, {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols(),
                d.rows(),
                d.cols()
            )));
        }
        let (r0, c0) = (a.rows(), a.cols());
        let mut m = DMatrix::zeros(r0 + c.rows(), c0 + b.cols());
        m.view_mut((0, 0), a.0.shape()).copy_from(&a.0);
        m.view_mut((0, c0), b.0.shape()).copy_from(&b.0);
        m.view_mut((r0, 0), c.0.shape()).copy_from(&c.0);
        m.view_mut((r0, c0), d.0.shape()).copy_from(&d.0);
        Ok(Self(m))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    /// Adds `z` to every diagonal entry of a square matrix.
    pub fn shift_diagonal(&self, z: C64) -> Self {
        assert!(self.is_square());
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += z;
        }
        Self(m)
    }

    /// `self ⊗ 1_k`: each entry becomes a `k×k` scaled identity block.
    pub fn kron_identity(&self, k: usize) -> Self {
        assert!(k > 0);
        let id = DMatrix::<C64>::identity(k, k);
        Self(self.0.kronecker(&id))
    }

    /// Largest entry modulus; a cheap size measure used in residual checks.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(GapError::ShapeMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows(),
                self.cols()
            )));
        }
        self.0
            .clone()
            .try_inverse()
            .map(Self)
            .ok_or_else(|| GapError::NumericalFailure("matrix is singular".into()))
    }

    /// `‖H − H*‖`, or `None` for a non-square matrix.
    pub fn hermitian_defect(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let d = &self.0 - self.0.adjoint();
        Some(spectral_norm_unchecked(&d))
    }

    pub fn is_hermitian(&self, eps_residual: f64) -> bool {
        match self.hermitian_defect() {
            Some(d) => d <= eps_residual * (1.0 + spectral_norm_unchecked(&self.0)),
            None => false,
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(GapError::InvalidInput("matrix has non-finite entries".into()))
    }
}

fn spectral_norm_unchecked(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    match SVD::try_new(m.clone(), false, false, f64::EPSILON, MAX_ITERATIONS) {
        Some(svd) => svd.singular_values.max(),
        // Fall back to the Frobenius norm, an upper bound, if the iteration stalls.
        None => m.norm(),
    }
}

/// Largest singular value of `m`.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    check_finite(m)?;
    let svd = SVD::try_new(m.0.clone(), false, false, f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| GapError::NumericalFailure("SVD did not converge".into()))?;
    Ok(svd.singular_values.max())
}

/// Thin singular value decomposition `M = U·diag(s)·V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    /// Descending; ties keep the order produced by the factorization.
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let s: Vec<C64> = self
            .singular_values
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .collect();
        let d = ComplexMatrix::from_diagonal(&s);
        &(&self.u * &d) * &self.v.adjoint()
    }
}

pub fn svd_factor(m: &ComplexMatrix) -> Result<Svd> {
    check_finite(m)?;
    let svd = SVD::try_new(m.0.clone(), true, true, f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| GapError::NumericalFailure("SVD did not converge".into()))?;
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let s = svd.singular_values;

    let mut order: Vec<usize> = (0..s.len()).collect();
    // Stable sort keeps index order among equal values.
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));

    let k = order.len();
    let u_sorted = DMatrix::from_fn(u.nrows(), k, |i, c| u[(i, order[c])]);
    let v_sorted = DMatrix::from_fn(v_t.ncols(), k, |i, c| v_t[(order[c], i)].conj());
    Ok(Svd {
        u: ComplexMatrix(u_sorted),
        singular_values: order.iter().map(|&i| s[i]).collect(),
        v: ComplexMatrix(v_sorted),
    })
}

/// `f(H)` for Hermitian `H`, through its spectral decomposition.
pub fn hermitian_apply<F>(h: &ComplexMatrix, f: F) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> f64,
{
    hermitian_apply_tol(h, f, ToleranceConfig::default().eps_residual)
}

pub fn hermitian_apply_tol<F>(h: &ComplexMatrix, f: F, eps_residual: f64) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> f64,
{
    check_finite(h)?;
    if !h.is_square() {
        return Err(GapError::InvalidInput(format!(
            "functional calculus needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_hermitian(eps_residual) {
        return Err(GapError::InvalidInput(format!(
            "matrix is not Hermitian (‖H − H*‖ = {:e})",
            h.hermitian_defect().unwrap_or(f64::NAN)
        )));
    }
    let eig = SymmetricEigen::try_new(h.0.clone(), f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| GapError::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    let q = &eig.eigenvectors;
    let fvals: Vec<f64> = eig.eigenvalues.iter().map(|&x| f(x)).collect();
    if let Some(x) = fvals.iter().find(|x| !x.is_finite()) {
        return Err(GapError::InvalidInput(format!(
            "function is not finite on the spectrum (value {x})"
        )));
    }
    let n = q.nrows();
    let mut scaled = q.clone();
    for (c, &fv) in fvals.iter().enumerate() {
        for r in 0..n {
            scaled[(r, c)] *= fv;
        }
    }
    let out = &scaled * q.adjoint();
    // Real f gives a Hermitian result; remove rounding asymmetry.
    let sym = (&out + out.adjoint()) * C64::new(0.5, 0.0);
    Ok(ComplexMatrix(sym))
}

/// Number of singular values above `eps · max(1, s₁)`.
pub fn numerical_rank(m: &ComplexMatrix, eps: f64) -> Result<usize> {
    check_finite(m)?;
    let svd = SVD::try_new(m.0.clone(), false, false, f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| GapError::NumericalFailure("SVD did not converge".into()))?;
    let s1 = svd.singular_values.max();
    let threshold = eps * s1.max(1.0);
    Ok(svd.singular_values.iter().filter(|&&s| s > threshold).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn norm_of_zero_and_nilpotent() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(2, 2)).unwrap(), 0.0);
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(operator_norm(&n).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let bad = ComplexMatrix(DMatrix::from_element(1, 1, C64::new(f64::NAN, 0.0)));
        assert!(matches!(operator_norm(&bad), Err(GapError::InvalidInput(_))));
        assert!(ComplexMatrix::from_row_major(1, 1, vec![C64::new(f64::INFINITY, 0.0)]).is_err());
        assert!(ComplexMatrix::from_row_major(0, 1, vec![]).is_err());
        assert!(ComplexMatrix::from_row_major(2, 1, vec![c(1.0)]).is_err());
    }

    #[test]
    fn svd_simple_cases() {
        let s = svd_factor(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.singular_values.len(), 3);
        for v in &s.singular_values {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-14);
        }
        let d = ComplexMatrix::from_diagonal(&[c(3.0), c(0.0)]);
        let s = svd_factor(&d).unwrap();
        assert_abs_diff_eq!(s.singular_values[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.singular_values[1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn svd_of_rectangular_matrix_reconstructs() {
        let m = ComplexMatrix::from_row_major(
            3,
            2,
            vec![
                C64::new(1.0, 2.0),
                c(0.5),
                C64::new(0.0, -1.0),
                c(3.0),
                c(-2.0),
                C64::new(0.25, 0.25),
            ],
        )
        .unwrap();
        let s = svd_factor(&m).unwrap();
        assert_eq!(s.u.shape(), (3, 2));
        assert_eq!(s.v.shape(), (2, 2));
        assert!(s.singular_values[0] >= s.singular_values[1]);
        let r = &s.reconstruct() - &m;
        assert!(operator_norm(&r).unwrap() < 1e-12);
    }

    #[test]
    fn hermitian_apply_scalar_cases() {
        let q = hermitian_apply(&ComplexMatrix::identity(2), |x| (1.0 + x).powf(-0.5)).unwrap();
        let expected = ComplexMatrix::identity(2).scale_real(1.0 / 2f64.sqrt());
        assert!((&q - &expected).max_abs() < 1e-14);

        let d = ComplexMatrix::from_diagonal(&[c(0.0), c(9.0)]);
        let r = hermitian_apply(&d, f64::sqrt).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c(0.0), c(3.0)]);
        assert!((&r - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn hermitian_apply_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_apply(&m, |x| x),
            Err(GapError::InvalidInput(_))
        ));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(hermitian_apply(&rect, |x| x).is_err());
    }

    #[test]
    fn rank_cases() {
        assert_eq!(numerical_rank(&ComplexMatrix::zeros(3, 3), 1e-10).unwrap(), 0);
        assert_eq!(numerical_rank(&ComplexMatrix::identity(3), 1e-10).unwrap(), 3);
        let d = ComplexMatrix::from_diagonal(&[c(1.0), c(1e-14)]);
        assert_eq!(numerical_rank(&d, 1e-10).unwrap(), 1);
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::default().validate().is_ok());
        let bad = ToleranceConfig {
            eps_rank: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn kron_identity_layout() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0]]).unwrap();
        let k = m.kron_identity(2);
        assert_eq!(k.shape(), (2, 4));
        assert_eq!(k.get(0, 0), c(1.0));
        assert_eq!(k.get(1, 1), c(1.0));
        assert_eq!(k.get(0, 2), c(2.0));
        assert_eq!(k.get(1, 3), c(2.0));
        assert_eq!(k.get(0, 1), c(0.0));
    }
}
