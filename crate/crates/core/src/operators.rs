//! Concrete closed operators and the transforms between them.
//!
//! Finite matrices are always bounded. Unbounded operators live on ℓ² as
//! diagonal (or shifted-diagonal) multiplication by a [`SymbolSpec`] whose tail
//! diverges.

use crate::error::{GapError, Result};
use crate::numkernel::{
    hermitian_apply_tol, operator_norm, ComplexMatrix, ToleranceConfig, C64, I,
};
use crate::symbol::{ContractionSymbol, SymbolSpec, Tail, TransformPoint};
use nalgebra::SymmetricEigen;

/// A closed densely defined operator in one of the supported representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    /// Bounded operator `ℂⁿ → ℂᵐ` given by an `m×n` matrix.
    Matrix(ComplexMatrix),
    /// Multiplication by `a_j` on ℓ², with its maximal domain.
    Diagonal(SymbolSpec),
    /// `S^k ∘ diag(d)` with `S` the unilateral forward shift; with `adjoint`
    /// set, the operator is its adjoint `diag(conj d) ∘ S*^k`.
    ShiftedDiagonal {
        k: usize,
        symbol: SymbolSpec,
        adjoint: bool,
    },
    /// `inner ⊗ 1_multiplicity`.
    TensorExtended {
        inner: ComplexMatrix,
        multiplicity: usize,
    },
    /// Odd lift `[[0, t*], [t, 0]]` of a diagonal operator, stored coordinate-wise:
    /// coordinate `j` contributes the block `[[0, conj a_j], [a_j, 0]]`.
    OddDiagonal(SymbolSpec),
}

impl Operator {
    pub fn matrix(m: ComplexMatrix) -> Self {
        Operator::Matrix(m)
    }

    pub fn diagonal(symbol: SymbolSpec) -> Self {
        Operator::Diagonal(symbol)
    }

    pub fn shifted(k: usize, symbol: SymbolSpec) -> Self {
        Operator::ShiftedDiagonal {
            k,
            symbol,
            adjoint: false,
        }
    }

    /// The unilateral shift `S^k`.
    pub fn unilateral_shift(k: usize) -> Self {
        Self::shifted(
            k,
            SymbolSpec::constant(vec![], C64::new(1.0, 0.0)).expect("finite constant"),
        )
    }

    /// The identity on ℓ² as a diagonal operator.
    pub fn identity_diagonal() -> Self {
        Operator::Diagonal(SymbolSpec::constant(vec![], C64::new(1.0, 0.0)).expect("finite"))
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            Operator::Matrix(_) => "matrix",
            Operator::Diagonal(_) => "diagonal",
            Operator::ShiftedDiagonal { .. } => "shifted_diagonal",
            Operator::TensorExtended { .. } => "tensor",
            Operator::OddDiagonal(_) => "odd_diagonal",
        }
    }

    /// Dense matrix for the finite-dimensional representations.
    pub fn materialize(&self) -> Option<ComplexMatrix> {
        match self {
            Operator::Matrix(m) => Some(m.clone()),
            Operator::TensorExtended {
                inner,
                multiplicity,
            } => Some(inner.kron_identity(*multiplicity)),
            _ => None,
        }
    }

    pub fn is_selfadjoint(&self, tol: &ToleranceConfig) -> bool {
        match self {
            Operator::Matrix(m) => m.is_hermitian(tol.eps_residual),
            Operator::TensorExtended { inner, .. } => inner.is_hermitian(tol.eps_residual),
            Operator::Diagonal(s) => s.is_real(tol.eps_residual),
            Operator::ShiftedDiagonal { k, symbol, .. } => {
                *k == 0 && symbol.is_real(tol.eps_residual)
            }
            Operator::OddDiagonal(_) => true,
        }
    }

    /// Diagonal symbol of a selfadjoint ℓ² operator that is plain multiplication.
    pub(crate) fn as_plain_diagonal(&self) -> Option<SymbolSpec> {
        match self {
            Operator::Diagonal(s) => Some(s.clone()),
            Operator::ShiftedDiagonal {
                k: 0,
                symbol,
                adjoint,
            } => Some(if *adjoint { symbol.conj() } else { symbol.clone() }),
            _ => None,
        }
    }
}

/// Representation of a bounded transform `F_t`; mirrors [`Operator`].
#[derive(Debug, Clone, PartialEq)]
pub enum TransformRepr {
    Matrix(ComplexMatrix),
    Diagonal(ContractionSymbol),
    ShiftedDiagonal {
        k: usize,
        symbol: ContractionSymbol,
        adjoint: bool,
    },
    TensorExtended {
        inner: ComplexMatrix,
        multiplicity: usize,
    },
    OddDiagonal(ContractionSymbol),
}

/// A contraction `F` together with whether `1 − F*F` is injective.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedTransform {
    pub repr: TransformRepr,
    pub defect_injective: bool,
}

impl BoundedTransform {
    pub fn new(repr: TransformRepr, tol: &ToleranceConfig) -> Result<Self> {
        let defect_injective = match &repr {
            TransformRepr::Matrix(f) | TransformRepr::TensorExtended { inner: f, .. } => {
                min_defect_eigenvalue(f)? > tol.eps_rank
            }
            TransformRepr::Diagonal(c)
            | TransformRepr::ShiftedDiagonal { symbol: c, .. }
            | TransformRepr::OddDiagonal(c) => c
                .prefix()
                .iter()
                .all(|f| 1.0 - f.norm_sqr() > tol.eps_rank),
        };
        let t = Self {
            repr,
            defect_injective,
        };
        let n = t.norm()?;
        if n > 1.0 + tol.eps_bounded {
            return Err(GapError::InvalidInput(format!(
                "bounded transform must be a contraction, norm is {n}"
            )));
        }
        Ok(t)
    }

    /// Operator norm; for ℓ² representations the exact supremum of `|f_j|`.
    pub fn norm(&self) -> Result<f64> {
        match &self.repr {
            TransformRepr::Matrix(f) | TransformRepr::TensorExtended { inner: f, .. } => {
                operator_norm(f)
            }
            TransformRepr::Diagonal(c)
            | TransformRepr::ShiftedDiagonal { symbol: c, .. }
            | TransformRepr::OddDiagonal(c) => Ok(c.sup_modulus()),
        }
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            TransformRepr::Matrix(f) => TransformRepr::Matrix(f.adjoint()),
            TransformRepr::Diagonal(c) => TransformRepr::Diagonal(c.conj()),
            TransformRepr::ShiftedDiagonal { k, symbol, adjoint } => {
                TransformRepr::ShiftedDiagonal {
                    k: *k,
                    symbol: symbol.clone(),
                    adjoint: !adjoint,
                }
            }
            TransformRepr::TensorExtended {
                inner,
                multiplicity,
            } => TransformRepr::TensorExtended {
                inner: inner.adjoint(),
                multiplicity: *multiplicity,
            },
            TransformRepr::OddDiagonal(c) => TransformRepr::OddDiagonal(c.clone()),
        };
        Self {
            repr,
            defect_injective: self.defect_injective,
        }
    }

    /// `c·F` for `c ∈ (0, 1]`.
    pub fn scale(&self, c: f64, tol: &ToleranceConfig) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(GapError::InvalidInput(format!(
                "scale must lie in (0, 1], got {c}"
            )));
        }
        let repr = match &self.repr {
            TransformRepr::Matrix(f) => TransformRepr::Matrix(f.scale_real(c)),
            TransformRepr::Diagonal(s) => TransformRepr::Diagonal(s.scale(c)?),
            TransformRepr::ShiftedDiagonal { k, symbol, adjoint } => {
                TransformRepr::ShiftedDiagonal {
                    k: *k,
                    symbol: symbol.scale(c)?,
                    adjoint: *adjoint,
                }
            }
            TransformRepr::TensorExtended {
                inner,
                multiplicity,
            } => TransformRepr::TensorExtended {
                inner: inner.scale_real(c),
                multiplicity: *multiplicity,
            },
            TransformRepr::OddDiagonal(s) => TransformRepr::OddDiagonal(s.scale(c)?),
        };
        Self::new(repr, tol)
    }

    pub fn materialize(&self) -> Option<ComplexMatrix> {
        match &self.repr {
            TransformRepr::Matrix(f) => Some(f.clone()),
            TransformRepr::TensorExtended {
                inner,
                multiplicity,
            } => Some(inner.kron_identity(*multiplicity)),
            _ => None,
        }
    }
}

fn min_defect_eigenvalue(f: &ComplexMatrix) -> Result<f64> {
    let d = defect(f);
    let eig = SymmetricEigen::try_new(d.into_dmatrix(), f64::EPSILON, 10_000)
        .ok_or_else(|| GapError::NumericalFailure("eigensolver did not converge".into()))?;
    Ok(eig.eigenvalues.min())
}

/// `𝔉(F) = 1 − F*F`.
pub fn defect(f: &ComplexMatrix) -> ComplexMatrix {
    let ff = &f.adjoint() * f;
    &ComplexMatrix::identity(f.cols()) - &ff
}

/// `Q_t = (1 + t*t)^{-1/2}` for a matrix.
pub fn q_matrix(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ata = &a.adjoint() * a;
    hermitian_apply_tol(&ata, |x| (1.0 + x).powf(-0.5), f64::INFINITY)
}

/// `R_t = (1 + t*t)^{-1}` for a matrix.
pub fn r_matrix(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ata = &a.adjoint() * a;
    hermitian_apply_tol(&ata, |x| 1.0 / (1.0 + x), f64::INFINITY)
}

fn matrix_transform(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(a * &q_matrix(a)?)
}

/// `F_t = t (1 + t*t)^{-1/2}`.
pub fn bounded_transform(t: &Operator) -> Result<BoundedTransform> {
    bounded_transform_tol(t, &ToleranceConfig::default())
}

pub fn bounded_transform_tol(t: &Operator, tol: &ToleranceConfig) -> Result<BoundedTransform> {
    let repr = match t {
        Operator::Matrix(a) => TransformRepr::Matrix(matrix_transform(a)?),
        Operator::Diagonal(s) => TransformRepr::Diagonal(s.to_contraction()),
        // t*t = diag(|d|²) because S*S = 1, so F = S^k diag(F(d)).
        Operator::ShiftedDiagonal { k, symbol, adjoint } => TransformRepr::ShiftedDiagonal {
            k: *k,
            symbol: symbol.to_contraction(),
            adjoint: *adjoint,
        },
        Operator::TensorExtended {
            inner,
            multiplicity,
        } => TransformRepr::TensorExtended {
            inner: matrix_transform(inner)?,
            multiplicity: *multiplicity,
        },
        Operator::OddDiagonal(s) => TransformRepr::OddDiagonal(s.to_contraction()),
    };
    BoundedTransform::new(repr, tol)
}

/// `t = F (1 − F*F)^{-1/2}`.
pub fn from_bounded_transform(f: &BoundedTransform) -> Result<Operator> {
    from_bounded_transform_tol(f, &ToleranceConfig::default())
}

pub fn from_bounded_transform_tol(f: &BoundedTransform, tol: &ToleranceConfig) -> Result<Operator> {
    let invert = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
        let min_eig = min_defect_eigenvalue(m)?;
        if min_eig <= tol.eps_rank {
            return Err(GapError::NotInvertibleDefect {
                min_eigenvalue: min_eig,
            });
        }
        let q_inv = hermitian_apply_tol(&defect(m), |x| x.powf(-0.5), f64::INFINITY)?;
        Ok(m * &q_inv)
    };
    Ok(match &f.repr {
        TransformRepr::Matrix(m) => Operator::Matrix(invert(m)?),
        TransformRepr::TensorExtended {
            inner,
            multiplicity,
        } => Operator::TensorExtended {
            inner: invert(inner)?,
            multiplicity: *multiplicity,
        },
        TransformRepr::Diagonal(c) => Operator::Diagonal(c.to_symbol()?),
        TransformRepr::ShiftedDiagonal { k, symbol, adjoint } => Operator::ShiftedDiagonal {
            k: *k,
            symbol: symbol.to_symbol()?,
            adjoint: *adjoint,
        },
        TransformRepr::OddDiagonal(c) => Operator::OddDiagonal(c.to_symbol()?),
    })
}

pub fn adjoint(t: &Operator) -> Operator {
    match t {
        Operator::Matrix(m) => Operator::Matrix(m.adjoint()),
        Operator::Diagonal(s) => Operator::Diagonal(s.conj()),
        Operator::ShiftedDiagonal { k, symbol, adjoint } => Operator::ShiftedDiagonal {
            k: *k,
            symbol: symbol.clone(),
            adjoint: !adjoint,
        },
        Operator::TensorExtended {
            inner,
            multiplicity,
        } => Operator::TensorExtended {
            inner: inner.adjoint(),
            multiplicity: *multiplicity,
        },
        Operator::OddDiagonal(s) => Operator::OddDiagonal(s.clone()),
    }
}

/// `t` is bounded iff `‖F_t‖ < 1`.
pub fn is_bounded(t: &Operator) -> Result<bool> {
    is_bounded_tol(t, &ToleranceConfig::default())
}

pub fn is_bounded_tol(t: &Operator, tol: &ToleranceConfig) -> Result<bool> {
    Ok(bounded_transform_tol(t, tol)?.norm()? < 1.0 - tol.eps_bounded)
}

/// Operator norm of a bounded operator (infinite when unbounded).
pub fn operator_norm_of(t: &Operator) -> Result<f64> {
    match t {
        Operator::Matrix(m) | Operator::TensorExtended { inner: m, .. } => operator_norm(m),
        Operator::Diagonal(s) | Operator::ShiftedDiagonal { symbol: s, .. } => {
            Ok(s.sup_modulus())
        }
        Operator::OddDiagonal(s) => Ok(s.sup_modulus()),
    }
}

/// How a bounded function of a selfadjoint operator acts on each scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarMap {
    /// `a ↦ (a − i)(a + i)^{-1}`
    Cayley,
    /// `a ↦ (a + sign·i)^{-1}`, `sign = ±1`
    Resolvent { sign: f64 },
}

/// A bounded function of a selfadjoint operator: Cayley transform or resolvent.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralImage {
    Matrix(ComplexMatrix),
    /// Coordinate `j` is the map applied to `a_j`; `source` holds `F(a_j)`.
    Diagonal {
        source: ContractionSymbol,
        map: ScalarMap,
    },
    /// Coordinate `j` is the map applied to the block `[[0, conj a_j], [a_j, 0]]`.
    OddDiagonal {
        source: ContractionSymbol,
        map: ScalarMap,
    },
}

fn apply_scalar_map(p: TransformPoint, map: ScalarMap) -> C64 {
    match map {
        ScalarMap::Resolvent { sign } => p.resolvent(sign),
        ScalarMap::Cayley => C64::new(1.0, 0.0) - 2.0 * I * p.resolvent(1.0),
    }
}

/// 2×2 block of the map applied to `[[0, ā], [a, 0]]`.
fn apply_block_map(p: TransformPoint, map: ScalarMap) -> ComplexMatrix {
    let r = p.r();
    let ar = p.ar();
    let res = |sign: f64| {
        ComplexMatrix::from_row_major(
            2,
            2,
            vec![C64::new(0.0, -sign * r), ar.conj(), ar, C64::new(0.0, -sign * r)],
        )
        .expect("finite 2x2 block")
    };
    match map {
        ScalarMap::Resolvent { sign } => res(sign),
        ScalarMap::Cayley => &ComplexMatrix::identity(2) - &res(1.0).scale(2.0 * I),
    }
}

impl SpectralImage {
    /// Coordinate `j` as a `1×1` or `2×2` block. Not defined for the matrix case.
    pub fn block(&self, j: usize) -> Option<ComplexMatrix> {
        match self {
            SpectralImage::Matrix(_) => None,
            SpectralImage::Diagonal { source, map } => Some(ComplexMatrix::scalar(
                apply_scalar_map(source.point(j), *map),
            )),
            SpectralImage::OddDiagonal { source, map } => {
                Some(apply_block_map(source.point(j), *map))
            }
        }
    }

    /// `lim_{j→∞}` of the coordinate blocks.
    pub fn limit_block(&self) -> Option<ComplexMatrix> {
        match self {
            SpectralImage::Matrix(_) => None,
            SpectralImage::Diagonal { source, map } => Some(ComplexMatrix::scalar(
                apply_scalar_map(source.limit_point(), *map),
            )),
            SpectralImage::OddDiagonal { source, map } => {
                Some(apply_block_map(source.limit_point(), *map))
            }
        }
    }

    pub fn prefix_len(&self) -> usize {
        match self {
            SpectralImage::Matrix(_) => 0,
            SpectralImage::Diagonal { source, .. } | SpectralImage::OddDiagonal { source, .. } => {
                source.prefix_len()
            }
        }
    }

    /// `‖U*U − 1‖` over the matrix, or over coordinates `1..=window` and the limit.
    pub fn unitarity_residual(&self, window: usize) -> f64 {
        let residual = |m: &ComplexMatrix| {
            let g = &m.adjoint() * m;
            operator_norm(&(&g - &ComplexMatrix::identity(m.cols()))).unwrap_or(f64::INFINITY)
        };
        match self {
            SpectralImage::Matrix(m) => residual(m),
            _ => (1..=window)
                .filter_map(|j| self.block(j))
                .chain(self.limit_block())
                .map(|b| residual(&b))
                .fold(0.0, f64::max),
        }
    }
}

pub(crate) fn require_selfadjoint(t: &Operator, tol: &ToleranceConfig) -> Result<()> {
    if t.is_selfadjoint(tol) {
        Ok(())
    } else {
        Err(GapError::NotSelfadjoint(format!(
            "{} operator is not selfadjoint within {:e}",
            t.class_name(),
            tol.eps_residual
        )))
    }
}

/// `f(t)` for selfadjoint `t` and a scalar map.
pub(crate) fn spectral_image(
    t: &Operator,
    map: ScalarMap,
    tol: &ToleranceConfig,
) -> Result<SpectralImage> {
    require_selfadjoint(t, tol)?;
    if let Some(a) = t.materialize() {
        let plus_i = a.shift_diagonal(I).inverse()?;
        let m = match map {
            ScalarMap::Resolvent { sign } => {
                if sign > 0.0 {
                    plus_i
                } else {
                    a.shift_diagonal(-I).inverse()?
                }
            }
            ScalarMap::Cayley => &a.shift_diagonal(-I) * &plus_i,
        };
        return Ok(SpectralImage::Matrix(m));
    }
    if let Some(s) = t.as_plain_diagonal() {
        // Drop rounding-level imaginary parts admitted by the selfadjointness test.
        let real = SymbolSpec::new(
            s.prefix().iter().map(|z| C64::new(z.re, 0.0)).collect(),
            match s.tail() {
                Tail::Constant(c) => Tail::Constant(C64::new(c.re, 0.0)),
                other => other.clone(),
            },
        )?;
        return Ok(SpectralImage::Diagonal {
            source: real.to_contraction(),
            map,
        });
    }
    match t {
        Operator::OddDiagonal(s) => Ok(SpectralImage::OddDiagonal {
            source: s.to_contraction(),
            map,
        }),
        _ => Err(GapError::Unsupported(format!(
            "no spectral image for {} operators",
            t.class_name()
        ))),
    }
}

/// `c_t = (t − i)(t + i)^{-1}` for selfadjoint `t`.
pub fn cayley_transform(t: &Operator) -> Result<SpectralImage> {
    cayley_transform_tol(t, &ToleranceConfig::default())
}

pub fn cayley_transform_tol(t: &Operator, tol: &ToleranceConfig) -> Result<SpectralImage> {
    spectral_image(t, ScalarMap::Cayley, tol)
}

/// `t̂ = [[0, t*], [t, 0]]`.
pub fn odd_lift(t: &Operator) -> Result<Operator> {
    match t {
        Operator::Matrix(a) => {
            if !a.is_square() {
                return Err(GapError::ShapeMismatch(format!(
                    "odd lift needs a square matrix, got {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
            let z = ComplexMatrix::zeros(a.rows(), a.cols());
            Ok(Operator::Matrix(ComplexMatrix::block2x2(
                &z,
                &a.adjoint(),
                a,
                &z,
            )?))
        }
        Operator::TensorExtended {
            inner,
            multiplicity,
        } => match odd_lift(&Operator::Matrix(inner.clone()))? {
            Operator::Matrix(lifted) => Ok(Operator::TensorExtended {
                inner: lifted,
                multiplicity: *multiplicity,
            }),
            _ => unreachable!(),
        },
        Operator::Diagonal(s) => Ok(Operator::OddDiagonal(s.clone())),
        Operator::ShiftedDiagonal {
            k: 0,
            symbol,
            adjoint,
        } => Ok(Operator::OddDiagonal(if *adjoint {
            symbol.conj()
        } else {
            symbol.clone()
        })),
        other => Err(GapError::Unsupported(format!(
            "odd lift of {} operators",
            other.class_name()
        ))),
    }
}

/// `t ⊗ 1_k`.
pub fn tensor_extend(t: &ComplexMatrix, k: usize) -> Result<Operator> {
    if k == 0 {
        return Err(GapError::InvalidInput("multiplicity must be positive".into()));
    }
    Ok(Operator::TensorExtended {
        inner: t.clone(),
        multiplicity: k,
    })
}

/// Diagonal operator with `a_j = j`, except `a_n = −n` when `n ≥ 1`.
pub fn fuglede_operator(n: usize) -> Operator {
    let prefix = (1..=n)
        .map(|j| C64::new(if j == n { -(j as f64) } else { j as f64 }, 0.0))
        .collect();
    Operator::Diagonal(
        SymbolSpec::polynomial(prefix, vec![0.0, 1.0]).expect("identity polynomial is valid"),
    )
}

/// Bounded operator whose transform is `(n/(n+1))·F_t`.
pub fn density_approximant(t: &Operator, n: usize) -> Result<Operator> {
    density_approximant_tol(t, n, &ToleranceConfig::default())
}

pub fn density_approximant_tol(t: &Operator, n: usize, tol: &ToleranceConfig) -> Result<Operator> {
    if n == 0 {
        return Err(GapError::InvalidInput("approximant index must be positive".into()));
    }
    let c = n as f64 / (n as f64 + 1.0);
    let scaled = bounded_transform_tol(t, tol)?.scale(c, tol)?;
    from_bounded_transform_tol(&scaled, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn scalar(z: C64) -> Operator {
        Operator::Matrix(ComplexMatrix::scalar(z))
    }

    fn diag_identity() -> Operator {
        Operator::Diagonal(SymbolSpec::polynomial(vec![], vec![0.0, 1.0]).unwrap())
    }

    #[test]
    fn transform_of_scalar_one() {
        let f = bounded_transform(&scalar(r(1.0))).unwrap();
        let m = f.materialize().unwrap();
        assert_abs_diff_eq!(m.get(0, 0).re, 0.70710678118654752, epsilon = 1e-15);
        assert!(f.defect_injective);
    }

    #[test]
    fn transform_of_diagonal_polynomial() {
        let f = bounded_transform(&diag_identity()).unwrap();
        let TransformRepr::Diagonal(c) = &f.repr else {
            panic!("expected diagonal transform")
        };
        for j in 1..50 {
            let x = j as f64;
            assert_abs_diff_eq!(c.value(j).re, x / (1.0 + x * x).sqrt(), epsilon = 1e-15);
        }
        assert_eq!(f.norm().unwrap(), 1.0);
    }

    #[test]
    fn transform_of_diag_0_3() {
        let t = Operator::Matrix(ComplexMatrix::from_diagonal(&[r(0.0), r(3.0)]));
        let f = bounded_transform(&t).unwrap().materialize().unwrap();
        let expected = ComplexMatrix::from_diagonal(&[r(0.0), r(3.0 / 10f64.sqrt())]);
        assert!((&f - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn inverse_transform_examples() {
        let zero = BoundedTransform::new(
            TransformRepr::Matrix(ComplexMatrix::scalar(r(0.0))),
            &ToleranceConfig::default(),
        )
        .unwrap();
        assert_eq!(
            from_bounded_transform(&zero).unwrap(),
            scalar(r(0.0))
        );
        let half = BoundedTransform::new(
            TransformRepr::Matrix(ComplexMatrix::scalar(r(1.0 / 2f64.sqrt()))),
            &ToleranceConfig::default(),
        )
        .unwrap();
        let t = from_bounded_transform(&half).unwrap().materialize().unwrap();
        assert_abs_diff_eq!(t.get(0, 0).re, 1.0, epsilon = 1e-12);

        let diag = bounded_transform(&diag_identity()).unwrap();
        let Operator::Diagonal(s) = from_bounded_transform(&diag).unwrap() else {
            panic!()
        };
        for j in 1..30 {
            assert_abs_diff_eq!(s.value(j).re, j as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn isometric_contraction_has_no_matrix_preimage() {
        let f = BoundedTransform::new(
            TransformRepr::Matrix(ComplexMatrix::scalar(r(1.0))),
            &ToleranceConfig::default(),
        )
        .unwrap();
        assert!(!f.defect_injective);
        assert!(matches!(
            from_bounded_transform(&f),
            Err(GapError::NotInvertibleDefect { .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&Operator::Matrix(n)), Operator::Matrix(expected));

        let s = SymbolSpec::polynomial(vec![C64::new(0.0, 1.0), C64::new(0.0, 2.0)], vec![])
            .unwrap();
        let Operator::Diagonal(c) = adjoint(&Operator::Diagonal(s)) else {
            panic!()
        };
        assert_eq!(c.value(1), C64::new(0.0, -1.0));
        assert_eq!(c.value(2), C64::new(0.0, -2.0));

        let shift = Operator::unilateral_shift(1);
        assert!(matches!(
            adjoint(&shift),
            Operator::ShiftedDiagonal { adjoint: true, k: 1, .. }
        ));
        assert_eq!(adjoint(&adjoint(&shift)), shift);
    }

    #[test]
    fn cayley_examples() {
        let SpectralImage::Matrix(c0) = cayley_transform(&scalar(r(0.0))).unwrap() else {
            panic!()
        };
        assert!((c0.get(0, 0) - r(-1.0)).norm() < 1e-15);
        let SpectralImage::Matrix(c1) = cayley_transform(&scalar(r(1.0))).unwrap() else {
            panic!()
        };
        assert!((c1.get(0, 0) - C64::new(0.0, -1.0)).norm() < 1e-15);

        let img = cayley_transform(&diag_identity()).unwrap();
        for j in 1..40 {
            let x = j as f64;
            let expected = (r(x) - I) / (r(x) + I);
            let b = img.block(j).unwrap().get(0, 0);
            assert!((b - expected).norm() < 1e-14);
            assert_abs_diff_eq!(b.norm(), 1.0, epsilon = 1e-14);
        }
        assert!((img.limit_block().unwrap().get(0, 0) - r(1.0)).norm() < 1e-15);
        assert!(img.unitarity_residual(100) < 1e-14);
    }

    #[test]
    fn cayley_rejects_non_selfadjoint() {
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            cayley_transform(&Operator::Matrix(n)),
            Err(GapError::NotSelfadjoint(_))
        ));
        assert!(matches!(
            cayley_transform(&Operator::unilateral_shift(1)),
            Err(GapError::NotSelfadjoint(_))
        ));
    }

    #[test]
    fn odd_lift_examples() {
        let Operator::Matrix(z) = odd_lift(&scalar(r(0.0))).unwrap() else {
            panic!()
        };
        assert_eq!(z, ComplexMatrix::zeros(2, 2));

        let Operator::Matrix(l) = odd_lift(&scalar(C64::new(1.0, 1.0))).unwrap() else {
            panic!()
        };
        assert_eq!(l.get(0, 1), C64::new(1.0, -1.0));
        assert_eq!(l.get(1, 0), C64::new(1.0, 1.0));
        let sq = &l * &l;
        // eigenvalues ±√2 ⇔ t̂² = 2·1
        assert!((&sq - &ComplexMatrix::identity(2).scale_real(2.0)).max_abs() < 1e-14);

        let lifted = odd_lift(&scalar(r(2.0))).unwrap();
        let n = bounded_transform(&lifted).unwrap().norm().unwrap();
        assert_abs_diff_eq!(n, 2.0 / 5f64.sqrt(), epsilon = 1e-14);

        let rect = Operator::Matrix(ComplexMatrix::zeros(2, 3));
        assert!(matches!(odd_lift(&rect), Err(GapError::ShapeMismatch(_))));
    }

    #[test]
    fn tensor_extension_of_scalar() {
        let t = tensor_extend(&ComplexMatrix::scalar(r(1.0)), 3).unwrap();
        assert_eq!(t.materialize().unwrap(), ComplexMatrix::identity(3));
        assert!(tensor_extend(&ComplexMatrix::scalar(r(1.0)), 0).is_err());
    }

    #[test]
    fn fuglede_symbols() {
        let Operator::Diagonal(s0) = fuglede_operator(0) else {
            panic!()
        };
        let Operator::Diagonal(s2) = fuglede_operator(2) else {
            panic!()
        };
        assert_eq!(
            (1..=4).map(|j| s0.value(j).re).collect::<Vec<_>>(),
            vec![1.0, 2.0, 3.0, 4.0]
        );
        assert_eq!(
            (1..=4).map(|j| s2.value(j).re).collect::<Vec<_>>(),
            vec![1.0, -2.0, 3.0, 4.0]
        );
        for n in 1..20 {
            let Operator::Diagonal(s) = fuglede_operator(n) else {
                panic!()
            };
            let diffs = (1..100).filter(|&j| s.value(j) != s0.value(j)).count();
            assert_eq!(diffs, 1);
        }
    }

    #[test]
    fn boundedness() {
        assert!(is_bounded(&scalar(r(5.0))).unwrap());
        assert!(!is_bounded(&diag_identity()).unwrap());
        assert!(is_bounded(&scalar(r(0.0))).unwrap());
        assert!(is_bounded(&Operator::identity_diagonal()).unwrap());
    }

    #[test]
    fn density_approximant_of_scalar() {
        let t1 = density_approximant(&scalar(r(1.0)), 1).unwrap();
        let target = BoundedTransform::new(
            TransformRepr::Matrix(ComplexMatrix::scalar(r(1.0 / (2.0 * 2f64.sqrt())))),
            &ToleranceConfig::default(),
        )
        .unwrap();
        let expected = from_bounded_transform(&target).unwrap();
        let d = &t1.materialize().unwrap() - &expected.materialize().unwrap();
        assert!(d.max_abs() < 1e-14);
        assert!(density_approximant(&scalar(r(1.0)), 0).is_err());
    }

    #[test]
    fn density_approximants_of_unbounded_diagonal_are_bounded() {
        for n in [1, 2, 9, 100] {
            let tn = density_approximant(&diag_identity(), n).unwrap();
            assert!(is_bounded(&tn).unwrap());
            let norm_f = bounded_transform(&tn).unwrap().norm().unwrap();
            assert_abs_diff_eq!(norm_f, n as f64 / (n as f64 + 1.0), epsilon = 1e-15);
        }
    }
}
