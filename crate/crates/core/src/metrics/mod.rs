//! Gap, Riesz and resolvent (Cayley) distances between closed operators.
//!
//! Finite representations are computed densely. Diagonal representations on
//! ℓ² reduce every metric to a supremum of scalar distances over coordinates,
//! evaluated in transform coordinates `f = F(a)` (so divergent symbols stay
//! finite) and certified past the truncation index by [`certify`].

mod certify;

use crate::error::{GapError, Result};
use crate::numkernel::{operator_norm, ComplexMatrix, ToleranceConfig, C64, I};
use crate::operators::{
    bounded_transform_tol, is_bounded_tol, operator_norm_of, q_matrix, r_matrix,
    require_selfadjoint, spectral_image, Operator, ScalarMap, SpectralImage,
};
use crate::symbol::{ContractionSymbol, TransformPoint};

use certify::{certified_sup, Coordinate, Feature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMethod {
    Projection,
    SupForm,
    Riesz,
    Tilde,
}

impl MetricMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricMethod::Projection => "projection",
            MetricMethod::SupForm => "sup_form",
            MetricMethod::Riesz => "riesz",
            MetricMethod::Tilde => "tilde",
        }
    }
}

/// A distance together with a bound on what truncation may have missed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub value: f64,
    /// Upper bound on `true distance − value`; zero for finite computations.
    pub certified_error: f64,
    pub method: MetricMethod,
    /// Last coordinate evaluated exactly, for ℓ² representations.
    pub truncation_index: Option<usize>,
}

impl MetricReport {
    fn exact(value: f64, method: MetricMethod) -> Self {
        Self {
            value,
            certified_error: 0.0,
            method,
            truncation_index: None,
        }
    }

    /// `value + certified_error`, a guaranteed upper bound.
    pub fn upper(&self) -> f64 {
        self.value + self.certified_error
    }
}

/// Constants with `m2·‖T−S‖ ≤ d(T,S) ≤ m1·‖T−S‖` for bounded `T`, `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceConstants {
    pub m1: f64,
    pub m2: f64,
}

// ---------------------------------------------------------------------------
// Dense building blocks

fn dense_pair(t: &Operator, s: &Operator) -> Option<(ComplexMatrix, ComplexMatrix)> {
    Some((t.materialize()?, s.materialize()?))
}

fn check_same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(GapError::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// `R_t`, `R_{t*}`, `t R_t` for a matrix.
struct ResolventData {
    r: ComplexMatrix,
    r_adj: ComplexMatrix,
    tr: ComplexMatrix,
}

fn resolvent_data(a: &ComplexMatrix) -> Result<ResolventData> {
    let r = r_matrix(a)?;
    let r_adj = r_matrix(&a.adjoint())?;
    let tr = a * &r;
    Ok(ResolventData { r, r_adj, tr })
}

/// Orthogonal projection onto the graph of a matrix operator,
/// `[[R_t, t*R_{t*}], [tR_t, 1 − R_{t*}]]` on `E ⊕ F`.
pub fn graph_projection(t: &Operator) -> Result<ComplexMatrix> {
    let a = t.materialize().ok_or_else(|| {
        GapError::Unsupported(format!(
            "graph projection needs a finite representation, got {}",
            t.class_name()
        ))
    })?;
    graph_projection_matrix(&a)
}

fn graph_projection_matrix(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = resolvent_data(a)?;
    let upper_right = &a.adjoint() * &d.r_adj;
    let lower_right = &ComplexMatrix::identity(a.rows()) - &d.r_adj;
    ComplexMatrix::block2x2(&d.r, &upper_right, &d.tr, &lower_right)
}

/// `‖1 − P_{G(t)} − U P_{G(t*)} U*‖` with `U(a, b) = (−b, a)` from `F ⊕ E` to `E ⊕ F`.
pub fn complement_residual(t: &Operator) -> Result<f64> {
    let a = t.materialize().ok_or_else(|| {
        GapError::Unsupported(format!(
            "complement residual needs a finite representation, got {}",
            t.class_name()
        ))
    })?;
    let (m, n) = a.shape();
    let p = graph_projection_matrix(&a)?;
    let p_adj = graph_projection_matrix(&a.adjoint())?;
    let u = ComplexMatrix::block2x2(
        &ComplexMatrix::zeros(n, m),
        &ComplexMatrix::identity(n).scale_real(-1.0),
        &ComplexMatrix::identity(m),
        &ComplexMatrix::zeros(m, n),
    )?;
    let rotated = &(&u * &p_adj) * &u.adjoint();
    let residual = &(&ComplexMatrix::identity(n + m) - &p) - &rotated;
    operator_norm(&residual)
}

/// `‖P_{G(t)} − P_{G(s)}‖` for finite representations.
pub fn gap_projection_distance(t: &Operator, s: &Operator) -> Result<MetricReport> {
    let (a, b) = dense_pair(t, s).ok_or_else(|| {
        GapError::Unsupported(format!(
            "projection-form gap needs finite representations, got {} and {}",
            t.class_name(),
            s.class_name()
        ))
    })?;
    check_same_shape(&a, &b)?;
    let d = &graph_projection_matrix(&a)? - &graph_projection_matrix(&b)?;
    Ok(MetricReport::exact(
        operator_norm(&d)?,
        MetricMethod::Projection,
    ))
}

// ---------------------------------------------------------------------------
// Per-coordinate distances in transform coordinates

type Point = TransformPoint;

fn gap_coordinate(x: Point, y: Point) -> f64 {
    (x.r() - y.r()).abs().max((x.ar() - y.ar()).norm())
}

fn riesz_coordinate(x: Point, y: Point) -> f64 {
    (x.f - y.f).norm()
}

fn resolvent_coordinate(x: Point, y: Point) -> f64 {
    (x.resolvent(1.0) - y.resolvent(1.0)).norm()
}

/// `(a − i)/(a + i)` written as `(f − i q)/(f + i q)`.
fn cayley_scalar(p: Point) -> C64 {
    C64::new(p.f.re, -p.q) / C64::new(p.f.re, p.q)
}

fn half_cayley_coordinate(x: Point, y: Point) -> f64 {
    0.5 * (cayley_scalar(x) - cayley_scalar(y)).norm()
}

/// Largest singular value of a 2×2 matrix `[[p, q], [r, s]]`.
fn norm2x2(p: C64, q: C64, r: C64, s: C64) -> f64 {
    let fro = p.norm_sqr() + q.norm_sqr() + r.norm_sqr() + s.norm_sqr();
    let det = (p * s - q * r).norm();
    ((fro + (fro * fro - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
}

/// Odd-lift blocks: `R̂ = R·1₂`, `t̂R̂ = [[0, conj(aR)], [aR, 0]]`.
fn odd_gap_coordinate(x: Point, y: Point) -> f64 {
    let dr = C64::new(x.r() - y.r(), 0.0);
    let dar = x.ar() - y.ar();
    let z = C64::new(0.0, 0.0);
    norm2x2(dr, z, z, dr).max(norm2x2(z, dar.conj(), dar, z))
}

fn odd_riesz_coordinate(x: Point, y: Point) -> f64 {
    let d = x.f - y.f;
    let z = C64::new(0.0, 0.0);
    norm2x2(z, d.conj(), d, z)
}

/// `(t̂ + i)^{-1} = t̂R̂ − iR̂` blockwise.
fn odd_resolvent_coordinate(x: Point, y: Point) -> f64 {
    let dr = x.r() - y.r();
    let dar = x.ar() - y.ar();
    let diag = C64::new(0.0, -dr);
    norm2x2(diag, dar.conj(), dar, diag)
}

fn odd_half_cayley_coordinate(x: Point, y: Point) -> f64 {
    // 1 − 2i(t̂R̂ − iR̂) = (1 − 2R)·1₂ − 2i·t̂R̂
    let cay = |p: Point| {
        let ar = p.ar();
        (C64::new(1.0 - 2.0 * p.r(), 0.0), -2.0 * I * ar.conj(), -2.0 * I * ar)
    };
    let (dx, ux, lx) = cay(x);
    let (dy, uy, ly) = cay(y);
    0.5 * norm2x2(dx - dy, ux - uy, lx - ly, dx - dy)
}

const RESOLVENT_FEATURES: &[Feature] = &[Feature::R, Feature::Ar];

const GAP: Coordinate = Coordinate {
    eval: gap_coordinate,
    features: RESOLVENT_FEATURES,
    euclidean: false,
};
const RIESZ: Coordinate = Coordinate {
    eval: riesz_coordinate,
    features: &[Feature::F],
    euclidean: false,
};
const RESOLVENT: Coordinate = Coordinate {
    eval: resolvent_coordinate,
    features: RESOLVENT_FEATURES,
    euclidean: true,
};
const HALF_CAYLEY: Coordinate = Coordinate {
    eval: half_cayley_coordinate,
    features: RESOLVENT_FEATURES,
    euclidean: true,
};
const ODD_GAP: Coordinate = Coordinate {
    eval: odd_gap_coordinate,
    ..GAP
};
const ODD_RIESZ: Coordinate = Coordinate {
    eval: odd_riesz_coordinate,
    ..RIESZ
};
const ODD_RESOLVENT: Coordinate = Coordinate {
    eval: odd_resolvent_coordinate,
    ..RESOLVENT
};
const ODD_HALF_CAYLEY: Coordinate = Coordinate {
    eval: odd_half_cayley_coordinate,
    ..RESOLVENT
};

// ---------------------------------------------------------------------------
// Pairing ℓ² representations

enum DiagonalPair {
    /// Plain or same-order shifted diagonals: coordinate-wise scalars.
    Scalar(ContractionSymbol, ContractionSymbol),
    /// Odd lifts of diagonals: coordinate-wise 2×2 blocks.
    Odd(ContractionSymbol, ContractionSymbol),
}

fn diagonal_pair(t: &Operator, s: &Operator) -> Result<DiagonalPair> {
    if let (Some(a), Some(b)) = (t.as_plain_diagonal(), s.as_plain_diagonal()) {
        return Ok(DiagonalPair::Scalar(a.to_contraction(), b.to_contraction()));
    }
    match (t, s) {
        (
            Operator::ShiftedDiagonal {
                k: k1,
                symbol: a,
                adjoint: adj1,
            },
            Operator::ShiftedDiagonal {
                k: k2,
                symbol: b,
                adjoint: adj2,
            },
        ) => {
            if k1 != k2 || adj1 != adj2 {
                return Err(GapError::Unsupported(format!(
                    "shifted diagonals of different orders (k = {k1}{}, k = {k2}{})",
                    if *adj1 { " adjoint" } else { "" },
                    if *adj2 { " adjoint" } else { "" }
                )));
            }
            // S^k is an isometry: every block of the sup form is coordinate-wise in d.
            Ok(DiagonalPair::Scalar(a.to_contraction(), b.to_contraction()))
        }
        (Operator::OddDiagonal(a), Operator::OddDiagonal(b)) => {
            Ok(DiagonalPair::Odd(a.to_contraction(), b.to_contraction()))
        }
        _ => Err(GapError::Unsupported(format!(
            "no certified distance between {} and {} operators",
            t.class_name(),
            s.class_name()
        ))),
    }
}

fn certified_report(
    a: &ContractionSymbol,
    b: &ContractionSymbol,
    coordinate: &Coordinate,
    method: MetricMethod,
) -> Result<MetricReport> {
    let c = certified_sup(a, b, coordinate)?;
    Ok(MetricReport {
        value: c.value,
        certified_error: c.certified_error,
        method,
        truncation_index: Some(c.truncation_index),
    })
}

// ---------------------------------------------------------------------------
// Metrics

/// `sup{‖R_t − R_s‖, ‖R_{t*} − R_{s*}‖, ‖tR_t − sR_s‖}`.
pub fn gap_sup_distance(t: &Operator, s: &Operator) -> Result<MetricReport> {
    if let Some((a, b)) = dense_pair(t, s) {
        check_same_shape(&a, &b)?;
        let (x, y) = (resolvent_data(&a)?, resolvent_data(&b)?);
        let value = operator_norm(&(&x.r - &y.r))?
            .max(operator_norm(&(&x.r_adj - &y.r_adj))?)
            .max(operator_norm(&(&x.tr - &y.tr))?);
        return Ok(MetricReport::exact(value, MetricMethod::SupForm));
    }
    match diagonal_pair(t, s)? {
        DiagonalPair::Scalar(a, b) => certified_report(&a, &b, &GAP, MetricMethod::SupForm),
        DiagonalPair::Odd(a, b) => {
            certified_report(&a, &b, &ODD_GAP, MetricMethod::SupForm)
        }
    }
}

/// `‖F_t − F_s‖`.
pub fn riesz_distance(t: &Operator, s: &Operator) -> Result<MetricReport> {
    if let Some((a, b)) = dense_pair(t, s) {
        check_same_shape(&a, &b)?;
        let fa = &a * &q_matrix(&a)?;
        let fb = &b * &q_matrix(&b)?;
        return Ok(MetricReport::exact(
            operator_norm(&(&fa - &fb))?,
            MetricMethod::Riesz,
        ));
    }
    match diagonal_pair(t, s)? {
        DiagonalPair::Scalar(a, b) => certified_report(&a, &b, &RIESZ, MetricMethod::Riesz),
        DiagonalPair::Odd(a, b) => {
            certified_report(&a, &b, &ODD_RIESZ, MetricMethod::Riesz)
        }
    }
}

/// `‖(t+i)^{-1} − (s+i)^{-1}‖ = ½‖c_t − c_s‖` for selfadjoint `t`, `s`.
///
/// Both sides are computed independently and must agree.
pub fn tilde_distance(t: &Operator, s: &Operator) -> Result<MetricReport> {
    tilde_distance_tol(t, s, &ToleranceConfig::default())
}

pub fn tilde_distance_tol(
    t: &Operator,
    s: &Operator,
    tol: &ToleranceConfig,
) -> Result<MetricReport> {
    require_selfadjoint(t, tol)?;
    require_selfadjoint(s, tol)?;
    let (via_resolvent, via_cayley) = if let Some((a, b)) = dense_pair(t, s) {
        check_same_shape(&a, &b)?;
        let res = |m: &ComplexMatrix| m.shift_diagonal(I).inverse();
        let cay = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            Ok(&m.shift_diagonal(-I) * &res(m)?)
        };
        let r = operator_norm(&(&res(&a)? - &res(&b)?))?;
        let c = 0.5 * operator_norm(&(&cay(&a)? - &cay(&b)?))?;
        (
            MetricReport::exact(r, MetricMethod::Tilde),
            MetricReport::exact(c, MetricMethod::Tilde),
        )
    } else {
        // Both coordinate maps read only the real part of `f`.
        match diagonal_pair(t, s)? {
            DiagonalPair::Scalar(a, b) => (
                certified_report(&a, &b, &RESOLVENT, MetricMethod::Tilde)?,
                certified_report(&a, &b, &HALF_CAYLEY, MetricMethod::Tilde)?,
            ),
            DiagonalPair::Odd(a, b) => (
                certified_report(&a, &b, &ODD_RESOLVENT, MetricMethod::Tilde)?,
                certified_report(&a, &b, &ODD_HALF_CAYLEY, MetricMethod::Tilde)?,
            ),
        }
    };
    let slack = tol.eps_residual * (1.0 + via_resolvent.value)
        + via_resolvent.certified_error
        + via_cayley.certified_error;
    if (via_resolvent.value - via_cayley.value).abs() > slack {
        return Err(GapError::NumericalFailure(format!(
            "resolvent difference {} disagrees with half Cayley difference {}",
            via_resolvent.value, via_cayley.value
        )));
    }
    Ok(via_resolvent)
}

/// `M₁ = max{‖T‖+‖S‖, 1+‖S‖(‖S‖+‖T‖)}`, `M₂ = [(1+‖T‖²)(1+‖S‖)]^{-1}`.
pub fn equivalence_constants(t: &Operator, s: &Operator) -> Result<EquivalenceConstants> {
    equivalence_constants_tol(t, s, &ToleranceConfig::default())
}

pub fn equivalence_constants_tol(
    t: &Operator,
    s: &Operator,
    tol: &ToleranceConfig,
) -> Result<EquivalenceConstants> {
    for (name, op) in [("T", t), ("S", s)] {
        if !is_bounded_tol(op, tol)? {
            return Err(GapError::NotBounded(format!(
                "{name} ({}) is unbounded",
                op.class_name()
            )));
        }
    }
    let nt = operator_norm_of(t)?;
    let ns = operator_norm_of(s)?;
    Ok(EquivalenceConstants {
        m1: (nt + ns).max(1.0 + ns * (ns + nt)),
        m2: 1.0 / ((1.0 + nt * nt) * (1.0 + ns)),
    })
}

/// `‖T − S‖` for bounded operators of the same representation.
pub fn norm_distance(t: &Operator, s: &Operator) -> Result<f64> {
    if let Some((a, b)) = dense_pair(t, s) {
        check_same_shape(&a, &b)?;
        return operator_norm(&(&a - &b));
    }
    // Scalar difference of bounded symbols, certified through the transform of `a − b`.
    match (t.as_plain_diagonal(), s.as_plain_diagonal()) {
        (Some(a), Some(b)) => {
            let len = a.prefix_len().max(b.prefix_len());
            let (a, b) = (a.with_prefix_len(len), b.with_prefix_len(len));
            let prefix: Vec<C64> = (1..=len).map(|j| a.value(j) - b.value(j)).collect();
            let tail_sup = match (a.tail(), b.tail()) {
                (x, y) if x == y => 0.0,
                (crate::symbol::Tail::Constant(x), crate::symbol::Tail::Constant(y)) => {
                    (x - y).norm()
                }
                _ => {
                    return Err(GapError::Unsupported(
                        "norm distance between non-constant tails".into(),
                    ))
                }
            };
            Ok(prefix.iter().map(|z| z.norm()).fold(tail_sup, f64::max))
        }
        _ => Err(GapError::Unsupported(format!(
            "norm distance between {} and {} operators",
            t.class_name(),
            s.class_name()
        ))),
    }
}

/// `(t + sign·i)^{-1}` for selfadjoint `t`.
pub fn resolvent(t: &Operator, sign: i8) -> Result<SpectralImage> {
    resolvent_tol(t, sign, &ToleranceConfig::default())
}

pub fn resolvent_tol(t: &Operator, sign: i8, tol: &ToleranceConfig) -> Result<SpectralImage> {
    if sign != 1 && sign != -1 {
        return Err(GapError::InvalidInput(format!("sign must be ±1, got {sign}")));
    }
    spectral_image(
        t,
        ScalarMap::Resolvent {
            sign: f64::from(sign),
        },
        tol,
    )
}

/// `‖F_T‖` of any supported operator.
pub fn transform_norm(t: &Operator) -> Result<f64> {
    bounded_transform_tol(t, &ToleranceConfig::default())?.norm()
}
