//! Eigenvalue sequences of diagonal operators on ℓ².
//!
//! A symbol is a finite prefix `a_1..a_P` followed by a closed-form tail.
//! Tails are either a complex constant or a real polynomial in the index `j`,
//! optionally damped by a factor `δ ∈ (0, 1]`: the damped value is the unique
//! `a` with `F(a) = δ·F(p(j))`, where `F(a) = a/√(1+|a|²)` is the scalar
//! bounded transform. Damping is how scaled bounded transforms of polynomial
//! symbols are inverted without leaving the family.

use crate::error::{GapError, Result};
use crate::numkernel::C64;

/// Scalar bounded transform `a ↦ a/√(1+|a|²)`.
pub fn scalar_transform(a: C64) -> C64 {
    let m = a.norm();
    if !m.is_finite() {
        return if a.re.is_infinite() || a.im.is_infinite() {
            let dir = C64::new(a.re.clamp(-1.0, 1.0), a.im.clamp(-1.0, 1.0));
            dir / dir.norm()
        } else {
            C64::new(f64::NAN, f64::NAN)
        };
    }
    a / 1f64.hypot(m)
}

/// Inverse of [`scalar_transform`] on the open unit disk.
pub fn inverse_scalar_transform(f: C64) -> C64 {
    let m2 = f.norm_sqr();
    f / (1.0 - m2).sqrt()
}

/// `√(1 − |f|²)`, i.e. `Q = (1+|a|²)^{-1/2}` written in transform coordinates.
pub(crate) fn defect_sqrt(f: C64) -> f64 {
    (1.0 - f.norm_sqr()).max(0.0).sqrt()
}

/// A coordinate in transform form: `f = F(a)` together with `q = (1+|a|²)^{-1/2}`.
///
/// `q` is carried separately because `√(1 − |f|²)` cancels catastrophically
/// when `|a|` is large.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformPoint {
    pub f: C64,
    pub q: f64,
}

impl TransformPoint {
    pub fn of_value(a: C64) -> Self {
        let m = a.norm();
        if m.is_infinite() {
            return Self {
                f: scalar_transform(a),
                q: 0.0,
            };
        }
        let h = 1f64.hypot(m);
        Self { f: a / h, q: 1.0 / h }
    }

    pub fn of_transform(f: C64) -> Self {
        Self {
            f,
            q: defect_sqrt(f),
        }
    }

    /// `R = (1+|a|²)^{-1}`.
    pub fn r(&self) -> f64 {
        self.q * self.q
    }

    /// `aR = F(a)·Q`.
    pub fn ar(&self) -> C64 {
        self.f * self.q
    }

    /// `(a + σi)^{-1} = aR − σiR` for real `a`.
    pub fn resolvent(&self, sign: f64) -> C64 {
        C64::new(self.f.re * self.q, -sign * self.r())
    }

    /// `(c·f, √(1 − c²|f|²))` computed as `√((1−c²)|f|² + q²)`.
    fn scaled(&self, c: f64) -> Self {
        Self {
            f: self.f * c,
            q: ((1.0 - c * c) * self.f.norm_sqr() + self.q * self.q).sqrt(),
        }
    }

    fn conj(&self) -> Self {
        Self {
            f: self.f.conj(),
            q: self.q,
        }
    }
}

/// Real polynomial evaluated by Horner's rule; `coeffs[i]` multiplies `x^i`.
fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn real_transform(x: f64) -> f64 {
    if x.is_infinite() {
        x.signum()
    } else {
        x / 1f64.hypot(x)
    }
}

/// Cauchy bound on the moduli of the roots of a polynomial of degree ≥ 1.
fn cauchy_root_bound(coeffs: &[f64]) -> f64 {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].abs();
    1.0 + coeffs[..d]
        .iter()
        .map(|c| c.abs() / lead)
        .fold(0.0, f64::max)
}

/// Closed-form continuation of a symbol past its prefix.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// Real polynomial of degree ≥ 1 (leading coefficient nonzero), damped by `damping ∈ (0, 1]`.
    Polynomial { coeffs: Vec<f64>, damping: f64 },
    Constant(C64),
}

impl Tail {
    /// Undamped polynomial tail; degree 0 and the zero polynomial become constants.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        Self::damped_polynomial(coeffs, 1.0)
    }

    pub fn damped_polynomial(mut coeffs: Vec<f64>, damping: f64) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(GapError::InvalidInput(format!(
                "non-finite polynomial coefficient {c}"
            )));
        }
        if !(damping > 0.0 && damping <= 1.0) {
            return Err(GapError::InvalidInput(format!(
                "damping must lie in (0, 1], got {damping}"
            )));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        match coeffs.len() {
            0 => Ok(Tail::Constant(C64::new(0.0, 0.0))),
            1 => Ok(Tail::Constant(damp(C64::new(coeffs[0], 0.0), damping))),
            _ => Ok(Tail::Polynomial { coeffs, damping }),
        }
    }

    pub fn constant(value: C64) -> Result<Self> {
        if !value.is_finite() {
            return Err(GapError::InvalidInput(format!(
                "non-finite constant tail {value}"
            )));
        }
        Ok(Tail::Constant(value))
    }

    pub fn degree(&self) -> usize {
        match self {
            Tail::Polynomial { coeffs, .. } => coeffs.len() - 1,
            Tail::Constant(_) => 0,
        }
    }

    /// The operator diverges along this tail (undamped, nonconstant polynomial).
    pub fn is_divergent(&self) -> bool {
        matches!(self, Tail::Polynomial { damping, .. } if *damping == 1.0)
    }

    pub fn is_real(&self, eps: f64) -> bool {
        match self {
            Tail::Polynomial { .. } => true,
            Tail::Constant(c) => c.im.abs() <= eps,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Tail::Polynomial { .. } => self.clone(),
            Tail::Constant(c) => Tail::Constant(c.conj()),
        }
    }

    /// `a_j` for an index in the tail region.
    pub fn value(&self, j: usize) -> C64 {
        match self {
            Tail::Polynomial { coeffs, damping } => {
                let p = horner(coeffs, j as f64);
                C64::new(damp_real(p, *damping), 0.0)
            }
            Tail::Constant(c) => *c,
        }
    }

    /// `F(a_j)`, evaluated without forming `a_j` so it stays accurate for huge `j`.
    pub fn transform_value(&self, j: usize) -> C64 {
        match self {
            Tail::Polynomial { coeffs, damping } => {
                C64::new(damping * real_transform(horner(coeffs, j as f64)), 0.0)
            }
            Tail::Constant(c) => scalar_transform(*c),
        }
    }

    /// `F(a_j)` and `Q(a_j)` for an index in the tail region.
    pub fn transform_point(&self, j: usize) -> TransformPoint {
        match self {
            Tail::Polynomial { coeffs, damping } => {
                let p = horner(coeffs, j as f64);
                TransformPoint::of_value(C64::new(p, 0.0)).scaled(*damping)
            }
            Tail::Constant(c) => TransformPoint::of_value(*c),
        }
    }

    pub fn limit_point(&self) -> TransformPoint {
        match self {
            Tail::Polynomial { coeffs, damping } => TransformPoint {
                f: C64::new(damping * coeffs.last().unwrap().signum(), 0.0),
                q: (1.0 - damping * damping).sqrt(),
            },
            Tail::Constant(c) => TransformPoint::of_value(*c),
        }
    }

    /// `lim_{j→∞} F(a_j)`.
    pub fn limit_transform(&self) -> C64 {
        match self {
            Tail::Polynomial { coeffs, damping } => {
                C64::new(damping * coeffs.last().unwrap().signum(), 0.0)
            }
            Tail::Constant(c) => scalar_transform(*c),
        }
    }

    /// `sup_j |F(a_j)|` over the whole tail; attained only for constants.
    pub fn transform_sup(&self) -> f64 {
        match self {
            Tail::Polynomial { damping, .. } => *damping,
            Tail::Constant(c) => scalar_transform(*c).norm(),
        }
    }

    /// `sup_j |a_j|` over the tail, infinite for divergent tails.
    pub fn value_sup(&self) -> f64 {
        match self {
            Tail::Polynomial { damping, .. } => {
                if *damping == 1.0 {
                    f64::INFINITY
                } else {
                    damping / (1.0 - damping * damping).sqrt()
                }
            }
            Tail::Constant(c) => c.norm(),
        }
    }

    /// First index from which the tail is monotone in `j`, of fixed sign and nonzero.
    ///
    /// Past every real root of `p` and `p'` the polynomial keeps its sign and is
    /// strictly monotone; the Cauchy bound locates those roots.
    pub fn monotone_from(&self) -> usize {
        match self {
            Tail::Constant(_) => 1,
            Tail::Polynomial { coeffs, .. } => {
                let mut bound = cauchy_root_bound(coeffs);
                if coeffs.len() > 2 {
                    let deriv: Vec<f64> = coeffs[1..]
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c * (i + 1) as f64)
                        .collect();
                    bound = bound.max(cauchy_root_bound(&deriv));
                }
                bound.floor() as usize + 1
            }
        }
    }

    /// Rescales the tail's transform values by `c ∈ (0, 1]`.
    pub(crate) fn scale_transform(&self, c: f64) -> Self {
        match self {
            Tail::Polynomial { coeffs, damping } => Tail::Polynomial {
                coeffs: coeffs.clone(),
                damping: damping * c,
            },
            Tail::Constant(a) => Tail::Constant(damp(*a, c)),
        }
    }

    /// Affine combination `(1−λ)·self + λ·other` of two tails of the same family.
    ///
    /// Polynomial tails interpolate coefficients and require equal damping;
    /// constants interpolate linearly.
    pub fn interpolate(&self, other: &Tail, lambda: f64) -> Result<Tail> {
        match (self, other) {
            (Tail::Constant(a), Tail::Constant(b)) => {
                Tail::constant(*a * (1.0 - lambda) + *b * lambda)
            }
            (
                Tail::Polynomial {
                    coeffs: ca,
                    damping: da,
                },
                Tail::Polynomial {
                    coeffs: cb,
                    damping: db,
                },
            ) if da == db => {
                let n = ca.len().max(cb.len());
                let coeffs = (0..n)
                    .map(|i| {
                        let x = ca.get(i).copied().unwrap_or(0.0);
                        let y = cb.get(i).copied().unwrap_or(0.0);
                        (1.0 - lambda) * x + lambda * y
                    })
                    .collect();
                Tail::damped_polynomial(coeffs, *da)
            }
            _ => Err(GapError::Unsupported(
                "tails of different families (or different damping) cannot be interpolated"
                    .into(),
            )),
        }
    }
}

/// `a ↦ F⁻¹(δ·F(a))` for complex `a`.
pub fn damp(a: C64, damping: f64) -> C64 {
    if damping == 1.0 {
        return a;
    }
    a * damping / (1.0 + (1.0 - damping * damping) * a.norm_sqr()).sqrt()
}

fn damp_real(p: f64, damping: f64) -> f64 {
    if damping == 1.0 {
        return p;
    }
    if p.is_infinite() || (1.0 - damping * damping) * p * p > 1e300 {
        return p.signum() * damping / (1.0 - damping * damping).sqrt();
    }
    p * damping / (1.0 + (1.0 - damping * damping) * p * p).sqrt()
}

/// Eigenvalue sequence of a diagonal operator, indexed from `j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    prefix: Vec<C64>,
    tail: Tail,
}

impl SymbolSpec {
    pub fn new(prefix: Vec<C64>, tail: Tail) -> Result<Self> {
        if let Some(j) = prefix.iter().position(|z| !z.is_finite()) {
            return Err(GapError::InvalidInput(format!(
                "non-finite symbol value at index {}",
                j + 1
            )));
        }
        Ok(Self { prefix, tail })
    }

    /// Symbol with the given prefix and an undamped polynomial tail.
    pub fn polynomial(prefix: Vec<C64>, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(prefix, Tail::polynomial(coeffs)?)
    }

    pub fn constant(prefix: Vec<C64>, value: C64) -> Result<Self> {
        Self::new(prefix, Tail::constant(value)?)
    }

    pub fn prefix(&self) -> &[C64] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    /// `a_j` for `j ≥ 1`.
    pub fn value(&self, j: usize) -> C64 {
        debug_assert!(j >= 1);
        match self.prefix.get(j - 1) {
            Some(&a) => a,
            None => self.tail.value(j),
        }
    }

    pub fn transform_value(&self, j: usize) -> C64 {
        match self.prefix.get(j - 1) {
            Some(&a) => scalar_transform(a),
            None => self.tail.transform_value(j),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            prefix: self.prefix.iter().map(|z| z.conj()).collect(),
            tail: self.tail.conj(),
        }
    }

    /// Real-valued up to `eps` in the imaginary parts.
    pub fn is_real(&self, eps: f64) -> bool {
        self.prefix.iter().all(|z| z.im.abs() <= eps) && self.tail.is_real(eps)
    }

    /// Coordinate-wise transform.
    pub fn to_contraction(&self) -> ContractionSymbol {
        ContractionSymbol {
            prefix: self
                .prefix
                .iter()
                .map(|&a| TransformPoint::of_value(a))
                .collect(),
            tail: self.tail.clone(),
        }
    }

    /// Same sequence with its prefix extended to length `len` by tail values.
    pub fn with_prefix_len(&self, len: usize) -> Self {
        let mut prefix = self.prefix.clone();
        for j in prefix.len() + 1..=len {
            prefix.push(self.tail.value(j));
        }
        Self {
            prefix,
            tail: self.tail.clone(),
        }
    }

    /// `sup_j |a_j|`.
    pub fn sup_modulus(&self) -> f64 {
        let p = self.prefix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let window = self.tail_window_max(|j| self.tail.value(j).norm());
        p.max(window).max(self.tail.value_sup())
    }

    /// Maximum of `g(j)` over tail indices before the tail becomes monotone.
    fn tail_window_max(&self, g: impl Fn(usize) -> f64) -> f64 {
        let start = self.prefix.len() + 1;
        let end = self.tail.monotone_from().max(start);
        (start..=end).map(g).fold(0.0, f64::max)
    }

    /// Indices `j` (1-based) with `|a_j| ≤ eps`, or `None` when there are infinitely many.
    pub fn zero_indices(&self, eps: f64) -> Option<Vec<usize>> {
        if let Tail::Constant(c) = self.tail {
            if c.norm() <= eps {
                return None;
            }
        }
        let mut zeros: Vec<usize> = self
            .prefix
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() <= eps)
            .map(|(i, _)| i + 1)
            .collect();
        if let Tail::Polynomial { .. } = self.tail {
            let start = self.prefix.len() + 1;
            let end = self.tail.monotone_from().max(start);
            zeros.extend((start..=end).filter(|&j| self.tail.value(j).norm() <= eps));
        }
        Some(zeros)
    }

    /// Indices with `eps < |a_j| ≤ 100·eps`: close enough to the zero threshold to
    /// make the kernel count sensitive to rounding.
    pub fn near_zero_indices(&self, eps: f64) -> Vec<usize> {
        let near = |z: C64| z.norm() > eps && z.norm() <= 100.0 * eps;
        let mut out: Vec<usize> = self
            .prefix
            .iter()
            .enumerate()
            .filter(|(_, z)| near(**z))
            .map(|(i, _)| i + 1)
            .collect();
        match self.tail {
            Tail::Polynomial { .. } => {
                let start = self.prefix.len() + 1;
                let end = self.tail.monotone_from().max(start);
                out.extend((start..=end).filter(|&j| near(self.tail.value(j))));
            }
            Tail::Constant(c) => {
                if near(c) {
                    out.push(self.prefix.len() + 1);
                }
            }
        }
        out
    }

    /// Coordinate-wise `(1−λ)·self + λ·other`; prefixes are padded with tail values.
    pub fn interpolate(&self, other: &SymbolSpec, lambda: f64) -> Result<SymbolSpec> {
        let len = self.prefix.len().max(other.prefix.len());
        let a = self.with_prefix_len(len);
        let b = other.with_prefix_len(len);
        let prefix = a
            .prefix
            .iter()
            .zip(&b.prefix)
            .map(|(x, y)| *x * (1.0 - lambda) + *y * lambda)
            .collect();
        SymbolSpec::new(prefix, self.tail.interpolate(&other.tail, lambda)?)
    }
}

/// Coordinate-wise bounded transform of a symbol: `f_j = F(a_j)`.
///
/// The prefix holds transform values; the tail keeps the describing tail of
/// the underlying operator, whose transform values are computed on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionSymbol {
    prefix: Vec<TransformPoint>,
    tail: Tail,
}

impl ContractionSymbol {
    pub fn new(prefix: Vec<C64>, tail: Tail) -> Result<Self> {
        if let Some(j) = prefix.iter().position(|z| !z.is_finite() || z.norm() > 1.0) {
            return Err(GapError::InvalidInput(format!(
                "contraction symbol value at index {} has modulus above 1",
                j + 1
            )));
        }
        Ok(Self {
            prefix: prefix.into_iter().map(TransformPoint::of_transform).collect(),
            tail,
        })
    }

    /// Prefix transform values `f_1..f_P`.
    pub fn prefix(&self) -> Vec<C64> {
        self.prefix.iter().map(|p| p.f).collect()
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    /// `f_j` for `j ≥ 1`.
    pub fn value(&self, j: usize) -> C64 {
        debug_assert!(j >= 1);
        self.point(j).f
    }

    /// `(f_j, q_j)` for `j ≥ 1`.
    pub fn point(&self, j: usize) -> TransformPoint {
        debug_assert!(j >= 1);
        match self.prefix.get(j - 1) {
            Some(&p) => p,
            None => self.tail.transform_point(j),
        }
    }

    pub fn limit(&self) -> C64 {
        self.tail.limit_transform()
    }

    pub fn limit_point(&self) -> TransformPoint {
        self.tail.limit_point()
    }

    pub fn conj(&self) -> Self {
        Self {
            prefix: self.prefix.iter().map(TransformPoint::conj).collect(),
            tail: self.tail.conj(),
        }
    }

    pub fn is_real(&self, eps: f64) -> bool {
        self.prefix.iter().all(|p| p.f.im.abs() <= eps) && self.tail.is_real(eps)
    }

    /// `c·F` for `c ∈ (0, 1]`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(GapError::InvalidInput(format!(
                "contraction scale must lie in (0, 1], got {c}"
            )));
        }
        Ok(Self {
            prefix: self.prefix.iter().map(|p| p.scaled(c)).collect(),
            tail: self.tail.scale_transform(c),
        })
    }

    /// `sup_j |f_j|`, exact: the prefix maximum against the tail supremum.
    pub fn sup_modulus(&self) -> f64 {
        let p = self.prefix.iter().map(|p| p.f.norm()).fold(0.0, f64::max);
        p.max(self.tail.transform_sup())
    }

    /// Largest prefix modulus, i.e. the part of the supremum that can be attained.
    pub fn prefix_sup(&self) -> f64 {
        self.prefix.iter().map(|p| p.f.norm()).fold(0.0, f64::max)
    }

    /// Coordinate-wise inverse transform. Requires `|f_j| < 1` on the prefix.
    pub fn to_symbol(&self) -> Result<SymbolSpec> {
        let mut prefix = Vec::with_capacity(self.prefix.len());
        for (i, p) in self.prefix.iter().enumerate() {
            if p.q <= 0.0 {
                return Err(GapError::InvalidInput(format!(
                    "transform value at index {} has modulus {} ≥ 1",
                    i + 1,
                    p.f.norm()
                )));
            }
            prefix.push(p.f / p.q);
        }
        SymbolSpec::new(prefix, self.tail.clone())
    }
}
