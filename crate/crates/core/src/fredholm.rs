//! Fredholm detection, index computation and index-preserving homotopies.

use std::fmt;

use crate::error::{GapError, Result};
use crate::metrics::gap_sup_distance;
use crate::numkernel::{numerical_rank, ComplexMatrix, ToleranceConfig, C64, I};
use crate::operators::Operator;
use crate::symbol::{SymbolSpec, Tail};

/// Hard cap on the number of samples of a refined homotopy grid.
pub const MAX_PATH_SAMPLES: usize = 1 << 14;

/// Dimension of a kernel or cokernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dimension::Finite(n) => Some(n),
            Dimension::Infinite => None,
        }
    }

    fn times(self, k: usize) -> Self {
        match self {
            Dimension::Finite(n) => Dimension::Finite(n * k),
            Dimension::Infinite => Dimension::Infinite,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub dim_ker: Dimension,
    pub dim_coker: Dimension,
    /// `dim_ker − dim_coker`, present exactly when `fredholm` holds.
    pub index: Option<i64>,
    pub fredholm: bool,
    pub reason: String,
}

/// Kernel dimensions of `t` and `t*`.
pub fn kernel_dims(t: &Operator) -> Result<(Dimension, Dimension)> {
    kernel_dims_tol(t, &ToleranceConfig::default())
}

pub fn kernel_dims_tol(t: &Operator, tol: &ToleranceConfig) -> Result<(Dimension, Dimension)> {
    let symbol_zeros = |s: &SymbolSpec| match s.zero_indices(tol.eps_rank) {
        Some(z) => Dimension::Finite(z.len()),
        None => Dimension::Infinite,
    };
    Ok(match t {
        Operator::Matrix(m) => matrix_dims(m, tol)?,
        Operator::TensorExtended {
            inner,
            multiplicity,
        } => {
            let (k, c) = matrix_dims(inner, tol)?;
            (k.times(*multiplicity), c.times(*multiplicity))
        }
        Operator::Diagonal(s) => {
            let z = symbol_zeros(s);
            (z, z)
        }
        Operator::OddDiagonal(s) => {
            let z = symbol_zeros(s).times(2);
            (z, z)
        }
        Operator::ShiftedDiagonal { k, symbol, adjoint } => {
            let z = symbol_zeros(symbol);
            let shifted = match z {
                Dimension::Finite(n) => Dimension::Finite(n + k),
                Dimension::Infinite => Dimension::Infinite,
            };
            if *adjoint {
                (shifted, z)
            } else {
                (z, shifted)
            }
        }
    })
}

fn matrix_dims(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<(Dimension, Dimension)> {
    let r = numerical_rank(m, tol.eps_rank)?;
    Ok((
        Dimension::Finite(m.cols() - r),
        Dimension::Finite(m.rows() - r),
    ))
}

fn symbol_of(t: &Operator) -> Option<&SymbolSpec> {
    match t {
        Operator::Diagonal(s) | Operator::OddDiagonal(s) => Some(s),
        Operator::ShiftedDiagonal { symbol, .. } => Some(symbol),
        _ => None,
    }
}

pub fn fredholm_index(t: &Operator) -> Result<IndexReport> {
    fredholm_index_tol(t, &ToleranceConfig::default())
}

/// Closed range is decided from the tail family: a nonzero constant tail is
/// bounded away from zero and a polynomial tail has a nonzero limit or diverges.
pub fn fredholm_index_tol(t: &Operator, tol: &ToleranceConfig) -> Result<IndexReport> {
    let (dim_ker, dim_coker) = kernel_dims_tol(t, tol)?;
    let mut notes = Vec::new();
    if let Some(s) = symbol_of(t) {
        let near = s.near_zero_indices(tol.eps_rank);
        if !near.is_empty() {
            notes.push(format!(
                "symbol values within 100x of the zero threshold at indices {near:?}"
            ));
        }
    }
    let report = match (dim_ker, dim_coker) {
        (Dimension::Finite(k), Dimension::Finite(c)) => {
            let base = match t {
                Operator::Matrix(_) | Operator::TensorExtended { .. } => "finite-dimensional",
                _ => match symbol_of(t).map(SymbolSpec::tail) {
                    Some(Tail::Polynomial { damping, .. }) if *damping == 1.0 => {
                        "divergent tail gives closed range"
                    }
                    _ => "tail bounded away from zero gives closed range",
                },
            };
            notes.insert(0, base.to_string());
            IndexReport {
                dim_ker,
                dim_coker,
                index: Some(k as i64 - c as i64),
                fredholm: true,
                reason: notes.join("; "),
            }
        }
        _ => {
            notes.insert(0, "not Fredholm: infinite-dimensional kernel".to_string());
            IndexReport {
                dim_ker,
                dim_coker,
                index: None,
                fredholm: false,
                reason: notes.join("; "),
            }
        }
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyPath {
    pub lambdas: Vec<f64>,
    pub samples: Vec<Operator>,
    /// Certified upper bounds on the gap between consecutive samples.
    pub step_gaps: Vec<f64>,
    pub indices: Vec<i64>,
}

impl HomotopyPath {
    pub fn index(&self) -> Option<i64> {
        self.indices.first().copied()
    }

    pub fn max_step_gap(&self) -> f64 {
        self.step_gaps.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HomotopyOutcome {
    Connected(HomotopyPath),
    NoPath {
        reason: String,
        index_a: Option<i64>,
        index_b: Option<i64>,
    },
}

/// A continuous family `λ ↦ t(λ)` on `[0, 1]`.
type Family = Box<dyn Fn(f64) -> Result<Operator> + Sync>;

pub fn homotopy_path(
    t0: &Operator,
    t1: &Operator,
    steps: usize,
    eps_step: f64,
) -> Result<HomotopyOutcome> {
    homotopy_path_tol(t0, t1, steps, eps_step, &ToleranceConfig::default())
}

/// Connects `t0` to `t1` through Fredholm operators of constant index, or
/// reports the index obstruction.
pub fn homotopy_path_tol(
    t0: &Operator,
    t1: &Operator,
    steps: usize,
    eps_step: f64,
    tol: &ToleranceConfig,
) -> Result<HomotopyOutcome> {
    if steps < 2 {
        return Err(GapError::InvalidInput(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    if !(eps_step > 0.0 && eps_step.is_finite()) {
        return Err(GapError::InvalidInput(format!(
            "eps_step must be positive, got {eps_step}"
        )));
    }
    let ra = fredholm_index_tol(t0, tol)?;
    let rb = fredholm_index_tol(t1, tol)?;
    for (name, r) in [("first", &ra), ("second", &rb)] {
        if !r.fredholm {
            return Err(GapError::InvalidInput(format!(
                "{name} endpoint: {}",
                r.reason
            )));
        }
    }
    if ra.index != rb.index {
        return Ok(HomotopyOutcome::NoPath {
            reason: "index mismatch".into(),
            index_a: ra.index,
            index_b: rb.index,
        });
    }
    let index = ra.index.expect("fredholm");
    let family = family(t0, t1)?;
    refine(t0, t1, &family, index, steps, eps_step, tol).map(HomotopyOutcome::Connected)
}

fn family(t0: &Operator, t1: &Operator) -> Result<Family> {
    let lerp = |a: &ComplexMatrix, b: &ComplexMatrix, l: f64| &a.scale_real(1.0 - l) + &b.scale_real(l);
    if let (Some(a), Some(b)) = (t0.as_plain_diagonal(), t1.as_plain_diagonal()) {
        return symbol_family(&a, &b, Operator::Diagonal);
    }
    match (t0, t1) {
        (Operator::Matrix(a), Operator::Matrix(b)) => {
            if a.shape() != b.shape() {
                return Err(GapError::Unsupported(format!(
                    "matrices of shapes {}x{} and {}x{} cannot be interpolated",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols()
                )));
            }
            let (a, b) = (a.clone(), b.clone());
            Ok(Box::new(move |l| Ok(Operator::Matrix(lerp(&a, &b, l)))))
        }
        (
            Operator::TensorExtended {
                inner: a,
                multiplicity: ka,
            },
            Operator::TensorExtended {
                inner: b,
                multiplicity: kb,
            },
        ) => {
            if a.shape() != b.shape() || ka != kb {
                return Err(GapError::Unsupported(
                    "tensor extensions of different shape or multiplicity".into(),
                ));
            }
            let (a, b, k) = (a.clone(), b.clone(), *ka);
            Ok(Box::new(move |l| {
                Ok(Operator::TensorExtended {
                    inner: lerp(&a, &b, l),
                    multiplicity: k,
                })
            }))
        }
        (
            Operator::ShiftedDiagonal {
                k: ka,
                symbol: a,
                adjoint: adj_a,
            },
            Operator::ShiftedDiagonal {
                k: kb,
                symbol: b,
                adjoint: adj_b,
            },
        ) if ka == kb && adj_a == adj_b => {
            let (k, adjoint) = (*ka, *adj_a);
            symbol_family(a, b, move |symbol| Operator::ShiftedDiagonal {
                k,
                symbol,
                adjoint,
            })
        }
        (Operator::OddDiagonal(a), Operator::OddDiagonal(b)) => {
            symbol_family(a, b, Operator::OddDiagonal)
        }
        _ => Err(GapError::Unsupported(format!(
            "no homotopy between {} and {} representations",
            t0.class_name(),
            t1.class_name()
        ))),
    }
}

/// Symbol interpolation, detouring constant tails whose segment passes through 0.
fn symbol_family<W>(a: &SymbolSpec, b: &SymbolSpec, wrap: W) -> Result<Family>
where
    W: Fn(SymbolSpec) -> Operator + Sync + 'static,
{
    match (a.tail(), b.tail()) {
        (
            Tail::Polynomial {
                coeffs: ca,
                damping: da,
            },
            Tail::Polynomial {
                coeffs: cb,
                damping: db,
            },
        ) => {
            if da != db {
                return Err(GapError::Unsupported(
                    "polynomial tails with different damping cannot be interpolated".into(),
                ));
            }
            let (la, lb) = (ca.last().unwrap(), cb.last().unwrap());
            if la.signum() != lb.signum() {
                return Err(GapError::Unsupported(format!(
                    "tails tend to opposite infinities (leading coefficients {la} and {lb}); \
                     every coordinate would have to cross zero, which no path of diagonal \
                     Fredholm operators allows"
                )));
            }
        }
        (Tail::Constant(x), Tail::Constant(y)) => {
            if segment_distance_to_zero(*x, *y) == 0.0 {
                let via = SymbolSpec::new(a.prefix().to_vec(), Tail::constant(*x * I)?)?;
                let (a, b) = (a.clone(), b.clone());
                return Ok(Box::new(move |l| {
                    let s = if l <= 0.5 {
                        a.interpolate(&via, 2.0 * l)?
                    } else {
                        via.interpolate(&b, 2.0 * l - 1.0)?
                    };
                    Ok(wrap(s))
                }));
            }
        }
        _ => {
            return Err(GapError::Unsupported(
                "tails of different families cannot be interpolated".into(),
            ))
        }
    }
    let (a, b) = (a.clone(), b.clone());
    Ok(Box::new(move |l| Ok(wrap(a.interpolate(&b, l)?))))
}

fn segment_distance_to_zero(x: C64, y: C64) -> f64 {
    let d = y - x;
    if d.norm_sqr() == 0.0 {
        return x.norm();
    }
    let t = (-(x.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0);
    (x + d * t).norm()
}

fn lambda_at(i: usize, intervals: usize) -> f64 {
    i as f64 / intervals as f64
}

fn step_gap(a: &Operator, b: &Operator) -> Result<f64> {
    Ok(gap_sup_distance(a, b)?.upper())
}

fn refine(
    t0: &Operator,
    t1: &Operator,
    family: &Family,
    index: i64,
    steps: usize,
    eps_step: f64,
    tol: &ToleranceConfig,
) -> Result<HomotopyPath> {
    let mut intervals = steps - 1;
    let sample = |i: usize, intervals: usize| -> Result<Operator> {
        if i == 0 {
            Ok(t0.clone())
        } else if i == intervals {
            Ok(t1.clone())
        } else {
            family(lambda_at(i, intervals))
        }
    };
    let mut samples: Vec<Operator> = (0..=intervals)
        .map(|i| sample(i, intervals))
        .collect::<Result<_>>()?;
    let mut gaps: Vec<f64> = samples
        .windows(2)
        .map(|w| step_gap(&w[0], &w[1]))
        .collect::<Result<_>>()?;
    loop {
        let worst = gaps.iter().copied().fold(0.0, f64::max);
        if worst <= eps_step {
            break;
        }
        if 2 * intervals + 1 > MAX_PATH_SAMPLES {
            return Err(GapError::NumericalFailure(format!(
                "step gap {worst} still exceeds {eps_step} with {} samples",
                intervals + 1
            )));
        }
        let finer = 2 * intervals;
        let mut next_samples = Vec::with_capacity(finer + 1);
        let mut next_gaps = Vec::with_capacity(finer);
        for (i, s) in samples.iter().enumerate() {
            next_samples.push(s.clone());
            if i < intervals {
                let mid = sample(2 * i + 1, finer)?;
                next_gaps.push(step_gap(s, &mid)?);
                next_gaps.push(step_gap(&mid, &samples[i + 1])?);
                next_samples.push(mid);
            }
        }
        samples = next_samples;
        gaps = next_gaps;
        intervals = finer;
    }
    let mut indices = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        let r = fredholm_index_tol(s, tol)?;
        match r.index {
            Some(k) if k == index => indices.push(k),
            _ => {
                return Err(GapError::NumericalFailure(format!(
                    "sample at lambda = {} has index {:?} ({}), expected {index}",
                    lambda_at(i, intervals),
                    r.index,
                    r.reason
                )))
            }
        }
    }
    Ok(HomotopyPath {
        lambdas: (0..=intervals).map(|i| lambda_at(i, intervals)).collect(),
        samples,
        step_gaps: gaps,
        indices,
    })
}

/// Re-certifies a path: every sample Fredholm with one common index, and every
/// recomputed step gap at most `eps_step`.
pub fn validate_path(p: &HomotopyPath, eps_step: f64) -> bool {
    validate_path_tol(p, eps_step, &ToleranceConfig::default())
}

pub fn validate_path_tol(p: &HomotopyPath, eps_step: f64, tol: &ToleranceConfig) -> bool {
    let n = p.samples.len();
    if n == 0
        || p.indices.len() != n
        || p.lambdas.len() != n
        || p.step_gaps.len() + 1 != n
        || p.step_gaps.iter().any(|g| !(*g <= eps_step))
    {
        return false;
    }
    let mut common = None;
    for (s, &recorded) in p.samples.iter().zip(&p.indices) {
        let Ok(r) = fredholm_index_tol(s, tol) else {
            return false;
        };
        match r.index {
            Some(k) if k == recorded && common.map_or(true, |c| c == k) => common = Some(k),
            _ => return false,
        }
    }
    p.samples
        .windows(2)
        .all(|w| matches!(step_gap(&w[0], &w[1]), Ok(g) if g <= eps_step))
}
