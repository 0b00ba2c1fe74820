//! Randomized property checks over seeded matrix ensembles.
//!
//! Every trial draws one operand set per [`Family`] and runs every
//! [`Property`] on it. Trials are independent and run in parallel; all
//! reductions (counts, maxima, minima) are order independent.

use std::collections::BTreeMap;

use gaplab_core::fredholm::{fredholm_index_tol, homotopy_path_tol, validate_path_tol};
use gaplab_core::metrics::{
    complement_residual, equivalence_constants_tol, resolvent_tol, tilde_distance_tol,
};
use gaplab_core::numkernel::{hermitian_apply_tol, operator_norm, svd_factor};
use gaplab_core::operators::{
    adjoint, bounded_transform_tol, cayley_transform_tol, from_bounded_transform_tol,
    is_bounded_tol, odd_lift, q_matrix, r_matrix, tensor_extend,
};
use gaplab_core::{
    gap_projection_distance, gap_sup_distance, graph_projection, riesz_distance, ComplexMatrix,
    GapError, HomotopyOutcome, Operator, SpectralImage, ToleranceConfig, C64,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::descriptor::{Descriptor, SCHEMA};
use crate::ensemble;

type CheckResult = Result<Measured, GapError>;

/// Residual of one check (pass iff `residual ≤ tolerance`) plus ratios to track.
#[derive(Debug, Clone, Default)]
pub struct Measured {
    pub residual: f64,
    pub ratios: Vec<(&'static str, f64)>,
}

impl Measured {
    fn residual(residual: f64) -> Self {
        Self {
            residual,
            ratios: Vec::new(),
        }
    }

    fn flag(failed: bool) -> Self {
        Self::residual(if failed { 1.0 } else { 0.0 })
    }
}

/// Shape constraints shared by the operands of a property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Rectangular, all of one shape.
    General,
    Square,
    Hermitian,
    /// `G*G` for random square `G`.
    Positive,
}

#[derive(Clone, Copy)]
pub struct Property {
    pub name: &'static str,
    pub family: Family,
    pub arity: usize,
    pub tolerance: f64,
    pub check: fn(&[ComplexMatrix], &ToleranceConfig) -> CheckResult,
}

const SLACK: f64 = 1e-10;

fn op(m: &ComplexMatrix) -> Operator {
    Operator::Matrix(m.clone())
}

fn norm(m: &ComplexMatrix) -> Result<f64, GapError> {
    operator_norm(m)
}

fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, GapError> {
    norm(&(a - b))
}

fn gap(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, GapError> {
    Ok(gap_sup_distance(&op(a), &op(b))?.value)
}

fn transform(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix, GapError> {
    Ok(bounded_transform_tol(&op(a), tol)?
        .materialize()
        .expect("matrix transform"))
}

fn dense(s: SpectralImage) -> ComplexMatrix {
    match s {
        SpectralImage::Matrix(m) => m,
        _ => unreachable!("matrix input gives a matrix image"),
    }
}

fn dense_op(t: Operator) -> ComplexMatrix {
    t.materialize().expect("finite operator")
}

/// Amount by which `lhs ≤ rhs` fails.
fn excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).max(0.0)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::NAN
    }
}

fn svd_reconstruction(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let a = &m[0];
    let svd = svd_factor(a)?;
    Ok(Measured::residual(dist(&svd.reconstruct(), a)? / (1.0 + norm(a)?)))
}

fn norm_matches_svd(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let a = &m[0];
    let s1 = svd_factor(a)?.singular_values[0];
    let n = norm(a)?;
    Ok(Measured::residual((n - s1).abs() / n.max(f64::MIN_POSITIVE)))
}

fn hermitian_identity(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let h = &m[0];
    Ok(Measured::residual(dist(&hermitian_apply_tol(h, |x| x, tol.eps_residual)?, h)?))
}

fn inverse_square_root(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let h = &m[0];
    let q = hermitian_apply_tol(h, |x| (1.0 + x).powf(-0.5), tol.eps_residual)?;
    let one = ComplexMatrix::identity(h.rows());
    let product = &(&q * &q) * &(&one + h);
    Ok(Measured::residual(dist(&product, &one)?))
}

fn round_trip(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let f = bounded_transform_tol(&op(&m[0]), tol)?;
    let back = dense_op(from_bounded_transform_tol(&f, tol)?);
    Ok(Measured::residual(dist(&back, &m[0])?))
}

fn adjoint_preservation(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let f_adj = bounded_transform_tol(&adjoint(&op(&m[0])), tol)?
        .materialize()
        .expect("matrix transform");
    Ok(Measured::residual(dist(&f_adj, &transform(&m[0], tol)?.adjoint())?))
}

fn transform_contraction(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let n = norm(&transform(&m[0], tol)?)?;
    let consistent = (n < 1.0 - tol.eps_bounded) == is_bounded_tol(&op(&m[0]), tol)?;
    Ok(Measured::residual(if consistent { excess(n, 1.0) } else { 1.0 }))
}

fn q_squared(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let q = q_matrix(&m[0])?;
    Ok(Measured::residual(dist(&(&q * &q), &r_matrix(&m[0])?)?))
}

fn cayley_unitarity(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let c = dense(cayley_transform_tol(&op(&m[0]), tol)?);
    let one = ComplexMatrix::identity(c.rows());
    Ok(Measured::residual(dist(&(&c.adjoint() * &c), &one)?))
}

fn cayley_resolvent(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let t = op(&m[0]);
    let c = dense(cayley_transform_tol(&t, tol)?);
    let r = dense(resolvent_tol(&t, 1, tol)?);
    let one = ComplexMatrix::identity(c.rows());
    let rhs = &one - &r.scale(C64::new(0.0, 2.0));
    Ok(Measured::residual(dist(&c, &rhs)?))
}

fn resolvent_difference(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let (t, s) = (op(&m[0]), op(&m[1]));
    let rt = dense(resolvent_tol(&t, 1, tol)?);
    let rs = dense(resolvent_tol(&s, 1, tol)?);
    let ct = dense(cayley_transform_tol(&t, tol)?);
    let cs = dense(cayley_transform_tol(&s, tol)?);
    let rhs = (&ct - &cs).scale(C64::new(0.0, 0.5));
    Ok(Measured::residual(dist(&(&rt - &rs), &rhs)?))
}

fn odd_lift_identity(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let a = &m[0];
    let l = dense_op(odd_lift(&op(a))?);
    let n = a.rows();
    let one = ComplexMatrix::identity(n);
    let lhs = &ComplexMatrix::identity(2 * n) + &(&l * &l);
    let zero = ComplexMatrix::zeros(n, n);
    let rhs = ComplexMatrix::block2x2(
        &(&one + &(&a.adjoint() * a)),
        &zero,
        &zero,
        &(&one + &(a * &a.adjoint())),
    )?;
    Ok(Measured::residual(dist(&lhs, &rhs)?.max(dist(&l, &l.adjoint())?)))
}

fn tensor_norm(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let n = norm(&m[0])?;
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let ext = dense_op(tensor_extend(&m[0], k)?);
        worst = worst.max((norm(&ext)? - n).abs());
    }
    Ok(Measured::residual(worst))
}

fn projection_laws(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let t = op(&m[0]);
    let p = graph_projection(&t)?;
    let r = dist(&(&p * &p), &p)?
        .max(dist(&p, &p.adjoint())?)
        .max(complement_residual(&t)?);
    Ok(Measured::residual(r))
}

/// Sup-form gap from explicit inverses.
fn gap_sup_oracle(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let (a, b) = (&m[0], &m[1]);
    let r = |x: &ComplexMatrix| {
        (&ComplexMatrix::identity(x.cols()) + &(&x.adjoint() * x)).inverse()
    };
    let (ra, rb) = (r(a)?, r(b)?);
    let (rsa, rsb) = (r(&a.adjoint())?, r(&b.adjoint())?);
    let oracle = dist(&ra, &rb)?
        .max(dist(&rsa, &rsb)?)
        .max(dist(&(a * &ra), &(b * &rb))?);
    Ok(Measured::residual((gap(a, b)? - oracle).abs()))
}

fn block_sandwich(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let s = gap(&m[0], &m[1])?;
    let p = gap_projection_distance(&op(&m[0]), &op(&m[1]))?.value;
    Ok(Measured {
        residual: excess(s, p).max(excess(p, 2.0 * s)),
        ratios: vec![("block.projection_over_sup", ratio(p, s))],
    })
}

fn cayley_sandwich(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let d = tilde_distance_tol(&op(&m[0]), &op(&m[1]), tol)?.value;
    let g = gap(&m[0], &m[1])?;
    Ok(Measured {
        residual: excess(0.5 * d, g).max(excess(g, d)),
        ratios: vec![("cayley.gap_over_tilde", ratio(g, d))],
    })
}

fn norm_gap_equivalence(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let (t, s) = (op(&m[0]), op(&m[1]));
    let c = equivalence_constants_tol(&t, &s, tol)?;
    let swapped = equivalence_constants_tol(&s, &t, tol)?;
    let d = dist(&m[0], &m[1])?;
    let g = gap(&m[0], &m[1])?;
    Ok(Measured {
        residual: excess(c.m2 * d, g).max(excess(g, c.m1 * d)),
        ratios: vec![
            (PROP32_UPPER, ratio(g, c.m1 * d)),
            (PROP32_LOWER, ratio(g, c.m2 * d)),
            (PROP32_LOWER_SYMMETRIC, ratio(g, c.m2.max(swapped.m2) * d)),
        ],
    })
}

const PROP32_UPPER: &str = "norm_equivalence.gap_over_m1_norm";
const PROP32_LOWER: &str = "norm_equivalence.gap_over_m2_norm";
const PROP32_LOWER_SYMMETRIC: &str = "norm_equivalence.gap_over_max_m2_norm";

fn riesz_controls_gap(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let sigma = riesz_distance(&op(&m[0]), &op(&m[1]))?.value;
    let g = gap(&m[0], &m[1])?;
    let bound = 2.0 * sigma + (2.0 * sigma).sqrt();
    Ok(Measured {
        residual: excess(g, bound),
        ratios: vec![("riesz.gap_over_bound", ratio(g, bound))],
    })
}

/// Both the drawn pair and a near perturbation `S + U/20` of `S`.
fn openness_of_bounded(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let s = &m[1];
    let near = s + &m[2].scale_real(0.05);
    let fs = norm(&transform(s, tol)?)?;
    let mut failed = false;
    for t in [&m[0], &near] {
        if gap(t, s)? < 1.0 - fs * fs {
            failed |= norm(&transform(t, tol)?)? >= 1.0;
        }
    }
    Ok(Measured::flag(failed))
}

fn odd_lift_isometry(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let lifted = gap_sup_distance(&odd_lift(&op(&m[0]))?, &odd_lift(&op(&m[1]))?)?.value;
    Ok(Measured::residual((gap(&m[0], &m[1])? - lifted).abs()))
}

fn tensor_isometry(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let base = gap(&m[0], &m[1])?;
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let ext = gap_sup_distance(&tensor_extend(&m[0], k)?, &tensor_extend(&m[1], k)?)?.value;
        worst = worst.max((base - ext).abs());
    }
    Ok(Measured::residual(worst))
}

fn axioms(d: &dyn Fn(&Operator, &Operator) -> Result<f64, GapError>, m: &[ComplexMatrix]) -> Result<f64, GapError> {
    let (x, y, z) = (op(&m[0]), op(&m[1]), op(&m[2]));
    let (xy, yx) = (d(&x, &y)?, d(&y, &x)?);
    Ok(d(&x, &x)?
        .max((xy - yx).abs())
        .max(excess(d(&x, &z)?, xy + d(&y, &z)?)))
}

fn metric_axioms(m: &[ComplexMatrix], _: &ToleranceConfig) -> CheckResult {
    let sup = axioms(&|a, b| Ok(gap_sup_distance(a, b)?.value), m)?;
    let proj = axioms(&|a, b| Ok(gap_projection_distance(a, b)?.value), m)?;
    let riesz = axioms(&|a, b| Ok(riesz_distance(a, b)?.value), m)?;
    Ok(Measured::residual(sup.max(proj).max(riesz)))
}

fn tilde_axioms(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    Ok(Measured::residual(axioms(
        &|a, b| Ok(tilde_distance_tol(a, b, tol)?.value),
        m,
    )?))
}

fn matrix_index(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    let r = fredholm_index_tol(&op(&m[0]), tol)?;
    let expected = m[0].cols() as i64 - m[0].rows() as i64;
    Ok(Measured::flag(!r.fredholm || r.index != Some(expected)))
}

fn matrix_homotopy(m: &[ComplexMatrix], tol: &ToleranceConfig) -> CheckResult {
    const EPS_STEP: f64 = 0.05;
    let expected = m[0].cols() as i64 - m[0].rows() as i64;
    match homotopy_path_tol(&op(&m[0]), &op(&m[1]), 11, EPS_STEP, tol)? {
        HomotopyOutcome::Connected(path) => Ok(Measured::flag(
            !validate_path_tol(&path, EPS_STEP, tol)
                || path.indices.iter().any(|&i| i != expected),
        )),
        HomotopyOutcome::NoPath { .. } => Ok(Measured::flag(true)),
    }
}

pub const PROPERTIES: &[Property] = &[
    Property { name: "svd_reconstruction", family: Family::General, arity: 1, tolerance: SLACK, check: svd_reconstruction },
    Property { name: "norm_matches_svd", family: Family::General, arity: 1, tolerance: 1e-12, check: norm_matches_svd },
    Property { name: "hermitian_identity", family: Family::Hermitian, arity: 1, tolerance: SLACK, check: hermitian_identity },
    Property { name: "inverse_square_root", family: Family::Positive, arity: 1, tolerance: 1e-8, check: inverse_square_root },
    Property { name: "transform_round_trip", family: Family::General, arity: 1, tolerance: 1e-8, check: round_trip },
    Property { name: "adjoint_preservation", family: Family::General, arity: 1, tolerance: SLACK, check: adjoint_preservation },
    Property { name: "transform_contraction", family: Family::General, arity: 1, tolerance: 1e-12, check: transform_contraction },
    Property { name: "q_squared_is_r", family: Family::General, arity: 1, tolerance: 1e-8, check: q_squared },
    Property { name: "cayley_unitarity", family: Family::Hermitian, arity: 1, tolerance: SLACK, check: cayley_unitarity },
    Property { name: "cayley_resolvent_identity", family: Family::Hermitian, arity: 1, tolerance: SLACK, check: cayley_resolvent },
    Property { name: "resolvent_difference", family: Family::Hermitian, arity: 2, tolerance: SLACK, check: resolvent_difference },
    Property { name: "odd_lift_identity", family: Family::Square, arity: 1, tolerance: SLACK, check: odd_lift_identity },
    Property { name: "tensor_norm", family: Family::General, arity: 1, tolerance: 1e-12, check: tensor_norm },
    Property { name: "projection_laws", family: Family::General, arity: 1, tolerance: SLACK, check: projection_laws },
    Property { name: "gap_sup_oracle", family: Family::General, arity: 2, tolerance: SLACK, check: gap_sup_oracle },
    Property { name: "block_sandwich", family: Family::General, arity: 2, tolerance: SLACK, check: block_sandwich },
    Property { name: "cayley_sandwich", family: Family::Hermitian, arity: 2, tolerance: SLACK, check: cayley_sandwich },
    Property { name: "norm_equivalence", family: Family::General, arity: 2, tolerance: SLACK, check: norm_gap_equivalence },
    Property { name: "riesz_controls_gap", family: Family::General, arity: 2, tolerance: SLACK, check: riesz_controls_gap },
    Property { name: "openness_of_bounded", family: Family::General, arity: 3, tolerance: 0.0, check: openness_of_bounded },
    Property { name: "odd_lift_isometry", family: Family::Square, arity: 2, tolerance: SLACK, check: odd_lift_isometry },
    Property { name: "tensor_isometry", family: Family::General, arity: 2, tolerance: SLACK, check: tensor_isometry },
    Property { name: "metric_axioms", family: Family::General, arity: 3, tolerance: SLACK, check: metric_axioms },
    Property { name: "tilde_axioms", family: Family::Hermitian, arity: 3, tolerance: SLACK, check: tilde_axioms },
    Property { name: "matrix_index", family: Family::General, arity: 1, tolerance: 0.0, check: matrix_index },
    Property { name: "matrix_homotopy", family: Family::General, arity: 2, tolerance: 0.0, check: matrix_homotopy },
];

pub fn property(name: &str) -> Option<&'static Property> {
    PROPERTIES.iter().find(|p| p.name == name)
}

/// Operands drawn for one trial, three per family.
pub struct TrialOperands {
    general: Vec<ComplexMatrix>,
    square: Vec<ComplexMatrix>,
    hermitian: Vec<ComplexMatrix>,
    positive: Vec<ComplexMatrix>,
}

impl TrialOperands {
    pub fn draw(seed: u64, trial: u64, dim_max: usize) -> Self {
        let mut rng = ensemble::trial_rng(seed, trial);
        let (rows, cols) = (rng.random_range(1..=dim_max), rng.random_range(1..=dim_max));
        let general = (0..3).map(|_| ensemble::matrix(&mut rng, rows, cols)).collect();
        let n = rng.random_range(1..=dim_max);
        let square = (0..3).map(|_| ensemble::matrix(&mut rng, n, n)).collect();
        let n = rng.random_range(1..=dim_max);
        let hermitian = (0..3).map(|_| ensemble::hermitian(&mut rng, n)).collect();
        let n = rng.random_range(1..=dim_max);
        let positive = (0..3)
            .map(|_| {
                let g = ensemble::matrix(&mut rng, n, n);
                &g.adjoint() * &g
            })
            .collect();
        Self {
            general,
            square,
            hermitian,
            positive,
        }
    }

    pub fn operands(&self, p: &Property) -> &[ComplexMatrix] {
        let all = match p.family {
            Family::General => &self.general,
            Family::Square => &self.square,
            Family::Hermitian => &self.hermitian,
            Family::Positive => &self.positive,
        };
        &all[..p.arity]
    }
}

/// `None` when the property holds.
fn violation(p: &Property, m: &[ComplexMatrix], tol: &ToleranceConfig) -> Option<(f64, Option<String>)> {
    match (p.check)(m, tol) {
        Ok(r) if r.residual <= p.tolerance => None,
        Ok(r) => Some((r.residual, None)),
        Err(e) => Some((f64::INFINITY, Some(e.to_string()))),
    }
}

fn submatrix(m: &ComplexMatrix, drop_row: Option<usize>, drop_col: Option<usize>) -> ComplexMatrix {
    let rows: Vec<usize> = (0..m.rows()).filter(|&i| Some(i) != drop_row).collect();
    let cols: Vec<usize> = (0..m.cols()).filter(|&j| Some(j) != drop_col).collect();
    let entries = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| m.get(i, j)))
        .collect();
    ComplexMatrix::from_row_major(rows.len(), cols.len(), entries).expect("nonempty")
}

fn with_entries(m: &ComplexMatrix, f: impl Fn(usize, usize, C64) -> C64) -> ComplexMatrix {
    let entries = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| f(i, j, m.get(i, j)))
        .collect();
    ComplexMatrix::from_row_major(m.rows(), m.cols(), entries).expect("finite")
}

/// Smaller operand sets that keep the family's shape constraints.
fn shrink_candidates(ops: &[ComplexMatrix], family: Family) -> Vec<Vec<ComplexMatrix>> {
    let (rows, cols) = ops[0].shape();
    let mut out = Vec::new();
    let all = |f: &dyn Fn(&ComplexMatrix) -> ComplexMatrix| ops.iter().map(f).collect::<Vec<_>>();
    match family {
        Family::General => {
            for i in (0..rows).filter(|_| rows > 1) {
                out.push(all(&|m| submatrix(m, Some(i), None)));
            }
            for j in (0..cols).filter(|_| cols > 1) {
                out.push(all(&|m| submatrix(m, None, Some(j))));
            }
        }
        _ => {
            for i in (0..rows).filter(|_| rows > 1) {
                out.push(all(&|m| submatrix(m, Some(i), Some(i))));
            }
        }
    }
    let zero = C64::new(0.0, 0.0);
    if family != Family::Positive {
        for (k, m) in ops.iter().enumerate() {
            for i in 0..rows {
                for j in 0..cols {
                    if m.get(i, j) == zero || (family == Family::Hermitian && j < i) {
                        continue;
                    }
                    let mut next = ops.to_vec();
                    next[k] = with_entries(m, |r, c, z| {
                        let hit = (r, c) == (i, j) || (family == Family::Hermitian && (r, c) == (j, i));
                        if hit { zero } else { z }
                    });
                    out.push(next);
                }
            }
        }
    }
    let round = |x: f64| (x * 10.0).round() / 10.0;
    let rounded = all(&|m| with_entries(m, |_, _, z| C64::new(round(z.re), round(z.im))));
    if rounded != ops {
        out.push(rounded);
    }
    out
}

const SHRINK_BUDGET: usize = 2000;

/// Greedily shrinks a failing operand set while the property still fails.
pub fn minimize(p: &Property, ops: &[ComplexMatrix], tol: &ToleranceConfig) -> Vec<ComplexMatrix> {
    let mut current = ops.to_vec();
    let mut evaluations = 0;
    'outer: while evaluations < SHRINK_BUDGET {
        for candidate in shrink_candidates(&current, p.family) {
            evaluations += 1;
            if violation(p, &candidate, tol).is_some() {
                current = candidate;
                continue 'outer;
            }
            if evaluations >= SHRINK_BUDGET {
                break;
            }
        }
        break;
    }
    current
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyStats {
    pub checked: usize,
    pub passed: usize,
    pub tolerance: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRange {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop32 {
    /// `max gap/(M₁‖T−S‖)`; at most 1 when the upper bound holds.
    pub max_ratio_upper: f64,
    /// `min gap/(M₂‖T−S‖)`; at least 1 when the lower bound holds.
    pub min_ratio_lower: f64,
    /// As `min_ratio_lower` with `M₂` maximized over both operand orders.
    pub min_ratio_lower_symmetric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub property: String,
    pub trial: u64,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Minimized operands that still violate the property.
    pub operands: Vec<Descriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub seed: u64,
    pub trials: usize,
    pub dim_max: usize,
    pub generator: String,
    pub passed: bool,
    pub properties: BTreeMap<String, PropertyStats>,
    pub ratios: BTreeMap<String, RatioRange>,
    pub prop32: Prop32,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}

struct TrialResult {
    residuals: Vec<Option<f64>>,
    ratios: Vec<(&'static str, f64)>,
    failures: Vec<(usize, f64, Option<String>)>,
}

fn run_trial(properties: &[Property], seed: u64, trial: u64, dim_max: usize, tol: &ToleranceConfig) -> TrialResult {
    let operands = TrialOperands::draw(seed, trial, dim_max);
    let mut result = TrialResult {
        residuals: Vec::with_capacity(properties.len()),
        ratios: Vec::new(),
        failures: Vec::new(),
    };
    for (k, p) in properties.iter().enumerate() {
        match (p.check)(operands.operands(p), tol) {
            Ok(m) => {
                if m.residual > p.tolerance || m.residual.is_nan() {
                    result.failures.push((k, m.residual, None));
                }
                result.residuals.push(Some(m.residual));
                result.ratios.extend(m.ratios);
            }
            Err(e) => {
                result.failures.push((k, f64::INFINITY, Some(e.to_string())));
                result.residuals.push(None);
            }
        }
    }
    result
}

pub fn run(seed: u64, trials: usize, dim_max: usize, tol: &ToleranceConfig) -> SuiteReport {
    run_properties(PROPERTIES, seed, trials, dim_max, tol)
}

pub fn run_properties(
    properties: &[Property],
    seed: u64,
    trials: usize,
    dim_max: usize,
    tol: &ToleranceConfig,
) -> SuiteReport {
    let results: Vec<TrialResult> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(properties, seed, t, dim_max, tol))
        .collect();

    let mut stats: BTreeMap<String, PropertyStats> = properties
        .iter()
        .map(|p| {
            let s = PropertyStats {
                checked: 0,
                passed: 0,
                tolerance: p.tolerance,
                max_residual: 0.0,
            };
            (p.name.to_string(), s)
        })
        .collect();
    let mut ratios: BTreeMap<String, RatioRange> = BTreeMap::new();
    let mut failures = Vec::new();

    for (trial, r) in results.iter().enumerate() {
        for (k, residual) in r.residuals.iter().enumerate() {
            let s = stats.get_mut(properties[k].name).expect("listed");
            s.checked += 1;
            s.max_residual = s.max_residual.max(residual.unwrap_or(f64::INFINITY));
        }
        for &(name, x) in r.ratios.iter().filter(|(_, x)| x.is_finite()) {
            let e = ratios
                .entry(name.to_string())
                .or_insert(RatioRange { min: x, max: x });
            e.min = e.min.min(x);
            e.max = e.max.max(x);
        }
        for (k, residual, error) in &r.failures {
            let p = &properties[*k];
            let operands = TrialOperands::draw(seed, trial as u64, dim_max);
            let small = minimize(p, operands.operands(p), tol);
            failures.push(Failure {
                property: p.name.to_string(),
                trial: trial as u64,
                residual: *residual,
                tolerance: p.tolerance,
                error: error.clone(),
                operands: small.iter().map(Descriptor::from_matrix).collect(),
            });
        }
    }
    for p in properties {
        let failed = failures.iter().filter(|f| f.property == p.name).count();
        let s = stats.get_mut(p.name).expect("listed");
        s.passed = s.checked - failed;
    }
    let range = |key: &str| ratios.get(key).copied();
    let prop32 = Prop32 {
        max_ratio_upper: range(PROP32_UPPER).map_or(0.0, |r| r.max),
        min_ratio_lower: range(PROP32_LOWER).map_or(f64::INFINITY, |r| r.min),
        min_ratio_lower_symmetric: range(PROP32_LOWER_SYMMETRIC).map_or(f64::INFINITY, |r| r.min),
    };
    SuiteReport {
        schema: SCHEMA,
        seed,
        trials,
        dim_max,
        generator: "ChaCha8Rng::seed_from_u64(seed), stream = trial index; entries re, im uniform on [-1, 1]".into(),
        passed: failures.is_empty(),
        properties: stats,
        ratios,
        prop32,
        failures,
    }
}
