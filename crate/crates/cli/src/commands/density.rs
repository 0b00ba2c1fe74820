//! Bounded approximants `T_n` with `F_{T_n} = (n/(n+1)) F_t`.

use std::fmt::Write;

use gaplab_core::operators::{bounded_transform_tol, density_approximant_tol, is_bounded_tol};
use gaplab_core::{gap_sup_distance, riesz_distance, Operator, ToleranceConfig};
use serde::Serialize;

use crate::descriptor::SCHEMA;
use crate::error::CliError;
use crate::format::g12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRow {
    pub n: usize,
    pub riesz_to_t: f64,
    pub gap_to_t: f64,
    pub norm_f_tn: f64,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityNote {
    pub schema: u32,
    pub t_unbounded: bool,
    pub norm_f_t: f64,
    pub approximants_bounded: bool,
    pub gap_to_t_decreasing: bool,
    /// Bounded operators converging in gap to an unbounded limit.
    pub bounded_sequence_with_unbounded_limit: bool,
}

pub fn rows(t: &Operator, n_max: usize, tol: &ToleranceConfig) -> Result<Vec<DensityRow>, CliError> {
    (1..=n_max)
        .map(|n| {
            let tn = density_approximant_tol(t, n, tol)?;
            Ok(DensityRow {
                n,
                riesz_to_t: riesz_distance(&tn, t)?.value,
                gap_to_t: gap_sup_distance(&tn, t)?.value,
                norm_f_tn: bounded_transform_tol(&tn, tol)?.norm()?,
                bounded: is_bounded_tol(&tn, tol)?,
            })
        })
        .collect()
}

pub fn note(t: &Operator, rows: &[DensityRow], tol: &ToleranceConfig) -> Result<DensityNote, CliError> {
    let t_unbounded = !is_bounded_tol(t, tol)?;
    let approximants_bounded = rows.iter().all(|r| r.bounded);
    let gap_to_t_decreasing = rows.windows(2).all(|w| w[1].gap_to_t < w[0].gap_to_t);
    Ok(DensityNote {
        schema: SCHEMA,
        t_unbounded,
        norm_f_t: bounded_transform_tol(t, tol)?.norm()?,
        approximants_bounded,
        gap_to_t_decreasing,
        bounded_sequence_with_unbounded_limit: t_unbounded && approximants_bounded,
    })
}

pub fn csv(rows: &[DensityRow]) -> String {
    let mut out = String::from("n,riesz_to_t,gap_to_t,norm_F_Tn\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.n,
            g12(r.riesz_to_t),
            g12(r.gap_to_t),
            g12(r.norm_f_tn)
        );
    }
    out
}
