//! Distances between the sign-flipped diagonal operators and the unflipped one.

use std::fmt::Write;

use gaplab_core::operators::fuglede_operator;
use gaplab_core::{gap_sup_distance, riesz_distance, tilde_distance};

use crate::error::CliError;
use crate::format::g12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FugledeRow {
    pub n: usize,
    pub d_tilde: f64,
    pub gap_sup: f64,
    pub riesz: f64,
}

pub fn rows(n_max: usize) -> Result<Vec<FugledeRow>, CliError> {
    let t0 = fuglede_operator(0);
    (1..=n_max)
        .map(|n| {
            let tn = fuglede_operator(n);
            Ok(FugledeRow {
                n,
                d_tilde: tilde_distance(&tn, &t0)?.value,
                gap_sup: gap_sup_distance(&tn, &t0)?.value,
                riesz: riesz_distance(&tn, &t0)?.value,
            })
        })
        .collect()
}

pub fn csv(rows: &[FugledeRow]) -> String {
    let mut out = String::from("n,d_tilde,gap_sup,riesz\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.n,
            g12(r.d_tilde),
            g12(r.gap_sup),
            g12(r.riesz)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let text = csv(&rows(3).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,d_tilde,gap_sup,riesz");
        assert_eq!(lines[1], "1,1.00000000000,1.00000000000,1.41421356237");
        assert_eq!(lines[3], "3,0.600000000000,0.600000000000,1.89736659610");
    }
}
