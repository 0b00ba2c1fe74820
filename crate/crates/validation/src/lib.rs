//! Independent oracles and reporting helpers for the end-to-end checks.
//!
//! The oracles here deliberately avoid the library's own code paths: closed
//! forms are evaluated directly and ranks come from Gaussian elimination.

use std::io::Write;

use gaplab_core::{SymbolSpec, C64};

/// Prints one verdict line past the test harness's output capture.
pub fn verdict(criterion: u8, pass: bool, detail: &str) {
    let word = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "acceptance criterion {criterion}: {word} ({detail})");
    let _ = out.flush();
}

/// `2n/(1+n²)`, the Cayley distance between the flipped and unflipped diagonals.
pub fn fuglede_tilde(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n / (1.0 + n * n)
}

/// `2n/√(1+n²)`, their Riesz distance.
pub fn fuglede_riesz(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n / (1.0 + n * n).sqrt()
}

/// Rank by Gaussian elimination with partial pivoting.
pub fn gauss_rank(mut rows: Vec<Vec<C64>>, eps: f64) -> usize {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let scale = rows
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows)
            .max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm()))
        else {
            break;
        };
        if rows[pivot][col].norm() <= eps * scale {
            continue;
        }
        rows.swap(rank, pivot);
        let p = rows[rank][col];
        for r in rank + 1..n_rows {
            let factor = rows[r][col] / p;
            for c in col..n_cols {
                let v = rows[rank][c];
                rows[r][c] -= factor * v;
            }
        }
        rank += 1;
    }
    rank
}

/// `(n+k)×n` truncation of `S^k diag(d)`: column `j` carries `d_j` in row `j + k`.
pub fn truncated_shift(k: usize, d: &SymbolSpec, n: usize) -> Vec<Vec<C64>> {
    let mut m = vec![vec![C64::new(0.0, 0.0); n]; n + k];
    for j in 0..n {
        m[j + k][j] = d.value(j + 1);
    }
    m
}

/// `(dim ker, dim coker)` of the `(n+k)×n` truncation. For `n` past every
/// zero of the symbol these equal the kernel dimensions on ℓ².
pub fn truncated_dims(k: usize, d: &SymbolSpec, n: usize) -> (usize, usize) {
    let rank = gauss_rank(truncated_shift(k, d, n), 1e-10);
    (n - rank, n + k - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_small_n() {
        assert_eq!(fuglede_tilde(1), 1.0);
        assert_eq!(fuglede_tilde(3), 0.6);
        assert!((fuglede_riesz(1) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rank_of_small_matrices() {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        assert_eq!(gauss_rank(vec![vec![one, one], vec![one, one]], 1e-12), 1);
        assert_eq!(gauss_rank(vec![vec![z, one], vec![one, z]], 1e-12), 2);
        assert_eq!(gauss_rank(vec![vec![z; 3]; 2], 1e-12), 0);
    }
}
