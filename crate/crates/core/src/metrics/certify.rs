//! Certified suprema of per-coordinate distances between two diagonal symbols.
//!
//! Each coordinate distance is a combination (maximum or Euclidean) of
//! differences `|h(x) − h(y)|` of a few features `h ∈ {R, aR, F}`. Past the
//! index where both tails are monotone, each feature has a computable total
//! variation `V` on every block `[lo, hi]` of indices, so inside the block each
//! feature difference is at most `(d(lo) + d(hi) + V_a + V_b) / 2`. Blocks are
//! refined best first until every bound is within tolerance of the attained
//! supremum or the refinement budget runs out; what remains is reported as
//! `certified_error`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{GapError, Result};
use crate::numkernel::C64;
use crate::symbol::{ContractionSymbol, Tail, TransformPoint};

/// Largest index evaluated one by one before block refinement starts.
const MAX_EXACT_INDEX: usize = 1 << 22;
/// Extra exact coordinates past the monotonicity index.
const EXACT_MARGIN: usize = 64;
/// Block splits allowed per supremum.
const SPLIT_BUDGET: usize = 20_000;
/// Indices stay exactly representable as `f64`.
const MAX_BLOCK_INDEX: usize = 1 << 52;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Feature {
    R,
    Ar,
    F,
}

impl Feature {
    fn value(self, p: &TransformPoint) -> C64 {
        match self {
            Feature::R => C64::new(p.r(), 0.0),
            Feature::Ar => p.ar(),
            Feature::F => p.f,
        }
    }

    /// Total variation between two points of one monotone real tail.
    fn variation(self, x: &TransformPoint, y: &TransformPoint) -> f64 {
        let direct = (self.value(x) - self.value(y)).norm();
        if self != Feature::Ar {
            return direct;
        }
        // a/(1+a²) peaks at |a| = 1, i.e. where |f| = q.
        let side = |p: &TransformPoint| p.f.norm() > p.q;
        if side(x) == side(y) {
            return direct;
        }
        let peak = C64::new(0.5 * x.f.re.signum(), 0.0);
        (self.value(x) - peak).norm() + (peak - self.value(y)).norm()
    }
}

/// A per-coordinate distance and the features that control it.
#[derive(Clone, Copy)]
pub(crate) struct Coordinate {
    pub eval: fn(TransformPoint, TransformPoint) -> f64,
    pub features: &'static [Feature],
    /// Combine feature differences by Euclidean norm rather than maximum.
    pub euclidean: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SupCertificate {
    pub value: f64,
    pub certified_error: f64,
    pub truncation_index: usize,
}

#[derive(Debug, Clone, Copy)]
struct Ends {
    a: TransformPoint,
    b: TransformPoint,
}

#[derive(Debug)]
struct Block {
    lo: usize,
    /// `None` for the unbounded block `[lo, ∞)`.
    hi: Option<usize>,
    at_lo: Ends,
    at_hi: Ends,
    bound: f64,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
    }
}
impl Eq for Block {}
impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

fn block_bound(c: &Coordinate, lo: &Ends, hi: &Ends) -> f64 {
    let parts = c.features.iter().map(|&h| {
        let d_lo = (h.value(&lo.a) - h.value(&lo.b)).norm();
        let d_hi = (h.value(&hi.a) - h.value(&hi.b)).norm();
        let v = h.variation(&lo.a, &hi.a) + h.variation(&lo.b, &hi.b);
        (d_lo + d_hi + v) / 2.0
    });
    if c.euclidean {
        parts.map(|x| x * x).sum::<f64>().sqrt()
    } else {
        parts.fold(0.0, f64::max)
    }
}

/// `sup_{j ≥ 1} g(p_a(j), p_b(j))` for transform sequences `p_a`, `p_b`.
pub(crate) fn certified_sup(
    a: &ContractionSymbol,
    b: &ContractionSymbol,
    c: &Coordinate,
) -> Result<SupCertificate> {
    let p = a.prefix_len().max(b.prefix_len());
    let ends = |j: usize| Ends {
        a: a.point(j),
        b: b.point(j),
    };
    let g = |e: &Ends| (c.eval)(e.a, e.b);
    let exact_max = |upto: usize| (1..=upto).map(|j| g(&ends(j))).fold(0.0, f64::max);

    // Identical tails agree coordinate-wise past the prefixes.
    if a.tail() == b.tail() {
        return Ok(SupCertificate {
            value: exact_max(p),
            certified_error: 0.0,
            truncation_index: p,
        });
    }
    // Two constant tails give a constant distance past the prefixes.
    if matches!(a.tail(), Tail::Constant(_)) && matches!(b.tail(), Tail::Constant(_)) {
        return Ok(SupCertificate {
            value: exact_max(p + 1),
            certified_error: 0.0,
            truncation_index: p + 1,
        });
    }

    let mono = a.tail().monotone_from().max(b.tail().monotone_from());
    let j0 = p.max(mono) + EXACT_MARGIN;
    if j0 > MAX_EXACT_INDEX {
        return Err(GapError::Unsupported(format!(
            "tail becomes monotone only after index {mono}; too far to certify"
        )));
    }
    let at_limit = Ends {
        a: a.limit_point(),
        b: b.limit_point(),
    };
    let mut best = exact_max(j0).max(g(&at_limit));

    let make_block = |lo: usize, hi: Option<usize>, at_lo: Ends, at_hi: Ends| {
        let bound = if hi.is_some_and(|h| h <= lo + 1) {
            g(&at_lo).max(g(&at_hi))
        } else {
            block_bound(c, &at_lo, &at_hi)
        };
        Block {
            lo,
            hi,
            at_lo,
            at_hi,
            bound,
        }
    };

    let mut heap = BinaryHeap::new();
    heap.push(make_block(j0, None, ends(j0), at_limit));
    let mut splits = 0;
    let tolerance = |best: f64| 1e-15 * best.max(1.0);

    while let Some(block) = heap.peek() {
        if block.bound <= best + tolerance(best) || splits >= SPLIT_BUDGET {
            break;
        }
        let block = heap.pop().expect("peeked");
        let mid = match block.hi {
            // No interior points; the endpoints are already counted in `best`.
            Some(hi) if hi - block.lo <= 1 => continue,
            Some(hi) => block.lo + (hi - block.lo) / 2,
            None if block.lo >= MAX_BLOCK_INDEX => {
                heap.push(block);
                break;
            }
            None => block.lo * 2,
        };
        let at_mid = ends(mid);
        best = best.max(g(&at_mid));
        heap.push(make_block(block.lo, Some(mid), block.at_lo, at_mid));
        heap.push(make_block(mid, block.hi, at_mid, block.at_hi));
        splits += 1;
    }
    let worst = heap.iter().map(|b| b.bound).fold(best, f64::max);
    Ok(SupCertificate {
        value: best,
        certified_error: (worst - best).max(0.0),
        truncation_index: j0,
    })
}
