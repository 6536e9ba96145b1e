//! The rank relation's Diophantine side: for squarefree `d > 0` with
//! `3 ∤ d`, the 3-ranks of `Q(sqrt(-d))` and `Q(sqrt(3d))` differ by exactly
//! one precisely when no integer triple `(x, y, z)` satisfies
//!
//!   K-5  x^2 - 4y^3 = 3 z^2 d
//!   K-6  gcd(x, y) = 1
//!   K-7  xyz != 0
//!   K-8  y ≡ 1 (mod 3) and x^2 ≡ 1, 7 (mod 9)
//!
//! (Kishi, 2013). Nonexistence over all of Z^3 is undecidable by search;
//! this module checks membership exactly and scans a bounded box, reporting
//! whether the box was exhausted. The box is rectangular in (y, z) with x
//! pinned by the equation and an exact square test, so the scan is
//! two-dimensional.

use crate::arith;
use num_integer::Integer;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TripleError {
    #[error("d = {0} must be positive, squarefree and not divisible by 3")]
    InvalidD(u64),
    #[error("bound {0} too large for exact i128 arithmetic with d = {1}")]
    BoundTooLarge(u64, u64),
}

/// A candidate `(x, y, z)`; the conditions are checked by operations, not
/// at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub x: i128,
    pub y: i128,
    pub z: i128,
}

/// Per-condition flags for one candidate triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleCheck {
    pub k5: bool,
    pub k6: bool,
    pub k7: bool,
    pub k8: bool,
}

impl TripleCheck {
    pub fn satisfied(&self) -> bool {
        self.k5 && self.k6 && self.k7 && self.k8
    }
}

/// Outcome of a bounded box scan. `found` is sorted by `(y, z, x)` and
/// lists both signs of x; z is scanned positive only since K-5, K-7, K-8
/// depend on z^2. `exhausted` is true iff the whole box was scanned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSearchResult {
    pub d: u64,
    pub bound: u64,
    pub found: Vec<Triple>,
    pub exhausted: bool,
}

fn validate_d(d: u64) -> Result<(), TripleError> {
    if d == 0 || d % 3 == 0 || !arith::factor_u64(d).iter().all(|&(_, e)| e == 1) {
        return Err(TripleError::InvalidD(d));
    }
    Ok(())
}

fn check_conditions(d: u64, t: &Triple) -> TripleCheck {
    let (x, y, z) = (t.x, t.y, t.z);
    let k5 = x * x - 4 * y * y * y == 3 * z * z * d as i128;
    let k6 = x.gcd(&y) == 1;
    let k7 = x != 0 && y != 0 && z != 0;
    let k8 = y.rem_euclid(3) == 1 && matches!((x * x).rem_euclid(9), 1 | 7);
    TripleCheck { k5, k6, k7, k8 }
}

/// Exact membership test for conditions K-5 through K-8.
pub fn check_triple(d: u64, t: &Triple) -> Result<TripleCheck, TripleError> {
    validate_d(d)?;
    Ok(check_conditions(d, t))
}

/// Scan `y in [-bound, bound]` with `y ≡ 1 (mod 3)` and `z in [1, bound]`,
/// solving `x^2 = 4y^3 + 3z^2 d` exactly; record every triple passing all
/// conditions, both signs of x.
pub fn search_triples(d: u64, bound: u64) -> Result<TripleSearchResult, TripleError> {
    search_triples_capped(d, bound, None)
}

/// Like [`search_triples`] but stops after `max_pairs` (y, z) cells when a
/// cap is given, reporting `exhausted = false`. Partial results are still
/// sound: every listed triple passes the exact check.
pub fn search_triples_capped(
    d: u64,
    bound: u64,
    max_pairs: Option<u64>,
) -> Result<TripleSearchResult, TripleError> {
    validate_d(d)?;
    if bound == 0 {
        return Err(TripleError::BoundTooLarge(0, d));
    }
    let b = bound as i128;
    // 4|y|^3 + 3 z^2 d must stay far inside i128
    let cap = 1i128 << 100;
    if 4 * b * b * b >= cap || 3 * b * b * (d as i128) >= cap {
        return Err(TripleError::BoundTooLarge(bound, d));
    }

    // y ≡ 1 (mod 3) values in [-bound, bound], ascending
    let mut ys: Vec<i128> = Vec::new();
    let mut y = -b + (1 - (-b)).rem_euclid(3);
    while y <= b {
        if y != 0 {
            ys.push(y);
        }
        y += 3;
    }

    let (ys, exhausted) = match max_pairs {
        Some(cap_pairs) => {
            let rows = (cap_pairs / bound).min(ys.len() as u64) as usize;
            (ys[..rows].to_vec(), rows == ys.len())
        }
        None => (ys, true),
    };

    let mut found: Vec<Triple> = ys
        .into_par_iter()
        .flat_map_iter(|y| {
            let mut local = Vec::new();
            let y3 = 4 * y * y * y;
            for z in 1..=b {
                let rhs = y3 + 3 * z * z * d as i128;
                if rhs <= 0 {
                    continue;
                }
                let x = (rhs as u128).isqrt() as i128;
                if x * x != rhs {
                    continue;
                }
                for xs in [x, -x] {
                    let t = Triple { x: xs, y, z };
                    if check_conditions(d, &t).satisfied() {
                        local.push(t);
                    }
                }
            }
            local
        })
        .collect();
    found.sort_unstable_by_key(|t| (t.y, t.z, t.x));
    Ok(TripleSearchResult {
        d,
        bound,
        found,
        exhausted,
    })
}
