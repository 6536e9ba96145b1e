//! The Kishi-Miyake criterion: for coprime integers `u, v` the cubic
//! `f_{u,v}(x) = x^3 - uvx - u^2` detects 3-divisibility of the class number
//! of `Q(sqrt(disc f))` (Kishi & Miyake, J. Number Theory 80 (2000)).
//! This module builds the cubic exactly and evaluates the four conditions:
//!
//!   K-1  gcd(u, v) = 1
//!   K-2  f_{u,v} irreducible over Q
//!   K-3  disc f not a perfect square in Z
//!   K-4  one of
//!        K-4.1  3 ∤ v
//!        K-4.2  3 | v, uv ≢ 3 (mod 9), u ≡ v ± 1 (mod 9)
//!        K-4.3  3 | v, uv ≡ 3 (mod 9), u ≡ v ± 1 (mod 27)
//!
//! The checker reports computed truth only: no branch is assumed from any
//! construction that merely expects one to hold.

use crate::arith;
use crate::classgroup::{fundamental_discriminant, FundamentalDiscriminantError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KmError {
    #[error("u must be nonzero")]
    ZeroU,
}

/// The cubic `x^3 + poly_p x + poly_q` attached to `(u, v)`, with
/// `poly_p = -uv`, `poly_q = -u^2` and its discriminant
/// `disc_f = -4 poly_p^3 - 27 poly_q^2 = u^3 (4v^3 - 27u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmInstance {
    pub u: BigInt,
    pub v: BigInt,
    pub poly_p: BigInt,
    pub poly_q: BigInt,
    pub disc_f: BigInt,
}

/// Which K-4 branch applies, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K4Branch {
    K41,
    K42,
    K43,
}

impl K4Branch {
    pub fn label(branch: Option<K4Branch>) -> &'static str {
        match branch {
            Some(K4Branch::K41) => "K41",
            Some(K4Branch::K42) => "K42",
            Some(K4Branch::K43) => "K43",
            None => "none",
        }
    }
}

/// Truth status of the four conditions for one `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmVerdict {
    pub k1: bool,
    pub k2: bool,
    pub k3: bool,
    pub k4_branch: Option<K4Branch>,
    pub all_satisfied: bool,
}

pub fn km_polynomial(u: &BigInt, v: &BigInt) -> Result<KmInstance, KmError> {
    if u.is_zero() {
        return Err(KmError::ZeroU);
    }
    let poly_p = -(u * v);
    let poly_q = -(u * u);
    let disc_f = -4 * poly_p.pow(3) - 27 * (&poly_q * &poly_q);
    debug_assert_eq!(disc_f, u.pow(3) * (4 * v.pow(3) - 27 * u));
    Ok(KmInstance {
        u: u.clone(),
        v: v.clone(),
        poly_p,
        poly_q,
        disc_f,
    })
}

/// Irreducibility of the cubic over Q. A monic integer cubic is reducible
/// exactly when it has an integer root, and any root divides the constant
/// term `u^2`; the scan over signed divisors of `u^2` is therefore both
/// sufficient and necessary.
pub fn is_irreducible_cubic(inst: &KmInstance) -> bool {
    let u2 = (&inst.u * &inst.u).magnitude().clone();
    let f = arith::factor(&u2).expect("constant term factors within budget");
    let eval = |x: &BigInt| x.pow(3) + &inst.poly_p * x + &inst.poly_q;
    for d in f.divisors() {
        let t = BigInt::from(d);
        if eval(&t).is_zero() || eval(&(-&t)).is_zero() {
            return false;
        }
    }
    true
}

fn residue(n: &BigInt, m: u32) -> u32 {
    let r = n.mod_floor(&BigInt::from(m));
    u32::try_from(r).expect("residue fits")
}

/// Evaluate all four conditions. `all_satisfied = true` means the criterion
/// guarantees `3 | h(Q(sqrt(disc_f)))`.
pub fn km_check(u: &BigInt, v: &BigInt) -> Result<KmVerdict, KmError> {
    let inst = km_polynomial(u, v)?;
    Ok(km_verdict(&inst))
}

pub fn km_verdict(inst: &KmInstance) -> KmVerdict {
    let k1 = inst.u.gcd(&inst.v).is_one();
    let k2 = is_irreducible_cubic(inst);
    let k3 = !arith::is_perfect_square(&inst.disc_f);
    let k4_branch = k4_branch(&inst.u, &inst.v);
    KmVerdict {
        k1,
        k2,
        k3,
        k4_branch,
        all_satisfied: k1 && k2 && k3 && k4_branch.is_some(),
    }
}

fn k4_branch(u: &BigInt, v: &BigInt) -> Option<K4Branch> {
    if residue(v, 3) != 0 {
        return Some(K4Branch::K41);
    }
    let uv9 = residue(&(u * v), 9);
    if uv9 != 3 {
        let diff = residue(&(u - v), 9);
        if diff == 1 || diff == 8 {
            return Some(K4Branch::K42);
        }
    } else {
        let diff = residue(&(u - v), 27);
        if diff == 1 || diff == 26 {
            return Some(K4Branch::K43);
        }
    }
    None
}

/// The fundamental discriminant of the quadratic field named by the
/// criterion's conclusion, `Q(sqrt(disc_f))`, which depends only on the
/// squarefree part of `disc_f`. None when `disc_f` is a perfect square
/// (no quadratic field; K-3 fails in that case).
pub fn km_field_discriminant(
    inst: &KmInstance,
) -> Result<Option<BigInt>, FundamentalDiscriminantError> {
    if !inst.disc_f.is_negative() && arith::is_perfect_square(&inst.disc_f) {
        return Ok(None);
    }
    fundamental_discriminant(&inst.disc_f).map(Some)
}
