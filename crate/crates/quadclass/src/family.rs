//! The parametrized family: for odd `(k, l, n)` with `k ≡ 4 (mod 135)`,
//! `l ≡ 2 (mod 135)`, `gcd(k, l) = 1`, `n ≢ 0 (mod 3)` and `l < 2k^(3n)`,
//! build the imaginary field `Q(sqrt(l^2 - 2lk^(3n)))` and its real partner
//! `Q(sqrt(3(2lk^(3n) - l^2)))`, derive the squarefree decomposition
//! `l^2 - 2lk^(3n) = -a^2 d`, and verify the construction's claims about
//! their 3-ranks end to end.
//!
//! The verifier is a referee, not an advocate: every claim is resolved to
//! CONFIRMED or REFUTED by computation (or SKIPPED on budget), and a refuted
//! claim is reported, never patched over.

use crate::arith::{self, ArithError, FactorBudget};
use crate::classgroup::{
    self, fundamental_discriminant_from_squarefree, ClassGroupError, ClassGroupStructure,
};
use crate::kishi_miyake::{km_polynomial, km_verdict, KmInstance, KmVerdict};
use crate::rank_relation::{self, TripleSearchResult};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// One violated hypothesis from parameter validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// k ≢ 4 (mod 135)
    KMod135,
    /// l ≢ 2 (mod 135)
    LMod135,
    /// k is even (the proof uses oddness of k)
    KEven,
    /// l is even (the proof uses oddness of l)
    LEven,
    /// n is even
    NEven,
    /// gcd(k, l) != 1
    GcdNotOne,
    /// n ≡ 0 (mod 3)
    NDivisibleByThree,
    /// l >= 2 k^(3n)
    LTooLarge,
    /// a parameter is zero
    Zero,
}

impl Violation {
    pub fn label(&self) -> &'static str {
        match self {
            Violation::KMod135 => "k_mod_135",
            Violation::LMod135 => "l_mod_135",
            Violation::KEven => "k_even",
            Violation::LEven => "l_even",
            Violation::NEven => "n_even",
            Violation::GcdNotOne => "gcd_not_one",
            Violation::NDivisibleByThree => "n_divisible_by_3",
            Violation::LTooLarge => "l_not_less_than_2k_pow_3n",
            Violation::Zero => "zero_parameter",
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("invalid parameters: {}", .0.iter().map(|v| v.label()).collect::<Vec<_>>().join(", "))]
    InvalidParams(Vec<Violation>),
    #[error(transparent)]
    Factorization(#[from] ArithError),
    #[error("computed instance refutes the derived congruence `{claim}`: {detail}")]
    RefutedCongruence { claim: String, detail: String },
    #[error("internal cross-check failed: {0}")]
    CrossCheckFailed(String),
}

/// Validated family parameters. Construction via [`FamilyParams::new`]
/// enforces every hypothesis; [`validate_params`] lists violations as data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    k: u64,
    l: u64,
    n: u64,
}

/// Check each hypothesis independently; an empty list means valid. Parity
/// of k and l is reported as distinct labels so that a reader taking
/// "odd" to bind only n can drop exactly those two flags.
pub fn validate_params(k: u64, l: u64, n: u64) -> Vec<Violation> {
    let mut v = Vec::new();
    if k == 0 || l == 0 || n == 0 {
        v.push(Violation::Zero);
        return v;
    }
    if k % 135 != 4 {
        v.push(Violation::KMod135);
    }
    if l % 135 != 2 {
        v.push(Violation::LMod135);
    }
    if k % 2 == 0 {
        v.push(Violation::KEven);
    }
    if l % 2 == 0 {
        v.push(Violation::LEven);
    }
    if n % 2 == 0 {
        v.push(Violation::NEven);
    }
    if k.gcd(&l) != 1 {
        v.push(Violation::GcdNotOne);
    }
    if n % 3 == 0 {
        v.push(Violation::NDivisibleByThree);
    }
    if BigUint::from(l) >= 2u32 * BigUint::from(k).pow(3 * n as u32) {
        v.push(Violation::LTooLarge);
    }
    v
}

impl FamilyParams {
    pub fn new(k: u64, l: u64, n: u64) -> Result<Self, FamilyError> {
        let violations = validate_params(k, l, n);
        if violations.is_empty() {
            Ok(FamilyParams { k, l, n })
        } else {
            Err(FamilyError::InvalidParams(violations))
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn l(&self) -> u64 {
        self.l
    }
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `k^(3n)` exactly.
    fn k_pow_3n(&self) -> BigUint {
        BigUint::from(self.k).pow(3 * self.n as u32)
    }
}

/// The derived data of one family member: both radicands, the squarefree
/// decomposition `-radicand_minus = a^2 d`, and the fundamental
/// discriminants of the two fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldInstance {
    pub radicand_minus: BigInt,
    pub radicand_plus: BigInt,
    pub a: BigUint,
    pub d: BigUint,
    pub disc_minus: BigInt,
    pub disc_plus: BigInt,
}

fn refuted(claim: &str, detail: String) -> FamilyError {
    FamilyError::RefutedCongruence {
        claim: claim.to_string(),
        detail,
    }
}

/// Build the [`FieldInstance`] for validated parameters. The derived
/// congruences (`a` odd, `3 | a`, `3 ∤ d`, `a^2 d ≡ 9, 18 (mod 27)`) are
/// asserted: a violation is reported as [`FamilyError::RefutedCongruence`]
/// naming the claim, never silently accepted.
pub fn instantiate(params: &FamilyParams) -> Result<FieldInstance, FamilyError> {
    instantiate_with_budget(params, &FactorBudget::default())
}

pub fn instantiate_with_budget(
    params: &FamilyParams,
    budget: &FactorBudget,
) -> Result<FieldInstance, FamilyError> {
    let l = BigUint::from(params.l);
    let value = 2u32 * &l * params.k_pow_3n() - &l * &l; // 2lk^(3n) - l^2 > 0
    let radicand_minus = -BigInt::from(value.clone());
    let radicand_plus = 3 * BigInt::from(value.clone());
    debug_assert_eq!(radicand_plus, -3 * &radicand_minus);

    let (a, d) = arith::squarefree_decompose_with_budget(&value, budget)?;

    if !(&a % 2u32).is_one() {
        return Err(refuted("a odd", format!("a = {a} is even")));
    }
    if !(&a % 3u32).is_zero() {
        return Err(refuted("3 | a", format!("a = {a}")));
    }
    if (&d % 3u32).is_zero() {
        return Err(refuted("3 does not divide d", format!("d = {d}")));
    }
    let a2d_mod_27 = (&a * &a * &d % 27u32).to_u32().unwrap();
    if a2d_mod_27 != 9 && a2d_mod_27 != 18 {
        return Err(refuted(
            "a^2 d ≡ 9, 18 (mod 27)",
            format!("a^2 d ≡ {a2d_mod_27} (mod 27)"),
        ));
    }

    let disc_minus = fundamental_discriminant_from_squarefree(&-BigInt::from(d.clone()));
    // 3d is squarefree since d is squarefree and 3 does not divide d
    let disc_plus = fundamental_discriminant_from_squarefree(&BigInt::from(3u32 * &d));
    Ok(FieldInstance {
        radicand_minus,
        radicand_plus,
        a,
        d,
        disc_minus,
        disc_plus,
    })
}

/// The Kishi-Miyake instance the construction attaches to the family member:
/// `u = 2l`, `v = 3k^n`. `gcd(u, v) = 1` holds for all valid parameters and
/// is asserted.
pub fn km_instance_for(params: &FamilyParams) -> KmInstance {
    let u = BigInt::from(2 * u128::from(params.l));
    let v = 3 * BigInt::from(params.k).pow(params.n as u32);
    let inst = km_polynomial(&u, &v).expect("u = 2l is nonzero");
    assert!(
        inst.u.gcd(&inst.v).is_one(),
        "gcd(2l, 3k^n) = 1 must hold for valid parameters"
    );
    inst
}

/// Resource limits for [`verify_claims`]. A stage whose input exceeds its
/// limit is skipped and the dependent claims are marked SKIPPED.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Pollard-rho iterations for the squarefree decomposition.
    pub factor: FactorBudget,
    /// Largest |fundamental discriminant| the class-group stages accept.
    pub class_disc_limit: u64,
    /// Largest number of (y, z) cells the triple search scans.
    pub triple_pairs: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            factor: FactorBudget::default(),
            class_disc_limit: 1 << 32,
            triple_pairs: 100_000_000,
        }
    }
}

/// Resolution of one claim against its computed truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimStatus {
    /// Declared but not yet evaluated (never present in a finished record).
    Expected,
    Confirmed,
    Refuted,
    /// A budget limit prevented evaluation.
    Skipped,
}

impl ClaimStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ClaimStatus::Expected => "EXPECTED",
            ClaimStatus::Confirmed => "CONFIRMED",
            ClaimStatus::Refuted => "REFUTED",
            ClaimStatus::Skipped => "SKIPPED",
        }
    }
}

impl std::fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Everything one verification run produced. `r` and `s` are present only
/// when both of their independent computations (torsion count and
/// elementary-divisor decomposition) ran and agreed; the class-group
/// structures are carried for inspection.
#[derive(Debug, Clone)]
pub struct VerificationRecord {
    pub k: u64,
    pub l: u64,
    pub n: u64,
    pub instance: Option<FieldInstance>,
    pub km_instance: KmInstance,
    pub km_verdict: KmVerdict,
    pub r: Option<u32>,
    pub s: Option<u32>,
    pub group_minus: Option<ClassGroupStructure>,
    pub group_plus: Option<ClassGroupStructure>,
    pub triple_search: Option<TripleSearchResult>,
    pub paper_claims: BTreeMap<&'static str, ClaimStatus>,
}

pub const CLAIM_S_GE_1: &str = "s_ge_1";
pub const CLAIM_R_GE_2: &str = "r_ge_2";
pub const CLAIM_R_EQ_S_PLUS_1: &str = "r_eq_s_plus_1";
pub const CLAIM_KM_ALL_SATISFIED: &str = "km_all_satisfied";

impl VerificationRecord {
    /// True when any stage was skipped for budget reasons.
    pub fn budget_exhausted(&self) -> bool {
        self.paper_claims
            .values()
            .any(|s| *s == ClaimStatus::Skipped)
    }
}

fn fits_class_budget(disc: &BigInt, budget: &Budget) -> Option<i128> {
    let v = disc.to_i128()?;
    (v.unsigned_abs() <= budget.class_disc_limit as u128).then_some(v)
}

fn class_group_error_to_family(e: ClassGroupError) -> FamilyError {
    match e {
        ClassGroupError::Arith(a) => FamilyError::Factorization(a),
        other => FamilyError::CrossCheckFailed(format!(
            "class-group stage rejected a derived discriminant: {other}"
        )),
    }
}

/// Run the whole verification pipeline for one family member:
/// instantiate, evaluate the Kishi-Miyake conditions for `(2l, 3k^n)`,
/// compute the 3-rank `r` of the imaginary field and the narrow 3-rank `s`
/// of the real field (each by two independent routes, cross-checked), scan
/// the triple box, and resolve every claim from the computed values.
pub fn verify_claims(
    params: &FamilyParams,
    triple_bound: u64,
    budget: &Budget,
) -> Result<VerificationRecord, FamilyError> {
    let km_instance = km_instance_for(params);
    let km = km_verdict(&km_instance);

    let instance = match instantiate_with_budget(params, &budget.factor) {
        Ok(i) => Some(i),
        Err(FamilyError::Factorization(ArithError::FactorizationBudgetExceeded(bits))) => {
            // partial record: everything downstream of (a, d) is skipped
            let _ = bits;
            None
        }
        Err(other) => return Err(other),
    };

    let mut r = None;
    let mut s = None;
    let mut group_minus = None;
    let mut group_plus = None;
    let mut triple_search = None;

    if let Some(inst) = &instance {
        if let Some(disc) = fits_class_budget(&inst.disc_minus, budget) {
            let structure =
                classgroup::class_group_imaginary(disc).map_err(class_group_error_to_family)?;
            let torsion_rank =
                classgroup::three_rank_imaginary(disc).map_err(class_group_error_to_family)?;
            if structure.three_rank != torsion_rank {
                return Err(FamilyError::CrossCheckFailed(format!(
                    "r by elementary divisors = {} but by torsion counting = {} for {disc}",
                    structure.three_rank, torsion_rank
                )));
            }
            r = Some(torsion_rank);
            group_minus = Some(structure);
        }
        if let Some(disc) = fits_class_budget(&inst.disc_plus, budget) {
            let structure =
                classgroup::narrow_class_group_real(disc).map_err(class_group_error_to_family)?;
            let torsion_rank =
                classgroup::three_rank_real(disc).map_err(class_group_error_to_family)?;
            if structure.three_rank != torsion_rank {
                return Err(FamilyError::CrossCheckFailed(format!(
                    "s by elementary divisors = {} but by torsion counting = {} for {disc}",
                    structure.three_rank, torsion_rank
                )));
            }
            s = Some(torsion_rank);
            group_plus = Some(structure);
        }
        if let Some(d) = inst.d.to_u64() {
            match rank_relation::search_triples_capped(d, triple_bound, Some(budget.triple_pairs))
            {
                Ok(result) => triple_search = Some(result),
                Err(rank_relation::TripleError::BoundTooLarge(..)) => {}
                Err(rank_relation::TripleError::InvalidD(bad)) => {
                    return Err(FamilyError::CrossCheckFailed(format!(
                        "derived d = {bad} failed triple-search validation"
                    )));
                }
            }
        }
    }

    let mut paper_claims = BTreeMap::new();
    let bool_claim = |value: Option<bool>| match value {
        Some(true) => ClaimStatus::Confirmed,
        Some(false) => ClaimStatus::Refuted,
        None => ClaimStatus::Skipped,
    };
    paper_claims.insert(CLAIM_S_GE_1, bool_claim(s.map(|s| s >= 1)));
    paper_claims.insert(CLAIM_R_GE_2, bool_claim(r.map(|r| r >= 2)));
    paper_claims.insert(
        CLAIM_R_EQ_S_PLUS_1,
        bool_claim(r.zip(s).map(|(r, s)| r == s + 1)),
    );
    paper_claims.insert(
        CLAIM_KM_ALL_SATISFIED,
        bool_claim(Some(km.all_satisfied)),
    );

    Ok(VerificationRecord {
        k: params.k,
        l: params.l,
        n: params.n,
        instance,
        km_instance,
        km_verdict: km,
        r,
        s,
        group_minus,
        group_plus,
        triple_search,
        paper_claims,
    })
}
