//! Acceptance suite: seven criteria, one pass/fail line each, run in order
//! inside a single test so wall-clock budgets are not distorted by parallel
//! test scheduling. Run with `--nocapture` to watch the lines as they go.
//!
//! Expected values marked "frozen" were computed before this implementation
//! existed, with an independent oracle (exhaustive enumeration plus the
//! Dirichlet class-number formula, cross-validated against each other), and
//! are asserted here verbatim.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use quadclass::arith;
use quadclass::classgroup::{
    class_group_imaginary, dirichlet_class_number_oracle, is_fundamental_discriminant,
    kronecker_symbol, narrow_class_number_real, three_rank_imaginary, three_rank_real,
};
use quadclass::family::{self, ClaimStatus, FamilyParams};
use quadclass::kishi_miyake::{km_polynomial, km_verdict};
use quadclass::quadforms::{
    compose, enumerate_cycles_indefinite, enumerate_reduced_definite, is_reduced_definite,
    principal_form, reduce_definite, rho_indefinite, QuadForm,
};
use quadclass::rank_relation::{check_triple, search_triples, Triple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Criterion {
    name: &'static str,
    outcome: Result<String, String>,
}

fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    a.gcd(&b).gcd(&c)
}

// ---- criterion 1 ----

fn c1_oracle_equivalence() -> Result<String, String> {
    let start = Instant::now();
    let discs: Vec<i128> = (-9_999..0)
        .filter(|d| is_fundamental_discriminant(*d))
        .collect();
    for &d in &discs {
        let h_forms = class_group_imaginary(d)
            .map_err(|e| format!("class group failed at {d}: {e}"))?
            .order;
        let h_oracle =
            dirichlet_class_number_oracle(d).map_err(|e| format!("oracle failed at {d}: {e}"))?;
        if h_forms != h_oracle {
            return Err(format!(
                "order mismatch at D = {d}: enumeration {h_forms} vs oracle {h_oracle}"
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 60 {
        return Err(format!(
            "sweep of {} discriminants took {elapsed:.2?}, budget is 60 s",
            discs.len()
        ));
    }
    Ok(format!(
        "{} fundamental discriminants in (-10^4, 0), enumeration = Dirichlet oracle, {elapsed:.2?}",
        discs.len()
    ))
}

// ---- criterion 2 ----

fn c2_known_values() -> Result<String, String> {
    let imag = [(-3i128, 1u64), (-4, 1), (-20, 2), (-23, 3)];
    for (d, h) in imag {
        let got = class_group_imaginary(d).map_err(|e| e.to_string())?.order;
        if got != h {
            return Err(format!("h({d}) = {got}, expected {h}"));
        }
    }
    let g23 = class_group_imaginary(-23).unwrap();
    if g23.elementary_divisors != vec![3] || g23.three_rank != 1 {
        return Err(format!(
            "Cl(-23) structure {:?}, rank {}; expected [3], 1",
            g23.elementary_divisors, g23.three_rank
        ));
    }
    let narrow = [(5i128, 1u64), (12, 2), (229, 3)];
    for (d, h) in narrow {
        let got = narrow_class_number_real(d).map_err(|e| e.to_string())?;
        if got != h {
            return Err(format!("narrow h({d}) = {got}, expected {h}"));
        }
    }
    let r229 = three_rank_real(229).unwrap();
    if r229 != 1 {
        return Err(format!("real 3-rank of 229 = {r229}, expected 1"));
    }
    Ok("h(-3)=h(-4)=1, h(-20)=2, h(-23)=3 with [3] and rank 1; narrow h(5)=1, h(12)=2, h(229)=3 with real rank 1".into())
}

// ---- criterion 3 ----

/// Class number of the (possibly non-maximal) order of discriminant
/// `D = D0 * f^2`, by the classical conductor formula
/// `h(D) * [unit index] = f * h(D0) * prod_{p | f} (1 - chi_{D0}(p)/p)`,
/// with the unit index w(D0)/w(D). Independent of the form enumeration:
/// h(D0) comes from the Dirichlet oracle.
fn class_number_by_conductor_formula(d: i128) -> u64 {
    assert!(d < 0 && d.rem_euclid(4) <= 1);
    // d = -a^2 m with m squarefree; the fundamental discriminant is -m or
    // -4m, and the conductor is a or a/2 accordingly
    let (a, m) = arith::squarefree_decompose(&BigInt::from(-d).magnitude().clone()).unwrap();
    let (a, m) = (
        BigInt::from(a).to_i128().unwrap(),
        BigInt::from(m).to_i128().unwrap(),
    );
    let (d0, f) = if (-m).rem_euclid(4) == 1 {
        (-m, a)
    } else {
        assert_eq!(a % 2, 0, "discriminant shape violated for {d}");
        (-4 * m, a / 2)
    };
    assert!(is_fundamental_discriminant(d0), "conductor split failed for {d}");
    assert_eq!(d0 * f * f, d);
    let h0 = dirichlet_class_number_oracle(d0).unwrap() as i128;
    let w0: i128 = match d0 {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let w: i128 = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    // h = f * h0 * prod (1 - chi(p)/p) * w / w0, kept exact
    let mut num = f * h0 * w;
    let mut den = w0;
    for (p, _) in arith::factor(&BigInt::from(f).magnitude().clone())
        .unwrap()
        .factors
    {
        let p = BigInt::from(p).to_i128().unwrap();
        num *= p - kronecker_symbol(d0, p) as i128;
        den *= p;
    }
    assert_eq!(num % den, 0, "conductor formula not integral for {d}");
    (num / den) as u64
}

fn c3_form_algebra() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x33aa_2026);
    let mut checks: u64 = 0;

    // (a) reduction idempotence + uniqueness, exhaustive for |D| <= 500:
    // every primitive definite form in a coefficient box reduces into the
    // enumerated set, and the set's size equals an independent analytic
    // class number, so distinct reduced forms are pairwise inequivalent.
    for d in (-500i128..0).filter(|d| d.rem_euclid(4) <= 1) {
        let forms = enumerate_reduced_definite(d).map_err(|e| e.to_string())?;
        let expected = class_number_by_conductor_formula(d);
        if forms.len() as u64 != expected {
            return Err(format!(
                "|reduced({d})| = {} but conductor formula gives {expected}",
                forms.len()
            ));
        }
        for f in &forms {
            if !is_reduced_definite(f) || reduce_definite(f).unwrap() != *f {
                return Err(format!("enumerated form {f} not a reduction fixed point"));
            }
            checks += 1;
        }
        // box scan: all primitive forms with bounded a and |b| <= a
        let amax = ((-d) as f64 / 3.0).sqrt() as i128 + 4;
        for a in 1..=amax {
            for b in -a..=a {
                let t = b * b - d;
                if t % (4 * a) != 0 {
                    continue;
                }
                let c = t / (4 * a);
                if c <= 0 || gcd3(a, b, c) != 1 {
                    continue;
                }
                let form = QuadForm::new(a, b, c).unwrap();
                let reduced = reduce_definite(&form).unwrap();
                if !forms.contains(&reduced) {
                    return Err(format!("{form} reduced to {reduced}, not in enumerated set"));
                }
                checks += 1;
            }
        }
    }

    // (b) randomized discriminant preservation + group laws
    for _ in 0..1000 {
        let m = rng.gen_range(1i128..4000);
        let d = if rng.gen_bool(0.5) { -4 * m } else { -4 * m - 3 };
        let forms = enumerate_reduced_definite(d).unwrap();
        let pick = |rng: &mut ChaCha8Rng| forms[rng.gen_range(0..forms.len())];
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let principal = reduce_definite(&principal_form(d).unwrap()).unwrap();
        let xy = compose(&x, &y).unwrap();
        if xy.discriminant() != d {
            return Err(format!("composition changed discriminant at {d}"));
        }
        if compose(&principal, &x).unwrap() != x {
            return Err(format!("identity law failed at {d} for {x}"));
        }
        if compose(&x, &x.inverse()).unwrap() != principal {
            return Err(format!("inverse law failed at {d} for {x}"));
        }
        let assoc_l = compose(&xy, &z).unwrap();
        let assoc_r = compose(&x, &compose(&y, &z).unwrap()).unwrap();
        if assoc_l != assoc_r {
            return Err(format!("associativity failed at {d}"));
        }
        checks += 4;
    }

    // (c) cycle partition completeness for 0 < D < 5000
    for d in (2i128..5000).filter(|d| d.rem_euclid(4) <= 1) {
        let cycles = match enumerate_cycles_indefinite(d) {
            Ok(c) => c,
            Err(_) => continue, // square discriminants
        };
        let mut seen = std::collections::HashSet::new();
        for cyc in &cycles {
            let n = cyc.forms.len();
            for (i, f) in cyc.forms.iter().enumerate() {
                if !seen.insert(*f) {
                    return Err(format!("cycles overlap at D = {d}"));
                }
                if rho_indefinite(f) != cyc.forms[(i + 1) % n] {
                    return Err(format!("rho adjacency broken at D = {d}"));
                }
            }
            checks += n as u64;
        }
        if cycles.iter().filter(|c| c.principal).count() != 1 {
            return Err(format!("principal cycle flag wrong at D = {d}"));
        }
    }

    if checks < 10_000 {
        return Err(format!("only {checks} checks ran, need >= 10^4"));
    }
    Ok(format!(
        "{checks} checks: exhaustive reduction uniqueness vs conductor formula for |D| <= 500, randomized group laws, cycle partitions for 0 < D < 5000"
    ))
}

// ---- criterion 4 ----

fn c4_km_consistency() -> Result<String, String> {
    let mut qualifying = 0u32;
    let mut neg = 0u32;
    let mut pos = 0u32;
    'scan: for u in 1i64..60 {
        for v in -60i64..=60 {
            let inst = km_polynomial(&BigInt::from(u), &BigInt::from(v)).unwrap();
            let verdict = km_verdict(&inst);
            if !verdict.all_satisfied {
                continue;
            }
            let fd = match quadclass::kishi_miyake::km_field_discriminant(&inst) {
                Ok(Some(fd)) => fd,
                _ => continue,
            };
            let fd128 = match fd.to_i128() {
                Some(x) if x.abs() <= 100_000 && x != 1 => x,
                _ => continue,
            };
            qualifying += 1;
            let rank = if fd128 < 0 {
                neg += 1;
                three_rank_imaginary(fd128).map_err(|e| e.to_string())?
            } else {
                pos += 1;
                three_rank_real(fd128).map_err(|e| e.to_string())?
            };
            if rank < 1 {
                return Err(format!(
                    "counterexample: (u, v) = ({u}, {v}), field discriminant {fd128}, 3-rank {rank}"
                ));
            }
            if qualifying == 200 {
                break 'scan;
            }
        }
    }
    if qualifying < 200 {
        return Err(format!("only {qualifying} qualifying (u, v) pairs found"));
    }
    Ok(format!(
        "200 generated (u, v) with all conditions satisfied and |fundamental discriminant| <= 10^5 ({neg} imaginary, {pos} real): 3-rank >= 1 in every case"
    ))
}

// ---- criterion 5 ----

fn c5_family_reproduction(log: &mut Vec<String>) -> Result<String, String> {
    let start = Instant::now();
    let params = FamilyParams::new(139, 137, 1).map_err(|e| e.to_string())?;
    let record = family::verify_claims(&params, 1000, &family::Budget::default())
        .map_err(|e| format!("verification failed: {e}"))?;
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 600 {
        return Err(format!("verify took {elapsed:.2?}, budget is 10 minutes"));
    }

    let inst = record.instance.as_ref().ok_or("instance missing")?;

    // congruence invariants from the construction
    if !(&inst.a % 3u32).is_zero() {
        return Err("3 | a failed".into());
    }
    if (&inst.a % 2u32).is_zero() {
        return Err("a odd failed".into());
    }
    if (&inst.d % 3u32).is_zero() {
        return Err("3 ∤ d failed".into());
    }
    let m27 = (&inst.a * &inst.a * &inst.d % 27u32).to_u32().unwrap();
    if m27 != 9 && m27 != 18 {
        return Err(format!("a^2 d ≡ {m27} (mod 27), expected 9 or 18"));
    }
    if inst.radicand_plus != -3 * &inst.radicand_minus {
        return Err("radicand_plus != -3 * radicand_minus".into());
    }

    // r and s were each computed by two independent routes inside
    // verify_claims (elementary divisors and torsion counting) and
    // cross-checked there; re-derive the torsion route here explicitly.
    let r = record.r.ok_or("r skipped")?;
    let s = record.s.ok_or("s skipped")?;
    let disc_minus = inst.disc_minus.to_i128().unwrap();
    let disc_plus = inst.disc_plus.to_i128().unwrap();
    if three_rank_imaginary(disc_minus).unwrap() != r
        || record.group_minus.as_ref().unwrap().three_rank != r
    {
        return Err("r route disagreement".into());
    }
    if three_rank_real(disc_plus).unwrap() != s
        || record.group_plus.as_ref().unwrap().three_rank != s
    {
        return Err("s route disagreement".into());
    }

    // frozen central values from the independent pre-build oracle
    let gm = record.group_minus.as_ref().unwrap();
    let gp = record.group_plus.as_ref().unwrap();
    if (gm.order, gm.elementary_divisors.clone()) != (4488, vec![2, 2244]) {
        return Err(format!(
            "Cl({disc_minus}): order {} divisors {:?}, frozen oracle says 4488, [2, 2244]",
            gm.order, gm.elementary_divisors
        ));
    }
    if (gp.order, gp.elementary_divisors.clone()) != (8, vec![2, 2, 2]) {
        return Err(format!(
            "narrow Cl({disc_plus}): order {} divisors {:?}, frozen oracle says 8, [2, 2, 2]",
            gp.order, gp.elementary_divisors
        ));
    }

    // the criterion's flags must match an independent residue computation
    let (u, v) = (274i128, 417i128);
    let residues = {
        let three_divides_v = v.rem_euclid(3) == 0;
        let uv9 = (u * v).rem_euclid(9);
        let u27 = u.rem_euclid(27);
        (three_divides_v, uv9, u27, (v + 1).rem_euclid(27), (v - 1).rem_euclid(27))
    };
    if residues != (true, 3, 4, 13, 11) {
        return Err("test-side residue computation changed".into());
    }
    // 3 | v and uv ≡ 3 (mod 9) routes to K-4.3; u ≢ v ± 1 (mod 27) fails it
    if record.km_verdict.k4_branch.is_some()
        || !record.km_verdict.k1
        || !record.km_verdict.k2
        || !record.km_verdict.k3
        || record.km_verdict.all_satisfied
    {
        return Err(format!("criterion flags {:?} disagree with residues", record.km_verdict));
    }

    // claims must be resolved (not SKIPPED); outcomes recorded either way
    let mut outcomes = Vec::new();
    for (name, status) in &record.paper_claims {
        if *status == ClaimStatus::Skipped || *status == ClaimStatus::Expected {
            return Err(format!("claim {name} was not resolved: {status}"));
        }
        outcomes.push(format!("{name}={status}"));
    }
    log.push(format!(
        "  verify(139, 137, 1) outcome: r = {r}, s = {s}; h(-327040372) = 4488 = [2, 2244], narrow h(981121116) = 8 = [2, 2, 2]"
    ));
    log.push(format!(
        "  claims (expected CONFIRMED per the construction; km_all_satisfied expected to fail residues): {}",
        outcomes.join(", ")
    ));
    log.push(format!(
        "  triple box {}: found {}, exhausted {}",
        1000,
        record.triple_search.as_ref().map(|t| t.found.len()).unwrap_or(0),
        record.triple_search.as_ref().map(|t| t.exhausted).unwrap_or(false)
    ));
    Ok(format!(
        "cross-checks pass, all claims resolved [{}], {elapsed:.2?}",
        outcomes.join(", ")
    ))
}

// ---- criterion 6 ----

fn c6_triple_machinery(log: &mut Vec<String>) -> Result<String, String> {
    // frozen exact solution set of the 10x10 box for d = 7, enumerated by
    // the independent pre-build oracle (and re-verifiable by hand):
    //   5^2 - 4 = 21 = 3*1*7,  23^2 - 4 = 525 = 3*25*7,
    //   23^2 + 500 = 1029 = 3*49*7
    let t = |x: i128, y: i128, z: i128| Triple { x, y, z };
    let frozen = vec![
        t(-23, -5, 7),
        t(23, -5, 7),
        t(-5, 1, 1),
        t(5, 1, 1),
        t(-23, 1, 5),
        t(23, 1, 5),
    ];
    let r = search_triples(7, 10).map_err(|e| e.to_string())?;
    if !r.exhausted {
        return Err("10x10 box not exhausted".into());
    }
    if !(r.found.contains(&t(5, 1, 1)) && r.found.contains(&t(-5, 1, 1))) {
        return Err("±(5, 1, 1) missing from the box scan".into());
    }
    if r.found != frozen {
        return Err(format!(
            "found set {:?} differs from the independently enumerated box solution set",
            r.found
        ));
    }
    // every extra triple beyond ±(5,1,1) re-verified from the definitions
    for f in &frozen {
        if f.x * f.x - 4 * f.y.pow(3) != 3 * f.z * f.z * 7 {
            return Err(format!("frozen triple {f:?} fails K-5"));
        }
        if f.x.gcd(&f.y) != 1 || f.x * f.y * f.z == 0 {
            return Err(format!("frozen triple {f:?} fails K-6/K-7"));
        }
        if f.y.rem_euclid(3) != 1 || !matches!((f.x * f.x).rem_euclid(9), 1 | 7) {
            return Err(format!("frozen triple {f:?} fails K-8"));
        }
    }
    log.push(
        "  note: the box for d = 7 contains ±(23, 1, 5) and ±(23, -5, 7) besides ±(5, 1, 1); \
         a stated expectation of exactly the sign-closure of (5, 1, 1) is refuted by enumeration"
            .into(),
    );

    // worked membership examples
    if !check_triple(7, &t(5, 1, 1)).unwrap().satisfied() {
        return Err("check_triple(7, (5,1,1)) rejected".into());
    }
    if !check_triple(1, &t(4, 1, 2)).unwrap().satisfied() {
        return Err("check_triple(1, (4,1,2)) rejected".into());
    }
    let zrow = check_triple(7, &t(5, 1, 0)).unwrap();
    if zrow.k7 || zrow.satisfied() {
        return Err("check_triple(7, (5,1,0)) must fail K-7".into());
    }
    if !check_triple(7, &t(5, 1, -1)).unwrap().satisfied() {
        return Err("sign-of-z closure failed".into());
    }

    // monotonicity on randomized d
    let mut rng = ChaCha8Rng::seed_from_u64(0x66d15712c7);
    let mut tested = 0;
    while tested < 25 {
        let d: u64 = rng.gen_range(1..2000);
        if d % 3 == 0
            || !arith::factor(&num_bigint::BigUint::from(d))
                .unwrap()
                .factors
                .iter()
                .all(|(_, e)| *e == 1)
        {
            continue;
        }
        let b1 = rng.gen_range(3..30);
        let b2 = b1 + rng.gen_range(1..30);
        let small = search_triples(d, b1).unwrap();
        let large = search_triples(d, b2).unwrap();
        for f in &small.found {
            if !large.found.contains(f) {
                return Err(format!("monotonicity violated for d = {d}: {f:?}"));
            }
        }
        tested += 1;
    }
    Ok(
        "box solution set for (7, 10) matches the independent enumeration exactly (6 triples; the \
         two-triple expectation is refuted), worked examples validated, monotonicity holds on 25 random d"
            .into(),
    )
}

// ---- criterion 7 ----

fn c7_cli_determinism() -> Result<String, String> {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_quadclass");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["classgroup", "-23", "--format", "json"],
        vec!["classgroup", "-327040372", "--format", "json"],
        vec!["classgroup", "981121116", "--format", "json"],
        vec!["classgroup", "229", "--format", "table"],
        vec!["rank3", "-3299", "--format", "json"],
        vec!["km-check", "274", "417", "--format", "json"],
        vec!["search-triples", "7", "10", "--format", "json"],
        vec!["search-triples", "7", "10", "--format", "csv"],
        vec!["family", "139", "137", "1", "--format", "json"],
        vec!["verify", "139", "137", "1", "--class-budget", "1000", "--format", "json"],
    ];
    for args in &invocations {
        let mut outputs = Vec::new();
        for workers in ["1", "8"] {
            let out = Command::new(bin)
                .args(args.iter())
                .args(["--workers", workers])
                .env_remove("QUADCLASS_WORKERS")
                .output()
                .map_err(|e| e.to_string())?;
            outputs.push(out.stdout);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{args:?} differs between 1 and 8 workers"));
        }
        if outputs[0].is_empty() {
            return Err(format!("{args:?} produced no output"));
        }
    }
    Ok(format!(
        "{} CLI invocations byte-identical at 1 and 8 workers (including both central class groups)",
        invocations.len()
    ))
}

#[test]
fn acceptance_criteria() {
    let mut log: Vec<String> = Vec::new();
    let criteria = vec![
        Criterion {
            name: "C1 oracle equivalence (-10^4 < D < 0, < 60 s)",
            outcome: c1_oracle_equivalence(),
        },
        Criterion {
            name: "C2 known exact class numbers",
            outcome: c2_known_values(),
        },
        Criterion {
            name: "C3 form-algebra property suite (>= 10^4 checks)",
            outcome: c3_form_algebra(),
        },
        Criterion {
            name: "C4 criterion consistency on 200 generated (u, v)",
            outcome: c4_km_consistency(),
        },
        Criterion {
            name: "C5 family reproduction at (139, 137, 1) (< 10 min)",
            outcome: c5_family_reproduction(&mut log),
        },
        Criterion {
            name: "C6 triple machinery",
            outcome: c6_triple_machinery(&mut log),
        },
        Criterion {
            name: "C7 CLI determinism across worker counts",
            outcome: c7_cli_determinism(),
        },
    ];

    println!();
    let mut failures = 0;
    for c in &criteria {
        match &c.outcome {
            Ok(detail) => println!("PASS  {} — {detail}", c.name),
            Err(why) => {
                failures += 1;
                println!("FAIL  {} — {why}", c.name);
            }
        }
    }
    for line in &log {
        println!("{line}");
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
