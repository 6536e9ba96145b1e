//! Integral binary quadratic forms `ax^2 + bxy + cy^2`: reduction in both
//! signatures, Gauss composition, enumeration of reduced forms and of
//! rho-cycles.
//!
//! Definite reduction and enumeration follow the classical normalization
//! (`|b| <= a <= c`, sign of b forced nonnegative on the boundary), so every
//! positive definite class has exactly one reduced representative. Indefinite
//! forms are reduced with the continued-fraction rho step; classes correspond
//! to whole rho-cycles, not single forms. Composition is the
//! Gauss/Dirichlet/Shanks formula with an extended-gcd congruence solve
//! (no NUCOMP; desk-scale discriminants do not need it).

use num_integer::Integer;
use rayon::prelude::*;
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("form is imprimitive: gcd(a, b, c) = {0}")]
    Imprimitive(i128),
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i128),
    #[error("form is not positive definite")]
    NotDefinite,
    #[error("form is not indefinite")]
    NotIndefinite,
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i128),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i128, i128),
}

/// A primitive integral binary quadratic form `(a, b, c)`, meaning
/// `ax^2 + bxy + cy^2` with `gcd(a, b, c) = 1` and nonzero discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    a: i128,
    b: i128,
    c: i128,
}

fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    a.gcd(&b).gcd(&c)
}

impl QuadForm {
    /// Imprimitive inputs are rejected, never silently divided out: the
    /// class groups here are those of the maximal order and imprimitive
    /// forms belong to suborders.
    pub fn new(a: i128, b: i128, c: i128) -> Result<Self, FormError> {
        let disc = b * b - 4 * a * c;
        if disc == 0 {
            return Err(FormError::InvalidDiscriminant(0));
        }
        let g = gcd3(a, b, c);
        if g != 1 {
            return Err(FormError::Imprimitive(g));
        }
        Ok(QuadForm { a, b, c })
    }

    pub(crate) fn new_unchecked(a: i128, b: i128, c: i128) -> Self {
        debug_assert_eq!(gcd3(a, b, c), 1, "imprimitive ({a},{b},{c})");
        debug_assert_ne!(b * b - 4 * a * c, 0);
        QuadForm { a, b, c }
    }

    pub fn a(&self) -> i128 {
        self.a
    }
    pub fn b(&self) -> i128 {
        self.b
    }
    pub fn c(&self) -> i128 {
        self.c
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The opposite class representative `(a, -b, c)`.
    pub fn inverse(&self) -> Self {
        QuadForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    pub fn coefficients(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.c)
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    (n as u128).isqrt() as i128
}

fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt_i128(n);
    r * r == n
}

/// The principal form of discriminant `D`: `(1, 0, -D/4)` for `D ≡ 0 (mod 4)`
/// and `(1, 1, (1-D)/4)` for `D ≡ 1 (mod 4)`.
pub fn principal_form(disc: i128) -> Result<QuadForm, FormError> {
    if disc == 0 || is_square_i128(disc) {
        return Err(FormError::InvalidDiscriminant(disc));
    }
    match disc.rem_euclid(4) {
        0 => Ok(QuadForm::new_unchecked(1, 0, -disc / 4)),
        1 => Ok(QuadForm::new_unchecked(1, 1, (1 - disc) / 4)),
        _ => Err(FormError::InvalidDiscriminant(disc)),
    }
}

/// Translate b into the half-open interval (-a, a], keeping the class.
fn normalize_definite(a: i128, b: i128, c: i128) -> (i128, i128, i128) {
    debug_assert!(a > 0);
    let t = (a - b).rem_euclid(2 * a);
    let b2 = a - t;
    let disc = b * b - 4 * a * c;
    let c2 = (b2 * b2 - disc) / (4 * a);
    (a, b2, c2)
}

pub fn is_reduced_definite(f: &QuadForm) -> bool {
    let (a, b, c) = (f.a, f.b, f.c);
    if f.discriminant() >= 0 || a <= 0 {
        return false;
    }
    b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
}

/// Reduce a positive definite form to the unique reduced representative of
/// its class: `|b| <= a <= c` with `b >= 0` whenever `|b| = a` or `a = c`.
pub fn reduce_definite(f: &QuadForm) -> Result<QuadForm, FormError> {
    if f.discriminant() >= 0 || f.a <= 0 {
        return Err(FormError::NotDefinite);
    }
    let (mut a, mut b, mut c) = normalize_definite(f.a, f.b, f.c);
    while a > c {
        // rho step (a, b, c) -> (c, -b, a), then renormalize
        let (a2, b2, c2) = normalize_definite(c, -b, a);
        a = a2;
        b = b2;
        c = c2;
    }
    if a == c && b < 0 {
        b = -b;
    }
    Ok(QuadForm::new_unchecked(a, b, c))
}

/// All primitive reduced forms of a negative discriminant, sorted by
/// `(a, b)`. The length of the list is the form class number `h(D)`.
pub fn enumerate_reduced_definite(disc: i128) -> Result<Vec<QuadForm>, FormError> {
    if disc >= 0 || disc.rem_euclid(4) > 1 || disc < -(1 << 62) {
        return Err(FormError::InvalidDiscriminant(disc));
    }
    let amax = isqrt_i128(-disc / 3);
    let parity = disc.rem_euclid(2);
    let mut forms: Vec<QuadForm> = (1..=amax)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut local = Vec::new();
            let mut b = parity;
            while b <= a {
                let t = b * b - disc;
                if t % (4 * a) == 0 {
                    let c = t / (4 * a);
                    if c >= a && gcd3(a, b, c) == 1 {
                        local.push(QuadForm::new_unchecked(a, b, c));
                        if b != 0 && b != a && a != c {
                            local.push(QuadForm::new_unchecked(a, -b, c));
                        }
                    }
                }
                b += 2;
            }
            local
        })
        .collect();
    forms.sort_unstable();
    Ok(forms)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a*x + b*y = g, g >= 0
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Solve `a x ≡ b (mod m)` for `m > 0`. Returns the smallest nonnegative
/// solution together with the period `m / gcd(a, m)`, or None when no
/// solution exists.
fn solve_linear_congruence(a: i128, b: i128, m: i128) -> Option<(i128, i128)> {
    debug_assert!(m > 0);
    let a = a.rem_euclid(m);
    let b = b.rem_euclid(m);
    let (g, inv, _) = egcd(a, m);
    if b % g != 0 {
        return None;
    }
    let m2 = m / g;
    if m2 == 1 {
        return Some((0, 1));
    }
    let x0 = ((b / g).rem_euclid(m2) * inv.rem_euclid(m2)).rem_euclid(m2);
    Some((x0, m2))
}

/// Raw Gauss/Dirichlet composition of two forms of equal discriminant with
/// positive leading coefficients. The result is primitive of the same
/// discriminant but generally unreduced.
fn compose_raw(f1: &QuadForm, f2: &QuadForm) -> QuadForm {
    debug_assert_eq!(f1.discriminant(), f2.discriminant());
    debug_assert!(f1.a > 0 && f2.a > 0);
    let (a1, b1, c1) = (f1.a, f1.b, f1.c);
    let (a2, b2, _c2) = (f2.a, f2.b, f2.c);
    let g = (b1 + b2) / 2;
    let h = (b2 - b1) / 2;
    let w = gcd3(a1, a2, g);
    let j = w;
    let s = a1 / w;
    let t = a2 / w;
    let u = g / w;
    let st = s * t;
    let (mu, nu) = solve_linear_congruence(t * u, h * u + s * c1, st)
        .expect("composition congruence is always solvable");
    let (lambda, _) = solve_linear_congruence(t * nu, h - t * mu, s)
        .expect("composition congruence is always solvable");
    let k = mu + nu * lambda;
    let l = (k * t - h) / s;
    let m = (t * u * k - h * u - c1 * s) / st;
    debug_assert_eq!((k * t - h) % s, 0);
    debug_assert_eq!((t * u * k - h * u - c1 * s) % st, 0);
    let a3 = st;
    let b3 = j * u - (k * t + l * s);
    let c3 = k * l - j * m;
    QuadForm::new_unchecked(a3, b3, c3)
}

/// Gauss composition of the classes of `f` and `g`. For `D < 0` the inputs
/// must be positive definite and the result is the reduced representative;
/// for `D > 0` (nonsquare) the result is some reduced form of the class.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm, FormError> {
    let d1 = f.discriminant();
    let d2 = g.discriminant();
    if d1 != d2 {
        return Err(FormError::DiscriminantMismatch(d1, d2));
    }
    if d1 < 0 {
        if f.a <= 0 || g.a <= 0 {
            return Err(FormError::NotDefinite);
        }
        let rf = reduce_definite(f)?;
        let rg = reduce_definite(g)?;
        reduce_definite(&compose_raw(&rf, &rg))
    } else {
        // Reduce first to keep coefficients small, then flip to a positive
        // leading coefficient with one rho step (rho alternates sign of a).
        let mut rf = reduce_indefinite(f)?;
        let mut rg = reduce_indefinite(g)?;
        if rf.a < 0 {
            rf = rho_indefinite(&rf);
        }
        if rg.a < 0 {
            rg = rho_indefinite(&rg);
        }
        reduce_indefinite(&compose_raw(&rf, &rg))
    }
}

/// Reduced test for indefinite forms: `0 < b < sqrt(D)` and
/// `sqrt(D) - b < 2|a| < sqrt(D) + b`, evaluated exactly with
/// `s = floor(sqrt(D))` (D nonsquare).
pub fn is_reduced_indefinite(f: &QuadForm) -> bool {
    let disc = f.discriminant();
    if disc <= 0 || is_square_i128(disc) {
        return false;
    }
    let s = isqrt_i128(disc);
    let (b, ta) = (f.b, 2 * f.a.abs());
    0 < b && b <= s && s - b < ta && ta <= s + b
}

/// One continued-fraction step on a reduced indefinite form; maps reduced
/// forms to reduced forms and cycles through the whole class.
pub fn rho_indefinite(f: &QuadForm) -> QuadForm {
    debug_assert!(is_reduced_indefinite(f));
    let disc = f.discriminant();
    let s = isqrt_i128(disc);
    let ca = f.c.abs();
    // b' ≡ -b (mod 2|c|) in the window (s - 2|c|, s]
    let t = (s + f.b).rem_euclid(2 * ca);
    let b2 = s - t;
    let c2 = (b2 * b2 - disc) / (4 * f.c);
    QuadForm::new_unchecked(f.c, b2, c2)
}

/// Reduce an indefinite form of nonsquare positive discriminant by iterating
/// the rho step with the appropriate normalization window.
pub fn reduce_indefinite(f: &QuadForm) -> Result<QuadForm, FormError> {
    let disc = f.discriminant();
    if disc <= 0 {
        return Err(FormError::NotIndefinite);
    }
    if is_square_i128(disc) {
        return Err(FormError::SquareDiscriminant(disc));
    }
    let s = isqrt_i128(disc);
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    let mut guard = 0u32;
    loop {
        let ca = c.abs();
        let ta = 2 * a.abs();
        if 0 < b && b <= s && s - b < ta && ta <= s + b {
            return Ok(QuadForm::new_unchecked(a, b, c));
        }
        // step (a, b, c) -> (c, b', (b'^2 - D)/(4c)) with b' ≡ -b (mod 2|c|)
        // chosen in (|c| - 2|c|, |c|] when |c| > s, else in (s - 2|c|, s]
        let anchor = if ca > s { ca } else { s };
        let t = (anchor + b).rem_euclid(2 * ca);
        let b2 = anchor - t;
        let c2 = (b2 * b2 - disc) / (4 * c);
        a = c;
        b = b2;
        c = c2;
        guard += 1;
        assert!(guard < 20_000, "indefinite reduction failed to terminate");
    }
}

/// One rho-orbit of reduced indefinite forms. `forms[i+1]` is the rho image
/// of `forms[i]`, cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub discriminant: i128,
    pub forms: Vec<QuadForm>,
    pub principal: bool,
}

/// All primitive reduced forms of a positive nonsquare discriminant,
/// partitioned into rho-cycles. The number of cycles is the narrow form
/// class number; the cycle containing the reduction of the principal form
/// is flagged. Cycles are rotated to start at their lexicographically
/// smallest form and sorted by that form.
pub fn enumerate_cycles_indefinite(disc: i128) -> Result<Vec<Cycle>, FormError> {
    if disc <= 0 || disc.rem_euclid(4) > 1 || is_square_i128(disc) || disc > (1 << 62) {
        return Err(FormError::InvalidDiscriminant(disc));
    }
    let s = isqrt_i128(disc);
    let parity = disc.rem_euclid(2);
    let bstart = if parity == 0 { 2 } else { 1 };
    let bs: Vec<i128> = (0..).map(|i| bstart + 2 * i).take_while(|&b| b <= s).collect();
    let mut forms: Vec<QuadForm> = bs
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut local = Vec::new();
            let n = (disc - b * b) / 4;
            debug_assert!(n > 0);
            // all placements a*|c| = n with the reduced window on |a|
            let factors = crate::arith::factor_u64(n as u64);
            for m in crate::arith::divisors_u64(&factors) {
                let m = m as i128;
                if !(s - b < 2 * m && 2 * m <= s + b) {
                    continue;
                }
                let cabs = n / m;
                if gcd3(m, b, cabs) != 1 {
                    continue;
                }
                local.push(QuadForm::new_unchecked(m, b, -cabs));
                local.push(QuadForm::new_unchecked(-m, b, cabs));
            }
            local
        })
        .collect();
    forms.sort_unstable();

    let index: HashSet<QuadForm> = forms.iter().copied().collect();
    debug_assert_eq!(index.len(), forms.len());

    let principal_reduced = reduce_indefinite(&principal_form(disc)?)?;

    let mut visited: HashSet<QuadForm> = HashSet::with_capacity(forms.len());
    let mut cycles = Vec::new();
    for &start in &forms {
        if visited.contains(&start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut g = start;
        let mut principal = false;
        loop {
            assert!(
                index.contains(&g),
                "rho left the enumerated reduced set at {g} (disc {disc})"
            );
            visited.insert(g);
            if g == principal_reduced {
                principal = true;
            }
            orbit.push(g);
            g = rho_indefinite(&g);
            if g == start {
                break;
            }
        }
        cycles.push(Cycle {
            discriminant: disc,
            forms: orbit,
            principal,
        });
    }
    debug_assert_eq!(cycles.iter().filter(|c| c.principal).count(), 1);
    Ok(cycles)
}

/// Proper equivalence of indefinite forms, decided by reducing `f` and
/// walking the rho-cycle of its reduction looking for the reduction of `g`.
pub fn is_equivalent_indefinite(f: &QuadForm, g: &QuadForm) -> Result<bool, FormError> {
    let d1 = f.discriminant();
    let d2 = g.discriminant();
    if d1 != d2 {
        return Err(FormError::DiscriminantMismatch(d1, d2));
    }
    let rf = reduce_indefinite(f)?;
    let rg = reduce_indefinite(g)?;
    if rf == rg {
        return Ok(true);
    }
    let mut walk = rho_indefinite(&rf);
    while walk != rf {
        if walk == rg {
            return Ok(true);
        }
        walk = rho_indefinite(&walk);
    }
    Ok(false)
}
