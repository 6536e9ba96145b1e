//! The Kishi-Miyake criterion in action: build `f_{u,v} = x^3 - uvx - u^2`,
//! evaluate conditions (K-1)-(K-4), and confirm the promised 3-divisibility
//! on the attached quadratic field when all conditions hold.
//!
//! ```bash
//! cargo run --release --example km_criterion
//! ```

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use quadclass::classgroup::class_group_imaginary;
use quadclass::kishi_miyake::{km_field_discriminant, km_polynomial, km_verdict, K4Branch};

fn show(u: i64, v: i64) {
    let inst = km_polynomial(&BigInt::from(u), &BigInt::from(v)).unwrap();
    let verdict = km_verdict(&inst);
    println!(
        "(u, v) = ({u}, {v}): f = x^3 {:+} x {:+},  disc = {}",
        inst.poly_p, inst.poly_q, inst.disc_f
    );
    println!(
        "  K-1 coprime: {}  K-2 irreducible: {}  K-3 nonsquare disc: {}  K-4 branch: {}",
        verdict.k1,
        verdict.k2,
        verdict.k3,
        K4Branch::label(verdict.k4_branch)
    );
    println!("  all satisfied: {}", verdict.all_satisfied);
    if let Ok(Some(fd)) = km_field_discriminant(&inst) {
        println!("  attached field discriminant: {fd}");
        if verdict.all_satisfied {
            if let Some(fd) = fd.to_i128() {
                if fd < 0 && fd > -1_000_000 {
                    let h = class_group_imaginary(fd).unwrap().order;
                    println!("  class number h({fd}) = {h}  (3 | h as promised: {})", h % 3 == 0);
                }
            }
        }
    }
    println!();
}

fn main() {
    // the classic smallest case: disc -23, h = 3
    show(1, 1);
    // reducible cubic: f(2) = 0, criterion not applicable
    show(2, 1);
    // K-4.3 example: uv ≡ 3 (mod 9) and u ≡ v + 1 (mod 27)
    show(4, 3);
    // a (2l, 3k^n) pair from the parametrized family: the residues route to
    // the K-4.3 branch but its congruence fails, so no conclusion follows
    show(274, 417);
}
