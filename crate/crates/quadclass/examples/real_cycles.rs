//! Indefinite forms: rho-cycles of reduced forms and the narrow class
//! group. Classes of positive discriminant correspond to whole cycles, not
//! single reduced forms; the continued-fraction rho step walks each cycle.
//!
//! ```bash
//! cargo run --release --example real_cycles [discriminant]
//! ```

use quadclass::classgroup::{narrow_class_group_real, three_rank_real};
use quadclass::quadforms::{enumerate_cycles_indefinite, rho_indefinite};

fn main() {
    let disc: i128 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("discriminant must be an integer"))
        .unwrap_or(229);

    let cycles = enumerate_cycles_indefinite(disc).expect("positive nonsquare ≡ 0, 1 (mod 4)");
    println!(
        "discriminant {disc}: {} reduced forms in {} cycles",
        cycles.iter().map(|c| c.forms.len()).sum::<usize>(),
        cycles.len()
    );
    for (i, cyc) in cycles.iter().enumerate() {
        let tag = if cyc.principal { " (principal)" } else { "" };
        println!("\ncycle {i}{tag}, length {}:", cyc.forms.len());
        for f in cyc.forms.iter().take(8) {
            println!("  {f}");
        }
        if cyc.forms.len() > 8 {
            println!("  ...");
        }
        // the rho step closes the cycle
        let back = cyc.forms.iter().fold(cyc.forms[0], |f, _| rho_indefinite(&f));
        assert_eq!(back, cyc.forms[0]);
    }

    let group = narrow_class_group_real(disc).expect("fundamental discriminant");
    println!("\nnarrow class number: {}", group.order);
    println!("elementary divisors: {:?}", group.elementary_divisors);
    println!("narrow 3-rank: {}", three_rank_real(disc).unwrap());
    println!("(the odd part of the narrow group equals that of the wide group)");
}
