//! Bounded search for triples satisfying the rank-relation conditions
//! (K-5)-(K-8): integer solutions of `x^2 - 4y^3 = 3 z^2 d` with side
//! congruences. The existence of such a triple is exactly what separates
//! `r = s + 1` from `r = s` for the 3-ranks of `Q(sqrt(-d))` and
//! `Q(sqrt(3d))`.
//!
//! ```bash
//! cargo run --release --example triple_search [d] [bound]
//! ```

use quadclass::rank_relation::{check_triple, search_triples, Triple};

fn main() {
    let mut args = std::env::args().skip(1);
    let d: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(7);
    let bound: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(10);

    let result = search_triples(d, bound).expect("d must be squarefree with 3 ∤ d");
    println!(
        "d = {d}, box y in [-{bound}, {bound}] (y ≡ 1 mod 3), z in [1, {bound}]: {} triples",
        result.found.len()
    );
    for t in &result.found {
        println!(
            "  ({}, {}, {}):  {}^2 - 4*{}^3 = {} = 3*{}^2*{}",
            t.x,
            t.y,
            t.z,
            t.x,
            t.y,
            t.x * t.x - 4 * t.y.pow(3),
            t.z,
            d
        );
    }
    println!("box exhausted: {}", result.exhausted);

    // membership checks are exact and independent of the search
    let probe = Triple { x: 5, y: 1, z: -1 };
    let check = check_triple(7, &probe).unwrap();
    println!(
        "\ncheck_triple(7, (5, 1, -1)): K-5 {} K-6 {} K-7 {} K-8 {} -> {}",
        check.k5,
        check.k6,
        check.k7,
        check.k8,
        check.satisfied()
    );
}
