//! Compute the class group of an imaginary quadratic field from its reduced
//! forms, and cross-check the order against the Dirichlet character-sum
//! oracle.
//!
//! ```bash
//! cargo run --release --example class_group [discriminant]
//! ```

use quadclass::classgroup::{
    class_group_imaginary, dirichlet_class_number_oracle, three_rank_imaginary,
};
use quadclass::quadforms::enumerate_reduced_definite;

fn main() {
    let disc: i128 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("discriminant must be an integer"))
        .unwrap_or(-3299);

    let forms = enumerate_reduced_definite(disc).expect("negative discriminant ≡ 0, 1 (mod 4)");
    println!("discriminant {disc}: {} reduced forms", forms.len());
    for f in forms.iter().take(12) {
        println!("  {f}");
    }
    if forms.len() > 12 {
        println!("  ... and {} more", forms.len() - 12);
    }

    let group = class_group_imaginary(disc).expect("fundamental discriminant");
    println!("\nclass number h = {}", group.order);
    println!("elementary divisors: {:?}", group.elementary_divisors);
    println!("3-rank: {}", group.three_rank);

    let torsion_rank = three_rank_imaginary(disc).unwrap();
    println!("3-rank by torsion counting: {torsion_rank}");

    let oracle = dirichlet_class_number_oracle(disc).unwrap();
    println!("Dirichlet character-sum oracle: h = {oracle}");
    assert_eq!(group.order, oracle, "two independent routes must agree");
    println!("\nenumeration and analytic oracle agree.");
}
