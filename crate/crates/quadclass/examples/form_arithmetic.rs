//! A tour of binary quadratic form arithmetic at discriminant -23, whose
//! class group is cyclic of order 3: reduction, the identity and inverse
//! laws, and Gauss composition.
//!
//! ```bash
//! cargo run --release --example form_arithmetic
//! ```

use quadclass::quadforms::{compose, principal_form, reduce_definite, QuadForm};

fn main() {
    let disc = -23;
    let e = principal_form(disc).unwrap();
    println!("principal form of discriminant {disc}: {e}");

    // an unreduced representative of a nontrivial class
    let raw = QuadForm::new(4, -3, 2).unwrap();
    let g = reduce_definite(&raw).unwrap();
    println!("{raw} reduces to {g}");

    println!("\ngroup law:");
    let composed = compose(&e, &g).unwrap();
    println!("  e * {g} = {composed}  (identity)");

    let square = compose(&g, &g).unwrap();
    println!("  {g}^2 = {square}");

    let cube = compose(&square, &g).unwrap();
    println!("  {g}^3 = {cube}  (order 3)");
    assert_eq!(cube, e);

    let inv = g.inverse();
    println!("  {g} * {inv} = {}  (inverse is the mirror form)", compose(&g, &inv).unwrap());

    // composition never changes the discriminant
    assert_eq!(square.discriminant(), disc);
    println!("\nall products stayed at discriminant {disc}.");
}
