//! Exhaustive search for balanced two-factor products with bounded dimension
//! and exponent denominators.
//!
//! `cargo run --release --example classify_pairs -- 8 9`

use cartan_hartogs::certify::{classify_k2, expected_k2_families};

fn main() {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u32>().expect("positive integer"));
    let d_max = args.next().unwrap_or(8);
    let denom_max = args.next().unwrap_or(9);

    let found = classify_k2(d_max, denom_max);
    for pair in &found {
        println!(
            "{} × {}   μ = ({}, {})",
            pair.factors[0], pair.factors[1], pair.mu[0], pair.mu[1]
        );
    }
    let expected = expected_k2_families(d_max, denom_max);
    println!("{} pairs; matches the known families: {}", found.len(), found == expected);
}
