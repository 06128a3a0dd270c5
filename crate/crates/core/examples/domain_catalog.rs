//! Lists every irreducible bounded symmetric domain up to a dimension, with its
//! invariants and Hua polynomial.
//!
//! `cargo run --example domain_catalog -- 10`

use cartan_hartogs::enumerate_catalog;
use cartan_hartogs::hua::{curvature_scalars, hua_chi};

fn main() {
    let d_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    println!("{:<10} {:>3} {:>3} {:>3} {:>3} {:>3}  {:<8} χ(s)", "domain", "d", "r", "a", "b", "p", "S");
    for inv in enumerate_catalog(d_max) {
        let s = curvature_scalars(&inv).s_omega;
        println!(
            "{:<10} {:>3} {:>3} {:>3} {:>3} {:>3}  {:<8} {}",
            inv.family.to_string(),
            inv.d,
            inv.r,
            inv.a,
            inv.b,
            inv.p,
            s.to_string(),
            hua_chi(&inv).display_in("s")
        );
    }
}
