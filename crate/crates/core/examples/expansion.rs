//! Prints the exact coefficients `a_j(X)` of the ε-function expansion in `α`.
//!
//! `cargo run --example expansion -- "B(1),B(1)" 2/3,2/3 1`

use cartan_hartogs::hua::{a1_closed_form, epsilon_expansion};
use cartan_hartogs::jobs::parse_mu_list;
use cartan_hartogs::{parse_domain_list, HartogsSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let factors = args.first().map_or("B(1),B(1)", String::as_str);
    let mu = args.get(1).map_or("2/3,2/3", String::as_str);
    let d0 = args.get(2).map_or(Ok(1), |s| s.parse())?;

    let spec = HartogsSpec::new(parse_domain_list(factors)?, parse_mu_list(mu)?, d0)?;
    let e = epsilon_expansion(&spec);
    for (j, a) in e.coeffs().iter().enumerate() {
        let tag = if e.is_constant(j) { "constant" } else { "varies" };
        println!("a_{j}(X) = {}   [{tag}]", a.display_in("X"));
    }
    println!("a_1 closed form: {}", a1_closed_form(&spec).display_in("X"));
    Ok(())
}
