//! Certifies whether a Cartan–Hartogs metric is balanced by comparing `χ̃` with
//! the target polynomial coefficient by coefficient.
//!
//! `cargo run --example certify_balanced -- "IV(5),B(1),B(1),B(1)" 1/2,1,1/3,1/7 2`

use cartan_hartogs::certify::{certify_balanced, ke_check};
use cartan_hartogs::jobs::parse_mu_list;
use cartan_hartogs::{parse_domain_list, HartogsSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let factors = args.first().map_or("IV(5),B(1),B(1),B(1)", String::as_str);
    let mu = args.get(1).map_or("1/2,1,1/3,1/7", String::as_str);
    let d0 = args.get(2).map_or(Ok(2), |s| s.parse())?;

    let spec = HartogsSpec::new(parse_domain_list(factors)?, parse_mu_list(mu)?, d0)?;
    let cert = certify_balanced(&spec);
    println!("χ̃(x)   = {}", cert.lhs);
    println!("target = {}", cert.rhs);
    println!("balanced: {}", cert.balanced);
    if let Some(j) = cert.first_mismatch {
        println!("first differing power: x^{j}");
    }
    println!("Kähler–Einstein: {}", ke_check(&spec));
    println!("α must exceed {}", cert.alpha_threshold);
    Ok(())
}
