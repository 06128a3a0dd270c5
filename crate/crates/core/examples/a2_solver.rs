//! Solves for exponents `(μ_1, μ_2)` that make the second expansion coefficient
//! constant, then checks the result against the exact expansion.
//!
//! `cargo run --example a2_solver -- V VI`

use cartan_hartogs::certify::{a2_scalars, solve_a2_constant};
use cartan_hartogs::hua::epsilon_coefficient;
use cartan_hartogs::poly::to_f64;
use cartan_hartogs::{parse_domain, HartogsSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let f1 = parse_domain(args.first().map_or("V", String::as_str))?;
    let f2 = parse_domain(args.get(1).map_or("VI", String::as_str))?;

    let sc = a2_scalars(&f1, &f2);
    println!("A = {}, B = {}, S = ({}, {}), Δ = {}", sc.a, sc.b, sc.s1, sc.s2, sc.discriminant);
    for sol in solve_a2_constant(&f1, &f2)? {
        let spec = HartogsSpec::from_f64_mu(vec![f1, f2], &[sol.mu1, sol.mu2], 1)?;
        let a2 = epsilon_coefficient(&spec, 2).expect("n ≥ 2");
        let drift = a2.coeffs().iter().skip(1).map(|c| to_f64(c).abs()).fold(0.0, f64::max);
        println!(
            "{:?}: μ = ({:.12}, {:.12}), residuals {:.1e} {:.1e}, largest X-coefficient of a2 {drift:.1e}",
            sol.branch, sol.mu1, sol.mu2, sol.residuals[0], sol.residuals[1]
        );
    }
    Ok(())
}
