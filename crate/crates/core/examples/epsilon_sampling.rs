//! Samples points of a Cartan–Hartogs domain and reports how much the ε-function
//! varies, for a balanced and an unbalanced choice of exponents.

use cartan_hartogs::geometry::HartogsGeometry;
use cartan_hartogs::poly::{int, rat};
use cartan_hartogs::{parse_domain_list, HartogsSpec};

fn spread(spec: &HartogsSpec, alpha: f64, samples: u64) -> cartan_hartogs::Result<f64> {
    let g = HartogsGeometry::new(spec)?;
    let values = (0..samples)
        .map(|seed| g.sample(seed, 1.0).and_then(|pt| g.epsilon(alpha, &pt)))
        .collect::<cartan_hartogs::Result<Vec<f64>>>()?;
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok((max - min) / mean)
}

fn main() -> cartan_hartogs::Result<()> {
    let balanced = HartogsSpec::new(parse_domain_list("B(1),III(2)")?, vec![int(1), rat(1, 2)], 1)?;
    let unbalanced = HartogsSpec::new(parse_domain_list("B(1),B(1)")?, vec![rat(2, 3), rat(2, 3)], 1)?;
    for alpha in [5.5, 6.0, 100.0] {
        println!("B(1)×III(2), α = {alpha}: spread {:.2e}", spread(&balanced, alpha, 200)?);
    }
    println!("B(1)×B(1) (2/3, 2/3), α = 10: spread {:.2e}", spread(&unbalanced, 10.0, 200)?);
    Ok(())
}
