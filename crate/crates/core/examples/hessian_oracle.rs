//! Compares the closed-form Monge–Ampère determinant with a finite-difference
//! complex Hessian of the potential.

use cartan_hartogs::geometry::HartogsGeometry;
use cartan_hartogs::poly::rat;
use cartan_hartogs::{parse_domain_list, HartogsSpec};

fn main() -> cartan_hartogs::Result<()> {
    let spec = HartogsSpec::new(parse_domain_list("III(2),IV(5)")?, vec![rat(3, 2), rat(1, 3)], 2)?;
    let g = HartogsGeometry::new(&spec)?;
    let c = g.norm_constant_product()?;
    println!("dimension {}, norm constant product {c}", g.dim());
    for seed in 0..5 {
        let pt = g.sample(seed, 0.6)?;
        let closed = g.monge_ampere(&pt)? * c;
        let fd = g.hessian_fd(&pt, 1e-4)?.determinant().re;
        println!("seed {seed}: closed form {closed:.6e}, finite difference {fd:.6e}, rel err {:.1e}", ((closed - fd) / closed).abs());
    }
    Ok(())
}
