//! The library against its brute-force oracles: quadrature for ln_φ,
//! bisection for exp_φ and the normalizer, finite differences for ∇α.
//!
//! cargo run --example oracles

use defexp::checks::two_point;
use defexp::oracle::{bisect_normalizer, fd_gradient, QuadratureDeformation};
use defexp::Deformation;

fn main() -> defexp::Result<()> {
    let kappa = 0.5;
    let lib = Deformation::kaniadakis(kappa)?;
    let quad = QuadratureDeformation::kaniadakis(kappa);
    println!("{:>8} {:>22} {:>22} {:>10}", "v", "ln_φ closed form", "ln_φ quadrature", "diff");
    for v in [0.01, 0.5, 1.0, 4.0, 100.0] {
        let (a, b) = (lib.ln_phi(v)?, quad.ln(v));
        println!("{v:>8} {a:>22.15} {b:>22.15} {:>10.1e}", (a - b).abs());
    }
    for u in [-2.0, 0.5, 3.0] {
        println!("exp_φ({u}) = {} (library), {} (bisection)", lib.exp_phi(u)?, quad.exp(u));
    }

    let fam = two_point(lib.clone());
    let theta = [2.0];
    let w = fam.linear_statistic(&theta);
    let weights: Vec<f64> = fam.base().values().iter().zip(fam.space().mu()).map(|(p, m)| p * m).collect();
    let exp = |u: f64| quad.exp(u);
    println!("\nα(2) = {} (Newton), {} (bisection)", fam.alpha(&theta)?, bisect_normalizer(&exp, w.values(), &weights));

    let alpha = |t: &[f64]| fam.alpha(t).unwrap();
    println!(
        "∇α(2) = {:?} (escort mean), {:?} (central difference)",
        fam.grad_alpha(&theta)?,
        fd_gradient(&alpha, &theta, 1e-5)
    );
    Ok(())
}
