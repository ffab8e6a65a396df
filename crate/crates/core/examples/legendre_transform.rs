//! The convex conjugate α* inside, on the boundary of and outside the
//! marginal polytope, and the Legendre round trip θ → ∇α(θ) → θ̂.
//!
//! cargo run --example legendre_transform

use defexp::checks::two_point;
use defexp::conjugate::{alpha_star, legendre_check};
use defexp::{ConjugateOptions, Deformation};

fn main() -> defexp::Result<()> {
    let fam = two_point(Deformation::kaniadakis(0.5)?);
    let opts = ConjugateOptions::default();
    println!("{:>6} {:>18} {:>20} {:>10}", "η", "status", "α*(η)", "θ̂");
    for eta in [0.1, 0.3, 0.5, 0.8, 0.0, 1.0, 1.25] {
        let r = alpha_star(&fam, &[eta], &opts)?;
        let theta = r.maximizer.as_ref().map_or(String::from("-"), |t| format!("{:.4}", t[0]));
        println!("{eta:>6} {:>18} {:>20.12} {theta:>10}", format!("{:?}", r.status), r.value);
        if let Some(w) = &r.witness {
            println!("       witness g(n a): {:.3?} ... {:.1}", &w[..4], w[w.len() - 1]);
        }
    }

    println!();
    for theta in [-3.0, 0.0, 1.0, 2.0, 5.0] {
        let report = legendre_check(&fam, &[theta], &opts)?;
        println!(
            "θ = {theta:>4}: η = {:.6}, θ̂ error {:e}, identity residual {:e}, passed {}",
            report.eta[0],
            report.theta_error.unwrap_or(f64::NAN),
            report.identity_residual,
            report.passed
        );
    }
    Ok(())
}
