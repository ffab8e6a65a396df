//! The normalizer α(θ) and the densities p_θ of a model file, and the
//! classical two-point family against its closed form.
//!
//! cargo run --example normalization [-- path/to/model.json]

use defexp::checks::two_point;
use defexp::{model, Deformation};

fn main() -> defexp::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/models/square.json").to_string());
    let fam = model::load(&path)?;
    println!(
        "{path}: {} points, {} statistics, polytope dimension {}",
        fam.space().len(),
        fam.dim(),
        fam.polytope().dimension()
    );
    for scale in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let theta: Vec<f64> = (0..fam.dim()).map(|j| scale * if j % 2 == 0 { 1.0 } else { -0.5 } + 0.0).collect();
        let p = fam.density(&theta)?;
        let mass: f64 = p.values().iter().zip(fam.space().mu()).map(|(a, b)| a * b).sum();
        println!("θ = {theta:?}: α = {:.12}, Σ p_θ μ − 1 = {:e}", fam.alpha(&theta)?, mass - 1.0);
        println!("    p_θ = {:?}", p.values());
    }

    let classical = two_point(Deformation::classical());
    let closed = ((1.0 + 2f64.exp()) / 2.0).ln();
    println!("\nclassical two-point, θ = 2: α = {}, ln((1+e²)/2) = {closed}", classical.alpha(&[2.0])?);
    let (u, k) = classical.theta_to_u(&[2.0])?;
    println!("u(θ) = {:?}, K(u) = {k}", u.variable().values());
    Ok(())
}
