//! Escort densities and the first two derivatives of K, checked against
//! central differences.
//!
//! cargo run --example escort_derivatives

use defexp::oracle::fd_derivative;
use defexp::{model, RandomVariable};

fn main() -> defexp::Result<()> {
    let fam = model::load(concat!(env!("CARGO_MANIFEST_DIR"), "/models/square.json"))?;
    let (u, _) = fam.theta_to_u(&[1.0, -0.5])?;
    let u = u.variable().clone();
    println!("p_u    = {:?}", fam.density_of(&u.shifted(-fam.k(&u)?))?.values());
    println!("escort = {:?}", fam.escort(&u)?.values());
    // the variant weighting by φ(p_u/p) differs once the deformation is not classical
    println!("variant escort = {:?}", fam.literal_escort(&u)?.values());

    let v = RandomVariable::new(vec![1.0, -1.0, 0.5, 0.0]);
    let k_along = |t: f64| fam.k(&u.axpy(t, &v)).unwrap();
    let dk = fam.dk(&u, &v)?;
    let fd = fd_derivative(&k_along, 0.0, 1e-5);
    println!("\nDK(u; v)  = {dk:.12}, central difference {fd:.12}");

    let dk_along = |t: f64| fam.dk(&u.axpy(t, &v), &v).unwrap();
    let d2k = fam.d2k(&u, &v, &v)?;
    println!("D²K(u; v, v) = {d2k:.10}, difference of DK {:.10}", fd_derivative(&dk_along, 0.0, 1e-5));

    let basis = fam.centered_basis();
    println!("\nD²K in the centered statistics:");
    for a in basis {
        let row: Vec<String> = basis.iter().map(|b| format!("{:>12.8}", fam.d2k(&u, a, b).unwrap())).collect();
        println!("  {}", row.join(" "));
    }
    println!("Hessian of α at θ = (1, −0.5): {:?}", fam.hessian_alpha(&[1.0, -0.5])?);
    Ok(())
}
