//! The Kaniadakis deformation next to the classical one, and a deformation
//! given only through its rate function ψ.
//!
//! cargo run --example deformation_calculus

use defexp::Deformation;

fn main() -> defexp::Result<()> {
    let classical = Deformation::classical();
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "u", "exp", "exp_k(0.25)", "exp_k(0.5)", "exp_k(0.9)");
    let kappas: Vec<Deformation> =
        [0.25, 0.5, 0.9].iter().map(|k| Deformation::kaniadakis(*k)).collect::<Result<_, _>>()?;
    for u in [-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0] {
        print!("{u:>6.1} {:>12.6}", classical.exp_phi(u)?);
        for d in &kappas {
            print!(" {:>12.6}", d.exp_phi(u)?);
        }
        println!();
    }

    // ψ(ln_φ v) = φ(v)/v, e.g. ψ(1.5) = 0.8 = φ(4)/4 at κ = 1/2
    let k = &kappas[1];
    println!("\nκ = 0.5: ln_φ(4) = {}, ψ(1.5) = {}, φ(4)/4 = {}", k.ln_phi(4.0)?, k.psi(1.5)?, k.phi(4.0)? / 4.0);
    let (e, d1) = k.exp_phi_and_d1(1.5)?;
    println!("exp_φ(1.5) = {e}, exp_φ'(1.5) = {d1}, exp_φ''(1.5) = {}", k.exp_phi_d2(1.5)?);

    // self-duality: exp_φ(u) exp_φ(−u) = 1
    let grid: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.5).collect();
    let report = k.is_self_dual(&grid, 1e-10)?;
    println!("self-dual on [-10, 10]: {} (max deviation {:e})", report.self_dual, report.max_deviation);

    // the same family through ψ(u) = 1/√(1 + κ²u²) and quadrature
    let via_psi = Deformation::from_psi(|u: f64| 1.0 / (1.0 + 0.25 * u * u).sqrt(), None);
    println!("\n{:>6} {:>20} {:>20}", "u", "closed form", "from ψ");
    for u in [-3.0, -0.5, 0.5, 3.0] {
        println!("{u:>6.1} {:>20.15} {:>20.15}", k.exp_phi(u)?, via_psi.exp_phi(u)?);
    }
    Ok(())
}
