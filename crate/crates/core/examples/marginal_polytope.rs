//! Membership, separation and relative-interior tests on the marginal
//! polytope of a two-statistic model.
//!
//! cargo run --example marginal_polytope

use defexp::{model, MarginalPolytope, MembershipCertificate};

fn main() -> defexp::Result<()> {
    let fam = model::load(concat!(env!("CARGO_MANIFEST_DIR"), "/models/square.json"))?;
    let poly = fam.polytope();
    println!("points {:?}, dimension {}", poly.vertices(), poly.dimension());
    for eta in [[0.5, 0.5], [0.9, 0.1], [1.0, 0.5], [0.0, 0.0], [1.2, 0.5], [-0.5, 2.0]] {
        let interior = poly.relative_interior_contains(&eta)?;
        match poly.contains(&eta)? {
            MembershipCertificate::Member { weights } => {
                println!("η = {eta:?}: member, λ = {weights:.3?}, relative interior {}", interior.inside)
            }
            MembershipCertificate::Separated(sep) => {
                println!(
                    "η = {eta:?}: outside, a = {:?}, a0 = {} (verified {})",
                    sep.a,
                    sep.a0,
                    sep.verify(poly, &eta, 1e-9)
                )
            }
        }
    }

    // a degenerate hull: collinear points span a segment
    let seg = MarginalPolytope::from_points(vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![2.0, 4.0]])?;
    println!("\ncollinear points: dimension {}", seg.dimension());
    println!("midpoint member: {}", seg.contains(&[1.0, 2.0])?.is_member());
    println!("off the line: {:?}", seg.contains(&[1.0, 1.0])?.separator());
    Ok(())
}
