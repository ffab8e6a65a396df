//! The conjugate of K restricted to the model space (H_V) and over all
//! centered random variables, for dual points u* = q/p − 1.
//!
//! cargo run --example nonparametric_conjugate

use defexp::conjugate::{h_full, h_v};
use defexp::{model, ConjugateOptions, RandomVariable};

fn main() -> defexp::Result<()> {
    let fam = model::load(concat!(env!("CARGO_MANIFEST_DIR"), "/models/seg.json"))?;
    let opts = ConjugateOptions::default();
    let p = fam.base().values().to_vec();
    for q in [[0.2, 0.3, 0.5], [0.5, 0.3, 0.2], [0.05, 0.05, 0.9], [0.0, 0.5, 0.5]] {
        let u_star = RandomVariable::new(q.iter().zip(&p).map(|(q, p)| q / p - 1.0).collect());
        let restricted = h_v(&fam, &u_star, &opts)?;
        let full = h_full(&fam, &u_star, &opts)?;
        println!("q = {q:?}");
        println!(
            "  (u*+1)p is a density: {}, η = {:.4?}, H_V = {:.10} ({:?})",
            restricted.density_predicate, restricted.eta, restricted.result.value, restricted.result.status
        );
        println!(
            "  H = {:.10} ({:?}), stationarity residual {:?}",
            full.conjugate.result.value, full.conjugate.result.status, full.stationarity_residual
        );
    }

    // a dual point with u* + 1 < 0 somewhere falls outside the polytope
    let u_star = RandomVariable::new(vec![-2.0, 0.0, 0.8]);
    let r = h_v(&fam, &u_star, &opts)?;
    println!(
        "\nu* = {:?}: density {}, status {:?}, certificate {:?}",
        u_star.values(),
        r.density_predicate,
        r.result.status,
        r.result.certificate
    );
    Ok(())
}
