//! Library values against the committed oracle fixture.

use defexp::cli::output::to_canonical_json;
use defexp::conjugate::{self, ConjugateOptions, ConjugateStatus};
use defexp::oracle;
use defexp::{Deformation, Density, MarginalPolytope, PhiExponentialFamily, RandomVariable, SampleSpace};
use serde_json::Value;

const FIXTURE: &str = include_str!("../fixtures/derived_values.json");

fn fixture() -> Value {
    serde_json::from_str(FIXTURE).expect("fixture JSON")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().expect("array").iter().map(|x| x.as_f64().expect("number")).collect()
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array().expect("array").iter().map(floats).collect()
}

fn deformation(name: &str) -> Deformation {
    match name {
        "classical" => Deformation::classical(),
        other => {
            let kappa = other.strip_prefix("kaniadakis-").expect("known deformation").parse().unwrap();
            Deformation::kaniadakis(kappa).unwrap()
        }
    }
}

fn space(inputs: &Value) -> SampleSpace {
    SampleSpace::with_weights(floats(&inputs["mu"])).unwrap()
}

fn family(inputs: &Value) -> PhiExponentialFamily {
    let space = space(inputs);
    let p = Density::new(&space, floats(&inputs["p"])).unwrap();
    let stats = match inputs.get("H") {
        Some(h) => matrix(h).into_iter().map(RandomVariable::new).collect(),
        None => {
            let n = space.len();
            (0..n - 1).map(|i| RandomVariable::indicator(n, i)).collect()
        }
    };
    PhiExponentialFamily::new(deformation(inputs["deformation"].as_str().unwrap()), space, p, stats).unwrap()
}

fn close(key: &str, got: f64, want: f64, tol: f64) {
    assert!(
        (got - want).abs() <= tol * want.abs().max(1.0),
        "{key}: library {got:.17e}, fixture {want:.17e}, tolerance {tol:e}"
    );
}

fn close_all(key: &str, got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len(), "{key}: length");
    for (g, w) in got.iter().zip(want) {
        close(key, *g, *w, tol);
    }
}

fn check(key: &str, entry: &Value) {
    let inputs = &entry["inputs"];
    let value = &entry["value"];
    let tol = entry["tolerance"].as_f64().unwrap();
    let kappa = || Deformation::kaniadakis(inputs["kappa"].as_f64().unwrap()).unwrap();
    let at = |name: &str| inputs[name].as_f64().unwrap();
    match key {
        "deform.ln_phi.kaniadakis" => close(key, kappa().ln_phi(at("v")).unwrap(), value.as_f64().unwrap(), tol),
        "deform.phi.kaniadakis" => close(key, kappa().phi(at("v")).unwrap(), value.as_f64().unwrap(), tol),
        "deform.psi.kaniadakis" => close(key, kappa().psi(at("u")).unwrap(), value.as_f64().unwrap(), tol),
        "deform.exp_phi.kaniadakis.u1" | "deform.exp_phi.kaniadakis.u1_5" => {
            close(key, kappa().exp_phi(at("u")).unwrap(), value.as_f64().unwrap(), tol)
        }
        "deform.exp_phi_derivatives.kaniadakis.u0" | "deform.exp_phi_derivatives.kaniadakis.u1_5" => {
            let d = kappa();
            close(key, d.exp_phi_d1(at("u")).unwrap(), value["d1"].as_f64().unwrap(), tol);
            close(key, d.exp_phi_d2(at("u")).unwrap(), value["d2"].as_f64().unwrap(), tol);
        }
        "deform.self_dual.asymmetric_psi" => {
            let d = Deformation::from_psi(|u: f64| (u * u + u).exp(), None);
            let u = at("u");
            let product = d.exp_phi(u).unwrap() * d.exp_phi(-u).unwrap();
            close(key, product, value["product"].as_f64().unwrap(), tol);
            assert!((product - 1.0).abs() > 1e-3, "{key}: asymmetric ψ must not be self-dual");
        }
        "oracle.quad_ln_phi.classical" => {
            close(key, Deformation::classical().ln_phi(at("v")).unwrap(), value.as_f64().unwrap(), tol)
        }
        "state_space.expectation" | "state_space.center" | "state_space.covariance" => {
            let s = space(inputs);
            let p = Density::new(&s, floats(&inputs["p"])).unwrap();
            let u = RandomVariable::new(floats(&inputs["u"]));
            match key {
                "state_space.expectation" => close(key, s.expectation(&p, &u).unwrap(), value.as_f64().unwrap(), tol),
                "state_space.covariance" => close(key, s.covariance(&p, &u, &u).unwrap(), value.as_f64().unwrap(), tol),
                _ => close_all(key, s.center(&p, &u).unwrap().values(), &floats(value), tol),
            }
        }
        "state_space.projection" => {
            let s = space(inputs);
            let p = Density::new(&s, floats(&inputs["p"])).unwrap();
            let basis: Vec<RandomVariable> = matrix(&inputs["basis"]).into_iter().map(RandomVariable::new).collect();
            let target = RandomVariable::new(floats(&inputs["target"]));
            let proj = s.project_onto_span(&p, &basis, &target).unwrap();
            close(key, proj.coefficients[0], value.as_f64().unwrap(), tol);
        }
        "family.alpha.classical" | "family.alpha.kaniadakis" => {
            close(key, family(inputs).alpha(&floats(&inputs["theta"])).unwrap(), value.as_f64().unwrap(), tol)
        }
        "family.density.classical" => {
            let got = family(inputs).density(&floats(&inputs["theta"])).unwrap();
            close_all(key, got.values(), &floats(value), tol);
        }
        "family.k.classical" => {
            let fam = family(inputs);
            let (u, _) = fam.theta_to_u(&floats(&inputs["theta"])).unwrap();
            close(key, fam.k(u.variable()).unwrap(), value.as_f64().unwrap(), tol);
        }
        "family.escort.kaniadakis" => {
            let fam = family(inputs);
            let (u, _) = fam.theta_to_u(&floats(&inputs["theta"])).unwrap();
            close_all(key, fam.escort(u.variable()).unwrap().values(), &floats(value), tol);
        }
        "family.dk.classical" => {
            let fam = family(inputs);
            let (u, _) = fam.theta_to_u(&floats(&inputs["theta"])).unwrap();
            let v = fam.centered_basis()[0].clone();
            close(key, fam.dk(u.variable(), &v).unwrap(), value.as_f64().unwrap(), tol);
        }
        "family.divergence.kaniadakis" => {
            let fam = family(inputs);
            let q = fam.density(&floats(&inputs["theta"])).unwrap();
            close(key, fam.divergence(&q).unwrap(), value.as_f64().unwrap(), tol);
        }
        "family.grad_alpha.classical" => {
            let got = family(inputs).grad_alpha(&floats(&inputs["theta"])).unwrap();
            close_all(key, &got, &floats(value), tol);
        }
        "family.d2k.kaniadakis.origin" => {
            let fam = family(inputs);
            let zero = RandomVariable::zeros(fam.space().len());
            let v = RandomVariable::new(floats(&inputs["v"]));
            let w = RandomVariable::new(floats(&inputs["w"]));
            close(key, fam.d2k(&zero, &v, &w).unwrap(), value.as_f64().unwrap(), tol);
        }
        "family.recover_u.kaniadakis" => {
            let fam = family(inputs);
            let q = Density::new(fam.space(), floats(&inputs["q"])).unwrap();
            close_all(key, fam.recover_u(&q).unwrap().values(), &floats(value), tol);
        }
        "polytope.dimension.general_position" | "polytope.dimension.collinear" => {
            let m = MarginalPolytope::from_points(matrix(&inputs["points"])).unwrap();
            assert_eq!(m.dimension() as u64, value.as_u64().unwrap(), "{key}");
        }
        "polytope.separation.segment" => {
            let m = MarginalPolytope::from_points(matrix(&inputs["points"])).unwrap();
            let eta = floats(&inputs["eta"]);
            let cert = m.contains(&eta).unwrap();
            let sep = cert.separator().expect("outside point");
            close_all(key, &sep.a, &floats(&value["a"]), tol);
            close(key, sep.a0, value["a0"].as_f64().unwrap(), tol);
        }
        "polytope.interior.square_centroid" => {
            let m = MarginalPolytope::from_points(matrix(&inputs["points"])).unwrap();
            let report = m.relative_interior_contains(&floats(&inputs["eta"])).unwrap();
            assert!(report.inside, "{key}");
            close(key, report.slack.unwrap(), value.as_f64().unwrap(), tol);
        }
        "conjugate.alpha_star.classical" | "conjugate.alpha_star.kaniadakis" => {
            let fam = family(inputs);
            let r = conjugate::alpha_star(&fam, &floats(&inputs["eta"]), &ConjugateOptions::default()).unwrap();
            assert_eq!(r.status, ConjugateStatus::AttainedInterior, "{key}");
            close(key, r.value, value["value"].as_f64().unwrap(), tol);
        }
        "conjugate.hv.kaniadakis" => {
            let fam = family(inputs);
            let u_star = RandomVariable::new(floats(&value["u_star"]));
            let r = conjugate::h_v(&fam, &u_star, &ConjugateOptions::default()).unwrap();
            close_all(key, &r.eta, &floats(&value["eta"]), 1e-12);
            assert!(r.density_predicate, "{key}");
            close(key, r.result.value, value["value"].as_f64().unwrap(), tol);
        }
        other => panic!("fixture entry {other} has no library counterpart"),
    }
}

#[test]
fn library_matches_every_fixture_entry() {
    let fx = fixture();
    let entries = fx.as_object().expect("object");
    assert!(entries.len() >= 30);
    for (key, entry) in entries {
        check(key, entry);
    }
}

/// Slow: re-runs every oracle.
#[test]
fn regeneration_is_byte_identical() {
    let regenerated = to_canonical_json(&oracle::derived_values()).unwrap();
    assert!(
        regenerated == FIXTURE,
        "fixtures/derived_values.json is stale; regenerate with `defexp oracle-values --out`"
    );
}
