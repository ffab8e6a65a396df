use defexp::model;
use serde_json::{json, Value};

fn base() -> Value {
    json!({
        "deformation": {"kind": "kaniadakis", "kappa": 0.5},
        "space": {"mu": [1.0, 1.0, 1.0]},
        "base_density": [0.2, 0.3, 0.5],
        "statistics": [[1.0, 2.0, 3.0], [0.0, 1.0, 0.0]]
    })
}

fn error_path(edit: impl FnOnce(&mut Value)) -> String {
    let mut v = base();
    edit(&mut v);
    let err = model::from_value(&v).expect_err("invalid model");
    err.path().expect("validation errors carry a path").to_string()
}

#[test]
fn shipped_models_load() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/models");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let fam = model::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(fam.alpha(&vec![0.1; fam.dim()]).unwrap().is_finite());
        count += 1;
    }
    assert!(count >= 4);
}

#[test]
fn errors_point_at_the_field() {
    assert_eq!(error_path(|v| v["deformation"]["kappa"] = json!(2.0)), "deformation.kappa");
    assert_eq!(error_path(|v| v["deformation"]["kind"] = json!("tsallis")), "deformation.kind");
    assert_eq!(error_path(|v| v["statistics"][1] = json!([0.0, 1.0])), "statistics[1]");
    assert_eq!(error_path(|v| v["statistics"][0][1] = json!("x")), "statistics[0][1]");
    assert_eq!(error_path(|v| v["space"]["mu"][2] = json!(-1.0)), "space.mu[2]");
    assert_eq!(error_path(|v| v["base_density"] = json!([0.2, 0.3])), "base_density");
    assert_eq!(error_path(|v| v["extra"] = json!(1)), "extra");
    assert!(model::parse("{not json").unwrap_err().path() == Some("model"));
}

#[test]
fn base_density_must_integrate_to_one() {
    let path = error_path(|v| v["base_density"] = json!([0.2, 0.3, 0.6]));
    assert!(path.starts_with("base_density"), "{path}");
}
