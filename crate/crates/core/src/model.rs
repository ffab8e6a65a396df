//! JSON model files.
//!
//! ```json
//! {
//!   "deformation": {"kind": "kaniadakis", "kappa": 0.5},
//!   "space": {"labels": ["a", "b"], "mu": [0.5, 0.5]},
//!   "base_density": [1.0, 1.0],
//!   "statistics": [[0.0, 1.0]],
//!   "tolerances": {"alpha_tol": 1e-12, "newton_max_iter": 100}
//! }
//! ```
//!
//! Deformations are `{"kind": "classical"}`, `{"kind": "kaniadakis", "kappa": κ}`
//! or `{"kind": "from_psi", "psi_table": {"u": [...], "psi": [...]},
//! "interpolation": "monotone-cubic"}`, optionally with `"quadrature"` and
//! `"inversion"` settings. `labels` may be omitted and `tolerances` is
//! optional. Validation errors name the offending field, e.g.
//! `statistics[1][3]`.

use std::path::Path;

use serde_json::{Map, Value};

use crate::deformations::Deformation;
use crate::error::{Error, Result};
use crate::family::{FamilyTolerances, PhiExponentialFamily};
use crate::state_space::{Density, RandomVariable, SampleSpace};

/// Version of the model and output schemas.
pub const SCHEMA_VERSION: &str = "1";

/// Reads and validates a model file.
pub fn load(path: impl AsRef<Path>) -> Result<PhiExponentialFamily> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid("model", format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

/// Parses and validates a model from JSON text.
pub fn parse(text: &str) -> Result<PhiExponentialFamily> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid("model", format!("malformed JSON: {e}")))?;
    from_value(&value)
}

/// Builds a family from an already parsed JSON document.
pub fn from_value(value: &Value) -> Result<PhiExponentialFamily> {
    let root = object(value, "")?;
    reject_unknown(root, "", &["deformation", "space", "base_density", "statistics", "tolerances"])?;
    let deformation = deformation(field(root, "", "deformation")?, "deformation")?;
    let space = space(field(root, "", "space")?, "space")?;
    let base = numbers(field(root, "", "base_density")?, "base_density")?;
    if base.len() != space.len() {
        return Err(Error::invalid("base_density", format!("expected {} values, found {}", space.len(), base.len())));
    }
    let base = Density::new(&space, base).map_err(|e| nest(e, "base_density"))?;
    let stats = array(field(root, "", "statistics")?, "statistics")?;
    if stats.is_empty() {
        return Err(Error::invalid("statistics", "at least one statistic is required"));
    }
    let statistics = stats
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let at = format!("statistics[{j}]");
            let values = numbers(s, &at)?;
            if values.len() != space.len() {
                return Err(Error::invalid(at, format!("expected {} values, found {}", space.len(), values.len())));
            }
            Ok(RandomVariable::new(values))
        })
        .collect::<Result<Vec<_>>>()?;
    let tolerances = match root.get("tolerances") {
        None => FamilyTolerances::default(),
        Some(t) => tolerances(t, "tolerances")?,
    };
    Ok(PhiExponentialFamily::new(deformation, space, base, statistics)?.with_tolerances(tolerances))
}

/// Parses a deformation description.
pub fn deformation(value: &Value, at: &str) -> Result<Deformation> {
    let obj = object(value, at)?;
    let kind = string(field(obj, at, "kind")?, &join(at, "kind"))?;
    let mut d = match kind {
        "classical" => {
            reject_unknown(obj, at, &["kind", "quadrature", "inversion"])?;
            Deformation::classical()
        }
        "kaniadakis" => {
            reject_unknown(obj, at, &["kind", "kappa", "quadrature", "inversion"])?;
            let path = join(at, "kappa");
            let kappa = number(field(obj, at, "kappa")?, &path)?;
            Deformation::kaniadakis(kappa)
                .map_err(|_| Error::invalid(path, format!("kappa must lie in [0, 1), found {kappa}")))?
        }
        "from_psi" => {
            reject_unknown(obj, at, &["kind", "psi_table", "interpolation", "quadrature", "inversion"])?;
            if let Some(interp) = obj.get("interpolation") {
                let path = join(at, "interpolation");
                if string(interp, &path)? != "monotone-cubic" {
                    return Err(Error::invalid(path, "only \"monotone-cubic\" is supported"));
                }
            }
            let table_at = join(at, "psi_table");
            let table = object(field(obj, at, "psi_table")?, &table_at)?;
            reject_unknown(table, &table_at, &["u", "psi"])?;
            let u = numbers(field(table, &table_at, "u")?, &join(&table_at, "u"))?;
            let psi = numbers(field(table, &table_at, "psi")?, &join(&table_at, "psi"))?;
            Deformation::from_psi_table(u, psi).map_err(|e| nest(e, &table_at))?
        }
        other => {
            return Err(Error::invalid(
                join(at, "kind"),
                format!("unknown deformation kind {other:?}; expected classical, kaniadakis or from_psi"),
            ))
        }
    };
    if let Some(q) = obj.get("quadrature") {
        let qat = join(at, "quadrature");
        let qo = object(q, &qat)?;
        reject_unknown(qo, &qat, &["abs_tol", "max_subdivisions"])?;
        if let Some(v) = qo.get("abs_tol") {
            d.quadrature.abs_tol = positive(v, &join(&qat, "abs_tol"))?;
        }
        if let Some(v) = qo.get("max_subdivisions") {
            d.quadrature.max_subdivisions = count(v, &join(&qat, "max_subdivisions"))?;
        }
    }
    if let Some(i) = obj.get("inversion") {
        let iat = join(at, "inversion");
        let io = object(i, &iat)?;
        reject_unknown(io, &iat, &["tol", "max_iter"])?;
        if let Some(v) = io.get("tol") {
            d.inversion.tol = positive(v, &join(&iat, "tol"))?;
        }
        if let Some(v) = io.get("max_iter") {
            d.inversion.max_iter = count(v, &join(&iat, "max_iter"))?;
        }
    }
    Ok(d)
}

fn space(value: &Value, at: &str) -> Result<SampleSpace> {
    let obj = object(value, at)?;
    reject_unknown(obj, at, &["labels", "mu"])?;
    let mu = numbers(field(obj, at, "mu")?, &join(at, "mu"))?;
    let labels = match obj.get("labels") {
        None => (0..mu.len()).map(|i| format!("x{i}")).collect(),
        Some(l) => {
            let lat = join(at, "labels");
            array(l, &lat)?
                .iter()
                .enumerate()
                .map(|(i, v)| string(v, &format!("{lat}[{i}]")).map(str::to_string))
                .collect::<Result<Vec<_>>>()?
        }
    };
    if labels.len() != mu.len() {
        return Err(Error::invalid(
            join(at, "labels"),
            format!("expected {} labels, found {}", mu.len(), labels.len()),
        ));
    }
    SampleSpace::new(labels, mu).map_err(|e| nest(e, at))
}

fn tolerances(value: &Value, at: &str) -> Result<FamilyTolerances> {
    let obj = object(value, at)?;
    reject_unknown(obj, at, &["alpha_tol", "newton_max_iter"])?;
    let mut t = FamilyTolerances::default();
    if let Some(v) = obj.get("alpha_tol") {
        t.alpha_tol = positive(v, &join(at, "alpha_tol"))?;
    }
    if let Some(v) = obj.get("newton_max_iter") {
        t.newton_max_iter = count(v, &join(at, "newton_max_iter"))?;
    }
    Ok(t)
}

fn join(at: &str, key: &str) -> String {
    if at.is_empty() {
        key.to_string()
    } else {
        format!("{at}.{key}")
    }
}

/// Prefixes the path of a validation error raised by a constructor.
fn nest(err: Error, at: &str) -> Error {
    match err {
        Error::InvalidInput { path, message } => {
            let path = if path.is_empty() {
                at.to_string()
            } else if path.starts_with(at) {
                path
            } else if path.starts_with('[') {
                format!("{at}{path}")
            } else {
                join(at, &path)
            };
            Error::InvalidInput { path, message }
        }
        Error::ShapeMismatch { expected, found } => {
            Error::invalid(at, format!("expected {expected} values, found {found}"))
        }
        other => other,
    }
}

fn object<'a>(value: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| Error::invalid(display(at), "expected an object"))
}

fn array<'a>(value: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| Error::invalid(display(at), "expected an array"))
}

fn string<'a>(value: &'a Value, at: &str) -> Result<&'a str> {
    value.as_str().ok_or_else(|| Error::invalid(display(at), "expected a string"))
}

fn number(value: &Value, at: &str) -> Result<f64> {
    value.as_f64().ok_or_else(|| Error::invalid(display(at), "expected a number"))
}

fn positive(value: &Value, at: &str) -> Result<f64> {
    let v = number(value, at)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(at, format!("expected a positive number, found {v}")))
    }
}

fn count(value: &Value, at: &str) -> Result<usize> {
    match value.as_u64() {
        Some(n) if n > 0 => Ok(n as usize),
        _ => Err(Error::invalid(at, "expected a positive integer")),
    }
}

fn numbers(value: &Value, at: &str) -> Result<Vec<f64>> {
    array(value, at)?.iter().enumerate().map(|(i, v)| number(v, &format!("{at}[{i}]"))).collect()
}

fn field<'a>(obj: &'a Map<String, Value>, at: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::invalid(join(at, key), "missing field"))
}

fn reject_unknown(obj: &Map<String, Value>, at: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::invalid(join(at, k), "unknown field")),
        None => Ok(()),
    }
}

fn display(at: &str) -> String {
    if at.is_empty() {
        "model".into()
    } else {
        at.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_POINT: &str = r#"{
        "deformation": {"kind": "kaniadakis", "kappa": 0.5},
        "space": {"labels": ["a", "b"], "mu": [0.5, 0.5]},
        "base_density": [1.0, 1.0],
        "statistics": [[0.0, 1.0]]
    }"#;

    fn path_of(text: &str) -> String {
        match parse(text) {
            Err(Error::InvalidInput { path, .. }) => path,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn parses_two_point_model() {
        let fam = parse(TWO_POINT).unwrap();
        assert_eq!(fam.dim(), 1);
        assert_eq!(fam.space().labels(), &["a".to_string(), "b".to_string()]);
        assert_eq!(fam.alpha(&[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn errors_point_at_the_field() {
        assert_eq!(path_of(&TWO_POINT.replace("0.5}", "1.5}")), "deformation.kappa");
        assert_eq!(path_of(&TWO_POINT.replace("[[0.0, 1.0]]", "[[0.0, 1.0, 2.0]]")), "statistics[0]");
        assert_eq!(path_of(&TWO_POINT.replace("[[0.0, 1.0]]", "[[0.0, \"x\"]]")), "statistics[0][1]");
        assert_eq!(path_of(&TWO_POINT.replace("\"mu\": [0.5, 0.5]", "\"mu\": [0.5, -0.5]")), "space.mu[1]");
        assert_eq!(path_of(&TWO_POINT.replace("[1.0, 1.0]", "[1.5, 1.0]")), "base_density");
        assert_eq!(
            path_of(&TWO_POINT.replace("\"kind\": \"kaniadakis\"", "\"kind\": \"tsallis\"")),
            "deformation.kind"
        );
        assert_eq!(path_of(&TWO_POINT.replace("\"statistics\"", "\"stats\"")), "stats");
        assert_eq!(path_of("[1, 2]"), "model");
        assert_eq!(path_of("{"), "model");
    }

    #[test]
    fn from_psi_table_and_settings() {
        let text = r#"{
            "deformation": {"kind": "from_psi", "interpolation": "monotone-cubic",
                            "psi_table": {"u": [-2.0, 0.0, 2.0], "psi": [0.7, 1.0, 0.7]},
                            "inversion": {"tol": 1e-13, "max_iter": 300}},
            "space": {"mu": [1.0, 1.0, 1.0]},
            "base_density": [0.2, 0.3, 0.5],
            "statistics": [[0.0, 1.0, 2.0]],
            "tolerances": {"alpha_tol": 1e-11}
        }"#;
        let fam = parse(text).unwrap();
        assert_eq!(fam.deformation().inversion.max_iter, 300);
        assert_eq!(fam.tolerances().alpha_tol, 1e-11);
        assert_eq!(fam.space().labels()[2], "x2");
    }
}
