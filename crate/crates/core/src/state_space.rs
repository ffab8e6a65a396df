//! Finite sample spaces, random variables and densities.
//!
//! Densities are stored with respect to the reference measure μ, so a
//! density `p` satisfies `Σ_x p(x) μ(x) = 1` and expectations are the
//! μ-weighted sums `E_p[u] = Σ_x u(x) p(x) μ(x)`.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ p μ = 1` accepted by [`Density::new`].
pub const DENSITY_TOL: f64 = 1e-12;

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpace {
    labels: Vec<String>,
    mu: Vec<f64>,
}

impl SampleSpace {
    pub fn new(labels: Vec<String>, mu: Vec<f64>) -> Result<Self> {
        if labels.len() != mu.len() {
            return Err(Error::ShapeMismatch { expected: labels.len(), found: mu.len() });
        }
        if mu.len() < 2 {
            return Err(Error::invalid("mu", "a sample space needs at least two points"));
        }
        if let Some(i) = mu.iter().position(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::invalid(format!("mu[{i}]"), "reference weights must be positive and finite"));
        }
        let mut seen = HashSet::new();
        for (i, l) in labels.iter().enumerate() {
            if !seen.insert(l.as_str()) {
                return Err(Error::invalid(format!("labels[{i}]"), format!("duplicate label {l:?}")));
            }
        }
        Ok(Self { labels, mu })
    }

    /// A space labelled `x0, x1, …` with the given weights.
    pub fn with_weights(mu: Vec<f64>) -> Result<Self> {
        let labels = (0..mu.len()).map(|i| format!("x{i}")).collect();
        Self::new(labels, mu)
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Total reference mass `Σ μ`.
    pub fn total_mass(&self) -> f64 {
        self.mu.iter().sum()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == self.len() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch { expected: self.len(), found: n })
        }
    }

    /// True for nonnegative vectors with `Σ q μ = 1 ± 1e-12`.
    pub fn is_density(&self, values: &[f64]) -> bool {
        values.len() == self.len()
            && values.iter().all(|v| v.is_finite() && *v >= 0.0)
            && (self.weighted_sum(values) - 1.0).abs() <= DENSITY_TOL
    }

    fn weighted_sum(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.mu).map(|(v, m)| v * m).sum()
    }

    /// `E_p[u] = Σ u(x) p(x) μ(x)`.
    pub fn expectation(&self, p: &Density, u: &RandomVariable) -> Result<f64> {
        self.check_len(p.len())?;
        self.check_len(u.len())?;
        Ok(u.0.iter().zip(&p.values).zip(&self.mu).map(|((u, p), m)| u * p * m).sum())
    }

    /// `E_p[u v]`, the duality pairing on random variables.
    pub fn inner(&self, p: &Density, u: &RandomVariable, v: &RandomVariable) -> Result<f64> {
        self.check_len(v.len())?;
        self.expectation(p, &u.hadamard(v))
    }

    /// `u − E_p[u]`.
    pub fn center(&self, p: &Density, u: &RandomVariable) -> Result<RandomVariable> {
        let mean = self.expectation(p, u)?;
        Ok(u.shifted(-mean))
    }

    pub fn covariance(&self, p: &Density, u: &RandomVariable, v: &RandomVariable) -> Result<f64> {
        let cu = self.center(p, u)?;
        let cv = self.center(p, v)?;
        self.inner(p, &cu, &cv)
    }

    /// E_p-orthogonal projection of `target` onto `span(basis)`.
    ///
    /// The basis must be p-centered. The Gram system is solved with a
    /// pseudo-inverse that drops singular values below `1e-10 σ_max`, so
    /// linearly dependent bases are accepted.
    pub fn project_onto_span(
        &self,
        p: &Density,
        basis: &[RandomVariable],
        target: &RandomVariable,
    ) -> Result<Projection> {
        self.check_len(target.len())?;
        for (j, b) in basis.iter().enumerate() {
            let mean = self.expectation(p, b)?;
            let scale = b.max_abs().max(1.0);
            if mean.abs() > 1e-9 * scale {
                return Err(Error::invalid(
                    format!("basis[{j}]"),
                    format!("basis vector is not centered (mean {mean:e})"),
                ));
            }
        }
        let k = basis.len();
        if k == 0 {
            return Ok(Projection { coefficients: vec![], variable: RandomVariable::zeros(self.len()) });
        }
        let mut gram = DMatrix::zeros(k, k);
        let mut rhs = DVector::zeros(k);
        for j in 0..k {
            for l in j..k {
                let g = self.inner(p, &basis[j], &basis[l])?;
                gram[(j, l)] = g;
                gram[(l, j)] = g;
            }
            rhs[j] = self.inner(p, &basis[j], target)?;
        }
        let coefficients = pinv_solve(gram, &rhs).as_slice().to_vec();
        let variable = RandomVariable::combine(&coefficients, basis);
        Ok(Projection { coefficients, variable })
    }
}

/// Solves a symmetric positive semidefinite system with a truncated
/// pseudo-inverse (relative cutoff [`RANK_TOL`]).
pub(crate) fn pinv_solve(matrix: DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    let svd = matrix.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return DVector::zeros(rhs.len());
    }
    let cutoff = RANK_TOL * smax;
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let mut out = DVector::zeros(vt.ncols());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            let coef = u.column(i).dot(rhs) / s;
            out += vt.row(i).transpose() * coef;
        }
    }
    out
}

/// Result of [`SampleSpace::project_onto_span`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub coefficients: Vec<f64>,
    pub variable: RandomVariable,
}

/// A real function on the sample space, one value per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RandomVariable(Vec<f64>);

impl RandomVariable {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self(vec![c; n])
    }

    pub fn indicator(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    /// `Σ_j c_j v_j`; all `vars` must share one length and `vars` must be nonempty.
    pub fn combine(coefficients: &[f64], vars: &[RandomVariable]) -> Self {
        let n = vars.first().map_or(0, |v| v.len());
        let mut out = vec![0.0; n];
        for (c, v) in coefficients.iter().zip(vars) {
            for (o, x) in out.iter_mut().zip(&v.0) {
                *o += c * x;
            }
        }
        Self(out)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v + c).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + t · other`.
    pub fn axpy(&self, t: f64, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + t * b).collect())
    }

    pub fn hadamard(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }
}

/// A density with respect to μ.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Density {
    values: Vec<f64>,
}

impl Density {
    /// Validates nonnegativity and `Σ q μ = 1 ± 1e-12`.
    pub fn new(space: &SampleSpace, values: Vec<f64>) -> Result<Self> {
        space.check_len(values.len())?;
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid(format!("[{i}]"), "density values must be finite and nonnegative"));
        }
        let total = space.weighted_sum(&values);
        if (total - 1.0).abs() > DENSITY_TOL {
            return Err(Error::invalid("", format!("density integrates to {total}, not 1")));
        }
        Ok(Self { values })
    }

    /// Normalizes nonnegative weights to a density.
    pub fn from_weights(space: &SampleSpace, weights: Vec<f64>) -> Result<Self> {
        space.check_len(weights.len())?;
        if let Some(i) = weights.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid(format!("[{i}]"), "weights must be finite and nonnegative"));
        }
        let total = space.weighted_sum(&weights);
        if !(total > 0.0) {
            return Err(Error::invalid("", "weights have zero mass"));
        }
        Ok(Self { values: weights.into_iter().map(|w| w / total).collect() })
    }

    /// The constant density `1 / Σ μ`.
    pub fn uniform(space: &SampleSpace) -> Self {
        let c = 1.0 / space.total_mass();
        Self { values: vec![c; space.len()] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|v| *v > 0.0)
    }

    /// Pointwise ratio `self / other` as a random variable.
    pub fn ratio(&self, other: &Density) -> RandomVariable {
        RandomVariable::new(self.values.iter().zip(&other.values).map(|(a, b)| a / b).collect())
    }
}
