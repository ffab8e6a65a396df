//! Convex conjugates of the normalizer.
//!
//! `α*(η) = sup_θ { θ·η − α(θ) }` is finite exactly on the marginal
//! polytope M. On the relative interior the supremum is attained at the θ̂
//! with `∇α(θ̂) = η` and `α*(η) = θ̂·η − α(θ̂)`; outside M the separating
//! functional `(a, a₀)` gives a divergent sequence `θ_n = n a`; on the
//! relative boundary the value is finite but generally not attained.
//!
//! The nonparametric conjugate `H_V(u*) = sup_{u∈V} E_p[u* u] − K(u)`
//! reduces to `α*(η)` with `η_j = E_p[(u* + 1) H_j]`, and is finite when
//! `(u* + 1) p` is a density.
//!
//! All optimization runs in the reduced coordinates of the affine hull of
//! `{H(x)}`: with `H(x) = b + U ξ(x)` and `ζ = Uᵀθ`,
//! `θ·η − α(θ) = ζ·ξ_η − K(ζ·ξ)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::PhiExponentialFamily;
use crate::polytope::{dot, MembershipCertificate, SeparationCertificate};
use crate::state_space::{pinv_solve, RandomVariable, DENSITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugateOptions {
    /// Gradient-norm tolerance for the interior Newton solve.
    pub newton_tol: f64,
    pub max_iter: usize,
    /// The divergence witness stops once `g(θ_n)` exceeds this bound.
    pub witness_bound: f64,
    /// Largest `n` evaluated by the divergence witness.
    pub witness_budget: usize,
    /// Iteration cap of the ascent on boundary points.
    pub boundary_max_iter: usize,
}

impl Default for ConjugateOptions {
    fn default() -> Self {
        Self { newton_tol: 1e-9, max_iter: 200, witness_bound: 1e3, witness_budget: 4096, boundary_max_iter: 500 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugateStatus {
    AttainedInterior,
    FiniteBoundary,
    InfiniteOutside,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub iterations: usize,
    #[serde(serialize_with = "crate::numeric::serialize_extended")]
    pub gradient_norm: f64,
    /// The statistics are affinely dependent; θ̂ is the minimum-norm maximizer.
    pub rank_deficient: bool,
    /// Running maximum of the objective (boundary ascent only).
    pub lower_bounds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugateResult {
    pub status: ConjugateStatus,
    /// `+∞` when η is outside M; a lower bound when on the boundary.
    #[serde(serialize_with = "crate::numeric::serialize_extended")]
    pub value: f64,
    pub attained: bool,
    /// θ̂ (interior) or the best iterate (boundary).
    pub maximizer: Option<Vec<f64>>,
    pub certificate: Option<SeparationCertificate>,
    /// `g(θ_n) = θ_n·η − α(θ_n)` for `θ_n = n a`, `n = 1, 2, …`.
    pub witness: Option<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl ConjugateResult {
    pub fn is_finite(&self) -> bool {
        self.status != ConjugateStatus::InfiniteOutside
    }
}

/// `g(θ) = θ·η − α(θ)`.
pub fn objective(fam: &PhiExponentialFamily, eta: &[f64], theta: &[f64]) -> Result<f64> {
    Ok(dot(theta, eta) - fam.alpha(theta)?)
}

/// The convex conjugate `α*(η)`.
pub fn alpha_star(fam: &PhiExponentialFamily, eta: &[f64], opts: &ConjugateOptions) -> Result<ConjugateResult> {
    let polytope = fam.polytope();
    match polytope.contains(eta)? {
        MembershipCertificate::Separated(cert) => divergent(fam, eta, cert, opts),
        MembershipCertificate::Member { .. } => {
            let chart = ReducedChart::new(fam, eta)?;
            if polytope.relative_interior_contains(eta)?.inside {
                chart.newton(opts)
            } else {
                chart.boundary_ascent(opts)
            }
        }
    }
}

fn divergent(
    fam: &PhiExponentialFamily,
    eta: &[f64],
    cert: SeparationCertificate,
    opts: &ConjugateOptions,
) -> Result<ConjugateResult> {
    let mut witness = Vec::new();
    for n in 1..=opts.witness_budget {
        let theta: Vec<f64> = cert.a.iter().map(|a| a * n as f64).collect();
        let g = objective(fam, eta, &theta)?;
        witness.push(g);
        if g > opts.witness_bound {
            break;
        }
    }
    Ok(ConjugateResult {
        status: ConjugateStatus::InfiniteOutside,
        value: f64::INFINITY,
        attained: false,
        maximizer: None,
        certificate: Some(cert),
        witness: Some(witness),
        diagnostics: Diagnostics { rank_deficient: fam.polytope().dimension() < fam.dim(), ..Diagnostics::default() },
    })
}

/// `G(ζ) = ζ·ξ_η − K(ζ·ξ)` on the affine hull.
struct ReducedChart<'a> {
    fam: &'a PhiExponentialFamily,
    eta: &'a [f64],
    target: Vec<f64>,
    stats: Vec<RandomVariable>,
}

struct Evaluation {
    value: f64,
    gradient: Vec<f64>,
    hessian: Vec<Vec<f64>>,
}

impl<'a> ReducedChart<'a> {
    fn new(fam: &'a PhiExponentialFamily, eta: &'a [f64]) -> Result<Self> {
        let polytope = fam.polytope();
        Ok(Self { fam, eta, target: polytope.reduce_coordinates(eta)?, stats: polytope.reduced_statistics() })
    }

    fn dim(&self) -> usize {
        self.target.len()
    }

    fn evaluate(&self, zeta: &[f64]) -> Result<Evaluation> {
        let w = RandomVariable::combine(zeta, &self.stats);
        let w = if self.stats.is_empty() { RandomVariable::zeros(self.fam.space().len()) } else { w };
        let moments = self.fam.escort_moments(&w, &self.stats)?;
        Ok(Evaluation {
            value: dot(zeta, &self.target) - moments.normalizer,
            gradient: self.target.iter().zip(&moments.means).map(|(t, m)| t - m).collect(),
            hessian: moments.hessian,
        })
    }

    fn finish(
        &self,
        zeta: &[f64],
        status: ConjugateStatus,
        diagnostics: Diagnostics,
        fallback: f64,
    ) -> Result<ConjugateResult> {
        let theta = self.fam.polytope().lift_direction(zeta);
        let value = match status {
            ConjugateStatus::AttainedInterior => objective(self.fam, self.eta, &theta)?,
            _ => fallback,
        };
        Ok(ConjugateResult {
            status,
            value,
            attained: status == ConjugateStatus::AttainedInterior,
            maximizer: Some(theta),
            certificate: None,
            witness: None,
            diagnostics,
        })
    }

    fn newton_direction(eval: &Evaluation) -> Vec<f64> {
        let d = eval.gradient.len();
        let h = DMatrix::from_fn(d, d, |i, j| eval.hessian[i][j]);
        let g = DVector::from_column_slice(&eval.gradient);
        match h.clone().cholesky() {
            Some(ch) => ch.solve(&g).as_slice().to_vec(),
            None => pinv_solve(h, &g).as_slice().to_vec(),
        }
    }

    /// Damped Newton ascent from ζ = 0 with Armijo backtracking.
    fn newton(&self, opts: &ConjugateOptions) -> Result<ConjugateResult> {
        let rank_deficient = self.dim() < self.fam.dim();
        let mut zeta = vec![0.0; self.dim()];
        let mut eval = self.evaluate(&zeta)?;
        let mut iterations = 0;
        while norm(&eval.gradient) > opts.newton_tol {
            if iterations >= opts.max_iter {
                return Err(Error::NumericalFailure {
                    context: "interior Newton ascent".into(),
                    residual: norm(&eval.gradient),
                    best: Some(self.fam.polytope().lift_direction(&zeta)),
                });
            }
            iterations += 1;
            let step = Self::newton_direction(&eval);
            let slope = dot(&step, &eval.gradient);
            let slack = 1e-13 * (1.0 + eval.value.abs());
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<f64> = zeta.iter().zip(&step).map(|(z, s)| z + t * s).collect();
                if let Ok(next) = self.evaluate(&trial) {
                    let sufficient = next.value >= eval.value + 1e-4 * t * slope - slack;
                    if sufficient || norm(&next.gradient) < norm(&eval.gradient) * 0.5 {
                        accepted = Some((trial, next));
                        break;
                    }
                }
                t *= 0.5;
            }
            let Some((next_zeta, next_eval)) = accepted else {
                return Err(Error::NumericalFailure {
                    context: "interior Newton line search".into(),
                    residual: norm(&eval.gradient),
                    best: Some(self.fam.polytope().lift_direction(&zeta)),
                });
            };
            zeta = next_zeta;
            eval = next_eval;
        }
        // polish: full Newton steps while they keep shrinking the gradient
        for _ in 0..2 {
            if eval.gradient.iter().all(|g| *g == 0.0) {
                break;
            }
            let step = Self::newton_direction(&eval);
            let trial: Vec<f64> = zeta.iter().zip(&step).map(|(z, s)| z + s).collect();
            match self.evaluate(&trial) {
                Ok(next) if norm(&next.gradient) < norm(&eval.gradient) => {
                    zeta = trial;
                    eval = next;
                }
                _ => break,
            }
        }
        let diagnostics =
            Diagnostics { iterations, gradient_norm: norm(&eval.gradient), rank_deficient, lower_bounds: vec![] };
        self.finish(&zeta, ConjugateStatus::AttainedInterior, diagnostics, eval.value)
    }

    /// Accelerated gradient ascent with backtracking and monotone restarts.
    /// The supremum is approached only as ζ → ∞, so the result is a lower
    /// bound together with the running-maximum sequence.
    fn boundary_ascent(&self, opts: &ConjugateOptions) -> Result<ConjugateResult> {
        let mut x = vec![0.0; self.dim()];
        let mut fx = self.evaluate(&x)?.value;
        let mut y = x.clone();
        let mut momentum = 1.0f64;
        let mut lipschitz = 1.0f64;
        let mut best = (fx, x.clone());
        let mut lower_bounds = vec![fx];
        let mut gradient_norm = f64::NAN;
        let mut iterations = 0;
        for _ in 0..opts.boundary_max_iter {
            iterations += 1;
            let ey = self.evaluate(&y)?;
            gradient_norm = norm(&ey.gradient);
            if gradient_norm == 0.0 {
                break;
            }
            let sq = gradient_norm * gradient_norm;
            let mut next = None;
            for _ in 0..60 {
                let trial: Vec<f64> = y.iter().zip(&ey.gradient).map(|(v, g)| v + g / lipschitz).collect();
                let ft = self.evaluate(&trial)?.value;
                if ft >= ey.value + 0.5 * sq / lipschitz {
                    next = Some((trial, ft));
                    break;
                }
                lipschitz *= 2.0;
            }
            let Some((x_new, f_new)) = next else { break };
            if f_new < fx {
                // restart momentum
                y = x_new.clone();
                momentum = 1.0;
            } else {
                let m_new = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
                let beta = (momentum - 1.0) / m_new;
                y = x_new.iter().zip(&x).map(|(a, b)| a + beta * (a - b)).collect();
                momentum = m_new;
            }
            x = x_new;
            fx = f_new;
            if fx > best.0 {
                best = (fx, x.clone());
            }
            lower_bounds.push(best.0);
        }
        let diagnostics =
            Diagnostics { iterations, gradient_norm, rank_deficient: self.dim() < self.fam.dim(), lower_bounds };
        self.finish(&best.1, ConjugateStatus::FiniteBoundary, diagnostics, best.0)
    }
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Outcome of [`legendre_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegendreReport {
    pub theta: Vec<f64>,
    pub eta: Vec<f64>,
    pub alpha: f64,
    pub alpha_star: ConjugateResult,
    /// `max |θ̂ − θ|`, only meaningful when the statistics are affinely independent.
    pub theta_error: Option<f64>,
    /// `|α*(η) + α(θ) − θ·η|`.
    pub identity_residual: f64,
    pub passed: bool,
}

pub const LEGENDRE_THETA_TOL: f64 = 1e-7;
pub const LEGENDRE_IDENTITY_TOL: f64 = 1e-9;

/// Maps θ to `η = ∇α(θ)`, solves for α*(η) and compares against θ.
pub fn legendre_check(fam: &PhiExponentialFamily, theta: &[f64], opts: &ConjugateOptions) -> Result<LegendreReport> {
    let eta = fam.grad_alpha(theta)?;
    let alpha = fam.alpha(theta)?;
    let star = alpha_star(fam, &eta, opts)?;
    let full_rank = fam.polytope().dimension() == fam.dim();
    let theta_error = match (&star.maximizer, full_rank) {
        (Some(t), true) => Some(t.iter().zip(theta).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))),
        _ => None,
    };
    let identity_residual = (star.value + alpha - dot(theta, &eta)).abs();
    let passed = star.status == ConjugateStatus::AttainedInterior
        && theta_error.is_none_or(|e| e <= LEGENDRE_THETA_TOL)
        && identity_residual <= LEGENDRE_IDENTITY_TOL;
    Ok(LegendreReport { theta: theta.to_vec(), eta, alpha, alpha_star: star, theta_error, identity_residual, passed })
}

/// Outcome of [`h_v`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonparametricConjugate {
    /// `η_j = E_p[(u* + 1) H_j]`.
    pub eta: Vec<f64>,
    /// Whether `(u* + 1) p` is a density, i.e. `u* + 1 ≥ 0` pointwise up to
    /// the density tolerance.
    pub density_predicate: bool,
    pub result: ConjugateResult,
}

/// Allowed `|E_p[u*]|` relative to `max |u*|`.
const CENTERING_TOL: f64 = 1e-10;

fn check_centered(fam: &PhiExponentialFamily, u_star: &RandomVariable) -> Result<()> {
    if u_star.len() != fam.space().len() {
        return Err(Error::invalid("u_star", format!("expected {} values, found {}", fam.space().len(), u_star.len())));
    }
    if let Some(i) = u_star.values().iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("u_star[{i}]"), "non-finite value"));
    }
    let mean = fam.space().expectation(fam.base(), u_star)?;
    if mean.abs() > CENTERING_TOL * u_star.max_abs().max(1.0) {
        return Err(Error::invalid("u_star", format!("u* must be p-centered, E_p[u*] = {mean:e}")));
    }
    Ok(())
}

/// `H_V(u*) = sup_{u∈V} E_p[u* u] − K(u)`, computed as `α*(η)` with
/// `η_j = E_p[(u* + 1) H_j]`.
pub fn h_v(
    fam: &PhiExponentialFamily,
    u_star: &RandomVariable,
    opts: &ConjugateOptions,
) -> Result<NonparametricConjugate> {
    check_centered(fam, u_star)?;
    let shifted = u_star.shifted(1.0);
    let eta =
        fam.statistics().iter().map(|h| fam.space().inner(fam.base(), &shifted, h)).collect::<Result<Vec<f64>>>()?;
    let slack = DENSITY_TOL * u_star.max_abs().max(1.0);
    let density_predicate = shifted.values().iter().all(|v| *v >= -slack);
    let result = alpha_star(fam, &eta, opts)?;
    Ok(NonparametricConjugate { eta, density_predicate, result })
}

/// Outcome of [`h_full`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullConjugate {
    pub conjugate: NonparametricConjugate,
    /// The maximizer û ∈ L₀(p), when attained.
    pub maximizer_u: Option<RandomVariable>,
    /// `max_x |p_{φ,û}(x) − (u*(x) + 1) p(x)|`, when attained.
    pub stationarity_residual: Option<f64>,
}

/// `H(u*) = sup_{u∈L₀(p)} E_p[u* u] − K(u)`: `H_V` with the point
/// indicators as statistics. At an attained maximum the escort density
/// equals `(u* + 1) p`.
pub fn h_full(fam: &PhiExponentialFamily, u_star: &RandomVariable, opts: &ConjugateOptions) -> Result<FullConjugate> {
    let n = fam.space().len();
    let indicators = (0..n).map(|i| RandomVariable::indicator(n, i)).collect();
    let full = fam.with_statistics(indicators)?;
    let conjugate = h_v(&full, u_star, opts)?;
    let (maximizer_u, stationarity_residual) = match (&conjugate.result.maximizer, conjugate.result.attained) {
        (Some(theta), true) => {
            let u = RandomVariable::combine(theta, full.centered_basis());
            let escort = full.escort(&u)?;
            let residual = escort
                .values()
                .iter()
                .zip(u_star.values())
                .zip(full.base().values())
                .fold(0.0f64, |m, ((e, s), p)| m.max((e - (s + 1.0) * p).abs()));
            (Some(u), Some(residual))
        }
        _ => (None, None),
    };
    Ok(FullConjugate { conjugate, maximizer_u, stationarity_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformations::Deformation;
    use crate::state_space::{Density, SampleSpace};

    fn two_point(d: Deformation) -> PhiExponentialFamily {
        let space = SampleSpace::with_weights(vec![0.5, 0.5]).unwrap();
        let p = Density::new(&space, vec![1.0, 1.0]).unwrap();
        PhiExponentialFamily::new(d, space, p, vec![RandomVariable::new(vec![0.0, 1.0])]).unwrap()
    }

    #[test]
    fn classical_center_point() {
        let fam = two_point(Deformation::classical());
        let r = alpha_star(&fam, &[0.5], &ConjugateOptions::default()).unwrap();
        assert_eq!(r.status, ConjugateStatus::AttainedInterior);
        assert!(r.value.abs() < 1e-14);
        assert!(r.maximizer.unwrap()[0].abs() < 1e-12);
    }

    #[test]
    fn classical_legendre_closed_form() {
        let fam = two_point(Deformation::classical());
        let e2 = 2f64.exp();
        let eta = e2 / (1.0 + e2);
        let r = alpha_star(&fam, &[eta], &ConjugateOptions::default()).unwrap();
        assert!((r.maximizer.unwrap()[0] - 2.0).abs() < 1e-9);
        let expected = 2.0 * eta - ((1.0 + e2) / 2.0).ln();
        assert!((r.value - expected).abs() < 1e-12);
    }

    #[test]
    fn outside_point_diverges() {
        let fam = two_point(Deformation::classical());
        let r = alpha_star(&fam, &[1.2], &ConjugateOptions::default()).unwrap();
        assert_eq!(r.status, ConjugateStatus::InfiniteOutside);
        assert!(r.value.is_infinite());
        let cert = r.certificate.unwrap();
        assert!(cert.a[0] > 0.0);
        assert!(cert.verify(fam.polytope(), &[1.2], 1e-9));
        let w = r.witness.unwrap();
        assert!(w.windows(2).all(|p| p[1] > p[0]));
        assert!(*w.last().unwrap() > 1e3);
    }

    #[test]
    fn boundary_point_is_finite_not_attained() {
        let fam = two_point(Deformation::classical());
        let r = alpha_star(&fam, &[1.0], &ConjugateOptions::default()).unwrap();
        assert_eq!(r.status, ConjugateStatus::FiniteBoundary);
        assert!(!r.attained);
        // classical α*(1) = sup θ − ln((1+e^θ)/2) = ln 2
        assert!(r.value <= 2f64.ln() + 1e-12);
        assert!(r.value > 2f64.ln() - 0.05);
        let lb = &r.diagnostics.lower_bounds;
        assert!(lb.windows(2).all(|p| p[1] >= p[0]));
    }

    #[test]
    fn legendre_check_round_trip() {
        for d in [Deformation::classical(), Deformation::kaniadakis(0.5).unwrap()] {
            let fam = two_point(d);
            let report = legendre_check(&fam, &[1.3], &ConjugateOptions::default()).unwrap();
            assert!(report.passed, "{report:?}");
        }
    }

    #[test]
    fn h_v_examples() {
        let fam = two_point(Deformation::kaniadakis(0.5).unwrap());
        let zero = RandomVariable::zeros(2);
        let r = h_v(&fam, &zero, &ConjugateOptions::default()).unwrap();
        assert!(r.density_predicate);
        assert!(r.result.value.abs() < 1e-12);
        assert!(matches!(
            h_v(&fam, &RandomVariable::new(vec![1.0, 0.0]), &ConjugateOptions::default()),
            Err(Error::InvalidInput { .. })
        ));
    }

    #[test]
    fn h_full_stationarity() {
        let space = SampleSpace::with_weights(vec![1.0, 2.0, 1.0]).unwrap();
        let p = Density::from_weights(&space, vec![1.0, 1.0, 2.0]).unwrap();
        let fam = PhiExponentialFamily::new(
            Deformation::kaniadakis(0.5).unwrap(),
            space.clone(),
            p.clone(),
            vec![RandomVariable::new(vec![0.0, 1.0, 2.0])],
        )
        .unwrap();
        let q = Density::from_weights(&space, vec![2.0, 1.0, 1.0]).unwrap();
        let u_star = q.ratio(&p).shifted(-1.0);
        let r = h_full(&fam, &u_star, &ConjugateOptions::default()).unwrap();
        assert!(r.conjugate.result.attained);
        assert!(r.stationarity_residual.unwrap() < 1e-7);
        assert!(r.conjugate.result.diagnostics.rank_deficient);

        let bad = RandomVariable::new(vec![-1.5, 0.5, 0.25]);
        let bad = bad.shifted(-space.expectation(&p, &bad).unwrap());
        let r = h_full(&fam, &bad, &ConjugateOptions::default()).unwrap();
        assert!(!r.conjugate.density_predicate);
        assert_eq!(r.conjugate.result.status, ConjugateStatus::InfiniteOutside);
    }
}
