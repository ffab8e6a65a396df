//! The φ-exponential family of statistics `H₁..H_m` at a base density `p`.
//!
//! Parametric form: `p_θ = exp_φ(θ·H − α(θ)) p`.
//! Nonparametric chart: `p_u = exp_φ(u − K(u)) p` for `u` in
//! `V = span{H_j − E_p[H_j]}`, with `K(u) = α(θ) − θ·E_p[H]` when
//! `u = Σ θ_j (H_j − E_p[H_j])`.
//!
//! The escort density is `p_{φ,u} ∝ φ(p_u/p) p`, equivalently
//! `∝ exp_φ'(u − K(u)) p`. Its expectations give the first derivative
//! `DK(u)v = E_{φ,u}[v]`, and
//!
//! ```text
//! D²K(u)vw = E_p[exp_φ''(u−K)(v − DK v)(w − DK w)] / E_p[exp_φ'(u−K)]
//! ```
//!
//! `K` is defined through the normalization for every random variable `u`,
//! not only for `u ∈ V`; the derivative formulas hold in any direction.

use serde::Serialize;

use crate::deformations::Deformation;
use crate::error::{Error, Result};
use crate::numeric::{self, RootSettings};
use crate::polytope::MarginalPolytope;
use crate::state_space::{Density, RandomVariable, SampleSpace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyTolerances {
    /// Residual tolerance on `|E_p[exp_φ(w − α)] − 1|`.
    pub alpha_tol: f64,
    pub newton_max_iter: usize,
}

impl Default for FamilyTolerances {
    fn default() -> Self {
        Self { alpha_tol: 1e-12, newton_max_iter: 100 }
    }
}

/// Natural parameters θ ∈ ℝ^m.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ThetaPoint(pub Vec<f64>);

/// A point of V: coefficients in the centered basis and the materialized
/// random variable `u = Σ c_j v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct UCoordinate {
    coefficients: Vec<f64>,
    variable: RandomVariable,
}

impl UCoordinate {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn variable(&self) -> &RandomVariable {
        &self.variable
    }
}

/// Output of [`PhiExponentialFamily::escort_moments`].
#[derive(Debug, Clone, PartialEq)]
pub struct EscortMoments {
    /// `K(u)`, the normalizer of the base point.
    pub normalizer: f64,
    /// `E_{φ,u}[s_j]`.
    pub means: Vec<f64>,
    /// `D²K(u) s_j s_k`.
    pub hessian: Vec<Vec<f64>>,
}

/// Grid used to confirm self-duality before using `K(u) = E_p[ln_φ(p/q)]`.
const SELF_DUAL_GRID: [f64; 8] = [-5.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0];
const SELF_DUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PhiExponentialFamily {
    deformation: Deformation,
    space: SampleSpace,
    base: Density,
    statistics: Vec<RandomVariable>,
    centered: Vec<RandomVariable>,
    means: Vec<f64>,
    tolerances: FamilyTolerances,
    polytope: MarginalPolytope,
}

impl PhiExponentialFamily {
    pub fn new(
        deformation: Deformation,
        space: SampleSpace,
        base: Density,
        statistics: Vec<RandomVariable>,
    ) -> Result<Self> {
        if base.len() != space.len() {
            return Err(Error::invalid(
                "base_density",
                format!("expected {} values, found {}", space.len(), base.len()),
            ));
        }
        if let Some(i) = base.values().iter().position(|v| !(*v > 0.0)) {
            return Err(Error::invalid(format!("base_density[{i}]"), "base density must be strictly positive"));
        }
        let polytope = MarginalPolytope::build(&statistics, &space)?;
        let mut means = Vec::with_capacity(statistics.len());
        let mut centered = Vec::with_capacity(statistics.len());
        for h in &statistics {
            let mean = space.expectation(&base, h)?;
            means.push(mean);
            centered.push(h.shifted(-mean));
        }
        Ok(Self {
            deformation,
            space,
            base,
            statistics,
            centered,
            means,
            tolerances: FamilyTolerances::default(),
            polytope,
        })
    }

    pub fn with_tolerances(mut self, tolerances: FamilyTolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    /// Same deformation, space and base density with new statistics.
    pub fn with_statistics(&self, statistics: Vec<RandomVariable>) -> Result<Self> {
        Ok(Self::new(self.deformation.clone(), self.space.clone(), self.base.clone(), statistics)?
            .with_tolerances(self.tolerances))
    }

    pub fn deformation(&self) -> &Deformation {
        &self.deformation
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn base(&self) -> &Density {
        &self.base
    }

    pub fn statistics(&self) -> &[RandomVariable] {
        &self.statistics
    }

    /// `v_j = H_j − E_p[H_j]`.
    pub fn centered_basis(&self) -> &[RandomVariable] {
        &self.centered
    }

    /// `E_p[H_j]`.
    pub fn statistic_means(&self) -> &[f64] {
        &self.means
    }

    pub fn tolerances(&self) -> FamilyTolerances {
        self.tolerances
    }

    pub fn polytope(&self) -> &MarginalPolytope {
        &self.polytope
    }

    /// Number of statistics m.
    pub fn dim(&self) -> usize {
        self.statistics.len()
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim() {
            return Err(Error::ShapeMismatch { expected: self.dim(), found: theta.len() });
        }
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::invalid(format!("theta[{i}]"), "non-finite parameter"));
        }
        Ok(())
    }

    fn check_rv(&self, name: &str, u: &RandomVariable) -> Result<()> {
        if u.len() != self.space.len() {
            return Err(Error::invalid(name, format!("expected {} values, found {}", self.space.len(), u.len())));
        }
        if let Some(i) = u.values().iter().position(|t| !t.is_finite()) {
            return Err(Error::invalid(format!("{name}[{i}]"), "non-finite value"));
        }
        Ok(())
    }

    /// `θ·H` as a random variable.
    pub fn linear_statistic(&self, theta: &[f64]) -> RandomVariable {
        RandomVariable::combine(theta, &self.statistics)
    }

    /// The unique `c` with `E_p[exp_φ(w − c)] = 1`.
    ///
    /// The root lies in `[min w, max w]` because exp_φ is increasing with
    /// `exp_φ(0) = 1`. Safeguarded Newton from the midpoint, tolerance on the
    /// residual.
    pub fn normalizer(&self, w: &RandomVariable) -> Result<f64> {
        self.check_rv("u", w)?;
        let weights: Vec<f64> = self.base.values().iter().zip(self.space.mu()).map(|(p, m)| p * m).collect();
        let lo = w.min();
        let hi = w.max();
        // w − c loses about ε·max|w| absolute precision, which bounds the
        // attainable residual for large statistics
        let floor = 64.0 * f64::EPSILON * w.max_abs();
        let settings = RootSettings {
            residual_tol: self.tolerances.alpha_tol.max(floor),
            max_iter: self.tolerances.newton_max_iter,
            min_width: 1e-14,
        };
        numeric::solve_increasing(
            |c| {
                let mut f = 0.0;
                let mut df = 0.0;
                for (wx, px) in w.values().iter().zip(&weights) {
                    let (e, d1) = self.deformation.exp_phi_and_d1(wx - c)?;
                    f += e * px;
                    df += d1 * px;
                }
                Ok((1.0 - f, df))
            },
            lo,
            hi,
            0.5 * (lo + hi),
            settings,
            "normalization",
        )
    }

    /// The normalizer α(θ).
    pub fn alpha(&self, theta: &[f64]) -> Result<f64> {
        self.check_theta(theta)?;
        self.normalizer(&self.linear_statistic(theta))
    }

    /// `p_θ = exp_φ(θ·H − α(θ)) p`.
    pub fn density(&self, theta: &[f64]) -> Result<Density> {
        self.check_theta(theta)?;
        self.density_of(&self.linear_statistic(theta))
    }

    /// `exp_φ(w − c(w)) p` for any random variable `w`; `p_u` when `w = u`.
    pub fn density_of(&self, w: &RandomVariable) -> Result<Density> {
        let c = self.normalizer(w)?;
        let values = w
            .values()
            .iter()
            .zip(self.base.values())
            .map(|(wx, px)| Ok(self.deformation.exp_phi(wx - c)? * px))
            .collect::<Result<Vec<f64>>>()?;
        Density::from_weights(&self.space, values)
    }

    /// Materializes `u = Σ c_j v_j`.
    pub fn u_from_coefficients(&self, coefficients: &[f64]) -> Result<UCoordinate> {
        self.check_theta(coefficients)?;
        Ok(UCoordinate {
            coefficients: coefficients.to_vec(),
            variable: RandomVariable::combine(coefficients, &self.centered),
        })
    }

    /// `u = Σ θ_j (H_j − E_p[H_j])` and `K(u) = α(θ) − θ·E_p[H]`.
    pub fn theta_to_u(&self, theta: &[f64]) -> Result<(UCoordinate, f64)> {
        let u = self.u_from_coefficients(theta)?;
        let k = self.alpha(theta)? - dot(theta, &self.means);
        Ok((u, k))
    }

    pub fn u_to_theta(&self, u: &UCoordinate) -> ThetaPoint {
        ThetaPoint(u.coefficients.clone())
    }

    /// `K(u)`, defined by `E_p[exp_φ(u − K(u))] = 1`.
    pub fn k(&self, u: &RandomVariable) -> Result<f64> {
        self.normalizer(u)
    }

    /// Unnormalized escort weights `exp_φ'(u − K(u)) p` with their μ-mass.
    fn escort_weights(&self, u: &RandomVariable) -> Result<(Vec<f64>, f64, f64)> {
        let c = self.normalizer(u)?;
        let mut weights = Vec::with_capacity(u.len());
        let mut mass = 0.0;
        for ((ux, px), mx) in u.values().iter().zip(self.base.values()).zip(self.space.mu()) {
            let w = self.deformation.exp_phi_d1(ux - c)? * px;
            mass += w * mx;
            weights.push(w);
        }
        Ok((weights, mass, c))
    }

    /// Escort density `p_{φ,u} = φ(p_u/p) p / E_p[φ(p_u/p)]`.
    pub fn escort(&self, u: &RandomVariable) -> Result<Density> {
        let (weights, mass, _) = self.escort_weights(u)?;
        Density::from_weights(&self.space, weights.into_iter().map(|w| w / mass).collect())
    }

    /// `φ(p_u/p) p_u / E_{p_u}[φ(p_u/p)]`, the variant that weights by `p_u`
    /// instead of `p`. It does not differentiate K except in the classical
    /// case; kept for auditing the derivative identity.
    pub fn literal_escort(&self, u: &RandomVariable) -> Result<Density> {
        let c = self.normalizer(u)?;
        let weights = u
            .values()
            .iter()
            .zip(self.base.values())
            .map(|(ux, px)| {
                let (e, d1) = self.deformation.exp_phi_and_d1(ux - c)?;
                Ok(d1 * e * px)
            })
            .collect::<Result<Vec<f64>>>()?;
        Density::from_weights(&self.space, weights)
    }

    /// `DK(u)v = E_{φ,u}[v]`.
    pub fn dk(&self, u: &RandomVariable, v: &RandomVariable) -> Result<f64> {
        self.check_rv("v", v)?;
        let esc = self.escort(u)?;
        self.space.expectation(&esc, v)
    }

    /// `D²K(u)vw`; symmetric in `(v, w)` by construction.
    pub fn d2k(&self, u: &RandomVariable, v: &RandomVariable, w: &RandomVariable) -> Result<f64> {
        self.check_rv("v", v)?;
        self.check_rv("w", w)?;
        let moments = self.escort_moments(u, &[v.clone(), w.clone()])?;
        Ok(moments.hessian[0][1])
    }

    /// Escort means `E_{φ,u}[s_j]` and the matrix `D²K(u) s_j s_k` for a
    /// list of directions, sharing one normalization solve.
    pub fn escort_moments(&self, u: &RandomVariable, directions: &[RandomVariable]) -> Result<EscortMoments> {
        let (weights, mass, c) = self.escort_weights(u)?;
        let mu = self.space.mu();
        let means: Vec<f64> = directions
            .iter()
            .map(|s| s.values().iter().zip(&weights).zip(mu).map(|((s, w), m)| s * w * m).sum::<f64>() / mass)
            .collect();
        let curvature = u
            .values()
            .iter()
            .zip(self.base.values())
            .zip(mu)
            .map(|((ux, px), mx)| Ok(self.deformation.exp_phi_d2(ux - c)? * px * mx))
            .collect::<Result<Vec<f64>>>()?;
        let k = directions.len();
        let mut hess = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in a..k {
                let da = &directions[a];
                let db = &directions[b];
                let num: f64 = (0..u.len())
                    .map(|x| curvature[x] * ((da.values()[x] - means[a]) * (db.values()[x] - means[b])))
                    .sum();
                hess[a][b] = num / mass;
                hess[b][a] = hess[a][b];
            }
        }
        Ok(EscortMoments { normalizer: c, means, hessian: hess })
    }

    /// `E_p[ln_φ(p/q)]`, the divergence of p from q. Only valid for
    /// self-dual deformations.
    pub fn divergence(&self, q: &Density) -> Result<f64> {
        let report = self.deformation.is_self_dual(&SELF_DUAL_GRID, SELF_DUAL_TOL)?;
        if !report.self_dual {
            return Err(Error::UnsupportedIdentity(format!(
                "K(u) = E_p[ln_phi(p/q)] requires a self-dual deformation (max deviation {:e})",
                report.max_deviation
            )));
        }
        self.check_positive_density(q)?;
        let ratio = self.base.ratio(q);
        let logs = ratio.values().iter().map(|r| self.deformation.ln_phi(*r)).collect::<Result<Vec<f64>>>()?;
        self.space.expectation(&self.base, &RandomVariable::new(logs))
    }

    /// `u = ln_φ(q/p) − E_p[ln_φ(q/p)]`.
    pub fn recover_u(&self, q: &Density) -> Result<RandomVariable> {
        self.check_positive_density(q)?;
        let ratio = q.ratio(&self.base);
        let logs = ratio.values().iter().map(|r| self.deformation.ln_phi(*r)).collect::<Result<Vec<f64>>>()?;
        self.space.center(&self.base, &RandomVariable::new(logs))
    }

    fn check_positive_density(&self, q: &Density) -> Result<()> {
        if q.len() != self.space.len() {
            return Err(Error::ShapeMismatch { expected: self.space.len(), found: q.len() });
        }
        if let Some(i) = q.values().iter().position(|v| !(*v > 0.0)) {
            return Err(Error::Domain { what: "density must be strictly positive", value: q.values()[i] });
        }
        Ok(())
    }

    /// `∇α(θ) = E_{φ,θ}[H]`.
    pub fn grad_alpha(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_theta(theta)?;
        let esc = self.escort(&self.linear_statistic(theta))?;
        self.statistics.iter().map(|h| self.space.expectation(&esc, h)).collect()
    }

    /// `∇²α(θ)_{jk} = D²K(u(θ)) v_j v_k`.
    pub fn hessian_alpha(&self, theta: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_theta(theta)?;
        Ok(self.escort_moments(&self.linear_statistic(theta), &self.centered)?.hessian)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(d: Deformation) -> PhiExponentialFamily {
        let space = SampleSpace::with_weights(vec![0.5, 0.5]).unwrap();
        let p = Density::new(&space, vec![1.0, 1.0]).unwrap();
        PhiExponentialFamily::new(d, space, p, vec![RandomVariable::new(vec![0.0, 1.0])]).unwrap()
    }

    fn three_point(d: Deformation) -> PhiExponentialFamily {
        let space = SampleSpace::with_weights(vec![0.5, 1.0, 1.5]).unwrap();
        let p = Density::from_weights(&space, vec![1.0, 2.0, 0.5]).unwrap();
        let h = vec![RandomVariable::new(vec![0.3, -1.0, 0.8]), RandomVariable::new(vec![1.0, 0.2, -0.4])];
        PhiExponentialFamily::new(d, space, p, h).unwrap()
    }

    fn residual(fam: &PhiExponentialFamily, theta: &[f64]) -> f64 {
        let a = fam.alpha(theta).unwrap();
        let w = fam.linear_statistic(theta);
        let s: f64 = w
            .values()
            .iter()
            .zip(fam.base().values())
            .zip(fam.space().mu())
            .map(|((w, p), m)| fam.deformation().exp_phi(w - a).unwrap() * p * m)
            .sum();
        (s - 1.0).abs()
    }

    #[test]
    fn alpha_examples() {
        let c = two_point(Deformation::classical());
        assert_eq!(c.alpha(&[0.0]).unwrap(), 0.0);
        let expected = ((1.0 + 2f64.exp()) / 2.0).ln();
        assert!((c.alpha(&[2.0]).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.433_780_830_5).abs() < 1e-10);
        let k = two_point(Deformation::kaniadakis(0.5).unwrap());
        let a = k.alpha(&[2.0]).unwrap();
        assert!((0.0..=2.0).contains(&a));
        assert!(residual(&k, &[2.0]) <= 1e-12);
    }

    #[test]
    fn alpha_rejects_bad_theta() {
        let c = two_point(Deformation::classical());
        assert!(matches!(c.alpha(&[1.0, 2.0]), Err(Error::ShapeMismatch { .. })));
        assert!(c.alpha(&[f64::NAN]).is_err());
    }

    #[test]
    fn alpha_handles_extreme_parameters() {
        let c = two_point(Deformation::classical());
        let a = c.alpha(&[2000.0]).unwrap();
        // α = 2000 + ln(1/2) + ln(1 + e^{-2000})
        assert!((a - (2000.0 - 2f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn density_examples() {
        let c = two_point(Deformation::classical());
        assert_eq!(c.density(&[0.0]).unwrap(), c.base().clone());
        let d = c.density(&[2.0]).unwrap();
        let e2 = 2f64.exp();
        assert!((d.values()[0] - 2.0 / (1.0 + e2)).abs() < 1e-12);
        assert!((d.values()[1] - 2.0 * e2 / (1.0 + e2)).abs() < 1e-12);
        let k = two_point(Deformation::kaniadakis(0.5).unwrap());
        assert!(k.space().is_density(k.density(&[2.0]).unwrap().values()));
    }

    #[test]
    fn chart_examples() {
        let c = two_point(Deformation::classical());
        let (u, k) = c.theta_to_u(&[0.0]).unwrap();
        assert_eq!(k, 0.0);
        assert!(u.variable().max_abs() == 0.0);
        let (u, k) = c.theta_to_u(&[2.0]).unwrap();
        let expected = ((1.0 + 2f64.exp()) / 2.0).ln() - 1.0;
        assert!((k - expected).abs() < 1e-12);
        assert!((c.k(u.variable()).unwrap() - expected).abs() < 1e-12);
        assert_eq!(c.u_to_theta(&u).0, vec![2.0]);
    }

    #[test]
    fn escort_examples() {
        let k = three_point(Deformation::kaniadakis(0.5).unwrap());
        let zero = RandomVariable::zeros(3);
        let e0 = k.escort(&zero).unwrap();
        for (a, b) in e0.values().iter().zip(k.base().values()) {
            assert!((a - b).abs() < 1e-14);
        }
        let c = three_point(Deformation::classical());
        let (u, _) = c.theta_to_u(&[0.7, -1.1]).unwrap();
        let esc = c.escort(u.variable()).unwrap();
        let pu = c.density(&[0.7, -1.1]).unwrap();
        for (a, b) in esc.values().iter().zip(pu.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let lit = c.literal_escort(u.variable()).unwrap();
        assert!(lit.values().iter().zip(pu.values()).all(|(a, b)| a > &0.0 && b > &0.0));
    }

    #[test]
    fn dk_matches_finite_difference() {
        for d in
            [Deformation::classical(), Deformation::kaniadakis(0.5).unwrap(), Deformation::kaniadakis(0.9).unwrap()]
        {
            let fam = three_point(d);
            let u = fam.u_from_coefficients(&[0.9, -0.4]).unwrap();
            let v = RandomVariable::new(vec![0.2, -0.7, 1.3]);
            let h = 1e-5;
            let fd =
                (fam.k(&u.variable().axpy(h, &v)).unwrap() - fam.k(&u.variable().axpy(-h, &v)).unwrap()) / (2.0 * h);
            let dk = fam.dk(u.variable(), &v).unwrap();
            assert!((dk - fd).abs() / (1.0 + dk.abs()) < 1e-6, "{dk} vs {fd}");
        }
    }

    #[test]
    fn dk_classical_closed_form() {
        let c = two_point(Deformation::classical());
        let (u, _) = c.theta_to_u(&[2.0]).unwrap();
        let v = c.centered_basis()[0].clone();
        let e2 = 2f64.exp();
        let expected = e2 / (1.0 + e2) - 0.5;
        assert!((c.dk(u.variable(), &v).unwrap() - expected).abs() < 1e-12);
        assert!(c.dk(&RandomVariable::zeros(2), &v).unwrap().abs() < 1e-15);
    }

    #[test]
    fn d2k_at_origin_is_covariance() {
        for d in [Deformation::classical(), Deformation::kaniadakis(0.5).unwrap()] {
            let fam = three_point(d);
            let v = RandomVariable::new(vec![0.2, -0.7, 1.3]);
            let w = RandomVariable::new(vec![1.0, 0.5, -0.1]);
            let d2 = fam.d2k(&RandomVariable::zeros(3), &v, &w).unwrap();
            let cov = fam.space().covariance(fam.base(), &v, &w).unwrap();
            assert!((d2 - cov).abs() < 1e-12);
        }
    }

    #[test]
    fn d2k_symmetric_and_positive() {
        let fam = three_point(Deformation::kaniadakis(0.7).unwrap());
        let u = RandomVariable::new(vec![1.5, -2.0, 0.4]);
        let v = RandomVariable::new(vec![0.2, -0.7, 1.3]);
        let w = RandomVariable::new(vec![1.0, 0.5, -0.1]);
        assert_eq!(fam.d2k(&u, &v, &w).unwrap(), fam.d2k(&u, &w, &v).unwrap());
        assert!(fam.d2k(&u, &v, &v).unwrap() > 0.0);
    }

    #[test]
    fn divergence_examples() {
        let k = three_point(Deformation::kaniadakis(0.5).unwrap());
        assert!(k.divergence(k.base()).unwrap().abs() < 1e-15);
        let theta = [0.8, -0.5];
        let q = k.density(&theta).unwrap();
        let (_, kk) = k.theta_to_u(&theta).unwrap();
        assert!((k.divergence(&q).unwrap() - kk).abs() < 1e-9);

        let c = three_point(Deformation::classical());
        let q = c.density(&theta).unwrap();
        let kl: f64 = (0..3)
            .map(|x| c.base().values()[x] * c.space().mu()[x] * (c.base().values()[x] / q.values()[x]).ln())
            .sum();
        assert!((c.divergence(&q).unwrap() - kl).abs() < 1e-14);

        let asym = three_point(Deformation::from_psi(|u| (0.1 * u).exp(), None));
        assert!(matches!(asym.divergence(asym.base()), Err(Error::UnsupportedIdentity(_))));
        let zero = Density::from_weights(k.space(), vec![0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(k.divergence(&zero), Err(Error::Domain { .. })));
    }

    #[test]
    fn recover_u_round_trip() {
        let k = three_point(Deformation::kaniadakis(0.5).unwrap());
        assert!(k.recover_u(k.base()).unwrap().max_abs() < 1e-15);
        let theta = [-1.2, 0.6];
        let (u, _) = k.theta_to_u(&theta).unwrap();
        let back = k.recover_u(&k.density(&theta).unwrap()).unwrap();
        assert!(back.sub(u.variable()).max_abs() < 1e-9);
    }

    #[test]
    fn grad_alpha_examples() {
        let k = three_point(Deformation::kaniadakis(0.5).unwrap());
        let g0 = k.grad_alpha(&[0.0, 0.0]).unwrap();
        for (a, b) in g0.iter().zip(k.statistic_means()) {
            assert!((a - b).abs() < 1e-14);
        }
        let theta = [0.4, 1.1];
        let g = k.grad_alpha(&theta).unwrap();
        let h = 1e-5;
        for j in 0..2 {
            let mut tp = theta;
            let mut tm = theta;
            tp[j] += h;
            tm[j] -= h;
            let fd = (k.alpha(&tp).unwrap() - k.alpha(&tm).unwrap()) / (2.0 * h);
            assert!((g[j] - fd).abs() <= 1e-6 * g[j].abs().max(1.0));
        }
        let hess = k.hessian_alpha(&theta).unwrap();
        assert_eq!(hess[0][1], hess[1][0]);
        assert!(hess[0][0] > 0.0 && hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0] > 0.0);
    }

    #[test]
    fn rejects_nonpositive_base() {
        let space = SampleSpace::with_weights(vec![1.0, 1.0]).unwrap();
        let p = Density::new(&space, vec![0.0, 1.0]).unwrap();
        let err =
            PhiExponentialFamily::new(Deformation::classical(), space, p, vec![RandomVariable::new(vec![0.0, 1.0])])
                .unwrap_err();
        assert_eq!(err.path(), Some("base_density[0]"));
    }
}
