//! Deformed logarithms and exponentials.
//!
//! A deformation is determined by a positive increasing function φ on
//! `(0, ∞)`:
//!
//! ```text
//! ln_φ(v)  = ∫₁^v dy / φ(y)
//! exp_φ    = ln_φ⁻¹,            exp_φ' = φ(exp_φ)
//! ψ(u)     = φ(exp_φ u) / exp_φ u,   so exp_φ' = ψ · exp_φ
//! exp_φ''  = (ψ' + ψ²) · exp_φ
//! φ(v)     = v · ψ(ln_φ v)
//! ```
//!
//! Four constructions are supported:
//!
//! * [`Deformation::classical`]: φ(v) = v, the ordinary `ln`/`exp` pair.
//! * [`Deformation::kaniadakis`]: ψ(u) = (1+κ²u²)^{-1/2}, with closed forms
//!   `exp_κ(u) = exp(asinh(κu)/κ)` and `ln_κ(v) = sinh(κ ln v)/κ`.
//! * [`Deformation::from_psi`]: a user rate function ψ; `exp_φ(u) = exp(∫₀^u ψ)`
//!   by quadrature and `ln_φ` by safeguarded Newton inversion.
//! * [`Deformation::self_dual_sigma`]: φ(y) = y σ(y^q, y^{-q}) for a
//!   symmetric σ; `ln_φ` by quadrature of 1/φ, `exp_φ` by inversion.
//!
//! A deformation is self-dual, `exp_φ(u) exp_φ(−u) = 1`, exactly when ψ is
//! symmetric.

mod table;

use std::fmt;
use std::sync::Arc;

pub use table::MonotoneCubic;

use crate::error::{Error, Result};
use crate::numeric::{self, RootSettings};

/// κ below this value is evaluated as the classical deformation.
pub const KAPPA_CLASSICAL_CUTOFF: f64 = 1e-12;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type BinaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, max_subdivisions: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200 }
    }
}

/// A rate function ψ with an optional analytic derivative.
#[derive(Clone)]
pub struct RateFunction {
    psi: ScalarFn,
    dpsi: Option<ScalarFn>,
    table: Option<MonotoneCubic>,
}

impl RateFunction {
    pub fn table(&self) -> Option<&MonotoneCubic> {
        self.table.as_ref()
    }
}

/// A symmetric kernel σ and exponent q defining φ(y) = y σ(y^q, y^{-q}).
#[derive(Clone)]
pub struct SigmaKernel {
    sigma: BinaryFn,
    q: f64,
}

impl SigmaKernel {
    pub fn q(&self) -> f64 {
        self.q
    }

    // 1/σ(e^{qt}, e^{-qt}) = e^t / φ(e^t)
    fn inverse_rate_in_log(&self, t: f64) -> f64 {
        let s = (self.q * t).exp();
        1.0 / (self.sigma)(s, s.recip())
    }
}

#[derive(Clone)]
pub enum DeformationKind {
    Classical,
    Kaniadakis { kappa: f64 },
    FromPsi(RateFunction),
    SelfDualSigma(SigmaKernel),
}

impl fmt::Debug for DeformationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeformationKind::Classical => f.write_str("Classical"),
            DeformationKind::Kaniadakis { kappa } => f.debug_struct("Kaniadakis").field("kappa", kappa).finish(),
            DeformationKind::FromPsi(r) => f
                .debug_struct("FromPsi")
                .field("analytic_dpsi", &r.dpsi.is_some())
                .field("tabulated", &r.table.is_some())
                .finish(),
            DeformationKind::SelfDualSigma(s) => f.debug_struct("SelfDualSigma").field("q", &s.q).finish(),
        }
    }
}

/// Result of a sampled self-duality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfDualityReport {
    pub self_dual: bool,
    pub max_deviation: f64,
}

/// Result of checking the standing assumptions on a grid of u values.
///
/// Positivity of ψ and convexity of exp_φ (ψ' + ψ² ≥ 0) are checked
/// pointwise; the divergence of ∫ψ at ±∞ cannot be checked on a finite
/// grid, so only the partial integrals over the grid halves are reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionReport {
    pub min_rate: f64,
    pub min_convexity: f64,
    pub worst_u: f64,
    pub rate_integral_negative: f64,
    pub rate_integral_positive: f64,
    pub satisfied: bool,
}

/// The sampled grid used by [`Deformation::check_standing_assumptions`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for SampledGrid {
    fn default() -> Self {
        Self { lo: -50.0, hi: 50.0, points: 10_000 }
    }
}

impl SampledGrid {
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points.max(2);
        (0..n).map(move |i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
    }
}

#[derive(Debug, Clone)]
pub struct Deformation {
    kind: DeformationKind,
    pub quadrature: QuadratureConfig,
    pub inversion: InversionConfig,
}

/// Evaluation route after κ dispatch.
enum Route<'a> {
    Classical,
    Kaniadakis(f64),
    Rate(&'a RateFunction),
    Sigma(&'a SigmaKernel),
}

impl Deformation {
    fn with_kind(kind: DeformationKind) -> Self {
        Self { kind, quadrature: QuadratureConfig::default(), inversion: InversionConfig::default() }
    }

    pub fn classical() -> Self {
        Self::with_kind(DeformationKind::Classical)
    }

    /// Kaniadakis deformation with κ ∈ [0, 1).
    pub fn kaniadakis(kappa: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&kappa) {
            return Err(Error::invalid("kappa", format!("kappa must lie in [0, 1), got {kappa}")));
        }
        Ok(Self::with_kind(DeformationKind::Kaniadakis { kappa }))
    }

    /// Deformation generated by a rate function ψ, optionally with ψ'.
    ///
    /// No assumptions are checked here; see [`Self::check_standing_assumptions`].
    pub fn from_psi<F>(psi: F, dpsi: Option<ScalarFn>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::with_kind(DeformationKind::FromPsi(RateFunction { psi: Arc::new(psi), dpsi, table: None }))
    }

    /// Deformation generated by a tabulated ψ, interpolated by a
    /// shape-preserving cubic and held constant beyond the table.
    pub fn from_psi_table(u: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if let Some(i) = psi.iter().position(|v| !(*v > 0.0)) {
            return Err(Error::invalid(format!("psi_table.psi[{i}]"), "rate values must be positive"));
        }
        let cubic = MonotoneCubic::new(u, psi)?;
        let a = cubic.clone();
        let b = cubic.clone();
        Ok(Self::with_kind(DeformationKind::FromPsi(RateFunction {
            psi: Arc::new(move |x| a.value(x)),
            dpsi: Some(Arc::new(move |x| b.derivative(x))),
            table: Some(cubic),
        })))
    }

    /// φ(y) = y σ(y^q, y^{-q}); σ must be symmetric and positive.
    pub fn self_dual_sigma<F>(sigma: F, q: f64) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::invalid("q", format!("q must be finite and nonnegative, got {q}")));
        }
        Ok(Self::with_kind(DeformationKind::SelfDualSigma(SigmaKernel { sigma: Arc::new(sigma), q })))
    }

    pub fn kind(&self) -> &DeformationKind {
        &self.kind
    }

    fn route(&self) -> Route<'_> {
        match &self.kind {
            DeformationKind::Classical => Route::Classical,
            DeformationKind::Kaniadakis { kappa } if *kappa < KAPPA_CLASSICAL_CUTOFF => Route::Classical,
            DeformationKind::Kaniadakis { kappa } => Route::Kaniadakis(*kappa),
            DeformationKind::FromPsi(r) => Route::Rate(r),
            DeformationKind::SelfDualSigma(s) => Route::Sigma(s),
        }
    }

    fn root_settings(&self, scale: f64) -> RootSettings {
        RootSettings {
            residual_tol: self.inversion.tol * scale.max(1.0),
            max_iter: self.inversion.max_iter,
            min_width: 4.0 * f64::EPSILON,
        }
    }

    /// Ψ(u) = ∫₀^u ψ, so that exp_φ(u) = exp(Ψ(u)).
    fn rate_integral(&self, rate: &RateFunction, u: f64) -> Result<f64> {
        let psi = &rate.psi;
        numeric::integrate(|s| psi(s), 0.0, u, self.quadrature.abs_tol, self.quadrature.max_subdivisions)
    }

    /// L(t) = ln_φ(e^t) = ∫₀^t ds / σ(e^{qs}, e^{-qs}).
    fn sigma_log_integral(&self, kernel: &SigmaKernel, t: f64) -> Result<f64> {
        numeric::integrate(
            |s| kernel.inverse_rate_in_log(s),
            0.0,
            t,
            self.quadrature.abs_tol,
            self.quadrature.max_subdivisions,
        )
    }

    /// Solves `g(t) = target` for an increasing `g` given by `eval`, by
    /// doubling a bracket around 0 and running the safeguarded Newton solver.
    fn invert_increasing<F>(&self, mut eval: F, target: f64, context: &str) -> Result<f64>
    where
        F: FnMut(f64) -> Result<(f64, f64)>,
    {
        let mut lo = -1.0;
        let mut hi = 1.0;
        let mut expansions = 0;
        while eval(lo)?.0 > target {
            hi = lo;
            lo *= 2.0;
            expansions += 1;
            if expansions > 1100 || !lo.is_finite() {
                return Err(Error::numerical(format!("{context}: bracket expansion"), f64::INFINITY));
            }
        }
        while eval(hi)?.0 < target {
            lo = hi;
            hi *= 2.0;
            expansions += 1;
            if expansions > 1100 || !hi.is_finite() {
                return Err(Error::numerical(format!("{context}: bracket expansion"), f64::INFINITY));
            }
        }
        numeric::solve_increasing(
            |t| eval(t).map(|(g, dg)| (g - target, dg)),
            lo,
            hi,
            0.5 * (lo + hi),
            self.root_settings(target.abs()),
            context,
        )
    }

    /// φ(v) for v > 0.
    pub fn phi(&self, v: f64) -> Result<f64> {
        check_positive("phi", v)?;
        match self.route() {
            Route::Classical => Ok(v),
            Route::Kaniadakis(kappa) => Ok(v / (kappa * v.ln()).cosh()),
            Route::Rate(rate) => Ok(v * (rate.psi)(self.ln_phi(v)?)),
            Route::Sigma(kernel) => Ok(v * (kernel.sigma)(v.powf(kernel.q), v.powf(-kernel.q))),
        }
    }

    /// The rate function ψ(u) = φ(exp_φ u)/exp_φ u.
    pub fn psi(&self, u: f64) -> Result<f64> {
        check_finite("psi", u)?;
        match self.route() {
            Route::Classical => Ok(1.0),
            Route::Kaniadakis(kappa) => Ok(1.0 / 1f64.hypot(kappa * u)),
            Route::Rate(rate) => Ok((rate.psi)(u)),
            Route::Sigma(kernel) => {
                let x = self.exp_phi(u)?;
                Ok((kernel.sigma)(x.powf(kernel.q), x.powf(-kernel.q)))
            }
        }
    }

    /// ψ'(u): analytic where available, otherwise a central difference with
    /// step `max(1e-6, 1e-8 |u|)`.
    pub fn dpsi(&self, u: f64) -> Result<f64> {
        check_finite("dpsi", u)?;
        match self.route() {
            Route::Classical => Ok(0.0),
            Route::Kaniadakis(kappa) => {
                let k2 = kappa * kappa;
                Ok(-k2 * u / (1.0 + k2 * u * u).powf(1.5))
            }
            Route::Rate(RateFunction { dpsi: Some(d), .. }) => Ok(d(u)),
            Route::Rate(_) | Route::Sigma(_) => {
                let h = 1e-6f64.max(1e-8 * u.abs());
                Ok((self.psi(u + h)? - self.psi(u - h)?) / (2.0 * h))
            }
        }
    }

    /// ln_φ(v) = ∫₁^v dy/φ(y).
    pub fn ln_phi(&self, v: f64) -> Result<f64> {
        check_positive("ln_phi", v)?;
        match self.route() {
            Route::Classical => Ok(v.ln()),
            Route::Kaniadakis(kappa) => Ok((kappa * v.ln()).sinh() / kappa),
            Route::Rate(rate) => {
                let target = v.ln();
                if target == 0.0 {
                    return Ok(0.0);
                }
                self.invert_increasing(
                    |t| Ok((self.rate_integral(rate, t)?, (rate.psi)(t))),
                    target,
                    "ln_phi inversion",
                )
            }
            // substitute y = e^t: ∫₁^v dy/φ(y) = ∫₀^{ln v} e^t/φ(e^t) dt
            Route::Sigma(kernel) => self.sigma_log_integral(kernel, v.ln()),
        }
    }

    /// exp_φ(u), the inverse of [`Self::ln_phi`].
    pub fn exp_phi(&self, u: f64) -> Result<f64> {
        check_finite("exp_phi", u)?;
        match self.route() {
            Route::Classical => Ok(u.exp()),
            Route::Kaniadakis(kappa) => Ok(((kappa * u).asinh() / kappa).exp()),
            Route::Rate(rate) => Ok(self.rate_integral(rate, u)?.exp()),
            Route::Sigma(kernel) => {
                if u == 0.0 {
                    return Ok(1.0);
                }
                let t = self.invert_increasing(
                    |t| Ok((self.sigma_log_integral(kernel, t)?, kernel.inverse_rate_in_log(t))),
                    u,
                    "exp_phi inversion",
                )?;
                Ok(t.exp())
            }
        }
    }

    /// exp_φ(u) together with exp_φ'(u) = ψ(u) exp_φ(u).
    pub fn exp_phi_and_d1(&self, u: f64) -> Result<(f64, f64)> {
        let e = self.exp_phi(u)?;
        let d1 = match self.route() {
            Route::Sigma(kernel) => e * (kernel.sigma)(e.powf(kernel.q), e.powf(-kernel.q)),
            _ => self.psi(u)? * e,
        };
        Ok((e, d1))
    }

    pub fn exp_phi_d1(&self, u: f64) -> Result<f64> {
        Ok(self.exp_phi_and_d1(u)?.1)
    }

    /// exp_φ''(u) = (ψ'(u) + ψ(u)²) exp_φ(u).
    pub fn exp_phi_d2(&self, u: f64) -> Result<f64> {
        let (e, d1) = self.exp_phi_and_d1(u)?;
        let psi = d1 / e;
        Ok((self.dpsi(u)? + psi * psi) * e)
    }

    /// Checks `|exp_φ(u) exp_φ(−u) − 1| <= tol` on every grid point.
    pub fn is_self_dual(&self, grid: &[f64], tol: f64) -> Result<SelfDualityReport> {
        if grid.is_empty() {
            return Err(Error::invalid("grid", "self-duality grid must be nonempty"));
        }
        let mut max_deviation = 0.0f64;
        for &u in grid {
            let dev = (self.exp_phi(u)? * self.exp_phi(-u)? - 1.0).abs();
            max_deviation = max_deviation.max(dev);
        }
        Ok(SelfDualityReport { self_dual: max_deviation <= tol, max_deviation })
    }

    /// Sampled check of ψ > 0 and ψ' + ψ² ≥ 0 on `grid`.
    ///
    /// A small negative convexity slack of `1e-9 (1 + ψ²)` is tolerated to
    /// absorb finite-difference error in ψ'.
    pub fn check_standing_assumptions(&self, grid: &SampledGrid) -> Result<AssumptionReport> {
        let mut min_rate = f64::INFINITY;
        let mut min_convexity = f64::INFINITY;
        let mut worst_u = grid.lo;
        let mut worst_margin = f64::INFINITY;
        let mut neg = 0.0;
        let mut pos = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for u in grid.iter() {
            let psi = self.psi(u)?;
            let conv = self.dpsi(u)? + psi * psi;
            let margin = conv + 1e-9 * (1.0 + psi * psi);
            min_rate = min_rate.min(psi);
            min_convexity = min_convexity.min(conv);
            if margin.min(psi) < worst_margin {
                worst_margin = margin.min(psi);
                worst_u = u;
            }
            if let Some((u0, psi0)) = prev {
                let area = 0.5 * (psi + psi0) * (u - u0);
                if u <= 0.0 {
                    neg += area;
                } else {
                    pos += area;
                }
            }
            prev = Some((u, psi));
        }
        Ok(AssumptionReport {
            min_rate,
            min_convexity,
            worst_u,
            rate_integral_negative: neg,
            rate_integral_positive: pos,
            satisfied: min_rate > 0.0 && worst_margin >= 0.0,
        })
    }
}

fn check_positive(what: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

fn check_finite(what: &'static str, u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: u })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa(k: f64) -> Deformation {
        Deformation::kaniadakis(k).unwrap()
    }

    fn kaniadakis_by_psi(k: f64) -> Deformation {
        Deformation::from_psi(move |u| 1.0 / (1.0 + k * k * u * u).sqrt(), None)
    }

    fn kaniadakis_by_sigma(k: f64) -> Deformation {
        Deformation::self_dual_sigma(|s, t| 2.0 / (s + t), k).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(Deformation::classical().phi(3.7).unwrap(), 3.7);
        assert!((kappa(0.5).phi(4.0).unwrap() - 3.2).abs() < 1e-14);
        assert!((kappa(0.5).phi(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(kappa(0.5).phi(0.0), Err(Error::Domain { .. })));
        assert!(Deformation::classical().phi(-1.0).is_err());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(Deformation::classical().psi(5.0).unwrap(), 1.0);
        assert!((kappa(0.5).psi(1.5).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(kappa(0.5).psi(0.0).unwrap(), 1.0);
    }

    #[test]
    fn ln_and_exp_examples() {
        for d in [Deformation::classical(), kappa(0.5), kaniadakis_by_psi(0.5), kaniadakis_by_sigma(0.5)] {
            assert_eq!(d.ln_phi(1.0).unwrap(), 0.0);
            assert_eq!(d.exp_phi(0.0).unwrap(), 1.0);
        }
        assert!((Deformation::classical().ln_phi(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!((kappa(0.5).ln_phi(4.0).unwrap() - 1.5).abs() < 1e-14);
        assert!((kappa(0.5).exp_phi(1.5).unwrap() - 4.0).abs() < 1e-13);
        let golden = (0.5 + 1.25f64.sqrt()).powi(2);
        assert!((kappa(0.5).exp_phi(1.0).unwrap() - golden).abs() < 1e-13);
        assert!((golden - 2.618_033_988_7).abs() < 1e-10);
    }

    #[test]
    fn numeric_routes_agree_with_closed_form() {
        let closed = kappa(0.5);
        for d in [kaniadakis_by_psi(0.5), kaniadakis_by_sigma(0.5)] {
            for &u in &[-7.0, -1.0, 0.3, 1.5, 6.0] {
                let a = closed.exp_phi(u).unwrap();
                assert!((d.exp_phi(u).unwrap() - a).abs() <= 1e-10 * a, "{:?} exp at {u}", d.kind());
                assert!((d.psi(u).unwrap() - closed.psi(u).unwrap()).abs() < 1e-9);
            }
            for &v in &[1e-3, 0.2, 4.0, 300.0] {
                let a = closed.ln_phi(v).unwrap();
                assert!((d.ln_phi(v).unwrap() - a).abs() <= 1e-10 * a.abs().max(1.0));
                assert!((d.phi(v).unwrap() - closed.phi(v).unwrap()).abs() <= 1e-9 * v);
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let c = Deformation::classical();
        assert_eq!(c.exp_phi_d1(0.0).unwrap(), 1.0);
        assert_eq!(c.exp_phi_d2(0.0).unwrap(), 1.0);
        let k = kappa(0.5);
        assert!((k.exp_phi_d1(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((k.exp_phi_d2(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((k.exp_phi_d1(1.5).unwrap() - 3.2).abs() < 1e-13);
        assert!((k.exp_phi_d1(1.5).unwrap() - k.phi(4.0).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn second_derivative_is_nonnegative() {
        for d in [kappa(0.9), kappa(0.3), kaniadakis_by_psi(0.7)] {
            for i in -40..=40 {
                let u = i as f64 * 0.5;
                assert!(d.exp_phi_d2(u).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn self_duality_examples() {
        let grid = [-5.0, -2.0, -1.0, 1.0, 2.0, 5.0];
        assert!(Deformation::classical().is_self_dual(&grid, 1e-10).unwrap().self_dual);
        assert!(kappa(0.5).is_self_dual(&grid, 1e-10).unwrap().self_dual);
        let asym = Deformation::from_psi(|u| (u * u + u).exp(), None);
        let report = asym.is_self_dual(&grid, 1e-10).unwrap();
        assert!(!report.self_dual);
        assert!(report.max_deviation > 1e-3);
        assert!(asym.is_self_dual(&[], 1e-10).is_err());
    }

    #[test]
    fn kappa_dispatch_to_classical() {
        let d = kappa(1e-13);
        assert_eq!(d.exp_phi(2.0).unwrap(), 2f64.exp());
        assert!(Deformation::kaniadakis(1.0).is_err());
        assert!(Deformation::kaniadakis(-0.1).is_err());
    }

    #[test]
    fn standing_assumptions_sampled() {
        let grid = SampledGrid { lo: -10.0, hi: 10.0, points: 2001 };
        assert!(kappa(0.5).check_standing_assumptions(&grid).unwrap().satisfied);
        // ψ' + ψ² < 0 near u = -1.2 for ψ(u) = exp(u² + u)
        let bad = Deformation::from_psi(|u| (u * u + u).exp(), None);
        let report = bad.check_standing_assumptions(&grid).unwrap();
        assert!(!report.satisfied);
        assert!(report.min_convexity < 0.0);
    }

    #[test]
    fn tabulated_rate_function() {
        let u: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.5).collect();
        let psi: Vec<f64> = u.iter().map(|x| 1.0 / (1.0 + 0.25 * x * x).sqrt()).collect();
        let d = Deformation::from_psi_table(u, psi).unwrap();
        let closed = kappa(0.5);
        for &x in &[-3.0, 0.7, 2.2] {
            let rel = (d.exp_phi(x).unwrap() / closed.exp_phi(x).unwrap() - 1.0).abs();
            assert!(rel < 1e-3, "{x}: {rel}");
        }
        assert!(Deformation::from_psi_table(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    }
}
