//! Executable property groups.
//!
//! Each group runs a batch of randomized fixtures against the library and
//! the brute-force [`oracle`](crate::oracle) routines and reports, per
//! property, the worst observed error next to the bound it must satisfy.
//! The same groups back the `check suite` command and the acceptance tests.
//!
//! Fixtures are drawn from a ChaCha stream seeded per group, so a report is
//! reproducible from its seed alone.

use std::f64::consts::E;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjugate::{self, ConjugateOptions, ConjugateStatus};
use crate::deformations::Deformation;
use crate::error::Error;
use crate::family::PhiExponentialFamily;
use crate::oracle::{self, OracleConfig, QuadratureDeformation};
use crate::polytope::{dot, MarginalPolytope};
use crate::state_space::{Density, RandomVariable, SampleSpace};

/// Kaniadakis parameters used by the randomized fixtures.
pub const KAPPAS: [f64; 3] = [0.25, 0.5, 0.9];

/// Group names in criterion order.
pub const GROUPS: [&str; 9] = [
    "deformation-calculus",
    "rate-identity",
    "normalization",
    "escort-derivative",
    "second-derivative",
    "conjugate-finiteness",
    "legendre",
    "nonparametric-conjugate",
    "polytope-lp",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// The largest observation must not exceed the bound.
    MaxAtMost,
    /// The smallest observation must exceed the bound.
    MinAbove,
    /// The largest observation must exceed the bound.
    MaxAbove,
}

/// One property with its worst observation over all cases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub label: String,
    pub cases: usize,
    #[serde(serialize_with = "crate::numeric::serialize_extended")]
    pub worst: f64,
    pub bound: f64,
    pub relation: Relation,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl CriterionReport {
    fn new(id: usize, checks: Vec<CheckOutcome>) -> Self {
        Self { id, name: GROUPS[id - 1].to_string(), passed: checks.iter().all(|c| c.passed), checks }
    }

    /// `criterion 3 normalization: PASS` followed by the failing properties, if any.
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {} {}: {status}", self.id, self.name);
        for c in self.checks.iter().filter(|c| !c.passed) {
            line.push_str(&format!(" [{}: worst {:e} vs {:e}", c.label, c.worst, c.bound));
            if let Some(n) = &c.note {
                line.push_str(&format!("; {n}"));
            }
            line.push(']');
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

/// Accumulates observations for one property.
struct Measure {
    label: String,
    bound: f64,
    relation: Relation,
    cases: usize,
    worst: f64,
    failures: usize,
    note: Option<String>,
}

impl Measure {
    fn new(label: impl Into<String>, bound: f64, relation: Relation) -> Self {
        let worst = match relation {
            Relation::MinAbove => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        };
        Self { label: label.into(), bound, relation, cases: 0, worst, failures: 0, note: None }
    }

    fn at_most(label: impl Into<String>, bound: f64) -> Self {
        Self::new(label, bound, Relation::MaxAtMost)
    }

    fn above(label: impl Into<String>, bound: f64) -> Self {
        Self::new(label, bound, Relation::MinAbove)
    }

    fn max_above(label: impl Into<String>, bound: f64) -> Self {
        Self::new(label, bound, Relation::MaxAbove)
    }

    /// Counts violations of a predicate; passes with zero violations.
    fn count(label: impl Into<String>) -> Self {
        Self::at_most(label, 0.0)
    }

    fn record(&mut self, v: f64) {
        self.cases += 1;
        if v.is_nan() {
            self.failures += 1;
            self.note.get_or_insert_with(|| "NaN observation".into());
            return;
        }
        self.worst = match self.relation {
            Relation::MinAbove => self.worst.min(v),
            _ => self.worst.max(v),
        };
    }

    fn check(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { 1.0 });
        if !ok {
            self.failures += 1;
        }
    }

    fn fail(&mut self, err: &Error) {
        self.cases += 1;
        self.failures += 1;
        self.note.get_or_insert_with(|| format!("library error: {err}"));
    }

    fn record_result(&mut self, r: Result<f64, Error>) {
        match r {
            Ok(v) => self.record(v),
            Err(e) => self.fail(&e),
        }
    }

    fn note(&mut self, note: String) {
        self.note = Some(note);
    }

    fn finish(self) -> CheckOutcome {
        let within = match self.relation {
            Relation::MaxAtMost => self.worst <= self.bound,
            Relation::MinAbove | Relation::MaxAbove => self.worst > self.bound,
        };
        let worst = if self.relation == Relation::MaxAtMost && self.failures > 0 && self.bound == 0.0 {
            self.failures as f64
        } else {
            self.worst
        };
        CheckOutcome {
            label: self.label,
            cases: self.cases,
            worst,
            bound: self.bound,
            relation: self.relation,
            passed: self.cases > 0 && within && self.failures == 0,
            note: self.note,
        }
    }
}

/// Seeded generator of random spaces, families and directions.
pub struct Fixtures {
    rng: ChaCha8Rng,
}

impl Fixtures {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn vector(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }

    /// Uniform draw from the probability simplex.
    pub fn simplex_weights(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -(1.0 - self.rng.gen::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|r| r / total).collect()
    }

    /// A unit vector with a uniformly random direction.
    pub fn direction(&mut self, m: usize) -> Vec<f64> {
        loop {
            let v = self.vector(m, -1.0, 1.0);
            let n = dot(&v, &v).sqrt();
            if n > 0.1 && n <= 1.0 {
                return v.into_iter().map(|x| x / n).collect();
            }
        }
    }

    /// Classical for index 0, then Kaniadakis over [`KAPPAS`].
    pub fn deformation(&mut self, index: usize) -> Deformation {
        match index % 4 {
            0 => Deformation::classical(),
            k => Deformation::kaniadakis(KAPPAS[k - 1]).expect("fixture kappa lies in [0, 1)"),
        }
    }

    pub fn space(&mut self, n: usize) -> SampleSpace {
        SampleSpace::with_weights(self.vector(n, 0.5, 2.0)).expect("positive weights")
    }

    pub fn positive_density(&mut self, space: &SampleSpace) -> Density {
        Density::from_weights(space, self.vector(space.len(), 0.2, 1.0)).expect("positive weights")
    }

    /// A family on `n` points with `m` statistics drawn from `[-1, 1]`.
    pub fn family_with(&mut self, deformation: Deformation, n: usize, m: usize) -> PhiExponentialFamily {
        let space = self.space(n);
        let base = self.positive_density(&space);
        let stats = (0..m).map(|_| RandomVariable::new(self.vector(n, -1.0, 1.0))).collect();
        PhiExponentialFamily::new(deformation, space, base, stats).expect("fixture family")
    }

    /// `|X| ∈ [2, 6]`, `m ∈ [1, 3]`.
    pub fn family(&mut self, deformation: Deformation) -> PhiExponentialFamily {
        let n = self.index(2, 6);
        let m = self.index(1, 3);
        self.family_with(deformation, n, m)
    }

    /// A family whose statistics are affinely independent (`|X| > m`).
    pub fn full_rank_family(&mut self, deformation: Deformation) -> PhiExponentialFamily {
        let m = self.index(1, 3);
        let n = self.index(m + 1, 6);
        self.family_with(deformation, n, m)
    }

    pub fn u_in_v(&mut self, fam: &PhiExponentialFamily, scale: f64) -> RandomVariable {
        let c = self.vector(fam.dim(), -scale, scale);
        RandomVariable::combine(&c, fam.centered_basis())
    }
}

fn log_grid(points: usize, lo_exp: f64, hi_exp: f64) -> Vec<f64> {
    (0..points).map(|i| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (points - 1) as f64)).collect()
}

fn linear_grid(points: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

fn group_seed(seed: u64, id: usize) -> u64 {
    seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Criterion 1: round trips, closed forms against quadrature and inversion,
/// self-duality and the κ → 0 limit.
pub fn deformation_calculus(_seed: u64) -> CriterionReport {
    let kappa_psi = |k: f64| move |u: f64| 1.0 / (1.0 + k * k * u * u).sqrt();
    let mut routes: Vec<Deformation> = vec![Deformation::classical()];
    routes.extend(KAPPAS.iter().map(|k| Deformation::kaniadakis(*k).unwrap()));
    routes.push(Deformation::from_psi(kappa_psi(0.5), None));
    routes.push(Deformation::self_dual_sigma(|s, t| 2.0 / (s + t), 0.5).unwrap());

    let grid = log_grid(200, -3.0, 3.0);
    let mut round_trip = Measure::at_most("round trip |exp(ln v) - v| / v, 200-point log grid", 1e-9);
    for d in &routes {
        for &v in &grid {
            round_trip.record_result(d.ln_phi(v).and_then(|l| d.exp_phi(l)).map(|e| (e - v).abs() / v));
        }
    }

    let mut ln_oracle = Measure::at_most("Kaniadakis ln_phi vs quadrature oracle", 1e-9);
    let mut exp_oracle = Measure::at_most("Kaniadakis exp_phi vs inversion oracle", 1e-9);
    for &k in &KAPPAS {
        let d = Deformation::kaniadakis(k).unwrap();
        let q = QuadratureDeformation::kaniadakis(k);
        for &v in grid.iter().step_by(4) {
            let reference = q.ln(v);
            ln_oracle.record_result(d.ln_phi(v).map(|l| (l - reference).abs() / (1.0 + reference.abs())));
        }
        for u in linear_grid(41, -5.0, 5.0) {
            let reference = q.exp(u);
            exp_oracle.record_result(d.exp_phi(u).map(|e| (e - reference).abs() / reference));
        }
    }

    let mut self_dual = Measure::at_most("self-duality |exp(u) exp(-u) - 1| on [-10, 10]", 1e-10);
    for d in &routes {
        for u in linear_grid(201, -10.0, 10.0) {
            self_dual.record_result(d.exp_phi(u).and_then(|a| Ok((a * d.exp_phi(-u)? - 1.0).abs())));
        }
    }

    let mut limit = Measure::at_most("kappa -> 0 continuity, relative", 1e-4);
    let classical = Deformation::classical();
    for k in [1e-3, 1e-5] {
        let d = Deformation::kaniadakis(k).unwrap();
        for u in linear_grid(41, -5.0, 5.0) {
            limit.record_result(d.exp_phi(u).map(|e| (e - u.exp()).abs() / u.exp()));
        }
        for &v in grid.iter().step_by(4) {
            limit.record_result(d.ln_phi(v).map(|l| (l - v.ln()).abs() / (1.0 + v.ln().abs())));
        }
    }
    let mut dispatch = Measure::at_most("kappa below 1e-12 reproduces the classical values exactly", 0.0);
    let tiny = Deformation::kaniadakis(1e-13).unwrap();
    for u in linear_grid(21, -5.0, 5.0) {
        dispatch.record_result(tiny.exp_phi(u).and_then(|e| Ok((e - classical.exp_phi(u)?).abs())));
    }

    CriterionReport::new(
        1,
        vec![
            round_trip.finish(),
            ln_oracle.finish(),
            exp_oracle.finish(),
            self_dual.finish(),
            limit.finish(),
            dispatch.finish(),
        ],
    )
}

/// Criterion 2: `ψ(ln_φ v) = φ(v)/v`, and `exp_φ' = ψ exp_φ` against finite differences.
pub fn rate_identity(_seed: u64) -> CriterionReport {
    let grid = log_grid(100, -3.0, 3.0);
    let mut identity = Measure::at_most("|psi(ln_phi v) - phi(v)/v|, 100-point grid", 1e-9);
    let mut chain = Measure::at_most("exp_phi' = psi exp_phi vs central difference, relative", 1e-6);
    for &k in &KAPPAS {
        let d = Deformation::kaniadakis(k).unwrap();
        for &v in &grid {
            identity.record_result((|| Ok((d.psi(d.ln_phi(v)?)? - d.phi(v)? / v).abs()))());
        }
        for u in linear_grid(21, -4.0, 4.0) {
            let h = 1e-5;
            let r = (|| {
                let fd = (d.exp_phi(u + h)? - d.exp_phi(u - h)?) / (2.0 * h);
                let d1 = d.exp_phi_d1(u)?;
                Ok((d1 - fd).abs() / d1)
            })();
            chain.record_result(r);
        }
    }
    let mut hand = Measure::at_most("kappa 0.5: psi(1.5) = 0.8 = phi(4)/4", 1e-12);
    let d = Deformation::kaniadakis(0.5).unwrap();
    hand.record_result(d.psi(1.5).map(|p| (p - 0.8).abs()));
    hand.record_result(d.phi(4.0).map(|p| (p / 4.0 - 0.8).abs()));
    CriterionReport::new(2, vec![identity.finish(), chain.finish(), hand.finish()])
}

fn normalization_residual(fam: &PhiExponentialFamily, w: &RandomVariable, alpha: f64) -> Result<f64, Error> {
    let d = fam.deformation();
    let mut total = 0.0;
    for ((wx, px), mx) in w.values().iter().zip(fam.base().values()).zip(fam.space().mu()) {
        total += d.exp_phi(wx - alpha)? * px * mx;
    }
    Ok((total - 1.0).abs())
}

fn classical_log_partition(fam: &PhiExponentialFamily, w: &RandomVariable) -> f64 {
    let top = w.max();
    let s: f64 = w
        .values()
        .iter()
        .zip(fam.base().values())
        .zip(fam.space().mu())
        .map(|((wx, px), mx)| (wx - top).exp() * px * mx)
        .sum();
    top + s.ln()
}

/// Criterion 3: normalization residuals and the classical log-partition.
pub fn normalization(seed: u64) -> CriterionReport {
    let mut fx = Fixtures::new(group_seed(seed, 3));
    let mut residual = Measure::at_most("|E_p[exp_phi(theta H - alpha)] - 1|, 200 fixtures", 1e-12);
    let mut closed = Measure::at_most("classical alpha vs log-sum-exp", 1e-10);
    for i in 0..200 {
        let d = fx.deformation(i);
        let fam = fx.family(d);
        let theta = fx.vector(fam.dim(), -5.0, 5.0);
        let w = fam.linear_statistic(&theta);
        match fam.alpha(&theta) {
            Ok(a) => {
                residual.record_result(normalization_residual(&fam, &w, a));
                if i % 4 == 0 {
                    closed.record((a - classical_log_partition(&fam, &w)).abs());
                }
            }
            Err(e) => residual.fail(&e),
        }
    }
    let two = two_point(Deformation::classical());
    closed.record_result(two.alpha(&[2.0]).map(|a| (a - ((1.0 + E * E) / 2.0).ln()).abs()));
    CriterionReport::new(3, vec![residual.finish(), closed.finish()])
}

/// `μ = (½, ½)`, `p = (1, 1)`, `H = (0, 1)`.
pub fn two_point(d: Deformation) -> PhiExponentialFamily {
    let space = SampleSpace::new(vec!["a".into(), "b".into()], vec![0.5, 0.5]).unwrap();
    let p = Density::new(&space, vec![1.0, 1.0]).unwrap();
    PhiExponentialFamily::new(d, space, p, vec![RandomVariable::new(vec![0.0, 1.0])]).unwrap()
}

/// Criterion 4: DK against finite differences of K, and the residual of the
/// variant escort that weights by `p_u`.
pub fn escort_derivative(seed: u64) -> CriterionReport {
    let mut fx = Fixtures::new(group_seed(seed, 4));
    let h = OracleConfig::default().fd_step;
    let mut corrected = Measure::at_most("|dK - central difference| / (1 + |dK|), 100 cases", 1e-6);
    let mut literal = Measure::max_above("variant escort residual, largest over non-classical fixtures", 1e-3);
    for i in 0..100 {
        let d = fx.deformation(i);
        let classical = i % 4 == 0;
        let fam = fx.family(d);
        let u = fx.u_in_v(&fam, 2.0);
        let v = RandomVariable::new(fx.vector(fam.space().len(), -1.0, 1.0));
        let r = (|| {
            let fd = (fam.k(&u.axpy(h, &v))? - fam.k(&u.axpy(-h, &v))?) / (2.0 * h);
            let dk = fam.dk(&u, &v)?;
            let lit = fam.space().expectation(&fam.literal_escort(&u)?, &v)?;
            Ok(((dk - fd).abs() / (1.0 + dk.abs()), (lit - fd).abs() / (1.0 + fd.abs())))
        })();
        match r {
            Ok((c, l)) => {
                corrected.record(c);
                if !classical {
                    literal.record(l);
                }
            }
            Err(e) => corrected.fail(&e),
        }
    }
    CriterionReport::new(4, vec![corrected.finish(), literal.finish()])
}

/// Criterion 5: D²K against finite-difference Hessians, the value at the
/// origin, and strict convexity.
pub fn second_derivative(seed: u64) -> CriterionReport {
    let mut fx = Fixtures::new(group_seed(seed, 5));
    let h = OracleConfig::default().fd_hessian_step;
    let mut hessian = Measure::at_most("|d2K - finite-difference Hessian| / (1 + |d2K|), 100 cases", 1e-4);
    let mut origin = Measure::at_most("|d2K(0, v, w) - phi'(1) Cov_p(v, w)|", 1e-8);
    let mut midpoint = Measure::above("midpoint convexity margin of K, 100 segments", 0.0);
    let mut positive = Measure::above("d2K(u, v, v) for v outside the constants", 0.0);
    for i in 0..100 {
        let d = fx.deformation(i);
        let fam = fx.family(d);
        let n = fam.space().len();
        let u = fx.u_in_v(&fam, 2.0);
        let v = RandomVariable::new(fx.vector(n, -1.0, 1.0));
        let w = RandomVariable::new(fx.vector(n, -1.0, 1.0));
        let r = (|| {
            let k = |s: f64, t: f64| fam.k(&u.axpy(s, &v).axpy(t, &w));
            let fd = (k(h, h)? - k(h, -h)? - k(-h, h)? + k(-h, -h)?) / (4.0 * h * h);
            let exact = fam.d2k(&u, &v, &w)?;
            Ok((exact - fd).abs() / (1.0 + exact.abs()))
        })();
        hessian.record_result(r);

        let r = (|| {
            let dphi = oracle::fd_derivative(&|x| fam.deformation().phi(x).unwrap_or(f64::NAN), 1.0, 1e-5);
            let cov = fam.space().covariance(fam.base(), &v, &w)?;
            Ok((fam.d2k(&RandomVariable::zeros(n), &v, &w)? - dphi * cov).abs())
        })();
        origin.record_result(r);

        let u2 = fx.u_in_v(&fam, 2.0);
        let r = (|| {
            let mid = u.add(&u2).scaled(0.5);
            Ok(0.5 * fam.k(&u)? + 0.5 * fam.k(&u2)? - fam.k(&mid)?)
        })();
        midpoint.record_result(r);
        positive.record_result(fam.d2k(&u, &v, &v));
    }
    CriterionReport::new(5, vec![hessian.finish(), origin.finish(), midpoint.finish(), positive.finish()])
}

/// Criterion 6: α* is finite on M with the `ln_φ C` bound, and diverges
/// outside with a verified certificate and an increasing witness.
pub fn conjugate_finiteness(seed: u64) -> CriterionReport {
    let mut fx = Fixtures::new(group_seed(seed, 6));
    let opts = ConjugateOptions::default();
    let mut finite = Measure::count("in-hull eta gives a finite alpha*, 50 cases");
    let mut bound = Measure::at_most("theta eta - alpha(theta) - ln_phi(C) on a theta grid", 1e-9);
    for i in 0..50 {
        let d = fx.deformation(i);
        let fam = fx.family(d);
        let n = fam.space().len();
        let lambda = fx.simplex_weights(n);
        let eta: Vec<f64> = fam.statistics().iter().map(|h| dot(&lambda, h.values())).collect();
        let c = (0..n).map(|x| lambda[x] / (fam.base().values()[x] * fam.space().mu()[x])).fold(0.0, f64::max);
        let r = (|| {
            let ln_c = fam.deformation().ln_phi(c)?;
            let star = conjugate::alpha_star(&fam, &eta, &opts)?;
            let mut worst = star.value - ln_c;
            for _ in 0..25 {
                let theta = fx.vector(fam.dim(), -4.0, 4.0);
                worst = worst.max(conjugate::objective(&fam, &eta, &theta)? - ln_c);
            }
            Ok((star.is_finite(), worst))
        })();
        match r {
            Ok((ok, worst)) => {
                finite.check(ok);
                bound.record(worst);
            }
            Err(e) => finite.fail(&e),
        }
    }

    let mut certified = Measure::count("out-of-hull eta: separation certificate verifies, 50 cases");
    let mut witness = Measure::count("witness g(n a) strictly increasing and above 1e3");
    let mut longest = 0usize;
    for i in 0..50 {
        let d = fx.deformation(i);
        let fam = fx.family(d);
        let n = fam.space().len();
        let m = fam.dim();
        let lambda = fx.simplex_weights(n);
        let inside: Vec<f64> = (0..m).map(|j| dot(&lambda, fam.statistics()[j].values())).collect();
        let a = fx.direction(m);
        let support = (0..n)
            .map(|x| (0..m).map(|j| a[j] * fam.statistics()[j].values()[x]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        let delta = fx.uniform(0.1, 1.0);
        let shift = support - dot(&a, &inside) + delta;
        let eta: Vec<f64> = inside.iter().zip(&a).map(|(e, ak)| e + shift * ak).collect();
        match conjugate::alpha_star(&fam, &eta, &opts) {
            Ok(r) => {
                let verified = r.status == ConjugateStatus::InfiniteOutside
                    && r.certificate.as_ref().is_some_and(|c| c.verify(fam.polytope(), &eta, 1e-9));
                certified.check(verified);
                let seq = r.witness.unwrap_or_default();
                longest = longest.max(seq.len());
                let increasing = seq.windows(2).all(|p| p[1] > p[0]);
                witness.check(increasing && seq.last().is_some_and(|g| *g > opts.witness_bound));
            }
            Err(e) => certified.fail(&e),
        }
    }
    witness.note(format!("longest witness sequence: {longest} terms"));
    CriterionReport::new(6, vec![finite.finish(), bound.finish(), certified.finish(), witness.finish()])
}

/// Criterion 7: ∇α lands in the relative interior, Newton inverts it, the
/// Legendre identity holds and α* agrees with a grid supremum.
pub fn legendre(seed: u64) -> CriterionReport {
    let mut fx = Fixtures::new(group_seed(seed, 7));
    let opts = ConjugateOptions::default();
    let cfg = OracleConfig::default();
    let mut slack = Measure::above("relative-interior LP slack of grad alpha, 50 cases", 1e-9);
    let mut recovery = Measure::at_most("|theta_hat - theta|", 1e-7);
    let mut identity = Measure::at_most("|alpha*(grad alpha) + alpha - theta grad alpha|", 1e-8);
    let mut grid = Measure::at_most("|alpha* - grid supremum|, m <= 2", 1e-5);
    for i in 0..50 {
        let d = fx.deformation(i);
        let fam = fx.full_rank_family(d);
        let theta = fx.vector(fam.dim(), -3.0, 3.0);
        let r = (|| {
            let eta = fam.grad_alpha(&theta)?;
            let report = fam.polytope().relative_interior_contains(&eta)?;
            let check = conjugate::legendre_check(&fam, &theta, &opts)?;
            Ok((eta, report, check))
        })();
        let (eta, report, check) = match r {
            Ok(t) => t,
            Err(e) => {
                slack.fail(&e);
                continue;
            }
        };
        slack.record(if report.inside { report.slack.unwrap_or(0.0) } else { 0.0 });
        match check.theta_error {
            Some(err) => recovery.record(err),
            None => recovery.fail(&Error::numerical(format!("no maximizer ({:?})", check.alpha_star.status), f64::NAN)),
        }
        identity.record(check.identity_residual);
        if fam.dim() <= 2 {
            let g = |t: &[f64]| conjugate::objective(&fam, &eta, t).unwrap_or(f64::NEG_INFINITY);
            let bounds = vec![(-cfg.grid_box, cfg.grid_box); fam.dim()];
            let (sup, _) = oracle::grid_sup(&g, &bounds, cfg.grid_coarse_step, cfg.grid_refine_rounds);
            grid.record((check.alpha_star.value - sup).abs());
        }
    }
    CriterionReport::new(7, vec![slack.finish(), recovery.finish(), identity.finish(), grid.finish()])
}

/// `u* = q/p − 1`, p-centered whenever `Σ q μ = 1`.
fn dual_point(fam: &PhiExponentialFamily, q: &[f64]) -> RandomVariable {
    RandomVariable::new(q.iter().zip(fam.base().values()).map(|(q, p)| q / p - 1.0).collect())
}

/// Weights with `Σ q μ = 1`, allowing negative entries.
fn signed_density(space: &SampleSpace, mut weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().zip(space.mu()).map(|(w, m)| w * m).sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    weights
}

/// Criterion 8: the nonparametric conjugate on densities and beyond.
pub fn nonparametric_conjugate(seed: u64) -> CriterionReport {
    let mut fx = Fixtures::new(group_seed(seed, 8));
    let opts = ConjugateOptions::default();
    let mut forward = Measure::count("(u*+1)p a density implies finite H_V, 100 fixtures");
    for i in 0..100 {
        let d = fx.deformation(i);
        let fam = fx.family(d);
        let n = fam.space().len();
        let mut q = fx.vector(n, 0.05, 1.0);
        if fx.uniform(0.0, 1.0) < 0.3 {
            let z = fx.index(0, n - 1);
            q[z] = 0.0;
        }
        let q = signed_density(fam.space(), q);
        let u_star = dual_point(&fam, &q);
        match conjugate::h_v(&fam, &u_star, &opts) {
            Ok(r) => forward.check(r.density_predicate && r.result.is_finite()),
            Err(e) => forward.fail(&e),
        }
    }

    let mut converse = Measure::count("separating statistics, min(u*+1) < 0: infinite with verified certificate");
    let mut candidates = 0usize;
    let mut non_separating = 0usize;
    for i in 0..50 {
        let d = fx.deformation(i);
        let fam = fx.family(d);
        let n = fam.space().len();
        let indicators = (0..n).map(|x| RandomVariable::indicator(n, x)).collect();
        let separating = fam.with_statistics(indicators).expect("indicator statistics");
        let mut q = fx.vector(n, 0.1, 1.0);
        let neg = fx.index(0, n - 1);
        q[neg] = -fx.uniform(0.05, 0.5);
        let q = signed_density(fam.space(), q);
        let u_star = dual_point(&fam, &q);
        match conjugate::h_v(&separating, &u_star, &opts) {
            Ok(r) => {
                let verified = !r.density_predicate
                    && r.result.status == ConjugateStatus::InfiniteOutside
                    && r.result.certificate.as_ref().is_some_and(|c| c.verify(separating.polytope(), &r.eta, 1e-9));
                converse.check(verified);
            }
            Err(e) => converse.fail(&e),
        }
        // the same u* against the original, possibly non-separating statistics
        if fam.polytope().vertices().len() < n || fam.dim() + 1 < n {
            non_separating += 1;
            if let Ok(r) = conjugate::h_v(&fam, &u_star, &opts) {
                if r.result.is_finite() {
                    candidates += 1;
                }
            }
        }
    }
    converse
        .note(format!("{candidates} of {non_separating} non-separating fixtures stay finite with a negative (u*+1)p"));

    let mut stationarity = Measure::at_most("h_full stationarity |escort(u_hat) - (u*+1)p|", 1e-7);
    for i in 0..50 {
        let d = fx.deformation(i);
        let fam = fx.family(d);
        let q = fx.positive_density(fam.space());
        let u_star = dual_point(&fam, q.values());
        match conjugate::h_full(&fam, &u_star, &opts) {
            Ok(r) => match r.stationarity_residual {
                Some(res) => stationarity.record(res),
                None => stationarity.fail(&Error::numerical("maximum not attained", f64::NAN)),
            },
            Err(e) => stationarity.fail(&e),
        }
    }
    CriterionReport::new(8, vec![forward.finish(), converse.finish(), stationarity.finish()])
}

/// Criterion 9: LP membership against the exhaustive λ-grid.
pub fn polytope_lp(seed: u64) -> CriterionReport {
    let mut fx = Fixtures::new(group_seed(seed, 9));
    let step = OracleConfig::default().membership_step;
    let mut agree = Measure::count("LP membership agrees with the simplex-grid oracle, 200 queries");
    let mut truth = Measure::count("LP membership agrees with the construction");
    let mut weights = Measure::at_most("member weights reproduce eta", 1e-9);
    let mut separators = Measure::count("separation certificates verify");
    let mut vertices = Measure::count("relative interior excludes extreme points");
    let mut centroid = Measure::count("relative interior contains the vertex centroid");
    for _ in 0..40 {
        let n = fx.index(2, 4);
        let m = fx.index(1, 3);
        let points: Vec<Vec<f64>> = (0..n).map(|_| fx.vector(m, -1.0, 1.0)).collect();
        let poly = MarginalPolytope::from_points(points.clone()).expect("random points");
        for _ in 0..5 {
            let lambda = fx.simplex_weights(n);
            let mut eta: Vec<f64> = (0..m).map(|k| points.iter().zip(&lambda).map(|(p, l)| p[k] * l).sum()).collect();
            let outside = fx.uniform(0.0, 1.0) < 0.5;
            if outside {
                let a = fx.direction(m);
                let support = points.iter().map(|p| dot(&a, p)).fold(f64::NEG_INFINITY, f64::max);
                let shift = support - dot(&a, &eta) + fx.uniform(0.1, 0.5);
                for (e, ak) in eta.iter_mut().zip(&a) {
                    *e += shift * ak;
                }
            }
            let oracle_member = oracle::simplex_grid_member(&points, &eta, step);
            match poly.contains(&eta) {
                Ok(cert) => {
                    agree.check(cert.is_member() == oracle_member);
                    truth.check(cert.is_member() != outside);
                    if let Some(w) = cert.weights() {
                        let sum: f64 = w.iter().sum();
                        let negative = w.iter().fold(0.0f64, |acc, x| acc.max(-x));
                        weights.record(poly.weights_residual(w, &eta).max((sum - 1.0).abs()).max(negative));
                    }
                    if let Some(s) = cert.separator() {
                        separators.check(s.verify(&poly, &eta, 1e-9));
                    }
                }
                Err(e) => agree.fail(&e),
            }
        }
        if poly.dimension() > 0 {
            for (i, v) in poly.vertices().iter().enumerate() {
                let others: Vec<Vec<f64>> =
                    poly.vertices().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| w.clone()).collect();
                let extreme = match MarginalPolytope::from_points(others).and_then(|o| o.contains(v)) {
                    Ok(c) => !c.is_member(),
                    Err(_) => true,
                };
                if !extreme {
                    continue;
                }
                match poly.relative_interior_contains(v) {
                    Ok(r) => vertices.check(!r.inside),
                    Err(e) => vertices.fail(&e),
                }
            }
            let k = poly.vertices().len() as f64;
            let c: Vec<f64> = (0..m).map(|j| poly.vertices().iter().map(|v| v[j]).sum::<f64>() / k).collect();
            match poly.relative_interior_contains(&c) {
                Ok(r) => centroid.check(r.inside),
                Err(e) => centroid.fail(&e),
            }
        }
    }
    CriterionReport::new(
        9,
        vec![
            agree.finish(),
            truth.finish(),
            weights.finish(),
            separators.finish(),
            vertices.finish(),
            centroid.finish(),
        ],
    )
}

/// Runs one group by name or number (`"3"` or `"normalization"`).
pub fn run_group(name: &str, seed: u64) -> Option<CriterionReport> {
    let id = match name.parse::<usize>() {
        Ok(i) if (1..=GROUPS.len()).contains(&i) => i,
        _ => GROUPS.iter().position(|g| *g == name)? + 1,
    };
    let f: fn(u64) -> CriterionReport = match id {
        1 => deformation_calculus,
        2 => rate_identity,
        3 => normalization,
        4 => escort_derivative,
        5 => second_derivative,
        6 => conjugate_finiteness,
        7 => legendre,
        8 => nonparametric_conjugate,
        _ => polytope_lp,
    };
    Some(f(seed))
}

/// Runs the selected groups (all when `groups` is empty) on separate
/// threads and reports them in criterion order.
pub fn run_suite(seed: u64, groups: &[String]) -> Result<SuiteReport, Error> {
    let selected: Vec<String> =
        if groups.is_empty() { GROUPS.iter().map(|g| g.to_string()).collect() } else { groups.to_vec() };
    for g in &selected {
        let known = GROUPS.contains(&g.as_str()) || g.parse::<usize>().is_ok_and(|i| (1..=GROUPS.len()).contains(&i));
        if !known {
            return Err(Error::invalid(
                "group",
                format!("unknown check group {g:?}; expected one of {}", GROUPS.join(", ")),
            ));
        }
    }
    let mut criteria: Vec<CriterionReport> = std::thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|g| s.spawn(move || run_group(g, seed))).collect();
        handles.into_iter().filter_map(|h| h.join().expect("check group panicked")).collect()
    });
    criteria.sort_by_key(|c| c.id);
    criteria.dedup_by_key(|c| c.id);
    Ok(SuiteReport { seed, passed: criteria.iter().all(|c| c.passed), criteria })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        let mut a = Fixtures::new(7);
        let mut b = Fixtures::new(7);
        assert_eq!(a.vector(5, -1.0, 1.0), b.vector(5, -1.0, 1.0));
        let w = a.simplex_weights(4);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let fam = a.full_rank_family(Deformation::classical());
        assert!(fam.space().len() > fam.dim());
    }

    #[test]
    fn measure_relations() {
        let mut m = Measure::at_most("x", 1.0);
        m.record(0.5);
        assert!(m.finish().passed);
        let mut m = Measure::above("x", 0.0);
        m.record(1.0);
        m.record(0.0);
        assert!(!m.finish().passed);
        let m = Measure::count("x");
        assert!(!m.finish().passed, "no cases must not pass");
        let mut m = Measure::count("x");
        m.check(true);
        m.check(false);
        let out = m.finish();
        assert!(!out.passed);
        assert_eq!(out.worst, 1.0);
    }

    #[test]
    fn unknown_group_is_rejected() {
        assert!(run_suite(1, &["nope".into()]).is_err());
        assert!(run_group("0", 1).is_none());
    }
}
