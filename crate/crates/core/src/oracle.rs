//! Brute-force reference computations.
//!
//! Everything here is deliberately slow and simple: adaptive Simpson
//! quadrature, bisection, central differences, exhaustive grids. None of it
//! calls into the solvers it is used to check; deformations are described to
//! the oracles only through their φ function.
//!
//! [`derived_values`] evaluates the reference values that the test suite
//! compares against, and `fixtures/derived_values.json` is the committed
//! output of that function.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

/// Default fixture seed; `DEFEXP_SEED` overrides it.
pub const DEFAULT_SEED: u64 = 0x00de_fe4a;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub fd_step: f64,
    /// Step for Hessians, where a smaller step amplifies rounding noise.
    pub fd_hessian_step: f64,
    /// `grid_sup` searches `[-grid_box, grid_box]^m`.
    pub grid_box: f64,
    pub grid_coarse_step: f64,
    pub grid_refine_rounds: usize,
    /// λ-grid spacing of `simplex_grid_member`.
    pub membership_step: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            fd_step: 1e-5,
            fd_hessian_step: 1e-3,
            grid_box: 8.0,
            grid_coarse_step: 0.1,
            grid_refine_rounds: 3,
            membership_step: 0.01,
            seed: DEFAULT_SEED,
        }
    }
}

impl OracleConfig {
    /// The defaults, with the seed taken from `DEFEXP_SEED` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(seed) = std::env::var("DEFEXP_SEED").ok().and_then(|s| s.trim().parse().ok()) {
            cfg.seed = seed;
        }
        cfg
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// A deformation known to the oracles only through φ. ln_φ comes from
/// quadrature and exp_φ from bisection on that quadrature.
pub struct QuadratureDeformation {
    phi: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    tol: f64,
}

impl QuadratureDeformation {
    pub fn new(phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { phi: Box::new(phi), tol: 1e-13 }
    }

    pub fn classical() -> Self {
        Self::new(|v| v)
    }

    /// φ(v) = v / cosh(κ ln v).
    pub fn kaniadakis(kappa: f64) -> Self {
        Self::new(move |v: f64| v / (kappa * v.ln()).cosh())
    }

    pub fn phi(&self, v: f64) -> f64 {
        (self.phi)(v)
    }

    /// `∫₁^v dy/φ(y)`, integrated in `t = ln y` where the integrand
    /// `e^t / φ(e^t)` is smooth for the deformations of interest.
    pub fn ln(&self, v: f64) -> f64 {
        self.ln_of_log(v.ln())
    }

    fn ln_of_log(&self, t: f64) -> f64 {
        let integrand = |s: f64| {
            let y = s.exp();
            y / self.phi(y)
        };
        adaptive_simpson(&integrand, 0.0, t, self.tol)
    }

    /// exp_φ(u) by bisection on `t ↦ ln_φ(e^t)`.
    pub fn exp(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 1.0;
        }
        let mut lo = 0.0f64;
        let mut hi = 0.0f64;
        let mut width = 1.0;
        if u > 0.0 {
            while self.ln_of_log(hi) < u {
                lo = hi;
                hi += width;
                width *= 2.0;
            }
        } else {
            while self.ln_of_log(lo) > u {
                hi = lo;
                lo -= width;
                width *= 2.0;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.ln_of_log(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// exp_φ′(u) = φ(exp_φ(u)).
    pub fn exp_d1(&self, u: f64) -> f64 {
        self.phi(self.exp(u))
    }
}

/// The c with `Σ weights·exp(w − c) = 1`, by bisection on `[min w, max w]`
/// down to a bracket width of 1e-14 (relative to the bracket scale).
pub fn bisect_normalizer(exp: &dyn Fn(f64) -> f64, w: &[f64], weights: &[f64]) -> f64 {
    let total = |c: f64| w.iter().zip(weights).map(|(x, p)| exp(x - c) * p).sum::<f64>();
    let mut lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = 1e-14 * (1.0 + lo.abs().max(hi.abs()));
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if total(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Central difference of a scalar function of one variable.
pub fn fd_derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central second difference.
pub fn fd_second_derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Central-difference gradient.
pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let up = f(&y);
            y[i] = x[i] - h;
            let down = f(&y);
            y[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Hessian: the three-point rule on the diagonal and the
/// four-point rule off it.
pub fn fd_hessian(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let at = |di: Option<(usize, f64)>, dj: Option<(usize, f64)>| {
        let mut y = x.to_vec();
        for (i, s) in [di, dj].into_iter().flatten() {
            y[i] += s;
        }
        f(&y)
    };
    let f0 = f(x);
    let mut hess = vec![vec![0.0; n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        hess[i][i] = (at(Some((i, h)), None) - 2.0 * f0 + at(Some((i, -h)), None)) / (h * h);
        for j in 0..i {
            let v =
                (at(Some((i, h)), Some((j, h))) - at(Some((i, h)), Some((j, -h))) - at(Some((i, -h)), Some((j, h)))
                    + at(Some((i, -h)), Some((j, -h))))
                    / (4.0 * h * h);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    hess
}

/// Maximizes `g` over the box by a coarse grid followed by `refine_rounds`
/// rounds of 10× refinement in a window of one coarse step around the
/// incumbent. Returns `(value, argmax)`.
pub fn grid_sup(
    g: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    coarse_step: f64,
    refine_rounds: usize,
) -> (f64, Vec<f64>) {
    let scan = |bounds: &[(f64, f64)], step: f64| -> (f64, Vec<f64>) {
        let counts: Vec<usize> =
            bounds.iter().map(|(lo, hi)| ((hi - lo) / step).round().max(0.0) as usize + 1).collect();
        let mut idx = vec![0usize; bounds.len()];
        let mut best = (f64::NEG_INFINITY, bounds.iter().map(|b| b.0).collect::<Vec<_>>());
        let mut point = vec![0.0; bounds.len()];
        loop {
            for (k, (lo, hi)) in bounds.iter().enumerate() {
                point[k] = (lo + idx[k] as f64 * step).min(*hi);
            }
            let v = g(&point);
            if v > best.0 {
                best = (v, point.clone());
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return best;
                }
                idx[k] += 1;
                if idx[k] < counts[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    };
    let mut step = coarse_step;
    let mut best = scan(bounds, step);
    for _ in 0..refine_rounds {
        let fine = step / 10.0;
        // re-centre while the incumbent sits on an interior window edge, so a
        // narrow ridge is followed rather than cut off
        for _ in 0..100 {
            let local: Vec<(f64, f64)> =
                best.1.iter().zip(bounds).map(|(c, (lo, hi))| ((c - step).max(*lo), (c + step).min(*hi))).collect();
            let candidate = scan(&local, fine);
            let improved = candidate.0 > best.0;
            if candidate.0 >= best.0 {
                best = candidate;
            }
            let on_edge = best
                .1
                .iter()
                .zip(&local)
                .zip(bounds)
                .any(|((c, (wlo, whi)), (lo, hi))| (*c <= *wlo && *wlo > *lo) || (*c >= *whi && *whi < *hi));
            if !(improved && on_edge) {
                break;
            }
        }
        step = fine;
    }
    best
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Smallest distance from `eta` to a grid combination `Σ λ_i v_i` with
/// `λ_i ∈ {0, step, 2 step, …}` and `Σ λ_i = 1`.
pub fn simplex_grid_distance(vertices: &[Vec<f64>], eta: &[f64], step: f64) -> f64 {
    // levels[k] holds Σ_{i<k} λ_i v_i for the current prefix
    fn walk(
        vertices: &[Vec<f64>],
        eta: &[f64],
        k: usize,
        left: usize,
        total: usize,
        levels: &mut [Vec<f64>],
        best: &mut f64,
    ) {
        let n = vertices.len();
        if k == n - 1 {
            let lam = left as f64 / total as f64;
            let d2: f64 =
                levels[k].iter().zip(&vertices[k]).zip(eta).map(|((a, v), e)| (a + lam * v - e).powi(2)).sum();
            *best = best.min(d2.sqrt());
            return;
        }
        for c in 0..=left {
            let lam = c as f64 / total as f64;
            let (done, rest) = levels.split_at_mut(k + 1);
            for ((next, a), v) in rest[0].iter_mut().zip(&done[k]).zip(&vertices[k]) {
                *next = a + lam * v;
            }
            walk(vertices, eta, k + 1, left - c, total, levels, best);
        }
    }
    assert!(!vertices.is_empty(), "simplex_grid_distance needs at least one vertex");
    let total = (1.0 / step).round().max(1.0) as usize;
    let mut best = f64::INFINITY;
    let mut levels = vec![vec![0.0; eta.len()]; vertices.len() + 1];
    walk(vertices, eta, 0, total, total, &mut levels, &mut best);
    best
}

/// The resolution of the λ-grid: every point of the hull lies within this
/// distance of some grid combination.
pub fn simplex_grid_resolution(vertices: &[Vec<f64>], step: f64) -> f64 {
    let dim = vertices[0].len();
    let n = vertices.len() as f64;
    let centroid: Vec<f64> = (0..dim).map(|k| vertices.iter().map(|v| v[k]).sum::<f64>() / n).collect();
    let radius = vertices.iter().map(|v| distance(v, &centroid)).fold(0.0, f64::max);
    n * step * radius
}

/// Membership of `eta` in `conv(vertices)` decided on a λ-grid, for up to
/// four vertices. Points within [`simplex_grid_resolution`] of a grid
/// combination count as members.
pub fn simplex_grid_member(vertices: &[Vec<f64>], eta: &[f64], step: f64) -> bool {
    assert!(vertices.len() <= 4, "simplex_grid_member is exhaustive and limited to 4 vertices");
    simplex_grid_distance(vertices, eta, step) <= simplex_grid_resolution(vertices, step)
}

/// One reference value with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedValue {
    pub inputs: Value,
    pub value: Value,
    pub oracle: String,
    pub tolerance: f64,
}

fn entry(inputs: Value, value: Value, oracle: &str, tolerance: f64) -> DerivedValue {
    DerivedValue { inputs, value, oracle: oracle.to_string(), tolerance }
}

fn expectation(p: &[f64], mu: &[f64], u: &[f64]) -> f64 {
    p.iter().zip(mu).zip(u).map(|((p, m), u)| p * m * u).sum()
}

/// Evaluates every reference value used by the test suite.
pub fn derived_values() -> BTreeMap<String, DerivedValue> {
    let mut out = BTreeMap::new();
    let classical = QuadratureDeformation::classical();
    let kappa = QuadratureDeformation::kaniadakis(0.5);
    let e2 = 2f64.exp();
    let fd = OracleConfig::default();

    // deformation calculus at κ = 0.5
    let ln4 = kappa.ln(4.0);
    out.insert(
        "deform.ln_phi.kaniadakis".into(),
        entry(json!({"kappa": 0.5, "v": 4.0}), json!(ln4), "adaptive Simpson quadrature of 1/phi", 1e-10),
    );
    out.insert(
        "oracle.quad_ln_phi.classical".into(),
        entry(
            json!({"v": std::f64::consts::E}),
            json!(classical.ln(std::f64::consts::E)),
            "adaptive Simpson quadrature of 1/phi",
            1e-10,
        ),
    );
    for (id, u) in [("deform.exp_phi.kaniadakis.u1", 1.0), ("deform.exp_phi.kaniadakis.u1_5", 1.5)] {
        out.insert(
            id.into(),
            entry(json!({"kappa": 0.5, "u": u}), json!(kappa.exp(u)), "bisection on the quadrature logarithm", 1e-10),
        );
    }
    let log_exp = |u: f64| kappa.exp(u).ln();
    out.insert(
        "deform.psi.kaniadakis".into(),
        entry(
            json!({"kappa": 0.5, "u": 1.5}),
            json!(fd_derivative(&log_exp, 1.5, 1e-4)),
            "central difference of ln exp_phi, exp_phi by inversion",
            1e-7,
        ),
    );
    let psi_at_ln4 = fd_derivative(&log_exp, ln4, 1e-4);
    out.insert(
        "deform.phi.kaniadakis".into(),
        entry(
            json!({"kappa": 0.5, "v": 4.0}),
            json!(4.0 * psi_at_ln4),
            "v * psi(ln_phi v) with ln_phi by quadrature and psi by central difference",
            1e-7,
        ),
    );
    let exp = |u: f64| kappa.exp(u);
    for (id, u) in
        [("deform.exp_phi_derivatives.kaniadakis.u0", 0.0), ("deform.exp_phi_derivatives.kaniadakis.u1_5", 1.5)]
    {
        out.insert(
            id.into(),
            entry(
                json!({"kappa": 0.5, "u": u}),
                json!({"d1": fd_derivative(&exp, u, 1e-4), "d2": fd_second_derivative(&exp, u, 1e-3)}),
                "central differences of exp_phi by inversion",
                1e-5,
            ),
        );
    }
    let psi = |u: f64| (u * u + u).exp();
    let up = adaptive_simpson(&psi, 0.0, 1.0, 1e-13);
    let down = adaptive_simpson(&psi, 0.0, -1.0, 1e-13);
    out.insert(
        "deform.self_dual.asymmetric_psi".into(),
        entry(
            json!({"psi": "exp(u^2 + u)", "u": 1.0}),
            json!({"product": (up + down).exp()}),
            "exp_phi(1) exp_phi(-1) from Simpson integrals of psi",
            1e-9,
        ),
    );

    // state space on three points
    let mu3 = [1.0, 1.0, 1.0];
    let p3 = [0.2, 0.3, 0.5];
    let u3 = [1.0, 2.0, 3.0];
    let mean = expectation(&p3, &mu3, &u3);
    let centered: Vec<f64> = u3.iter().map(|u| u - mean).collect();
    let sq: Vec<f64> = centered.iter().map(|c| c * c).collect();
    let cov = expectation(&p3, &mu3, &sq);
    let target = [1.0, 0.0, 0.0];
    let tb: Vec<f64> = target.iter().zip(&centered).map(|(t, b)| t * b).collect();
    let three_point = json!({"mu": mu3, "p": p3, "u": u3});
    out.insert("state_space.expectation".into(), entry(three_point.clone(), json!(mean), "direct summation", 1e-12));
    out.insert("state_space.center".into(), entry(three_point.clone(), json!(centered), "direct summation", 1e-12));
    out.insert("state_space.covariance".into(), entry(three_point.clone(), json!(cov), "direct summation", 1e-12));
    out.insert(
        "state_space.projection".into(),
        entry(
            json!({"mu": mu3, "p": p3, "basis": [centered], "target": target}),
            json!(expectation(&p3, &mu3, &tb) / cov),
            "Gram solve by direct summation",
            1e-12,
        ),
    );

    // two-point family: mu = (1/2, 1/2), p = (1, 1), H = (0, 1)
    let w2 = [0.5, 0.5];
    let two_point = |name: &str, theta: f64| json!({"deformation": name, "mu": w2, "p": [1.0, 1.0], "H": [[0.0, 1.0]], "theta": [theta]});
    let alpha_c = ((1.0 + e2) / 2.0).ln();
    out.insert(
        "family.alpha.classical".into(),
        entry(two_point("classical", 2.0), json!(alpha_c), "closed-form log-partition", 1e-10),
    );
    let kexp = |x: f64| kappa.exp(x);
    let alpha_k = bisect_normalizer(&kexp, &[0.0, 2.0], &w2);
    out.insert(
        "family.alpha.kaniadakis".into(),
        entry(two_point("kaniadakis-0.5", 2.0), json!(alpha_k), "bisection to 1e-14 with exp_phi by inversion", 1e-10),
    );
    out.insert(
        "family.density.classical".into(),
        entry(two_point("classical", 2.0), json!([2.0 / (1.0 + e2), 2.0 * e2 / (1.0 + e2)]), "Gibbs weights", 1e-12),
    );
    out.insert(
        "family.k.classical".into(),
        entry(two_point("classical", 2.0), json!(alpha_c - 1.0), "closed-form log-partition minus theta E_p[H]", 1e-10),
    );
    let raw: Vec<f64> = [0.0, 2.0].iter().map(|x| kappa.exp_d1(x - alpha_k)).collect();
    let z = raw[0] * 0.5 + raw[1] * 0.5;
    out.insert(
        "family.escort.kaniadakis".into(),
        entry(
            two_point("kaniadakis-0.5", 2.0),
            json!([raw[0] / z, raw[1] / z]),
            "pointwise phi(exp_phi(theta H - alpha)) p, normalized",
            1e-9,
        ),
    );
    out.insert(
        "family.dk.classical".into(),
        entry(
            two_point("classical", 2.0),
            json!(e2 / (1.0 + e2) - 0.5),
            "mean of the Gibbs density minus E_p[H]",
            1e-12,
        ),
    );
    out.insert(
        "family.divergence.kaniadakis".into(),
        entry(
            two_point("kaniadakis-0.5", 2.0),
            json!(alpha_k - 1.0),
            "K = alpha - theta E_p[H] with alpha by bisection",
            1e-9,
        ),
    );
    let alpha_fn = |t: &[f64]| (0.5 + 0.5 * t[0].exp()).ln();
    out.insert(
        "family.grad_alpha.classical".into(),
        entry(
            two_point("classical", 2.0),
            json!(fd_gradient(&alpha_fn, &[2.0], fd.fd_step)),
            "central difference of the log-partition",
            1e-6,
        ),
    );

    // second derivative at u = 0 on three points
    let v = [1.0, -2.0, 0.5];
    let w = [0.0, 1.0, -1.0];
    let pmu: Vec<f64> = p3.iter().zip(&mu3).map(|(p, m)| p * m).collect();
    let k_fn = |t: &[f64]| {
        let u: Vec<f64> = (0..3).map(|i| t[0] * v[i] + t[1] * w[i]).collect();
        let c = bisect_normalizer(&kexp, &u, &pmu);
        // u is centered only at t = 0; K uses the centered variable
        c - expectation(&p3, &mu3, &u)
    };
    let hess = fd_hessian(&k_fn, &[0.0, 0.0], fd.fd_hessian_step);
    out.insert(
        "family.d2k.kaniadakis.origin".into(),
        entry(
            json!({"deformation": "kaniadakis-0.5", "mu": mu3, "p": p3, "v": v, "w": w}),
            json!(hess[0][1]),
            "finite-difference Hessian of K with the normalizer by bisection",
            1e-5,
        ),
    );

    // recover_u on three points
    let q3 = [0.5, 0.25, 0.25];
    let lr: Vec<f64> = q3.iter().zip(&p3).map(|(q, p)| kappa.ln(q / p)).collect();
    let lm = expectation(&p3, &mu3, &lr);
    out.insert(
        "family.recover_u.kaniadakis".into(),
        entry(
            json!({"deformation": "kaniadakis-0.5", "mu": mu3, "p": p3, "q": q3}),
            json!(lr.iter().map(|l| l - lm).collect::<Vec<_>>()),
            "quadrature ln_phi of the ratio, centered",
            1e-10,
        ),
    );

    // polytope
    let general: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.5]];
    let d1 = [general[1][0] - general[0][0], general[1][1] - general[0][1]];
    let rank = general[1..]
        .iter()
        .map(|g| {
            let d2 = [g[0] - general[0][0], g[1] - general[0][1]];
            d1[0] * d2[1] - d1[1] * d2[0]
        })
        .any(|det| det.abs() > 1e-12) as usize
        + 1;
    out.insert(
        "polytope.dimension.general_position".into(),
        entry(json!({"points": general}), json!(rank), "2x2 determinants of differences", 0.0),
    );
    out.insert(
        "polytope.separation.segment".into(),
        entry(
            json!({"points": [[1.0], [2.0], [3.0]], "eta": [3.5]}),
            json!({"a": [2.0], "a0": 6.0}),
            "hand solve of a H <= a0 tight at 3, a eta = a0 + 1",
            1e-9,
        ),
    );
    let square = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
    out.insert(
        "polytope.interior.square_centroid".into(),
        entry(
            json!({"points": square, "eta": [0.5, 0.5]}),
            json!(0.25),
            "symmetric LP: equal weights maximize the smallest weight",
            1e-9,
        ),
    );
    let collinear = [[0.0, 0.0], [1.0, 2.0], [2.0, 4.0]];
    out.insert(
        "polytope.dimension.collinear".into(),
        entry(json!({"points": collinear}), json!(1), "2x2 determinant of differences", 0.0),
    );

    // conjugates on the two-point family
    let eta_c = e2 / (1.0 + e2);
    let gc = |t: &[f64]| t[0] * eta_c - (0.5 + 0.5 * t[0].exp()).ln();
    let (sup_c, arg_c) = grid_sup(&gc, &[(-fd.grid_box, fd.grid_box)], fd.grid_coarse_step, fd.grid_refine_rounds);
    out.insert(
        "conjugate.alpha_star.classical".into(),
        entry(
            json!({"deformation": "classical", "mu": w2, "p": [1.0, 1.0], "H": [[0.0, 1.0]], "eta": [eta_c]}),
            json!({"theta": 2.0, "value": 2.0 * eta_c - alpha_c, "grid_value": sup_c, "grid_argmax": arg_c}),
            "closed-form Legendre transform, confirmed by grid supremum",
            1e-9,
        ),
    );
    let eta_k = 0.3;
    let gk = |t: &[f64]| t[0] * eta_k - bisect_normalizer(&kexp, &[0.0, t[0]], &w2);
    let (sup_k, arg_k) = grid_sup(&gk, &[(-fd.grid_box, fd.grid_box)], 0.5, 5);
    out.insert(
        "conjugate.alpha_star.kaniadakis".into(),
        entry(
            json!({"deformation": "kaniadakis-0.5", "mu": w2, "p": [1.0, 1.0], "H": [[0.0, 1.0]], "eta": [eta_k]}),
            json!({"value": sup_k, "argmax": arg_k}),
            "grid supremum with the normalizer by bisection",
            1e-6,
        ),
    );
    // u* = q/p - 1 for q = p_theta at theta = 2
    let theta_q = 2.0;
    let qk: Vec<f64> = [0.0, theta_q].iter().map(|x| kappa.exp(x - alpha_k)).collect();
    let eta_q = 0.5 * qk[1];
    let gq = |t: &[f64]| t[0] * eta_q - bisect_normalizer(&kexp, &[0.0, t[0]], &w2);
    let (sup_q, _) = grid_sup(&gq, &[(-fd.grid_box, fd.grid_box)], 0.5, 5);
    out.insert(
        "conjugate.hv.kaniadakis".into(),
        entry(
            json!({"deformation": "kaniadakis-0.5", "mu": w2, "p": [1.0, 1.0], "H": [[0.0, 1.0]], "q_theta": [theta_q]}),
            json!({"eta": [eta_q], "u_star": [qk[0] - 1.0, qk[1] - 1.0], "value": sup_q}),
            "grid supremum of theta eta - alpha(theta), eta = E_q[H]",
            1e-6,
        ),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = adaptive_simpson(&|x: f64| x.cos(), 0.0, 1.0, 1e-13);
        assert!((v - 1f64.sin()).abs() < 1e-12);
        assert_eq!(adaptive_simpson(&|x: f64| x, 2.0, 2.0, 1e-12), 0.0);
        let r = adaptive_simpson(&|x: f64| x * x, 1.0, 0.0, 1e-13);
        assert!((r + 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn quadrature_deformation_examples() {
        let c = QuadratureDeformation::classical();
        assert_eq!(c.ln(1.0), 0.0);
        assert!((c.ln(std::f64::consts::E) - 1.0).abs() < 1e-10);
        let k = QuadratureDeformation::kaniadakis(0.5);
        assert!((k.ln(4.0) - 1.5).abs() < 1e-10);
        assert!((k.exp(1.5) - 4.0).abs() < 1e-10);
        assert!((k.exp(-1.5) - 0.25).abs() < 1e-11);
    }

    #[test]
    fn finite_differences() {
        let q = |x: &[f64]| 3.0 * x[0] * x[0] + x[0] * x[1] - 2.0 * x[1];
        let g = fd_gradient(&q, &[1.0, 2.0], 1e-5);
        assert!((g[0] - 8.0).abs() < 1e-8 && (g[1] + 1.0).abs() < 1e-8);
        let h = fd_hessian(&q, &[1.0, 2.0], 1e-3);
        assert!((h[0][0] - 6.0).abs() < 1e-6 && (h[0][1] - 1.0).abs() < 1e-6 && h[1][1].abs() < 1e-6);
        let c = |_: &[f64]| 4.0;
        assert_eq!(fd_gradient(&c, &[0.3], 1e-5), vec![0.0]);
    }

    #[test]
    fn grid_sup_examples() {
        let g = |x: &[f64]| -(x[0] - 1.234_56).powi(2) - 2.0 * (x[1] + 0.5).powi(2) + 3.0;
        let (v, arg) = grid_sup(&g, &[(-8.0, 8.0), (-8.0, 8.0)], 0.1, 3);
        assert!((v - 3.0).abs() < 1e-6);
        assert!((arg[0] - 1.234_56).abs() < 1e-3);
        let m = |x: &[f64]| x[0] + x[1];
        let (v, arg) = grid_sup(&m, &[(-1.0, 2.0), (0.0, 1.0)], 0.1, 3);
        assert_eq!(arg, vec![2.0, 1.0]);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_grid_examples() {
        let seg = vec![vec![1.0], vec![3.0]];
        assert!(simplex_grid_member(&seg, &[2.0], 0.01));
        assert!(!simplex_grid_member(&seg, &[3.5], 0.01));
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(simplex_grid_member(&tri, &[0.2, 0.3], 0.01));
        assert!(!simplex_grid_member(&tri, &[0.7, 0.7], 0.01));
    }

    #[test]
    fn normalizer_by_bisection() {
        let c = bisect_normalizer(&f64::exp, &[0.0, 2.0], &[0.5, 0.5]);
        assert!((c - ((1.0 + 2f64.exp()) / 2.0).ln()).abs() < 1e-13);
    }
}
