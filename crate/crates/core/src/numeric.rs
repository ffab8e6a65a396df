//! Shared scalar routines: adaptive Gauss–Kronrod quadrature and a
//! bracketed Newton solver for increasing functions.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    Segment { lo, hi, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Globally adaptive G7/K15 quadrature of `f` over `[lo, hi]` (either order).
///
/// Stops once the summed error estimate is below `abs_tol`, or below the
/// round-off floor `64 ε |I|` when that is larger.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    if hi < lo {
        return integrate(f, hi, lo, abs_tol, max_subdivisions).map(|v| -v);
    }
    let mut segments = vec![gk15(&f, lo, hi)];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature { lo, hi, estimate: f64::INFINITY });
        }
        let floor = 64.0 * f64::EPSILON * total.abs();
        if error <= abs_tol.max(floor) {
            return Ok(total);
        }
        if segments.len() >= max_subdivisions {
            return Err(Error::Quadrature { lo, hi, estimate: error });
        }
        let (worst, _) =
            segments.iter().enumerate().max_by(|a, b| a.1.error.total_cmp(&b.1.error)).expect("segments is nonempty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // interval exhausted in floating point
            return Err(Error::Quadrature { lo, hi, estimate: error });
        }
        segments.push(gk15(&f, seg.lo, mid));
        segments.push(gk15(&f, mid, seg.hi));
    }
}

/// Settings for [`solve_increasing`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct RootSettings {
    /// Accept `x` once `|g(x)| <= residual_tol`.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Relative bracket width at which bisection gives up.
    pub min_width: f64,
}

/// Solves `g(x) = 0` for a nondecreasing `g` with `g(lo) <= 0 <= g(hi)`.
///
/// `eval` returns `(g(x), g'(x))`. Newton steps that leave the current
/// bracket, or that are not finite, are replaced by bisection. Once the
/// residual tolerance is met one more Newton step is tried and kept if it
/// does not increase the residual. When `max_iter` is exhausted the bracket
/// is bisected down to `min_width` before giving up.
pub(crate) fn solve_increasing<F>(
    mut eval: F,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    settings: RootSettings,
    context: &str,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if hi < lo {
        std::mem::swap(&mut lo, &mut hi);
    }
    if lo == hi {
        return Ok(lo);
    }
    let mut x = start.clamp(lo, hi);
    let mut best = (f64::INFINITY, x);
    let width_floor = |lo: f64, hi: f64| settings.min_width * lo.abs().max(hi.abs()).max(1.0);

    let mut iter = 0usize;
    loop {
        let (g, dg) = eval(x)?;
        if g.is_nan() {
            return Err(Error::numerical(format!("{context}: NaN residual"), f64::NAN));
        }
        if g.abs() < best.0 {
            best = (g.abs(), x);
        }
        if g.abs() <= settings.residual_tol {
            return Ok(polish(&mut eval, x, g, dg, lo, hi));
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= width_floor(lo, hi) {
            break;
        }
        iter += 1;
        let newton = x - g / dg;
        x = if iter <= settings.max_iter && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if iter > settings.max_iter + 4096 {
            break;
        }
    }
    Err(Error::NumericalFailure { context: context.to_string(), residual: best.0, best: Some(vec![best.1]) })
}

fn polish<F>(eval: &mut F, x: f64, g: f64, dg: f64, lo: f64, hi: f64) -> f64
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if g == 0.0 || !(dg > 0.0) {
        return x;
    }
    let next = x - g / dg;
    if !next.is_finite() || next < lo || next > hi {
        return x;
    }
    match eval(next) {
        Ok((g_next, _)) if g_next.abs() <= g.abs() => next,
        _ => x,
    }
}

/// Serializes non-finite floats as the strings `"inf"`, `"-inf"` and `"nan"`
/// instead of JSON `null`.
pub(crate) fn serialize_extended<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-14, 50).unwrap();
        assert!((v - 8.0).abs() < 1e-13);
        let w = integrate(|x| 3.0 * x * x, 2.0, 0.0, 1e-14, 50).unwrap();
        assert!((w + 8.0).abs() < 1e-13);
    }

    #[test]
    fn integrates_peaked_function() {
        // ∫ 1/(1+100x²) on [-1,1] = 2 atan(10)/10
        let v = integrate(|x| 1.0 / (1.0 + 100.0 * x * x), -1.0, 1.0, 1e-12, 200).unwrap();
        assert!((v - 0.2 * 10f64.atan()).abs() < 1e-12);
    }

    #[test]
    fn quadrature_reports_budget_exhaustion() {
        let err = integrate(|x: f64| x.abs().sqrt().recip(), -1.0, 1.0, 1e-14, 4).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn newton_finds_cube_root() {
        let s = RootSettings { residual_tol: 1e-14, max_iter: 50, min_width: 1e-15 };
        let r = solve_increasing(|x| Ok((x * x * x - 2.0, 3.0 * x * x)), 0.0, 2.0, 1.0, s, "cbrt").unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn newton_survives_overflowing_residuals() {
        let s = RootSettings { residual_tol: 1e-12, max_iter: 100, min_width: 1e-15 };
        // g(x) = 1 - exp(800 - x) overflows to -inf for small x
        let r = solve_increasing(
            |x| Ok((1.0 - (800.0 - x).exp(), (800.0 - x).exp())),
            0.0,
            1600.0,
            800.0 - 700.0,
            s,
            "shifted",
        )
        .unwrap();
        assert!((r - 800.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_bracket_returns_endpoint() {
        let s = RootSettings { residual_tol: 1e-12, max_iter: 10, min_width: 1e-15 };
        let r = solve_increasing(|_| Ok((0.0, 1.0)), 0.7, 0.7, 0.0, s, "flat").unwrap();
        assert_eq!(r, 0.7);
    }
}
