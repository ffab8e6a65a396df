//! Shape-preserving (PCHIP) cubic interpolation for tabulated rate functions.

use crate::error::{Error, Result};

/// Piecewise cubic Hermite interpolant with Fritsch–Butland slopes.
///
/// Outside the knot range the boundary values are held constant, so the
/// derivative there is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::ShapeMismatch { expected: knots.len(), found: values.len() });
        }
        if knots.len() < 2 {
            return Err(Error::invalid("u", "at least two knots are required"));
        }
        for (i, w) in knots.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::invalid(format!("u[{}]", i + 1), "knots must be strictly increasing"));
            }
        }
        if let Some(i) = knots.iter().chain(values.iter()).position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("[{i}]"), "non-finite table entry"));
        }
        let slopes = pchip_slopes(&knots, &values);
        Ok(Self { knots, values, slopes })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn locate(&self, x: f64) -> Option<usize> {
        let n = self.knots.len();
        if x <= self.knots[0] || x >= self.knots[n - 1] {
            return None;
        }
        let k = self.knots.partition_point(|&k| k <= x);
        Some(k - 1)
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = self.knots.len();
        match self.locate(x) {
            None if x <= self.knots[0] => self.values[0],
            None => self.values[n - 1],
            Some(k) => {
                let h = self.knots[k + 1] - self.knots[k];
                let t = (x - self.knots[k]) / h;
                let t2 = t * t;
                let t3 = t2 * t;
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                h00 * self.values[k]
                    + h10 * h * self.slopes[k]
                    + h01 * self.values[k + 1]
                    + h11 * h * self.slopes[k + 1]
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self.locate(x) {
            None => 0.0,
            Some(k) => {
                let h = self.knots[k + 1] - self.knots[k];
                let t = (x - self.knots[k]) / h;
                let t2 = t * t;
                let d00 = (6.0 * t2 - 6.0 * t) / h;
                let d10 = 3.0 * t2 - 4.0 * t + 1.0;
                let d01 = (-6.0 * t2 + 6.0 * t) / h;
                let d11 = 3.0 * t2 - 2.0 * t;
                d00 * self.values[k] + d10 * self.slopes[k] + d01 * self.values[k + 1] + d11 * self.slopes[k + 1]
            }
        }
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_and_holds_boundaries() {
        let c = MonotoneCubic::new(vec![0.0, 1.0, 2.0, 4.0], vec![1.0, 0.5, 0.4, 0.1]).unwrap();
        for (x, y) in c.knots().iter().zip(c.values()) {
            assert!((c.value(*x) - y).abs() < 1e-15);
        }
        assert_eq!(c.value(-3.0), 1.0);
        assert_eq!(c.value(10.0), 0.1);
        assert_eq!(c.derivative(10.0), 0.0);
    }

    #[test]
    fn monotone_data_stays_monotone() {
        let c = MonotoneCubic::new(vec![0.0, 0.1, 0.2, 3.0, 3.1], vec![0.0, 0.0, 1.0, 1.0, 5.0]).unwrap();
        let mut prev = c.value(0.0);
        for i in 1..=310 {
            let v = c.value(i as f64 * 0.01);
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let c = MonotoneCubic::new(vec![-2.0, -1.0, 0.5, 2.0], vec![0.2, 0.6, 1.0, 0.3]).unwrap();
        for &x in &[-1.7, -0.3, 0.9, 1.8] {
            let h = 1e-6;
            let fd = (c.value(x + h) - c.value(x - h)) / (2.0 * h);
            assert!((fd - c.derivative(x)).abs() < 1e-7);
        }
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(MonotoneCubic::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0], vec![1.0]).is_err());
    }
}
