//! The marginal polytope (convex support) `M = conv{H(x) : x ∈ X}`.
//!
//! Points are first reduced to coordinates in the affine hull of the
//! statistic images, so rank-deficient statistics are handled uniformly and
//! "interior" means relative interior. Membership and relative-interior
//! queries are small dense LPs solved by [`simplex`]; a failed membership
//! query returns a separating affine functional normalized so that
//! `a·H(x) ≤ a₀` for every x and `a·η = a₀ + 1`.

mod simplex;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state_space::{RandomVariable, SampleSpace, RANK_TOL};
use simplex::LpOutcome;

/// Coordinates closer than this are merged into one vertex.
pub const DUPLICATE_TOL: f64 = 1e-12;

pub const DEFAULT_LP_TOL: f64 = 1e-9;

/// An affine functional `t ↦ a·t − a₀` with `a·H(x) ≤ a₀` on the polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCertificate {
    pub a: Vec<f64>,
    pub a0: f64,
}

impl SeparationCertificate {
    /// `a·v ≤ a₀ + tol` for every point and `a·η ≥ a₀ + 1 − tol`.
    pub fn verify(&self, polytope: &MarginalPolytope, eta: &[f64], tol: f64) -> bool {
        polytope.points.iter().all(|v| dot(&self.a, v) <= self.a0 + tol) && dot(&self.a, eta) >= self.a0 + 1.0 - tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MembershipCertificate {
    /// Convex weights over [`MarginalPolytope::vertices`].
    Member {
        weights: Vec<f64>,
    },
    Separated(SeparationCertificate),
}

impl MembershipCertificate {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipCertificate::Member { .. })
    }

    pub fn separator(&self) -> Option<&SeparationCertificate> {
        match self {
            MembershipCertificate::Separated(s) => Some(s),
            MembershipCertificate::Member { .. } => None,
        }
    }

    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            MembershipCertificate::Member { weights } => Some(weights),
            MembershipCertificate::Separated(_) => None,
        }
    }
}

/// Outcome of [`MarginalPolytope::relative_interior_contains`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteriorReport {
    pub inside: bool,
    /// Optimal `t` in `max t s.t. λ ≥ t`; `None` when η is not a member.
    pub slack: Option<f64>,
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalPolytope {
    points: Vec<Vec<f64>>,
    vertices: Vec<Vec<f64>>,
    vertex_point: Vec<usize>,
    base: Vec<f64>,
    basis: Vec<Vec<f64>>,
    reduced_vertices: Vec<Vec<f64>>,
    reduced_points: Vec<Vec<f64>>,
    scale: f64,
    lp_tol: f64,
}

impl MarginalPolytope {
    /// Builds the polytope of the statistics `H₁..H_m` over `space`.
    pub fn build(statistics: &[RandomVariable], space: &SampleSpace) -> Result<Self> {
        if statistics.is_empty() {
            return Err(Error::invalid("statistics", "at least one statistic is required"));
        }
        for (j, h) in statistics.iter().enumerate() {
            if h.len() != space.len() {
                return Err(Error::invalid(
                    format!("statistics[{j}]"),
                    format!("expected {} values, found {}", space.len(), h.len()),
                ));
            }
        }
        let points = (0..space.len()).map(|x| statistics.iter().map(|h| h.values()[x]).collect()).collect();
        Self::from_points(points)
    }

    /// Builds the convex hull of explicit points in ℝ^m.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("points", "at least one point is required"));
        };
        let m = first.len();
        if m == 0 {
            return Err(Error::invalid("points", "points must have at least one coordinate"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != m {
                return Err(Error::invalid(format!("points[{i}]"), format!("expected {m} coordinates")));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("points[{i}]"), "non-finite coordinate"));
            }
        }
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        let mut vertex_point = Vec::new();
        for (i, p) in points.iter().enumerate() {
            let dup = vertices.iter().any(|v| v.iter().zip(p).all(|(a, b)| (a - b).abs() <= DUPLICATE_TOL));
            if !dup {
                vertices.push(p.clone());
                vertex_point.push(i);
            }
        }
        let base = vertices[0].clone();
        let basis = affine_basis(&vertices, &base);
        let reduce = |p: &Vec<f64>| -> Vec<f64> {
            let diff: Vec<f64> = p.iter().zip(&base).map(|(a, b)| a - b).collect();
            basis.iter().map(|e| dot(e, &diff)).collect()
        };
        let reduced_vertices = vertices.iter().map(reduce).collect();
        let reduced_points = points.iter().map(reduce).collect();
        let scale = points.iter().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
        Ok(Self {
            points,
            vertices,
            vertex_point,
            base,
            basis,
            reduced_vertices,
            reduced_points,
            scale,
            lp_tol: DEFAULT_LP_TOL,
        })
    }

    pub fn with_lp_tol(mut self, lp_tol: f64) -> Self {
        self.lp_tol = lp_tol;
        self
    }

    pub fn lp_tol(&self) -> f64 {
        self.lp_tol
    }

    /// `H(x)` for every sample point, in sample order.
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Distinct points, in order of first occurrence.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Sample index of the first occurrence of each vertex.
    pub fn vertex_sample_indices(&self) -> &[usize] {
        &self.vertex_point
    }

    /// Affine-hull dimension d.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.base.len()
    }

    pub fn base_point(&self) -> &[f64] {
        &self.base
    }

    /// Orthonormal directions spanning the affine hull.
    pub fn hull_basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Reduced coordinates of each sample point's `H(x)`.
    pub fn reduced_points(&self) -> &[Vec<f64>] {
        &self.reduced_points
    }

    /// Reduced coordinates of every sample point, one random variable per
    /// hull direction.
    pub fn reduced_statistics(&self) -> Vec<RandomVariable> {
        (0..self.dimension()).map(|k| RandomVariable::new(self.reduced_points.iter().map(|p| p[k]).collect())).collect()
    }

    /// Spreads vertex weights onto sample points (first occurrence of each vertex).
    pub fn point_weights(&self, vertex_weights: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; self.points.len()];
        for (&i, &l) in self.vertex_point.iter().zip(vertex_weights) {
            w[i] = l;
        }
        w
    }

    fn hull_tol(&self, eta: &[f64]) -> f64 {
        let s = eta.iter().fold(self.scale, |s, v| s.max(v.abs()));
        self.lp_tol * s
    }

    /// Reduced coordinates together with the off-hull residual vector.
    fn split(&self, eta: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let diff: Vec<f64> = eta.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let xi: Vec<f64> = self.basis.iter().map(|e| dot(e, &diff)).collect();
        let mut resid = diff;
        for (e, c) in self.basis.iter().zip(&xi) {
            for (r, ek) in resid.iter_mut().zip(e) {
                *r -= c * ek;
            }
        }
        (xi, resid)
    }

    fn check_eta(&self, eta: &[f64]) -> Result<()> {
        if eta.len() != self.ambient_dimension() {
            return Err(Error::ShapeMismatch { expected: self.ambient_dimension(), found: eta.len() });
        }
        if let Some(i) = eta.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("eta[{i}]"), "non-finite coordinate"));
        }
        Ok(())
    }

    /// Coordinates of η in the affine hull; errors with the off-hull distance
    /// when η is farther than `lp_tol` from the hull.
    pub fn reduce_coordinates(&self, eta: &[f64]) -> Result<Vec<f64>> {
        self.check_eta(eta)?;
        let (xi, resid) = self.split(eta);
        let distance = norm(&resid);
        if distance > self.hull_tol(eta) {
            return Err(Error::OffHull { distance });
        }
        Ok(xi)
    }

    pub fn lift_coordinates(&self, xi: &[f64]) -> Result<Vec<f64>> {
        if xi.len() != self.dimension() {
            return Err(Error::ShapeMismatch { expected: self.dimension(), found: xi.len() });
        }
        let mut out = self.base.clone();
        for (e, c) in self.basis.iter().zip(xi) {
            for (o, ek) in out.iter_mut().zip(e) {
                *o += c * ek;
            }
        }
        Ok(out)
    }

    /// Lifts a reduced direction `ζ` to `Σ ζ_k e_k` without the base point.
    pub fn lift_direction(&self, zeta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dimension()];
        for (e, c) in self.basis.iter().zip(zeta) {
            for (o, ek) in out.iter_mut().zip(e) {
                *o += c * ek;
            }
        }
        out
    }

    /// Membership of η with a convex-weight or separation certificate.
    pub fn contains(&self, eta: &[f64]) -> Result<MembershipCertificate> {
        self.check_eta(eta)?;
        let (xi, resid) = self.split(eta);
        let distance = norm(&resid);
        if distance > self.hull_tol(eta) {
            let a: Vec<f64> = resid.iter().map(|r| r / (distance * distance)).collect();
            return self.normalized_separator(a, eta).map(MembershipCertificate::Separated);
        }
        let k = self.vertices.len();
        let d = self.dimension();
        let mut rows: Vec<Vec<f64>> = (0..d).map(|i| self.reduced_vertices.iter().map(|v| v[i]).collect()).collect();
        rows.push(vec![1.0; k]);
        let mut rhs = xi.clone();
        rhs.push(1.0);
        match simplex::solve(&rows, &rhs, &vec![0.0; k], self.lp_tol) {
            LpOutcome::Optimal { x, .. } => {
                let total: f64 = x.iter().sum();
                Ok(MembershipCertificate::Member { weights: x.into_iter().map(|w| w / total).collect() })
            }
            LpOutcome::Infeasible { farkas, .. } => {
                let a = self.lift_direction(&farkas[..d]);
                self.normalized_separator(a, eta).map(MembershipCertificate::Separated)
            }
            LpOutcome::Unbounded => unreachable!("feasibility LP has a zero objective"),
        }
    }

    /// Tightens `a₀ = max_x a·H(x)` and rescales so that `a·η = a₀ + 1`.
    fn normalized_separator(&self, a: Vec<f64>, eta: &[f64]) -> Result<SeparationCertificate> {
        let a0 = self.points.iter().map(|v| dot(&a, v)).fold(f64::NEG_INFINITY, f64::max);
        let gap = dot(&a, eta) - a0;
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(Error::numerical("separating hyperplane extraction", gap));
        }
        let a: Vec<f64> = a.iter().map(|v| v / gap).collect();
        let a0 = self.points.iter().map(|v| dot(&a, v)).fold(f64::NEG_INFINITY, f64::max);
        Ok(SeparationCertificate { a, a0 })
    }

    /// Relative-interior test: solves `max t s.t. λ_v ≥ t, Σλ = 1, Σλ v = η`
    /// and reports `t > lp_tol`.
    pub fn relative_interior_contains(&self, eta: &[f64]) -> Result<InteriorReport> {
        if !self.contains(eta)?.is_member() {
            return Ok(InteriorReport { inside: false, slack: None, weights: None });
        }
        let (xi, _) = self.split(eta);
        let k = self.vertices.len();
        let d = self.dimension();
        // variables: s_0..s_{k-1}, t   with λ_v = s_v + t
        let mut rows: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut row: Vec<f64> = self.reduced_vertices.iter().map(|v| v[i]).collect();
                row.push(self.reduced_vertices.iter().map(|v| v[i]).sum());
                row
            })
            .collect();
        let mut last = vec![1.0; k];
        last.push(k as f64);
        rows.push(last);
        let mut rhs = xi;
        rhs.push(1.0);
        let mut cost = vec![0.0; k];
        cost.push(-1.0);
        match simplex::solve(&rows, &rhs, &cost, self.lp_tol) {
            LpOutcome::Optimal { x, .. } => {
                let t = x[k];
                let weights = x[..k].iter().map(|s| s + t).collect();
                Ok(InteriorReport { inside: t > self.lp_tol, slack: Some(t), weights: Some(weights) })
            }
            // membership was established above; a numerically infeasible
            // second LP means η sits on the boundary
            LpOutcome::Infeasible { .. } => Ok(InteriorReport { inside: false, slack: Some(0.0), weights: None }),
            LpOutcome::Unbounded => unreachable!("t is bounded by 1/k"),
        }
    }

    /// Maximum of `|Σ λ_v v − η|` for vertex weights λ.
    pub fn weights_residual(&self, weights: &[f64], eta: &[f64]) -> f64 {
        let mut acc = vec![0.0; self.ambient_dimension()];
        for (w, v) in weights.iter().zip(&self.vertices) {
            for (a, c) in acc.iter_mut().zip(v) {
                *a += w * c;
            }
        }
        acc.iter().zip(eta).fold(0.0, |m, (a, e)| m.max((a - e).abs()))
    }
}

fn affine_basis(vertices: &[Vec<f64>], base: &[f64]) -> Vec<Vec<f64>> {
    let m = base.len();
    let k = vertices.len() - 1;
    if k == 0 {
        return vec![];
    }
    let diffs = DMatrix::from_fn(m, k, |i, j| vertices[j + 1][i] - base[i]);
    let svd = diffs.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return vec![];
    }
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    order
        .into_iter()
        .filter(|&i| svd.singular_values[i] > RANK_TOL * smax)
        .map(|i| u.column(i).iter().cloned().collect())
        .collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment() -> MarginalPolytope {
        let space = SampleSpace::with_weights(vec![1.0, 1.0, 1.0]).unwrap();
        MarginalPolytope::build(&[RandomVariable::new(vec![1.0, 2.0, 3.0])], &space).unwrap()
    }

    fn square() -> MarginalPolytope {
        MarginalPolytope::from_points(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(segment().dimension(), 1);
        let space = SampleSpace::with_weights(vec![1.0; 4]).unwrap();
        let h = [RandomVariable::new(vec![0.0, 1.0, 0.3, 0.9]), RandomVariable::new(vec![0.0, 0.2, 1.0, 0.8])];
        assert_eq!(MarginalPolytope::build(&h, &space).unwrap().dimension(), 2);
        let c = MarginalPolytope::build(&[RandomVariable::constant(4, 2.0)], &space).unwrap();
        assert_eq!(c.dimension(), 0);
        assert_eq!(c.vertices().len(), 1);
    }

    #[test]
    fn segment_membership_and_separation() {
        let p = segment();
        let mid = p.contains(&[2.0]).unwrap();
        assert!(mid.is_member());
        assert!(p.weights_residual(mid.weights().unwrap(), &[2.0]) < 1e-12);

        let out = p.contains(&[3.5]).unwrap();
        let sep = out.separator().expect("outside");
        assert!(sep.a[0] > 0.0);
        assert!((sep.a[0] * 3.0 - sep.a0).abs() < 1e-12);
        assert!((sep.a[0] * 3.5 - sep.a0 - 1.0).abs() < 1e-12);
        assert!(sep.verify(&p, &[3.5], 1e-9));

        let v = p.contains(&[3.0]).unwrap();
        let w = v.weights().unwrap();
        assert!((w[2] - 1.0).abs() < 1e-12 && w[0].abs() < 1e-12);
    }

    #[test]
    fn relative_interior_examples() {
        let p = segment();
        let mid = p.relative_interior_contains(&[2.0]).unwrap();
        assert!(mid.inside && mid.slack.unwrap() > 0.0);
        let v = p.relative_interior_contains(&[3.0]).unwrap();
        assert!(!v.inside);
        assert!(v.slack.unwrap().abs() < 1e-12);
        let sq = square().relative_interior_contains(&[0.5, 0.5]).unwrap();
        assert!(sq.inside);
        assert!((sq.slack.unwrap() - 0.25).abs() < 1e-12);
        assert!(!p.relative_interior_contains(&[5.0]).unwrap().inside);
    }

    #[test]
    fn collinear_points_reduce_to_one_dimension() {
        let p = MarginalPolytope::from_points(vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(p.dimension(), 1);
        let xi = p.reduce_coordinates(&[0.5, 1.0]).unwrap();
        assert_eq!(xi.len(), 1);
        let back = p.lift_coordinates(&xi).unwrap();
        assert!((back[0] - 0.5).abs() < 1e-12 && (back[1] - 1.0).abs() < 1e-12);
        match p.reduce_coordinates(&[1.0, 0.0]) {
            Err(Error::OffHull { distance }) => assert!((distance - 2.0 / 5f64.sqrt()).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let sep = p.contains(&[1.0, 0.0]).unwrap();
        assert!(sep.separator().unwrap().verify(&p, &[1.0, 0.0], 1e-9));
    }

    #[test]
    fn duplicates_are_merged() {
        let p = MarginalPolytope::from_points(vec![vec![1.0], vec![1.0], vec![3.0]]).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.vertex_sample_indices(), &[0, 2]);
        assert_eq!(p.point_weights(&[0.25, 0.75]), vec![0.25, 0.0, 0.75]);
    }

    #[test]
    fn square_separation() {
        let sq = square();
        for eta in [[1.5, 0.5], [-0.1, -0.1], [0.5, 2.0], [1.2, 1.2]] {
            let cert = sq.contains(&eta).unwrap();
            assert!(cert.separator().unwrap().verify(&sq, &eta, 1e-9), "{eta:?}");
        }
    }
}
