//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `min cᵀx  s.t.  A x = b, x ≥ 0`. Phase 1 minimizes the sum of
//! artificial variables; when that optimum is positive the phase-1 duals are
//! returned as a Farkas vector `y` with `Aᵀy ≤ 0` and `bᵀy > 0`.

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible { farkas: Vec<f64>, infeasibility: f64 },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>, // each row: columns + rhs
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[col] = 0.0;
            }
        }
        self.basis[row] = col;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (rj, aij) in r.iter_mut().zip(&self.rows[i][..self.ncols]) {
                    *rj -= cb * aij;
                }
            }
        }
        r
    }

    /// Runs Bland-rule pivots on `cost` over the columns allowed by `allowed`.
    /// Returns false on unboundedness.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool]) -> bool {
        loop {
            let r = self.reduced_costs(cost);
            let entering = (0..self.ncols).find(|&j| allowed[j] && r[j] < -PIVOT_EPS);
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - PIVOT_EPS || (ratio <= lr + PIVOT_EPS && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    }
                }
            }
            match leave {
                None => return false,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }
}

/// `feas_tol` bounds the phase-1 optimum accepted as feasible.
pub(crate) fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64], feas_tol: f64) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let ncols = n + m;
    let mut signs = vec![1.0; m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        signs[i] = s;
        let mut row = vec![0.0; ncols + 1];
        for j in 0..n {
            row[j] = s * a[i][j];
        }
        row[n + i] = 1.0;
        row[ncols] = s * b[i];
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), ncols };

    let mut phase1_cost = vec![0.0; ncols];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = 1.0;
    }
    let all = vec![true; ncols];
    t.optimize(&phase1_cost, &all);
    let infeasibility: f64 = (0..m).filter(|&i| t.basis[i] >= n).map(|i| t.rhs(i)).sum();
    if infeasibility > feas_tol {
        let r = t.reduced_costs(&phase1_cost);
        // y_i = c_art_i − r_art_i in the sign-normalized rows
        let farkas = (0..m).map(|i| signs[i] * (1.0 - r[n + i])).collect();
        return LpOutcome::Infeasible { farkas, infeasibility };
    }

    // drive remaining artificials out of the basis where possible
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t.rows[i][j].abs() > PIVOT_EPS) {
                t.pivot(i, j);
            }
        }
    }
    let mut allowed = vec![true; ncols];
    for a in allowed.iter_mut().skip(n) {
        *a = false;
    }
    let mut phase2_cost = c.to_vec();
    phase2_cost.resize(ncols, 0.0);
    if !t.optimize(&phase2_cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = t.rhs(i).max(0.0);
        }
    }
    let objective = x.iter().zip(c).map(|(x, c)| x * c).sum();
    LpOutcome::Optimal { x, objective }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_lp() {
        // min -x0 - x1  s.t. x0 + 2x1 + s0 = 4, 3x0 + x1 + s1 = 6
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let out = solve(&a, &[4.0, 6.0], &[-1.0, -1.0, 0.0, 0.0], 1e-12);
        match out {
            LpOutcome::Optimal { x, objective } => {
                assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
                assert!((objective + 2.8).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn farkas_vector_certifies_infeasibility() {
        // x0 + x1 = 1, x0 + x1 = 2
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let b = [1.0, 2.0];
        match solve(&a, &b, &[0.0, 0.0], 1e-12) {
            LpOutcome::Infeasible { farkas, .. } => {
                for j in 0..2 {
                    let aty: f64 = a.iter().zip(&farkas).map(|(row, y)| row[j] * y).sum();
                    assert!(aty <= 1e-12);
                }
                let bty: f64 = b.iter().zip(&farkas).map(|(b, y)| b * y).sum();
                assert!(bty > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_handled() {
        // -x0 = -2  -> x0 = 2
        let out = solve(&[vec![-1.0, 0.0]], &[-2.0], &[1.0, 1.0], 1e-12);
        assert_eq!(out, LpOutcome::Optimal { x: vec![2.0, 0.0], objective: 2.0 });
    }

    #[test]
    fn detects_unbounded() {
        // min -x0  s.t. x0 - x1 = 0
        assert_eq!(solve(&[vec![1.0, -1.0]], &[0.0], &[-1.0, 0.0], 1e-12), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's cycling example in equality form with slacks
        let a = vec![
            vec![0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
            vec![0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        ];
        let c = [-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0];
        match solve(&a, &[0.0, 0.0, 1.0], &c, 1e-12) {
            LpOutcome::Optimal { objective, .. } => assert!((objective + 0.05).abs() < 1e-10),
            other => panic!("unexpected {other:?}"),
        }
    }
}
