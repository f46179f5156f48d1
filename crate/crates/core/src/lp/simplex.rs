//! Two-phase primal simplex on a dense bounded-variable tableau.
//!
//! Every row `i` gets a slack column `s_i` so that rows read
//! `a_i . x + s_i = b_i`; the relation is carried by the slack's bounds
//! (`<=`: `s >= 0`, `>=`: `s <= 0`, `=`: `s = 0`). Rows whose slack cannot
//! absorb the starting residual get an artificial column, and phase 1
//! drives the artificials to zero. Because the slack block of the original
//! matrix is the identity, the slack block of the tableau is always the
//! basis inverse, which is how basic values get recomputed from scratch.

use alloc::vec;
use alloc::vec::Vec;

use super::{LpError, LpProblem, LpSolution, Relation, SolverOptions, Status};

const NONBASIC: usize = usize::MAX;
/// Steps shorter than this count as degenerate pivots.
const DEGENERATE_STEP: f64 = 1e-12;
/// Recompute basic values from the basis inverse this often.
const REFRESH_INTERVAL: usize = 100;
/// Entries smaller than this after elimination are flushed to zero.
const DROP_TOLERANCE: f64 = 1e-14;

pub fn solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    solve_with(problem, &SolverOptions::default())
}

pub fn solve_with(problem: &LpProblem, opts: &SolverOptions) -> Result<LpSolution, LpError> {
    problem.check()?;
    let n = problem.num_variables();
    if problem.has_crossed_bounds() {
        return Ok(LpSolution {
            status: Status::Infeasible,
            values: vec![0.0; n],
            objective: 0.0,
            iterations: 0,
        });
    }
    let limit = opts
        .max_iterations
        .unwrap_or(50 * (n + problem.num_constraints()).max(1));
    let mut tab = Tableau::new(problem);
    let mut iterations = 0usize;

    if tab.num_artificial > 0 {
        tab.set_phase_one_costs();
        match tab.optimize(opts, limit, &mut iterations)? {
            Outcome::Optimal => {}
            // The phase-1 objective is bounded above by zero.
            Outcome::Unbounded => unreachable!("phase 1 cannot be unbounded"),
        }
        if tab.infeasibility() > opts.feasibility_tolerance {
            return Ok(LpSolution {
                status: Status::Infeasible,
                values: tab.x[..n].to_vec(),
                objective: problem.objective_value(&tab.x[..n]),
                iterations,
            });
        }
        tab.retire_artificials();
    }

    tab.set_phase_two_costs(&problem.objective);
    let status = match tab.optimize(opts, limit, &mut iterations)? {
        Outcome::Optimal => Status::Optimal,
        Outcome::Unbounded => Status::Unbounded,
    };
    // Basic values can sit a rounding error outside their box.
    let values: Vec<f64> = tab.x[..n]
        .iter()
        .zip(&problem.variables)
        .map(|(&x, v)| x.max(v.lower).min(v.upper))
        .collect();
    Ok(LpSolution {
        status,
        objective: problem.objective_value(&values),
        values,
        iterations,
    })
}

enum Outcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize,
    structural: usize,
    num_artificial: usize,
    /// `rows x cols`, row-major; always `B^-1 [A | I | art]`.
    t: Vec<f64>,
    rhs: Vec<f64>,
    lo: Vec<f64>,
    up: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    row_of: Vec<usize>,
    cost: Vec<f64>,
    reduced: Vec<f64>,
    degenerate_run: usize,
}

impl Tableau {
    fn new(p: &LpProblem) -> Self {
        let n = p.num_variables();
        let m = p.num_constraints();

        let mut x0: Vec<f64> = p
            .variables
            .iter()
            .map(|v| {
                if v.lower.is_finite() {
                    v.lower
                } else if v.upper.is_finite() {
                    v.upper
                } else {
                    0.0
                }
            })
            .collect();

        let slack_bounds = |r: Relation| match r {
            Relation::Le => (0.0, f64::INFINITY),
            Relation::Ge => (f64::NEG_INFINITY, 0.0),
            Relation::Eq => (0.0, 0.0),
        };

        // Residual of each row at the starting point decides slack vs artificial.
        let residual: Vec<f64> = p
            .constraints
            .iter()
            .map(|c| c.rhs - c.activity(&x0))
            .collect();
        let needs_art: Vec<bool> = p
            .constraints
            .iter()
            .zip(&residual)
            .map(|(c, &r)| {
                let (lo, up) = slack_bounds(c.relation);
                r < lo || r > up
            })
            .collect();
        let num_artificial = needs_art.iter().filter(|&&b| b).count();
        let cols = n + m + num_artificial;

        let mut t = vec![0.0; m * cols];
        let mut lo = Vec::with_capacity(cols);
        let mut up = Vec::with_capacity(cols);
        for v in &p.variables {
            lo.push(v.lower);
            up.push(v.upper);
        }
        for c in &p.constraints {
            let (l, u) = slack_bounds(c.relation);
            lo.push(l);
            up.push(u);
        }
        lo.resize(cols, 0.0);
        up.resize(cols, f64::INFINITY);
        x0.resize(cols, 0.0);

        let mut basis = vec![0; m];
        let mut row_of = vec![NONBASIC; cols];
        let mut next_art = n + m;
        for (i, c) in p.constraints.iter().enumerate() {
            let row = &mut t[i * cols..(i + 1) * cols];
            for &(j, a) in &c.coeffs {
                row[j] += a;
            }
            row[n + i] = 1.0;
            if needs_art[i] {
                let sigma = if residual[i] > 0.0 { 1.0 } else { -1.0 };
                // B = sigma on this row, so B^-1 row = row / sigma and the
                // artificial's own entry becomes 1.
                for v in row.iter_mut() {
                    *v *= sigma;
                }
                row[next_art] = 1.0;
                basis[i] = next_art;
                row_of[next_art] = i;
                x0[next_art] = residual[i].abs();
                next_art += 1;
            } else {
                basis[i] = n + i;
                row_of[n + i] = i;
                x0[n + i] = residual[i];
            }
        }

        Self {
            rows: m,
            cols,
            structural: n,
            num_artificial,
            t,
            rhs: p.constraints.iter().map(|c| c.rhs).collect(),
            lo,
            up,
            x: x0,
            basis,
            row_of,
            cost: vec![0.0; cols],
            reduced: vec![0.0; cols],
            degenerate_run: 0,
        }
    }

    fn artificial_range(&self) -> core::ops::Range<usize> {
        self.structural + self.rows..self.cols
    }

    fn set_phase_one_costs(&mut self) {
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        for j in self.artificial_range() {
            self.cost[j] = -1.0;
        }
        self.recompute_reduced_costs();
    }

    fn set_phase_two_costs(&mut self, objective: &[f64]) {
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        self.cost[..self.structural].copy_from_slice(objective);
        self.recompute_reduced_costs();
    }

    fn infeasibility(&self) -> f64 {
        self.artificial_range().map(|j| self.x[j].max(0.0)).sum()
    }

    /// Pin artificials to zero so they never re-enter.
    fn retire_artificials(&mut self) {
        for j in self.artificial_range() {
            self.up[j] = 0.0;
            if self.row_of[j] == NONBASIC {
                self.x[j] = 0.0;
            }
        }
    }

    fn recompute_reduced_costs(&mut self) {
        let cols = self.cols;
        self.reduced.copy_from_slice(&self.cost);
        for i in 0..self.rows {
            let cb = self.cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            let row = &self.t[i * cols..(i + 1) * cols];
            for (d, &a) in self.reduced.iter_mut().zip(row) {
                *d -= cb * a;
            }
        }
        for &b in &self.basis {
            self.reduced[b] = 0.0;
        }
    }

    /// `x_B = B^-1 b - sum over nonbasic j of T_j x_j`.
    fn recompute_basic_values(&mut self) {
        let (n, m, cols) = (self.structural, self.rows, self.cols);
        let nonbasic: Vec<(usize, f64)> = (0..cols)
            .filter(|&j| self.row_of[j] == NONBASIC && self.x[j] != 0.0)
            .map(|j| (j, self.x[j]))
            .collect();
        for i in 0..m {
            let row = &self.t[i * cols..(i + 1) * cols];
            let mut v: f64 = (0..m).map(|k| row[n + k] * self.rhs[k]).sum();
            for &(j, xj) in &nonbasic {
                v -= row[j] * xj;
            }
            self.x[self.basis[i]] = v;
        }
    }

    fn choose_entering(&self, opts: &SolverOptions, bland: bool) -> Option<(usize, f64)> {
        let tol = opts.optimality_tolerance;
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.cols {
            if self.row_of[j] != NONBASIC || self.lo[j] == self.up[j] {
                continue;
            }
            let d = self.reduced[j];
            let (dir, score) = if d > tol && self.x[j] < self.up[j] {
                (1.0, d)
            } else if d < -tol && self.x[j] > self.lo[j] {
                (-1.0, -d)
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            if score > best_score {
                best_score = score;
                best = Some((j, dir));
            }
        }
        best
    }

    fn optimize(
        &mut self,
        opts: &SolverOptions,
        limit: usize,
        iterations: &mut usize,
    ) -> Result<Outcome, LpError> {
        let mut since_refresh = 0usize;
        loop {
            let bland = self.degenerate_run >= opts.bland_after;
            let entering = match self.choose_entering(opts, bland) {
                Some(e) => e,
                None => {
                    // Confirm against freshly computed values before stopping.
                    self.recompute_basic_values();
                    self.recompute_reduced_costs();
                    since_refresh = 0;
                    match self.choose_entering(opts, bland) {
                        Some(e) => e,
                        None => return Ok(Outcome::Optimal),
                    }
                }
            };
            if *iterations >= limit {
                return Err(LpError::IterationLimit {
                    iterations: *iterations,
                });
            }
            *iterations += 1;
            if !self.step(entering.0, entering.1, opts, bland) {
                return Ok(Outcome::Unbounded);
            }
            since_refresh += 1;
            if since_refresh >= REFRESH_INTERVAL {
                self.recompute_basic_values();
                since_refresh = 0;
            }
        }
    }

    /// Move `j` in direction `dir`. Returns false if the move is unbounded.
    fn step(&mut self, j: usize, dir: f64, opts: &SolverOptions, bland: bool) -> bool {
        let cols = self.cols;
        let mut theta = f64::INFINITY;
        let mut leave: Option<(usize, f64, f64)> = None; // (row, |alpha|, bound hit)
        for i in 0..self.rows {
            let alpha = self.t[i * cols + j];
            if alpha.abs() <= opts.pivot_tolerance {
                continue;
            }
            let b = self.basis[i];
            let rate = -dir * alpha;
            let (limit, bound) = if rate < 0.0 {
                if self.lo[b] == f64::NEG_INFINITY {
                    continue;
                }
                (((self.x[b] - self.lo[b]) / -rate).max(0.0), self.lo[b])
            } else {
                if self.up[b] == f64::INFINITY {
                    continue;
                }
                (((self.up[b] - self.x[b]) / rate).max(0.0), self.up[b])
            };
            let better = match leave {
                None => true,
                Some((r, a, _)) => {
                    if limit < theta - DEGENERATE_STEP {
                        true
                    } else if limit <= theta + DEGENERATE_STEP {
                        if bland {
                            b < self.basis[r]
                        } else {
                            alpha.abs() > a
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                theta = theta.min(limit);
                leave = Some((i, alpha.abs(), bound));
            }
        }

        let flip = self.up[j] - self.lo[j];
        if flip.is_finite() && flip <= theta {
            // Bound flip: j crosses to its other bound, basis unchanged.
            self.shift_basics(j, dir, flip);
            self.x[j] = if dir > 0.0 { self.up[j] } else { self.lo[j] };
            self.track_degeneracy(flip);
            return true;
        }
        let Some((r, _, bound)) = leave else {
            return false;
        };
        self.shift_basics(j, dir, theta);
        let leaving = self.basis[r];
        self.x[j] += dir * theta;
        self.x[leaving] = bound;
        self.pivot(r, j);
        self.track_degeneracy(theta);
        true
    }

    fn track_degeneracy(&mut self, step: f64) {
        if step <= DEGENERATE_STEP {
            self.degenerate_run += 1;
        } else {
            self.degenerate_run = 0;
        }
    }

    fn shift_basics(&mut self, j: usize, dir: f64, theta: f64) {
        if theta == 0.0 {
            return;
        }
        let cols = self.cols;
        for i in 0..self.rows {
            let alpha = self.t[i * cols + j];
            if alpha != 0.0 {
                self.x[self.basis[i]] -= dir * alpha * theta;
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let inv = 1.0 / self.t[r * cols + j];
        let mut nz: Vec<(usize, f64)> = Vec::new();
        {
            let row = &mut self.t[r * cols..(r + 1) * cols];
            for (c, v) in row.iter_mut().enumerate() {
                if *v != 0.0 {
                    *v *= inv;
                    nz.push((c, *v));
                }
            }
            row[j] = 1.0;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * cols + j];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[i * cols..(i + 1) * cols];
            for &(c, v) in &nz {
                let nv = row[c] - f * v;
                row[c] = if nv.abs() < DROP_TOLERANCE { 0.0 } else { nv };
            }
            row[j] = 0.0;
        }
        let f = self.reduced[j];
        if f != 0.0 {
            for &(c, v) in &nz {
                self.reduced[c] -= f * v;
            }
        }
        self.reduced[j] = 0.0;

        let leaving = self.basis[r];
        self.row_of[leaving] = NONBASIC;
        self.basis[r] = j;
        self.row_of[j] = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{LpProblem, Relation};

    #[test]
    fn bound_only() {
        let mut p = LpProblem::new();
        p.add_variable("x", 0.0, 5.0, 1.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.values, vec![5.0]);
        assert_eq!(s.objective, 5.0);
    }

    #[test]
    fn one_face() {
        let mut p = LpProblem::new();
        let x = p.add_variable("x", 0.0, f64::INFINITY, 1.0);
        let y = p.add_variable("y", 0.0, f64::INFINITY, 1.0);
        p.add_constraint("c", vec![(x, 1.0), (y, 1.0)], Relation::Le, 1.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_ge_rows_need_phase_one() {
        // max x + 2y  s.t. x + y = 4, x - y >= 1, 0 <= x,y <= 10  ->  x = 2.5, y = 1.5
        let mut p = LpProblem::new();
        let x = p.add_variable("x", 0.0, 10.0, 1.0);
        let y = p.add_variable("y", 0.0, 10.0, 2.0);
        p.add_constraint("e", vec![(x, 1.0), (y, 1.0)], Relation::Eq, 4.0);
        p.add_constraint("g", vec![(x, 1.0), (y, -1.0)], Relation::Ge, 1.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.values[0] - 2.5).abs() < 1e-9);
        assert!((s.values[1] - 1.5).abs() < 1e-9);
        assert!((s.objective - 5.5).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_rows() {
        let mut p = LpProblem::new();
        let x = p.add_variable("x", 0.0, 1.0, 1.0);
        p.add_constraint("c", vec![(x, 1.0)], Relation::Ge, 2.0);
        assert_eq!(solve(&p).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn crossed_box_is_infeasible() {
        let mut p = LpProblem::new();
        p.add_variable("x", 2.0, 1.0, 1.0);
        assert_eq!(solve(&p).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut p = LpProblem::new();
        p.add_variable("x", 0.0, f64::INFINITY, 1.0);
        assert_eq!(solve(&p).unwrap().status, Status::Unbounded);
        let mut p = LpProblem::new();
        let x = p.add_variable("x", f64::NEG_INFINITY, f64::INFINITY, 1.0);
        let y = p.add_variable("y", 0.0, f64::INFINITY, 0.0);
        p.add_constraint("c", vec![(x, 1.0), (y, -1.0)], Relation::Le, 3.0);
        assert_eq!(solve(&p).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn free_variables() {
        // max -|x - 3| via epigraph: max -t, t >= x - 3, t >= 3 - x, x free
        let mut p = LpProblem::new();
        let x = p.add_variable("x", f64::NEG_INFINITY, f64::INFINITY, 0.0);
        let t = p.add_variable("t", f64::NEG_INFINITY, f64::INFINITY, -1.0);
        p.add_constraint("a", vec![(t, 1.0), (x, -1.0)], Relation::Ge, -3.0);
        p.add_constraint("b", vec![(t, 1.0), (x, 1.0)], Relation::Ge, 3.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!(s.objective.abs() < 1e-9);
        assert!((s.values[x] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn iteration_limit_is_distinct() {
        let mut p = LpProblem::new();
        let x = p.add_variable("x", 0.0, f64::INFINITY, 1.0);
        let y = p.add_variable("y", 0.0, f64::INFINITY, 1.0);
        p.add_constraint("a", vec![(x, 1.0), (y, 2.0)], Relation::Le, 4.0);
        p.add_constraint("b", vec![(x, 3.0), (y, 1.0)], Relation::Le, 6.0);
        let opts = SolverOptions {
            max_iterations: Some(1),
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_with(&p, &opts),
            Err(LpError::IterationLimit { .. })
        ));
    }

    #[test]
    fn rejects_bad_index() {
        let mut p = LpProblem::new();
        p.add_variable("x", 0.0, 1.0, 1.0);
        p.add_constraint("c", vec![(3, 1.0)], Relation::Le, 1.0);
        assert_eq!(
            solve(&p),
            Err(LpError::IndexOutOfRange { row: 0, column: 3 })
        );
    }
}
