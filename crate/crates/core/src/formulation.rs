//! Compiles a [`Scenario`] into a linear program.
//!
//! Two programs share one builder. The risk-aware program optimizes the
//! inflow predictions `x` inside their support and pays the expected
//! shortfall risk of each prediction; the deterministic baseline pins every
//! `x` to the distribution mean and has no risk term. Both replace the
//! capacity `min` in the state equation by a linear balance plus a heavily
//! penalized overflow slack `w >= v - M`.
//!
//! Piecewise-linear terms become auxiliary variables:
//!
//! | term | variable | rows |
//! |------|----------|------|
//! | profit `G(g)` (concave) | `u` | `u <= s*g + b` per cut |
//! | transfer cost `C(q)` (convex) | `y` | `y >= s*q + b` per cut |
//! | risk `R(x - xk)` (convex) | `rho_k` | `rho_k >= s*(x - xk) + b` per cut |
//!
//! and the objective is `sum u - sum y - sum F w - sum p_k rho_k`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::functions::FunctionError;
use crate::lp::{self, LpError, LpProblem, LpSolution, Relation, Status};
use crate::model::{Plan, Scenario, ValidationReport};

/// Feasibility tolerance used when replaying a plan against its scenario.
pub const PLAN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Method {
    /// Risk-aware program with optimized inflow predictions.
    Proposed,
    /// Mean-inflow linear program.
    Deterministic,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Proposed, Method::Deterministic];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Deterministic => "deterministic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormulationError {
    #[error("invalid scenario: {0}")]
    Invalid(ValidationReport),
    #[error("cannot linearize function: {0}")]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Solver(#[from] LpError),
    #[error("solution is {0}, not optimal")]
    NotOptimal(Status),
    #[error("solution has {found} values, variable map expects {expected}")]
    SolutionSize { expected: usize, found: usize },
}

/// LP column of every semantic variable. Matrices are `[t][n]` unless noted.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableMap {
    pub method: Method,
    /// `[t][link]`.
    pub q: Vec<Vec<usize>>,
    pub g: Vec<Vec<usize>>,
    pub x: Vec<Vec<usize>>,
    pub v: Vec<Vec<usize>>,
    /// Profit hypograph.
    pub u: Vec<Vec<usize>>,
    /// Transfer-cost epigraph, `[t][link]`.
    pub y: Vec<Vec<usize>>,
    /// Overflow slack.
    pub w: Vec<Vec<usize>>,
    /// Risk epigraph per support point, `[t][n][k]`; empty rows for the
    /// deterministic program.
    pub rho: Vec<Vec<Vec<usize>>>,
}

impl VariableMap {
    /// Every column in the map, in no particular order.
    pub fn columns(&self) -> impl Iterator<Item = usize> + '_ {
        let flat = |m: &'_ Vec<Vec<usize>>| m.iter().flatten().copied().collect::<Vec<_>>();
        [
            &self.q, &self.g, &self.x, &self.v, &self.u, &self.y, &self.w,
        ]
        .into_iter()
        .flat_map(flat)
        .chain(self.rho.iter().flatten().flatten().copied())
    }
}

pub fn build_proposed(s: &Scenario) -> Result<(LpProblem, VariableMap), FormulationError> {
    build(s, Method::Proposed)
}

pub fn build_deterministic(s: &Scenario) -> Result<(LpProblem, VariableMap), FormulationError> {
    build(s, Method::Deterministic)
}

pub fn build(s: &Scenario, method: Method) -> Result<(LpProblem, VariableMap), FormulationError> {
    s.validate()
        .into_result()
        .map_err(FormulationError::Invalid)?;
    let horizon = s.horizon();
    let nres = s.num_reservoirs();
    let inf = f64::INFINITY;
    let mut p = LpProblem::new();
    let mut map = VariableMap {
        method,
        q: Vec::with_capacity(horizon),
        g: Vec::with_capacity(horizon),
        x: Vec::with_capacity(horizon),
        v: Vec::with_capacity(horizon),
        u: Vec::with_capacity(horizon),
        y: Vec::with_capacity(horizon),
        w: Vec::with_capacity(horizon),
        rho: Vec::with_capacity(horizon),
    };

    for t in 0..horizon {
        let p1 = t + 1;
        let mut q = Vec::with_capacity(s.links.len());
        let mut y = Vec::with_capacity(s.links.len());
        for link in &s.links {
            let (a, b) = (link.from + 1, link.to + 1);
            q.push(p.add_variable(format!("q_{p1}_{a}_{b}"), 0.0, link.capacity, 0.0));
            y.push(p.add_variable(format!("y_{p1}_{a}_{b}"), -inf, inf, -1.0));
        }
        let (mut g, mut x, mut v, mut u, mut w, mut rho) = (
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
        );
        for n in 0..nres {
            let r = n + 1;
            let node = s.node(t, n);
            g.push(p.add_variable(format!("g_{p1}_{r}"), 0.0, inf, 0.0));
            let (lo, hi) = match method {
                Method::Proposed => node.inflow.bounds(),
                Method::Deterministic => {
                    let mean = node.inflow.mean();
                    (mean, mean)
                }
            };
            x.push(p.add_variable(format!("x_{p1}_{r}"), lo, hi, 0.0));
            let v_lo = if t + 1 == horizon {
                s.reservoirs[n].final_min_volume
            } else {
                0.0
            };
            v.push(p.add_variable(format!("v_{p1}_{r}"), v_lo, inf, 0.0));
            u.push(p.add_variable(format!("u_{p1}_{r}"), -inf, inf, 1.0));
            w.push(p.add_variable(format!("w_{p1}_{r}"), 0.0, inf, -s.penalty(t, n)));
            let mut per_atom = Vec::new();
            if method == Method::Proposed {
                for (k, atom) in node.inflow.support.iter().enumerate() {
                    let k1 = k + 1;
                    per_atom.push(p.add_variable(
                        format!("rho_{p1}_{r}_{k1}"),
                        -inf,
                        inf,
                        -atom.probability,
                    ));
                }
            }
            rho.push(per_atom);
        }
        map.q.push(q);
        map.y.push(y);
        map.g.push(g);
        map.x.push(x);
        map.v.push(v);
        map.u.push(u);
        map.w.push(w);
        map.rho.push(rho);
    }

    for t in 0..horizon {
        let p1 = t + 1;
        for n in 0..nres {
            let r = n + 1;
            let node = s.node(t, n);
            let v0 = s.reservoirs[n].initial_volume;

            // v_t - v_{t-1} + g - x - sum_in q + sum_out q = 0
            let mut balance =
                alloc::vec![(map.v[t][n], 1.0), (map.g[t][n], 1.0), (map.x[t][n], -1.0)];
            // g + sum_out q - v_{t-1} <= 0
            let mut budget = alloc::vec![(map.g[t][n], 1.0)];
            for l in s.in_links(n) {
                balance.push((map.q[t][l], -1.0));
            }
            for l in s.out_links(n) {
                balance.push((map.q[t][l], 1.0));
                budget.push((map.q[t][l], 1.0));
            }
            let carry = if t == 0 {
                v0
            } else {
                balance.push((map.v[t - 1][n], -1.0));
                budget.push((map.v[t - 1][n], -1.0));
                0.0
            };
            p.add_constraint(format!("state_{p1}_{r}"), balance, Relation::Eq, carry);
            p.add_constraint(format!("budget_{p1}_{r}"), budget, Relation::Le, carry);

            for (c, cut) in node.profit.cuts()?.iter().enumerate() {
                p.add_constraint(
                    format!("profit_{p1}_{r}_{}", c + 1),
                    alloc::vec![(map.u[t][n], 1.0), (map.g[t][n], -cut.slope)],
                    Relation::Le,
                    cut.intercept,
                );
            }
            p.add_constraint(
                format!("overflow_{p1}_{r}"),
                alloc::vec![(map.w[t][n], 1.0), (map.v[t][n], -1.0)],
                Relation::Ge,
                -s.reservoirs[n].max_volume,
            );
            if method == Method::Proposed {
                let risk_cuts = node.risk.cuts()?;
                for (k, atom) in node.inflow.support.iter().enumerate() {
                    for (c, cut) in risk_cuts.iter().enumerate() {
                        p.add_constraint(
                            format!("risk_{p1}_{r}_{}_{}", k + 1, c + 1),
                            alloc::vec![(map.rho[t][n][k], 1.0), (map.x[t][n], -cut.slope)],
                            Relation::Ge,
                            cut.intercept - cut.slope * atom.value,
                        );
                    }
                }
            }
        }
        for (l, link) in s.links.iter().enumerate() {
            let (a, b) = (link.from + 1, link.to + 1);
            for (c, cut) in s.transfer_cost[t][l].cuts()?.iter().enumerate() {
                p.add_constraint(
                    format!("cost_{p1}_{a}_{b}_{}", c + 1),
                    alloc::vec![(map.y[t][l], 1.0), (map.q[t][l], -cut.slope)],
                    Relation::Ge,
                    cut.intercept,
                );
            }
        }
    }
    Ok((p, map))
}

/// Read a [`Plan`] out of an optimal solution.
pub fn extract_plan(
    sol: &LpSolution,
    map: &VariableMap,
    s: &Scenario,
) -> Result<Plan, FormulationError> {
    if sol.status != Status::Optimal {
        return Err(FormulationError::NotOptimal(sol.status));
    }
    let expected = map.columns().max().map_or(0, |c| c + 1);
    if sol.values.len() < expected {
        return Err(FormulationError::SolutionSize {
            expected,
            found: sol.values.len(),
        });
    }
    let read = |m: &Vec<Vec<usize>>| -> Vec<Vec<f64>> {
        m.iter()
            .map(|row| row.iter().map(|&j| sol.values[j]).collect())
            .collect()
    };
    let mut plan = Plan {
        q: read(&map.q),
        g: read(&map.g),
        x: read(&map.x),
        v: read(&map.v),
        planner_objective: sol.objective,
    };
    // Nonnegative quantities may come back as -1e-13 from the tableau.
    for row in plan.q.iter_mut().chain(plan.g.iter_mut()) {
        for val in row.iter_mut() {
            if *val < 0.0 && *val > -PLAN_TOLERANCE {
                *val = 0.0;
            }
        }
    }
    // Fixed predictions are exact by construction; keep them bit-exact.
    if map.method == Method::Deterministic {
        for (t, row) in plan.x.iter_mut().enumerate() {
            for (n, val) in row.iter_mut().enumerate() {
                *val = s.node(t, n).inflow.mean();
            }
        }
    }
    Ok(plan)
}

/// Build, solve and extract in one go.
pub fn plan(s: &Scenario, method: Method) -> Result<Plan, FormulationError> {
    let (problem, map) = build(s, method)?;
    let sol = lp::solve(&problem)?;
    extract_plan(&sol, &map, s)
}

/// One plan constraint that fails replay.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanViolation {
    pub constraint: &'static str,
    pub period: usize,
    pub index: usize,
    pub amount: f64,
}

/// Replay a plan against the scenario's planning constraints: transfer
/// capacities, nonnegative releases, the volume balance, the release
/// budget, terminal volumes and the prediction range. Overflow above
/// capacity is reported too, since the penalty is meant to rule it out.
pub fn check_plan(plan: &Plan, s: &Scenario, tolerance: f64) -> Vec<PlanViolation> {
    let mut out = Vec::new();
    let mut flag = |constraint: &'static str, period: usize, index: usize, amount: f64| {
        if amount > tolerance || amount.is_nan() {
            out.push(PlanViolation {
                constraint,
                period,
                index,
                amount,
            });
        }
    };
    let horizon = s.horizon();
    for t in 0..horizon {
        for (l, link) in s.links.iter().enumerate() {
            let q = plan.q[t][l];
            flag("transfer-capacity", t, l, (q - link.capacity).max(-q));
        }
        for n in 0..s.num_reservoirs() {
            let before = plan.volume_before(s, t, n);
            let inflow: f64 = s.in_links(n).map(|l| plan.q[t][l]).sum();
            let outflow: f64 = s.out_links(n).map(|l| plan.q[t][l]).sum();
            let g = plan.g[t][n];
            let v = plan.v[t][n];
            flag("release-nonnegative", t, n, -g);
            flag("volume-nonnegative", t, n, -v);
            flag(
                "balance",
                t,
                n,
                (v - (before - g + plan.x[t][n] + inflow - outflow)).abs(),
            );
            flag("budget", t, n, g + outflow - before);
            flag("capacity", t, n, v - s.reservoirs[n].max_volume);
            let (lo, hi) = s.node(t, n).inflow.bounds();
            flag(
                "prediction-range",
                t,
                n,
                (lo - plan.x[t][n]).max(plan.x[t][n] - hi),
            );
            if t + 1 == horizon {
                flag("terminal", t, n, s.reservoirs[n].final_min_volume - v);
            }
        }
    }
    out
}
