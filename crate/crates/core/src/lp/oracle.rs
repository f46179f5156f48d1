//! Vertex-enumeration reference solver for small problems.
//!
//! Independent of the simplex: it intersects every choice of `n`
//! hyperplanes drawn from the constraint rows and the variable bounds,
//! keeps the feasible intersection points and returns the best one. Only
//! meant for checking the simplex on tiny problems.

use alloc::vec;
use alloc::vec::Vec;

use super::{LpError, LpProblem, LpSolution, Relation, Status};

/// Largest number of variables [`oracle_solve`] accepts.
pub const ORACLE_MAX_VARIABLES: usize = 12;

/// Box substituted for missing bounds; a second, wider box detects rays.
const SURROGATE_BOUND: f64 = 1e6;
const FEASIBILITY: f64 = 1e-9;
const SINGULAR: f64 = 1e-10;

pub fn oracle_solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    problem.check()?;
    let n = problem.num_variables();
    if n > ORACLE_MAX_VARIABLES {
        return Err(LpError::TooLarge {
            variables: n,
            limit: ORACLE_MAX_VARIABLES,
        });
    }
    let infeasible = LpSolution {
        status: Status::Infeasible,
        values: vec![0.0; n],
        objective: 0.0,
        iterations: 0,
    };
    if problem.has_crossed_bounds() {
        return Ok(infeasible);
    }
    let boxed = problem
        .variables
        .iter()
        .all(|v| v.lower.is_finite() && v.upper.is_finite());
    let Some((values, objective, count)) = enumerate(problem, SURROGATE_BOUND) else {
        return Ok(infeasible);
    };
    if !boxed {
        if let Some((_, wider, _)) = enumerate(problem, 10.0 * SURROGATE_BOUND) {
            if wider > objective + 1e-6 * (1.0 + objective.abs()) {
                return Ok(LpSolution {
                    status: Status::Unbounded,
                    values,
                    objective: wider,
                    iterations: count,
                });
            }
        }
    }
    Ok(LpSolution {
        status: Status::Optimal,
        values,
        objective,
        iterations: count,
    })
}

/// Best feasible vertex, its objective and the number of subsets tried.
fn enumerate(problem: &LpProblem, surrogate: f64) -> Option<(Vec<f64>, f64, usize)> {
    let n = problem.num_variables();
    let lower: Vec<f64> = problem
        .variables
        .iter()
        .map(|v| v.lower.max(-surrogate))
        .collect();
    let upper: Vec<f64> = problem
        .variables
        .iter()
        .map(|v| v.upper.min(surrogate))
        .collect();

    // Hyperplanes as dense (row, rhs).
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in &problem.constraints {
        let mut row = vec![0.0; n];
        for &(j, a) in &c.coeffs {
            row[j] += a;
        }
        planes.push((row, c.rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), lower[j]));
        planes.push((e, upper[j]));
    }

    let feasible = |x: &[f64]| {
        let bounds_ok =
            (0..n).all(|j| x[j] >= lower[j] - FEASIBILITY && x[j] <= upper[j] + FEASIBILITY);
        bounds_ok
            && problem.constraints.iter().all(|c| {
                let lhs = c.activity(x);
                let tol = FEASIBILITY * (1.0 + c.rhs.abs());
                match c.relation {
                    Relation::Le => lhs <= c.rhs + tol,
                    Relation::Ge => lhs >= c.rhs - tol,
                    Relation::Eq => (lhs - c.rhs).abs() <= tol,
                }
            })
    };

    if n == 0 {
        let x: Vec<f64> = Vec::new();
        return feasible(&x).then_some((x, 0.0, 1));
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut count = 0usize;
    let mut subset: Vec<usize> = (0..n).collect();
    let total = planes.len();
    if total < n {
        return None;
    }
    loop {
        count += 1;
        if let Some(x) = intersect(&planes, &subset) {
            if feasible(&x) {
                let obj = problem.objective_value(&x);
                if best.as_ref().is_none_or(|(_, b)| obj > *b) {
                    best = Some((x, obj));
                }
            }
        }
        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return best.map(|(x, o)| (x, o, count));
            }
            i -= 1;
            if subset[i] < total - n + i {
                break;
            }
        }
        subset[i] += 1;
        for k in i + 1..n {
            subset[k] = subset[k - 1] + 1;
        }
    }
}

/// Solve the square system picked by `subset` with partial pivoting.
fn intersect(planes: &[(Vec<f64>, f64)], subset: &[usize]) -> Option<Vec<f64>> {
    let n = subset.len();
    let mut m: Vec<Vec<f64>> = subset
        .iter()
        .map(|&k| {
            let mut row = planes[k].0.clone();
            row.push(planes[k].1);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < SINGULAR {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_small_cases() {
        let mut p = LpProblem::new();
        p.add_variable("x", 0.0, 5.0, 1.0);
        let s = oracle_solve(&p).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.objective, 5.0);

        let mut p = LpProblem::new();
        let x = p.add_variable("x", 0.0, 10.0, 1.0);
        let y = p.add_variable("y", 0.0, 10.0, 1.0);
        p.add_constraint("c", vec![(x, 1.0), (y, 1.0)], Relation::Le, 1.0);
        assert!((oracle_solve(&p).unwrap().objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossed_box() {
        let mut p = LpProblem::new();
        p.add_variable("x", 2.0, 1.0, 1.0);
        assert_eq!(oracle_solve(&p).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn open_ray() {
        let mut p = LpProblem::new();
        p.add_variable("x", 0.0, f64::INFINITY, 1.0);
        assert_eq!(oracle_solve(&p).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn size_cap() {
        let mut p = LpProblem::new();
        for i in 0..13 {
            p.add_variable(alloc::format!("x{i}"), 0.0, 1.0, 1.0);
        }
        assert!(matches!(oracle_solve(&p), Err(LpError::TooLarge { .. })));
    }
}
