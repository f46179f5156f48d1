//! Bounded-variable linear programs and an embedded dense simplex solver.
//!
//! Problems are always maximized. Each variable carries its own
//! (possibly infinite) bounds, so bounds never turn into constraint rows.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub mod oracle;
mod simplex;

pub use oracle::oracle_solve;
pub use simplex::{solve, solve_with};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Constraint {
    pub name: String,
    /// Sparse `(variable index, coefficient)` pairs.
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// How far `x` is from satisfying this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `maximize objective . x` subject to `constraints` and variable bounds.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LpProblem {
    pub variables: Vec<Variable>,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        cost: f64,
    ) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        self.objective.push(cost);
        self.variables.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> usize {
        self.constraints.push(Constraint {
            name: name.into(),
            coeffs,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest bound or row violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let bounds = self
            .variables
            .iter()
            .zip(x)
            .map(|(v, &xv)| (v.lower - xv).max(xv - v.upper).max(0.0));
        let rows = self.constraints.iter().map(|c| c.violation(x));
        bounds.chain(rows).fold(0.0, f64::max)
    }

    /// Structural checks. Crossed bounds are not an error: they make the
    /// problem infeasible.
    pub fn check(&self) -> Result<(), LpError> {
        let n = self.variables.len();
        if self.objective.len() != n {
            return Err(LpError::ObjectiveLength {
                expected: n,
                found: self.objective.len(),
            });
        }
        for (j, v) in self.variables.iter().enumerate() {
            if v.lower.is_nan()
                || v.upper.is_nan()
                || v.lower == f64::INFINITY
                || v.upper == f64::NEG_INFINITY
            {
                return Err(LpError::BadBounds(j));
            }
            if !self.objective[j].is_finite() {
                return Err(LpError::NonFinite {
                    row: None,
                    column: j,
                });
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(LpError::NonFinite {
                    row: Some(i),
                    column: n,
                });
            }
            for &(j, a) in &c.coeffs {
                if j >= n {
                    return Err(LpError::IndexOutOfRange { row: i, column: j });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite {
                        row: Some(i),
                        column: j,
                    });
                }
            }
        }
        Ok(())
    }

    pub(crate) fn has_crossed_bounds(&self) -> bool {
        self.variables.iter().any(|v| v.lower > v.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LpSolution {
    pub status: Status,
    /// Point at termination. Meaningful only when `status` is optimal.
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("objective has {found} coefficients for {expected} variables")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("variable {0} has an invalid bound")]
    BadBounds(usize),
    #[error("non-finite coefficient (row {row:?}, column {column})")]
    NonFinite { row: Option<usize>, column: usize },
    #[error("row {row} references variable {column}, which does not exist")]
    IndexOutOfRange { row: usize, column: usize },
    #[error("iteration limit reached after {iterations} iterations")]
    IterationLimit { iterations: usize },
    #[error("problem too large for vertex enumeration ({variables} variables, limit {limit})")]
    TooLarge { variables: usize, limit: usize },
}

/// Tolerances and limits for [`solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Smallest tableau entry accepted as a pivot.
    pub pivot_tolerance: f64,
    /// Allowed bound violation, and the phase-1 infeasibility threshold.
    pub feasibility_tolerance: f64,
    /// Reduced-cost threshold for optimality.
    pub optimality_tolerance: f64,
    /// Defaults to `50 * (variables + constraints)`.
    pub max_iterations: Option<usize>,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            pivot_tolerance: 1e-9,
            feasibility_tolerance: 1e-7,
            optimality_tolerance: 1e-8,
            max_iterations: None,
            bland_after: 1000,
        }
    }
}
