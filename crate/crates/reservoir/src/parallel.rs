//! Rayon-parallel runners. Each replication and grid point is a pure
//! function of its inputs and results are collected in declared order, so
//! the output is identical to the sequential core functions.

use rayon::prelude::*;
use reservoir_core::formulation::{plan, FormulationError, Method};
use reservoir_core::model::{Plan, Scenario};
use reservoir_core::scenarios::{expand_sweep, SweepConfig, SweepError};
use reservoir_core::simulation::{
    paired_difference, replicate, PairedDifference, SimulationReport,
};

pub fn run_monte_carlo(plan: &Plan, s: &Scenario, reps: usize, seed: u64) -> SimulationReport {
    let reps: Vec<_> = (0..reps as u64)
        .into_par_iter()
        .map(|rep| replicate(plan, s, seed, rep))
        .collect();
    SimulationReport::from_replications(reps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodRun {
    pub method: Method,
    pub plan: Plan,
    pub report: SimulationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub proposed: MethodRun,
    pub deterministic: MethodRun,
    /// Proposed minus deterministic, replication by replication.
    pub difference: PairedDifference,
}

/// Plan with both methods and evaluate them on the same inflow samples.
pub fn compare(s: &Scenario, reps: usize, seed: u64) -> Result<Comparison, FormulationError> {
    let (p, d) = rayon::join(
        || plan(s, Method::Proposed),
        || plan(s, Method::Deterministic),
    );
    let (p, d) = (p?, d?);
    let (rp, rd) = rayon::join(
        || run_monte_carlo(&p, s, reps, seed),
        || run_monte_carlo(&d, s, reps, seed),
    );
    let difference = paired_difference(&rp, &rd);
    Ok(Comparison {
        proposed: MethodRun {
            method: Method::Proposed,
            plan: p,
            report: rp,
        },
        deterministic: MethodRun {
            method: Method::Deterministic,
            plan: d,
            report: rd,
        },
        difference,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub comparison: Comparison,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepRunError {
    #[error(transparent)]
    Config(#[from] SweepError),
    #[error("grid value {value}: {source}")]
    Plan {
        value: f64,
        source: FormulationError,
    },
}

pub fn run_sweep(base: &Scenario, config: &SweepConfig) -> Result<Vec<SweepPoint>, SweepRunError> {
    let scenarios = expand_sweep(base, config)?;
    scenarios
        .par_iter()
        .zip(config.grid.par_iter())
        .map(|(s, &value)| {
            compare(s, config.replications, config.seed)
                .map(|comparison| SweepPoint { value, comparison })
                .map_err(|source| SweepRunError::Plan { value, source })
        })
        .collect()
}
