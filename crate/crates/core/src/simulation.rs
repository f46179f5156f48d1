//! Monte Carlo evaluation of a fixed plan against sampled inflows.
//!
//! A replication draws one inflow per `(t, n)`, replays the plan through
//! the realized-volume recursion, and scores it: release profit on the
//! target releases, transfer cost on the planned transfers, and risk on
//! the shortfall `g - g_realized`.
//!
//! Each draw has its own ChaCha stream keyed by `(seed, rep, n, t)`, so a
//! replication's numbers do not depend on which other replications ran or
//! in what order.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{DiscreteDistribution, Plan, RealizationMode, Scenario};

/// Matrix indexed `[t][n]`.
pub type Matrix = Vec<Vec<f64>>;

/// Realized releases and volumes under one inflow sequence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RealizedTrajectory {
    pub inflow: Matrix,
    pub release: Matrix,
    /// End-of-period volumes, aligned with [`Plan::v`].
    pub volume: Matrix,
    /// Volumes before period 1; always the scenario's initial volumes.
    pub initial: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfitBreakdown {
    pub release: f64,
    pub transfer: f64,
    pub risk: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationReport {
    pub replications: Vec<ProfitBreakdown>,
    pub mean_total: f64,
    pub std_total: f64,
    pub mean_risk: f64,
    pub std_risk: f64,
}

fn stream(seed: u64, rep: u64, n: usize, t: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&rep.to_le_bytes());
    key[16..24].copy_from_slice(&(n as u64).to_le_bytes());
    key[24..].copy_from_slice(&(t as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Inverse-CDF draw for a uniform `u` in `[0, 1)`.
pub fn inverse_cdf(d: &DiscreteDistribution, u: f64) -> f64 {
    let mut acc = 0.0;
    for atom in &d.support {
        acc += atom.probability;
        if u < acc {
            return atom.value;
        }
    }
    // u landed in the rounding gap above the accumulated mass
    d.support.last().map_or(0.0, |a| a.value)
}

pub fn sample_inflows(s: &Scenario, seed: u64, rep: u64) -> Matrix {
    (0..s.horizon())
        .map(|t| {
            (0..s.num_reservoirs())
                .map(|n| {
                    let u: f64 = stream(seed, rep, n, t).random();
                    inverse_cdf(&s.node(t, n).inflow, u)
                })
                .collect()
        })
        .collect()
}

/// Replay `plan` under realized inflows.
///
/// Releases absorb the gap between actual and planned volume
/// (`g~ = g + v~(t-1) - v(t-1)`) and transfers follow the plan unchanged.
/// In [`RealizationMode::Physical`] releases are floored at zero and
/// volumes spill above capacity.
pub fn realize(plan: &Plan, inflow: &Matrix, s: &Scenario) -> RealizedTrajectory {
    let nres = s.num_reservoirs();
    let initial: Vec<f64> = s.reservoirs.iter().map(|r| r.initial_volume).collect();
    let mut actual = initial.clone();
    let mut planned = initial.clone();
    let mut release = Vec::with_capacity(s.horizon());
    let mut volume = Vec::with_capacity(s.horizon());
    for t in 0..s.horizon() {
        let mut rel = Vec::with_capacity(nres);
        let mut vol = Vec::with_capacity(nres);
        for n in 0..nres {
            let mut g = plan.g[t][n] + (actual[n] - planned[n]);
            let transfers: f64 = s.in_links(n).map(|l| plan.q[t][l]).sum::<f64>()
                - s.out_links(n).map(|l| plan.q[t][l]).sum::<f64>();
            if s.realization == RealizationMode::Physical {
                g = g.max(0.0);
            }
            let mut v = actual[n] - g + inflow[t][n] + transfers;
            if s.realization == RealizationMode::Physical {
                v = v.min(s.reservoirs[n].max_volume);
            }
            rel.push(g);
            vol.push(v);
        }
        actual.clone_from(&vol);
        planned.clone_from(&plan.v[t]);
        release.push(rel);
        volume.push(vol);
    }
    RealizedTrajectory {
        inflow: inflow.clone(),
        release,
        volume,
        initial,
    }
}

pub fn score(plan: &Plan, traj: &RealizedTrajectory, s: &Scenario) -> ProfitBreakdown {
    let mut b = ProfitBreakdown::default();
    for t in 0..s.horizon() {
        for n in 0..s.num_reservoirs() {
            let node = s.node(t, n);
            b.release += node.profit.evaluate(plan.g[t][n]);
            b.risk += node.risk.evaluate(plan.g[t][n] - traj.release[t][n]);
        }
        for (l, cost) in s.transfer_cost[t].iter().enumerate() {
            b.transfer += cost.evaluate(plan.q[t][l]);
        }
    }
    b.total = b.release - b.transfer - b.risk;
    b
}

/// Sample, replay and score replication `rep`.
pub fn replicate(plan: &Plan, s: &Scenario, seed: u64, rep: u64) -> ProfitBreakdown {
    let inflow = sample_inflows(s, seed, rep);
    let traj = realize(plan, &inflow, s);
    score(plan, &traj, s)
}

/// Mean and sample standard deviation (divisor `len - 1`; zero for one value).
pub fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = values.clone().count();
    if count == 0 {
        return (0.0, 0.0);
    }
    // Work relative to the first value so identical inputs give exactly
    // that value and a zero deviation.
    let shift = values.clone().next().unwrap_or(0.0);
    let offset = values.clone().map(|v| v - shift).sum::<f64>() / count as f64;
    let mean = shift + offset;
    if count == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values
        .map(|v| (v - shift - offset) * (v - shift - offset))
        .sum();
    (mean, libm::sqrt(ss / (count - 1) as f64))
}

impl SimulationReport {
    /// Aggregate replications given in replication order.
    pub fn from_replications(replications: Vec<ProfitBreakdown>) -> Self {
        let (mean_total, std_total) = mean_std(replications.iter().map(|r| r.total));
        let (mean_risk, std_risk) = mean_std(replications.iter().map(|r| r.risk));
        Self {
            replications,
            mean_total,
            std_total,
            mean_risk,
            std_risk,
        }
    }

    pub fn mean_release(&self) -> f64 {
        mean_std(self.replications.iter().map(|r| r.release)).0
    }

    pub fn mean_transfer(&self) -> f64 {
        mean_std(self.replications.iter().map(|r| r.transfer)).0
    }
}

pub fn run_monte_carlo(plan: &Plan, s: &Scenario, reps: usize, seed: u64) -> SimulationReport {
    let replications = (0..reps as u64)
        .map(|rep| replicate(plan, s, seed, rep))
        .collect();
    SimulationReport::from_replications(replications)
}

/// Paired comparison of two reports that used the same seed.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairedDifference {
    /// Mean of `a.total - b.total` over replications.
    pub mean: f64,
    pub std: f64,
    pub standard_error: f64,
}

pub fn paired_difference(a: &SimulationReport, b: &SimulationReport) -> PairedDifference {
    let diffs = a
        .replications
        .iter()
        .zip(&b.replications)
        .map(|(x, y)| x.total - y.total);
    let (mean, std) = mean_std(diffs);
    let n = a.replications.len().min(b.replications.len()).max(1);
    PairedDifference {
        mean,
        std,
        standard_error: std / libm::sqrt(n as f64),
    }
}

/// Expected realized risk of a plan in closed form.
///
/// Under the literal recursion the shortfall in period `t` equals the
/// prediction error of period `t - 1`, so the expectation is
/// `sum over t >= 1, n, k of p_k * R[t][n](x[t-1][n] - xk)` with the
/// support of period `t - 1`. Not valid in physical mode.
pub fn expected_realized_risk(plan: &Plan, s: &Scenario) -> f64 {
    let mut total = 0.0;
    for t in 1..s.horizon() {
        for n in 0..s.num_reservoirs() {
            let risk = &s.node(t, n).risk;
            for atom in &s.node(t - 1, n).inflow.support {
                total += atom.probability * risk.evaluate(plan.x[t - 1][n] - atom.value);
            }
        }
    }
    total
}

/// The risk term the planner optimizes: `sum over t, n, k of
/// p_k * R[t][n](x[t][n] - xk)`.
pub fn planned_expected_risk(plan: &Plan, s: &Scenario) -> f64 {
    let mut total = 0.0;
    for t in 0..s.horizon() {
        for n in 0..s.num_reservoirs() {
            let node = s.node(t, n);
            for atom in &node.inflow.support {
                total += atom.probability * node.risk.evaluate(plan.x[t][n] - atom.value);
            }
        }
    }
    total
}
