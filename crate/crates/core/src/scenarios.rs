//! Built-in case-study networks and sensitivity sweeps.
//!
//! Constants quoted in the published case study are tagged
//! [`Provenance::Paper`]; everything that only appears there as a chart
//! (inflow distributions, demand caps, most capacities and the larger
//! network's pipe layout) is a reconstruction with the documented
//! qualitative structure and is tagged [`Provenance::Reconstructed`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::functions::PwlFunction;
use crate::model::{
    DiscreteDistribution, LinkSpec, NodePeriod, Provenance, RealizationMode, ReservoirSpec,
    Scenario,
};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["simple1", "simple2", "angpuang"];

pub fn builtin(name: &str) -> Option<Scenario> {
    match name {
        "simple1" => Some(builtin_simple(SimpleCase::Conservative)),
        "simple2" => Some(builtin_simple(SimpleCase::Aggressive)),
        "angpuang" => Some(builtin_angpuang()),
        _ => None,
    }
}

fn tags(entries: &[(&str, Provenance)]) -> BTreeMap<String, Provenance> {
    entries.iter().map(|&(k, p)| (k.to_string(), p)).collect()
}

/// The two regimes of the two-reservoir network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleCase {
    /// Costly shortfalls; the risk-aware plan predicts low inflows.
    Conservative,
    /// Cheap shortfalls and transfers, and reservoir 1 very likely gets a
    /// large first-period inflow.
    Aggressive,
}

/// Two reservoirs, three periods, pipes both ways.
///
/// Reservoir 1 probably receives more than usual in period 1 and
/// reservoir 2 receives nothing at all in period 2, so the question is how
/// much to pump from 1 to 2.
pub fn builtin_simple(case: SimpleCase) -> Scenario {
    const HORIZON: usize = 3;
    let (name, transfer_slope, risk_slope, demand_cap, first_inflow) = match case {
        SimpleCase::Conservative => (
            "simple1",
            0.25,
            3.0,
            4.0,
            DiscreteDistribution::new([
                (0.0, 0.1),
                (2.0, 0.15),
                (4.0, 0.25),
                (6.0, 0.25),
                (8.0, 0.25),
            ]),
        ),
        SimpleCase::Aggressive => (
            "simple2",
            0.1,
            0.5,
            4.0,
            DiscreteDistribution::new([(0.0, 0.1), (4.0, 0.1), (8.0, 0.8)]),
        ),
    };
    let usual = DiscreteDistribution::new([(0.0, 0.25), (1.0, 0.25), (2.0, 0.25), (3.0, 0.25)]);
    let reservoir = ReservoirSpec {
        max_volume: 10.0,
        initial_volume: 1.0,
        final_min_volume: 1.0,
    };
    let mut nodes = Vec::with_capacity(HORIZON);
    for t in 0..HORIZON {
        let mut row = Vec::with_capacity(2);
        for n in 0..2 {
            let inflow = match (t, n) {
                (0, 0) => first_inflow.clone(),
                (1, 1) => DiscreteDistribution::point_mass(0.0),
                _ => usual.clone(),
            };
            row.push(NodePeriod {
                profit: PwlFunction::capped_linear(1.0, demand_cap),
                risk: PwlFunction::hinge(risk_slope),
                inflow,
                penalty: None,
            });
        }
        nodes.push(row);
    }
    Scenario {
        name: name.into(),
        reservoirs: vec![reservoir; 2],
        links: vec![
            LinkSpec {
                from: 0,
                to: 1,
                capacity: 5.0,
            },
            LinkSpec {
                from: 1,
                to: 0,
                capacity: 5.0,
            },
        ],
        nodes,
        transfer_cost: vec![vec![PwlFunction::linear(transfer_slope); 2]; HORIZON],
        default_penalty: None,
        realization: RealizationMode::Literal,
        provenance: tags(&[
            ("horizon", Provenance::Paper),
            ("reservoirs.max_volume", Provenance::Paper),
            ("reservoirs.initial_volume", Provenance::Paper),
            ("reservoirs.final_min_volume", Provenance::Paper),
            ("links", Provenance::Paper),
            ("functions.profit", Provenance::Reconstructed),
            ("functions.risk", Provenance::Reconstructed),
            ("functions.transfer_cost", Provenance::Reconstructed),
            ("distributions", Provenance::Reconstructed),
        ]),
    }
}

/// Eight-reservoir, six-period multi-connection network.
///
/// Reservoirs 1, 4 and 8 are large and feed their smaller neighbours over
/// bidirectional pipes. Inflows arrive in the first two (rainy) periods
/// and are zero afterwards.
pub fn builtin_angpuang() -> Scenario {
    const HORIZON: usize = 6;
    const BIG: [usize; 3] = [0, 3, 7];
    let capacity = [30.0, 5.0, 6.0, 25.0, 5.0, 4.0, 5.0, 20.0];
    let stored = [6.0, 1.0, 2.0, 5.0, 1.0, 1.0, 1.0, 4.0];
    let pairs = [(0, 1), (0, 2), (3, 2), (3, 4), (3, 5), (7, 5), (7, 6)];

    let reservoirs = capacity
        .iter()
        .zip(stored)
        .map(|(&m, v)| ReservoirSpec {
            max_volume: m,
            initial_volume: v,
            final_min_volume: v,
        })
        .collect();
    let links = pairs
        .iter()
        .flat_map(|&(a, b)| {
            [
                LinkSpec {
                    from: a,
                    to: b,
                    capacity: 2.5,
                },
                LinkSpec {
                    from: b,
                    to: a,
                    capacity: 2.5,
                },
            ]
        })
        .collect::<Vec<_>>();

    let big_rain = DiscreteDistribution::new([
        (0.0, 0.05),
        (2.0, 0.05),
        (4.0, 0.1),
        (6.0, 0.1),
        (8.0, 0.15),
        (10.0, 0.2),
        (12.0, 0.2),
        (14.0, 0.15),
    ]);
    let small_rain = DiscreteDistribution::new([
        (0.0, 0.1),
        (1.0, 0.1),
        (2.0, 0.15),
        (3.0, 0.2),
        (4.0, 0.25),
        (5.0, 0.2),
    ]);

    let mut nodes = Vec::with_capacity(HORIZON);
    for t in 0..HORIZON {
        let row = (0..capacity.len())
            .map(|n| {
                let big = BIG.contains(&n);
                let inflow = if t >= 2 {
                    DiscreteDistribution::point_mass(0.0)
                } else if big {
                    big_rain.clone()
                } else {
                    small_rain.clone()
                };
                let demand = if big { 2.5 } else { 1.5 };
                NodePeriod {
                    profit: PwlFunction::capped_linear(1.0, demand),
                    risk: PwlFunction::hinge(2.5),
                    inflow,
                    penalty: None,
                }
            })
            .collect();
        nodes.push(row);
    }
    let nlinks = links.len();
    Scenario {
        name: "angpuang".into(),
        reservoirs,
        links,
        nodes,
        transfer_cost: vec![vec![PwlFunction::linear(0.25); nlinks]; HORIZON],
        default_penalty: None,
        realization: RealizationMode::Literal,
        provenance: tags(&[
            ("horizon", Provenance::Paper),
            ("reservoirs.max_volume", Provenance::Reconstructed),
            ("reservoirs.initial_volume", Provenance::Reconstructed),
            ("reservoirs.final_min_volume", Provenance::Reconstructed),
            ("links.topology", Provenance::Reconstructed),
            ("links.capacity", Provenance::Paper),
            ("functions.profit.slope", Provenance::Paper),
            ("functions.profit.demand_cap", Provenance::Reconstructed),
            ("functions.risk", Provenance::Paper),
            ("functions.transfer_cost", Provenance::Paper),
            ("distributions", Provenance::Reconstructed),
        ]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SweepParameter {
    TransferCostSlope,
    RiskSlope,
    ProfitSlope,
    /// Sets `v0 = V = fraction * M` for every reservoir.
    InitialVolumeFraction,
}

impl SweepParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::TransferCostSlope => "transfer-cost-slope",
            SweepParameter::RiskSlope => "risk-slope",
            SweepParameter::ProfitSlope => "profit-slope",
            SweepParameter::InitialVolumeFraction => "initial-volume-fraction",
        }
    }

    pub fn admits(self, value: f64) -> bool {
        match self {
            SweepParameter::InitialVolumeFraction => value > 0.0 && value <= 1.0,
            _ => value.is_finite() && value >= 0.0,
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            SweepParameter::TransferCostSlope,
            SweepParameter::RiskSlope,
            SweepParameter::ProfitSlope,
            SweepParameter::InitialVolumeFraction,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
        .ok_or_else(|| alloc::format!("unknown sweep parameter `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepConfig {
    /// Scenario file path or `builtin:<name>`; resolved by the caller.
    pub base: String,
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(default = "default_replications"))]
    pub replications: usize,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
}

#[cfg(feature = "serde")]
fn default_replications() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("grid value {value} at index {index} is not admissible for {parameter}")]
    Inadmissible {
        index: usize,
        value: f64,
        parameter: SweepParameter,
    },
    #[error("replication count must be at least 1")]
    NoReplications,
}

impl SweepConfig {
    pub fn check(&self) -> Result<(), SweepError> {
        if self.grid.is_empty() {
            return Err(SweepError::EmptyGrid);
        }
        if self.replications == 0 {
            return Err(SweepError::NoReplications);
        }
        for (index, &value) in self.grid.iter().enumerate() {
            if !self.parameter.admits(value) {
                return Err(SweepError::Inadmissible {
                    index,
                    value,
                    parameter: self.parameter,
                });
            }
        }
        Ok(())
    }
}

/// Rescale `f` so its steepest slope becomes `rate`.
fn with_rate(f: &PwlFunction, rate: f64) -> Option<PwlFunction> {
    let current = f.max_abs_slope();
    (current > 0.0).then(|| f.scaled(rate / current))
}

/// `base` with a single parameter changed.
///
/// Slope parameters rescale each function of that kind so its steepest
/// slope equals `value`, which keeps demand caps and breakpoints. A zero
/// transfer cost or risk becomes `linear(value)` or `hinge(value)`; a zero
/// profit (no demand) stays zero.
pub fn apply_parameter(base: &Scenario, parameter: SweepParameter, value: f64) -> Scenario {
    let mut s = base.clone();
    match parameter {
        SweepParameter::TransferCostSlope => {
            for c in s.transfer_cost.iter_mut().flatten() {
                *c = with_rate(c, value).unwrap_or_else(|| PwlFunction::linear(value));
            }
        }
        SweepParameter::RiskSlope => {
            for node in s.nodes.iter_mut().flatten() {
                node.risk =
                    with_rate(&node.risk, value).unwrap_or_else(|| PwlFunction::hinge(value));
            }
        }
        SweepParameter::ProfitSlope => {
            for node in s.nodes.iter_mut().flatten() {
                if let Some(p) = with_rate(&node.profit, value) {
                    node.profit = p;
                }
            }
        }
        SweepParameter::InitialVolumeFraction => {
            for r in &mut s.reservoirs {
                r.initial_volume = value * r.max_volume;
                r.final_min_volume = r.initial_volume;
            }
        }
    }
    s.name = alloc::format!("{}@{}={}", base.name, parameter, value);
    s
}

pub fn expand_sweep(base: &Scenario, config: &SweepConfig) -> Result<Vec<Scenario>, SweepError> {
    config.check()?;
    Ok(config
        .grid
        .iter()
        .map(|&v| apply_parameter(base, config.parameter, v))
        .collect())
}
