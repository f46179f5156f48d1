//! Network, horizon and stochastic-inflow data model.
//!
//! Indices are zero-based throughout the library: reservoir `n` in
//! `0..N`, period `t` in `0..T` (period 1 of the plan is `t = 0`). File
//! formats and reports print them one-based.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::functions::{PwlFunction, Shape};

/// Absolute tolerance on the total probability mass of a distribution.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Where a quantity came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Provenance {
    /// Quoted verbatim from the published case study.
    Paper,
    /// Rebuilt from a figure whose values are not readable.
    Reconstructed,
    #[default]
    User,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReservoirSpec {
    pub max_volume: f64,
    pub initial_volume: f64,
    pub final_min_volume: f64,
}

/// Directed pumped transfer from `from` to `to`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkSpec {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
}

/// One support point of a discrete inflow distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    pub value: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscreteDistribution {
    pub support: Vec<Atom>,
}

impl DiscreteDistribution {
    pub fn new(support: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self {
            support: support
                .into_iter()
                .map(|(value, probability)| Atom { value, probability })
                .collect(),
        }
    }

    pub fn point_mass(value: f64) -> Self {
        Self::new([(value, 1.0)])
    }

    pub fn is_point_mass(&self) -> bool {
        self.support.len() == 1
    }

    /// Probability-weighted mean, clamped into [`bounds`](Self::bounds)
    /// since the masses only sum to one within tolerance.
    pub fn mean(&self) -> f64 {
        let (lo, hi) = self.bounds();
        let m: f64 = self.support.iter().map(|a| a.probability * a.value).sum();
        m.max(lo).min(hi)
    }

    /// Smallest and largest support value.
    pub fn bounds(&self) -> (f64, f64) {
        let first = self.support.first().map_or(0.0, |a| a.value);
        let last = self.support.last().map_or(0.0, |a| a.value);
        (first, last)
    }

    /// Every violated invariant, as messages.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.support.is_empty() {
            out.push(String::from("distribution has empty support"));
            return out;
        }
        for (k, a) in self.support.iter().enumerate() {
            if !a.value.is_finite() || a.value < 0.0 {
                out.push(format!(
                    "support value {} at index {k} is not a finite nonnegative volume",
                    a.value
                ));
            }
            if !(a.probability > 0.0) || !a.probability.is_finite() {
                out.push(format!(
                    "probability {} at index {k} is not positive",
                    a.probability
                ));
            }
            if k > 0 && a.value <= self.support[k - 1].value {
                out.push(format!(
                    "support values not strictly ascending at index {k}"
                ));
            }
        }
        let total: f64 = self.support.iter().map(|a| a.probability).sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            out.push(format!("distribution sums to {total}"));
        }
        out
    }
}

/// Functions and inflow for one reservoir in one period.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NodePeriod {
    /// Release profit `G`.
    pub profit: PwlFunction,
    /// Shortfall risk `R`, charged on `target - realized` release.
    pub risk: PwlFunction,
    pub inflow: DiscreteDistribution,
    /// Overflow penalty `F`; `None` means the scenario default.
    pub penalty: Option<f64>,
}

/// How realized trajectories treat physically impossible states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RealizationMode {
    /// Volumes are never capped and releases may go negative.
    #[default]
    Literal,
    /// Volumes spill above capacity and releases are floored at zero.
    Physical,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scenario {
    pub name: String,
    pub reservoirs: Vec<ReservoirSpec>,
    pub links: Vec<LinkSpec>,
    /// `nodes[t][n]`.
    pub nodes: Vec<Vec<NodePeriod>>,
    /// Transfer cost `C` per link, `transfer_cost[t][l]`.
    pub transfer_cost: Vec<Vec<PwlFunction>>,
    /// Penalty applied where a node leaves `penalty` unset.
    pub default_penalty: Option<f64>,
    pub realization: RealizationMode,
    /// Origin of each quantity group, keyed by group name.
    pub provenance: BTreeMap<String, Provenance>,
}

/// Where a validation problem was found. One-based in its `Display`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location {
    pub reservoir: Option<usize>,
    pub link: Option<usize>,
    pub period: Option<usize>,
}

impl Location {
    pub fn reservoir(n: usize) -> Self {
        Self {
            reservoir: Some(n),
            ..Self::default()
        }
    }
    pub fn link(l: usize) -> Self {
        Self {
            link: Some(l),
            ..Self::default()
        }
    }
    pub fn node(t: usize, n: usize) -> Self {
        Self {
            reservoir: Some(n),
            period: Some(t),
            link: None,
        }
    }
    pub fn link_period(t: usize, l: usize) -> Self {
        Self {
            link: Some(l),
            period: Some(t),
            reservoir: None,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(n) = self.reservoir {
            parts.push(format!("reservoir {}", n + 1));
        }
        if let Some(l) = self.link {
            parts.push(format!("link {}", l + 1));
        }
        if let Some(t) = self.period {
            parts.push(format!("period {}", t + 1));
        }
        if parts.is_empty() {
            f.write_str("scenario")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Outcome of [`Scenario::validate`]: every problem found, in scan order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, location: Location, message: impl Into<String>) {
        self.violations.push(Violation {
            location,
            message: message.into(),
        });
    }

    pub fn into_result(self) -> Result<(), ValidationReport> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for ValidationReport {}

impl Scenario {
    pub fn num_reservoirs(&self) -> usize {
        self.reservoirs.len()
    }

    pub fn horizon(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, t: usize, n: usize) -> &NodePeriod {
        &self.nodes[t][n]
    }

    /// Indices of links leaving `n`.
    pub fn out_links(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.from == n)
            .map(|(i, _)| i)
    }

    /// Indices of links entering `n`.
    pub fn in_links(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.to == n)
            .map(|(i, _)| i)
    }

    /// Largest profit slope anywhere in the scenario.
    pub fn max_profit_slope(&self) -> f64 {
        self.nodes
            .iter()
            .flatten()
            .map(|np| np.profit.max_abs_slope())
            .fold(0.0, f64::max)
    }

    /// Overflow penalty at `(t, n)`: explicit value, scenario default, or
    /// 1000 times the largest profit slope (at least 1000).
    pub fn penalty(&self, t: usize, n: usize) -> f64 {
        self.nodes[t][n]
            .penalty
            .or(self.default_penalty)
            .unwrap_or_else(|| 1000.0 * self.max_profit_slope().max(1.0))
    }

    /// Scan every invariant and collect all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n_res = self.reservoirs.len();
        let horizon = self.nodes.len();
        if n_res == 0 {
            report.push(Location::default(), "scenario has no reservoirs");
        }
        if horizon == 0 {
            report.push(Location::default(), "horizon must be at least one period");
        }
        for (n, r) in self.reservoirs.iter().enumerate() {
            let loc = Location::reservoir(n);
            if !r.max_volume.is_finite() || r.max_volume < 0.0 {
                report.push(loc, "capacity must be a finite nonnegative volume");
            }
            if !(r.initial_volume >= 0.0) {
                report.push(loc, "initial volume is negative");
            } else if r.initial_volume > r.max_volume {
                report.push(loc, "initial volume exceeds capacity");
            }
            if !(r.final_min_volume >= 0.0) {
                report.push(loc, "final minimum volume is negative");
            } else if r.final_min_volume > r.max_volume {
                report.push(loc, "final minimum volume exceeds capacity");
            }
        }
        for (l, link) in self.links.iter().enumerate() {
            let loc = Location::link(l);
            if link.from >= n_res || link.to >= n_res {
                report.push(loc, "link endpoint is not a reservoir");
            }
            if link.from == link.to {
                report.push(loc, "link connects a reservoir to itself");
            }
            if !(link.capacity > 0.0) || !link.capacity.is_finite() {
                report.push(loc, "link capacity must be positive and finite");
            }
            if self.links[..l]
                .iter()
                .any(|o| o.from == link.from && o.to == link.to)
            {
                report.push(loc, "duplicate link for this ordered pair");
            }
        }
        if let Some(f) = self.default_penalty {
            if !(f > 0.0) || !f.is_finite() {
                report.push(Location::default(), "default penalty must be positive");
            }
        }
        if self.transfer_cost.len() != horizon {
            report.push(
                Location::default(),
                format!(
                    "transfer costs cover {} periods, horizon is {horizon}",
                    self.transfer_cost.len()
                ),
            );
        }
        for (t, row) in self.nodes.iter().enumerate() {
            if row.len() != n_res {
                report.push(
                    Location {
                        period: Some(t),
                        ..Location::default()
                    },
                    format!("{} node entries for {n_res} reservoirs", row.len()),
                );
            }
            for (n, np) in row.iter().enumerate() {
                let loc = Location::node(t, n);
                if let Err(e) = np.profit.verify_shape(Shape::CONCAVE_NONDECREASING) {
                    report.push(loc, format!("profit: {e}"));
                }
                if let Err(e) = np.risk.verify_shape(Shape::CONVEX_NONDECREASING) {
                    report.push(loc, format!("risk: {e}"));
                } else if !np.risk.vanishes_on_nonpositive() {
                    report.push(loc, "risk must be zero on nonpositive shortfall");
                }
                for msg in np.inflow.problems() {
                    report.push(loc, msg);
                }
                if let Some(f) = np.penalty {
                    if !(f > 0.0) || !f.is_finite() {
                        report.push(loc, "penalty must be positive");
                    }
                }
            }
        }
        for (t, row) in self.transfer_cost.iter().enumerate() {
            if row.len() != self.links.len() {
                report.push(
                    Location {
                        period: Some(t),
                        ..Location::default()
                    },
                    format!(
                        "{} transfer costs for {} links",
                        row.len(),
                        self.links.len()
                    ),
                );
            }
            for (l, c) in row.iter().enumerate() {
                if let Err(e) = c.verify_shape(Shape::CONVEX_NONDECREASING) {
                    report.push(Location::link_period(t, l), format!("transfer cost: {e}"));
                }
            }
        }
        report
    }
}

/// Optimized decision variables. All matrices are indexed `[t][..]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Plan {
    /// Transfers per link, `q[t][l]`.
    pub q: Vec<Vec<f64>>,
    /// Target releases `g[t][n]`.
    pub g: Vec<Vec<f64>>,
    /// Inflow predictions `x[t][n]`.
    pub x: Vec<Vec<f64>>,
    /// Planned end-of-period volumes `v[t][n]`.
    pub v: Vec<Vec<f64>>,
    pub planner_objective: f64,
}

impl Plan {
    /// True when every matrix has the scenario's dimensions.
    pub fn matches(&self, s: &Scenario) -> bool {
        let t = s.horizon();
        let n = s.num_reservoirs();
        let dims = |m: &Vec<Vec<f64>>, w: usize| m.len() == t && m.iter().all(|r| r.len() == w);
        dims(&self.q, s.links.len()) && dims(&self.g, n) && dims(&self.x, n) && dims(&self.v, n)
    }

    /// Planned volume at the end of period `t - 1`, or the initial volume.
    pub fn volume_before(&self, s: &Scenario, t: usize, n: usize) -> f64 {
        if t == 0 {
            s.reservoirs[n].initial_volume
        } else {
            self.v[t - 1][n]
        }
    }

    pub fn total_transfer(&self) -> f64 {
        self.q.iter().flatten().sum()
    }
}
