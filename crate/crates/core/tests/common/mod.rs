//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

pub mod examples;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reservoir_core::functions::PwlFunction;
use reservoir_core::lp::{LpProblem, Relation};
use reservoir_core::model::{
    DiscreteDistribution, LinkSpec, NodePeriod, Plan, RealizationMode, ReservoirSpec, Scenario,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small integer-valued coefficient so that degenerate vertices actually occur.
fn coeff(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random_bool(0.25) {
        0.0
    } else {
        rng.random_range(-4i32..=4) as f64 + rng.random_range(0..4) as f64 * 0.25
    }
}

/// Boxed LP with at most `max_vars` variables and `max_rows` rows.
pub fn random_lp(rng: &mut ChaCha8Rng, max_vars: usize, max_rows: usize) -> LpProblem {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(0..=max_rows);
    let mut p = LpProblem::new();
    for j in 0..n {
        let lo = rng.random_range(-5i32..=2) as f64;
        let hi = lo + rng.random_range(0i32..=8) as f64;
        p.add_variable(format!("x{j}"), lo, hi, coeff(rng));
    }
    for i in 0..m {
        let row: Vec<(usize, f64)> = (0..n)
            .map(|j| (j, coeff(rng)))
            .filter(|&(_, a)| a != 0.0)
            .collect();
        let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.random_range(0..3)];
        let rhs = if rel == Relation::Eq {
            // keep equalities satisfiable more often than not
            let x: Vec<f64> = p
                .variables
                .iter()
                .map(|v| rng.random_range(v.lower..=v.upper))
                .collect();
            row.iter().map(|&(j, a)| a * x[j]).sum::<f64>().round()
        } else {
            rng.random_range(-10i32..=10) as f64
        };
        p.add_constraint(format!("r{i}"), row, rel, rhs);
    }
    p
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_reservoirs: usize,
    pub max_horizon: usize,
    pub point_mass: bool,
    /// Lower bound on all transfer-cost slopes.
    pub min_transfer_slope: f64,
    pub max_profit_slope: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_reservoirs: 4,
            max_horizon: 4,
            point_mass: false,
            min_transfer_slope: 0.05,
            max_profit_slope: 2.0,
        }
    }
}

fn profit(rng: &mut ChaCha8Rng, max_slope: f64) -> PwlFunction {
    let slope = rng.random_range(0.25..=max_slope);
    let cap = rng.random_range(1..=6) as f64;
    if rng.random_bool(0.3) {
        // two concave pieces before the cap
        let mid = cap / 2.0;
        let flatter = slope * rng.random_range(0.2..0.9);
        PwlFunction::new(
            vec![
                (0.0, 0.0),
                (mid, slope * mid),
                (cap, slope * mid + flatter * mid),
            ],
            slope,
            0.0,
        )
        .unwrap()
    } else {
        PwlFunction::capped_linear(slope, cap)
    }
}

fn risk(rng: &mut ChaCha8Rng) -> PwlFunction {
    let slope = rng.random_range(0.1..=4.0);
    if rng.random_bool(0.3) {
        let knee = rng.random_range(1..=3) as f64;
        let steeper = slope * rng.random_range(1.2..3.0);
        PwlFunction::new(vec![(0.0, 0.0), (knee, slope * knee)], 0.0, steeper).unwrap()
    } else {
        PwlFunction::hinge(slope)
    }
}

fn transfer_cost(rng: &mut ChaCha8Rng, min_slope: f64) -> PwlFunction {
    let slope = rng.random_range(min_slope..=min_slope + 1.5);
    if rng.random_bool(0.3) {
        let knee = rng.random_range(1..=3) as f64;
        PwlFunction::new(vec![(0.0, 0.0), (knee, slope * knee)], slope, slope * 2.0).unwrap()
    } else {
        PwlFunction::linear(slope)
    }
}

fn inflow(rng: &mut ChaCha8Rng, point_mass: bool) -> DiscreteDistribution {
    if point_mass || rng.random_bool(0.2) {
        return DiscreteDistribution::point_mass(rng.random_range(0..=6) as f64 * 0.5);
    }
    let k = rng.random_range(2..=4);
    let mut values: Vec<u32> = (0..=12).collect();
    values.shuffle(rng);
    let mut values: Vec<f64> = values[..k].iter().map(|&v| v as f64 * 0.5).collect();
    values.sort_by(f64::total_cmp);
    let weights: Vec<u32> = (0..k).map(|_| rng.random_range(1..=4)).collect();
    let total: u32 = weights.iter().sum();
    DiscreteDistribution::new(
        values
            .into_iter()
            .zip(weights.iter().map(|&w| w as f64 / total as f64)),
    )
}

/// A valid scenario whose capacities exceed any single-period inflow, so
/// overflow is never forced.
pub fn random_scenario(rng: &mut ChaCha8Rng, shape: Shape) -> Scenario {
    let n = rng.random_range(1..=shape.max_reservoirs);
    let horizon = rng.random_range(1..=shape.max_horizon);
    let reservoirs: Vec<ReservoirSpec> = (0..n)
        .map(|_| {
            let m = rng.random_range(8..=20) as f64;
            let v0 = rng.random_range(0..=8) as f64 * 0.5;
            let terminal = if rng.random_bool(0.5) {
                0.0
            } else {
                v0 * rng.random_range(0.0..=1.0)
            };
            ReservoirSpec {
                max_volume: m,
                initial_volume: v0,
                final_min_volume: terminal,
            }
        })
        .collect();
    let mut links = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random_bool(0.5) {
                links.push(LinkSpec {
                    from: a,
                    to: b,
                    capacity: rng.random_range(1..=5) as f64,
                });
            }
        }
    }
    let nodes = (0..horizon)
        .map(|_| {
            (0..n)
                .map(|_| NodePeriod {
                    profit: profit(rng, shape.max_profit_slope),
                    risk: risk(rng),
                    inflow: inflow(rng, shape.point_mass),
                    penalty: None,
                })
                .collect()
        })
        .collect();
    let transfer_cost = (0..horizon)
        .map(|_| {
            links
                .iter()
                .map(|_| transfer_cost(rng, shape.min_transfer_slope))
                .collect()
        })
        .collect();
    let s = Scenario {
        name: "random".into(),
        reservoirs,
        links,
        nodes,
        transfer_cost,
        default_penalty: None,
        realization: RealizationMode::Literal,
        provenance: BTreeMap::new(),
    };
    assert!(
        s.validate().is_ok(),
        "generator produced an invalid scenario: {}",
        s.validate()
    );
    s
}

/// Arbitrary (not optimal) decisions whose volumes obey the state equation.
pub fn random_plan(rng: &mut ChaCha8Rng, s: &Scenario) -> Plan {
    let nres = s.num_reservoirs();
    let mut prev: Vec<f64> = s.reservoirs.iter().map(|r| r.initial_volume).collect();
    let (mut q, mut g, mut x, mut v) = (vec![], vec![], vec![], vec![]);
    for t in 0..s.horizon() {
        let qt: Vec<f64> = s
            .links
            .iter()
            .map(|l| rng.random_range(0.0..=l.capacity))
            .collect();
        let gt: Vec<f64> = (0..nres).map(|_| rng.random_range(0.0..5.0)).collect();
        let xt: Vec<f64> = (0..nres)
            .map(|n| {
                let (lo, hi) = s.node(t, n).inflow.bounds();
                rng.random_range(lo..=hi)
            })
            .collect();
        let vt: Vec<f64> = (0..nres)
            .map(|n| {
                let inn: f64 = s.in_links(n).map(|l| qt[l]).sum();
                let out: f64 = s.out_links(n).map(|l| qt[l]).sum();
                prev[n] - gt[n] + xt[n] + inn - out
            })
            .collect();
        prev.clone_from(&vt);
        q.push(qt);
        g.push(gt);
        x.push(xt);
        v.push(vt);
    }
    Plan {
        q,
        g,
        x,
        v,
        planner_objective: 0.0,
    }
}

/// Inflows drawn uniformly from each support, independent of the
/// simulator's own sampler.
pub fn random_inflows(rng: &mut ChaCha8Rng, s: &Scenario) -> Vec<Vec<f64>> {
    (0..s.horizon())
        .map(|t| {
            (0..s.num_reservoirs())
                .map(|n| {
                    let support = &s.node(t, n).inflow.support;
                    support[rng.random_range(0..support.len())].value
                })
                .collect()
        })
        .collect()
}
