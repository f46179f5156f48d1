//! Hand-built examples with brute-force oracles.

use std::collections::BTreeMap;

use reservoir_core::formulation::Method;
use reservoir_core::functions::PwlFunction;
use reservoir_core::model::{
    DiscreteDistribution, LinkSpec, NodePeriod, RealizationMode, ReservoirSpec, Scenario,
};

/// Planning objective of given decisions, or `None` if they break a
/// constraint. Volumes follow from the state equation.
pub fn evaluate(
    s: &Scenario,
    method: Method,
    q: &[Vec<f64>],
    g: &[Vec<f64>],
    x: &[Vec<f64>],
) -> Option<f64> {
    let eps = 1e-9;
    let nres = s.num_reservoirs();
    let mut prev: Vec<f64> = s.reservoirs.iter().map(|r| r.initial_volume).collect();
    let mut total = 0.0;
    for t in 0..s.horizon() {
        for (l, link) in s.links.iter().enumerate() {
            if q[t][l] < -eps || q[t][l] > link.capacity + eps {
                return None;
            }
            total -= s.transfer_cost[t][l].evaluate(q[t][l]);
        }
        let mut next = prev.clone();
        for n in 0..nres {
            let node = s.node(t, n);
            let (lo, hi) = node.inflow.bounds();
            let ok_x = match method {
                Method::Proposed => x[t][n] >= lo - eps && x[t][n] <= hi + eps,
                Method::Deterministic => x[t][n] == node.inflow.mean(),
            };
            if !ok_x || g[t][n] < -eps {
                return None;
            }
            let out: f64 = s
                .links
                .iter()
                .enumerate()
                .filter(|(_, k)| k.from == n)
                .map(|(l, _)| q[t][l])
                .sum();
            let inn: f64 = s
                .links
                .iter()
                .enumerate()
                .filter(|(_, k)| k.to == n)
                .map(|(l, _)| q[t][l])
                .sum();
            if g[t][n] + out > prev[n] + eps {
                return None;
            }
            next[n] = prev[n] - g[t][n] + x[t][n] + inn - out;
            if next[n] < -eps {
                return None;
            }
            total += node.profit.evaluate(g[t][n]);
            total -= s.penalty(t, n) * (next[n] - s.reservoirs[n].max_volume).max(0.0);
            if method == Method::Proposed {
                for a in &node.inflow.support {
                    total -= a.probability * node.risk.evaluate(x[t][n] - a.value);
                }
            }
        }
        prev = next;
    }
    if (0..nres).any(|n| prev[n] < s.reservoirs[n].final_min_volume - eps) {
        return None;
    }
    Some(total)
}

pub fn node(profit: PwlFunction, inflow: DiscreteDistribution) -> NodePeriod {
    NodePeriod {
        profit,
        risk: PwlFunction::hinge(2.5),
        inflow,
        penalty: None,
    }
}

pub fn single_reservoir(inflow: DiscreteDistribution) -> Scenario {
    Scenario {
        name: "single".into(),
        reservoirs: vec![ReservoirSpec {
            max_volume: 10.0,
            initial_volume: 5.0,
            final_min_volume: 0.0,
        }],
        links: vec![],
        nodes: vec![vec![node(PwlFunction::capped_linear(1.0, 10.0), inflow)]],
        transfer_cost: vec![vec![]],
        default_penalty: None,
        realization: RealizationMode::Literal,
        provenance: BTreeMap::new(),
    }
}

pub fn two_reservoirs() -> Scenario {
    let dry = DiscreteDistribution::point_mass(0.0);
    let row = || {
        vec![
            node(PwlFunction::linear(0.0), dry.clone()),
            node(PwlFunction::capped_linear(1.0, 10.0), dry.clone()),
        ]
    };
    Scenario {
        name: "pair".into(),
        reservoirs: vec![
            ReservoirSpec {
                max_volume: 10.0,
                initial_volume: 4.0,
                final_min_volume: 0.0,
            },
            ReservoirSpec {
                max_volume: 10.0,
                initial_volume: 0.0,
                final_min_volume: 0.0,
            },
        ],
        links: vec![LinkSpec {
            from: 0,
            to: 1,
            capacity: 5.0,
        }],
        nodes: vec![row(), row()],
        transfer_cost: vec![vec![PwlFunction::linear(0.25)]; 2],
        default_penalty: None,
        realization: RealizationMode::Literal,
        provenance: BTreeMap::new(),
    }
}

pub const GRID: f64 = 1e-3;

/// Best release on a 1e-3 grid for the one-period single reservoir,
/// as `(objective, g)`.
pub fn grid_search_single(s: &Scenario, method: Method) -> (f64, f64) {
    let x = s.node(0, 0).inflow.mean();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..=10_000 {
        let g = i as f64 * GRID;
        if let Some(val) = evaluate(s, method, &[vec![]], &[vec![g]], &[vec![x]]) {
            if val > best.0 {
                best = (val, g);
            }
        }
    }
    best
}

/// Best `(objective, q^1, g_2^2)` on a 1e-3 grid for the two-reservoir case.
pub fn grid_search_pair(s: &Scenario) -> (f64, f64, f64) {
    let zero = vec![vec![0.0; 2]; 2];
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=5_000 {
        let q1 = i as f64 * GRID;
        let q = [vec![q1], vec![0.0]];
        for j in 0..=10_000 {
            let g2 = j as f64 * GRID;
            if g2 > q1 + 1e-9 {
                // budget already violated; larger releases only more so
                break;
            }
            let g = [vec![0.0, 0.0], vec![0.0, g2]];
            if let Some(val) = evaluate(s, Method::Proposed, &q, &g, &zero) {
                if val > best.0 {
                    best = (val, q1, g2);
                }
            }
        }
    }
    best
}
