//! TOML scenario files.
//!
//! Reservoirs, links and periods are numbered from 1 in files. Functions,
//! distributions and penalty overrides are assigned to sets of cells; a
//! missing `reservoirs`, `links` or `periods` list means "all", and later
//! entries override earlier ones for the cells they name.
//!
//! ```toml
//! name = "tiny"
//! horizon = 2
//! realization = "literal"   # or "physical"; optional
//! penalty = 5000.0          # default overflow penalty; optional
//!
//! [provenance]
//! horizon = "paper"
//!
//! [[reservoirs]]
//! max_volume = 10.0
//! initial_volume = 1.0
//! final_min_volume = 1.0
//!
//! [[links]]
//! from = 1
//! to = 2
//! capacity = 5.0
//!
//! [[functions]]
//! kind = "profit"            # profit | risk | transfer-cost
//! reservoirs = [1, 2]        # transfer-cost entries use `links`
//! periods = [1, 2]
//! breakpoints = [[0.0, 0.0], [4.0, 4.0]]
//! left_slope = 1.0
//! right_slope = 0.0
//! shape = "concave"          # optional assertion
//!
//! [[distributions]]
//! reservoirs = [1]
//! periods = [1]
//! support = [[0.0, 0.5], [4.0, 0.5]]   # (value, probability)
//!
//! [[penalties]]
//! reservoirs = [2]
//! value = 2000.0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use reservoir_core::functions::{FunctionError, PwlFunction, Shape};
use reservoir_core::model::{
    DiscreteDistribution, LinkSpec, NodePeriod, Provenance, RealizationMode, ReservoirSpec,
    Scenario, ValidationReport,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioFileError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {context}: {message}")]
    Schema {
        path: PathBuf,
        context: String,
        message: String,
    },
    #[error("{path}: invalid scenario:\n{report}")]
    Invalid {
        path: PathBuf,
        report: ValidationReport,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    Profit,
    Risk,
    TransferCost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeclaredShape {
    Convex,
    Concave,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileReservoir {
    max_volume: f64,
    initial_volume: f64,
    final_min_volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileLink {
    from: usize,
    to: usize,
    capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileFunction {
    kind: FunctionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reservoirs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    links: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    periods: Option<Vec<usize>>,
    breakpoints: Vec<[f64; 2]>,
    left_slope: f64,
    right_slope: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape: Option<DeclaredShape>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDistribution {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reservoirs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    periods: Option<Vec<usize>>,
    support: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePenalty {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reservoirs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    periods: Option<Vec<usize>>,
    value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileScenario {
    name: String,
    horizon: usize,
    #[serde(default)]
    realization: RealizationMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    penalty: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    provenance: BTreeMap<String, Provenance>,
    reservoirs: Vec<FileReservoir>,
    #[serde(default)]
    links: Vec<FileLink>,
    #[serde(default)]
    functions: Vec<FileFunction>,
    #[serde(default)]
    distributions: Vec<FileDistribution>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    penalties: Vec<FilePenalty>,
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioFileError::Read {
        path: path.into(),
        source,
    })?;
    parse_scenario(&text, path)
}

/// Parse file contents; `path` is only used in error messages.
pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, ScenarioFileError> {
    let file: FileScenario = toml::from_str(text).map_err(|e| ScenarioFileError::Parse {
        path: path.into(),
        message: e.to_string(),
    })?;
    let s = from_file(file).map_err(|(context, message)| ScenarioFileError::Schema {
        path: path.into(),
        context,
        message,
    })?;
    s.validate()
        .into_result()
        .map_err(|report| ScenarioFileError::Invalid {
            path: path.into(),
            report,
        })?;
    Ok(s)
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<(), ScenarioFileError> {
    crate::report::write_atomic(path, render_scenario(s).as_bytes()).map_err(|source| {
        ScenarioFileError::Write {
            path: path.into(),
            source,
        }
    })
}

pub fn render_scenario(s: &Scenario) -> String {
    let body = toml::to_string(&to_file(s)).expect("scenario data always serializes");
    let mut out = String::new();
    let _ = writeln!(out, "# Reservoir network scenario. Indices are 1-based.");
    out.push_str(&body);
    out
}

type SchemaError = (String, String);

/// Expand an optional 1-based index list into 0-based indices.
fn select(
    list: &Option<Vec<usize>>,
    count: usize,
    what: &str,
    context: &str,
) -> Result<Vec<usize>, SchemaError> {
    match list {
        None => Ok((0..count).collect()),
        Some(items) => items
            .iter()
            .map(|&i| {
                if i == 0 || i > count {
                    Err((
                        context.to_string(),
                        format!("{what} {i} out of range 1..={count}"),
                    ))
                } else {
                    Ok(i - 1)
                }
            })
            .collect(),
    }
}

fn function_from(f: &FileFunction, context: &str) -> Result<PwlFunction, SchemaError> {
    let bps = f.breakpoints.iter().map(|&[x, y]| (x, y)).collect();
    let func = PwlFunction::new(bps, f.left_slope, f.right_slope)
        .map_err(|e: FunctionError| (context.to_string(), e.to_string()))?;
    if let Some(declared) = f.shape {
        let need = match declared {
            DeclaredShape::Convex => Shape::CONVEX,
            DeclaredShape::Concave => Shape::CONCAVE,
            DeclaredShape::Linear => Shape::CONVEX.union(Shape::CONCAVE),
        };
        if let Err(v) = func.verify_shape(need) {
            return Err((
                context.to_string(),
                format!("declared {declared:?} but {v}").to_lowercase(),
            ));
        }
    }
    Ok(func)
}

fn from_file(f: FileScenario) -> Result<Scenario, SchemaError> {
    let horizon = f.horizon;
    let nres = f.reservoirs.len();
    let nlinks = f.links.len();
    if horizon == 0 {
        return Err(("horizon".into(), "must be at least 1".into()));
    }
    let reservoirs = f
        .reservoirs
        .iter()
        .map(|r| ReservoirSpec {
            max_volume: r.max_volume,
            initial_volume: r.initial_volume,
            final_min_volume: r.final_min_volume,
        })
        .collect();
    let mut links = Vec::with_capacity(nlinks);
    for (i, l) in f.links.iter().enumerate() {
        let context = format!("links[{}]", i + 1);
        let from = select(&Some(vec![l.from]), nres, "reservoir", &context)?[0];
        let to = select(&Some(vec![l.to]), nres, "reservoir", &context)?[0];
        links.push(LinkSpec {
            from,
            to,
            capacity: l.capacity,
        });
    }

    let mut profit = vec![vec![None; nres]; horizon];
    let mut risk = vec![vec![None; nres]; horizon];
    let mut cost = vec![vec![None; nlinks]; horizon];
    for (i, func) in f.functions.iter().enumerate() {
        let context = format!("functions[{}]", i + 1);
        let value = function_from(func, &context)?;
        let periods = select(&func.periods, horizon, "period", &context)?;
        let (targets, cells) = match func.kind {
            FunctionKind::Profit | FunctionKind::Risk => {
                if func.links.is_some() {
                    return Err((
                        context,
                        "`links` applies to transfer-cost functions only".into(),
                    ));
                }
                let grid = if func.kind == FunctionKind::Profit {
                    &mut profit
                } else {
                    &mut risk
                };
                (select(&func.reservoirs, nres, "reservoir", &context)?, grid)
            }
            FunctionKind::TransferCost => {
                if func.reservoirs.is_some() {
                    return Err((
                        context,
                        "transfer-cost functions are assigned by `links`".into(),
                    ));
                }
                (select(&func.links, nlinks, "link", &context)?, &mut cost)
            }
        };
        for &t in &periods {
            for &j in &targets {
                cells[t][j] = Some(value.clone());
            }
        }
    }

    let mut inflow = vec![vec![None; nres]; horizon];
    for (i, d) in f.distributions.iter().enumerate() {
        let context = format!("distributions[{}]", i + 1);
        let periods = select(&d.periods, horizon, "period", &context)?;
        let targets = select(&d.reservoirs, nres, "reservoir", &context)?;
        let dist = DiscreteDistribution::new(d.support.iter().map(|&[v, p]| (v, p)));
        for &t in &periods {
            for &n in &targets {
                inflow[t][n] = Some(dist.clone());
            }
        }
    }

    let mut penalty = vec![vec![None; nres]; horizon];
    for (i, p) in f.penalties.iter().enumerate() {
        let context = format!("penalties[{}]", i + 1);
        for t in select(&p.periods, horizon, "period", &context)? {
            for n in select(&p.reservoirs, nres, "reservoir", &context)? {
                penalty[t][n] = Some(p.value);
            }
        }
    }

    let missing = |what: &str, t: usize, idx: usize, unit: &str| {
        (
            what.to_string(),
            format!("no entry covers period {} {unit} {}", t + 1, idx + 1),
        )
    };
    let mut nodes = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let mut row = Vec::with_capacity(nres);
        for n in 0..nres {
            row.push(NodePeriod {
                profit: profit[t][n]
                    .take()
                    .ok_or_else(|| missing("functions", t, n, "reservoir"))?,
                risk: risk[t][n]
                    .take()
                    .ok_or_else(|| missing("functions", t, n, "reservoir"))?,
                inflow: inflow[t][n]
                    .take()
                    .ok_or_else(|| missing("distributions", t, n, "reservoir"))?,
                penalty: penalty[t][n],
            });
        }
        nodes.push(row);
    }
    let mut transfer_cost = Vec::with_capacity(horizon);
    for (t, row) in cost.into_iter().enumerate() {
        let mut out = Vec::with_capacity(nlinks);
        for (l, c) in row.into_iter().enumerate() {
            out.push(c.ok_or_else(|| missing("functions", t, l, "link"))?);
        }
        transfer_cost.push(out);
    }

    Ok(Scenario {
        name: f.name,
        reservoirs,
        links,
        nodes,
        transfer_cost,
        default_penalty: f.penalty,
        realization: f.realization,
        provenance: f.provenance,
    })
}

/// Group equal values by period: each distinct value gets, per period, the
/// list of indices holding it; periods with identical lists are merged.
/// Returns `(value, periods, indices)` in first-seen order, 0-based.
fn group<T: PartialEq + Clone>(grid: &[Vec<T>]) -> Vec<(T, Vec<usize>, Vec<usize>)> {
    let mut per_period: Vec<(T, usize, Vec<usize>)> = Vec::new();
    for (t, row) in grid.iter().enumerate() {
        let mut seen: Vec<(T, Vec<usize>)> = Vec::new();
        for (j, v) in row.iter().enumerate() {
            match seen.iter_mut().find(|(w, _)| w == v) {
                Some((_, idx)) => idx.push(j),
                None => seen.push((v.clone(), vec![j])),
            }
        }
        per_period.extend(seen.into_iter().map(|(v, idx)| (v, t, idx)));
    }
    let mut out: Vec<(T, Vec<usize>, Vec<usize>)> = Vec::new();
    for (v, t, idx) in per_period {
        match out.iter_mut().find(|(w, _, i)| *w == v && *i == idx) {
            Some((_, periods, _)) => periods.push(t),
            None => out.push((v, vec![t], idx)),
        }
    }
    out
}

/// `None` when the list covers everything, else the 1-based list.
fn compress(list: Vec<usize>, count: usize) -> Option<Vec<usize>> {
    if list.len() == count && list.iter().enumerate().all(|(i, &j)| i == j) {
        None
    } else {
        Some(list.into_iter().map(|i| i + 1).collect())
    }
}

fn file_function(kind: FunctionKind, f: &PwlFunction) -> FileFunction {
    FileFunction {
        kind,
        reservoirs: None,
        links: None,
        periods: None,
        breakpoints: f.breakpoints().iter().map(|&(x, y)| [x, y]).collect(),
        left_slope: f.left_slope(),
        right_slope: f.right_slope(),
        shape: None,
    }
}

fn to_file(s: &Scenario) -> FileScenario {
    let horizon = s.horizon();
    let nres = s.num_reservoirs();
    let nlinks = s.links.len();
    let mut functions = Vec::new();
    for kind in [FunctionKind::Profit, FunctionKind::Risk] {
        let grid: Vec<Vec<PwlFunction>> = s
            .nodes
            .iter()
            .map(|row| {
                row.iter()
                    .map(|np| {
                        if kind == FunctionKind::Profit {
                            np.profit.clone()
                        } else {
                            np.risk.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        for (f, periods, idx) in group(&grid) {
            let mut entry = file_function(kind, &f);
            entry.periods = compress(periods, horizon);
            entry.reservoirs = compress(idx, nres);
            functions.push(entry);
        }
    }
    for (f, periods, idx) in group(&s.transfer_cost) {
        let mut entry = file_function(FunctionKind::TransferCost, &f);
        entry.periods = compress(periods, horizon);
        entry.links = compress(idx, nlinks);
        functions.push(entry);
    }

    let inflows: Vec<Vec<DiscreteDistribution>> = s
        .nodes
        .iter()
        .map(|row| row.iter().map(|np| np.inflow.clone()).collect())
        .collect();
    let distributions = group(&inflows)
        .into_iter()
        .map(|(d, periods, idx)| FileDistribution {
            reservoirs: compress(idx, nres),
            periods: compress(periods, horizon),
            support: d.support.iter().map(|a| [a.value, a.probability]).collect(),
        })
        .collect();

    let penalties_grid: Vec<Vec<Option<f64>>> = s
        .nodes
        .iter()
        .map(|row| row.iter().map(|np| np.penalty).collect())
        .collect();
    let penalties = group(&penalties_grid)
        .into_iter()
        .filter_map(|(p, periods, idx)| {
            p.map(|value| FilePenalty {
                reservoirs: compress(idx, nres),
                periods: compress(periods, horizon),
                value,
            })
        })
        .collect();

    FileScenario {
        name: s.name.clone(),
        horizon,
        realization: s.realization,
        penalty: s.default_penalty,
        provenance: s.provenance.clone(),
        reservoirs: s
            .reservoirs
            .iter()
            .map(|r| FileReservoir {
                max_volume: r.max_volume,
                initial_volume: r.initial_volume,
                final_min_volume: r.final_min_volume,
            })
            .collect(),
        links: s
            .links
            .iter()
            .map(|l| FileLink {
                from: l.from + 1,
                to: l.to + 1,
                capacity: l.capacity,
            })
            .collect(),
        functions,
        distributions,
        penalties,
    }
}

/// Resolve `builtin:<name>` or load a file.
pub fn resolve_scenario(reference: &str) -> Result<Scenario, ScenarioFileError> {
    match reference.strip_prefix("builtin:") {
        Some(name) => {
            reservoir_core::scenarios::builtin(name).ok_or_else(|| ScenarioFileError::Parse {
                path: reference.into(),
                message: format!(
                    "unknown built-in scenario `{name}` (available: {})",
                    reservoir_core::scenarios::BUILTIN_NAMES.join(", ")
                ),
            })
        }
        None => load_scenario(Path::new(reference)),
    }
}
