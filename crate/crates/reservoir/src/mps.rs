//! Free-format MPS for [`LpProblem`] dumps.
//!
//! Written files declare `OBJSENSE MAX`. Bounds are always written
//! explicitly (`FX`, `FR`, `MI`, `LO`, `UP`), so the MPS default of
//! `[0, inf)` only applies to columns with no `BOUNDS` entry, and an
//! `UP` never implies anything about the lower bound.

use std::collections::HashMap;
use std::fmt::Write as _;

use reservoir_core::lp::{LpProblem, Relation};

const OBJECTIVE_ROW: &str = "obj";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct MpsError {
    pub line: usize,
    pub message: String,
}

pub fn write_mps(p: &LpProblem, name: &str) -> String {
    let mut out = String::new();
    let name = if name.is_empty() { "lp" } else { name };
    let _ = writeln!(out, "NAME {}", name.replace(char::is_whitespace, "_"));
    out.push_str("OBJSENSE\n    MAX\nROWS\n");
    let _ = writeln!(out, " N  {OBJECTIVE_ROW}");
    for c in &p.constraints {
        let tag = match c.relation {
            Relation::Le => "L",
            Relation::Eq => "E",
            Relation::Ge => "G",
        };
        let _ = writeln!(out, " {tag}  {}", c.name);
    }

    // column-major view of the rows
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p.num_variables()];
    for (i, c) in p.constraints.iter().enumerate() {
        for &(j, a) in &c.coeffs {
            columns[j].push((i, a));
        }
    }
    out.push_str("COLUMNS\n");
    for (j, v) in p.variables.iter().enumerate() {
        // the objective entry is always present so that every column is declared
        let _ = writeln!(out, "    {}  {OBJECTIVE_ROW}  {}", v.name, p.objective[j]);
        for &(i, a) in &columns[j] {
            let _ = writeln!(out, "    {}  {}  {a}", v.name, p.constraints[i].name);
        }
    }
    out.push_str("RHS\n");
    for c in p.constraints.iter().filter(|c| c.rhs != 0.0) {
        let _ = writeln!(out, "    RHS  {}  {}", c.name, c.rhs);
    }
    out.push_str("BOUNDS\n");
    for v in &p.variables {
        let n = &v.name;
        if v.lower == v.upper {
            let _ = writeln!(out, " FX BND  {n}  {}", v.lower);
        } else if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
            let _ = writeln!(out, " FR BND  {n}");
        } else {
            if v.lower == f64::NEG_INFINITY {
                let _ = writeln!(out, " MI BND  {n}");
            } else if v.lower != 0.0 {
                let _ = writeln!(out, " LO BND  {n}  {}", v.lower);
            }
            if v.upper != f64::INFINITY {
                let _ = writeln!(out, " UP BND  {n}  {}", v.upper);
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Start,
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    End,
}

pub fn parse_mps(text: &str) -> Result<LpProblem, MpsError> {
    let mut p = LpProblem::new();
    let mut section = Section::Start;
    let mut maximize = false;
    let mut objective_row: Option<String> = None;
    let mut rows: HashMap<String, usize> = HashMap::new();
    let mut cols: HashMap<String, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| MpsError { line, message };
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let number = |s: &str| -> Result<f64, MpsError> {
            let x: f64 = s
                .parse()
                .map_err(|_| err(format!("`{s}` is not a number")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(err(format!("`{s}` is not finite")))
            }
        };
        if !raw.starts_with(char::is_whitespace) {
            section = match fields[0] {
                "NAME" => Section::Name,
                "OBJSENSE" => {
                    if let Some(sense) = fields.get(1) {
                        maximize = parse_sense(sense)
                            .ok_or_else(|| err(format!("unknown sense `{sense}`")))?;
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => return Err(err(format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::ObjSense => {
                maximize = parse_sense(fields[0])
                    .ok_or_else(|| err(format!("unknown sense `{}`", fields[0])))?;
            }
            Section::Rows => {
                let [kind, name] = fields[..] else {
                    return Err(err("row lines need a type and a name".into()));
                };
                let relation = match kind {
                    "N" => {
                        if objective_row.is_none() {
                            objective_row = Some(name.to_string());
                        }
                        continue;
                    }
                    "L" => Relation::Le,
                    "E" => Relation::Eq,
                    "G" => Relation::Ge,
                    other => return Err(err(format!("unknown row type `{other}`"))),
                };
                if rows.insert(name.to_string(), p.num_constraints()).is_some() {
                    return Err(err(format!("duplicate row `{name}`")));
                }
                p.add_constraint(name, Vec::new(), relation, 0.0);
            }
            Section::Columns => {
                if fields.len() < 3 || fields.len().is_multiple_of(2) {
                    return Err(err("column lines need a name and row/value pairs".into()));
                }
                if fields.contains(&"'MARKER'") {
                    return Err(err("integer markers are not supported".into()));
                }
                let col = *cols
                    .entry(fields[0].to_string())
                    .or_insert_with(|| p.add_variable(fields[0], 0.0, f64::INFINITY, 0.0));
                for pair in fields[1..].chunks(2) {
                    let value = number(pair[1])?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        p.objective[col] += value;
                    } else {
                        let &r = rows
                            .get(pair[0])
                            .ok_or_else(|| err(format!("unknown row `{}`", pair[0])))?;
                        p.constraints[r].coeffs.push((col, value));
                    }
                }
            }
            Section::Rhs => {
                // the set name is optional in free MPS
                let pairs = if !fields.len().is_multiple_of(2) {
                    &fields[1..]
                } else {
                    &fields[..]
                };
                for pair in pairs.chunks(2) {
                    let value = number(pair[1])?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        continue;
                    }
                    let &r = rows
                        .get(pair[0])
                        .ok_or_else(|| err(format!("unknown row `{}`", pair[0])))?;
                    p.constraints[r].rhs = value;
                }
            }
            Section::Ranges => return Err(err("RANGES are not supported".into())),
            Section::Bounds => {
                if fields.len() < 3 {
                    return Err(err(
                        "bound lines need a type, a set name and a column".into()
                    ));
                }
                let &col = cols
                    .get(fields[2])
                    .ok_or_else(|| err(format!("unknown column `{}`", fields[2])))?;
                let value = fields.get(3).map(|s| number(s)).transpose()?;
                let need =
                    || value.ok_or_else(|| err(format!("{} bound needs a value", fields[0])));
                let v = &mut p.variables[col];
                match fields[0] {
                    "UP" => v.upper = need()?,
                    "LO" => v.lower = need()?,
                    "FX" => {
                        let x = need()?;
                        v.lower = x;
                        v.upper = x;
                    }
                    "FR" => {
                        v.lower = f64::NEG_INFINITY;
                        v.upper = f64::INFINITY;
                    }
                    "MI" => v.lower = f64::NEG_INFINITY,
                    "PL" => v.upper = f64::INFINITY,
                    other => return Err(err(format!("unsupported bound type `{other}`"))),
                }
            }
            Section::Start | Section::Name | Section::End => {
                return Err(err("data line outside a section".into()));
            }
        }
    }
    if section != Section::End {
        return Err(MpsError {
            line: text.lines().count(),
            message: "missing ENDATA".into(),
        });
    }
    if !maximize {
        for c in &mut p.objective {
            *c = -*c;
        }
    }
    Ok(p)
}

fn parse_sense(s: &str) -> Option<bool> {
    match s {
        "MAX" | "MAXIMIZE" => Some(true),
        "MIN" | "MINIMIZE" => Some(false),
        _ => None,
    }
}
