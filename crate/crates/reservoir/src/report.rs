//! Output files. Every file carries the run manifest: JSON documents as a
//! `manifest` member, CSV files as a leading `# manifest: {...}` comment
//! line ahead of the mandatory header row.

use std::io;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use reservoir_core::lp::SolverOptions;
use serde::{Deserialize, Serialize};

/// Tolerances in effect for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub pivot: f64,
    pub feasibility: f64,
    pub optimality: f64,
}

impl From<SolverOptions> for Tolerances {
    fn from(o: SolverOptions) -> Self {
        Tolerances {
            pivot: o.pivot_tolerance,
            feasibility: o.feasibility_tolerance,
            optimality: o.optimality_tolerance,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        SolverOptions::default().into()
    }
}

/// Inputs that determine a run's outputs. Wall-clock time is reported on
/// standard error instead, so equal manifests give byte-equal files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub program: String,
    pub version: String,
    pub command: String,
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_f: Option<f64>,
    pub physical_sim: bool,
    /// How the two methods share inflow samples in comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepManifest>,
    pub tolerances: Tolerances,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub parameter: String,
    pub grid: Vec<f64>,
}

impl RunManifest {
    pub fn new(command: &str, scenario: &str) -> Self {
        RunManifest {
            program: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            scenario: scenario.into(),
            method: None,
            seed: None,
            replications: None,
            big_f: None,
            physical_sim: false,
            sampling: None,
            sweep: None,
            tolerances: Tolerances::default(),
            outputs: Vec::new(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    manifest: &'a RunManifest,
    result: &'a T,
}

#[derive(Deserialize)]
pub struct OwnedEnvelope<T> {
    pub manifest: RunManifest,
    pub result: T,
}

pub fn json_document<T: Serialize>(manifest: &RunManifest, result: &T) -> Vec<u8> {
    let mut out =
        serde_json::to_vec_pretty(&Envelope { manifest, result }).expect("report serializes");
    out.push(b'\n');
    out
}

/// CSV with the manifest comment, a header and the given records.
pub fn csv_document<R, I>(manifest: &RunManifest, header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut buf = format!("# manifest: {}\n", manifest.to_json_line()).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).expect("in-memory write");
        for row in rows {
            w.write_record(row).expect("in-memory write");
        }
        w.flush().expect("in-memory write");
    }
    buf
}

/// Strip `#` comment lines so the rest parses as plain CSV.
pub fn csv_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Shortest representation that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Write via a uniquely named temporary file and a rename, so concurrent
/// writers of the same path never leave a torn file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let unique = COUNTER.fetch_add(1, Ordering::Relaxed);
    let file = path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{file}.{}.{unique}.tmp", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}
