//! Files, reports, parallel runners and the command-line interface for
//! the reservoir planner in `reservoir-core`.

pub mod cli;
pub mod mps;
pub mod parallel;
pub mod report;
pub mod scenario_file;
pub mod sweep_file;
