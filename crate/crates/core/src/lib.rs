//! Risk-aware demand-supply planning for multi-connection reservoir networks.
//!
//! The planner treats each period's inflow as an optimized "best prediction"
//! bounded by its empirical support and charges the expected shortfall risk
//! of that prediction in the objective. With piecewise-linear profit, cost
//! and risk curves the whole program is a linear program, which this crate
//! builds ([`formulation`]) and solves with its own simplex ([`lp`]). Plans
//! are then scored against sampled inflows ([`simulation`]).
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the CLI and
//! parallel drivers live in the companion `reservoir` crate.

#![no_std]
// matrix code indexes several arrays with the same loop counter; NaN must
// fail validation checks, hence the negated comparisons
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod formulation;
pub mod functions;
pub mod lp;
pub mod model;
pub mod scenarios;
pub mod simulation;
