//! Monte Carlo simulator for RIS-assisted CoMP-NOMA downlink networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`topology`] holds the static network (distances, exponents, power model,
//!   rate thresholds) in linear units.
//! * [`channel`] draws Rayleigh direct links and Rician RIS links from
//!   counter-based random streams.
//! * [`pbf`] computes passive beamforming phases (enhancement, cancellation,
//!   random, split-ratio hybrids).
//! * [`phy`] turns one channel draw plus a phase plan into SINRs, rates and
//!   outage indicators for NOMA and the OMA baseline.
//! * [`montecarlo`] aggregates trials into outage probabilities, outage sum
//!   rate and energy efficiency.
//! * [`experiments`] defines the parameter sweeps and their CSV form.
//! * [`plot`] renders sweep CSVs to SVG and [`cli`] is the command-line front end.

// NaN must fail range checks, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod pbf;
pub mod phy;
pub mod plot;
pub mod topology;

pub use error::{Error, Result};
pub use topology::{NetworkTopology, SimConfig};
