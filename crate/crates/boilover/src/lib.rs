//! Semi-analytical solutions and onset predictors for the heating of a
//! burning fuel layer floating on water.
//!
//! The layer regresses at a prescribed velocity while flame radiation is
//! absorbed in depth; the temperature field across the layer follows from
//! closed-form heat-balance-integral and ablation solutions, cross-checked
//! against an independent finite-difference reference solver. Boilover
//! onset is predicted from the dimensionless interface temperature, with
//! simplified closed forms for the conduction-dominated (thick-layer) and
//! radiation-dominated (thin-layer) regimes.
//!
//! Modules:
//! - [`corephys`]: fuel/scenario data model, dimensionless groups, scales
//! - [`hbi`]: penetration depth, quadratic profile, ablation/wave profiles
//! - [`predict`]: problems A and B, regime classification, t_B0 estimates
//! - [`fdoracle`]: finite-difference reference solver and boilover probe
//! - [`datasets`]: experiment-table ingestion and comparison reports
//! - [`cli`]: the `boilover` command-line front end

pub mod cli;
pub mod corephys;
pub mod datasets;
pub mod error;
pub mod fdoracle;
pub mod hbi;
pub mod predict;

pub use error::{Error, Result};
