//! Command line front end for the sphere flocking library: run
//! configurations, CSV and manifest artifacts, certification suites,
//! parameter sweeps, and static SVG plots.
//!
//! Everything the binary does goes through this library so that tests can
//! exercise the exact code paths the executable runs.

pub mod config;
pub mod csvio;
pub mod manifest;
pub mod plot;
pub mod runner;
pub mod sweep;
pub mod verify;
