//! Experiment harness around `majlab-core`: TOML configs, CSV trial
//! records, parallel runners, and claim verification with JSON reports.

pub mod config;
pub mod csvio;
pub mod report;
pub mod runner;
