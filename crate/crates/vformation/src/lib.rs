//! Simulation driver for bird formation flocks: batch experiments over
//! seeded runs, CSV tables, SVG snapshots and the `vformation` command.
//!
//! The flocking model itself lives in [`vformation_core`].

pub mod cli;
pub mod config;
pub mod experiment;
pub mod render;
pub mod tables;

pub use config::{Config, Overrides};
pub use experiment::{
    run_batch, summarize, AggregateRow, BatchOutput, BatchSpec, Cell, RunRow, SeriesRow, SeriesSpec,
};
