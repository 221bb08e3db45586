//! Local positioning rules for simulated birds flying in formation, and the
//! indicators used to measure how close a flock comes to a V shape.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. Everything
//! happens in the frame that moves with the flock's common velocity, so a
//! bird's state is just its lateral (`x`) and longitudinal (`y`) position;
//! `y` grows in the direction of flight.
//!
//! - [`geometry`]: wash regions, perception cone, maximal gaps, visibility.
//! - [`rules`]: one action per bird per step, plus collision avoidance.
//! - [`engine`]: initialization, scheduling and stabilization detection.
//! - [`metrics`]: the wash graph and the five end-of-run indicators.
//!
//! Lengths are expressed in grid units where the side of the initial square
//! is [`SQUARE_SIDE`] units.
#![no_std]

extern crate alloc;

pub mod engine;
pub mod geometry;
pub mod metrics;
pub mod params;
pub mod rng;
pub mod rules;

pub use engine::{init_flock, run, RunOptions, SimError, SimResult, SimState, Simulation};
pub use geometry::{BirdPose, Point, UpwashStatus, WashFootprint, WashRegions};
pub use metrics::{IndicatorRecord, WashGraph};
pub use params::{Params, ParamsError, SQUARE_SIDE};
pub use rng::SimRng;
pub use rules::{Action, ActionKind, Origin};
