//! Time stepping.
//!
//! Every step visits the birds one at a time in a fresh random order; each
//! decides against the configuration as left by the birds before it. A step
//! in which no bird wants to move leaves the configuration unchanged, and
//! since decisions are pure the flock is then at a fixed point: that step
//! marks stabilization.
//!
//! Random draws happen in exactly three places: initial placement (two per
//! attempted bird), the visiting order of a non-final step (`n - 1` bounded
//! draws) and one coin per blocked move. A step that detects stabilization
//! consumes nothing.

use alloc::vec::Vec;
use core::fmt;

use crate::geometry::BirdPose;
use crate::params::{Params, ParamsError, SQUARE_SIDE};
use crate::rng::SimRng;
use crate::rules::{
    apply_with_fallback, decide_action, find_collision, would_collide, Action, Origin,
};

/// Upper bound on placement attempts in [`init_flock`].
pub const MAX_PLACEMENT_ATTEMPTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    Params(ParamsError),
    /// Initial placement kept colliding.
    Placement {
        placed: usize,
        attempts: u64,
    },
    /// Two birds collided after a step; only reported when checking is on.
    Collision {
        step: usize,
        first: usize,
        second: usize,
    },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Params(e) => write!(f, "invalid parameters: {e}"),
            SimError::Placement { placed, attempts } => write!(
                f,
                "could not place bird {placed} without collision after {attempts} attempts"
            ),
            SimError::Collision {
                step,
                first,
                second,
            } => {
                write!(f, "birds {first} and {second} collide after step {step}")
            }
        }
    }
}

impl core::error::Error for SimError {}

impl From<ParamsError> for SimError {
    fn from(e: ParamsError) -> Self {
        SimError::Params(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Record the configuration every this many steps (step 0 included).
    pub snapshot_every: Option<usize>,
    /// Resample initial positions that collide with already placed birds.
    pub reject_initial_collisions: bool,
    /// Verify after each step that no two birds collide.
    pub check_collisions: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            snapshot_every: None,
            reject_initial_collisions: true,
            check_collisions: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    /// Number of steps executed so far.
    pub step: usize,
    /// Bird `k` has id `k`.
    pub birds: Vec<BirdPose>,
    /// Last step that displaced any bird, 0 if none did.
    pub last_move_step: usize,
    pub stable: bool,
}

impl SimState {
    pub fn new(birds: Vec<BirdPose>) -> Self {
        SimState {
            step: 0,
            birds,
            last_move_step: 0,
            stable: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub birds: Vec<BirdPose>,
}

/// Applied actions per origin, holds included.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OriginCounts {
    pub rule1: u64,
    pub rule2: u64,
    pub collision_fallback: u64,
    pub no_target: u64,
    /// Applied backward steps; these can only come from the collision fallback.
    pub backward_steps: u64,
}

impl OriginCounts {
    fn record(&mut self, action: &Action) {
        match action.origin {
            Origin::Rule1 => self.rule1 += 1,
            Origin::Rule2 => self.rule2 += 1,
            Origin::CollisionFallback => self.collision_fallback += 1,
            Origin::NoTarget => self.no_target += 1,
        }
        if action.kind == crate::rules::ActionKind::ForwardMinus {
            self.backward_steps += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub seed: u64,
    pub final_state: SimState,
    /// Last step with a displacement if the flock stabilized, else the step limit.
    pub t_stab: usize,
    pub trace: Vec<Snapshot>,
    pub applied_counts: OriginCounts,
}

impl SimResult {
    pub fn stabilized(&self) -> bool {
        self.final_state.stable
    }
}

/// What happened during one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepReport {
    /// Some bird wanted to move.
    pub attempted: bool,
    /// Some bird was displaced.
    pub moved: bool,
}

/// Places `n` birds uniformly in the initial square, by id.
///
/// Each attempt draws `x` then `y`. With `reject_collisions` set, a position
/// that collides with an already placed bird is drawn again.
pub fn init_flock(
    n: usize,
    rng: &mut SimRng,
    p: &Params,
    reject_collisions: bool,
) -> Result<Vec<BirdPose>, SimError> {
    let mut birds: Vec<BirdPose> = Vec::with_capacity(n);
    let mut attempts = 0u64;
    for id in 0..n {
        loop {
            if attempts >= MAX_PLACEMENT_ATTEMPTS {
                return Err(SimError::Placement {
                    placed: id,
                    attempts,
                });
            }
            attempts += 1;
            let x = rng.unit_f64() * SQUARE_SIDE;
            let y = rng.unit_f64() * SQUARE_SIDE;
            let candidate = BirdPose::new(id, x, y);
            if !reject_collisions || !would_collide(&candidate, &birds, p) {
                birds.push(candidate);
                break;
            }
        }
    }
    Ok(birds)
}

/// Advances `state` by one step.
///
/// May be called on a stable state; it then changes nothing but the step
/// counter and draws nothing.
pub fn step_once(
    state: &mut SimState,
    p: &Params,
    rng: &mut SimRng,
    counts: &mut OriginCounts,
) -> StepReport {
    state.step += 1;
    let birds = &mut state.birds;
    let attempted = birds.iter().any(|b| !decide_action(b, birds, p).is_hold());
    if !attempted {
        state.stable = true;
        return StepReport {
            attempted: false,
            moved: false,
        };
    }

    let mut order: Vec<usize> = (0..birds.len()).collect();
    rng.shuffle(&mut order);
    let mut moved = false;
    for idx in order {
        let bird = birds[idx];
        let action = decide_action(&bird, birds, p);
        let (pose, applied) = apply_with_fallback(&bird, action, birds, p, rng);
        counts.record(&applied);
        if pose != bird {
            moved = true;
            birds[idx] = pose;
        }
    }
    if moved {
        state.last_move_step = state.step;
    }
    state.stable = false;
    StepReport {
        attempted: true,
        moved,
    }
}

/// A simulation in progress.
#[derive(Debug, Clone)]
pub struct Simulation {
    params: Params,
    seed: u64,
    rng: SimRng,
    state: SimState,
    counts: OriginCounts,
    options: RunOptions,
}

impl Simulation {
    /// Validates `params` and places the flock from `seed`.
    pub fn new(params: Params, seed: u64, options: RunOptions) -> Result<Self, SimError> {
        params.validate()?;
        let mut rng = SimRng::new(seed);
        let birds = init_flock(
            params.birds,
            &mut rng,
            &params,
            options.reject_initial_collisions,
        )?;
        Ok(Simulation {
            params,
            seed,
            rng,
            state: SimState::new(birds),
            counts: OriginCounts::default(),
            options,
        })
    }

    /// Starts from a given configuration. Ids are reassigned to positions.
    pub fn from_birds(
        params: Params,
        birds: &[BirdPose],
        seed: u64,
        options: RunOptions,
    ) -> Result<Self, SimError> {
        let params = Params {
            birds: birds.len(),
            ..params
        };
        params.validate()?;
        let birds = birds
            .iter()
            .enumerate()
            .map(|(id, b)| BirdPose::new(id, b.x, b.y))
            .collect();
        Ok(Simulation {
            params,
            seed,
            rng: SimRng::new(seed),
            state: SimState::new(birds),
            counts: OriginCounts::default(),
            options,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn counts(&self) -> &OriginCounts {
        &self.counts
    }

    /// Random words consumed so far, placement included.
    pub fn rng_draws(&self) -> u64 {
        self.rng.draws()
    }

    /// One step, whether or not the flock is already stable.
    pub fn step(&mut self) -> Result<StepReport, SimError> {
        let report = step_once(
            &mut self.state,
            &self.params,
            &mut self.rng,
            &mut self.counts,
        );
        if self.options.check_collisions {
            if let Some((first, second)) = find_collision(&self.state.birds, &self.params) {
                return Err(SimError::Collision {
                    step: self.state.step,
                    first,
                    second,
                });
            }
        }
        Ok(report)
    }

    fn done(&self) -> bool {
        self.state.stable || self.state.step >= self.params.steps
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            step: self.state.step,
            birds: self.state.birds.clone(),
        }
    }

    /// Steps until stable or out of steps, then reports.
    ///
    /// The trace holds step 0, every multiple of the snapshot interval and
    /// the final configuration.
    pub fn run_to_end(mut self) -> Result<SimResult, SimError> {
        let every = self.options.snapshot_every.filter(|&k| k > 0);
        let mut trace = Vec::new();
        if every.is_some() {
            trace.push(self.snapshot());
        }
        if self.options.check_collisions && self.options.reject_initial_collisions {
            if let Some((first, second)) = find_collision(&self.state.birds, &self.params) {
                return Err(SimError::Collision {
                    step: 0,
                    first,
                    second,
                });
            }
        }
        while !self.done() {
            self.step()?;
            if let Some(k) = every {
                if self.state.step.is_multiple_of(k) {
                    trace.push(self.snapshot());
                }
            }
        }
        if every.is_some() && trace.last().map(|s| s.step) != Some(self.state.step) {
            trace.push(self.snapshot());
        }
        let t_stab = if self.state.stable {
            self.state.last_move_step
        } else {
            self.params.steps
        };
        Ok(SimResult {
            seed: self.seed,
            final_state: self.state,
            t_stab,
            trace,
            applied_counts: self.counts,
        })
    }
}

/// Places a flock from `seed` and runs it to the end.
pub fn run(params: Params, seed: u64, options: RunOptions) -> Result<SimResult, SimError> {
    Simulation::new(params, seed, options)?.run_to_end()
}
