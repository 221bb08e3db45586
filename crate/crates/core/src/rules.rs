//! Per-bird decisions.
//!
//! Each step a bird picks exactly one action from its view of the flock:
//!
//! 1. Coalescing: if its body is in no other bird's wash regions, it heads
//!    for the nearest bird in its perception cone, first laterally and then
//!    forward.
//! 2. Stationing: if it is in optimal upwash behind some bird, it holds.
//! 3. Gap seeking: otherwise it steers laterally toward the nearest visible
//!    wing tip that bounds a wide enough gap, so that it will trail that
//!    tip's owner at the optimal separation.
//!
//! Decisions are pure. Randomness only enters through the collision
//! fallback in [`apply_with_fallback`].

use crate::geometry::{
    in_perception_cone, nearest_visible_tip, proximity_attained, upwash_status, BirdPose,
    UpwashStatus, WashFootprint,
};
use crate::params::Params;
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Hold,
    LateralPlus,
    LateralMinus,
    ForwardPlus,
    ForwardMinus,
}

impl ActionKind {
    /// Displacement `(dx, dy)` this action applies.
    pub fn displacement(self, p: &Params) -> (f64, f64) {
        match self {
            ActionKind::Hold => (0.0, 0.0),
            ActionKind::LateralPlus => (p.lateral_step, 0.0),
            ActionKind::LateralMinus => (-p.lateral_step, 0.0),
            ActionKind::ForwardPlus => (0.0, p.longitudinal_step),
            ActionKind::ForwardMinus => (0.0, -p.longitudinal_step),
        }
    }

    fn lateral_toward(delta: f64) -> Self {
        if delta > 0.0 {
            ActionKind::LateralPlus
        } else {
            ActionKind::LateralMinus
        }
    }
}

/// Which part of the decision logic produced an action.
///
/// Holding at an optimal station is attributed to `Rule2`, since that is
/// where stationing stops gap seeking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    Rule1,
    Rule2,
    CollisionFallback,
    NoTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    pub kind: ActionKind,
    pub origin: Origin,
}

impl Action {
    pub const fn new(kind: ActionKind, origin: Origin) -> Self {
        Action { kind, origin }
    }

    pub fn is_hold(&self) -> bool {
        self.kind == ActionKind::Hold
    }
}

/// The action `bird` wants to take in the current configuration.
///
/// `flock` must contain every bird, `bird` included (matched by id).
pub fn decide_action(bird: &BirdPose, flock: &[BirdPose], p: &Params) -> Action {
    let mut in_proximity = false;
    for other in flock.iter().filter(|o| o.id != bird.id) {
        if upwash_status(bird, other, p) == UpwashStatus::Optimal {
            return Action::new(ActionKind::Hold, Origin::Rule2);
        }
        in_proximity |= proximity_attained(bird, other, p);
    }
    if in_proximity {
        seek_gap(bird, flock, p)
    } else {
        coalesce(bird, flock, p)
    }
}

fn coalesce(bird: &BirdPose, flock: &[BirdPose], p: &Params) -> Action {
    let from = bird.body();
    let nearest = flock
        .iter()
        .filter(|o| o.id != bird.id && in_perception_cone(from, o.body(), p.perception_angle))
        .min_by(|a, b| {
            let da = (a.x - from.x) * (a.x - from.x) + (a.y - from.y) * (a.y - from.y);
            let db = (b.x - from.x) * (b.x - from.x) + (b.y - from.y) * (b.y - from.y);
            da.total_cmp(&db)
                .then((a.x - from.x).abs().total_cmp(&(b.x - from.x).abs()))
                .then(a.id.cmp(&b.id))
        });
    let Some(target) = nearest else {
        return Action::new(ActionKind::Hold, Origin::NoTarget);
    };

    let fp = WashFootprint::of(p);
    let lateral = target.x - bird.x;
    let reach = fp.downwash_half_width + p.upwash_width - p.lateral_step;
    let kind = if target.y == bird.y {
        // moving forward would overshoot an abreast target
        if lateral == 0.0 {
            ActionKind::ForwardPlus
        } else {
            ActionKind::lateral_toward(lateral)
        }
    } else if lateral.abs() > reach {
        ActionKind::lateral_toward(lateral)
    } else {
        ActionKind::ForwardPlus
    };
    Action::new(kind, Origin::Rule1)
}

fn seek_gap(bird: &BirdPose, flock: &[BirdPose], p: &Params) -> Action {
    let Some(target) = nearest_visible_tip(bird, flock, p) else {
        return Action::new(ActionKind::Hold, Origin::NoTarget);
    };
    // Centre of the one-step window [target_x, target_x + step] on the gap side.
    let half_step = p.lateral_step / 2.0;
    let centre = target.target_x + target.direction * half_step;
    let lateral = centre - bird.x;
    if lateral.abs() > half_step {
        return Action::new(ActionKind::lateral_toward(lateral), Origin::Rule2);
    }
    // Laterally in place but outside the owner's wash band.
    let owner = flock.iter().find(|o| o.id == target.owner);
    match owner {
        Some(o) if in_perception_cone(bird.body(), o.body(), p.perception_angle) => {
            Action::new(ActionKind::ForwardPlus, Origin::Rule1)
        }
        _ => Action::new(ActionKind::Hold, Origin::Rule2),
    }
}

/// Whether `candidate` would collide with any other bird of `flock`.
///
/// Birds collide when their wings overlap laterally by a positive length and
/// their longitudinal separation is below the collision margin. Touching
/// wing tips and a separation of exactly the margin are allowed.
pub fn would_collide(candidate: &BirdPose, flock: &[BirdPose], p: &Params) -> bool {
    flock
        .iter()
        .any(|o| o.id != candidate.id && collides(candidate, o, p))
}

pub(crate) fn collides(a: &BirdPose, b: &BirdPose, p: &Params) -> bool {
    (a.x - b.x).abs() < p.wingspan && (a.y - b.y).abs() < p.collision_margin
}

/// Applies `action` to `bird` unless it would collide.
///
/// A blocked move draws one coin from `rng` and tries a forward (heads) or
/// backward (tails) longitudinal step instead, which is applied only if it is
/// itself free. Returns the new pose and the action actually applied; a
/// blocked fallback is reported as a hold with origin
/// [`Origin::CollisionFallback`].
pub fn apply_with_fallback(
    bird: &BirdPose,
    action: Action,
    flock: &[BirdPose],
    p: &Params,
    rng: &mut SimRng,
) -> (BirdPose, Action) {
    if action.is_hold() {
        return (*bird, action);
    }
    let (dx, dy) = action.kind.displacement(p);
    let moved = bird.translated(dx, dy);
    if !would_collide(&moved, flock, p) {
        return (moved, action);
    }
    let kind = if rng.coin() {
        ActionKind::ForwardPlus
    } else {
        ActionKind::ForwardMinus
    };
    let (dx, dy) = kind.displacement(p);
    let moved = bird.translated(dx, dy);
    if would_collide(&moved, flock, p) {
        (
            *bird,
            Action::new(ActionKind::Hold, Origin::CollisionFallback),
        )
    } else {
        (moved, Action::new(kind, Origin::CollisionFallback))
    }
}

/// First pair of birds found in collision, if any.
pub fn find_collision(flock: &[BirdPose], p: &Params) -> Option<(usize, usize)> {
    for (k, a) in flock.iter().enumerate() {
        for b in &flock[k + 1..] {
            if collides(a, b, p) {
                return Some((a.id, b.id));
            }
        }
    }
    None
}
