//! Geometric primitives shared by the rules and the indicators.
//!
//! A bird is a body point with a horizontal wing segment of length `wingspan`
//! centred on it. Behind every bird trail three axis-aligned regions: the
//! downwash region `D` between its wing-tip vortices and the two upwash
//! regions `U-`/`U+` just outside them. All three share the longitudinal band
//! `(y - wash_depth, y)`, open at both ends, so a bird exactly abreast of
//! another is in none of its regions. `D` is laterally open and the upwash
//! regions are laterally closed, so a wing tip sitting exactly on the shared
//! boundary counts as upwash.
//!
//! The half-width of `D` is `wingspan / 2 + optimal_separation`: a trailing
//! bird whose wing tip overlaps the leader's by the optimal amount touches
//! `D` with its inner tip but does not enter it.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::FRAC_PI_4;

use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    fn distance_sq(self, other: Point) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        dx * dx + dy * dy
    }
}

/// A closed lateral interval `[lo, hi]`; the bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Both intervals treated as closed.
    pub fn meets(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Both intervals treated as open.
    pub fn overlaps_open(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// One bird in the flock's frame of reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirdPose {
    pub id: usize,
    /// Lateral coordinate, growing to the right.
    pub x: f64,
    /// Longitudinal coordinate, growing in the direction of flight.
    pub y: f64,
}

impl BirdPose {
    pub const fn new(id: usize, x: f64, y: f64) -> Self {
        BirdPose { id, x, y }
    }

    pub fn body(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn wing(&self, wingspan: f64) -> Interval {
        let half = wingspan / 2.0;
        Interval::new(self.x - half, self.x + half)
    }

    /// Left and right wing tips.
    pub fn wing_tips(&self, wingspan: f64) -> (Point, Point) {
        let wing = self.wing(wingspan);
        (Point::new(wing.lo, self.y), Point::new(wing.hi, self.y))
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        BirdPose::new(self.id, self.x + dx, self.y + dy)
    }
}

/// Lateral quantities derived from the wingspan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WashFootprint {
    /// Optimal signed wing-tip separation between a bird and the one it
    /// trails; negative means the wings overlap laterally.
    pub optimal_separation: f64,
    /// Half-width of the downwash region.
    pub downwash_half_width: f64,
    /// Minimum width of a gap worth seeking (`wingspan + 2 * optimal_separation`).
    pub gap_threshold: f64,
}

impl WashFootprint {
    pub fn new(wingspan: f64) -> Self {
        let optimal_separation = (FRAC_PI_4 - 1.0) * wingspan / 2.0;
        WashFootprint {
            optimal_separation,
            downwash_half_width: wingspan / 2.0 + optimal_separation,
            gap_threshold: wingspan + 2.0 * optimal_separation,
        }
    }

    pub fn of(p: &Params) -> Self {
        Self::new(p.wingspan)
    }
}

/// The three wash regions trailing one bird.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WashRegions {
    /// Laterally open.
    pub downwash: Interval,
    pub upwash_minus: Interval,
    pub upwash_plus: Interval,
    /// Open at both ends.
    pub band: Interval,
}

impl WashRegions {
    pub fn behind(bird: &BirdPose, p: &Params) -> Self {
        let v = WashFootprint::of(p).downwash_half_width;
        WashRegions {
            downwash: Interval::new(bird.x - v, bird.x + v),
            upwash_minus: Interval::new(bird.x - v - p.upwash_width, bird.x - v),
            upwash_plus: Interval::new(bird.x + v, bird.x + v + p.upwash_width),
            band: Interval::new(bird.y - p.wash_depth, bird.y),
        }
    }

    pub fn in_band(&self, y: f64) -> bool {
        self.band.lo < y && y < self.band.hi
    }

    /// Whether a point lies in the union of the three regions.
    pub fn contains(&self, pt: Point) -> bool {
        self.in_band(pt.y) && self.upwash_minus.lo <= pt.x && pt.x <= self.upwash_plus.hi
    }

    /// Whether a wing at longitudinal coordinate `y` touches either upwash region.
    pub fn wing_in_upwash(&self, wing: &Interval, y: f64) -> bool {
        self.in_band(y) && (wing.meets(&self.upwash_minus) || wing.meets(&self.upwash_plus))
    }

    /// Whether a wing at longitudinal coordinate `y` has any portion inside `D`.
    pub fn wing_in_downwash(&self, wing: &Interval, y: f64) -> bool {
        self.in_band(y) && wing.overlaps_open(&self.downwash)
    }
}

/// Whether `bird`'s body is in the wash regions of `other`.
pub fn proximity_attained(bird: &BirdPose, other: &BirdPose, p: &Params) -> bool {
    WashRegions::behind(other, p).contains(bird.body())
}

/// What `bird` gets from the wash of `other`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpwashStatus {
    /// No portion in either upwash region.
    None,
    /// Some portion inside the downwash region.
    Blocked,
    /// In upwash and clear of downwash, at the given signed wing-tip separation.
    Found(f64),
    /// In upwash at a separation within one lateral step of the optimum.
    Optimal,
}

/// Upwash status of `bird` relative to `other`.
///
/// A found station is optimal when the separation lies in
/// `[optimal_separation, optimal_separation + lateral_step]`. Both birds move on
/// a lattice of pitch `lateral_step`, so every relative offset has exactly one
/// representative in a window of that width; separations below the optimum
/// put the inner wing tip into `D` and are reported as blocked instead.
pub fn upwash_status(bird: &BirdPose, other: &BirdPose, p: &Params) -> UpwashStatus {
    let regions = WashRegions::behind(other, p);
    let wing = bird.wing(p.wingspan);
    if regions.wing_in_downwash(&wing, bird.y) {
        return UpwashStatus::Blocked;
    }
    if !regions.wing_in_upwash(&wing, bird.y) {
        return UpwashStatus::None;
    }
    let separation = (bird.x - other.x).abs() - p.wingspan;
    if separation - WashFootprint::of(p).optimal_separation <= p.lateral_step {
        UpwashStatus::Optimal
    } else {
        UpwashStatus::Found(separation)
    }
}

/// Whether `to` lies in the perception cone of an observer at `from`.
///
/// The cone's axis is the direction of flight (+y), its half-angle is
/// `angle / 2` degrees and its boundary is included. Coincident points count
/// as inside.
pub fn in_perception_cone(from: Point, to: Point, angle: f64) -> bool {
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    if dx == 0.0 && dy == 0.0 {
        return true;
    }
    if angle >= 180.0 {
        return dy >= 0.0;
    }
    dy > 0.0 && libm::atan2(dx.abs(), dy).to_degrees() <= angle / 2.0
}

/// Maximal lateral intervals free of any wing, from left to right.
///
/// Birds whose id equals `exclude` are ignored. The first and last gaps are
/// half-infinite. Wings that touch leave no gap between them.
pub fn maximal_gaps(flock: &[BirdPose], exclude: Option<usize>, wingspan: f64) -> Vec<Interval> {
    let mut wings: Vec<Interval> = flock
        .iter()
        .filter(|b| Some(b.id) != exclude)
        .map(|b| b.wing(wingspan))
        .collect();
    if wings.is_empty() {
        return alloc::vec![Interval::new(f64::NEG_INFINITY, f64::INFINITY)];
    }
    wings.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));

    let mut gaps = Vec::with_capacity(wings.len() + 1);
    gaps.push(Interval::new(f64::NEG_INFINITY, wings[0].lo));
    let mut reach = wings[0].hi;
    for wing in &wings[1..] {
        if wing.lo > reach {
            gaps.push(Interval::new(reach, wing.lo));
        }
        reach = reach.max(wing.hi);
    }
    gaps.push(Interval::new(reach, f64::INFINITY));
    gaps
}

/// A wing tip bounding a wide enough gap, and where a bird should sit to
/// trail its owner at the optimal separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipTarget {
    pub owner: usize,
    pub tip: Point,
    /// +1 if the gap extends to the right of the tip, -1 if to the left.
    pub direction: f64,
    /// Lateral body position that puts the seeker's near wing tip at the
    /// optimal separation past `tip`.
    pub target_x: f64,
}

impl TipTarget {
    /// The far end of the gap-threshold-long extension of the owner's wing.
    pub fn extension_end(&self, fp: &WashFootprint) -> Point {
        Point::new(self.tip.x + self.direction * fp.gap_threshold, self.tip.y)
    }
}

/// Tips of wide enough gaps that lie in the seeker's cone, nearest first,
/// before any occlusion test.
fn tip_candidates(
    bird: &BirdPose,
    flock: &[BirdPose],
    p: &Params,
    fp: &WashFootprint,
) -> Vec<(f64, TipTarget)> {
    let half = p.wingspan / 2.0;
    let reach = half + fp.optimal_separation;
    let mut out = Vec::new();
    for gap in maximal_gaps(flock, Some(bird.id), p.wingspan) {
        if gap.width() < fp.gap_threshold {
            continue;
        }
        for other in flock.iter().filter(|o| o.id != bird.id) {
            let sides = [
                (other.x + half, gap.lo, 1.0),
                (other.x - half, gap.hi, -1.0),
            ];
            for (tip_x, bound, direction) in sides {
                if tip_x != bound {
                    continue;
                }
                let tip = Point::new(tip_x, other.y);
                if !in_perception_cone(bird.body(), tip, p.perception_angle) {
                    continue;
                }
                let target = TipTarget {
                    owner: other.id,
                    tip,
                    direction,
                    target_x: tip_x + direction * reach,
                };
                out.push((bird.body().distance_sq(tip), target));
            }
        }
    }
    out.sort_by(|(da, a), (db, b)| {
        da.total_cmp(db)
            .then(a.owner.cmp(&b.owner))
            .then(a.tip.x.total_cmp(&b.tip.x))
    });
    out
}

fn tip_is_visible(
    bird: &BirdPose,
    target: &TipTarget,
    flock: &[BirdPose],
    p: &Params,
    fp: &WashFootprint,
) -> bool {
    let triangle = [bird.body(), target.tip, target.extension_end(fp)];
    flock
        .iter()
        .filter(|o| o.id != bird.id && o.id != target.owner)
        .all(|o| {
            let (a, b) = o.wing_tips(p.wingspan);
            !triangle_meets_segment(triangle, a, b)
        })
}

/// Every tip `bird` may aim for, nearest first (ties by owner id).
pub fn visible_tip_targets(bird: &BirdPose, flock: &[BirdPose], p: &Params) -> Vec<TipTarget> {
    let fp = WashFootprint::of(p);
    tip_candidates(bird, flock, p, &fp)
        .into_iter()
        .map(|(_, t)| t)
        .filter(|t| tip_is_visible(bird, t, flock, p, &fp))
        .collect()
}

/// First entry of [`visible_tip_targets`], without testing the farther tips.
pub fn nearest_visible_tip(bird: &BirdPose, flock: &[BirdPose], p: &Params) -> Option<TipTarget> {
    let fp = WashFootprint::of(p);
    tip_candidates(bird, flock, p, &fp)
        .into_iter()
        .map(|(_, t)| t)
        .find(|t| tip_is_visible(bird, t, flock, p, &fp))
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// `q` is known to be collinear with `a`-`b`.
fn within_box(a: Point, b: Point, q: Point) -> bool {
    a.x.min(b.x) <= q.x && q.x <= a.x.max(b.x) && a.y.min(b.y) <= q.y && q.y <= a.y.max(b.y)
}

/// Closed segment-segment intersection, collinear overlaps included.
pub fn segments_meet(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && within_box(q1, q2, p1))
        || (d2 == 0.0 && within_box(q1, q2, p2))
        || (d3 == 0.0 && within_box(p1, p2, q1))
        || (d4 == 0.0 && within_box(p1, p2, q2))
}

fn point_in_triangle(t: [Point; 3], q: Point) -> bool {
    let d = [
        orient(t[0], t[1], q),
        orient(t[1], t[2], q),
        orient(t[2], t[0], q),
    ];
    let neg = d.iter().any(|&v| v < 0.0);
    let pos = d.iter().any(|&v| v > 0.0);
    !(neg && pos)
}

/// Whether the closed triangle `t` and the closed segment `a`-`b` share a point.
pub fn triangle_meets_segment(t: [Point; 3], a: Point, b: Point) -> bool {
    let degenerate = orient(t[0], t[1], t[2]) == 0.0;
    if !degenerate && (point_in_triangle(t, a) || point_in_triangle(t, b)) {
        return true;
    }
    segments_meet(a, b, t[0], t[1])
        || segments_meet(a, b, t[1], t[2])
        || segments_meet(a, b, t[2], t[0])
}

/// Euclidean distance from `pt` to the finite segment `a`-`b`.
pub fn distance_to_segment(pt: Point, a: Point, b: Point) -> f64 {
    let (abx, aby) = (b.x - a.x, b.y - a.y);
    let len_sq = abx * abx + aby * aby;
    if len_sq == 0.0 {
        return pt.distance(a);
    }
    let t = (((pt.x - a.x) * abx + (pt.y - a.y) * aby) / len_sq).clamp(0.0, 1.0);
    pt.distance(Point::new(a.x + t * abx, a.y + t * aby))
}

/// Orders two birds by distance from a reference point, then by id.
pub(crate) fn by_distance_then_id(from: Point, a: &BirdPose, b: &BirdPose) -> Ordering {
    from.distance_sq(a.body())
        .total_cmp(&from.distance_sq(b.body()))
        .then(a.id.cmp(&b.id))
}
