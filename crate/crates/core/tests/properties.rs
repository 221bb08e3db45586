use std::f64::consts::PI;

use proptest::prelude::*;
use vformation_core::geometry::{
    distance_to_segment, in_perception_cone, maximal_gaps, proximity_attained,
    triangle_meets_segment, upwash_status, visible_tip_targets,
};
use vformation_core::metrics::indicators_of;
use vformation_core::rules::{apply_with_fallback, decide_action, would_collide};
use vformation_core::{
    ActionKind, BirdPose, Origin, Params, Point, SimRng, UpwashStatus, WashFootprint,
};

/// Half-integer lateral and integer longitudinal coordinates keep every
/// configuration clear of the irrational wash boundaries.
fn flock(max: usize, width: i32, depth: i32) -> impl Strategy<Value = Vec<BirdPose>> {
    prop::collection::vec((0..width, 0..depth), 1..=max).prop_map(|cells| {
        cells
            .into_iter()
            .enumerate()
            .map(|(id, (x, y))| BirdPose::new(id, x as f64 + 0.5, y as f64))
            .collect()
    })
}

fn pair() -> impl Strategy<Value = (BirdPose, BirdPose)> {
    (-150i32..150, -80i32..80).prop_map(|(dx, dy)| {
        (
            BirdPose::new(0, dx as f64 + 0.5, dy as f64),
            BirdPose::new(1, 0.0, 0.0),
        )
    })
}

fn shift(flock: &[BirdPose], tx: f64, ty: f64) -> Vec<BirdPose> {
    flock.iter().map(|b| b.translated(tx, ty)).collect()
}

/// Distance from `q` to the closed triangle `t`, by barycentric sign test and
/// projection onto the three edges.
fn triangle_distance(t: [Point; 3], q: Point) -> f64 {
    let cross =
        |a: Point, b: Point, c: Point| (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let signs = [
        cross(t[0], t[1], q),
        cross(t[1], t[2], q),
        cross(t[2], t[0], q),
    ];
    if signs.iter().all(|&s| s >= 0.0) || signs.iter().all(|&s| s <= 0.0) {
        return 0.0;
    }
    (0..3)
        .map(|k| {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let (ux, uy) = (b.x - a.x, b.y - a.y);
            let s = (((q.x - a.x) * ux + (q.y - a.y) * uy) / (ux * ux + uy * uy)).clamp(0.0, 1.0);
            ((q.x - a.x - s * ux).powi(2) + (q.y - a.y - s * uy).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn footprint_constants_for_reference_wingspans() {
    for w in [1.0, 50.0, 1000.0] {
        let fp = WashFootprint::new(w);
        let lambda = (PI / 4.0 - 1.0) * w / 2.0;
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(fp.optimal_separation, lambda) <= 1e-12);
        assert!(rel(fp.gap_threshold, PI / 4.0 * w) <= 1e-12);
        assert!(rel(fp.downwash_half_width, PI / 8.0 * w) <= 1e-12);
    }
}

proptest! {
    #[test]
    fn footprint_identities(w in 0.01f64..1e4) {
        let fp = WashFootprint::new(w);
        prop_assert!((fp.gap_threshold - PI / 4.0 * w).abs() <= 1e-12 * w);
        prop_assert!((fp.downwash_half_width - PI / 8.0 * w).abs() <= 1e-12 * w);
        prop_assert!((fp.optimal_separation / w + 0.1073).abs() < 1e-4);
    }

    #[test]
    fn gaps_agree_with_rasterized_axis(birds in flock(6, 300, 10)) {
        let w = 50.0;
        let gaps = maximal_gaps(&birds, None, w);
        prop_assert!(gaps.windows(2).all(|g| g[0].hi < g[1].lo));
        let lo = birds.iter().map(|b| b.x).fold(f64::INFINITY, f64::min) - 60.0;
        let hi = birds.iter().map(|b| b.x).fold(f64::NEG_INFINITY, f64::max) + 60.0;
        let (k0, k1) = ((lo * 100.0) as i64, (hi * 100.0) as i64);
        for k in k0..=k1 {
            let s = k as f64 / 100.0;
            let covered = birds.iter().any(|b| b.x - w / 2.0 <= s && s <= b.x + w / 2.0);
            let in_gap = gaps.iter().any(|g| g.lo < s && s < g.hi);
            prop_assert_eq!(covered, !in_gap, "sample {}", s);
        }
    }

    #[test]
    fn excluded_bird_leaves_no_trace_in_gaps(birds in flock(6, 300, 10), pick in 0usize..6) {
        let pick = pick % birds.len();
        let rest: Vec<BirdPose> = birds.iter().copied().filter(|b| b.id != pick).collect();
        prop_assert_eq!(maximal_gaps(&birds, Some(pick), 50.0), maximal_gaps(&rest, None, 50.0));
    }

    #[test]
    fn full_cone_is_the_forward_half_plane(dx in -500.0f64..500.0, dy in -500.0f64..500.0) {
        let inside = in_perception_cone(Point::new(0.0, 0.0), Point::new(dx, dy), 180.0);
        prop_assert_eq!(inside, dy >= 0.0);
    }

    #[test]
    fn cone_grows_with_angle(dx in -500.0f64..500.0, dy in -500.0f64..500.0, a in 1.0f64..180.0, b in 1.0f64..180.0) {
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let (o, q) = (Point::new(0.0, 0.0), Point::new(dx, dy));
        prop_assert!(!in_perception_cone(o, q, small) || in_perception_cone(o, q, large));
    }

    #[test]
    fn stationed_implies_proximity((i, j) in pair()) {
        let p = Params::default();
        if upwash_status(&i, &j, &p) != UpwashStatus::None {
            let band = j.y - p.wash_depth < i.y && i.y < j.y;
            prop_assert!(band);
        }
        if upwash_status(&i, &j, &p) == UpwashStatus::Optimal {
            prop_assert!(proximity_attained(&i, &j, &p));
        }
    }

    #[test]
    fn pairwise_predicates_are_translation_invariant((i, j) in pair(), tx in -2000i32..2000, ty in -2000i32..2000) {
        let p = Params::default();
        let (ti, tj) = (i.translated(tx as f64, ty as f64), j.translated(tx as f64, ty as f64));
        prop_assert_eq!(proximity_attained(&i, &j, &p), proximity_attained(&ti, &tj, &p));
        prop_assert_eq!(upwash_status(&i, &j, &p), upwash_status(&ti, &tj, &p));
        prop_assert_eq!(would_collide(&i, &[j], &p), would_collide(&ti, &[tj], &p));
    }

    #[test]
    fn collision_is_symmetric((i, j) in pair()) {
        let p = Params::default();
        prop_assert_eq!(would_collide(&i, &[j], &p), would_collide(&j, &[i], &p));
    }

    #[test]
    fn decisions_are_translation_invariant(
        birds in flock(7, 200, 120),
        tx in -1000i32..1000,
        ty in -1000i32..1000,
        alpha in prop::sample::select(vec![180.0, 170.0, 120.0, 60.0]),
    ) {
        let p = Params { perception_angle: alpha, ..Params::default() };
        let moved = shift(&birds, tx as f64, ty as f64);
        for (a, b) in birds.iter().zip(&moved) {
            prop_assert_eq!(decide_action(a, &birds, &p), decide_action(b, &moved, &p));
            let ta: Vec<_> = visible_tip_targets(a, &birds, &p).iter().map(|t| (t.owner, t.direction)).collect();
            let tb: Vec<_> = visible_tip_targets(b, &moved, &p).iter().map(|t| (t.owner, t.direction)).collect();
            prop_assert_eq!(ta, tb);
        }
    }

    #[test]
    fn indicators_are_translation_invariant(birds in flock(8, 240, 160), tx in -1000i32..1000, ty in -1000i32..1000) {
        let p = Params::default();
        let a = indicators_of(&birds, 0, &p);
        let b = indicators_of(&shift(&birds, tx as f64, ty as f64), 0, &p);
        prop_assert_eq!((a.leads, a.groups, a.segments), (b.leads, b.groups, b.segments));
        match (a.mean_seg_dist, b.mean_seg_dist) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-9),
            (x, y) => prop_assert_eq!(x, y),
        }
    }

    #[test]
    fn indicator_invariants(birds in flock(8, 240, 160)) {
        let r = indicators_of(&birds, 0, &Params::default());
        prop_assert!(r.leads >= r.groups && r.groups >= 1);
        prop_assert_eq!(r.mean_seg_dist.is_none(), r.segments == 0);
    }

    #[test]
    fn backward_steps_only_come_from_the_fallback(birds in flock(8, 120, 60), seed in any::<u64>()) {
        let p = Params::default();
        let mut rng = SimRng::new(seed);
        for b in &birds {
            let action = decide_action(b, &birds, &p);
            prop_assert!(action.kind != ActionKind::ForwardMinus);
            let (pose, applied) = apply_with_fallback(b, action, &birds, &p, &mut rng);
            if applied.kind == ActionKind::ForwardMinus {
                prop_assert_eq!(applied.origin, Origin::CollisionFallback);
            }
            if pose != *b {
                let others: Vec<BirdPose> = birds.iter().copied().filter(|o| o.id != b.id).collect();
                prop_assert!(!would_collide(&pose, &others, &p));
            }
        }
    }

    #[test]
    fn segment_distance_is_bounded_by_endpoints(
        px in -100.0f64..100.0, py in -100.0f64..100.0,
        ax in -100.0f64..100.0, ay in -100.0f64..100.0,
        bx in -100.0f64..100.0, by in -100.0f64..100.0,
    ) {
        let (q, a, b) = (Point::new(px, py), Point::new(ax, ay), Point::new(bx, by));
        let d = distance_to_segment(q, a, b);
        prop_assert!(d >= 0.0);
        prop_assert!(d <= q.distance(a) + 1e-12 && d <= q.distance(b) + 1e-12);
        prop_assert!(distance_to_segment(a, a, b) <= 1e-12);
        prop_assert!((d - distance_to_segment(q, b, a)).abs() <= 1e-9);
    }

    #[test]
    fn occlusion_agrees_with_sampling(
        t in prop::array::uniform3((-100i32..100, -100i32..100)),
        a in (-100i32..100, -100i32..100),
        len in 1i32..100,
    ) {
        let t = t.map(|(x, y)| Point::new(x as f64, y as f64));
        let cross = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x);
        prop_assume!(cross != 0.0);
        let (a, b) = (Point::new(a.0 as f64, a.1 as f64), Point::new((a.0 + len) as f64, a.1 as f64));
        let samples = 4000;
        let step = len as f64 / samples as f64;
        let nearest = (0..=samples)
            .map(|k| triangle_distance(t, Point::new(a.x + k as f64 * step, a.y)))
            .fold(f64::INFINITY, f64::min);
        let meets = triangle_meets_segment(t, a, b);
        if nearest == 0.0 {
            prop_assert!(meets);
        }
        if meets {
            prop_assert!(nearest <= step);
        }
    }
}
