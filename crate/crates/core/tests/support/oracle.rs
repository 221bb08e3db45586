//! Brute-force indicator oracle.
//!
//! Wash contacts are found by stepping along each wing at 0.01 units and
//! testing every sample against the regions; groups come from a breadth-first
//! search over an adjacency matrix; segment walks and distances are recomputed
//! from scratch. Nothing here calls into the metrics module.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::PI;

use vformation_core::{BirdPose, Params};

pub const RESOLUTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleIndicators {
    pub leads: usize,
    pub groups: usize,
    pub segments: usize,
    pub mean_seg_dist: Option<f64>,
}

/// Whether some rasterized point of `i`'s wing lies in an upwash region of `j`.
pub fn touches_upwash(i: &BirdPose, j: &BirdPose, p: &Params) -> bool {
    if !(j.y - p.wash_depth < i.y && i.y < j.y) {
        return false;
    }
    let half_d = PI / 8.0 * p.wingspan;
    let (lo, hi) = (i.x - p.wingspan / 2.0, i.x + p.wingspan / 2.0);
    let samples = (p.wingspan / RESOLUTION).round() as usize;
    (0..=samples).any(|k| {
        let x = if k == samples {
            hi
        } else {
            lo + k as f64 * RESOLUTION
        };
        let off = (x - j.x).abs();
        off >= half_d && off <= half_d + p.upwash_width
    })
}

pub fn adjacency(flock: &[BirdPose], p: &Params) -> Vec<Vec<bool>> {
    flock
        .iter()
        .map(|i| {
            flock
                .iter()
                .map(|j| i.id != j.id && touches_upwash(i, j, p))
                .collect()
        })
        .collect()
}

fn point_segment(px: f64, py: f64, a: &BirdPose, b: &BirdPose) -> f64 {
    // nearest of: the two endpoints and the perpendicular foot when it falls inside
    let da = ((px - a.x).powi(2) + (py - a.y).powi(2)).sqrt();
    let db = ((px - b.x).powi(2) + (py - b.y).powi(2)).sqrt();
    let (ux, uy) = (b.x - a.x, b.y - a.y);
    let len = (ux * ux + uy * uy).sqrt();
    let mut best = da.min(db);
    if len > 0.0 {
        let along = ((px - a.x) * ux + (py - a.y) * uy) / len;
        if along > 0.0 && along < len {
            let perp = ((px - a.x) * uy - (py - a.y) * ux).abs() / len;
            best = best.min(perp);
        }
    }
    best
}

pub fn indicators(flock: &[BirdPose], p: &Params) -> OracleIndicators {
    let n = flock.len();
    let adj = adjacency(flock, p);
    let outdeg: Vec<usize> = (0..n)
        .map(|i| adj[i].iter().filter(|&&e| e).count())
        .collect();
    let indeg: Vec<usize> = (0..n)
        .map(|j| (0..n).filter(|&i| adj[i][j]).count())
        .collect();
    let lead: Vec<bool> = outdeg.iter().map(|&d| d == 0).collect();
    let stop: Vec<bool> = (0..n).map(|k| outdeg[k] == 0 || indeg[k] >= 2).collect();

    let mut group = vec![usize::MAX; n];
    let mut groups = 0;
    for s in 0..n {
        if group[s] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::from([s]);
        group[s] = groups;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if (adj[u][v] || adj[v][u]) && group[v] == usize::MAX {
                    group[v] = groups;
                    queue.push_back(v);
                }
            }
        }
        groups += 1;
    }

    let mut segs = Vec::new();
    for t in 0..n {
        if indeg[t] != 0 || outdeg[t] == 0 {
            continue;
        }
        let mut c = t;
        loop {
            let mut best: Option<(f64, usize)> = None;
            for v in 0..n {
                if adj[c][v] {
                    let d = ((flock[c].x - flock[v].x).powi(2) + (flock[c].y - flock[v].y).powi(2))
                        .sqrt();
                    if best.is_none_or(|(bd, bv)| d < bd || (d == bd && flock[v].id < flock[bv].id))
                    {
                        best = Some((d, v));
                    }
                }
            }
            c = best.unwrap().1;
            if stop[c] {
                break;
            }
        }
        segs.push((t, c));
    }

    let mut total = 0.0;
    let mut count = 0usize;
    for k in 0..n {
        let mut ds: Vec<f64> = segs
            .iter()
            .filter(|(t, _)| group[*t] == group[k])
            .map(|&(t, e)| point_segment(flock[k].x, flock[k].y, &flock[t], &flock[e]))
            .collect();
        if ds.is_empty() {
            continue;
        }
        ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
        total += if stop[k] && ds.len() >= 2 {
            (ds[0] + ds[1]) / 2.0
        } else {
            ds[0]
        };
        count += 1;
    }

    OracleIndicators {
        leads: lead.iter().filter(|&&l| l).count(),
        groups,
        segments: segs.len(),
        mean_seg_dist: (count > 0).then(|| total / count as f64),
    }
}

/// Random configuration of up to `max_n` birds whose lateral coordinates are
/// half-integers and longitudinal ones integers, so that no wash boundary
/// falls within a rasterization step of a wing tip.
pub fn random_flock(rng: &mut vformation_core::SimRng, max_n: usize) -> Vec<BirdPose> {
    let n = 1 + rng.below(max_n as u64) as usize;
    (0..n)
        .map(|id| {
            let x = rng.below(240) as f64 + 0.5;
            let y = rng.below(160) as f64;
            BirdPose::new(id, x, y)
        })
        .collect()
}
