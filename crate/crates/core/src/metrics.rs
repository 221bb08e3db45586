//! End-of-run indicators.
//!
//! All structural indicators derive from the wash graph: an edge `i -> j`
//! whenever some portion of `i` touches an upwash region of `j`. Unlike the
//! stationing test, touching `D` at the same time does not remove the edge.
//! Because wash regions trail their owner, every edge points to a bird
//! strictly ahead, so the graph is acyclic.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::SimResult;
use crate::geometry::{by_distance_then_id, distance_to_segment, BirdPose, WashRegions};
use crate::params::Params;

/// Directed upwash graph over flock positions (not ids).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WashGraph {
    /// `out[i]`: birds whose upwash `i` touches, ascending.
    pub out: Vec<Vec<usize>>,
    /// `inc[j]`: birds touching `j`'s upwash, ascending.
    pub inc: Vec<Vec<usize>>,
}

impl WashGraph {
    pub fn new(flock: &[BirdPose], p: &Params) -> Self {
        let n = flock.len();
        let regions: Vec<WashRegions> = flock.iter().map(|b| WashRegions::behind(b, p)).collect();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, bird) in flock.iter().enumerate() {
            let wing = bird.wing(p.wingspan);
            for (j, r) in regions.iter().enumerate() {
                if i != j && r.wing_in_upwash(&wing, bird.y) {
                    debug_assert!(bird.y < flock[j].y);
                    out[i].push(j);
                    inc[j].push(i);
                }
            }
        }
        WashGraph { out, inc }
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }
}

/// Role of one bird in the wash graph. Flags may co-occur; a bird with none
/// of them set is interior.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Label {
    /// Touches nobody's upwash.
    pub lead: bool,
    /// Nobody touches its upwash.
    pub trailing: bool,
    /// Two or more birds touch its upwash.
    pub bifurcation: bool,
}

impl Label {
    pub fn is_interior(&self) -> bool {
        !(self.lead || self.trailing || self.bifurcation)
    }

    /// Where a segment walk stops.
    fn ends_segment(&self) -> bool {
        self.lead || self.bifurcation
    }
}

pub fn classify(g: &WashGraph) -> Vec<Label> {
    (0..g.len())
        .map(|k| Label {
            lead: g.out[k].is_empty(),
            trailing: g.inc[k].is_empty(),
            bifurcation: g.inc[k].len() >= 2,
        })
        .collect()
}

/// Weakly connected component of every bird, numbered from 0 in order of
/// each component's first bird.
pub fn components(g: &WashGraph) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..g.len()).collect();
    fn root(parent: &mut [usize], mut k: usize) -> usize {
        while parent[k] != k {
            parent[k] = parent[parent[k]];
            k = parent[k];
        }
        k
    }
    for (i, targets) in g.out.iter().enumerate() {
        for &j in targets {
            let (a, b) = (root(&mut parent, i), root(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut number = vec![usize::MAX; g.len()];
    let mut next = 0;
    (0..g.len())
        .map(|k| {
            let r = root(&mut parent, k);
            if number[r] == usize::MAX {
                number[r] = next;
                next += 1;
            }
            number[r]
        })
        .collect()
}

/// Number of weakly connected components.
pub fn groups(g: &WashGraph) -> usize {
    components(g).into_iter().max().map_or(0, |m| m + 1)
}

/// A straight-line segment from a trailing bird to the lead or bifurcation
/// bird its chain of nearest leaders reaches. Both ends are flock positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub trailing: usize,
    pub end: usize,
}

/// Segments of the formation, one per non-isolated trailing bird, in
/// position order.
///
/// From a trailing bird the walk repeatedly moves to the nearest bird whose
/// upwash the current one touches (ties by id) and stops at the first lead or
/// bifurcation bird.
pub fn segments(flock: &[BirdPose], g: &WashGraph, labels: &[Label]) -> Vec<Segment> {
    let mut out = Vec::new();
    for (t, label) in labels.iter().enumerate() {
        if !label.trailing || g.out[t].is_empty() {
            continue;
        }
        let mut current = t;
        loop {
            let from = flock[current];
            current = *g.out[current]
                .iter()
                .min_by(|&&a, &&b| by_distance_then_id(from.body(), &flock[a], &flock[b]))
                .expect("walk only continues from birds with out-edges");
            if labels[current].ends_segment() {
                break;
            }
        }
        out.push(Segment {
            trailing: t,
            end: current,
        });
    }
    out
}

/// Mean distance from the birds to the nearest segments of their own group.
///
/// A lead or bifurcation bird contributes the mean of its distances to the
/// two nearest segments (the one distance if its group has a single
/// segment); any other bird contributes the distance to its nearest segment.
/// Birds in groups without segments, isolated birds included, contribute
/// nothing. `None` when nobody contributes.
pub fn mean_segment_distance(
    flock: &[BirdPose],
    segs: &[Segment],
    labels: &[Label],
    component: &[usize],
) -> Option<f64> {
    let mut sum = 0.0;
    let mut contributions = 0usize;
    let mut distances = Vec::with_capacity(segs.len());
    for (k, bird) in flock.iter().enumerate() {
        distances.clear();
        distances.extend(
            segs.iter()
                .filter(|s| component[s.trailing] == component[k])
                .map(|s| {
                    distance_to_segment(bird.body(), flock[s.trailing].body(), flock[s.end].body())
                }),
        );
        if distances.is_empty() {
            continue;
        }
        distances.sort_by(f64::total_cmp);
        sum += if labels[k].ends_segment() && distances.len() >= 2 {
            (distances[0] + distances[1]) / 2.0
        } else {
            distances[0]
        };
        contributions += 1;
    }
    (contributions > 0).then(|| sum / contributions as f64)
}

/// The five indicators of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorRecord {
    pub t_stab: usize,
    pub leads: usize,
    pub groups: usize,
    pub segments: usize,
    pub mean_seg_dist: Option<f64>,
}

/// Structural indicators of a configuration, paired with a given
/// stabilization time.
pub fn indicators_of(flock: &[BirdPose], t_stab: usize, p: &Params) -> IndicatorRecord {
    let g = WashGraph::new(flock, p);
    let labels = classify(&g);
    let segs = segments(flock, &g, &labels);
    let component = components(&g);
    IndicatorRecord {
        t_stab,
        leads: labels.iter().filter(|l| l.lead).count(),
        groups: component.iter().max().map_or(0, |m| m + 1),
        segments: segs.len(),
        mean_seg_dist: mean_segment_distance(flock, &segs, &labels, &component),
    }
}

/// Indicators at the end of a run.
pub fn indicators(result: &SimResult, p: &Params) -> IndicatorRecord {
    indicators_of(&result.final_state.birds, result.t_stab, p)
}
