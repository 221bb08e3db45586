//! CSV tables: per-run, aggregate, series and snapshot files.
//!
//! Floats are written in their shortest round-trip decimal form; a missing
//! value is an empty field.

use std::io::{Read, Write};

use vformation_core::engine::Snapshot;
use vformation_core::BirdPose;

use crate::experiment::{AggregateRow, RunRow, SeriesRow};

pub const RUNS_HEADER: [&str; 9] = [
    "n",
    "alpha",
    "run",
    "seed",
    "t_stab",
    "leads",
    "groups",
    "segments",
    "mean_seg_dist",
];
pub const AGGREGATE_HEADER: [&str; 15] = [
    "n",
    "alpha",
    "runs",
    "t_stab_mean",
    "t_stab_std",
    "leads_mean",
    "leads_std",
    "groups_mean",
    "groups_std",
    "segments_mean",
    "segments_std",
    "msd_mean",
    "msd_std",
    "msd_missing",
    "stabilized_frac",
];
pub const SERIES_HEADER: [&str; 5] = ["n", "alpha", "run", "step", "mean_seg_dist"];
pub const SNAPSHOT_HEADER: [&str; 4] = ["step", "bird_id", "x", "y"];

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_runs<W: Write>(w: W, rows: &[RunRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RUNS_HEADER)?;
    for r in rows {
        out.write_record([
            r.cell.n.to_string(),
            r.cell.alpha.to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            r.record.t_stab.to_string(),
            r.record.leads.to_string(),
            r.record.groups.to_string(),
            r.record.segments.to_string(),
            opt(r.record.mean_seg_dist),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_aggregate<W: Write>(w: W, rows: &[AggregateRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        out.write_record([
            r.cell.n.to_string(),
            r.cell.alpha.to_string(),
            r.runs.to_string(),
            r.t_stab.mean.to_string(),
            r.t_stab.std.to_string(),
            r.leads.mean.to_string(),
            r.leads.std.to_string(),
            r.groups.mean.to_string(),
            r.groups.std.to_string(),
            r.segments.mean.to_string(),
            r.segments.std.to_string(),
            opt(r.mean_seg_dist.map(|m| m.mean)),
            opt(r.mean_seg_dist.map(|m| m.std)),
            r.msd_missing.to_string(),
            r.stabilized_frac.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_series<W: Write>(w: W, rows: &[SeriesRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SERIES_HEADER)?;
    for r in rows {
        out.write_record([
            r.cell.n.to_string(),
            r.cell.alpha.to_string(),
            r.run.to_string(),
            r.step.to_string(),
            opt(r.mean_seg_dist),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_snapshots<W: Write>(w: W, snapshots: &[Snapshot]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SNAPSHOT_HEADER)?;
    for snap in snapshots {
        for b in &snap.birds {
            out.write_record([
                snap.step.to_string(),
                b.id.to_string(),
                b.x.to_string(),
                b.y.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("snapshot file has no rows")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reads a snapshot table, grouping consecutive rows with the same step.
pub fn read_snapshots<R: Read>(r: R) -> Result<Vec<Snapshot>, SnapshotError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(r);
    let mut snapshots: Vec<Snapshot> = Vec::new();
    let mut saw_header = false;
    for record in reader.records() {
        let record = record.map_err(|e| SnapshotError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = record.iter().map(str::trim).collect();
        if !saw_header {
            saw_header = true;
            if fields == SNAPSHOT_HEADER {
                continue;
            }
            return Err(SnapshotError::Malformed {
                line,
                message: format!("expected header {}", SNAPSHOT_HEADER.join(",")),
            });
        }
        let bad = |what: &str| SnapshotError::Malformed {
            line,
            message: format!("{what} in {:?}", fields.join(",")),
        };
        if fields.len() != 4 {
            return Err(bad("expected 4 fields"));
        }
        let step: usize = fields[0].parse().map_err(|_| bad("bad step"))?;
        let id: usize = fields[1].parse().map_err(|_| bad("bad bird id"))?;
        let x: f64 = fields[2].parse().map_err(|_| bad("bad x"))?;
        let y: f64 = fields[3].parse().map_err(|_| bad("bad y"))?;
        if !x.is_finite() || !y.is_finite() {
            return Err(bad("non-finite coordinate"));
        }
        match snapshots.last_mut() {
            Some(last) if last.step == step => last.birds.push(BirdPose::new(id, x, y)),
            _ => snapshots.push(Snapshot {
                step,
                birds: vec![BirdPose::new(id, x, y)],
            }),
        }
    }
    if snapshots.is_empty() {
        return Err(SnapshotError::Empty);
    }
    Ok(snapshots)
}
