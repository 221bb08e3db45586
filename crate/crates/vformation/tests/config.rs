use std::path::PathBuf;

use vformation::config::SeriesIndicator;
use vformation::{Cell, Config, Overrides};

const FILE: &str = "
n = 25
alpha = 170
t = 500
seed = 9
runs = 30
grid = 5:90
out = file_out
snapshot_every = 20
series = msd
series_every = 5
series_runs = 3
workers = 2
";

fn layered(overrides: &Overrides) -> Config {
    let mut c = Config::default();
    c.apply_file_contents(FILE).unwrap();
    c.apply_overrides(overrides);
    c
}

#[test]
fn defaults_are_the_reference_values() {
    let c = Config::default();
    let p = c.params;
    assert_eq!(
        (
            p.upwash_width,
            p.wash_depth,
            p.wingspan,
            p.lateral_step,
            p.longitudinal_step,
            p.collision_margin
        ),
        (30.0, 50.0, 50.0, 3.0, 3.0, 9.0)
    );
    assert_eq!((p.perception_angle, p.birds, p.steps), (180.0, 15, 2000));
    assert_eq!((c.runs, c.snapshot_every), (200, 40));
}

#[test]
fn file_beats_defaults_for_every_field() {
    let c = layered(&Overrides::default());
    let d = Config::default();
    assert_eq!(
        (c.params.birds, c.params.perception_angle, c.params.steps),
        (25, 170.0, 500)
    );
    assert_eq!((c.seed, c.runs, c.snapshot_every), (9, 30, 20));
    assert_eq!(c.grid, vec![Cell { n: 5, alpha: 90.0 }]);
    assert_eq!(c.out, PathBuf::from("file_out"));
    assert_eq!(c.series, Some(SeriesIndicator::MeanSegmentDistance));
    assert_eq!((c.series_every, c.series_runs, c.workers), (5, 3, 2));
    assert_ne!(c, d);
}

#[test]
fn flags_beat_the_file_for_every_field() {
    let o = Overrides {
        n: Some(35),
        alpha: Some(120.0),
        t: Some(900),
        seed: Some(1234),
        runs: Some(4),
        grid: Some(vec![
            Cell { n: 7, alpha: 180.0 },
            Cell { n: 8, alpha: 170.0 },
        ]),
        out: Some(PathBuf::from("flag_out")),
        snapshot_every: Some(3),
        series: Some(SeriesIndicator::MeanSegmentDistance),
        series_every: Some(2),
        series_runs: Some(1),
        workers: Some(1),
    };
    let c = layered(&o);
    assert_eq!(
        (c.params.birds, c.params.perception_angle, c.params.steps),
        (35, 120.0, 900)
    );
    assert_eq!((c.seed, c.runs, c.snapshot_every), (1234, 4, 3));
    assert_eq!(c.grid, o.grid.unwrap());
    assert_eq!(c.out, PathBuf::from("flag_out"));
    assert_eq!((c.series_every, c.series_runs, c.workers), (2, 1, 1));
}

#[test]
fn one_flag_leaves_the_other_file_values() {
    let c = layered(&Overrides {
        seed: Some(77),
        ..Overrides::default()
    });
    assert_eq!((c.seed, c.runs, c.params.birds), (77, 30, 25));
}

#[test]
fn wash_sizes_come_from_the_file() {
    let mut c = Config::default();
    c.apply_file_contents("l = 20\nd = 40\nw = 60\ndx = 2\ndy = 4\neps = 10\n")
        .unwrap();
    let p = c.params;
    assert_eq!(
        (
            p.upwash_width,
            p.wash_depth,
            p.wingspan,
            p.lateral_step,
            p.longitudinal_step,
            p.collision_margin
        ),
        (20.0, 40.0, 60.0, 2.0, 4.0, 10.0)
    );
    assert!(c.validate().is_ok());
    assert!(Config::resolve(
        None,
        &Overrides {
            n: Some(0),
            ..Overrides::default()
        }
    )
    .is_err());
}
