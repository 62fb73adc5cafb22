//! Randomised disk experiments: trial runs, aggregation and the
//! equivalence check against the naive hull.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::baseline::naive_hull;
use crate::cfrac::ceil_log_phi;
use crate::hull::{discrete_hull_with_stats, HullChain, HullError};
use crate::lattice::{LatticePoint, Rational};
use crate::oracle::{Counted, DiskBody, OracleError};

/// Centres are drawn on the grid `k / 2^20` of the unit square.
pub const CENTER_DENOM: i64 = 1 << 20;

/// Timings at and above this radius are the median of three runs.
pub const MEDIAN_RADIUS: i64 = 100_000;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment parameters: {0}")]
    InvalidInput(String),
    #[error("naive and traced hulls differ for {0:?}")]
    Mismatch(Disk),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("writing results: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Disk {
    pub radius: i64,
    pub cx: Rational,
    pub cy: Rational,
}

impl Disk {
    pub fn body(&self) -> Result<DiskBody, OracleError> {
        DiskBody::with_radius(self.cx, self.cy, Rational::from_integer(self.radius))
    }

    /// A lattice point inside the disk: the one nearest the centre.
    pub fn seed(&self) -> LatticePoint {
        LatticePoint::new(self.cx.round().to_integer(), self.cy.round().to_integer())
    }
}

/// Seeded centre for trial `trial` at `radius`; independent of the other
/// trials so runs can be split freely.
pub fn trial_center(seed: u64, radius: i64, trial: usize) -> (Rational, Rational) {
    let stream = seed
        ^ (radius as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (trial as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let x = rng.random_range(0..CENTER_DENOM);
    let y = rng.random_range(0..CENTER_DENOM);
    (
        Rational::new(x, CENTER_DENOM),
        Rational::new(y, CENTER_DENOM),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialStats {
    pub radius: i64,
    pub trial: usize,
    pub vertex_count: usize,
    pub boundary_count: u64,
    pub max_iterations_per_edge: u32,
    pub oracle_calls: u64,
    pub wall_time_dch: f64,
    pub wall_time_naive: Option<f64>,
}

/// Largest admissible stage count for a disk of radius `r`.
pub fn iteration_bound(radius: i64) -> u32 {
    2 + ceil_log_phi(2.0 * radius as f64 + 2.0)
}

fn timed<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, f64) {
    let mut times = Vec::with_capacity(reps);
    let mut out = None;
    for _ in 0..reps {
        let t = Instant::now();
        out = Some(f());
        times.push(t.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    (
        out.expect("at least one repetition"),
        times[times.len() / 2],
    )
}

fn run_trial(disk: Disk, trial: usize, with_naive: bool) -> Result<TrialStats, ExperimentError> {
    let body = disk.body()?;
    let reps = if disk.radius >= MEDIAN_RADIUS { 3 } else { 1 };
    let counted = Counted::new(&body);
    let (hull, stats) = discrete_hull_with_stats(&counted, disk.seed())?;
    let oracle_calls = counted.counts().total();
    let (_, wall_time_dch) = timed(reps, || discrete_hull_with_stats(&body, disk.seed()));
    let wall_time_naive = if with_naive {
        let (naive, t) = timed(reps, || naive_hull(&body));
        if naive? != hull {
            return Err(ExperimentError::Mismatch(disk));
        }
        Some(t)
    } else {
        None
    };
    Ok(TrialStats {
        radius: disk.radius,
        trial,
        vertex_count: hull.vertices.len(),
        boundary_count: hull.boundary_count,
        max_iterations_per_edge: stats.max_iterations,
        oracle_calls,
        wall_time_dch,
        wall_time_naive,
    })
}

fn check_params(radii: &[i64], trials: usize) -> Result<(), ExperimentError> {
    if radii.is_empty() || trials == 0 {
        return Err(ExperimentError::InvalidInput(
            "need at least one radius and one trial".into(),
        ));
    }
    if let Some(r) = radii.iter().find(|&&r| !(2..=10_000_000).contains(&r)) {
        return Err(ExperimentError::InvalidInput(format!(
            "radius {r} outside 2..=10^7"
        )));
    }
    Ok(())
}

/// Runs `trials` disks per radius. Trials run sequentially so timings are
/// not skewed by contention; results are in (radius, trial) order.
pub fn run_trials(
    radii: &[i64],
    trials: usize,
    seed: u64,
    with_naive: bool,
) -> Result<Vec<TrialStats>, ExperimentError> {
    check_params(radii, trials)?;
    let mut out = Vec::with_capacity(radii.len() * trials);
    for &radius in radii {
        for trial in 0..trials {
            let (cx, cy) = trial_center(seed, radius, trial);
            out.push(run_trial(Disk { radius, cx, cy }, trial, with_naive)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

impl Summary {
    fn of(values: impl Iterator<Item = f64>) -> Summary {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        Summary {
            min,
            max,
            avg: round3(sum / n as f64),
        }
    }
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub radius: i64,
    pub trials: usize,
    pub vertices: Summary,
    pub vertex_ratio: Summary,
    pub boundary: Summary,
    pub boundary_ratio: Summary,
    pub max_iterations: u32,
    pub mean_t_dch: f64,
    pub mean_t_naive: Option<f64>,
}

/// Per-radius min/max/avg, with ratios against `r^(2/3)`. Rows follow the
/// order in which radii first appear.
pub fn aggregate(stats: &[TrialStats]) -> Vec<AggregateRow> {
    let mut radii: Vec<i64> = Vec::new();
    for s in stats {
        if !radii.contains(&s.radius) {
            radii.push(s.radius);
        }
    }
    radii
        .into_iter()
        .map(|radius| {
            let batch: Vec<&TrialStats> = stats.iter().filter(|s| s.radius == radius).collect();
            let scale = (radius as f64).powf(2.0 / 3.0);
            let n = batch.len() as f64;
            let naive: Vec<f64> = batch.iter().filter_map(|s| s.wall_time_naive).collect();
            AggregateRow {
                radius,
                trials: batch.len(),
                vertices: Summary::of(batch.iter().map(|s| s.vertex_count as f64)),
                vertex_ratio: Summary::of(batch.iter().map(|s| s.vertex_count as f64 / scale)),
                boundary: Summary::of(batch.iter().map(|s| s.boundary_count as f64)),
                boundary_ratio: Summary::of(batch.iter().map(|s| s.boundary_count as f64 / scale)),
                max_iterations: batch
                    .iter()
                    .map(|s| s.max_iterations_per_edge)
                    .max()
                    .unwrap_or(0),
                mean_t_dch: batch.iter().map(|s| s.wall_time_dch).sum::<f64>() / n,
                mean_t_naive: (!naive.is_empty())
                    .then(|| naive.iter().sum::<f64>() / naive.len() as f64),
            }
        })
        .collect()
}

pub const CSV_HEADER: [&str; 8] = [
    "radius",
    "trial",
    "vertices",
    "boundary",
    "max_iter",
    "oracle_calls",
    "t_dch_s",
    "t_naive_s",
];

/// Writes trial rows as CSV; a missing naive time is an empty field.
pub fn write_csv<W: Write>(out: W, stats: &[TrialStats]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for s in stats {
        w.write_record([
            s.radius.to_string(),
            s.trial.to_string(),
            s.vertex_count.to_string(),
            s.boundary_count.to_string(),
            s.max_iterations_per_edge.to_string(),
            s.oracle_calls.to_string(),
            format!("{:.6}", s.wall_time_dch),
            s.wall_time_naive
                .map_or(String::new(), |t| format!("{t:.6}")),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> ExperimentError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => ExperimentError::Io(io),
        other => ExperimentError::InvalidInput(format!("{other:?}")),
    }
}

/// A disagreement between the traced and the naive hull.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub disk: Disk,
    pub trial: Option<usize>,
    pub traced: Option<HullChain>,
    pub naive: Option<HullChain>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn all_equal(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Centres on the lattice and on half-integers, where the circle passes
/// through lattice points and hull edges tend to be collinear with them.
pub fn adversarial_centers() -> Vec<(Rational, Rational)> {
    let h = Rational::new(1, 2);
    let z = Rational::from_integer(0);
    vec![(z, z), (h, z), (z, h), (h, h)]
}

fn check_disk(disk: Disk, trial: Option<usize>) -> Option<Mismatch> {
    let mismatch = |traced, naive, error| Mismatch {
        disk,
        trial,
        traced,
        naive,
        error,
    };
    let body = match disk.body() {
        Ok(b) => b,
        Err(e) => return Some(mismatch(None, None, Some(e.to_string()))),
    };
    let traced = discrete_hull_with_stats(&body, disk.seed()).map(|(h, _)| h);
    let naive = naive_hull(&body);
    match (traced, naive) {
        (Ok(a), Ok(b)) if a == b => None,
        (a, b) => {
            let error = [a.as_ref().err(), b.as_ref().err()]
                .into_iter()
                .flatten()
                .map(ToString::to_string)
                .next();
            Some(mismatch(a.ok(), b.ok(), error))
        }
    }
}

/// Compares the traced and naive hulls on random disks plus the
/// adversarial centres at every radius. Runs in parallel; the report lists
/// mismatches in (radius, trial) order.
pub fn verify(radii: &[i64], trials: usize, seed: u64) -> Result<VerifyReport, ExperimentError> {
    check_params(radii, trials)?;
    if let Some(r) = radii.iter().find(|&&r| r > 100_000) {
        return Err(ExperimentError::InvalidInput(format!(
            "radius {r} is too large for the naive comparison"
        )));
    }
    let mut jobs: Vec<(Disk, Option<usize>)> = Vec::new();
    for &radius in radii {
        for trial in 0..trials {
            let (cx, cy) = trial_center(seed, radius, trial);
            jobs.push((Disk { radius, cx, cy }, Some(trial)));
        }
        for (cx, cy) in adversarial_centers() {
            jobs.push((Disk { radius, cx, cy }, None));
        }
    }
    let mismatches: Vec<Mismatch> = jobs
        .par_iter()
        .filter_map(|&(disk, trial)| check_disk(disk, trial))
        .collect();
    Ok(VerifyReport {
        checked: jobs.len(),
        mismatches,
    })
}

/// `n` radii spaced evenly in log scale over `[lo, hi]`, rounded and
/// deduplicated.
pub fn log_spaced(lo: i64, hi: i64, n: usize) -> Vec<i64> {
    if n <= 1 {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<i64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp().round() as i64)
        .collect();
    out.dedup();
    out
}
