use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dhull_core::experiment::{self, ExperimentError};
use dhull_core::hull::trace_hull;
use dhull_core::oracle::Shape;
use dhull_core::{
    convergents, discrete_hull_with_stats, find_hull_vertex_general, naive_hull, parse_rational,
    BodyOracle, Counted, HullChain, HullError, LatticePoint, OracleError,
};

/// Exit status for malformed input.
const EXIT_INVALID: u8 = 2;
/// Exit status when the traced and naive hulls disagree.
const EXIT_MISMATCH: u8 = 1;

#[derive(Parser)]
#[command(
    name = "dhull",
    version,
    about = "Discrete convex hulls of convex bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction convergents of a positive rational `a/b`.
    Convergents {
        /// The fraction, e.g. `31/14`.
        fraction: String,
    },
    /// Discrete hull of a disk or polygon.
    Hull {
        /// Shape JSON, inline or a path to a file.
        #[arg(long)]
        shape: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Algorithm::Dch)]
        algorithm: Algorithm,
    },
    /// Random-disk experiments; writes one CSV row per trial.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<i64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also time the naive hull (and check it agrees).
        #[arg(long)]
        naive: bool,
        /// CSV output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the traced hull against the naive hull on random and
    /// adversarial disks.
    Verify {
        /// Comma-separated radii, or `lo..hi` for 12 log-spaced values.
        #[arg(long, required = true)]
        radii: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Dch,
    Naive,
}

/// Error carrying the process exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn invalid(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        error: error.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Convergents { fraction } => run_convergents(&fraction),
        Command::Hull {
            shape,
            format,
            algorithm,
        } => run_hull(&shape, format, algorithm),
        Command::Bench {
            radii,
            trials,
            seed,
            naive,
            out,
        } => run_bench(&radii, trials, seed, naive, out),
        Command::Verify {
            radii,
            trials,
            seed,
        } => run_verify(&radii, trials, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run_convergents(fraction: &str) -> Result<(), Failure> {
    let r = parse_rational(fraction).map_err(invalid)?;
    let list = convergents(r).map_err(invalid)?;
    let mut out = io::stdout().lock();
    for c in list {
        writeln!(
            out,
            "{} {} {} {}",
            c.index, c.quotient, c.point.x, c.point.y
        )
        .map_err(invalid)?;
    }
    Ok(())
}

fn read_shape(arg: &str) -> Result<Shape> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading shape file {arg}"))?
    };
    Ok(Shape::from_json(&text)?)
}

fn hull_failure(e: HullError) -> Failure {
    match e {
        HullError::Oracle(OracleError::InvalidShape(_) | OracleError::InvalidBody(_))
        | HullError::Oracle(OracleError::BudgetExceeded(_)) => invalid(e),
        other => Failure {
            code: EXIT_MISMATCH,
            error: other.into(),
        },
    }
}

/// A lattice vertex to start tracing from. Disks try the lattice point
/// nearest the centre first.
fn start_vertex(shape: &Shape, body: &dyn BodyOracle) -> Result<Option<LatticePoint>, HullError> {
    let (cx, cy) = shape.interior_point();
    if shape.is_disk() {
        let near = LatticePoint::new(cx.round().to_integer(), cy.round().to_integer());
        if body.contains(near) {
            return Ok(Some(near));
        }
    }
    find_hull_vertex_general(body, (cx, cy))
}

fn run_hull(shape_arg: &str, format: Format, algorithm: Algorithm) -> Result<(), Failure> {
    let shape = read_shape(shape_arg).map_err(invalid)?;
    let body = shape.build().map_err(invalid)?;
    let counted = Counted::new(&body);
    let started = Instant::now();
    let (hull, max_iter): (HullChain, Option<u32>) = match algorithm {
        Algorithm::Naive => match naive_hull(&counted) {
            Err(HullError::NoLatticePoints) => (HullChain::from_vertices(Vec::new()), None),
            other => (other.map_err(hull_failure)?, None),
        },
        Algorithm::Dch => {
            let Some(v) = start_vertex(&shape, &counted).map_err(hull_failure)? else {
                // No lattice points: the discrete hull is empty.
                return print_hull(
                    &HullChain::from_vertices(Vec::new()),
                    format,
                    counted.counts().total(),
                    Some(0),
                    started,
                );
            };
            // A disk's lattice points are lattice-connected, so any of them
            // seeds the lowest-vertex search; otherwise `v` is already a
            // hull vertex.
            let (hull, stats) = if shape.is_disk() {
                discrete_hull_with_stats(&counted, v)
            } else {
                trace_hull(&counted, v, None).map(|(h, s)| (h.normalized(), s))
            }
            .map_err(hull_failure)?;
            (hull, Some(stats.max_iterations))
        }
    };
    print_hull(&hull, format, counted.counts().total(), max_iter, started)
}

fn print_hull(
    hull: &HullChain,
    format: Format,
    calls: u64,
    max_iter: Option<u32>,
    started: Instant,
) -> Result<(), Failure> {
    let elapsed = started.elapsed().as_secs_f64();
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            let doc = json!({
                "vertices": hull.vertices.iter().map(|v| [v.x, v.y]).collect::<Vec<_>>(),
                "edge_weights": hull.edge_weights,
                "boundary_count": hull.boundary_count,
                "vertex_count": hull.vertices.len(),
                "oracle_calls": calls,
                "max_iterations": max_iter,
                "time_s": elapsed,
            });
            writeln!(out, "{doc:#}").map_err(invalid)?;
        }
        Format::Csv => {
            writeln!(out, "x,y,edge_weight").map_err(invalid)?;
            for (i, v) in hull.vertices.iter().enumerate() {
                let w = hull
                    .edge_weights
                    .get(i)
                    .map_or(String::new(), u64::to_string);
                writeln!(out, "{},{},{}", v.x, v.y, w).map_err(invalid)?;
            }
            writeln!(
                out,
                "# vertex_count={} boundary_count={} oracle_calls={} max_iterations={}",
                hull.vertices.len(),
                hull.boundary_count,
                calls,
                max_iter.map_or("-".to_string(), |m| m.to_string())
            )
            .map_err(invalid)?;
        }
    }
    Ok(())
}

fn experiment_failure(e: ExperimentError) -> Failure {
    match e {
        ExperimentError::InvalidInput(_) | ExperimentError::Oracle(_) => invalid(e),
        other => Failure {
            code: EXIT_MISMATCH,
            error: other.into(),
        },
    }
}

fn run_bench(
    radii: &[i64],
    trials: usize,
    seed: u64,
    naive: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let stats = experiment::run_trials(radii, trials, seed, naive).map_err(experiment_failure)?;
    match out {
        Some(path) => {
            let file = File::create(&path)
                .with_context(|| format!("creating {}", path.display()))
                .map_err(invalid)?;
            experiment::write_csv(BufWriter::new(file), &stats).map_err(experiment_failure)?;
        }
        None => experiment::write_csv(io::stdout().lock(), &stats).map_err(experiment_failure)?,
    }
    let mut err = io::stderr().lock();
    for row in experiment::aggregate(&stats) {
        let _ = writeln!(
            err,
            "r={} vertices avg {:.3} [{}, {}] ratio {:.3} | boundary avg {:.3} ratio {:.3} | max_iter {} | t_dch {:.6}s{}",
            row.radius,
            row.vertices.avg,
            row.vertices.min,
            row.vertices.max,
            row.vertex_ratio.avg,
            row.boundary.avg,
            row.boundary_ratio.avg,
            row.max_iterations,
            row.mean_t_dch,
            row.mean_t_naive.map_or(String::new(), |t| format!(" t_naive {t:.6}s")),
        );
    }
    Ok(())
}

fn parse_radii(spec: &str) -> Result<Vec<i64>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i64 = lo.trim().parse().context("radius range start")?;
        let hi: i64 = hi.trim().parse().context("radius range end")?;
        if lo < 2 || hi < lo {
            bail!("bad radius range {spec}");
        }
        return Ok(experiment::log_spaced(lo, hi, 12));
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .with_context(|| format!("bad radius {s:?}"))
        })
        .collect()
}

fn run_verify(radii: &str, trials: usize, seed: u64) -> Result<(), Failure> {
    let radii = parse_radii(radii).map_err(invalid)?;
    let report = experiment::verify(&radii, trials, seed).map_err(experiment_failure)?;
    if report.all_equal() {
        println!("all equal ({} disks checked)", report.checked);
        return Ok(());
    }
    let first = &report.mismatches[0];
    let detail = serde_json::to_string(first).unwrap_or_else(|_| format!("{first:?}"));
    println!(
        "{} mismatches out of {} disks; first: {detail}",
        report.mismatches.len(),
        report.checked
    );
    Err(Failure {
        code: EXIT_MISMATCH,
        error: anyhow::anyhow!("traced and naive hulls disagree"),
    })
}
