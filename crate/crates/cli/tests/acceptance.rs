//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{
    check_convergent_chain, check_crossing, random_disk, random_polygon, textbook_hull, Brute,
};
use dhull_core::experiment::{aggregate, iteration_bound, run_trials, AggregateRow, TrialStats};
use dhull_core::{
    convergents, discrete_hull, discrete_hull_from, find_hull_vertex_general, gcd, DiskBody,
    HullChain, LatticePoint, LatticeVector, PolygonBody, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;
const BATCH_RADII: [i64; 4] = [10, 100, 1_000, 10_000];

/// Relative tolerance on reference averages.
const AVG_TOL: f64 = 0.05;
const VERTEX_AVG: [f64; 4] = [16.0, 74.0, 345.0, 1603.0];
const VERTEX_RATIO: (f64, f64) = (3.33, 3.60);
const BOUNDARY_AVG: [f64; 4] = [40.0, 235.0, 1217.0, 5986.0];
/// Per-radius reference envelopes (min, max) for the boundary ratio.
const BOUNDARY_RATIO: [(f64, f64); 4] = [
    (8.000, 11.500),
    (10.286, 11.952),
    (10.750, 12.780),
    (12.278, 13.491),
];
const ITER_RADII: [i64; 6] = [10, 100, 1_000, 10_000, 100_000, 1_000_000];
const ITER_REFERENCE: [u32; 6] = [5, 6, 7, 9, 11, 13];
const ITER_TOL: u32 = 2;
const DCH_RATIO_MAX: f64 = 40.0;
const NAIVE_RATIO_MIN: f64 = 60.0;

const CONVERGENT_LIMIT: Duration = Duration::from_millis(1);
const VERIFY_LIMIT: Duration = Duration::from_secs(120);
const BATCH_LIMIT: Duration = Duration::from_secs(60);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn dhull() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dhull"))
}

fn criterion_1() -> Outcome {
    let cases: [(&str, &str); 2] = [
        ("31/14", "0 2 1 2\n1 4 4 9\n2 1 5 11\n3 2 14 31\n"),
        ("8/5", "0 1 1 1\n1 1 1 2\n2 1 2 3\n3 2 5 8\n"),
    ];
    let mut slowest = Duration::ZERO;
    for (fraction, expected) in cases {
        let out = dhull().args(["convergents", fraction]).output().unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        if !out.status.success() || text != expected {
            return outcome(false, format!("{fraction}: got {text:?}"));
        }
        let r = dhull_core::parse_rational(fraction).unwrap();
        let t = Instant::now();
        let list = convergents(r).unwrap();
        slowest = slowest.max(t.elapsed());
        assert_eq!(list.len(), 4);
    }
    outcome(
        slowest < CONVERGENT_LIMIT,
        format!("exact output, slowest expansion {slowest:?}"),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let out = dhull()
        .args([
            "verify", "--radii", "2..2000", "--trials", "50", "--seed", "42",
        ])
        .output()
        .unwrap();
    let elapsed = t.elapsed();
    let text = String::from_utf8_lossy(&out.stdout).trim().to_string();
    outcome(
        out.status.success() && text.starts_with("all equal") && elapsed < VERIFY_LIMIT,
        format!("{text} in {:.1}s", elapsed.as_secs_f64()),
    )
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol * target
}

fn criterion_3(rows: &[AggregateRow], elapsed: Duration) -> Outcome {
    let mut pass = elapsed < BATCH_LIMIT;
    let mut parts = Vec::new();
    for (row, &target) in rows.iter().zip(&VERTEX_AVG) {
        let ok_avg = within(row.vertices.avg, target, AVG_TOL);
        let ok_ratio =
            row.radius < 1000 || (VERTEX_RATIO.0..=VERTEX_RATIO.1).contains(&row.vertex_ratio.avg);
        pass &= ok_avg && ok_ratio;
        parts.push(format!(
            "r={} avg {:.2} (ref {target}) ratio {:.3}",
            row.radius, row.vertices.avg, row.vertex_ratio.avg
        ));
    }
    parts.push(format!("{:.1}s", elapsed.as_secs_f64()));
    outcome(pass, parts.join("; "))
}

fn criterion_4(rows: &[AggregateRow]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for ((row, &target), &(lo, hi)) in rows.iter().zip(&BOUNDARY_AVG).zip(&BOUNDARY_RATIO) {
        let ok = within(row.boundary.avg, target, AVG_TOL)
            && (lo..=hi).contains(&row.boundary_ratio.avg);
        pass &= ok;
        parts.push(format!(
            "r={} avg {:.2} (ref {target}) ratio {:.3} in [{lo}, {hi}] (trials span {:.3}..{:.3})",
            row.radius,
            row.boundary.avg,
            row.boundary_ratio.avg,
            row.boundary_ratio.min,
            row.boundary_ratio.max
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_5(stats: &[TrialStats]) -> Outcome {
    let over = stats
        .iter()
        .find(|s| s.max_iterations_per_edge > iteration_bound(s.radius));
    if let Some(s) = over {
        return outcome(
            false,
            format!(
                "r={} trial {} used {} stages",
                s.radius, s.trial, s.max_iterations_per_edge
            ),
        );
    }
    let rows = aggregate(stats);
    let mut pass = true;
    let mut parts = Vec::new();
    for (row, &reference) in rows.iter().zip(&ITER_REFERENCE) {
        pass &= row.max_iterations.abs_diff(reference) <= ITER_TOL;
        parts.push(format!(
            "r={} max {} (ref {reference})",
            row.radius, row.max_iterations
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let small = aggregate(&run_trials(&[10_000], 30, SEED, true).unwrap()).remove(0);
    let large = aggregate(&run_trials(&[1_000_000], 10, SEED, true).unwrap()).remove(0);
    let (ds, dl) = (small.mean_t_dch, large.mean_t_dch);
    let (ns, nl) = (small.mean_t_naive.unwrap(), large.mean_t_naive.unwrap());
    let dch_ratio = dl / ds;
    let naive_ratio = nl / ns;
    let pass = dch_ratio <= DCH_RATIO_MAX && naive_ratio >= NAIVE_RATIO_MIN && ds < ns && dl < nl;
    outcome(
        pass,
        format!(
            "dch {:.3}ms -> {:.2}ms (x{dch_ratio:.1}), naive {:.3}ms -> {:.2}ms (x{naive_ratio:.1})",
            ds * 1e3,
            dl * 1e3,
            ns * 1e3,
            nl * 1e3
        ),
    )
}

/// Checks one traced hull against the brute-force reference of `brute`.
fn check_structure(h: &HullChain, brute: &Brute, disk_radius: Option<f64>) -> Result<(), String> {
    let ends = brute.column_ends();
    let reference = textbook_hull(&ends);
    if h.vertices != reference {
        return Err(format!(
            "hull {:?} != reference {:?}",
            h.vertices, reference
        ));
    }
    let v = &h.vertices;
    let n = v.len();
    if n >= 3 {
        for i in 0..n {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            if (b - a).cross(c - b) <= 0 {
                return Err(format!("not strictly convex at {b}"));
            }
        }
    }
    // Extremality: the sum of the incident outward normals supports each
    // vertex strictly. Column ends suffice since the functional is linear
    // along a column.
    for i in 0..n {
        let u = match n {
            1 => LatticeVector::new(0, 0),
            2 => v[i] - v[(i + 1) % n],
            _ => {
                let (a, b) = (v[i] - v[(i + n - 1) % n], v[(i + 1) % n] - v[i]);
                LatticeVector::new(a.dy + b.dy, -a.dx - b.dx)
            }
        };
        let at = v[i].to_vector().dot(u);
        if let Some(w) = ends
            .iter()
            .find(|&&w| w != v[i] && w.to_vector().dot(u) >= at)
        {
            return Err(format!("{w} not strictly below vertex {}", v[i]));
        }
    }
    let delta = brute.diameter();
    let bound = 6.0 * 2f64.cbrt() * delta.powf(2.0 / 3.0);
    if n as f64 > bound {
        return Err(format!("{n} vertices > {bound:.1}"));
    }
    if let Some(r) = disk_radius {
        for i in 0..n {
            let w = h.edge_weights[i];
            if w >= 2 {
                let d = v[(i + 1) % n] - v[i];
                let c = (d.norm_sq() as f64).sqrt() / w as f64;
                let limit = 4.0 * r.sqrt() / c.powf(1.5);
                if w as f64 > limit + 1e-9 {
                    return Err(format!("edge weight {w} > {limit:.3}"));
                }
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut disks, mut polygons) = (0, 0);
    while disks + polygons < 10_000 {
        let result = if (disks + polygons) % 4 != 3 {
            // Squared radius log-uniform up to 200^2, so diameters reach 400.
            let r2_hi = 2f64.powf(rng.random_range(1.0..15.3)) as i64;
            let (cx, cy, r2) = random_disk(&mut rng, 1, r2_hi.max(2));
            let body = DiskBody::new(cx, cy, r2).unwrap();
            let seed = LatticePoint::new(cx.round().to_integer(), cy.round().to_integer());
            let r = (*r2.numer() as f64 / *r2.denom() as f64).sqrt();
            disks += 1;
            discrete_hull(&body, seed)
                .map_err(|e| e.to_string())
                .and_then(|h| check_structure(&h, &Brute::disk(cx, cy, r2), Some(r)))
                .map_err(|e| format!("disk ({cx}, {cy}) r2={r2}: {e}"))
        } else {
            let scale = rng.random_range(1.0..200.0);
            let Some(verts) = random_polygon(&mut rng, scale) else {
                continue;
            };
            let brute = Brute::polygon(&verts);
            let Some(start) = textbook_hull(&brute.column_ends()).first().copied() else {
                continue;
            };
            polygons += 1;
            let body = PolygonBody::new(&verts).unwrap();
            discrete_hull_from(&body, start)
                .map_err(|e| e.to_string())
                .and_then(|h| check_structure(&h, &brute, None))
                .map_err(|e| format!("polygon {verts:?}: {e}"))
        };
        if let Err(e) = result {
            return outcome(false, e);
        }
    }

    let mut fractions = 0;
    while fractions < 10_000 {
        let (a, b) = (
            rng.random_range(1..1_000_000i64),
            rng.random_range(1..1_000_000i64),
        );
        let g = gcd(a as u64, b as u64).unwrap() as i64;
        if let Err(e) = check_convergent_chain(a / g, b / g) {
            return outcome(false, e);
        }
        fractions += 1;
    }
    let mut crossings = 0;
    while crossings < 1_000 {
        let (x, y) = (
            rng.random_range(1..100_000i64),
            rng.random_range(1..100_000i64),
        );
        if gcd(x as u64, y as u64).unwrap() != 1 {
            continue;
        }
        if let Err(e) = check_crossing(x, y) {
            return outcome(false, e);
        }
        crossings += 1;
    }
    outcome(
        true,
        format!("{disks} disks, {polygons} polygons, {fractions} convergent chains, {crossings} crossing checks"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let (mut found, mut empty) = (0, 0);
    for i in 0..200 {
        let (cx, cy, r2) = if i < 100 {
            let r = rng.random_range(3.0..1000.0f64);
            let den = 1i64 << 20;
            let cx = Rational::new(rng.random_range(0..den), den);
            let cy = Rational::new(rng.random_range(0..den), den);
            let r2 = Rational::new((r * r * 64.0).round() as i64, 64);
            (cx, cy, r2)
        } else {
            // Small disks around (1/2, 1/2), mostly without lattice points.
            let cx = Rational::new(rng.random_range(40..60), 100);
            let cy = Rational::new(rng.random_range(40..60), 100);
            (cx, cy, Rational::new(rng.random_range(1..80), 100))
        };
        let body = DiskBody::new(cx, cy, r2).unwrap();
        let reference = textbook_hull(&Brute::disk(cx, cy, r2).column_ends());
        let got = match find_hull_vertex_general(&body, (cx, cy)) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("({cx}, {cy}) r2={r2}: {e}")),
        };
        match got {
            Some(v) if reference.contains(&v) => found += 1,
            None if reference.is_empty() => empty += 1,
            other => {
                return outcome(
                    false,
                    format!("({cx}, {cy}) r2={r2}: got {other:?}, hull {reference:?}"),
                )
            }
        }
    }
    outcome(
        true,
        format!("{found} vertices confirmed, {empty} empty bodies reported as none"),
    )
}

fn report(n: usize, o: &Outcome) {
    println!(
        "criterion {n}: {} ({})",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
}

fn main() -> ExitCode {
    let mut outcomes = Vec::new();
    let c1 = criterion_1();
    report(1, &c1);
    outcomes.push(c1);
    let c2 = criterion_2();
    report(2, &c2);
    outcomes.push(c2);

    let t = Instant::now();
    let batches = run_trials(&BATCH_RADII, 100, SEED, false).unwrap();
    let batch_time = t.elapsed();
    let rows = aggregate(&batches);
    let c3 = criterion_3(&rows, batch_time);
    report(3, &c3);
    outcomes.push(c3);
    let c4 = criterion_4(&rows);
    report(4, &c4);
    outcomes.push(c4);

    let mut all = batches;
    all.extend(run_trials(&ITER_RADII[4..], 100, SEED, false).unwrap());
    let c5 = criterion_5(&all);
    report(5, &c5);
    outcomes.push(c5);

    for (n, check) in [
        (6, criterion_6 as fn() -> Outcome),
        (7, criterion_7),
        (8, criterion_8),
    ] {
        let o = check();
        report(n, &o);
        outcomes.push(o);
    }
    if outcomes.iter().all(|o| o.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
