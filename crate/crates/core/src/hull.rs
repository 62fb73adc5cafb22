//! Tracing the discrete hull of a body vertex by vertex.

use serde::Serialize;
use thiserror::Error;

use crate::cfrac::ceil_log_phi;
use crate::edgedir::{find_edge_direction, EdgeDirError, Quadrant, QuadrantFrame};
use crate::lattice::{LatticePoint, LatticeVector, Rational};
use crate::oracle::{
    last_inside, lattice_range, BodyOracle, ClippedBody, HalfPlane, OracleError, TrapezoidUnionBody,
};

/// Below this length of the x-extreme chord the general vertex search just
/// scans columns.
const SMALL_CHORD: f64 = 100.0;

/// Denominator used for non-lattice trapezoid corners.
const CORNER_DENOM: i64 = 1 << 16;

/// Shortest column chord accepted as holding a non-lattice corner.
const MIN_CORNER_CHORD: f64 = 1e-3;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum HullError {
    #[error("seed {0} is outside the body")]
    SeedOutside(LatticePoint),
    #[error("no lattice points in the body")]
    NoLatticePoints,
    #[error("hull trace exceeded {limit} vertices")]
    VertexBound { limit: usize },
    #[error("vertex {0} left the body during tracing")]
    LostVertex(LatticePoint),
    #[error(transparent)]
    EdgeDir(#[from] EdgeDirError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Vertices of the discrete hull in counterclockwise order, starting from
/// the lowest (then leftmost) vertex when produced by [`discrete_hull`] or
/// the naive baseline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullChain {
    pub vertices: Vec<LatticePoint>,
    /// `edge_weights[i]` is the weight of the edge leaving `vertices[i]`.
    pub edge_weights: Vec<u64>,
    /// Lattice points on the hull boundary.
    pub boundary_count: u64,
}

impl HullChain {
    /// Builds the chain from its vertex cycle.
    pub fn from_vertices(vertices: Vec<LatticePoint>) -> Self {
        let n = vertices.len();
        let edge_weights: Vec<u64> = if n < 2 {
            Vec::new()
        } else {
            (0..n)
                .map(|i| {
                    let d = vertices[(i + 1) % n] - vertices[i];
                    num_integer::gcd(d.dx.unsigned_abs(), d.dy.unsigned_abs())
                })
                .collect()
        };
        let boundary_count = boundary_count(n, &edge_weights);
        HullChain {
            vertices,
            edge_weights,
            boundary_count,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The same cycle rotated to start at its lowest, then leftmost, vertex.
    pub fn normalized(&self) -> HullChain {
        let Some(start) = (0..self.vertices.len()).min_by_key(|&i| {
            let v = self.vertices[i];
            (v.y, v.x)
        }) else {
            return self.clone();
        };
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(start);
        let mut edge_weights = self.edge_weights.clone();
        if !edge_weights.is_empty() {
            edge_weights.rotate_left(start);
        }
        HullChain {
            vertices,
            edge_weights,
            boundary_count: self.boundary_count,
        }
    }
}

fn boundary_count(vertices: usize, weights: &[u64]) -> u64 {
    match vertices {
        0 => 0,
        1 => 1,
        // A segment: both directions carry the same weight.
        2 => weights[0] + 1,
        _ => weights.iter().sum(),
    }
}

/// Counters collected while tracing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceStats {
    /// Largest number of stages used by a single edge-direction search.
    pub max_iterations: u32,
    pub total_iterations: u64,
    pub direction_searches: u64,
}

/// Largest vertex count a trace may reach before it is declared runaway.
pub fn vertex_limit(diameter: f64) -> usize {
    (7.0 * diameter.max(1.0).powf(2.0 / 3.0) + 16.0) as usize
}

/// Step-by-step hull tracer, counterclockwise from a known vertex.
pub struct HullTracer<'a, B: ?Sized> {
    body: &'a B,
    start: LatticePoint,
    current: LatticePoint,
    hint: Option<QuadrantFrame>,
    finished: bool,
    emitted: usize,
    limit: usize,
    stats: TraceStats,
}

impl<'a, B: BodyOracle + ?Sized> HullTracer<'a, B> {
    /// `hint` is the quadrant of the edge entering `start`, or `None` if
    /// unknown.
    pub fn new(body: &'a B, start: LatticePoint, hint: Option<Quadrant>) -> Self {
        HullTracer {
            body,
            start,
            current: start,
            hint: hint.map(Quadrant::frame),
            finished: false,
            emitted: 0,
            limit: vertex_limit(body.diameter_bound()),
            stats: TraceStats::default(),
        }
    }

    pub fn stats(&self) -> TraceStats {
        self.stats
    }

    /// The next edge as `(direction, weight)`. `None` once the trace is
    /// back at the start, or immediately for a single-point hull.
    pub fn next_edge(&mut self) -> Result<Option<(LatticeVector, u64)>, HullError> {
        if self.finished {
            return Ok(None);
        }
        let p = self.current;
        let Some(found) = find_edge_direction(self.body, p, self.hint)? else {
            self.finished = true;
            return Ok(None);
        };
        self.stats.direction_searches += 1;
        self.stats.total_iterations += found.iterations as u64;
        self.stats.max_iterations = self.stats.max_iterations.max(found.iterations);
        let e = found.direction;
        let k = last_inside(self.body, p, e)?.ok_or(HullError::LostVertex(p))?;
        if k < 1 {
            return Err(HullError::LostVertex(p + e));
        }
        self.current = p.step(e, k);
        self.hint = Some(found.quadrant.frame());
        self.emitted += 1;
        if self.current == self.start {
            self.finished = true;
        } else if self.emitted > self.limit {
            return Err(HullError::VertexBound { limit: self.limit });
        }
        Ok(Some((e, k as u64)))
    }

    /// The vertex reached by the next edge, or `None` when done.
    pub fn next_vertex(&mut self) -> Result<Option<LatticePoint>, HullError> {
        Ok(self.next_edge()?.map(|_| self.current))
    }

    fn run(mut self) -> Result<(HullChain, TraceStats), HullError> {
        let mut vertices = vec![self.start];
        let mut edge_weights = Vec::new();
        while let Some((_, w)) = self.next_edge()? {
            edge_weights.push(w);
            if self.current != self.start {
                vertices.push(self.current);
            }
        }
        let boundary_count = boundary_count(vertices.len(), &edge_weights);
        let chain = HullChain {
            vertices,
            edge_weights,
            boundary_count,
        };
        Ok((chain, self.stats))
    }
}

/// Lattice x-range of row `y`, if the row meets the body in a lattice point.
fn row_range<B: BodyOracle + ?Sized>(body: &B, y: i64) -> Result<Option<(i64, i64)>, OracleError> {
    lattice_range(body, LatticePoint::new(0, y), LatticeVector::new(1, 0))
}

/// Lattice y-range of column `x`.
fn column_range<B: BodyOracle + ?Sized>(
    body: &B,
    x: i64,
) -> Result<Option<(i64, i64)>, OracleError> {
    lattice_range(body, LatticePoint::new(x, 0), LatticeVector::new(0, 1))
}

/// Lowest, then leftmost, lattice point of a lattice-connected body,
/// found by a doubling search down from `seed` and a binary search over
/// the last gap.
pub fn find_lowest_vertex<B: BodyOracle + ?Sized>(
    body: &B,
    seed: LatticePoint,
) -> Result<LatticePoint, HullError> {
    if !body.contains(seed) {
        return Err(HullError::SeedOutside(seed));
    }
    let floor = body.bounding_box().ymin.floor() as i64 - 1;
    let mut filled = seed.y;
    let mut step: i64 = 1;
    let empty = loop {
        let y = seed.y.saturating_sub(step).max(floor);
        if row_range(body, y)?.is_none() {
            break y;
        }
        filled = y;
        step = step.saturating_mul(2);
    };
    let (mut lo, mut hi) = (empty, filled);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if row_range(body, mid)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (x, _) = row_range(body, hi)?.expect("row was found nonempty");
    Ok(LatticePoint::new(x, hi))
}

/// Discrete hull traced counterclockwise from the vertex `v0`.
pub fn discrete_hull_from<B: BodyOracle + ?Sized>(
    body: &B,
    v0: LatticePoint,
) -> Result<HullChain, HullError> {
    Ok(trace_hull(body, v0, None)?.0)
}

/// Full trace from the vertex `v0`; `hint` is the quadrant of the edge
/// entering `v0`, if known.
pub fn trace_hull<B: BodyOracle + ?Sized>(
    body: &B,
    v0: LatticePoint,
    hint: Option<Quadrant>,
) -> Result<(HullChain, TraceStats), HullError> {
    HullTracer::new(body, v0, hint).run()
}

/// Discrete hull of a lattice-connected body containing `seed`.
pub fn discrete_hull<B: BodyOracle + ?Sized>(
    body: &B,
    seed: LatticePoint,
) -> Result<HullChain, HullError> {
    Ok(discrete_hull_with_stats(body, seed)?.0)
}

/// [`discrete_hull`] together with iteration statistics.
pub fn discrete_hull_with_stats<B: BodyOracle + ?Sized>(
    body: &B,
    seed: LatticePoint,
) -> Result<(HullChain, TraceStats), HullError> {
    let v0 = find_lowest_vertex(body, seed)?;
    // Everything lies above v0 or to its right on the same row, so the
    // first edge points into quadrant I or II.
    HullTracer::new(body, v0, Some(Quadrant::I)).run()
}

fn floor_r(r: Rational) -> i64 {
    r.floor().to_integer()
}

fn ceil_r(r: Rational) -> i64 {
    r.ceil().to_integer()
}

fn line_meets<B: BodyOracle + ?Sized>(body: &B, origin: LatticePoint, dir: LatticeVector) -> bool {
    body.chord(origin, dir).is_some()
}

/// Largest integer `m >= from` for which `meets(m)` holds, assuming
/// `meets(from)` and that the set of such `m` is an interval.
fn extend(from: i64, sign: i64, meets: impl Fn(i64) -> bool) -> i64 {
    let mut good = from;
    let mut step: i64 = 1;
    let bad = loop {
        let m = from + sign * step;
        if !meets(m) {
            break m;
        }
        good = m;
        step = step.saturating_mul(2);
    };
    let (mut g, mut b) = (good, bad);
    while (b - g).abs() > 1 {
        let mid = g + (b - g) / 2;
        if meets(mid) {
            g = mid;
        } else {
            b = mid;
        }
    }
    g
}

/// A point of column `x` inside the body: a lattice point when the column
/// has one, otherwise a dyadic point near the middle of a long enough
/// chord.
fn column_anchor<B: BodyOracle + ?Sized>(
    body: &B,
    x: i64,
    prefer_low: bool,
) -> Result<Option<Rational>, OracleError> {
    if let Some((lo, hi)) = column_range(body, x)? {
        let y = if prefer_low { lo } else { hi };
        return Ok(Some(Rational::from_integer(y)));
    }
    let Some(c) = body.chord(LatticePoint::new(x, 0), LatticeVector::new(0, 1)) else {
        return Ok(None);
    };
    if c.hi - c.lo < MIN_CORNER_CHORD {
        return Ok(None);
    }
    let mid = (0.5 * (c.lo + c.hi) * CORNER_DENOM as f64).round() as i64;
    Ok(Some(Rational::new(mid, CORNER_DENOM)))
}

/// A vertex of the discrete hull of a convex body, given any point `p` of
/// the body, or `None` when the body holds no lattice point.
///
/// The lattice bounding box is found by doubling searches. When the body
/// is wide, a trapezoid is glued below (then above) the chord joining its
/// x-extreme columns; the union is convex, its lowest-left corner is a
/// lattice hull vertex, and tracing a short stretch of its hull reaches a
/// vertex inside the body.
pub fn find_hull_vertex_general<B: BodyOracle + ?Sized>(
    body: &B,
    p: (Rational, Rational),
) -> Result<Option<LatticePoint>, HullError> {
    let (px, py) = p;
    let horizontal = LatticeVector::new(1, 0);
    let vertical = LatticeVector::new(0, 1);
    let row_meets = |y: i64| line_meets(body, LatticePoint::new(0, y), horizontal);
    let col_meets = |x: i64| line_meets(body, LatticePoint::new(x, 0), vertical);

    // A body with a lattice point above (below) p crosses the row just
    // above (below) p.
    let Some(row0) = [floor_r(py), ceil_r(py)]
        .into_iter()
        .find(|&y| row_meets(y))
    else {
        return Ok(None);
    };
    let Some(col0) = [floor_r(px), ceil_r(px)]
        .into_iter()
        .find(|&x| col_meets(x))
    else {
        return Ok(None);
    };
    let (ymin, ymax) = (extend(row0, -1, row_meets), extend(row0, 1, row_meets));
    let (mut xl, mut xr) = (extend(col0, -1, col_meets), extend(col0, 1, col_meets));

    // Columns near the ends may be slivers without lattice points; drop
    // them until both ends can hold a trapezoid corner.
    let clip =
        |xl: i64, xr: i64| ClippedBody::new(body, HalfPlane::lattice_box(xl, xr, ymin, ymax));
    let left = loop {
        if xl > xr {
            return Ok(None);
        }
        match column_anchor(&clip(xl, xr), xl, true)? {
            Some(y) => break y,
            None => xl += 1,
        }
    };
    let right = loop {
        if xl > xr {
            return Ok(None);
        }
        match column_anchor(&clip(xl, xr), xr, true)? {
            Some(y) => break y,
            None => xr -= 1,
        }
    };
    let clipped = clip(xl, xr);

    let to_f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
    let e_len = ((xr - xl) as f64).hypot(to_f(right) - to_f(left));
    if e_len < SMALL_CHORD {
        return lowest_by_columns(&clipped, xl, xr);
    }

    let delta = ((xr - xl) as f64).hypot((ymax - ymin) as f64).ceil() as i64;
    let m = 1 + 4 * (2 * ceil_log_phi(2.0 * body.diameter_bound()) as usize + 7);

    let below = floor_r(left.min(right)).min(ymin) - delta;
    let lower = TrapezoidUnionBody::new(clip(xl, xr), (xl, left), (xr, right), below)?;
    let start = LatticePoint::new(xl, below);
    if let Some(v) = first_vertex_in(&lower, start, Quadrant::I, Some(m))? {
        return Ok(Some(v));
    }
    let above = ceil_r(left.max(right)).max(ymax) + delta;
    let upper = TrapezoidUnionBody::new(clip(xl, xr), (xl, left), (xr, right), above)?;
    let top = LatticePoint::new(xr, above);
    if let Some(v) = first_vertex_in(&upper, top, Quadrant::III, Some(m))? {
        return Ok(Some(v));
    }
    // The short traces came up empty: walk both hulls in full. A lattice
    // point on or above the chord shows up on the lower union's hull, one
    // on or below it on the upper union's.
    if let Some(v) = first_vertex_in(&lower, start, Quadrant::I, None)? {
        return Ok(Some(v));
    }
    first_vertex_in(&upper, top, Quadrant::III, None)
}

/// First vertex of the union's hull, traced from `start`, that lies in the
/// clipped body.
fn first_vertex_in<B: BodyOracle + ?Sized>(
    union: &TrapezoidUnionBody<&B>,
    start: LatticePoint,
    hint: Quadrant,
    max_vertices: Option<usize>,
) -> Result<Option<LatticePoint>, HullError> {
    let mut tracer = HullTracer::new(union, start, Some(hint));
    let mut seen = 0;
    while let Some(v) = tracer.next_vertex()? {
        if union.clipped().contains(v) {
            return Ok(Some(v));
        }
        seen += 1;
        if max_vertices.is_some_and(|m| seen >= m) {
            break;
        }
    }
    Ok(None)
}

/// Lowest, then leftmost, lattice point over a range of columns.
fn lowest_by_columns<B: BodyOracle + ?Sized>(
    body: &B,
    xl: i64,
    xr: i64,
) -> Result<Option<LatticePoint>, HullError> {
    let mut best: Option<LatticePoint> = None;
    for x in xl..=xr {
        if let Some((lo, _)) = column_range(body, x)? {
            if best.is_none_or(|b| lo < b.y) {
                best = Some(LatticePoint::new(x, lo));
            }
        }
    }
    Ok(best)
}
