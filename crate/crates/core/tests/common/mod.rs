//! Brute-force references shared by the integration tests. Nothing here
//! goes through the crate's oracles: membership is recomputed from the
//! shape parameters with plain rational arithmetic.
#![allow(dead_code)]

use dhull_core::cfrac::{convergents_of, SEED_EVEN, SEED_ODD};
use dhull_core::{LatticePoint, LatticeVector, Rational};
use num_rational::Ratio;
use rand::Rng;

pub type Q = Ratio<i128>;

pub fn q(r: Rational) -> Q {
    Q::new(*r.numer() as i128, *r.denom() as i128)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n as i128)
}

fn floor_q(x: Q) -> i64 {
    x.floor().to_integer() as i64
}

fn ceil_q(x: Q) -> i64 {
    x.ceil().to_integer() as i64
}

/// Reference convex shape.
#[derive(Clone, Debug)]
pub enum Brute {
    Disk {
        cx: Q,
        cy: Q,
        r2: Q,
    },
    /// Counterclockwise, strictly convex.
    Polygon(Vec<(Q, Q)>),
}

impl Brute {
    pub fn disk(cx: Rational, cy: Rational, r2: Rational) -> Self {
        Brute::Disk {
            cx: q(cx),
            cy: q(cy),
            r2: q(r2),
        }
    }

    pub fn polygon(vertices: &[(Rational, Rational)]) -> Self {
        Brute::Polygon(vertices.iter().map(|&(x, y)| (q(x), q(y))).collect())
    }

    pub fn contains_q(&self, x: Q, y: Q) -> bool {
        match self {
            Brute::Disk { cx, cy, r2 } => {
                let (dx, dy) = (x - cx, y - cy);
                dx * dx + dy * dy <= *r2
            }
            Brute::Polygon(v) => (0..v.len()).all(|i| {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) >= Q::from_integer(0)
            }),
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.contains_q(qi(p.x), qi(p.y))
    }

    /// Integer box containing every lattice point of the shape.
    pub fn lattice_box(&self) -> (i64, i64, i64, i64) {
        match self {
            Brute::Disk { cx, cy, r2 } => {
                let r = Q::from_integer(isqrt_ceil(r2));
                (
                    floor_q(cx - r),
                    ceil_q(cx + r),
                    floor_q(cy - r),
                    ceil_q(cy + r),
                )
            }
            Brute::Polygon(v) => {
                let xs = v.iter().map(|p| p.0);
                let ys = v.iter().map(|p| p.1);
                (
                    floor_q(xs.clone().min().unwrap()),
                    ceil_q(xs.max().unwrap()),
                    floor_q(ys.clone().min().unwrap()),
                    ceil_q(ys.max().unwrap()),
                )
            }
        }
    }

    /// Every lattice point of the shape, row by row.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (x0, x1, y0, y1) = self.lattice_box();
        let mut out = Vec::new();
        for y in y0..=y1 {
            for x in x0..=x1 {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Lowest and highest lattice point of every nonempty column.
    pub fn column_ranges(&self) -> Vec<(i64, i64, i64)> {
        let (x0, x1, ..) = self.lattice_box();
        (x0..=x1)
            .filter_map(|x| self.column(x).map(|(lo, hi)| (x, lo, hi)))
            .collect()
    }

    /// Exact y-range of lattice points on column `x`.
    pub fn column(&self, x: i64) -> Option<(i64, i64)> {
        let zero = Q::from_integer(0);
        let xq = qi(x);
        let (lo, hi) = match self {
            Brute::Disk { cx, cy, r2 } => {
                let s = *r2 - (xq - cx) * (xq - cx);
                if s < zero {
                    return None;
                }
                // Float guess, then exact correction.
                let f = |v: Q| *v.numer() as f64 / *v.denom() as f64;
                let (c, h) = (f(*cy), f(s).sqrt());
                let mut lo = (c - h).ceil() as i64;
                let mut hi = (c + h).floor() as i64;
                let inside = |y: i64| (qi(y) - cy) * (qi(y) - cy) <= s;
                while inside(lo - 1) {
                    lo -= 1;
                }
                while lo <= hi && !inside(lo) {
                    lo += 1;
                }
                while inside(hi + 1) {
                    hi += 1;
                }
                while hi >= lo && !inside(hi) {
                    hi -= 1;
                }
                (lo, hi)
            }
            Brute::Polygon(v) => {
                // Each edge bounds y linearly from one side on this column.
                let (mut lo, mut hi) = (i64::MIN, i64::MAX);
                for i in 0..v.len() {
                    let (p, n) = (v[i], v[(i + 1) % v.len()]);
                    let (ex, ey) = (n.0 - p.0, n.1 - p.1);
                    if ex == zero {
                        if -ey * (xq - p.0) < zero {
                            return None;
                        }
                        continue;
                    }
                    let y = p.1 + ey * (xq - p.0) / ex;
                    if ex > zero {
                        lo = lo.max(ceil_q(y));
                    } else {
                        hi = hi.min(floor_q(y));
                    }
                }
                (lo, hi)
            }
        };
        (lo <= hi).then_some((lo, hi))
    }

    /// The two ends of every column; same hull as all lattice points.
    pub fn column_ends(&self) -> Vec<LatticePoint> {
        self.column_ranges()
            .into_iter()
            .flat_map(|(x, lo, hi)| [LatticePoint::new(x, lo), LatticePoint::new(x, hi)])
            .collect()
    }

    /// Whether the closed segment `a b` meets the shape.
    pub fn meets_segment(&self, a: (Q, Q), b: (Q, Q)) -> bool {
        let zero = Q::from_integer(0);
        let one = Q::from_integer(1);
        match self {
            Brute::Disk { cx, cy, r2 } => {
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let (wx, wy) = (*cx - a.0, *cy - a.1);
                let len2 = dx * dx + dy * dy;
                let s = if len2 == zero {
                    zero
                } else {
                    ((wx * dx + wy * dy) / len2).max(zero).min(one)
                };
                let (px, py) = (a.0 + s * dx - cx, a.1 + s * dy - cy);
                px * px + py * py <= *r2
            }
            Brute::Polygon(v) => {
                // Clip the parameter interval [0, 1] against every edge.
                let (mut lo, mut hi) = (zero, one);
                for i in 0..v.len() {
                    let (p, n) = (v[i], v[(i + 1) % v.len()]);
                    let (ex, ey) = (n.0 - p.0, n.1 - p.1);
                    // Inside means ex*(y - py) - ey*(x - px) >= 0.
                    let f = |pt: (Q, Q)| ex * (pt.1 - p.1) - ey * (pt.0 - p.0);
                    let (fa, fb) = (f(a), f(b));
                    if fa < zero && fb < zero {
                        return false;
                    }
                    if fa < zero {
                        lo = lo.max(fa / (fa - fb));
                    } else if fb < zero {
                        hi = hi.min(fa / (fa - fb));
                    }
                }
                lo <= hi
            }
        }
    }

    /// Diameter upper bound in floating point.
    pub fn diameter(&self) -> f64 {
        let f = |x: Q| *x.numer() as f64 / *x.denom() as f64;
        match self {
            Brute::Disk { r2, .. } => 2.0 * f(*r2).sqrt(),
            Brute::Polygon(v) => {
                let mut d: f64 = 0.0;
                for a in v {
                    for b in v {
                        d = d.max((f(a.0) - f(b.0)).hypot(f(a.1) - f(b.1)));
                    }
                }
                d
            }
        }
    }
}

fn isqrt_ceil(x: &Q) -> i128 {
    let mut r = (*x.numer() as f64 / *x.denom() as f64).sqrt().ceil() as i128 + 1;
    while Q::from_integer((r - 1) * (r - 1)) >= *x && r > 0 {
        r -= 1;
    }
    r
}

/// Textbook monotone chain over a point set: strictly convex,
/// counterclockwise, starting at the lowest then leftmost vertex.
pub fn textbook_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort_by_key(|p| (p.x, p.y));
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let cross = |o: LatticePoint, a: LatticePoint, b: LatticePoint| (a - o).cross(b - o);
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let start = (0..lower.len())
        .min_by_key(|&i| (lower[i].y, lower[i].x))
        .unwrap();
    lower.rotate_left(start);
    lower
}

/// Lattice points on the boundary of the hull of `vertices`.
pub fn boundary_points(vertices: &[LatticePoint]) -> u64 {
    let n = vertices.len();
    match n {
        0 => 0,
        1 => 1,
        2 => edge_gcd(vertices[0], vertices[1]) + 1,
        _ => (0..n)
            .map(|i| edge_gcd(vertices[i], vertices[(i + 1) % n]))
            .sum(),
    }
}

fn edge_gcd(a: LatticePoint, b: LatticePoint) -> u64 {
    let (mut x, mut y) = ((b.x - a.x).unsigned_abs(), (b.y - a.y).unsigned_abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Random rational in `[lo, hi)` with denominator `den`.
pub fn rand_q<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    Rational::new(rng.random_range(lo * den..hi * den), den)
}

/// Random disk: centre in `[-3, 3)^2` with a random power-of-two
/// denominator, radius^2 rational in `[r2_lo, r2_hi)`.
pub fn random_disk<R: Rng>(rng: &mut R, r2_lo: i64, r2_hi: i64) -> (Rational, Rational, Rational) {
    let den = 1i64 << rng.random_range(0..=12);
    let cx = rand_q(rng, -3, 3, den);
    let cy = rand_q(rng, -3, 3, den);
    let r2_den = [1, 2, 3, 4, 7, 16][rng.random_range(0..6)];
    let r2 = rand_q(rng, r2_lo, r2_hi, r2_den);
    (cx, cy, r2)
}

/// Random strictly convex polygon with rational vertices, from points on
/// an ellipse at sorted random angles. Returns `None` for degenerate draws.
pub fn random_polygon<R: Rng>(rng: &mut R, scale: f64) -> Option<Vec<(Rational, Rational)>> {
    let n = rng.random_range(3..=9);
    let mut angles: Vec<f64> = (0..n)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    let (a, b) = (
        scale * rng.random_range(0.05..1.0),
        scale * rng.random_range(0.05..1.0),
    );
    let tilt: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let (ox, oy) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let den = 64;
    let mut pts: Vec<(i64, i64)> = angles
        .iter()
        .map(|&t| {
            let (x, y) = (a * t.cos(), b * t.sin());
            let (xr, yr) = (
                x * tilt.cos() - y * tilt.sin() + ox,
                x * tilt.sin() + y * tilt.cos() + oy,
            );
            (
                (xr * den as f64).round() as i64,
                (yr * den as f64).round() as i64,
            )
        })
        .collect();
    pts.dedup();
    // Keep only strictly convex turns.
    let n = pts.len();
    if n < 3 {
        return None;
    }
    for i in 0..n {
        let (o, a, b) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        let c =
            (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128;
        if c <= 0 {
            return None;
        }
    }
    Some(
        pts.into_iter()
            .map(|(x, y)| (Rational::new(x, den), Rational::new(y, den)))
            .collect(),
    )
}

/// Convergent points of `num/den` preceded by the two seeds.
pub fn with_seeds(num: i64, den: i64) -> Vec<LatticeVector> {
    let mut v = vec![SEED_EVEN.to_vector(), SEED_ODD.to_vector()];
    v.extend(
        convergents_of(num, den)
            .unwrap()
            .into_iter()
            .map(|c| c.point.to_vector()),
    );
    v
}

/// Unimodularity of consecutive convergents, super-Fibonacci growth and
/// the final point `(den, num)`, for a reduced fraction.
pub fn check_convergent_chain(num: i64, den: i64) -> Result<(), String> {
    let pts = with_seeds(num, den);
    let quotients: Vec<u64> = convergents_of(num, den)
        .unwrap()
        .iter()
        .map(|c| c.quotient)
        .collect();
    for i in 1..pts.len() {
        if pts[i - 1].cross(pts[i]).abs() != 1 {
            return Err(format!("{num}/{den}: not unimodular at {i}"));
        }
    }
    // Growth holds from the first stage whose quotient is at least one;
    // only the zeroth may be zero.
    for i in 2..pts.len() {
        if i == 2 && quotients[0] == 0 {
            continue;
        }
        if pts[i].dx < pts[i - 1].dx + pts[i - 2].dx || pts[i].dy < pts[i - 1].dy + pts[i - 2].dy {
            return Err(format!("{num}/{den}: growth fails at {i}"));
        }
    }
    if *pts.last().unwrap() != LatticeVector::new(den, num) {
        return Err(format!("{num}/{den}: wrong final convergent"));
    }
    Ok(())
}

fn segments_meet(a: LatticeVector, b: LatticeVector, c: LatticeVector, d: LatticeVector) -> bool {
    let orient =
        |p: LatticeVector, q: LatticeVector, r: LatticeVector| (q - p).cross(r - p).signum();
    let within = |p: LatticeVector, q: LatticeVector, r: LatticeVector| {
        r.dx >= p.dx.min(q.dx)
            && r.dx <= p.dx.max(q.dx)
            && r.dy >= p.dy.min(q.dy)
            && r.dy <= p.dy.max(q.dy)
    };
    let (o1, o2, o3, o4) = (
        orient(a, b, c),
        orient(a, b, d),
        orient(c, d, a),
        orient(c, d, b),
    );
    if o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0 {
        return true;
    }
    (o1 == 0 && within(a, b, c))
        || (o2 == 0 && within(a, b, d))
        || (o3 == 0 && within(c, d, a))
        || (o4 == 0 && within(c, d, b))
}

/// Each segment from a convergent `rho` to `rho + prev` crosses the
/// segment from the origin to `(x, y)`, for coprime positive `x, y`.
pub fn check_crossing(x: i64, y: i64) -> Result<(), String> {
    let origin = LatticeVector::new(0, 0);
    let target = LatticeVector::new(x, y);
    let pts = with_seeds(y, x);
    for i in 2..pts.len() {
        let (rho, prev) = (pts[i], pts[i - 1]);
        if !segments_meet(rho, rho + prev, origin, target) {
            return Err(format!("({x}, {y}): step {} misses", i - 2));
        }
    }
    Ok(())
}
