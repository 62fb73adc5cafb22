use std::cmp::Ordering;

use num_integer::Integer;

use super::{BodyOracle, BoundingBox, Chord, OracleError, RayPos};
use crate::lattice::{LatticePoint, LatticeVector, Rational};

type V2 = (i128, i128);

fn sub(a: V2, b: V2) -> V2 {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(a: V2, b: V2) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: V2, b: V2) -> i128 {
    a.0 * b.0 + a.1 * b.1
}

/// 0 for directions in [0, pi), 1 for [pi, 2 pi).
fn half(v: V2) -> u8 {
    if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
        0
    } else {
        1
    }
}

/// Angular order of nonzero vectors, starting from the positive x axis.
fn angle_cmp(a: V2, b: V2) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

/// Strictly convex polygon with rational vertices in counterclockwise order.
///
/// Vertices are stored multiplied by a common denominator so all
/// predicates run on `i128`. Ray shooting is `O(log n)`: the extreme
/// vertices in the direction normal to the query line are found by binary
/// search over the edge directions, and each of the two monotone chains
/// between them is bisected for the crossing edge.
#[derive(Clone, Debug)]
pub struct PolygonBody {
    scale: i128,
    pts: Vec<V2>,
    edges: Vec<V2>,
    // Index of the edge with the smallest direction angle; edges taken
    // cyclically from here are sorted by angle.
    first_edge: usize,
    bbox: BoundingBox,
}

impl PolygonBody {
    pub fn from_lattice(vertices: &[LatticePoint]) -> Result<Self, OracleError> {
        let rational: Vec<(Rational, Rational)> = vertices
            .iter()
            .map(|p| (Rational::from_integer(p.x), Rational::from_integer(p.y)))
            .collect();
        Self::new(&rational)
    }

    pub fn new(vertices: &[(Rational, Rational)]) -> Result<Self, OracleError> {
        let n = vertices.len();
        if n < 3 {
            return Err(OracleError::InvalidBody(format!(
                "a polygon needs at least 3 vertices, got {n}"
            )));
        }
        let scale = vertices.iter().fold(1i128, |acc, (x, y)| {
            acc.lcm(&(*x.denom() as i128)).lcm(&(*y.denom() as i128))
        });
        let to_f = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
        let mut bbox = BoundingBox {
            xmin: f64::INFINITY,
            xmax: f64::NEG_INFINITY,
            ymin: f64::INFINITY,
            ymax: f64::NEG_INFINITY,
        };
        let mut pts = Vec::with_capacity(n);
        for (x, y) in vertices {
            let (xf, yf) = (to_f(x), to_f(y));
            if xf.abs() > 1.0e9
                || yf.abs() > 1.0e9
                || (xf.abs().max(yf.abs()) + 1.0) * scale as f64 > 1.0e14
            {
                return Err(OracleError::BudgetExceeded(format!(
                    "polygon vertex ({x}, {y})"
                )));
            }
            bbox.xmin = bbox.xmin.min(xf);
            bbox.xmax = bbox.xmax.max(xf);
            bbox.ymin = bbox.ymin.min(yf);
            bbox.ymax = bbox.ymax.max(yf);
            pts.push((
                *x.numer() as i128 * (scale / *x.denom() as i128),
                *y.numer() as i128 * (scale / *y.denom() as i128),
            ));
        }
        let edges: Vec<V2> = (0..n).map(|i| sub(pts[(i + 1) % n], pts[i])).collect();
        for i in 0..n {
            let (a, b) = (edges[i], edges[(i + 1) % n]);
            if a == (0, 0) {
                return Err(OracleError::InvalidBody(format!(
                    "duplicate vertex at index {i}"
                )));
            }
            if cross(a, b) <= 0 {
                return Err(OracleError::InvalidBody(format!(
                    "vertex {} is not a strictly convex counterclockwise turn",
                    (i + 1) % n
                )));
            }
        }
        // Left turns everywhere plus exactly one wrap of the edge angles
        // means the boundary winds once.
        let descents = (0..n)
            .filter(|&i| angle_cmp(edges[(i + 1) % n], edges[i]) == Ordering::Less)
            .count();
        if descents != 1 {
            return Err(OracleError::InvalidBody(
                "polygon boundary is not simple".into(),
            ));
        }
        let first_edge = (0..n)
            .min_by(|&i, &j| angle_cmp(edges[i], edges[j]))
            .expect("nonempty");
        Ok(PolygonBody {
            scale,
            pts,
            edges,
            first_edge,
            bbox,
        })
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Vertices as floating point pairs.
    pub fn vertices_f64(&self) -> Vec<(f64, f64)> {
        let s = self.scale as f64;
        self.pts
            .iter()
            .map(|&(x, y)| (x as f64 / s, y as f64 / s))
            .collect()
    }

    fn scaled(&self, x: i128, y: i128) -> V2 {
        (x * self.scale, y * self.scale)
    }

    /// Index (into the vertex list) of a vertex maximizing `dot(normal, v)`.
    fn extreme_vertex(&self, normal: V2) -> usize {
        let n = self.pts.len();
        // The maximum sits at the start of the first edge whose direction is
        // at or past `normal` rotated by +90 degrees.
        let target = (-normal.1, normal.0);
        let sorted = |k: usize| self.edges[(self.first_edge + k) % n];
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if angle_cmp(sorted(mid), target) == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        (self.first_edge + lo % n) % n
    }

    /// Finds the edge on the chain `from -> to` (counterclockwise) where the
    /// value `dot(normal, v)` first reaches `level`, given it rises along
    /// the chain; returns the crossing point as floats.
    fn chain_crossing(&self, from: usize, to: usize, normal: V2, level: i128) -> (f64, f64) {
        let n = self.pts.len();
        let len = (to + n - from) % n;
        let value = |k: usize| dot(normal, self.pts[(from + k) % n]);
        // Largest k in [0, len] with value(k) <= level.
        let (mut lo, mut hi) = (0usize, len);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if value(mid) <= level {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let a = self.pts[(from + lo) % n];
        let va = value(lo);
        if va == level || lo == len {
            return (a.0 as f64, a.1 as f64);
        }
        let b = self.pts[(from + lo + 1) % n];
        let vb = value(lo + 1);
        let s = (level - va) as f64 / (vb - va) as f64;
        (
            a.0 as f64 + s * (b.0 - a.0) as f64,
            a.1 as f64 + s * (b.1 - a.1) as f64,
        )
    }

    /// Index of an edge whose inner half-plane excludes `p` (scaled), or
    /// `None` when `p` lies in the polygon. `O(log n)` via the fan at
    /// vertex 0.
    fn violated_edge(&self, p: V2) -> Option<usize> {
        let n = self.pts.len();
        let v0 = self.pts[0];
        let rel = sub(p, v0);
        if cross(sub(self.pts[1], v0), rel) < 0 {
            return Some(0);
        }
        if cross(sub(self.pts[n - 1], v0), rel) > 0 {
            return Some(n - 1);
        }
        // Largest i in [1, n-2] with p left of or on the ray v0 -> v_i.
        let (mut lo, mut hi) = (1usize, n - 2);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if cross(sub(self.pts[mid], v0), rel) >= 0 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let a = self.pts[lo];
        (cross(self.edges[lo], sub(p, a)) < 0).then_some(lo)
    }
}

impl BodyOracle for PolygonBody {
    fn contains(&self, p: LatticePoint) -> bool {
        self.violated_edge(self.scaled(p.x as i128, p.y as i128))
            .is_none()
    }

    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        let d = (dir.dx as i128, dir.dy as i128);
        let normal = (-d.1, d.0);
        let o = self.scaled(origin.x as i128, origin.y as i128);
        let level = dot(normal, o);
        let top = self.extreme_vertex(normal);
        let bottom = self.extreme_vertex((-normal.0, -normal.1));
        if level > dot(normal, self.pts[top]) || level < dot(normal, self.pts[bottom]) {
            return None;
        }
        let rising = self.chain_crossing(bottom, top, normal, level);
        let neg = (-normal.0, -normal.1);
        let falling = self.chain_crossing(top, bottom, neg, -level);
        let (ox, oy) = (o.0 as f64, o.1 as f64);
        let (dx, dy) = (d.0 as f64, d.1 as f64);
        let a = (dx * dx + dy * dy) * self.scale as f64;
        let param = |(x, y): (f64, f64)| ((x - ox) * dx + (y - oy) * dy) / a;
        let (t1, t2) = (param(rising), param(falling));
        Some(Chord::new(t1.min(t2), t1.max(t2)))
    }

    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        let x = origin.x as i128 + t as i128 * dir.dx as i128;
        let y = origin.y as i128 + t as i128 * dir.dy as i128;
        match self.violated_edge(self.scaled(x, y)) {
            None => RayPos::Inside,
            // Every constraint violated before the chord grows along the
            // ray, every one violated after it shrinks.
            Some(i) => {
                if cross(self.edges[i], (dir.dx as i128, dir.dy as i128)) > 0 {
                    RayPos::Before
                } else {
                    RayPos::After
                }
            }
        }
    }

    fn bounding_box(&self) -> BoundingBox {
        self.bbox
    }
}
