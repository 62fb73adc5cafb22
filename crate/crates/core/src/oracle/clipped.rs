use super::{BodyOracle, BoundingBox, Chord, RayPos};
use crate::lattice::{LatticePoint, LatticeVector};

/// Closed half-plane `a x + b y <= c` with integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HalfPlane {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        HalfPlane { a, b, c }
    }

    /// The four half-planes of the box `[xmin, xmax] x [ymin, ymax]`.
    pub fn lattice_box(xmin: i64, xmax: i64, ymin: i64, ymax: i64) -> Vec<HalfPlane> {
        vec![
            HalfPlane::new(-1, 0, -xmin),
            HalfPlane::new(1, 0, xmax),
            HalfPlane::new(0, -1, -ymin),
            HalfPlane::new(0, 1, ymax),
        ]
    }

    /// Value `a x + b y - c` along the line is `offset + t * slope`.
    fn along(&self, origin: LatticePoint, dir: LatticeVector) -> (i128, i128) {
        let (a, b) = (self.a as i128, self.b as i128);
        (
            a * origin.x as i128 + b * origin.y as i128 - self.c as i128,
            a * dir.dx as i128 + b * dir.dy as i128,
        )
    }

    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        let (offset, slope) = self.along(origin, dir);
        match slope.signum() {
            0 if offset <= 0 => Some(Chord::new(f64::NEG_INFINITY, f64::INFINITY)),
            0 => None,
            1 => Some(Chord::new(
                f64::NEG_INFINITY,
                -(offset as f64) / slope as f64,
            )),
            _ => Some(Chord::new(-(offset as f64) / slope as f64, f64::INFINITY)),
        }
    }
}

/// A body intersected with a list of half-planes.
#[derive(Clone, Debug)]
pub struct ClippedBody<B> {
    inner: B,
    constraints: Vec<HalfPlane>,
}

impl<B: BodyOracle> ClippedBody<B> {
    pub fn new(inner: B, constraints: Vec<HalfPlane>) -> Self {
        ClippedBody { inner, constraints }
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }

    pub fn constraints(&self) -> &[HalfPlane] {
        &self.constraints
    }

    fn satisfies(&self, p: LatticePoint) -> bool {
        self.constraints
            .iter()
            .all(|h| (h.a as i128 * p.x as i128 + h.b as i128 * p.y as i128) <= h.c as i128)
    }
}

impl<B: BodyOracle> BodyOracle for ClippedBody<B> {
    fn contains(&self, p: LatticePoint) -> bool {
        self.satisfies(p) && self.inner.contains(p)
    }

    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        let mut c = self.inner.chord(origin, dir)?;
        for h in &self.constraints {
            c = c.intersect(h.chord(origin, dir)?)?;
        }
        Some(c)
    }

    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        for h in &self.constraints {
            let (offset, slope) = h.along(origin, dir);
            if offset + t as i128 * slope > 0 {
                return if slope > 0 {
                    RayPos::After
                } else {
                    RayPos::Before
                };
            }
        }
        self.inner.locate(origin, dir, t)
    }

    fn bounding_box(&self) -> BoundingBox {
        let mut bb = self.inner.bounding_box();
        for h in &self.constraints {
            match (h.a.signum(), h.b) {
                (1, 0) => bb.xmax = bb.xmax.min(h.c as f64 / h.a as f64),
                (-1, 0) => bb.xmin = bb.xmin.max(h.c as f64 / h.a as f64),
                (0, b) if b > 0 => bb.ymax = bb.ymax.min(h.c as f64 / b as f64),
                (0, b) if b < 0 => bb.ymin = bb.ymin.max(h.c as f64 / b as f64),
                _ => {}
            }
        }
        bb
    }
}
