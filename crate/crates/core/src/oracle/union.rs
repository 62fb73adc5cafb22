use super::{BodyOracle, BoundingBox, Chord, ClippedBody, OracleError, PolygonBody, RayPos};
use crate::lattice::{LatticePoint, LatticeVector, Rational};

/// Union of a clipped body `C'` with a vertical trapezoid hanging from (or
/// standing on) a chord `e` of `C'` that joins its two x-extreme columns.
///
/// The trapezoid spans exactly the x-range of `C'` and one of its
/// non-vertical edges is `e`, so the union is convex and its chord along
/// any line is the interval hull of the two component chords.
#[derive(Clone, Debug)]
pub struct TrapezoidUnionBody<B> {
    clipped: ClippedBody<B>,
    trapezoid: PolygonBody,
}

impl<B: BodyOracle> TrapezoidUnionBody<B> {
    /// `left` and `right` are the endpoints of `e` on columns `x_left <
    /// x_right`; `base_y` is the trapezoid's horizontal side, below `e` for
    /// the lower trapezoid or above it for the mirrored one.
    pub fn new(
        clipped: ClippedBody<B>,
        left: (i64, Rational),
        right: (i64, Rational),
        base_y: i64,
    ) -> Result<Self, OracleError> {
        let (xl, yl) = left;
        let (xr, yr) = right;
        if xl >= xr {
            return Err(OracleError::InvalidBody(format!(
                "trapezoid columns out of order: {xl} >= {xr}"
            )));
        }
        let base = Rational::from_integer(base_y);
        let (xl_r, xr_r) = (Rational::from_integer(xl), Rational::from_integer(xr));
        let vertices = if base < yl.min(yr) {
            vec![(xl_r, base), (xr_r, base), (xr_r, yr), (xl_r, yl)]
        } else if base > yl.max(yr) {
            vec![(xl_r, yl), (xr_r, yr), (xr_r, base), (xl_r, base)]
        } else {
            return Err(OracleError::InvalidBody(format!(
                "trapezoid base {base_y} crosses its top edge"
            )));
        };
        let trapezoid = PolygonBody::new(&vertices)?;

        // Sampling check: both endpoints of e must lie in C', otherwise the
        // union is not convex.
        for (x, y) in [left, right] {
            let yf = *y.numer() as f64 / *y.denom() as f64;
            let inside = clipped
                .chord(LatticePoint::new(x, 0), LatticeVector::new(0, 1))
                .is_some_and(|c| c.lo - 1e-6 <= yf && yf <= c.hi + 1e-6);
            if !inside {
                return Err(OracleError::InvalidBody(format!(
                    "trapezoid corner ({x}, {y}) is outside the clipped body"
                )));
            }
        }
        Ok(TrapezoidUnionBody { clipped, trapezoid })
    }

    pub fn clipped(&self) -> &ClippedBody<B> {
        &self.clipped
    }

    pub fn trapezoid(&self) -> &PolygonBody {
        &self.trapezoid
    }
}

impl<B: BodyOracle> BodyOracle for TrapezoidUnionBody<B> {
    fn contains(&self, p: LatticePoint) -> bool {
        self.trapezoid.contains(p) || self.clipped.contains(p)
    }

    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        match (
            self.clipped.chord(origin, dir),
            self.trapezoid.chord(origin, dir),
        ) {
            (Some(a), Some(b)) => Some(a.hull(b)),
            (a, b) => a.or(b),
        }
    }

    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        let parts: [&dyn BodyOracle; 2] = [&self.trapezoid, &self.clipped];
        let mut side = None;
        for part in parts {
            if part.chord(origin, dir).is_none() {
                continue;
            }
            match part.locate(origin, dir, t) {
                RayPos::Inside => return RayPos::Inside,
                // Outside both intervals of a convex union means outside on
                // the same side of each.
                pos => side = Some(pos),
            }
        }
        side.unwrap_or(RayPos::After)
    }

    fn bounding_box(&self) -> BoundingBox {
        self.clipped
            .bounding_box()
            .union(&self.trapezoid.bounding_box())
    }
}
