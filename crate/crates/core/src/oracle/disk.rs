use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::CheckedMul;

use super::{BodyOracle, BoundingBox, Chord, OracleError, RayPos};
use crate::lattice::{LatticePoint, LatticeVector, Rational};

/// Largest intermediate magnitude allowed in the exact membership test.
const BUDGET: f64 = 1.0e37;

/// Closed disk with rational centre and rational squared radius.
///
/// Membership is evaluated on integers scaled by the common denominator of
/// the centre, so `(x - cx)^2 + (y - cy)^2 <= r^2` is decided without
/// rounding.
#[derive(Clone, Debug)]
pub struct DiskBody {
    center: (Rational, Rational),
    radius_sq: Rational,
    // Centre scaled by `scale`.
    scale: i128,
    cx: i128,
    cy: i128,
    // r^2 = r2_num / r2_den, with r2_num * scale^2 precomputed.
    r2_den: i128,
    r2_rhs: i128,
    // Lattice points outside this box are rejected before exact arithmetic.
    reject: (i64, i64, i64, i64),
    cxf: f64,
    cyf: f64,
    r2f: f64,
    rf: f64,
}

impl DiskBody {
    pub fn new(cx: Rational, cy: Rational, radius_sq: Rational) -> Result<Self, OracleError> {
        if radius_sq <= Rational::from_integer(0) {
            return Err(OracleError::InvalidBody(format!(
                "squared radius must be positive, got {radius_sq}"
            )));
        }
        let scale = (*cx.denom() as i128).lcm(&(*cy.denom() as i128));
        let cxs = *cx.numer() as i128 * (scale / *cx.denom() as i128);
        let cys = *cy.numer() as i128 * (scale / *cy.denom() as i128);
        let r2_num = *radius_sq.numer() as i128;
        let r2_den = *radius_sq.denom() as i128;

        let to_f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
        let (cxf, cyf, r2f) = (to_f(cx), to_f(cy), to_f(radius_sq));
        let rf = r2f.sqrt();

        let reach = (rf + 4.0) * scale as f64;
        let worst = 2.0 * reach * reach * r2_den as f64;
        let rhs = r2_num as f64 * (scale as f64) * (scale as f64);
        if worst >= BUDGET || rhs >= BUDGET || cxf.abs() + rf > 1.0e9 || cyf.abs() + rf > 1.0e9 {
            return Err(OracleError::BudgetExceeded(format!(
                "disk centre ({cx}, {cy}), r^2 = {radius_sq}"
            )));
        }
        let reject = (
            (cxf - rf).floor() as i64 - 2,
            (cxf + rf).ceil() as i64 + 2,
            (cyf - rf).floor() as i64 - 2,
            (cyf + rf).ceil() as i64 + 2,
        );
        Ok(DiskBody {
            center: (cx, cy),
            radius_sq,
            scale,
            cx: cxs,
            cy: cys,
            r2_den,
            r2_rhs: r2_num * scale * scale,
            reject,
            cxf,
            cyf,
            r2f,
            rf,
        })
    }

    /// Disk of radius `r` (stored as `r^2`).
    pub fn with_radius(cx: Rational, cy: Rational, r: Rational) -> Result<Self, OracleError> {
        let r_sq = r
            .checked_mul(&r)
            .ok_or_else(|| OracleError::BudgetExceeded(format!("radius {r} squared overflows")))?;
        Self::new(cx, cy, r_sq)
    }

    pub fn center(&self) -> (Rational, Rational) {
        self.center
    }

    pub fn radius_sq(&self) -> Rational {
        self.radius_sq
    }

    pub fn radius(&self) -> f64 {
        self.rf
    }

    fn rejected(&self, x: i128, y: i128) -> bool {
        let (x0, x1, y0, y1) = self.reject;
        x < x0 as i128 || x > x1 as i128 || y < y0 as i128 || y > y1 as i128
    }

    fn contains_wide(&self, x: i128, y: i128) -> bool {
        if self.rejected(x, y) {
            return false;
        }
        let dx = x * self.scale - self.cx;
        let dy = y * self.scale - self.cy;
        (dx * dx + dy * dy) * self.r2_den <= self.r2_rhs
    }

    /// Sign of `r^2 |d|^2 - (w x d)^2` for `w = origin - centre`, decided
    /// exactly; positive when the line crosses the disk.
    fn exact_line_discriminant(&self, origin: LatticePoint, dir: LatticeVector) -> i32 {
        let wx = BigInt::from(origin.x) * self.scale - self.cx;
        let wy = BigInt::from(origin.y) * self.scale - self.cy;
        let cross = &wx * dir.dy - &wy * dir.dx;
        let a = BigInt::from(dir.norm_sq());
        let lhs = BigInt::from(self.r2_rhs) * a;
        let rhs = BigInt::from(self.r2_den) * &cross * &cross;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => -1,
        }
    }
}

impl BodyOracle for DiskBody {
    fn contains(&self, p: LatticePoint) -> bool {
        self.contains_wide(p.x as i128, p.y as i128)
    }

    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        let wx = origin.x as f64 - self.cxf;
        let wy = origin.y as f64 - self.cyf;
        let (dx, dy) = (dir.dx as f64, dir.dy as f64);
        let a = dx * dx + dy * dy;
        let t0 = -(dx * wx + dy * wy) / a;
        let cross = wx * dy - wy * dx;
        let scale = self.r2f * a;
        let mut disc = scale - cross * cross;
        if disc.abs() <= 1e-9 * scale {
            match self.exact_line_discriminant(origin, dir) {
                s if s < 0 => return None,
                0 => disc = 0.0,
                _ => disc = disc.max(0.0),
            }
        } else if disc < 0.0 {
            return None;
        }
        let half = disc.sqrt() / a;
        Some(Chord::new(t0 - half, t0 + half))
    }

    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        let x = origin.x as i128 + t as i128 * dir.dx as i128;
        let y = origin.y as i128 + t as i128 * dir.dy as i128;
        if self.contains_wide(x, y) {
            return RayPos::Inside;
        }
        // Outside: the side follows the projection onto the direction,
        // relative to the foot of the perpendicular from the centre.
        let along = dir.dx as i128 * (x * self.scale - self.cx)
            + dir.dy as i128 * (y * self.scale - self.cy);
        if along < 0 {
            RayPos::Before
        } else {
            RayPos::After
        }
    }

    fn bounding_box(&self) -> BoundingBox {
        BoundingBox {
            xmin: self.cxf - self.rf,
            xmax: self.cxf + self.rf,
            ymin: self.cyf - self.rf,
            ymax: self.cyf + self.rf,
        }
    }

    fn diameter_bound(&self) -> f64 {
        (2.0 * self.rf).max(1.0)
    }
}
