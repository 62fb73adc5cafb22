//! Convex bodies given implicitly through exact lattice membership and
//! line-chord queries, plus the discrete ray shootings built on them.
//!
//! A body answers three questions about a lattice line
//! `origin + t * dir`:
//!
//! * [`BodyOracle::chord`]: the parameter interval `[lo, hi]` of the line
//!   inside the body, in floating point. It is only a hint.
//! * [`BodyOracle::locate`]: for an integer `t`, whether the lattice point
//!   lies before, inside or after that interval. This is exact.
//! * [`BodyOracle::contains`]: exact membership of a lattice point.
//!
//! Every integer index derived from a chord (see [`last_inside`],
//! [`max_seg_index`], [`min_seg_index`]) starts from the floating point
//! endpoint and is then corrected by exact `locate` probes within a window
//! of [`GUARD_STEPS`] lattice steps. A correction that does not settle
//! inside the window is reported as [`OracleError::GuardWindowExceeded`].

mod clipped;
mod disk;
mod polygon;
mod shape;
mod union;

use std::cell::Cell;

use thiserror::Error;

pub use clipped::{ClippedBody, HalfPlane};
pub use disk::DiskBody;
pub use polygon::PolygonBody;
pub use shape::Shape;
pub use union::TrapezoidUnionBody;

use crate::lattice::{LatticePoint, LatticeVector};

/// Maximum number of lattice steps an index may move away from its
/// floating point estimate during exact correction.
pub const GUARD_STEPS: i64 = 2;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum OracleError {
    #[error(
        "chord correction left the guard window: origin {origin}, direction {dir}, estimate {estimate}"
    )]
    GuardWindowExceeded {
        origin: LatticePoint,
        dir: LatticeVector,
        estimate: f64,
    },
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("body exceeds the exact-arithmetic coordinate budget: {0}")]
    BudgetExceeded(String),
    #[error("invalid shape description: {0}")]
    InvalidShape(String),
}

/// Closed parameter interval of a line inside a body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chord {
    pub lo: f64,
    pub hi: f64,
}

impl Chord {
    pub fn new(lo: f64, hi: f64) -> Self {
        Chord { lo, hi }
    }

    pub fn intersect(self, other: Chord) -> Option<Chord> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Chord { lo, hi })
    }

    pub fn hull(self, other: Chord) -> Chord {
        Chord {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// Position of an integer ray parameter relative to the chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayPos {
    Before,
    Inside,
    After,
}

/// Axis-parallel bounding box in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl BoundingBox {
    pub fn diameter(&self) -> f64 {
        (self.xmax - self.xmin).hypot(self.ymax - self.ymin)
    }

    pub fn union(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            xmin: self.xmin.min(other.xmin),
            xmax: self.xmax.max(other.xmax),
            ymin: self.ymin.min(other.ymin),
            ymax: self.ymax.max(other.ymax),
        }
    }

    /// Integer columns that may meet the body.
    pub fn columns(&self) -> std::ops::RangeInclusive<i64> {
        (self.xmin.floor() as i64 - 1)..=(self.xmax.ceil() as i64 + 1)
    }

    /// Integer rows that may meet the body.
    pub fn rows(&self) -> std::ops::RangeInclusive<i64> {
        (self.ymin.floor() as i64 - 1)..=(self.ymax.ceil() as i64 + 1)
    }
}

/// A compact convex body in the plane.
///
/// Implementations must be exact in [`contains`](Self::contains) and
/// [`locate`](Self::locate); [`chord`](Self::chord) may be approximate up to
/// a small fraction of a lattice step.
pub trait BodyOracle {
    fn contains(&self, p: LatticePoint) -> bool;

    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord>;

    /// Where `origin + t * dir` lies relative to the chord. Only meaningful
    /// when the line meets the body.
    ///
    /// The default compares against the chord midpoint for points outside
    /// the body, which is exact unless the chord is shorter than its own
    /// rounding error.
    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        if self.contains(origin.step(dir, t)) {
            return RayPos::Inside;
        }
        match self.chord(origin, dir) {
            Some(c) if (t as f64) < 0.5 * (c.lo + c.hi) => RayPos::Before,
            _ => RayPos::After,
        }
    }

    fn bounding_box(&self) -> BoundingBox;

    /// Upper bound on the diameter used for iteration budgets.
    fn diameter_bound(&self) -> f64 {
        self.bounding_box().diameter().max(1.0)
    }
}

impl<B: BodyOracle + ?Sized> BodyOracle for &B {
    fn contains(&self, p: LatticePoint) -> bool {
        (**self).contains(p)
    }
    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        (**self).chord(origin, dir)
    }
    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        (**self).locate(origin, dir, t)
    }
    fn bounding_box(&self) -> BoundingBox {
        (**self).bounding_box()
    }
    fn diameter_bound(&self) -> f64 {
        (**self).diameter_bound()
    }
}

impl<B: BodyOracle + ?Sized> BodyOracle for Box<B> {
    fn contains(&self, p: LatticePoint) -> bool {
        (**self).contains(p)
    }
    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        (**self).chord(origin, dir)
    }
    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        (**self).locate(origin, dir, t)
    }
    fn bounding_box(&self) -> BoundingBox {
        (**self).bounding_box()
    }
    fn diameter_bound(&self) -> f64 {
        (**self).diameter_bound()
    }
}

/// Oracle call counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CallCounts {
    pub contains: u64,
    pub chord: u64,
    pub locate: u64,
}

impl CallCounts {
    pub fn total(&self) -> u64 {
        self.contains + self.chord + self.locate
    }
}

/// Wraps a body and counts the queries issued against it.
pub struct Counted<B> {
    inner: B,
    contains: Cell<u64>,
    chord: Cell<u64>,
    locate: Cell<u64>,
}

impl<B: BodyOracle> Counted<B> {
    pub fn new(inner: B) -> Self {
        Counted {
            inner,
            contains: Cell::new(0),
            chord: Cell::new(0),
            locate: Cell::new(0),
        }
    }

    pub fn counts(&self) -> CallCounts {
        CallCounts {
            contains: self.contains.get(),
            chord: self.chord.get(),
            locate: self.locate.get(),
        }
    }

    pub fn reset(&self) {
        self.contains.set(0);
        self.chord.set(0);
        self.locate.set(0);
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }
}

impl<B: BodyOracle> BodyOracle for Counted<B> {
    fn contains(&self, p: LatticePoint) -> bool {
        self.contains.set(self.contains.get() + 1);
        self.inner.contains(p)
    }
    fn chord(&self, origin: LatticePoint, dir: LatticeVector) -> Option<Chord> {
        self.chord.set(self.chord.get() + 1);
        self.inner.chord(origin, dir)
    }
    fn locate(&self, origin: LatticePoint, dir: LatticeVector, t: i64) -> RayPos {
        self.locate.set(self.locate.get() + 1);
        self.inner.locate(origin, dir, t)
    }
    fn bounding_box(&self) -> BoundingBox {
        self.inner.bounding_box()
    }
    fn diameter_bound(&self) -> f64 {
        self.inner.diameter_bound()
    }
}

/// Exact lattice membership.
pub fn contains<B: BodyOracle + ?Sized>(body: &B, p: LatticePoint) -> bool {
    body.contains(p)
}

/// Parameter interval of the line `origin + t * dir` inside the body.
pub fn chord<B: BodyOracle + ?Sized>(
    body: &B,
    origin: LatticePoint,
    dir: LatticeVector,
) -> Option<Chord> {
    body.chord(origin, dir)
}

fn to_index(x: f64) -> i64 {
    x.clamp(-9.0e15, 9.0e15) as i64
}

/// Largest integer `m` with `pred(m)`, where `pred` holds on an interval
/// unbounded below and `estimate` is within the guard window of the answer.
fn last_true(
    estimate: i64,
    mut pred: impl FnMut(i64) -> bool,
    fail: impl Fn() -> OracleError,
) -> Result<i64, OracleError> {
    let mut m = estimate;
    if pred(m) {
        for _ in 0..=GUARD_STEPS {
            if !pred(m + 1) {
                return Ok(m);
            }
            m += 1;
        }
    } else {
        for _ in 0..GUARD_STEPS {
            m -= 1;
            if pred(m) {
                return Ok(m);
            }
        }
    }
    Err(fail())
}

/// Smallest integer `m` with `pred(m)`, where `pred` holds on an interval
/// unbounded above.
fn first_true(
    estimate: i64,
    mut pred: impl FnMut(i64) -> bool,
    fail: impl Fn() -> OracleError,
) -> Result<i64, OracleError> {
    let neg = last_true(-estimate, |m| pred(-m), fail)?;
    Ok(-neg)
}

/// `⌊hi⌋` of the chord, exactly: the largest integer not after it.
fn floor_hi<B: BodyOracle + ?Sized>(
    body: &B,
    origin: LatticePoint,
    dir: LatticeVector,
    chord: Chord,
) -> Result<i64, OracleError> {
    last_true(
        to_index(chord.hi.floor()),
        |m| body.locate(origin, dir, m) != RayPos::After,
        || OracleError::GuardWindowExceeded {
            origin,
            dir,
            estimate: chord.hi,
        },
    )
}

/// `⌈lo⌉` of the chord, exactly: the smallest integer not before it.
fn ceil_lo<B: BodyOracle + ?Sized>(
    body: &B,
    origin: LatticePoint,
    dir: LatticeVector,
    chord: Chord,
) -> Result<i64, OracleError> {
    first_true(
        to_index(chord.lo.ceil()),
        |m| body.locate(origin, dir, m) != RayPos::Before,
        || OracleError::GuardWindowExceeded {
            origin,
            dir,
            estimate: chord.lo,
        },
    )
}

/// Integer parameters of the lattice points of the line inside the body,
/// or `None` when there are none.
pub fn lattice_range<B: BodyOracle + ?Sized>(
    body: &B,
    origin: LatticePoint,
    dir: LatticeVector,
) -> Result<Option<(i64, i64)>, OracleError> {
    let Some(c) = body.chord(origin, dir) else {
        return Ok(None);
    };
    let lo = ceil_lo(body, origin, dir, c)?;
    let hi = floor_hi(body, origin, dir, c)?;
    Ok((lo <= hi).then_some((lo, hi)))
}

/// Largest `k >= 0` with `u + k v` in the body, or `None` if `u` is
/// outside.
pub fn last_inside<B: BodyOracle + ?Sized>(
    body: &B,
    u: LatticePoint,
    v: LatticeVector,
) -> Result<Option<i64>, OracleError> {
    if !body.contains(u) {
        return Ok(None);
    }
    let estimate = body
        .chord(u, v)
        .map_or(0, |c| to_index(c.hi.floor()).max(0));
    let k = last_true(
        estimate,
        |m| m <= 0 || body.locate(u, v, m) == RayPos::Inside,
        || OracleError::GuardWindowExceeded {
            origin: u,
            dir: v,
            estimate: estimate as f64,
        },
    )?;
    Ok(Some(k))
}

/// Largest `k >= 0` such that the closed segment `[u + k v, u + (k+1) v]`
/// meets the body, or `None` if the ray misses it.
pub fn max_seg_index<B: BodyOracle + ?Sized>(
    body: &B,
    u: LatticePoint,
    v: LatticeVector,
) -> Result<Option<i64>, OracleError> {
    let Some(c) = body.chord(u, v) else {
        return Ok(None);
    };
    if c.hi < -(GUARD_STEPS as f64) - 1.0 {
        return Ok(None);
    }
    let k = floor_hi(body, u, v, c)?;
    Ok((k >= 0).then_some(k))
}

/// Smallest `k >= 0` such that the closed segment `[u + k v, u + (k+1) v]`
/// meets the body, or `None` if the ray misses it.
pub fn min_seg_index<B: BodyOracle + ?Sized>(
    body: &B,
    u: LatticePoint,
    v: LatticeVector,
) -> Result<Option<i64>, OracleError> {
    let Some(c) = body.chord(u, v) else {
        return Ok(None);
    };
    if c.hi < -(GUARD_STEPS as f64) - 1.0 {
        return Ok(None);
    }
    let k = if c.lo < -(GUARD_STEPS as f64) - 1.0 {
        0
    } else {
        (ceil_lo(body, u, v, c)? - 1).max(0)
    };
    // k + 1 >= lo holds by construction; the segment meets the chord iff
    // k is not past it.
    if body.locate(u, v, k) == RayPos::After {
        return Ok(None);
    }
    Ok(Some(k))
}
