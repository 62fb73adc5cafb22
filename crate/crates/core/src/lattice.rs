//! Exact integer planar primitives: lattice points and vectors, the
//! orientation predicate, gcd, vector reduction and edge weights.
//!
//! All predicates widen to `i128` before multiplying, so any pair of
//! coordinates of magnitude below 2^62 produces exact results.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number, always kept in reduced form with a positive
/// denominator.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("undefined gcd: both arguments are zero")]
    UndefinedGcd,
    #[error("the zero vector has no direction")]
    ZeroVector,
    #[error("edge endpoints coincide at {0}")]
    CoincidentPoints(LatticePoint),
    #[error("cannot parse rational from {0:?}")]
    BadRational(String),
}

/// A point of the integer lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

/// An integer displacement between two lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeVector {
    pub dx: i64,
    pub dy: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    /// The point `self + k * v`.
    pub fn step(self, v: LatticeVector, k: i64) -> LatticePoint {
        LatticePoint::new(self.x + k * v.dx, self.y + k * v.dy)
    }

    pub fn to_vector(self) -> LatticeVector {
        LatticeVector::new(self.x, self.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl LatticeVector {
    pub const fn new(dx: i64, dy: i64) -> Self {
        LatticeVector { dx, dy }
    }

    pub fn is_zero(self) -> bool {
        self.dx == 0 && self.dy == 0
    }

    /// A vector is primitive when its coordinates are coprime.
    pub fn is_primitive(self) -> bool {
        !self.is_zero() && self.dx.unsigned_abs().gcd(&self.dy.unsigned_abs()) == 1
    }

    pub fn cross(self, other: LatticeVector) -> i128 {
        self.dx as i128 * other.dy as i128 - self.dy as i128 * other.dx as i128
    }

    pub fn dot(self, other: LatticeVector) -> i128 {
        self.dx as i128 * other.dx as i128 + self.dy as i128 * other.dy as i128
    }

    pub fn norm_sq(self) -> i128 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// Rotate by +90 degrees.
    pub fn perp(self) -> LatticeVector {
        LatticeVector::new(-self.dy, self.dx)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.dx, self.dy)
    }
}

impl Add<LatticeVector> for LatticePoint {
    type Output = LatticePoint;
    fn add(self, v: LatticeVector) -> LatticePoint {
        LatticePoint::new(self.x + v.dx, self.y + v.dy)
    }
}

impl Sub for LatticePoint {
    type Output = LatticeVector;
    fn sub(self, other: LatticePoint) -> LatticeVector {
        LatticeVector::new(self.x - other.x, self.y - other.y)
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, v: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.dx + v.dx, self.dy + v.dy)
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, v: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.dx - v.dx, self.dy - v.dy)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.dx, -self.dy)
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, v: LatticeVector) -> LatticeVector {
        LatticeVector::new(self * v.dx, self * v.dy)
    }
}

/// Greatest common divisor of two nonnegative integers; `gcd(0, 0)` is
/// rejected rather than returning 0.
pub fn gcd(a: u64, b: u64) -> Result<u64, LatticeError> {
    if a == 0 && b == 0 {
        return Err(LatticeError::UndefinedGcd);
    }
    Ok(a.gcd(&b))
}

/// The primitive vector pointing in the same direction as `v`.
pub fn reduce(v: LatticeVector) -> Result<LatticeVector, LatticeError> {
    let g = gcd(v.dx.unsigned_abs(), v.dy.unsigned_abs()).map_err(|_| LatticeError::ZeroVector)?;
    let g = g as i64;
    Ok(LatticeVector::new(v.dx / g, v.dy / g))
}

/// Sign of the cross product `(q - p) x (r - p)`: `+1` for a
/// counterclockwise turn, `-1` for clockwise, `0` when collinear.
pub fn orientation(p: LatticePoint, q: LatticePoint, r: LatticePoint) -> i32 {
    match (q - p).cross(r - p).signum() {
        1 => 1,
        -1 => -1,
        _ => 0,
    }
}

/// Number of lattice points on the closed segment `pq`, minus one.
pub fn edge_weight(p: LatticePoint, q: LatticePoint) -> Result<u64, LatticeError> {
    let d = q - p;
    gcd(d.dx.unsigned_abs(), d.dy.unsigned_abs()).map_err(|_| LatticeError::CoincidentPoints(p))
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-2.125"` into
/// an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, LatticeError> {
    let bad = || LatticeError::BadRational(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: i64 = digits.parse().map_err(|_| bad())?;
    let den = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    if negative {
        num = -num;
    }
    Ok(Rational::new(num, den))
}
