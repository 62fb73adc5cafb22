//! Continued fractions of positive rationals and their geometric reading.
//!
//! For `r = a/b` the convergent `a_i/b_i` is identified with the lattice
//! point `p_i = (b_i, a_i)`. The points obey
//! `p_i = q_i * p_{i-1} + p_{i-2}` with `p_{-2} = (1, 0)` and
//! `p_{-1} = (0, 1)`, and consecutive points span a unimodular basis.
//!
//! [`convergents`] runs Euclid's algorithm directly. [`geom_gcd`] finds the
//! same sequence without dividing: every partial quotient is obtained by a
//! discrete ray shooting against the line `y = r x`, using only the sign
//! of an exact cross product.

use num_integer::Integer;
use thiserror::Error;

use crate::lattice::{LatticePoint, LatticeVector, Rational};

/// Golden ratio, base of the growth bound on convergent denominators.
pub const PHI: f64 = 1.618_033_988_749_895;

pub const SEED_EVEN: LatticePoint = LatticePoint::new(1, 0);
pub const SEED_ODD: LatticePoint = LatticePoint::new(0, 1);

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CfracError {
    #[error("{num}/{den} is not a positive fraction")]
    NotPositive { num: i64, den: i64 },
    #[error("{num}/{den} is not in reduced form")]
    NotReduced { num: i64, den: i64 },
}

/// One geometric convergent: the partial quotient `q_i` and the lattice
/// point `p_i = (b_i, a_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub quotient: u64,
    pub point: LatticePoint,
}

impl Convergent {
    pub fn fraction(&self) -> Rational {
        Rational::new(self.point.y, self.point.x)
    }
}

/// `⌈log_φ x⌉` for `x >= 1`, computed with a small tolerance so exact powers
/// of φ are not rounded up.
pub fn ceil_log_phi(x: f64) -> u32 {
    if x <= 1.0 {
        return 0;
    }
    (x.ln() / PHI.ln() - 1e-9).ceil().max(0.0) as u32
}

fn check_input(num: i64, den: i64) -> Result<(), CfracError> {
    if num <= 0 || den <= 0 {
        return Err(CfracError::NotPositive { num, den });
    }
    if num.gcd(&den) != 1 {
        return Err(CfracError::NotReduced { num, den });
    }
    Ok(())
}

fn combine(q: u64, prev: LatticePoint, prev2: LatticePoint) -> LatticePoint {
    let q = q as i64;
    LatticePoint::new(q * prev.x + prev2.x, q * prev.y + prev2.y)
}

/// Convergents of `num/den` by Euclid's algorithm.
///
/// The raw numerator and denominator are taken so a non-reduced input is
/// reported instead of silently normalized.
pub fn convergents_of(num: i64, den: i64) -> Result<Vec<Convergent>, CfracError> {
    check_input(num, den)?;
    let (mut a, mut b) = (num, den);
    let (mut prev2, mut prev) = (SEED_EVEN, SEED_ODD);
    let mut out = Vec::new();
    while b != 0 {
        let (q, rem) = a.div_rem(&b);
        let point = combine(q as u64, prev, prev2);
        out.push(Convergent {
            index: out.len(),
            quotient: q as u64,
            point,
        });
        prev2 = prev;
        prev = point;
        (a, b) = (b, rem);
    }
    Ok(out)
}

/// Convergents of a positive rational.
pub fn convergents(r: Rational) -> Result<Vec<Convergent>, CfracError> {
    convergents_of(*r.numer(), *r.denom())
}

/// Convergents of `num/den` by the geometric simulation of Euclid's
/// algorithm against the line through the origin and `(den, num)`.
pub fn geom_gcd_of(num: i64, den: i64) -> Result<Vec<Convergent>, CfracError> {
    check_input(num, den)?;
    let target = LatticeVector::new(den, num);
    // Signed side of the line y = r x; zero exactly on the line.
    let side = |p: LatticePoint| target.cross(p.to_vector());

    let (mut prev2, mut prev) = (SEED_EVEN, SEED_ODD);
    let mut out = Vec::new();
    loop {
        let start = side(prev2);
        let dir = side(prev);
        // Along the discrete ray prev2 + t * prev the side value is
        // start + t * dir; start and dir have opposite signs (or start = 0
        // only at the very end, which never reaches this point).
        debug_assert!(start != 0 && dir != 0 && start.signum() != dir.signum());
        let same_side_as_start = |t: u64| {
            let s = start + t as i128 * dir;
            s == 0 || s.signum() == start.signum()
        };
        // Largest t whose point is on prev2's side of the line or on it;
        // found by galloping then bisection over the discrete ray.
        let mut lo = 0u64;
        let mut hi = 1u64;
        while same_side_as_start(hi) {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if same_side_as_start(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = lo;
        let point = combine(q, prev, prev2);
        out.push(Convergent {
            index: out.len(),
            quotient: q,
            point,
        });
        if side(point) == 0 {
            return Ok(out);
        }
        prev2 = prev;
        prev = point;
    }
}

/// Geometric counterpart of [`convergents`].
pub fn geom_gcd(r: Rational) -> Result<Vec<Convergent>, CfracError> {
    geom_gcd_of(*r.numer(), *r.denom())
}
