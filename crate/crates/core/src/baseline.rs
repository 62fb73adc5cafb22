//! Column-scanning reference hull.
//!
//! Every integer column crossing the body contributes its lowest and
//! highest lattice point; Andrew's monotone chain over those points gives
//! the hull. Linear in the width of the body.

use crate::hull::{HullChain, HullError};
use crate::lattice::{LatticePoint, LatticeVector};
use crate::oracle::{lattice_range, BodyOracle};

/// Column extremes, generated left to right on demand.
pub fn column_extremes<'a, B: BodyOracle + ?Sized>(
    body: &'a B,
) -> impl Iterator<Item = Result<(LatticePoint, LatticePoint), HullError>> + 'a {
    body.bounding_box().columns().filter_map(move |x| {
        match lattice_range(body, LatticePoint::new(x, 0), LatticeVector::new(0, 1)) {
            Ok(Some((lo, hi))) => Some(Ok((LatticePoint::new(x, lo), LatticePoint::new(x, hi)))),
            Ok(None) => None,
            Err(e) => Some(Err(e.into())),
        }
    })
}

fn turns_left(chain: &[LatticePoint], p: LatticePoint) -> bool {
    let n = chain.len();
    (chain[n - 1] - chain[n - 2]).cross(p - chain[n - 1]) > 0
}

/// Discrete hull by scanning all columns, normalised like
/// [`discrete_hull`](crate::hull::discrete_hull).
pub fn naive_hull<B: BodyOracle + ?Sized>(body: &B) -> Result<HullChain, HullError> {
    let mut lower: Vec<LatticePoint> = Vec::new();
    let mut upper: Vec<LatticePoint> = Vec::new();
    for col in column_extremes(body) {
        let (bottom, top) = col?;
        while lower.len() >= 2 && !turns_left(&lower, bottom) {
            lower.pop();
        }
        lower.push(bottom);
        while upper.len() >= 2 && turns_left(&upper, top) {
            upper.pop();
        }
        // Collinear points on the upper chain are dropped too.
        if upper.len() >= 2 {
            let n = upper.len();
            if (upper[n - 1] - upper[n - 2]).cross(top - upper[n - 1]) == 0 {
                upper.pop();
            }
        }
        upper.push(top);
    }
    if lower.is_empty() {
        return Err(HullError::NoLatticePoints);
    }
    // Counterclockwise: lower chain left to right, then the upper chain
    // right to left, skipping endpoints shared with the lower chain.
    let mut cycle = lower.clone();
    for &v in upper.iter().rev() {
        if Some(&v) != cycle.last() && v != cycle[0] {
            cycle.push(v);
        }
    }
    Ok(HullChain::from_vertices(strip_collinear(cycle)).normalized())
}

/// Drops vertices where the cycle does not turn left; handles the junctions
/// between the two chains and fully collinear inputs.
fn strip_collinear(mut cycle: Vec<LatticePoint>) -> Vec<LatticePoint> {
    if is_collinear(&cycle) {
        return collinear_ends(&cycle);
    }
    while let Some(i) = (0..cycle.len()).find(|&i| {
        let n = cycle.len();
        let (a, b, c) = (cycle[(i + n - 1) % n], cycle[i], cycle[(i + 1) % n]);
        (b - a).cross(c - b) <= 0
    }) {
        cycle.remove(i);
    }
    cycle
}

fn is_collinear(points: &[LatticePoint]) -> bool {
    let a = points[0];
    let Some(&b) = points.iter().find(|&&q| q != a) else {
        return true;
    };
    points.iter().all(|&q| (b - a).cross(q - a) == 0)
}

fn collinear_ends(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let lo = *points.iter().min_by_key(|q| (q.x, q.y)).expect("nonempty");
    let hi = *points.iter().max_by_key(|q| (q.x, q.y)).expect("nonempty");
    if lo == hi {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}
