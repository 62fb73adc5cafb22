//! Direction of the next discrete-hull edge at a hull vertex.
//!
//! The search replays the continued-fraction expansion of the unknown edge
//! direction `e`: each stage shoots the discrete ray through the last two
//! convergents against the body instead of against the line through `e`.
//! Odd convergents approach `e` from inside the body, even ones from
//! outside, and every lattice point of the body met on the way is a
//! candidate. The clockwise-most candidate is `e`.

use std::fmt;

use thiserror::Error;

use crate::cfrac::{ceil_log_phi, SEED_EVEN, SEED_ODD};
use crate::lattice::{LatticePoint, LatticeVector};
use crate::oracle::{max_seg_index, min_seg_index, BodyOracle, OracleError};

/// Extra stages tolerated above the theoretical bound before giving up.
const STAGE_SLACK: u32 = 4;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EdgeDirError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("edge search at {point} in quadrant {quadrant} ran past {limit} stages")]
    StageLimit {
        point: LatticePoint,
        quadrant: Quadrant,
        limit: u32,
    },
}

/// Half-open quadrants: `+x` belongs to I, `+y` to II, `-x` to III and `-y`
/// to IV.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV];

    /// Quadrant of a nonzero vector.
    pub fn of(v: LatticeVector) -> Option<Quadrant> {
        let (x, y) = (v.dx, v.dy);
        match () {
            _ if x > 0 && y >= 0 => Some(Quadrant::I),
            _ if x <= 0 && y > 0 => Some(Quadrant::II),
            _ if x < 0 && y <= 0 => Some(Quadrant::III),
            _ if x >= 0 && y < 0 => Some(Quadrant::IV),
            _ => None,
        }
    }

    /// Next quadrant counterclockwise.
    pub fn next(self) -> Quadrant {
        match self {
            Quadrant::I => Quadrant::II,
            Quadrant::II => Quadrant::III,
            Quadrant::III => Quadrant::IV,
            Quadrant::IV => Quadrant::I,
        }
    }

    pub fn frame(self) -> QuadrantFrame {
        QuadrantFrame::new(self)
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quadrant::I => "I",
            Quadrant::II => "II",
            Quadrant::III => "III",
            Quadrant::IV => "IV",
        };
        f.write_str(s)
    }
}

/// A quadrant together with the rotation taking it onto quadrant I.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadrantFrame {
    pub quadrant: Quadrant,
    /// Row-major 2x2 rotation matrix, world to frame.
    pub mapping: [[i64; 2]; 2],
}

impl QuadrantFrame {
    pub fn new(quadrant: Quadrant) -> Self {
        let mapping = match quadrant {
            Quadrant::I => [[1, 0], [0, 1]],
            Quadrant::II => [[0, 1], [-1, 0]],
            Quadrant::III => [[-1, 0], [0, -1]],
            Quadrant::IV => [[0, -1], [1, 0]],
        };
        QuadrantFrame { quadrant, mapping }
    }

    pub fn to_frame(&self, v: LatticeVector) -> LatticeVector {
        let m = self.mapping;
        LatticeVector::new(
            m[0][0] * v.dx + m[0][1] * v.dy,
            m[1][0] * v.dx + m[1][1] * v.dy,
        )
    }

    /// Inverse rotation; the mapping is orthogonal so this is its transpose.
    pub fn to_world(&self, v: LatticeVector) -> LatticeVector {
        let m = self.mapping;
        LatticeVector::new(
            m[0][0] * v.dx + m[1][0] * v.dy,
            m[0][1] * v.dx + m[1][1] * v.dy,
        )
    }
}

/// Result of the staged search in one quadrant. Vectors are in world
/// coordinates, relative to the vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub candidates: Vec<LatticeVector>,
    /// Number of ray shootings performed.
    pub iterations: u32,
    /// Convergents fixed by the stages, in order.
    pub convergents: Vec<LatticeVector>,
}

impl CandidateSet {
    fn push(&mut self, c: LatticeVector) {
        if !self.candidates.contains(&c) {
            self.candidates.push(c);
        }
    }
}

/// Largest number of stages the search may legitimately take.
pub fn stage_bound(diameter: f64) -> u32 {
    2 + ceil_log_phi(diameter.max(1.0))
}

/// Staged convergent search for the edge direction at `p`, restricted to
/// `frame`'s quadrant.
pub fn find_edge_direction_in_quadrant<B: BodyOracle + ?Sized>(
    body: &B,
    p: LatticePoint,
    frame: QuadrantFrame,
) -> Result<CandidateSet, EdgeDirError> {
    let limit = stage_bound(body.diameter_bound()) + STAGE_SLACK;
    let world = |v: LatticeVector| frame.to_world(v);
    let inside = |v: LatticeVector| body.contains(p + world(v));

    let mut set = CandidateSet::default();
    let mut prev2 = SEED_EVEN.to_vector();
    let mut prev1 = SEED_ODD.to_vector();
    let mut i: u32 = 0;
    loop {
        if set.iterations >= limit {
            return Err(EdgeDirError::StageLimit {
                point: p,
                quadrant: frame.quadrant,
                limit,
            });
        }
        set.iterations += 1;
        let origin = p + world(prev2);
        let dir = world(prev1);
        let at = |k: i64| prev2 + k * prev1;

        let next = if i % 2 == 1 {
            let Some(k) = max_seg_index(body, origin, dir)? else {
                break;
            };
            if k == 0 {
                break;
            }
            let pi = at(k);
            if inside(pi) {
                set.push(world(pi));
            }
            pi
        } else {
            let Some(k) = min_seg_index(body, origin, dir)? else {
                break;
            };
            // Only possible for k = 0: at the first stage this is the
            // horizontal direction itself.
            if k == 0 && inside(at(0)) {
                set.push(world(at(0)));
            }
            if inside(at(k + 1)) {
                set.push(world(at(k + 1)));
            }
            if k == 0 && i > 0 {
                break;
            }
            at(k)
        };
        set.convergents.push(world(next));
        prev2 = prev1;
        prev1 = next;
        i += 1;
    }
    Ok(set)
}

/// The candidate every other candidate is counterclockwise of. Collinear
/// ties go to the longer vector.
pub fn select_clockwise_most(candidates: &[LatticeVector]) -> Option<LatticeVector> {
    let (&first, rest) = candidates.split_first()?;
    let mut best = first;
    for &c in rest {
        let cross = best.cross(c);
        if cross < 0 || (cross == 0 && best.dot(c) > 0 && c.norm_sq() > best.norm_sq()) {
            best = c;
        }
    }
    Some(best)
}

/// Edge direction found at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeDirection {
    pub direction: LatticeVector,
    /// Stages run in the quadrant that produced the direction.
    pub iterations: u32,
    pub quadrant: Quadrant,
}

/// Primitive direction of the hull edge leaving `p` counterclockwise, or
/// `None` when `p` is the only lattice point of the body.
///
/// With a hint, quadrants are searched counterclockwise from it and the
/// first one with candidates decides. Without one, all four are searched
/// and their candidates pooled, which is valid at any vertex because the
/// body's lattice points lie in a cone of angle less than a half-turn.
pub fn find_edge_direction<B: BodyOracle + ?Sized>(
    body: &B,
    p: LatticePoint,
    hint: Option<QuadrantFrame>,
) -> Result<Option<EdgeDirection>, EdgeDirError> {
    match hint {
        Some(frame) => {
            let mut q = frame.quadrant;
            for _ in 0..4 {
                let set = find_edge_direction_in_quadrant(body, p, q.frame())?;
                if let Some(direction) = select_clockwise_most(&set.candidates) {
                    return Ok(Some(EdgeDirection {
                        direction,
                        iterations: set.iterations,
                        quadrant: q,
                    }));
                }
                q = q.next();
            }
            Ok(None)
        }
        None => {
            let mut pool = Vec::new();
            let mut stages = Vec::new();
            for q in Quadrant::ALL {
                let set = find_edge_direction_in_quadrant(body, p, q.frame())?;
                stages.push((q, set.iterations));
                pool.extend(set.candidates);
            }
            Ok(select_clockwise_most(&pool).map(|direction| {
                let quadrant = Quadrant::of(direction).expect("candidates are nonzero");
                let iterations = stages
                    .iter()
                    .find(|(q, _)| *q == quadrant)
                    .map_or(0, |&(_, it)| it);
                EdgeDirection {
                    direction,
                    iterations,
                    quadrant,
                }
            }))
        }
    }
}
