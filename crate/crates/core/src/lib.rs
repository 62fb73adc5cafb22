//! Discrete convex hulls of implicitly given planar convex bodies.
//!
//! A body is described by a [`BodyOracle`]: exact lattice membership plus
//! line-chord queries. [`discrete_hull`] traces the convex hull of the
//! lattice points inside the body vertex by vertex, recovering each edge
//! direction from a continued-fraction search ([`find_edge_direction`]) so
//! the work is proportional to the number of hull vertices times
//! `log diameter`. [`naive_hull`] is the column-scanning reference.

pub mod baseline;
pub mod cfrac;
pub mod edgedir;
pub mod experiment;
pub mod hull;
pub mod lattice;
pub mod oracle;

pub use baseline::naive_hull;
pub use cfrac::{convergents, convergents_of, geom_gcd, CfracError, Convergent};
pub use edgedir::{
    find_edge_direction, find_edge_direction_in_quadrant, select_clockwise_most, CandidateSet,
    EdgeDirError, EdgeDirection, Quadrant, QuadrantFrame,
};
pub use hull::{
    discrete_hull, discrete_hull_from, discrete_hull_with_stats, find_hull_vertex_general,
    find_lowest_vertex, HullChain, HullError, TraceStats,
};
pub use lattice::{
    edge_weight, gcd, orientation, parse_rational, reduce, LatticeError, LatticePoint,
    LatticeVector, Rational,
};
pub use oracle::{
    BodyOracle, BoundingBox, CallCounts, Chord, ClippedBody, Counted, DiskBody, HalfPlane,
    OracleError, PolygonBody, RayPos, Shape, TrapezoidUnionBody,
};
