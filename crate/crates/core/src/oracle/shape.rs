//! JSON shape descriptions:
//!
//! ```json
//! {"type": "disk", "cx": "1/2", "cy": "1/2", "r": "1000"}
//! {"type": "polygon", "vertices": [[0, 0], [10, 0], [10, 10], [0, 10]]}
//! ```
//!
//! Rationals may be JSON integers, `"p/q"` strings or decimal strings. A
//! disk may give `r2` (the squared radius) instead of `r`.

use num_traits::CheckedMul;
use serde::Deserialize;
use serde_json::Value;

use super::{BodyOracle, DiskBody, OracleError, PolygonBody};
use crate::lattice::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Disk {
        cx: Rational,
        cy: Rational,
        radius_sq: Rational,
    },
    Polygon {
        vertices: Vec<(Rational, Rational)>,
    },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawShape {
    Disk {
        cx: Value,
        cy: Value,
        #[serde(default)]
        r: Option<Value>,
        #[serde(default)]
        r2: Option<Value>,
    },
    Polygon {
        vertices: Vec<(Value, Value)>,
    },
}

fn rational(v: &Value) -> Result<Rational, OracleError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(OracleError::InvalidShape(format!(
                "expected a rational, got {other}"
            )))
        }
    };
    parse_rational(&text).map_err(|e| OracleError::InvalidShape(e.to_string()))
}

impl Shape {
    pub fn from_json(text: &str) -> Result<Self, OracleError> {
        let raw: RawShape =
            serde_json::from_str(text).map_err(|e| OracleError::InvalidShape(e.to_string()))?;
        match raw {
            RawShape::Disk { cx, cy, r, r2 } => {
                let radius_sq = match (r, r2) {
                    (Some(r), None) => {
                        let r = rational(&r)?;
                        if r <= Rational::from_integer(0) {
                            return Err(OracleError::InvalidShape(
                                "radius must be positive".into(),
                            ));
                        }
                        r.checked_mul(&r)
                            .ok_or_else(|| OracleError::BudgetExceeded(format!("radius {r}")))?
                    }
                    (None, Some(r2)) => rational(&r2)?,
                    _ => {
                        return Err(OracleError::InvalidShape(
                            "a disk needs exactly one of \"r\" and \"r2\"".into(),
                        ))
                    }
                };
                Ok(Shape::Disk {
                    cx: rational(&cx)?,
                    cy: rational(&cy)?,
                    radius_sq,
                })
            }
            RawShape::Polygon { vertices } => Ok(Shape::Polygon {
                vertices: vertices
                    .iter()
                    .map(|(x, y)| Ok((rational(x)?, rational(y)?)))
                    .collect::<Result<_, OracleError>>()?,
            }),
        }
    }

    pub fn build(&self) -> Result<Box<dyn BodyOracle + Send + Sync>, OracleError> {
        Ok(match self {
            Shape::Disk { cx, cy, radius_sq } => Box::new(DiskBody::new(*cx, *cy, *radius_sq)?),
            Shape::Polygon { vertices } => Box::new(PolygonBody::new(vertices)?),
        })
    }

    /// A point guaranteed to lie in the body: the disk centre or the
    /// polygon's vertex centroid.
    pub fn interior_point(&self) -> (Rational, Rational) {
        match self {
            Shape::Disk { cx, cy, .. } => (*cx, *cy),
            Shape::Polygon { vertices } => {
                let n = Rational::from_integer(vertices.len() as i64);
                let (sx, sy) = vertices.iter().fold(
                    (Rational::from_integer(0), Rational::from_integer(0)),
                    |(ax, ay), (x, y)| (ax + x, ay + y),
                );
                (sx / n, sy / n)
            }
        }
    }

    pub fn is_disk(&self) -> bool {
        matches!(self, Shape::Disk { .. })
    }
}
