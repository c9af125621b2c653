//! Wire formats: codes as `{"n": 3, "words": ["010", ...]}`, arrangements
//! with all scalars as decimal-integer or `"p/q"` strings so parsing is
//! exact in both directions.

use crate::code::{parse_code, CodeError, NeuralCode};
use crate::geom::{Arrangement, ConvexBody, GeomError, Point, Topology};
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct CodeDto {
    n: usize,
    words: Vec<String>,
}

pub fn code_to_json(code: &NeuralCode) -> serde_json::Value {
    serde_json::to_value(CodeDto {
        n: code.n(),
        words: code.word_strings(),
    })
    .expect("code serializes")
}

pub fn code_from_json(value: &serde_json::Value) -> Result<NeuralCode, IoError> {
    let dto: CodeDto = serde_json::from_value(value.clone())?;
    if dto.words.is_empty() {
        return Ok(NeuralCode::new(dto.n, []));
    }
    let joined = dto.words.join(",");
    let parsed = parse_code(&joined)?;
    if parsed.code.n() != dto.n {
        return Err(IoError::Malformed("word width disagrees with n".into()));
    }
    Ok(parsed.code)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum BodyDto {
    Empty {
        dim: usize,
    },
    Interval {
        lo: String,
        hi: String,
    },
    Segment {
        a: Vec<String>,
        b: Vec<String>,
    },
    Polygon {
        vertices: Vec<Vec<String>>,
    },
    Polytope3 {
        vertices: Vec<Vec<String>>,
    },
    Disk {
        center: Vec<String>,
        radius_sq: String,
    },
    Offset {
        radius: String,
        core: Box<BodyDto>,
    },
}

#[derive(Serialize, Deserialize)]
struct LabeledBodyDto {
    label: usize,
    #[serde(flatten)]
    body: BodyDto,
}

#[derive(Serialize, Deserialize)]
struct ArrangementDto {
    dim: usize,
    topology: String,
    bodies: Vec<LabeledBodyDto>,
}

fn point_to_dto(p: &Point) -> Vec<String> {
    p.coords.iter().map(format_scalar).collect()
}

fn point_from_dto(coords: &[String]) -> Result<Point, IoError> {
    if !(1..=3).contains(&coords.len()) {
        return Err(IoError::Malformed("point dimension".into()));
    }
    let parsed: Result<Vec<Scalar>, _> = coords.iter().map(|s| parse_scalar(s)).collect();
    Ok(Point::new(parsed.map_err(|e| IoError::Malformed(e.to_string()))?))
}

fn body_to_dto(body: &ConvexBody) -> BodyDto {
    match body {
        ConvexBody::Empty { dim } => BodyDto::Empty { dim: *dim },
        ConvexBody::Interval { lo, hi } => BodyDto::Interval {
            lo: format_scalar(lo),
            hi: format_scalar(hi),
        },
        ConvexBody::Segment { a, b } => BodyDto::Segment {
            a: point_to_dto(a),
            b: point_to_dto(b),
        },
        ConvexBody::Polygon { vertices } => BodyDto::Polygon {
            vertices: vertices.iter().map(point_to_dto).collect(),
        },
        ConvexBody::Polytope3 { vertices } => BodyDto::Polytope3 {
            vertices: vertices.iter().map(point_to_dto).collect(),
        },
        ConvexBody::Disk { center, radius_sq } => BodyDto::Disk {
            center: point_to_dto(center),
            radius_sq: format_scalar(radius_sq),
        },
        ConvexBody::Offset { core, radius } => BodyDto::Offset {
            radius: format_scalar(radius),
            core: Box::new(body_to_dto(core)),
        },
    }
}

fn body_from_dto(dto: &BodyDto) -> Result<ConvexBody, IoError> {
    let scalar = |s: &String| parse_scalar(s).map_err(|e| IoError::Malformed(e.to_string()));
    Ok(match dto {
        BodyDto::Empty { dim } => ConvexBody::Empty { dim: *dim },
        BodyDto::Interval { lo, hi } => ConvexBody::Interval {
            lo: scalar(lo)?,
            hi: scalar(hi)?,
        },
        BodyDto::Segment { a, b } => ConvexBody::Segment {
            a: point_from_dto(a)?,
            b: point_from_dto(b)?,
        },
        BodyDto::Polygon { vertices } => ConvexBody::Polygon {
            vertices: vertices
                .iter()
                .map(|v| point_from_dto(v))
                .collect::<Result<_, _>>()?,
        },
        BodyDto::Polytope3 { vertices } => ConvexBody::Polytope3 {
            vertices: vertices
                .iter()
                .map(|v| point_from_dto(v))
                .collect::<Result<_, _>>()?,
        },
        BodyDto::Disk { center, radius_sq } => ConvexBody::Disk {
            center: point_from_dto(center)?,
            radius_sq: scalar(radius_sq)?,
        },
        BodyDto::Offset { radius, core } => ConvexBody::Offset {
            radius: scalar(radius)?,
            core: Box::new(body_from_dto(core)?),
        },
    })
}

pub fn arrangement_to_json(arr: &Arrangement) -> serde_json::Value {
    let dto = ArrangementDto {
        dim: arr.dim,
        topology: match arr.topology {
            Topology::Open => "open".into(),
            Topology::Closed => "closed".into(),
        },
        bodies: arr
            .bodies()
            .iter()
            .map(|(label, body)| LabeledBodyDto {
                label: *label,
                body: body_to_dto(body),
            })
            .collect(),
    };
    serde_json::to_value(dto).expect("arrangement serializes")
}

pub fn arrangement_from_json(value: &serde_json::Value) -> Result<Arrangement, IoError> {
    let dto: ArrangementDto = serde_json::from_value(value.clone())?;
    let topology = match dto.topology.as_str() {
        "open" => Topology::Open,
        "closed" => Topology::Closed,
        other => return Err(IoError::Malformed(format!("topology {other:?}"))),
    };
    let bodies: Result<Vec<(usize, ConvexBody)>, IoError> = dto
        .bodies
        .iter()
        .map(|lb| Ok((lb.label, body_from_dto(&lb.body)?)))
        .collect();
    Arrangement::new(dto.dim, topology, bodies?).map_err(IoError::Geometry)
}

/// Canonical single-line JSON used for hashing and byte-stable output.
pub fn canonical_json(value: &serde_json::Value) -> String {
    serde_json::to_string(value).expect("json renders")
}

#[derive(Debug)]
pub enum IoError {
    Json(serde_json::Error),
    Code(CodeError),
    Geometry(GeomError),
    Malformed(String),
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Json(e) => write!(f, "json: {e}"),
            IoError::Code(e) => write!(f, "code: {e}"),
            IoError::Geometry(e) => write!(f, "geometry: {e}"),
            IoError::Malformed(m) => write!(f, "malformed input: {m}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e)
    }
}

impl From<CodeError> for IoError {
    fn from(e: CodeError) -> Self {
        IoError::Code(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{s_frac, s_int};

    #[test]
    fn code_round_trip() {
        let code = parse_code("000,100,010,110,011").unwrap().code;
        let json = code_to_json(&code);
        assert_eq!(code_from_json(&json).unwrap(), code);
    }

    #[test]
    fn arrangement_round_trip_is_exact() {
        let arr = Arrangement::new(
            2,
            Topology::Closed,
            vec![
                (
                    1,
                    ConvexBody::Polygon {
                        vertices: vec![
                            Point::d2(s_int(0), s_int(0)),
                            Point::d2(s_int(1), s_int(0)),
                            Point::d2(s_frac(1, 2), s_frac(3, 4)),
                        ],
                    },
                ),
                (
                    2,
                    ConvexBody::Disk {
                        center: Point::d2(s_int(0), s_int(0)),
                        radius_sq: s_int(4),
                    },
                ),
                (
                    3,
                    ConvexBody::Offset {
                        core: Box::new(ConvexBody::Segment {
                            a: Point::d2(s_int(0), s_int(0)),
                            b: Point::d2(s_int(1), s_int(1)),
                        }),
                        radius: s_frac(1, 10),
                    },
                ),
            ],
        )
        .unwrap();
        let json = arrangement_to_json(&arr);
        let back = arrangement_from_json(&json).unwrap();
        assert_eq!(back, arr);
        // Canonical text is stable.
        assert_eq!(
            canonical_json(&json),
            canonical_json(&arrangement_to_json(&back))
        );
    }

    #[test]
    fn rejects_zero_denominator() {
        let json = serde_json::json!({
            "dim": 1, "topology": "closed",
            "bodies": [{"label": 1, "kind": "interval", "lo": "0", "hi": "1/0"}]
        });
        assert!(arrangement_from_json(&json).is_err());
    }
}
