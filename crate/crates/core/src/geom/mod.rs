//! Exact convex bodies in R^1/R^2/R^3 and the arrangements whose codes the
//! rest of the crate computes.
//!
//! Bodies are stored as closed point sets; an [`Arrangement`]'s topology flag
//! selects whether predicates interpret them as open (relative interiors) or
//! closed. All polytopal predicates are decided with exact rational
//! arithmetic; disks (whose radii may be irrational, since only the square
//! is stored) go through exact square-root comparisons.

pub mod bnb;
pub mod boundary;
pub mod disks;
pub mod distance;
pub mod hull3;
pub mod polygon;
pub mod predicates;
pub mod simplex;

use crate::scalar::{format_scalar, Scalar};
use num_traits::{Signed, Zero};
use std::fmt;

/// A point with 1, 2 or 3 exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        assert!((1..=3).contains(&coords.len()));
        Point { coords }
    }

    pub fn d1(x: Scalar) -> Self {
        Point { coords: vec![x] }
    }

    pub fn d2(x: Scalar, y: Scalar) -> Self {
        Point { coords: vec![x, y] }
    }

    pub fn d3(x: Scalar, y: Scalar, z: Scalar) -> Self {
        Point {
            coords: vec![x, y, z],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dist_sq(&self, other: &Point) -> Scalar {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn lerp(&self, other: &Point, t: &Scalar) -> Point {
        use num_traits::One;
        let omt = Scalar::one() - t;
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a * &omt + b * t)
                .collect(),
        }
    }

    pub fn dot(&self, other: &Point) -> Scalar {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(format_scalar).collect();
        write!(f, "({})", coords.join(", "))
    }
}

/// Exact convex bodies. Degenerate bodies (`Empty`, points) are first-class:
/// a deleted neuron keeps its slot as `Empty`.
#[derive(Clone, PartialEq, Eq)]
pub enum ConvexBody {
    /// Nothing; a neuron that never fires.
    Empty { dim: usize },
    /// `[lo, hi]` in R^1 (lo == hi is a point).
    Interval { lo: Scalar, hi: Scalar },
    /// A segment in R^2 or R^3; `a == b` degenerates to a point and is only
    /// accepted inside an `Offset` core.
    Segment { a: Point, b: Point },
    /// Strictly convex vertex cycle in counterclockwise order.
    Polygon { vertices: Vec<Point> },
    /// Convex hull of a finite point set in R^3 (possibly lower-dimensional).
    Polytope3 { vertices: Vec<Point> },
    /// Disk of squared radius `radius_sq` (the radius itself may be
    /// irrational).
    Disk { center: Point, radius_sq: Scalar },
    /// Minkowski sum of a polytopal core with a ball of rational radius.
    Offset { core: Box<ConvexBody>, radius: Scalar },
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Empty { dim } => *dim,
            ConvexBody::Interval { .. } => 1,
            ConvexBody::Segment { a, .. } => a.dim(),
            ConvexBody::Polygon { .. } => 2,
            ConvexBody::Polytope3 { .. } => 3,
            ConvexBody::Disk { center, .. } => center.dim(),
            ConvexBody::Offset { core, .. } => core.dim(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ConvexBody::Empty { .. })
    }

    /// Vertices of the polytopal core (offsets recurse into their core).
    /// Disks report their center; used for seeds and bounding boxes only.
    pub fn seed_points(&self) -> Vec<Point> {
        match self {
            ConvexBody::Empty { .. } => vec![],
            ConvexBody::Interval { lo, hi } => {
                vec![Point::d1(lo.clone()), Point::d1(hi.clone())]
            }
            ConvexBody::Segment { a, b } => vec![a.clone(), b.clone()],
            ConvexBody::Polygon { vertices } | ConvexBody::Polytope3 { vertices } => {
                vertices.clone()
            }
            ConvexBody::Disk { center, .. } => vec![center.clone()],
            ConvexBody::Offset { core, .. } => core.seed_points(),
        }
    }

    /// Axis-aligned bounding box as (min, max) corners, `None` for `Empty`.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        match self {
            ConvexBody::Empty { .. } => None,
            ConvexBody::Disk { center, radius_sq } => {
                let r = crate::scalar::sqrt_upper(radius_sq, 48);
                Some((
                    Point {
                        coords: center.coords.iter().map(|c| c - &r).collect(),
                    },
                    Point {
                        coords: center.coords.iter().map(|c| c + &r).collect(),
                    },
                ))
            }
            ConvexBody::Offset { core, radius } => {
                let (lo, hi) = core.bounding_box()?;
                Some((
                    Point {
                        coords: lo.coords.iter().map(|c| c - radius).collect(),
                    },
                    Point {
                        coords: hi.coords.iter().map(|c| c + radius).collect(),
                    },
                ))
            }
            _ => {
                let pts = self.seed_points();
                let first = pts.first()?;
                let mut lo = first.coords.clone();
                let mut hi = first.coords.clone();
                for p in &pts[1..] {
                    for (k, c) in p.coords.iter().enumerate() {
                        if c < &lo[k] {
                            lo[k] = c.clone();
                        }
                        if c > &hi[k] {
                            hi[k] = c.clone();
                        }
                    }
                }
                Some((Point { coords: lo }, Point { coords: hi }))
            }
        }
    }

    /// Validation applied at arrangement construction. `as_offset_core`
    /// relaxes the degeneracy rules for bodies living inside an `Offset`.
    pub fn validate(&self, as_offset_core: bool) -> Result<(), GeomError> {
        match self {
            ConvexBody::Empty { dim } => {
                if !(1..=3).contains(dim) {
                    return Err(GeomError::BadBody("empty body with bad dimension"));
                }
                Ok(())
            }
            ConvexBody::Interval { lo, hi } => {
                if lo > hi {
                    return Err(GeomError::BadBody("interval with lo > hi"));
                }
                Ok(())
            }
            ConvexBody::Segment { a, b } => {
                if a.dim() != b.dim() || a.dim() < 2 {
                    return Err(GeomError::BadBody("segment endpoint dimensions"));
                }
                if a == b && !as_offset_core {
                    return Err(GeomError::BadBody(
                        "zero-length segment outside an offset core",
                    ));
                }
                Ok(())
            }
            ConvexBody::Polygon { vertices } => {
                polygon::validate_polygon(vertices)
            }
            ConvexBody::Polytope3 { vertices } => {
                if vertices.is_empty() {
                    return Err(GeomError::BadBody("polytope with no vertices"));
                }
                if vertices.iter().any(|v| v.dim() != 3) {
                    return Err(GeomError::BadBody("polytope vertex dimension"));
                }
                Ok(())
            }
            ConvexBody::Disk { center, radius_sq } => {
                if center.dim() != 2 {
                    return Err(GeomError::BadBody("disk center must be 2-dimensional"));
                }
                if !radius_sq.is_positive() {
                    return Err(GeomError::BadBody("disk radius_sq must be positive"));
                }
                Ok(())
            }
            ConvexBody::Offset { core, radius } => {
                if !radius.is_positive() {
                    return Err(GeomError::BadBody("offset radius must be positive"));
                }
                match core.as_ref() {
                    ConvexBody::Offset { .. } => {
                        Err(GeomError::BadBody("nested offset; add radii instead"))
                    }
                    ConvexBody::Disk { .. } => Err(GeomError::BadBody(
                        "offset of a disk is not supported; grow the disk instead",
                    )),
                    ConvexBody::Empty { .. } => {
                        Err(GeomError::BadBody("offset of an empty body"))
                    }
                    inner => inner.validate(true),
                }
            }
        }
    }
}

impl fmt::Debug for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexBody::Empty { dim } => write!(f, "Empty(d{dim})"),
            ConvexBody::Interval { lo, hi } =>

                write!(f, "Interval[{}, {}]", format_scalar(lo), format_scalar(hi)),
            ConvexBody::Segment { a, b } => write!(f, "Segment[{a:?} - {b:?}]"),
            ConvexBody::Polygon { vertices } => write!(f, "Polygon{vertices:?}"),
            ConvexBody::Polytope3 { vertices } => write!(f, "Polytope3{vertices:?}"),
            ConvexBody::Disk { center, radius_sq } => {
                write!(f, "Disk({center:?}, r2={})", format_scalar(radius_sq))
            }
            ConvexBody::Offset { core, radius } => {
                write!(f, "Offset({core:?}, r={})", format_scalar(radius))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    Open,
    Closed,
}

/// A labeled list of bodies in a common ambient dimension. Labels are the
/// neuron indices (1-based); slots of deleted neurons hold `Empty` bodies.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    pub dim: usize,
    pub topology: Topology,
    bodies: Vec<(usize, ConvexBody)>,
}

impl Arrangement {
    pub fn new(
        dim: usize,
        topology: Topology,
        bodies: Vec<(usize, ConvexBody)>,
    ) -> Result<Self, GeomError> {
        if !(1..=3).contains(&dim) {
            return Err(GeomError::BadBody("dimension must be 1, 2 or 3"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (label, body) in &bodies {
            if *label == 0 {
                return Err(GeomError::BadBody("labels are 1-based"));
            }
            if !seen.insert(*label) {
                return Err(GeomError::BadBody("duplicate body label"));
            }
            if !body.is_empty() && body.dim() != dim {
                return Err(GeomError::DimensionMismatch);
            }
            body.validate(false)?;
        }
        Ok(Arrangement {
            dim,
            topology,
            bodies,
        })
    }

    pub fn bodies(&self) -> &[(usize, ConvexBody)] {
        &self.bodies
    }

    pub fn body(&self, label: usize) -> Option<&ConvexBody> {
        self.bodies
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, b)| b)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.bodies.iter().map(|(l, _)| *l).collect()
    }

    pub fn max_label(&self) -> usize {
        self.bodies.iter().map(|(l, _)| *l).max().unwrap_or(0)
    }

    /// Replace the body at `label`, keeping order and the other slots.
    pub fn with_body(&self, label: usize, body: ConvexBody) -> Arrangement {
        let mut bodies = self.bodies.clone();
        for slot in &mut bodies {
            if slot.0 == label {
                slot.1 = body;
                break;
            }
        }
        Arrangement {
            dim: self.dim,
            topology: self.topology,
            bodies,
        }
    }

    pub fn with_topology(&self, topology: Topology) -> Arrangement {
        Arrangement {
            dim: self.dim,
            topology,
            bodies: self.bodies.clone(),
        }
    }

    /// Bounding box of all bodies, `None` if everything is empty.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let mut acc: Option<(Point, Point)> = None;
        for (_, b) in &self.bodies {
            if let Some((lo, hi)) = b.bounding_box() {
                acc = Some(match acc {
                    None => (lo, hi),
                    Some((alo, ahi)) => (
                        Point {
                            coords: alo
                                .coords
                                .iter()
                                .zip(&lo.coords)
                                .map(|(a, b)| if a < b { a.clone() } else { b.clone() })
                                .collect(),
                        },
                        Point {
                            coords: ahi
                                .coords
                                .iter()
                                .zip(&hi.coords)
                                .map(|(a, b)| if a > b { a.clone() } else { b.clone() })
                                .collect(),
                        },
                    ),
                });
            }
        }
        acc
    }

    /// A rational upper bound on the diameter of the bounding box.
    pub fn diameter_upper_bound(&self) -> Scalar {
        match self.bounding_box() {
            None => Scalar::zero(),
            Some((lo, hi)) => hi
                .coords
                .iter()
                .zip(&lo.coords)
                .map(|(h, l)| (h - l).abs())
                .sum(),
        }
    }
}

/// Relation between an ordered pair of bodies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationType {
    /// Disjoint.
    A,
    /// The second body is contained in the first.
    B,
    /// They intersect and the second body sticks out of the first.
    C,
}

/// Relation of every ordered pair `(i, j)`, `i != j`, keyed by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    pub relations: std::collections::BTreeMap<(usize, usize), RelationType>,
}

impl RelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<RelationType> {
        self.relations.get(&(i, j)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeomError {
    DimensionMismatch,
    BadBody(&'static str),
    UnsupportedBody(&'static str),
    /// A certified-numeric path could not separate the margin from zero.
    Indeterminate,
    MarginTooSmall,
    NoFreeBoundary,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::DimensionMismatch => write!(f, "ambient dimensions differ"),
            GeomError::BadBody(msg) => write!(f, "invalid body: {msg}"),
            GeomError::UnsupportedBody(msg) => write!(f, "unsupported body: {msg}"),
            GeomError::Indeterminate => {
                write!(f, "certified margin below tolerance; result indeterminate")
            }
            GeomError::MarginTooSmall => write!(f, "margin too small to certify"),
            GeomError::NoFreeBoundary => {
                write!(f, "body has no boundary point free of the other bodies")
            }
        }
    }
}

impl std::error::Error for GeomError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{s_frac, s_int};

    #[test]
    fn points() {
        let p = Point::d2(s_int(0), s_int(0));
        let q = Point::d2(s_int(3), s_int(4));
        assert_eq!(p.dist_sq(&q), s_int(25));
        assert_eq!(p.lerp(&q, &s_frac(1, 2)), Point::d2(s_frac(3, 2), s_int(2)));
    }

    #[test]
    fn arrangement_validation() {
        let ok = Arrangement::new(
            2,
            Topology::Closed,
            vec![(
                1,
                ConvexBody::Segment {
                    a: Point::d2(s_int(0), s_int(0)),
                    b: Point::d2(s_int(1), s_int(0)),
                },
            )],
        );
        assert!(ok.is_ok());

        let dup = Arrangement::new(
            1,
            Topology::Closed,
            vec![
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(1) }),
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(1) }),
            ],
        );
        assert!(dup.is_err());

        let pt_seg = Arrangement::new(
            2,
            Topology::Closed,
            vec![(
                1,
                ConvexBody::Segment {
                    a: Point::d2(s_int(0), s_int(0)),
                    b: Point::d2(s_int(0), s_int(0)),
                },
            )],
        );
        assert!(pt_seg.is_err());

        // The same point segment is fine as an offset core.
        let ball = Arrangement::new(
            2,
            Topology::Open,
            vec![(
                1,
                ConvexBody::Offset {
                    core: Box::new(ConvexBody::Segment {
                        a: Point::d2(s_int(0), s_int(0)),
                        b: Point::d2(s_int(0), s_int(0)),
                    }),
                    radius: s_int(1),
                },
            )],
        );
        assert!(ball.is_ok());

        let mixed = Arrangement::new(
            2,
            Topology::Closed,
            vec![(1, ConvexBody::Interval { lo: s_int(0), hi: s_int(1) })],
        );
        assert_eq!(mixed.unwrap_err(), GeomError::DimensionMismatch);
    }

    #[test]
    fn bounding_boxes() {
        let disk = ConvexBody::Disk {
            center: Point::d2(s_int(0), s_int(0)),
            radius_sq: s_int(4),
        };
        let (lo, hi) = disk.bounding_box().unwrap();
        assert!(lo.coords[0] <= s_int(-2) && hi.coords[0] >= s_int(2));
    }
}
