//! Realizability of 2-sparse neural codes by arrangements of open convex
//! sets, explicit constructions in R^1, R^2 and R^3, and exact verification
//! of every construction by recomputing the code of the arrangement with
//! rational arithmetic.

pub mod classify;
pub mod code;
pub mod geom;
pub mod io;
pub mod realize2d;
pub mod realize3d;
pub mod scalar;
pub mod transforms;
pub mod verify;

pub use code::{parse_code, Codeword, Graph, NeuralCode, SimplicialComplex};
pub use geom::{Arrangement, ConvexBody, Point, RelationMatrix, RelationType, Topology};
pub use scalar::Scalar;
