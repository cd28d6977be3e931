//! Exact symbolic calculus on split supermanifolds.
//!
//! The crate computes the Godbillon-Vey type class of codimension `0|1`
//! super-foliations, weight-truncated Chevalley-Eilenberg cohomology of
//! formal vector field algebras, and the passage between super-foliations
//! and flat foliated connections. Everything is exact: scalars are rational
//! functions in formal parameters and no floating point enters a result.

pub mod connection;
pub mod error;
pub mod expr;
pub mod foliation;
pub mod gelfand_fuks;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod superalgebra;
pub mod supercalculus;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use superalgebra::{Coord, Parity, Signature, SpaceSignature, Superfunction, Topology};
pub use supercalculus::{SuperForm, SuperMap, SuperVectorField};
