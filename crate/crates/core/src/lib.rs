//! Construction, verification and bounding of binary subspace codes.

pub mod bounds;
pub mod code;
pub mod construct;
pub mod divis;
pub mod error;
pub mod grassmann;
pub mod group;
pub mod ilp;
pub mod linalg2;

pub use error::{Error, Result};
pub use linalg2::{BitMatrix, ExtFieldCtx, Subspace};
