//! Planar webs and foliations: exact models, Legendre duality, slope
//! geometry, Blaschke curvature and the projective analysis of convex
//! foliations.

pub mod algebra;
pub mod analysis;
pub mod catalog;
pub mod curvature;
pub mod dual;
pub mod error;
pub mod legendre;
pub mod render;
pub mod slope;
pub mod web;
pub mod webfile;

pub use algebra::{parse_poly, LinearForm, MultiPoly, Ring, Scalar};
pub use error::{Error, Result};
