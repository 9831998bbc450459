//! Exact polynomial algebra: coefficient rings, sparse polynomials, parsing,
//! resultants, gcds and univariate root finding.

pub mod gcd;
pub mod linear;
pub mod parse;
pub mod poly;
pub mod resultant;
pub mod roots;
pub mod scalar;

pub use gcd::{gcd, gcd_with_partials, linear_factor_multiplicity, squarefree_decomposition, squarefree_part};
pub use linear::LinearForm;
pub use parse::parse_poly;
pub use poly::{vars, Exps, MultiPoly, Vars};
pub use resultant::{resultant, resultant_bareiss, resultant_capped};
pub use scalar::{Ring, Scalar};
