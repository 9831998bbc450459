use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot mix Q(sqrt {0}) with Q(sqrt {1})")]
    MixedExtensions(i64, i64),

    #[error("operation requires an exact ring, got {0}")]
    InexactRing(String),

    #[error("coefficient growth exceeded {cap} bits")]
    CoefficientGrowth { cap: u64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point lies on or too close to the discriminant")]
    OnDiscriminant,

    #[error("leading slope coefficient collapses at this point")]
    LeadingCollapse,

    #[error("root refinement did not converge (residual {0:e})")]
    NoConvergence(f64),

    #[error("{0}")]
    Domain(String),
}
