//! Exact computer algebra for the shuffle Hopf algebra on {e0, e1}, truncated
//! noncommutative power series, the one-dimensional associator equations and
//! their depth-graded reformulation, depth-reduction certificates, and both
//! exact (mod-p) and high-precision numerical verification on multiple zeta
//! values.

pub mod dual;
pub mod harmonic;
pub mod linalg;
pub mod mzv;
pub mod numeric;
pub mod reduction;
pub mod ring;
pub mod series;
pub mod shuffle;
pub mod solver;
pub mod word;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid index: {0}")]
    BadIndex(String),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncMismatch(usize, usize),
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("requested weight exceeds truncation ({0} > {1})")]
    TruncExceeded(usize, usize),
    #[error("linear system inconsistent at weight {0}")]
    Inconsistent(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("divergent index: leading exponent must be >= 2")]
    Divergent,
    #[error("pole: reduction undefined for leading exponent 1")]
    Pole,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub use ring::{Coeff, MuPoly, Rat};
pub use shuffle::{MuMode, ShufflePoly};
pub use series::NCSeries;
pub use word::{Index, Letter, Word};
