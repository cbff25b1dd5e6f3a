use alloc::boxed::Box;
use alloc::collections::BTreeSet;

use thiserror::Error;

use crate::linalg::Rational;
use crate::polytope::Side;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Evidence that a game violates the non-degeneracy assumption.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// A vertex of `P` or `Q` carries more labels than the strategy dimension.
    OversizedLabelSet {
        side: Side,
        point: alloc::vec::Vec<Rational>,
        labels: BTreeSet<usize>,
    },
    /// The sweep objective vanishes on a whole interval, so equilibria are not isolated.
    ZeroObjectiveSegment { lo: Rational, hi: Rational },
    /// A Lemke–Howson pivot found no unique neighbour dropping the requested label.
    AmbiguousPivot { side: Side, label: usize },
}

impl core::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Degeneracy::OversizedLabelSet {
                side,
                point,
                labels,
            } => {
                write!(f, "vertex of {side:?} at (")?;
                for (k, v) in point.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ") has {} labels {{", labels.len())?;
                for (k, l) in labels.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str("}")
            }
            Degeneracy::ZeroObjectiveSegment { lo, hi } => {
                write!(f, "objective is identically zero on [{lo}, {hi}]")
            }
            Degeneracy::AmbiguousPivot { side, label } => {
                write!(f, "no unique pivot dropping label {label} on side {side:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("quadratic is identically zero")]
    IdenticallyZero,
    #[error("quadratic has an irrational zero inside the interval")]
    IrrationalInteriorZero,
    #[error("game has rank {rank}, expected rank one")]
    NotRankOne { rank: usize },
    #[error("game has rank {rank}, expected full rank {dim}")]
    NotFullRank { rank: usize, dim: usize },
    #[error("game is {rows}x{cols}, expected a square game")]
    NotSquare { rows: usize, cols: usize },
    #[error("no column admits a rank-reducing shift")]
    NoSuchColumn,
    #[error("game is not row-constant for the given row sums")]
    NotRowConstant,
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("strategy is not a probability vector")]
    InvalidStrategy,
    #[error("factorization does not reproduce A + B")]
    FactorizationMismatch,
    #[error("degenerate game: {0}")]
    DegenerateGame(Box<Degeneracy>),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    UnboundedObjective,
    #[error("basis system is singular")]
    SingularBasis,
    #[error("basis is optimal for no parameter value")]
    EmptyInterval,
    #[error("no admissible pivot at xi = {xi}")]
    Stalled { xi: Rational },
    #[error("Lemke-Howson path exceeded {limit} steps")]
    PathLimitExceeded { limit: usize },
}

impl From<Degeneracy> for Error {
    fn from(d: Degeneracy) -> Self {
        Error::DegenerateGame(Box::new(d))
    }
}
