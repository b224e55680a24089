//! Matrix correlators: representations of the partition algebra with
//! coefficients in a tensor algebra, given by their one-block ("top")
//! values, and the matrix-valued series whose differential squares to zero
//! exactly when those values satisfy the linear relations.
//!
//! The target superspace `F` is taken purely even, so every correlator of
//! odd total parity vanishes; the index space carries arbitrary parities.

mod family;
mod fixtures;
mod matrix;
mod series;
mod sign;

pub use family::{
    act_permutation, check_linear_relations, check_top_relations, representation_apply, FamilyFile,
    RelationFailure, RelationReport, TensorElement, TopCorrelatorFamily, TopEntry, TupleSelection,
};
pub use fixtures::{
    build_from_commuting, extend_level, linear_form_family, noncommuting_pair, noncommuting_series, product_family,
    random_commuting_matrices, scalar_series, solve_order_by_order,
};
pub use matrix::Matrix;
pub use series::{
    build_series, check_commutativity, top_from_series, CommutativityFailure, CommutativityReport, Monomial,
    SeriesFile, SeriesTerm, TruncatedSeries,
};
pub use sign::{koszul_sign, sort_with_sign, IndexEntry, Parity, SuperIndexSet};

use thiserror::Error;

use crate::partitions::{Label, PartitionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrelatorError {
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("index {0} listed twice")]
    DuplicateIndex(Label),
    #[error("unknown index {0}")]
    UnknownIndex(Label),
    #[error("matrix dimension {got} does not match {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("correlator sequences must be nonempty")]
    EmptySequence,
    #[error("sequence of length {len} exceeds the order {order}")]
    BeyondOrder { len: usize, order: usize },
    #[error("nonzero value for {0:?}, which repeats an odd index")]
    RepeatedOdd(Vec<Label>),
    #[error("nonzero value for {0:?}, which has odd total parity")]
    OddValue(Vec<Label>),
    #[error("matrices for indices {0} and {1} do not commute")]
    NotCommuting(Label, Label),
    #[error("expected {expected} matrices, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("odd index {0} cannot carry a nonzero one-point value")]
    OddOnePoint(Label),
    #[error("partition of {partition} labels used with {indices} indices")]
    LengthMismatch { partition: usize, indices: usize },
    #[error("exponent vector {0:?} is not a valid monomial")]
    BadMonomial(Vec<u32>),
    #[error("truncation order must be at least {0}")]
    OrderTooLow(usize),
    #[error("no solution extending the family to level {0}")]
    Unsolvable(usize),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}
