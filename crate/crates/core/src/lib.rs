//! Exact computations on the permutohedral variety and its relatives:
//! ordered set partitions, the permutohedral fan, the cohomology ring and
//! homology module in partition coordinates, Poincaré polynomials, and
//! correlator families satisfying the associated linear relations.

pub mod combination;
pub mod correlators;
pub mod enumerative;
pub mod fan;
pub mod homology;
pub mod linalg;
pub mod partitions;
pub mod rational;
pub mod relations;
pub mod ring;
pub mod suite;
