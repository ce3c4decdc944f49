//! Entropy-profile LP: rows, an exact rational simplex and the lazy bound solver.
//!
//! Variables are `h_A = H(S | W_{A^c}) / n` for every message subset `A`
//! together with the symmetric rate `R`.

mod bound;
mod guide;
mod profile;
pub mod rows;
pub mod simplex;

use thiserror::Error;

pub use bound::{
    check_profile_feasible, check_rows, solve_symmetric_bound, solve_with_rows, ActiveRow, BoundResult,
    FeasibilityReport, SolverOptions, SolverStats, Violation,
};
pub use profile::EntropyProfile;
pub use rows::{gen_decoding_rows, gen_shannon_rows, InequalityRow, RowBuilder, RowError, RowKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("rational overflow in the simplex tableau")]
    Overflow,
    #[error("LP is infeasible (a generator produced an inconsistent row)")]
    Infeasible,
    #[error("LP is unbounded")]
    Unbounded,
    #[error("pivot limit {0} exceeded")]
    PivotLimit(usize),
    #[error("row limit {0} exceeded")]
    RowLimit(usize),
    #[error("{0} messages is beyond the dense profile limit")]
    TooManyMessages(usize),
    #[error(transparent)]
    Row(#[from] RowError),
    #[error("internal: {0}")]
    Internal(String),
}
