//! Exact sparse linear algebra over the rationals and prime fields.

pub mod blocked;
pub mod echelon;
pub mod field;
pub mod matrix;

pub use blocked::{solve_blocked, BlockOutcome, BlockSpec, BlockStatus, RowSink};
pub use echelon::{canonicalize, Echelon, SpanBasis, SparseVec};
pub use field::{ExactField, Field, FieldTag, PrimeField, Rationals};
pub use matrix::{in_span, rank_of, NullspaceBasis, SparseMatrix};
