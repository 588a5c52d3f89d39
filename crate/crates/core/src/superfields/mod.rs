//! Vector fields on the Grassmann algebra and finite-dimensional Lie
//! superalgebra tables.

mod grading;
mod io;
mod table;
mod vector;

pub use grading::{degree_difference, weight_difference, GradeKey, GradingCode};
pub use io::{export_table, import_table, import_table_unchecked};
pub use table::{AlgebraTable, JacobiReport, Structure, TableMeta, VectorField, Weight};
pub use vector::{term_degree, term_parity, SuperVectorField};
