//! Exact construction of the Cartan-type Lie superalgebras W(n), S(n),
//! S̃(n) and H(n), and of their superderivation and super-biderivation spaces.

pub mod bidersolve;
pub mod cli;
pub mod dersolve;
pub mod error;
pub mod exterior;
pub mod families;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod structchecks;
pub mod superfields;
mod system;

pub use error::Error;
pub use exterior::{GrassmannPoly, Monomial, Parity};
pub use families::{build_lprime, Family, LPrime};
pub use scalar::{ModP, Rational, Scalar, F31};
pub use superfields::{AlgebraTable, SuperVectorField, TableMeta, VectorField, Weight};

/// Grassmann polynomial with rational coefficients.
pub type Poly = GrassmannPoly<Rational>;
