//! Exact arithmetic: cyclotomic scalars, Laurent polynomials and matrices over them.

pub mod cyclotomic;
pub mod dense;
pub mod laurent;
pub mod matrix;
pub mod sparse;
pub mod text;

pub use cyclotomic::{cyclotomic_polynomial, rational, totient, CycNum, Rational};
pub use dense::Matrix;
pub use laurent::LaurentPoly;
pub use matrix::{LaurentMatrix, Point};
pub use sparse::SparseEchelon;
pub use text::{parse_cycnum, parse_laurent};
