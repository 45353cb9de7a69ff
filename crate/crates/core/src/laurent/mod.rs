//! Laurent polynomials in one variable `t` over two coefficient domains:
//! exact integers (`i64`) and complex doubles ([`C64`](crate::C64)).

mod matrix;
mod poly;
mod roots;

pub use matrix::{InterpolationOptions, LaurentMatrix};
pub use poly::{Coefficient, Laurent, SymmetricNormalization, DEFAULT_TRIM};
pub use roots::{polish_root, polynomial_roots, relative_residual};

/// Integer Laurent polynomial.
pub type IntLaurent = Laurent<i64>;
/// Complex-float Laurent polynomial.
pub type ComplexLaurent = Laurent<crate::C64>;
