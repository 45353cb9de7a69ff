//! `SL2(C)` values, the adjoint action and representation families of knot
//! groups.

mod representation;
mod riley;
mod sl2;

pub use representation::{
    abelian_rep, eigenvalue_parameter, reducible_nonabelian, trace_of, RepFile, Representation, RESIDUAL_TOLERANCE,
};
pub use riley::{riley_family, riley_polynomial, riley_residual, RileyEntry, RileyPolynomial};
pub use sl2::{adjoint, random_sl2, Ad3Value, SL2Value, SL2_TOLERANCE};
