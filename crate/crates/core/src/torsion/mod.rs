//! Twisted Fox matrices, the Wada invariant, the λ-torsion and torsion of
//! based acyclic chain complexes.

mod action;
mod chain;
mod wada;

pub use action::{build_a1, twisted_fox_matrix, Action};
pub use chain::{
    cross_oracle, generic_acyclic_torsion, generic_acyclic_torsion_with_order, presentation_complex, BasedChainComplex,
    CrossOracleReport,
};
pub use wada::{
    factorization_at_reducible, factorization_at_reducible_with, fit_unit_multiple, lambda_torsion_up_to_sign,
    lambda_torsion_with, triple_product, wada_invariant, wada_invariant_with, FactorizationReport, LambdaTorsion,
    UnitFit, WadaInvariant,
};
