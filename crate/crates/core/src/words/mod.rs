//! Free-group words, the integral group ring, Fox calculus, group
//! presentations and Wirtinger presentations of braid closures.

mod braid;
mod fox;
mod group_ring;
mod presentation;
mod word;

pub use braid::{braid_to_presentation, closure_permutation, Braid};
pub use fox::{fox_derivative, fox_jacobian};
pub use group_ring::GroupRingElement;
pub use presentation::{
    abelianization, normalize_presentation, parse_presentation, Presentation, DEFAULT_TIETZE_BUDGET,
};
pub use word::{parse_word, Letter, Word};
