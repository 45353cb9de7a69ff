//! Alexander polynomials, Wada twisted Alexander invariants and the
//! non-acyclic adjoint Reidemeister torsion of knot exteriors.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: free-group words, group-ring elements, Fox calculus,
//!   presentations and braid closures.
//! * [`laurent`]: Laurent polynomials over the integers and over complex
//!   floats, matrices of them and their determinants.
//! * [`reps`]: `SL2(C)` values, the adjoint action and representation
//!   families (abelian, reducible non-abelian, Riley).
//! * [`alexander`]: the normalized Alexander polynomial, its roots and the
//!   abelian torsion function.
//! * [`torsion`]: twisted Fox matrices, the Wada invariant, the
//!   λ-torsion and a generic torsion routine for based chain complexes.
//! * [`bifurcation`]: bifurcation points and the numerical limit experiment.
//! * [`cli`]: the `knot-torsion` command line front end.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alexander;
pub mod bifurcation;
pub mod cli;
pub mod config;
mod error;
pub mod laurent;
pub mod linalg;
pub mod reps;
pub mod torsion;
pub mod words;

pub use error::{Error, Result};

/// Complex double used throughout the numerical side.
pub type C64 = num_complex::Complex64;

/// Serde helpers: complex numbers travel as `[re, im]` pairs.
pub mod cplx {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_pair(z: C64) -> [f64; 2] {
        [z.re, z.im]
    }

    pub fn from_pair(p: [f64; 2]) -> C64 {
        C64::new(p[0], p[1])
    }

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        to_pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        <[f64; 2]>::deserialize(d).map(from_pair)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|z| to_pair(*z)).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
            Ok(Vec::<[f64; 2]>::deserialize(d)?.into_iter().map(from_pair).collect())
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(z: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
            z.map(to_pair).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
            Ok(Option::<[f64; 2]>::deserialize(d)?.map(from_pair))
        }
    }
}
