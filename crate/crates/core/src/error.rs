use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("presentation is not meridional (abelianization exponents {0:?})")]
    NotMeridional(Vec<i64>),

    #[error("no meridional presentation found within {0} Tietze moves")]
    TietzeBudget(usize),

    #[error("invalid braid: {0}")]
    Braid(String),

    #[error("braid closure has {0} components; expected a knot")]
    NotAKnot(usize),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error(
        "interpolation residual {residual:.3e} exceeds {tolerance:.3e} \
         (degree bound {degree}, node magnitude spread {spread:.3e})"
    )]
    Interpolation {
        residual: f64,
        tolerance: f64,
        degree: usize,
        spread: f64,
    },

    #[error("not divisible: relative remainder {0:.3e}")]
    NotDivisible(f64),

    #[error("no symmetric unit multiple exists: {0}")]
    NotSymmetrizable(String),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("determinant vanishes identically")]
    DegenerateDeterminant,

    #[error("matrix is not in SL2: |det - 1| = {0:.3e}")]
    NotUnimodular(f64),

    #[error("relator residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("e^(2z) is not a root of the Alexander polynomial: |Δ| = {0:.3e}")]
    NotARoot(f64),

    #[error("kernel contains only coboundary directions (dimension {0})")]
    OnlyCoboundary(usize),

    #[error("root is not simple")]
    NonSimpleRoot,

    #[error("closed form and finite differences disagree: relative difference {0:.3e}")]
    DerivativeMismatch(f64),

    #[error("denominator too small: |{0:.3e}|")]
    SmallDenominator(f64),

    #[error("chain complex is not acyclic (rank defect {0})")]
    NotAcyclic(usize),

    #[error("boundary maps do not compose to zero: max entry {0:.3e}")]
    NotAComplex(f64),

    #[error("no unit ±t^m matches: {0}")]
    UnitMismatch(String),

    #[error("continuation failed: {0}")]
    Continuation(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
