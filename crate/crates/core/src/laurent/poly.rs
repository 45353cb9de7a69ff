use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, C64};

/// End coefficients of float polynomials whose magnitude is at most this
/// fraction of the largest coefficient are dropped.
pub const DEFAULT_TRIM: f64 = 1e-10;

/// Coefficient ring of a [`Laurent`] polynomial.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Exact arithmetic (no trimming, bit-exact equality).
    const EXACT: bool;
    /// JSON representation of one coefficient.
    type Wire: Serialize + DeserializeOwned;

    fn magnitude(&self) -> f64;
    fn to_complex(&self) -> C64;
    fn from_i64(v: i64) -> Self;
    /// `self / d` when the quotient exists in the ring.
    fn checked_quotient(&self, d: &Self) -> Option<Self>;
    fn to_wire(&self) -> Self::Wire;
    fn from_wire(w: Self::Wire) -> Self;
}

impl Coefficient for i64 {
    const EXACT: bool = true;
    type Wire = i64;

    fn magnitude(&self) -> f64 {
        self.unsigned_abs() as f64
    }
    fn to_complex(&self) -> C64 {
        C64::new(*self as f64, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn checked_quotient(&self, d: &Self) -> Option<Self> {
        if *d != 0 && self % d == 0 {
            Some(self / d)
        } else {
            None
        }
    }
    fn to_wire(&self) -> i64 {
        *self
    }
    fn from_wire(w: i64) -> Self {
        w
    }
}

impl Coefficient for C64 {
    const EXACT: bool = false;
    type Wire = [f64; 2];

    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> C64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn checked_quotient(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            None
        } else {
            Some(self / d)
        }
    }
    fn to_wire(&self) -> [f64; 2] {
        [self.re, self.im]
    }
    fn from_wire(w: [f64; 2]) -> Self {
        C64::new(w[0], w[1])
    }
}

/// `Σ_{i} c_i t^{min_degree + i}`.
///
/// End coefficients are nonzero (exact) or above the trim threshold (float);
/// the zero polynomial has no coefficients and `min_degree == 0`.
#[derive(Clone, PartialEq)]
pub struct Laurent<C> {
    min_degree: i64,
    coeffs: Vec<C>,
}

/// Output of [`Laurent::normalize_symmetric`]: `polynomial = ε t^m p`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricNormalization<C> {
    pub polynomial: Laurent<C>,
    pub epsilon: i64,
    pub shift: i64,
}

impl<C: Coefficient> Laurent<C> {
    pub fn zero() -> Self {
        Laurent {
            min_degree: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, degree: i64) -> Self {
        Self::new(degree, vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// Builds and trims with [`DEFAULT_TRIM`].
    pub fn new(min_degree: i64, coeffs: Vec<C>) -> Self {
        Self::with_trim(min_degree, coeffs, DEFAULT_TRIM)
    }

    /// Builds and trims; `trim` is ignored for exact coefficients.
    pub fn with_trim(min_degree: i64, mut coeffs: Vec<C>, trim: f64) -> Self {
        let threshold = if C::EXACT {
            0.0
        } else {
            trim * coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
        };
        let negligible = |c: &C| c.is_zero() || (!C::EXACT && c.magnitude() <= threshold);
        while coeffs.last().is_some_and(negligible) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| negligible(c)).count();
        if coeffs.len() == lead {
            return Self::zero();
        }
        coeffs.drain(..lead);
        Laurent {
            min_degree: min_degree + lead as i64,
            coeffs,
        }
    }

    /// Dense coefficient list from `t^lo` through `t^hi` inclusive.
    pub fn coefficients_between(&self, lo: i64, hi: i64) -> Vec<C> {
        (lo..=hi).map(|d| self.coeff(d)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Highest exponent; `min_degree - 1` for the zero polynomial.
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.coeffs.len() as i64 - 1
    }

    /// `max_degree - min_degree` (0 for constants and for zero).
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: i64) -> C {
        let i = degree - self.min_degree;
        if i < 0 || i >= self.coeffs.len() as i64 {
            C::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn trailing(&self) -> Option<&C> {
        self.coeffs.first()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Multiplication by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Laurent {
            min_degree: self.min_degree + m,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(
            self.min_degree,
            self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        )
    }

    pub fn evaluate(&self, t: C64) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        let horner = self
            .coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, c| acc * t + c.to_complex());
        horner * t.powi(self.min_degree as i32)
    }

    /// `Σ |c_d| |t|^d`, the natural scale for `|p(t)|`.
    pub fn magnitude_at(&self, t: C64) -> f64 {
        let r = t.norm();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.magnitude() * r.powi((self.min_degree + i as i64) as i32))
            .sum()
    }

    /// `|p(t)| / Σ |c_d| |t|^d` (0 for the zero polynomial).
    pub fn relative_value(&self, t: C64) -> f64 {
        let scale = self.magnitude_at(t);
        if scale == 0.0 {
            0.0
        } else {
            self.evaluate(t).norm() / scale
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * C::from_i64(self.min_degree + i as i64))
            .collect();
        Self::new(self.min_degree - 1, coeffs)
    }

    pub fn to_complex(&self) -> Laurent<C64> {
        Laurent::new(self.min_degree, self.coeffs.iter().map(|c| c.to_complex()).collect())
    }

    /// Quotient `self / den`, required to leave no remainder.
    ///
    /// Exact coefficients demand a zero remainder; float coefficients accept
    /// `‖remainder‖∞ ≤ tol · ‖self‖∞`.
    pub fn divide_exact(&self, den: &Self, tol: f64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::SmallDenominator(0.0));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let n = self.coeffs.len();
        let m = den.coeffs.len();
        let lead = den.coeffs[m - 1].clone();
        let mut rem = self.coeffs.clone();
        let mut quotient = vec![C::zero(); n.saturating_sub(m - 1)];
        for i in (0..quotient.len()).rev() {
            let q = rem[i + m - 1]
                .checked_quotient(&lead)
                .ok_or(Error::NotDivisible(f64::INFINITY))?;
            for (j, b) in den.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - q.clone() * b.clone();
            }
            quotient[i] = q;
        }
        let rest = &rem[..(m - 1).min(n)];
        let rem_norm = rest.iter().map(|c| c.magnitude()).fold(0.0, f64::max);
        let rel = rem_norm / self.max_abs_coeff();
        let ok = if C::EXACT { rem_norm == 0.0 } else { rel <= tol };
        if !ok {
            return Err(Error::NotDivisible(rel));
        }
        Ok(Self::new(self.min_degree - den.min_degree, quotient))
    }

    /// `p(t) = p(1/t)` coefficientwise (within `tol` relative for floats).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.min_degree + self.max_degree() != 0 {
            return false;
        }
        let scale = self.max_abs_coeff();
        self.coeffs.iter().zip(self.coeffs.iter().rev()).all(|(a, b)| {
            if C::EXACT {
                a == b
            } else {
                (a.clone() - b.clone()).magnitude() <= tol * scale
            }
        })
    }

    /// The unit multiple `ε t^m p` that is symmetric under `t ↦ 1/t` and takes
    /// the value 1 at `t = 1`.
    pub fn normalize_symmetric(&self, tol: f64) -> Result<SymmetricNormalization<C>> {
        if self.is_zero() {
            return Err(Error::NotSymmetrizable("zero polynomial".into()));
        }
        let span = self.span() as i64;
        if span % 2 != 0 {
            return Err(Error::NotSymmetrizable(format!("odd degree span {span}")));
        }
        let shift = -(self.min_degree + span / 2);
        let centred = self.shift(shift);
        if !centred.is_symmetric(tol) {
            return Err(Error::NotSymmetrizable("coefficients are not palindromic".into()));
        }
        let at_one = centred
            .coeffs
            .iter()
            .fold(C64::new(0.0, 0.0), |acc, c| acc + c.to_complex());
        let epsilon = if (at_one - 1.0).norm() <= tol.max(0.0) {
            1
        } else if (at_one + 1.0).norm() <= tol.max(0.0) {
            -1
        } else {
            return Err(Error::NotSymmetrizable(format!("value at t = 1 is {at_one}, not ±1")));
        };
        let polynomial = if epsilon == 1 { centred } else { -&centred };
        Ok(SymmetricNormalization {
            polynomial,
            epsilon,
            shift,
        })
    }
}

impl Laurent<C64> {
    /// `p(c t)`.
    pub fn scale_variable(&self, c: C64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * c.powi((self.min_degree + i as i64) as i32))
            .collect();
        Laurent::new(self.min_degree, coeffs)
    }

    /// `max_d |self_d - other_d| / max_d |other_d|`.
    pub fn relative_deviation(&self, other: &Self) -> f64 {
        let lo = self.min_degree.min(other.min_degree);
        let hi = self.max_degree().max(other.max_degree());
        let diff = (lo..=hi)
            .map(|d| (self.coeff(d) - other.coeff(d)).norm())
            .fold(0.0, f64::max);
        let scale = other.max_abs_coeff();
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

impl<C: Coefficient> Default for Laurent<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Add for &Laurent<C> {
    type Output = Laurent<C>;

    fn add(self, rhs: &Laurent<C>) -> Laurent<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_degree.min(rhs.min_degree);
        let hi = self.max_degree().max(rhs.max_degree());
        let coeffs = (lo..=hi).map(|d| self.coeff(d) + rhs.coeff(d)).collect();
        Laurent::new(lo, coeffs)
    }
}

impl<C: Coefficient> Neg for &Laurent<C> {
    type Output = Laurent<C>;

    fn neg(self) -> Laurent<C> {
        Laurent {
            min_degree: self.min_degree,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<C: Coefficient> Sub for &Laurent<C> {
    type Output = Laurent<C>;

    fn sub(self, rhs: &Laurent<C>) -> Laurent<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Mul for &Laurent<C> {
    type Output = Laurent<C>;

    fn mul(self, rhs: &Laurent<C>) -> Laurent<C> {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Laurent::new(self.min_degree + rhs.min_degree, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for Laurent<C> {
            type Output = Laurent<C>;
            fn $m(self, rhs: Laurent<C>) -> Laurent<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient> Neg for Laurent<C> {
    type Output = Laurent<C>;

    fn neg(self) -> Laurent<C> {
        -&self
    }
}

impl<C: Debug> Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent(t^{}: {:?})", self.min_degree, self.coeffs)
    }
}

impl fmt::Display for Laurent<i64> {
    /// Descending powers, e.g. `t - 1 + t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in (self.min_degree..=self.max_degree()).rev() {
            let c = self.coeff(d);
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match d {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if d == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Laurent<C64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = (self.min_degree..=self.max_degree())
            .rev()
            .map(|d| {
                let c = self.coeff(d);
                format!("({:.6}{:+.6}i)t^{}", c.re, c.im, d)
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentWire<W> {
    min_degree: i64,
    coeffs: Vec<W>,
}

impl<C: Coefficient> Serialize for Laurent<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentWire {
            min_degree: self.min_degree,
            coeffs: self.coeffs.iter().map(|c| c.to_wire()).collect(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for Laurent<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = LaurentWire::<C::Wire>::deserialize(d)?;
        Ok(Laurent::new(
            w.min_degree,
            w.coeffs.into_iter().map(C::from_wire).collect(),
        ))
    }
}
