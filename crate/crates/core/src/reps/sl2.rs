use std::ops::Mul;

use nalgebra::{Matrix2, Matrix3};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, C64};

/// Allowed `|det - 1|` for an [`SL2Value`].
pub const SL2_TOLERANCE: f64 = 1e-10;

/// A unimodular complex 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SL2Value(Matrix2<C64>);

impl SL2Value {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        Self::from_matrix(Matrix2::new(a, b, c, d))
    }

    pub fn from_matrix(m: Matrix2<C64>) -> Result<Self> {
        let defect = (m.determinant() - 1.0).norm();
        if !(defect <= SL2_TOLERANCE) {
            return Err(Error::NotUnimodular(defect));
        }
        Ok(SL2Value(m))
    }

    /// Products of checked values; rounding may move the determinant slightly.
    pub(crate) fn from_matrix_unchecked(m: Matrix2<C64>) -> Self {
        SL2Value(m)
    }

    pub fn identity() -> Self {
        SL2Value(Matrix2::identity())
    }

    /// `diag(c, 1/c)`.
    pub fn diagonal(c: C64) -> Self {
        SL2Value(Matrix2::new(c, C64::new(0.0, 0.0), C64::new(0.0, 0.0), 1.0 / c))
    }

    /// `[[c, b], [0, 1/c]]`.
    pub fn upper(c: C64, b: C64) -> Self {
        SL2Value(Matrix2::new(c, b, C64::new(0.0, 0.0), 1.0 / c))
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn a(&self) -> C64 {
        self.0[(0, 0)]
    }
    pub fn b(&self) -> C64 {
        self.0[(0, 1)]
    }
    pub fn c(&self) -> C64 {
        self.0[(1, 0)]
    }
    pub fn d(&self) -> C64 {
        self.0[(1, 1)]
    }

    pub fn det(&self) -> C64 {
        self.0.determinant()
    }

    pub fn trace(&self) -> C64 {
        self.a() + self.d()
    }

    /// Adjugate, which is the inverse for unimodular matrices.
    pub fn inverse(&self) -> Self {
        SL2Value(Matrix2::new(self.d(), -self.b(), -self.c(), self.a()))
    }
}

impl Mul for SL2Value {
    type Output = SL2Value;

    fn mul(self, rhs: SL2Value) -> SL2Value {
        SL2Value(self.0 * rhs.0)
    }
}

impl Mul<&SL2Value> for &SL2Value {
    type Output = SL2Value;

    fn mul(self, rhs: &SL2Value) -> SL2Value {
        SL2Value(self.0 * rhs.0)
    }
}

impl Serialize for SL2Value {
    /// `[[[re, im], [re, im]], [[re, im], [re, im]]]`, row-major.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = |z: C64| [z.re, z.im];
        [[p(self.a()), p(self.b())], [p(self.c()), p(self.d())]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for SL2Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = <[[[f64; 2]; 2]; 2]>::deserialize(d)?;
        let z = |p: [f64; 2]| C64::new(p[0], p[1]);
        SL2Value::new(z(m[0][0]), z(m[0][1]), z(m[1][0]), z(m[1][1])).map_err(serde::de::Error::custom)
    }
}

/// Random element with entries of moderate size, used for conjugation checks.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R) -> SL2Value {
    let mut sample = |lo: f64| loop {
        let z = C64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        if z.norm() >= lo {
            return z;
        }
    };
    let a = sample(0.5);
    let b = sample(0.0);
    let c = sample(0.0);
    SL2Value(Matrix2::new(a, b, c, (1.0 + b * c) / a))
}

/// Adjoint action `X ↦ g X g⁻¹` on `sl2(C)` in the ordered basis `{E, H, F}`.
///
/// `[[h, e], [f, -h]]` has coordinates `(e, h, f)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ad3Value(Matrix3<C64>);

impl Ad3Value {
    pub fn identity() -> Self {
        Ad3Value(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub fn det(&self) -> C64 {
        self.0.determinant()
    }
}

impl Mul for Ad3Value {
    type Output = Ad3Value;

    fn mul(self, rhs: Ad3Value) -> Ad3Value {
        Ad3Value(self.0 * rhs.0)
    }
}

pub fn adjoint(g: &SL2Value) -> Ad3Value {
    let (a, b, c, d) = (g.a(), g.b(), g.c(), g.d());
    Ad3Value(Matrix3::new(
        a * a,
        -2.0 * a * b,
        -b * b,
        -a * c,
        a * d + b * c,
        b * d,
        -c * c,
        2.0 * c * d,
        d * d,
    ))
}
