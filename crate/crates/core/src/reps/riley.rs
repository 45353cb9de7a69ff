use serde::{Deserialize, Serialize};

use super::representation::Representation;
use super::sl2::SL2Value;
use crate::laurent::polynomial_roots;
use crate::words::Presentation;
use crate::{cplx, Error, Result, C64};

/// `x1 ↦ [[s, 1], [0, 1/s]]`, `x2 ↦ [[s, 0], [-u, 1/s]]`.
pub fn riley_family(p: &Presentation, s: C64, u: C64) -> Result<Representation> {
    require_two_generators(p)?;
    let zero = C64::new(0.0, 0.0);
    let x1 = SL2Value::upper(s, C64::new(1.0, 0.0));
    let x2 = SL2Value::new(s, zero, -u, 1.0 / s)?;
    Representation::new(p, vec![x1, x2])
}

fn require_two_generators(p: &Presentation) -> Result<()> {
    if p.generator_count() != 2 {
        return Err(Error::Unsupported(format!(
            "the Riley family needs 2 generators, got {}",
            p.generator_count()
        )));
    }
    p.require_meridional()
}

/// Entry of `ρ(r1) - I` used as the scalar Riley equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RileyEntry {
    /// `(2,1)` entry divided by `u`.
    LowerLeft,
    /// `(2,2)` entry divided by `u`.
    LowerRight,
    /// `(1,1)` entry divided by `u`.
    UpperLeft,
}

/// The Riley equation at fixed `s` as a polynomial in `u` (ascending).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RileyPolynomial {
    pub entry: RileyEntry,
    #[serde(with = "cplx::vec")]
    pub coeffs: Vec<C64>,
}

impl RileyPolynomial {
    pub fn evaluate(&self, u: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * u + c)
    }

    pub fn derivative(&self, u: C64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, (i, c)| acc * u + c * i as f64)
    }

    pub fn roots(&self) -> Vec<C64> {
        polynomial_roots(&self.coeffs)
    }
}

type Poly = Vec<C64>;

fn padd(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default())
        .collect()
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

type PolyMatrix = [[Poly; 2]; 2];

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let e = |i: usize, j: usize| padd(&pmul(&a[i][0], &b[0][j]), &pmul(&a[i][1], &b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Entries of `ρ(r1)` as exact polynomials in `u` (floating coefficients).
fn relator_matrix(p: &Presentation, s: C64) -> PolyMatrix {
    let one = C64::new(1.0, 0.0);
    let c = |z: C64| vec![z];
    let x1 = [[c(s), c(one)], [vec![], c(1.0 / s)]];
    let x1_inv = [[c(1.0 / s), c(-one)], [vec![], c(s)]];
    let x2 = [[c(s), vec![]], [vec![C64::new(0.0, 0.0), -one], c(1.0 / s)]];
    let x2_inv = [[c(1.0 / s), vec![]], [vec![C64::new(0.0, 0.0), one], c(s)]];
    let identity: PolyMatrix = [[c(one), vec![]], [vec![], c(one)]];
    p.relators()[0].letters().iter().fold(identity, |acc, &l| {
        let g = match l {
            1 => &x1,
            -1 => &x1_inv,
            2 => &x2,
            _ => &x2_inv,
        };
        mat_mul(&acc, g)
    })
}

/// The Riley equation at fixed `s`.
///
/// Uses the `(2,1)` entry of `ρ(r1) - I` divided by `u`; when that is
/// identically zero, the `(2,2)` and then the `(1,1)` entry is tried.
pub fn riley_polynomial(p: &Presentation, s: C64) -> Result<RileyPolynomial> {
    require_two_generators(p)?;
    let m = relator_matrix(p, s);
    let one = C64::new(1.0, 0.0);
    let minus_identity = |mut v: Poly| {
        if v.is_empty() {
            v.push(C64::new(0.0, 0.0));
        }
        v[0] -= one;
        v
    };
    let candidates = [
        (RileyEntry::LowerLeft, m[1][0].clone()),
        (RileyEntry::LowerRight, minus_identity(m[1][1].clone())),
        (RileyEntry::UpperLeft, minus_identity(m[0][0].clone())),
    ];
    let scale = m.iter().flatten().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    for (entry, poly) in candidates {
        let Some((constant, rest)) = poly.split_first() else {
            continue;
        };
        let top = rest.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if constant.norm() <= 1e-12 * scale && top > 1e-12 * scale {
            let mut coeffs = rest.to_vec();
            while coeffs.last().is_some_and(|z| z.norm() <= 1e-14 * top) {
                coeffs.pop();
            }
            return Ok(RileyPolynomial { entry, coeffs });
        }
    }
    Err(Error::Unsupported(
        "no entry of the relator matrix gives a nontrivial Riley equation".into(),
    ))
}

pub fn riley_residual(p: &Presentation, s: C64, u: C64) -> Result<C64> {
    Ok(riley_polynomial(p, s)?.evaluate(u))
}
