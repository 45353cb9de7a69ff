//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use knot_torsion::cli::presets::{Preset, PRESETS};
use knot_torsion::laurent::Laurent;
use knot_torsion::words::{Presentation, Word};
use knot_torsion::C64;
use nalgebra::{DMatrix, DVector};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn presets() -> &'static [Preset] {
    PRESETS
}

pub fn preset(name: &str) -> &'static Preset {
    PRESETS.iter().find(|p| p.name == name).expect("known preset")
}

pub fn two_bridge(name: &str) -> Presentation {
    preset(name).two_bridge_presentation().unwrap()
}

pub fn braid(name: &str) -> Presentation {
    preset(name).braid_presentation().unwrap()
}

/// All fixture presentations: braid closures and two-bridge forms.
pub fn all_presentations() -> Vec<(String, Presentation)> {
    let mut out = Vec::new();
    for p in PRESETS {
        out.push((format!("{}/braid", p.name), p.braid_presentation().unwrap()));
        out.push((format!("{}/two-bridge", p.name), p.two_bridge_presentation().unwrap()));
    }
    out
}

/// Polynomial in `t` as ascending coefficients, no negative powers.
type Poly = Vec<i64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &Poly, b: &Poly, sign: i64) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += sign * y;
    }
    out
}

/// Cofactor expansion of `det(V - t Vᵀ)`, then the symmetric normalization
/// with `Δ(1) = 1`, done by hand.
pub fn seifert_oracle(v: &[Vec<i64>]) -> Laurent<i64> {
    let n = v.len();
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|j| vec![v[i][j], -v[j][i]]).collect())
        .collect();
    fn det(m: &[Vec<Poly>]) -> Poly {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = vec![0];
        for j in 0..m.len() {
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = poly_mul(&m[0][j], &det(&minor));
            acc = poly_add(&acc, &term, if j % 2 == 0 { 1 } else { -1 });
        }
        acc
    }
    let mut p = det(&m);
    while p.last() == Some(&0) {
        p.pop();
    }
    let lo = p.iter().position(|&x| x != 0).expect("nonzero determinant");
    let p = &p[lo..];
    let span = p.len() as i64 - 1;
    assert_eq!(span % 2, 0, "knot determinants have even span");
    let at_one: i64 = p.iter().sum();
    assert_eq!(at_one.abs(), 1);
    Laurent::new(-span / 2, p.iter().map(|x| x * at_one).collect())
}

/// Central difference of `f` at `x` with Richardson correction.
pub fn fd_derivative(f: impl Fn(C64) -> C64, x: C64, h: f64) -> C64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (d(h / 2.0) * 4.0 - d(h)) / 3.0
}

/// Dense Gaussian elimination with partial pivoting.
pub fn brute_solve(a: &DMatrix<C64>, b: &DVector<C64>) -> DVector<C64> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm()))
            .unwrap();
        m.swap_rows(k, p);
        x.swap_rows(k, p);
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            for j in k..n {
                let v = m[(k, j)];
                m[(i, j)] -= f * v;
            }
            let v = x[k];
            x[i] -= f * v;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= m[(k, j)] * x[j];
        }
        x[k] = s / m[(k, k)];
    }
    x
}

/// Words of length at most `max_len` in generators `1..=gens`.
pub fn word_strategy(gens: usize, max_len: usize) -> impl proptest::strategy::Strategy<Value = Word> {
    use proptest::prelude::*;
    let g = gens as i32;
    prop::collection::vec((1..=g, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::new(v.into_iter().map(|(x, inv)| if inv { -x } else { x })))
}
