use nalgebra::{DMatrix, Schur};

use crate::C64;

fn eval(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// `|p(x)| / Σ |c_i| |x|^i` for ascending coefficients `coeffs`.
pub fn relative_residual(coeffs: &[C64], x: C64) -> f64 {
    let (p, _) = eval(coeffs, x);
    let r = x.norm();
    let scale = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    if scale == 0.0 {
        p.norm()
    } else {
        p.norm() / scale
    }
}

/// Newton iterations on the polynomial with ascending `coeffs`, stopping once
/// the relative residual drops below `tol` or a step stops improving it.
pub fn polish_root(coeffs: &[C64], mut x: C64, tol: f64, max_iter: usize) -> C64 {
    let mut best = relative_residual(coeffs, x);
    for _ in 0..max_iter {
        if best <= tol {
            break;
        }
        let (p, dp) = eval(coeffs, x);
        if dp.norm() == 0.0 {
            break;
        }
        let next = x - p / dp;
        let r = relative_residual(coeffs, next);
        if !(r < best) {
            break;
        }
        x = next;
        best = r;
    }
    x
}

/// All roots, with multiplicity, of the polynomial with ascending `coeffs`.
///
/// Eigenvalues of the companion matrix, each polished by Newton's method.
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let top = match coeffs.iter().rposition(|c| c.norm() != 0.0) {
        Some(i) => i,
        None => return Vec::new(),
    };
    let low = coeffs.iter().position(|c| c.norm() != 0.0).unwrap_or(0);
    let mut roots = vec![C64::new(0.0, 0.0); low];
    let core = &coeffs[low..=top];
    let n = core.len() - 1;
    if n == 0 {
        return roots;
    }
    if n == 1 {
        roots.push(-core[0] / core[1]);
        return roots;
    }
    let lead = core[n];
    let mut companion = DMatrix::<C64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -core[i] / lead;
    }
    let eig: Vec<C64> = match Schur::try_new(companion, 1e-15, 10_000) {
        Some(s) => {
            let (_, t) = s.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
        None => durand_kerner(core),
    };
    roots.extend(eig.into_iter().map(|x| polish_root(core, x, 1e-15, 50)));
    roots
}

fn durand_kerner(core: &[C64]) -> Vec<C64> {
    let n = core.len() - 1;
    let lead = core[n];
    let monic: Vec<C64> = core.iter().map(|c| c / lead).collect();
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powi(k as i32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (p, _) = eval(&monic, z[i]);
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(C64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = p / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}
