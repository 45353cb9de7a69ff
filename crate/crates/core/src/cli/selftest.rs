//! Built-in consistency checks over the bundled fixtures or a fixture
//! directory.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::commands::LIMIT_AGREEMENT;
use super::presets::{seifert_alexander, PRESETS};
use super::report::Payload;
use super::CliError;
use crate::alexander::{alexander_polynomial_with, symmetry_check};
use crate::bifurcation::{abelian_zero_check, bifurcation_points_with, verify_limit_with, LimitOptions};
use crate::config::Tolerances;
use crate::laurent::Laurent;
use crate::reps::{random_sl2, reducible_nonabelian};
use crate::torsion::{cross_oracle, factorization_at_reducible_with, wada_invariant_with};
use crate::words::{
    fox_derivative, normalize_presentation, parse_presentation, GroupRingElement, Presentation, Word,
    DEFAULT_TIETZE_BUDGET,
};
use crate::{Error, Result, C64};

const SEED: u64 = 0x5eed;

#[derive(Clone, Debug, Serialize)]
pub(crate) struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub(crate) struct SelftestPayload {
    pub quick: bool,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

/// One fixture: a presentation plus whatever oracles came with it.
struct Fixture {
    name: String,
    presentation: std::result::Result<Presentation, Error>,
    /// Alternative presentations of the same knot, e.g. a two-bridge one.
    alternatives: Vec<Presentation>,
    delta: Option<Laurent<i64>>,
    seifert: Option<Vec<Vec<i64>>>,
}

fn builtin() -> Vec<Fixture> {
    PRESETS
        .iter()
        .map(|p| Fixture {
            name: p.name.to_string(),
            presentation: p.braid_presentation(),
            alternatives: p.two_bridge_presentation().into_iter().collect(),
            delta: Some(p.expected_delta()),
            seifert: Some(p.seifert.iter().map(|r| r.to_vec()).collect()),
        })
        .collect()
}

fn parse_ints(s: &str) -> Option<Vec<i64>> {
    s.split_whitespace().map(|x| x.parse().ok()).collect()
}

/// Reads `*.pres` files. Oracles come from comment lines
/// `# delta: <min_degree> <coeffs..>` and `# seifert: <row-major entries>`.
fn from_dir(dir: &Path) -> std::result::Result<Vec<Fixture>, CliError> {
    let io = |e: std::io::Error| CliError::Compute(Error::Io(format!("{}: {e}", dir.display())));
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pres"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Usage(format!("no .pres files in {}", dir.display())));
    }
    let mut out = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path).map_err(io)?;
        let mut delta = None;
        let mut seifert = None;
        for line in text.lines() {
            let line = line.trim_start_matches('#').trim();
            if let Some(rest) = line.strip_prefix("delta:") {
                delta = parse_ints(rest)
                    .filter(|v| v.len() >= 2)
                    .map(|v| Laurent::new(v[0], v[1..].to_vec()));
            } else if let Some(rest) = line.strip_prefix("seifert:") {
                seifert = parse_ints(rest).and_then(|v| {
                    let n = (v.len() as f64).sqrt().round() as usize;
                    (n * n == v.len() && n > 0).then(|| v.chunks(n).map(|r| r.to_vec()).collect())
                });
            }
        }
        let presentation = parse_presentation(&text).and_then(|p| {
            if p.is_meridional() {
                Ok(p)
            } else {
                normalize_presentation(&p, DEFAULT_TIETZE_BUDGET)
            }
        });
        out.push(Fixture {
            name: path.file_stem().unwrap_or_default().to_string_lossy().into_owned(),
            presentation,
            alternatives: Vec::new(),
            delta,
            seifert,
        });
    }
    Ok(out)
}

pub(super) fn run(
    tol: &Tolerances,
    quick: bool,
    fixtures: Option<&Path>,
) -> std::result::Result<SelftestPayload, CliError> {
    let fixtures = match fixtures {
        Some(dir) => from_dir(dir)?,
        None => builtin(),
    };
    let mut checks = Vec::new();
    for f in &fixtures {
        let mut record = |check: &str, outcome: Result<String>, start: Instant| {
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(e) => (false, e.to_string()),
            };
            checks.push(Check {
                name: format!("{}/{check}", f.name),
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            });
        };
        let t = Instant::now();
        let p = match &f.presentation {
            Ok(p) => {
                record("parse", Ok(format!("{} generators", p.generator_count())), t);
                p
            }
            Err(e) => {
                record("parse", Err(e.clone()), t);
                continue;
            }
        };
        let t = Instant::now();
        record("alexander-oracle", alexander_oracle(f, p, tol), t);
        let t = Instant::now();
        record("fox-identity", fox_identity(p, if quick { 100 } else { 1000 }), t);
        let t = Instant::now();
        record("symmetry", symmetry(p, tol), t);
        let t = Instant::now();
        record("abelian-zero", abelian_zero(p, tol), t);
        let t = Instant::now();
        record("factorization", factorization(p, tol), t);
        let t = Instant::now();
        record("cross-oracle", cross(p, tol), t);
        if !quick {
            let t = Instant::now();
            record("conjugation", conjugation(p, tol), t);
            let two = std::iter::once(p)
                .chain(&f.alternatives)
                .find(|q| q.generator_count() == 2);
            if let Some(two) = two {
                let t = Instant::now();
                record("limit", limit(two, tol), t);
            }
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(SelftestPayload {
        quick,
        passed: checks.len() - failed,
        failed,
        checks,
    })
}

fn ensure(ok: bool, detail: String) -> Result<String> {
    if ok {
        Ok(detail)
    } else {
        Err(Error::Unsupported(detail))
    }
}

fn alexander_oracle(f: &Fixture, p: &Presentation, tol: &Tolerances) -> Result<String> {
    let delta = alexander_polynomial_with(p, 1, tol.simplicity)?.delta;
    let mut parts = vec![format!("delta = {delta}")];
    let mut oracles: Vec<(&str, Laurent<i64>)> = Vec::new();
    if let Some(d) = &f.delta {
        oracles.push(("expected", d.clone()));
    }
    if let Some(v) = &f.seifert {
        oracles.push(("seifert", seifert_alexander(v)?));
    }
    for alt in &f.alternatives {
        oracles.push(("alternative", alexander_polynomial_with(alt, 1, tol.simplicity)?.delta));
    }
    for (name, other) in &oracles {
        if *other != delta {
            return Err(Error::Unsupported(format!("{name} gives {other}, Fox gives {delta}")));
        }
        parts.push(format!("{name} agrees"));
    }
    Ok(parts.join("; "))
}

fn random_word(rng: &mut StdRng, gens: usize) -> Word {
    let len = rng.random_range(0..=12);
    Word::new((0..len).map(|_| {
        let g = rng.random_range(1..=gens as i32);
        if rng.random_bool(0.5) {
            g
        } else {
            -g
        }
    }))
}

/// `w - 1 = Σ_j (∂w/∂x_j)(x_j - 1)` on random words.
fn fox_identity(p: &Presentation, samples: usize) -> Result<String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let k = p.generator_count();
    for _ in 0..samples {
        let w = random_word(&mut rng, k);
        let mut rhs = GroupRingElement::zero();
        for j in 1..=k {
            let gen_minus_one = &GroupRingElement::from_word(Word::generator(j)) - &GroupRingElement::one();
            rhs = &rhs + &(&fox_derivative(&w, j) * &gen_minus_one);
        }
        let lhs = &GroupRingElement::from_word(w.clone()) - &GroupRingElement::one();
        if lhs != rhs {
            return Err(Error::Unsupported(format!("fundamental formula fails on {w}")));
        }
    }
    Ok(format!("{samples} words"))
}

fn symmetry(p: &Presentation, tol: &Tolerances) -> Result<String> {
    let data = alexander_polynomial_with(p, 1, tol.simplicity)?;
    let worst = data
        .roots
        .iter()
        .map(|r| symmetry_check(&data, r.value))
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, format!("max symmetry residual {worst:.3e}"))
}

fn abelian_zero(p: &Presentation, tol: &Tolerances) -> Result<String> {
    let scan = bifurcation_points_with(p, tol)?;
    if let Some(f) = scan.failures.first() {
        return Err(Error::Unsupported(format!("root {}: {}", f.root.value, f.error)));
    }
    let mut worst = 0.0f64;
    for b in &scan.points {
        worst = worst.max(abelian_zero_check(b, &scan.alexander)?);
    }
    ensure(
        worst <= 1e-8,
        format!("max |abelian torsion| {worst:.3e} over {} points", scan.points.len()),
    )
}

fn factorization(p: &Presentation, tol: &Tolerances) -> Result<String> {
    let data = alexander_polynomial_with(p, 1, tol.simplicity)?;
    // The triple product has degree 3 span(Δ), so its rounding grows with the
    // span.
    let bound = if data.delta.span() <= 2 { 1e-9 } else { 1e-8 };
    let mut worst = 0.0f64;
    for r in &data.roots {
        let report = factorization_at_reducible_with(p, r.z0, tol.general)?;
        worst = worst.max(report.deviation);
    }
    ensure(worst <= bound, format!("max deviation {worst:.3e} (bound {bound:e})"))
}

fn first_reducible(p: &Presentation, tol: &Tolerances) -> Result<crate::reps::Representation> {
    let data = alexander_polynomial_with(p, 1, tol.simplicity)?;
    let root = data
        .roots
        .first()
        .ok_or_else(|| Error::Unsupported("Δ has no roots".into()))?;
    reducible_nonabelian(root.z0, p)
}

fn cross(p: &Presentation, tol: &Tolerances) -> Result<String> {
    let rep = first_reducible(p, tol)?;
    let points = [
        C64::new(2.0, 1.0),
        C64::new(0.5, 0.4),
        C64::new(-1.3, 0.7),
        C64::new(0.9, -1.6),
    ];
    let report = cross_oracle(&rep, &points)?;
    ensure(
        report.max_relative_error <= tol.general,
        format!(
            "unit {} t^{}, max relative error {:.3e}",
            report.epsilon, report.shift, report.max_relative_error
        ),
    )
}

fn conjugation(p: &Presentation, tol: &Tolerances) -> Result<String> {
    let rep = first_reducible(p, tol)?;
    let mut rng = StdRng::seed_from_u64(SEED);
    let base = wada_invariant_with(&rep, 1, tol)?;
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let other = wada_invariant_with(&rep.conjugate(&random_sl2(&mut rng)), 1, tol)?;
        worst = worst.max(other.numerator.relative_deviation(&base.numerator));
    }
    ensure(worst <= tol.general, format!("max numerator deviation {worst:.3e}"))
}

fn limit(p: &Presentation, tol: &Tolerances) -> Result<String> {
    let scan = bifurcation_points_with(p, tol)?;
    let point = scan
        .points
        .iter()
        .find(|b| b.simple)
        .ok_or_else(|| Error::Unsupported("no simple root".into()))?;
    let e = verify_limit_with(p, point, LimitOptions::default(), tol)?;
    ensure(
        e.relative_error <= LIMIT_AGREEMENT,
        format!(
            "extrapolated {:.9} vs |rhs| {:.9} (relative error {:.3e})",
            e.extrapolated, e.rhs_magnitude, e.relative_error
        ),
    )
}

impl Payload for SelftestPayload {
    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s += &format!(
                "{} {:<32} {:>8.3}s  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.seconds,
                c.detail
            );
        }
        s += &format!("{} passed, {} failed\n", self.passed, self.failed);
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("name,passed,seconds,detail\n");
        for c in &self.checks {
            s += &format!(
                "{},{},{},\"{}\"\n",
                c.name,
                c.passed,
                c.seconds,
                c.detail.replace('"', "'")
            );
        }
        s
    }

    fn residuals(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::new()
    }
}
