use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use super::presets::preset;
use super::report::{Emit, InputEcho, Payload};
use super::selftest;
use super::{tolerances, CliError, Command, Common, InputArgs, RepArgs, RepKind};
use crate::alexander::{alexander_polynomial_with, symmetry_check, AlexanderRoot};
use crate::bifurcation::{
    abelian_zero_check, bifurcation_points_with, verify_limit_with, BifurcationPoint, LimitExperiment, LimitOptions,
    PointFailure,
};
use crate::config::Tolerances;
use crate::laurent::Laurent;
use crate::reps::{abelian_rep, reducible_nonabelian, riley_family, RepFile, Representation};
use crate::torsion::{
    factorization_at_reducible_with, fit_unit_multiple, lambda_torsion_with, triple_product, wada_invariant_with,
    FactorizationReport, LambdaTorsion, UnitFit, WadaInvariant,
};
use crate::words::{normalize_presentation, parse_presentation, Braid, Presentation, DEFAULT_TIETZE_BUDGET};
use crate::{cplx, Error, C64};

/// Relative agreement required between the extrapolated limit and `|rhs|`.
pub(crate) const LIMIT_AGREEMENT: f64 = 1e-3;

pub(super) fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    match command {
        Command::Alexander { common, deleted_column } => {
            let ctx = Context::new(&common)?;
            let payload = alexander(&ctx, deleted_column)?;
            ctx.emit("alexander", start, out, &payload)?;
            Ok(0)
        }
        Command::Bifurcations { common } => {
            let ctx = Context::new(&common)?;
            let payload = bifurcations(&ctx)?;
            for f in &payload.failures {
                let _ = writeln!(
                    err,
                    "warning: root {} failed: {}",
                    cplx::to_pair(f.root.value)[0],
                    f.error
                );
            }
            ctx.emit("bifurcations", start, out, &payload)?;
            Ok(0)
        }
        Command::Wada {
            common,
            rep,
            deleted_column,
        } => {
            let ctx = Context::new(&common)?;
            let payload = wada(&ctx, &rep, deleted_column)?;
            ctx.emit("wada", start, out, &payload)?;
            Ok(0)
        }
        Command::LambdaTorsion { common, rep } => {
            let ctx = Context::new(&common)?;
            let (representation, info) = choose_rep(&ctx, &rep)?;
            let torsion = lambda_torsion_with(&representation, &ctx.tol)?;
            let payload = LambdaPayload {
                magnitude: torsion.value.norm(),
                representation: info,
                torsion,
            };
            ctx.emit("lambda-torsion", start, out, &payload)?;
            Ok(0)
        }
        Command::Factorize { common, root_index } => {
            let ctx = Context::new(&common)?;
            let payload = factorize(&ctx, root_index)?;
            ctx.emit("factorize", start, out, &payload)?;
            for f in &payload.failures {
                let _ = writeln!(err, "error: root {}: {}", f.root_index, f.error);
            }
            Ok(if payload.failures.is_empty() { 0 } else { 1 })
        }
        Command::VerifyLimit {
            common,
            steps,
            offset,
            root_index,
            csv,
        } => {
            let ctx = Context::new(&common)?;
            let payload = verify_limit(&ctx, steps as usize, offset, root_index)?;
            if let Some(path) = csv {
                std::fs::write(&path, payload.csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            ctx.emit("verify-limit", start, out, &payload)?;
            if !payload.agrees {
                let _ = writeln!(
                    err,
                    "error: extrapolated limit differs from |rhs| by {:.3e} (allowed {LIMIT_AGREEMENT:e})",
                    payload.experiment.relative_error
                );
                return Ok(1);
            }
            Ok(0)
        }
        Command::Selftest {
            output,
            quick,
            fixtures,
        } => {
            let tol = tolerances(&output)?;
            let payload = selftest::run(&tol, quick, fixtures.as_deref())?;
            let emit = Emit {
                format: output.format,
                command: "selftest",
                input: None,
                tolerances: &tol,
                elapsed: (!output.no_timing).then(|| start.elapsed()),
            };
            emit.write(out, &payload)?;
            for c in payload.checks.iter().filter(|c| !c.passed) {
                let _ = writeln!(err, "FAILED {}: {}", c.name, c.detail);
            }
            Ok(if payload.failed == 0 { 0 } else { 1 })
        }
    }
}

struct Context {
    echo: InputEcho,
    presentation: Presentation,
    two_generator: Option<Presentation>,
    tol: Tolerances,
    format: super::Format,
    timing: bool,
}

impl Context {
    fn new(common: &Common) -> Result<Self, CliError> {
        let tol = tolerances(&common.output)?;
        let (kind, value, presentation, two_generator) = load(&common.input)?;
        let presentation = if presentation.is_meridional() {
            presentation
        } else {
            normalize_presentation(&presentation, DEFAULT_TIETZE_BUDGET)?
        };
        let two_generator =
            two_generator.or_else(|| (presentation.generator_count() == 2).then(|| presentation.clone()));
        Ok(Context {
            echo: InputEcho {
                kind,
                value,
                presentation: presentation.to_text(),
            },
            presentation,
            two_generator,
            tol,
            format: common.output.format,
            timing: !common.output.no_timing,
        })
    }

    fn two_generator(&self) -> Result<&Presentation, CliError> {
        self.two_generator.as_ref().ok_or_else(|| {
            Error::Unsupported(format!(
                "this command needs a 2-generator presentation, got {} generators",
                self.presentation.generator_count()
            ))
            .into()
        })
    }

    fn emit<P: Payload>(
        &self,
        command: &str,
        start: Instant,
        out: &mut dyn Write,
        payload: &P,
    ) -> Result<(), CliError> {
        Emit {
            format: self.format,
            command,
            input: Some(&self.echo),
            tolerances: &self.tol,
            elapsed: self.timing.then(|| start.elapsed()),
        }
        .write(out, payload)?;
        Ok(())
    }
}

type Loaded = (&'static str, String, Presentation, Option<Presentation>);

fn load(input: &InputArgs) -> Result<Loaded, CliError> {
    if let Some(path) = &input.input {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let p = parse_presentation(&text)?;
        return Ok(("file", path.display().to_string(), p, None));
    }
    if let Some(braid) = &input.braid {
        let b: Braid = braid.parse().map_err(|e: Error| match e {
            Error::Parse { .. } => CliError::Usage(format!("invalid --braid: {e}")),
            other => CliError::Compute(other),
        })?;
        return Ok(("braid", braid.clone(), b.to_presentation()?, None));
    }
    let name = input.preset.as_deref().expect("clap enforces one input source");
    let fixture = preset(name).expect("clap restricts preset names");
    Ok((
        "preset",
        name.to_string(),
        fixture.braid_presentation()?,
        Some(fixture.two_bridge_presentation()?),
    ))
}

#[derive(Clone, Debug, Serialize)]
struct RepInfo {
    kind: String,
    #[serde(with = "cplx::option", skip_serializing_if = "Option::is_none")]
    z: Option<C64>,
    #[serde(with = "cplx::option", skip_serializing_if = "Option::is_none")]
    s: Option<C64>,
    #[serde(with = "cplx::option", skip_serializing_if = "Option::is_none")]
    u: Option<C64>,
    generators: usize,
    residual: f64,
}

fn root_z0(p: &Presentation, index: usize, tol: &Tolerances) -> Result<C64, CliError> {
    let data = alexander_polynomial_with(p, 1, tol.simplicity)?;
    data.roots.get(index).map(|r| r.z0).ok_or_else(|| {
        CliError::Usage(format!(
            "--root-index {index} out of range: Δ has {} roots",
            data.roots.len()
        ))
    })
}

fn choose_rep(ctx: &Context, args: &RepArgs) -> Result<(Representation, RepInfo), CliError> {
    let kind = match args.rep.as_str() {
        "abelian" => Some(RepKind::Abelian),
        "reducible" => Some(RepKind::Reducible),
        "riley" => Some(RepKind::Riley),
        _ => None,
    };
    let info = |kind: &str, rep: &Representation, z, s, u| RepInfo {
        kind: kind.to_string(),
        z,
        s,
        u,
        generators: rep.images().len(),
        residual: rep.residual(),
    };
    let rep_and_info = match kind {
        Some(RepKind::Abelian) => {
            let z = args
                .z
                .ok_or_else(|| CliError::Usage("--rep abelian needs --z".into()))?;
            let rep = abelian_rep(z, &ctx.presentation)?;
            let i = info("abelian", &rep, Some(z), None, None);
            (rep, i)
        }
        Some(RepKind::Reducible) => {
            let z0 = match args.z {
                Some(z) => z,
                None => root_z0(&ctx.presentation, args.root_index, &ctx.tol)?,
            };
            let rep = reducible_nonabelian(z0, &ctx.presentation)?;
            let i = info("reducible", &rep, Some(z0), None, None);
            (rep, i)
        }
        Some(RepKind::Riley) => {
            let (s, u) = match (args.s, args.u) {
                (Some(s), Some(u)) => (s, u),
                _ => return Err(CliError::Usage("--rep riley needs --s and --u".into())),
            };
            let rep = riley_family(ctx.two_generator()?, s, u)?.validated(ctx.tol.general)?;
            let i = info("riley", &rep, None, Some(s), Some(u));
            (rep, i)
        }
        None => {
            let text = std::fs::read_to_string(&args.rep).map_err(|e| Error::Io(format!("{}: {e}", args.rep)))?;
            let file: RepFile = serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", args.rep)))?;
            let p = if file.images.len() == ctx.presentation.generator_count() {
                &ctx.presentation
            } else {
                ctx.two_generator()?
            };
            let rep = Representation::from_file(p, &file)?.validated(ctx.tol.general)?;
            let i = info(&args.rep, &rep, None, None, None);
            (rep, i)
        }
    };
    Ok(rep_and_info)
}

#[derive(Serialize)]
struct AlexanderPayload {
    delta: Laurent<i64>,
    roots: Vec<AlexanderRoot>,
    simplicity_threshold: f64,
    deleted_column: usize,
    symmetry_residuals: Vec<f64>,
    root_residuals: Vec<f64>,
}

fn alexander(ctx: &Context, deleted: usize) -> Result<AlexanderPayload, CliError> {
    let data = alexander_polynomial_with(&ctx.presentation, deleted, ctx.tol.simplicity)?;
    let symmetry_residuals = data.roots.iter().map(|r| symmetry_check(&data, r.value)).collect();
    let root_residuals = data.roots.iter().map(|r| data.relative_value(r.value)).collect();
    Ok(AlexanderPayload {
        delta: data.delta,
        roots: data.roots,
        simplicity_threshold: data.simplicity_threshold,
        deleted_column: deleted,
        symmetry_residuals,
        root_residuals,
    })
}

fn fmt_c(z: C64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

impl Payload for AlexanderPayload {
    fn text(&self) -> String {
        let mut s = format!("delta: {}\n", self.delta);
        for (r, sym) in self.roots.iter().zip(&self.symmetry_residuals) {
            s += &format!(
                "root {} simple={} z0={} symmetry={sym:.3e}\n",
                fmt_c(r.value),
                r.simple,
                fmt_c(r.z0)
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("degree,coefficient\n");
        for (i, c) in self.delta.coeffs().iter().enumerate() {
            s += &format!("{},{c}\n", self.delta.min_degree() + i as i64);
        }
        s
    }

    fn residuals(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            ("root", max_of(self.root_residuals.iter().copied())),
            ("symmetry", max_of(self.symmetry_residuals.iter().copied())),
        ])
    }
}

#[derive(Serialize)]
struct PointView {
    #[serde(flatten)]
    point: BifurcationPoint,
    abelian_zero: f64,
}

#[derive(Serialize)]
struct BifurcationsPayload {
    delta: Laurent<i64>,
    points: Vec<PointView>,
    failures: Vec<PointFailure>,
}

fn bifurcations(ctx: &Context) -> Result<BifurcationsPayload, CliError> {
    let scan = bifurcation_points_with(&ctx.presentation, &ctx.tol)?;
    let points = scan
        .points
        .iter()
        .map(|b| {
            Ok(PointView {
                abelian_zero: abelian_zero_check(b, &scan.alexander)?,
                point: b.clone(),
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(BifurcationsPayload {
        delta: scan.alexander.delta.clone(),
        points,
        failures: scan.failures,
    })
}

impl Payload for BifurcationsPayload {
    fn text(&self) -> String {
        let mut s = format!("delta: {}\n", self.delta);
        for p in &self.points {
            let rhs = p.point.rhs.map_or("n/a".to_string(), |r| fmt_c(r.value));
            s += &format!(
                "z0 {} simple={} rhs={} |abelian torsion|={:.3e}\n",
                fmt_c(p.point.z0),
                p.point.simple,
                rhs,
                p.abelian_zero
            );
        }
        for f in &self.failures {
            s += &format!("failed root {}: {}\n", fmt_c(f.root.value), f.error);
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("root_re,root_im,z0_re,z0_im,simple,rhs_re,rhs_im,abelian_zero\n");
        for p in &self.points {
            let rhs = p.point.rhs.map_or(C64::new(f64::NAN, f64::NAN), |r| r.value);
            s += &format!(
                "{},{},{},{},{},{},{},{}\n",
                p.point.root.re,
                p.point.root.im,
                p.point.z0.re,
                p.point.z0.im,
                p.point.simple,
                rhs.re,
                rhs.im,
                p.abelian_zero
            );
        }
        s
    }

    fn residuals(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            ("abelian_zero", max_of(self.points.iter().map(|p| p.abelian_zero))),
            (
                "character",
                max_of(self.points.iter().map(|p| p.point.character_deviation)),
            ),
            (
                "relator",
                max_of(self.points.iter().map(|p| p.point.representation.residual())),
            ),
        ])
    }
}

#[derive(Serialize)]
struct WadaPayload {
    representation: RepInfo,
    #[serde(flatten)]
    wada: WadaInvariant,
    /// `ε t^m` against `Δ(t) Δ(t e^{2z}) Δ(t e^{-2z})` for abelian and
    /// reducible representations.
    triple_product_fit: Option<UnitFit>,
}

fn wada(ctx: &Context, args: &RepArgs, deleted: usize) -> Result<WadaPayload, CliError> {
    let (rep, info) = choose_rep(ctx, args)?;
    let wada = wada_invariant_with(&rep, deleted, &ctx.tol)?;
    let triple_product_fit = match (info.kind.as_str(), info.z) {
        ("abelian" | "reducible", Some(z)) => {
            let data = alexander_polynomial_with(rep.presentation(), 1, ctx.tol.simplicity)?;
            fit_unit_multiple(&wada.numerator, &triple_product(&data.delta, z), ctx.tol.general).ok()
        }
        _ => None,
    };
    Ok(WadaPayload {
        representation: info,
        wada,
        triple_product_fit,
    })
}

fn laurent_csv(columns: &[(&str, &Laurent<C64>)]) -> String {
    let lo = columns
        .iter()
        .filter(|c| !c.1.is_zero())
        .map(|c| c.1.min_degree())
        .min()
        .unwrap_or(0);
    let hi = columns
        .iter()
        .filter(|c| !c.1.is_zero())
        .map(|c| c.1.max_degree())
        .max()
        .unwrap_or(-1);
    let mut s = String::from("degree");
    for (name, _) in columns {
        s += &format!(",{name}_re,{name}_im");
    }
    s.push('\n');
    for d in lo..=hi {
        s += &d.to_string();
        for (_, p) in columns {
            let c = p.coeff(d);
            s += &format!(",{},{}", c.re, c.im);
        }
        s.push('\n');
    }
    s
}

impl Payload for WadaPayload {
    fn text(&self) -> String {
        let mut s = format!(
            "representation: {} (residual {:.3e})\nnumerator: {}\ndenominator: {}\n",
            self.representation.kind, self.representation.residual, self.wada.numerator, self.wada.denominator
        );
        if let Some(fit) = &self.triple_product_fit {
            s += &format!(
                "triple product fit: epsilon={} m={} deviation={:.3e}\n",
                fit.epsilon, fit.shift, fit.deviation
            );
        }
        s
    }

    fn csv(&self) -> String {
        laurent_csv(&[
            ("numerator", &self.wada.numerator),
            ("denominator", &self.wada.denominator),
        ])
    }

    fn residuals(&self) -> BTreeMap<&'static str, f64> {
        let mut m = BTreeMap::from([
            ("denominator", self.wada.denominator_deviation),
            ("relator", self.representation.residual),
        ]);
        if let Some(fit) = &self.triple_product_fit {
            m.insert("triple_product", fit.deviation);
        }
        m
    }
}

#[derive(Serialize)]
struct LambdaPayload {
    representation: RepInfo,
    #[serde(flatten)]
    torsion: LambdaTorsion,
    magnitude: f64,
}

impl Payload for LambdaPayload {
    fn text(&self) -> String {
        format!(
            "representation: {} (residual {:.3e})\nlambda torsion (up to sign): {}\nmagnitude: {:.12}\n",
            self.representation.kind,
            self.representation.residual,
            fmt_c(self.torsion.value),
            self.magnitude
        )
    }

    fn csv(&self) -> String {
        format!(
            "value_re,value_im,magnitude\n{},{},{}\n",
            self.torsion.value.re, self.torsion.value.im, self.magnitude
        )
    }

    fn residuals(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([("relator", self.representation.residual)])
    }
}

#[derive(Serialize)]
struct FactorizeFailure {
    root_index: usize,
    #[serde(with = "cplx")]
    z0: C64,
    error: String,
}

#[derive(Serialize)]
struct FactorizePayload {
    delta: Laurent<i64>,
    reports: Vec<FactorizationReport>,
    failures: Vec<FactorizeFailure>,
}

fn factorize(ctx: &Context, only: Option<usize>) -> Result<FactorizePayload, CliError> {
    let data = alexander_polynomial_with(&ctx.presentation, 1, ctx.tol.simplicity)?;
    let indices: Vec<usize> = match only {
        Some(i) if i >= data.roots.len() => {
            return Err(CliError::Usage(format!(
                "--root-index {i} out of range: Δ has {} roots",
                data.roots.len()
            )))
        }
        Some(i) => vec![i],
        None => (0..data.roots.len()).collect(),
    };
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for i in indices {
        let z0 = data.roots[i].z0;
        match factorization_at_reducible_with(&ctx.presentation, z0, ctx.tol.general) {
            Ok(r) => reports.push(r),
            Err(e) => failures.push(FactorizeFailure {
                root_index: i,
                z0,
                error: e.to_string(),
            }),
        }
    }
    Ok(FactorizePayload {
        delta: data.delta,
        reports,
        failures,
    })
}

impl Payload for FactorizePayload {
    fn text(&self) -> String {
        let mut s = format!("delta: {}\n", self.delta);
        for r in &self.reports {
            s += &format!(
                "z0 {}: epsilon={} m={} deviation={:.3e}\n",
                fmt_c(r.z0),
                r.epsilon,
                r.shift,
                r.deviation
            );
        }
        for f in &self.failures {
            s += &format!("z0 {}: FAILED {}\n", fmt_c(f.z0), f.error);
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("z0_re,z0_im,epsilon,shift,deviation\n");
        for r in &self.reports {
            s += &format!("{},{},{},{},{}\n", r.z0.re, r.z0.im, r.epsilon, r.shift, r.deviation);
        }
        s
    }

    fn residuals(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([("factorization", max_of(self.reports.iter().map(|r| r.deviation)))])
    }
}

#[derive(Serialize)]
struct VerifyLimitPayload {
    root_index: usize,
    #[serde(flatten)]
    experiment: LimitExperiment,
    agreement_tolerance: f64,
    agrees: bool,
}

fn verify_limit(ctx: &Context, steps: usize, offset: f64, root_index: usize) -> Result<VerifyLimitPayload, CliError> {
    let p = ctx.two_generator()?;
    let scan = bifurcation_points_with(p, &ctx.tol)?;
    let root = scan.alexander.roots.get(root_index).ok_or_else(|| {
        CliError::Usage(format!(
            "--root-index {root_index} out of range: Δ has {} roots",
            scan.alexander.roots.len()
        ))
    })?;
    let point = scan
        .points
        .iter()
        .find(|b| b.z0 == root.z0)
        .ok_or_else(|| Error::Continuation(format!("no reducible representation at root {root_index}")))?;
    let opts = LimitOptions {
        steps,
        start_offset: offset,
        ..LimitOptions::default()
    };
    let experiment = verify_limit_with(p, point, opts, &ctx.tol)?;
    Ok(VerifyLimitPayload {
        root_index,
        agrees: experiment.relative_error <= LIMIT_AGREEMENT,
        experiment,
        agreement_tolerance: LIMIT_AGREEMENT,
    })
}

impl Payload for VerifyLimitPayload {
    fn text(&self) -> String {
        let e = &self.experiment;
        let mut s = format!("z0: {}\n", fmt_c(e.z0));
        for st in &e.steps {
            let t = st.torsion.map_or("n/a".to_string(), |t| format!("{t:.12}"));
            s += &format!(
                "offset {:.3e} u={} residual={:.1e} margin={:.1e} |torsion|={t}\n",
                st.offset,
                fmt_c(st.u),
                st.residual,
                st.commutator_margin
            );
        }
        s += &format!(
            "extrapolated: {:.12}\n|rhs|: {:.12}\nrelative error: {:.3e}\nmonotone: {}\nirreducible: {}\n",
            e.extrapolated, e.rhs_magnitude, e.relative_error, e.monotone, e.irreducible
        );
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("offset,distance,u_re,u_im,residual,commutator_margin,torsion\n");
        for st in &self.experiment.steps {
            let t = st.torsion.map_or(String::new(), |t| t.to_string());
            s += &format!(
                "{},{},{},{},{},{},{t}\n",
                st.offset, st.distance, st.u.re, st.u.im, st.residual, st.commutator_margin
            );
        }
        s
    }

    fn residuals(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            ("limit", self.experiment.relative_error),
            ("relator", max_of(self.experiment.steps.iter().map(|s| s.residual))),
        ])
    }
}
