//! Command implementations. Each returns a [`Report`]; nothing is printed here.

use motion_harmonics::eigenspace::{
    laplacian_residual, synthesize, EigenFunctionHandle, SphereDensity,
};
use motion_harmonics::positivity::EvaluatorSettings;
use motion_harmonics::seed::subseed;
use motion_harmonics::spherical::{
    phi_radial_escalated, psi_monte_carlo_many, AccuracyWarning, CrossoverTable, CONSTANTS_ENV,
};
use motion_harmonics::{
    bochner_test, boundedness_classify, classify::transitive_groups, parse_model, phi_asymptotic,
    phi_eval, phi_radial, BochnerConfig, BoundednessConfig, Branch, LogComplex, PVector, PdVerdict,
    SpectralParam, Verdict,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{Cell, Report};
use crate::parse::ComplexArg;
use crate::{
    AsymCompare, Bochner, ClassifyGroups, EigenCheck, EvalPhi, Global, PsiMc, SweepBounded,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] motion_harmonics::Error),
}

impl CliError {
    /// 1 for numerical failures, 2 for anything the caller can fix.
    pub fn exit_code(&self) -> u8 {
        use motion_harmonics::Error as E;
        match self {
            CliError::Core(E::ErrorCeiling { .. } | E::NotHermitian { .. }) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn resolved(g: &Global, samples: Option<usize>, extra: Value) -> Value {
    let mut v = json!({
        "format": g.format,
        "seed": g.seed,
        "samples": samples,
        "nodes": g.nodes,
        "tol": g.tol,
        "strict": g.strict,
    });
    let (Value::Object(base), Value::Object(extra)) = (&mut v, extra) else {
        unreachable!("config fragments are objects")
    };
    base.extend(extra);
    v
}

/// Crossover constants in effect, recorded in the header of φ-based runs.
fn constants() -> Result<Value> {
    let table = CrossoverTable::current()?;
    let source = std::env::var(CONSTANTS_ENV)
        .ok()
        .filter(|p| !p.is_empty())
        .unwrap_or_else(|| "embedded".into());
    Ok(json!({ "source": source, "table": table }))
}

fn check_tol(g: &Global) -> Result<()> {
    match g.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            Err(invalid(format!("--tol must be positive, got {t}")))
        }
        _ => Ok(()),
    }
}

fn exceeds(g: &Global, err: f64) -> bool {
    g.tol.is_some_and(|t| !(err <= t))
}

fn complexes(zs: &[ComplexArg]) -> Vec<Complex64> {
    zs.iter().map(|z| z.0).collect()
}

fn warning_name(w: Option<AccuracyWarning>) -> Cell {
    match w {
        None => Cell::Empty,
        Some(AccuracyWarning::UnderResolved { .. }) => "under-resolved".into(),
        Some(AccuracyWarning::NotConverged { .. }) => "not-converged".into(),
    }
}

fn kebab<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_value(x)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn eval_phi(g: &Global, a: &EvalPhi) -> Result<Report> {
    check_tol(g)?;
    let config = resolved(
        g,
        None,
        json!({ "n": a.n, "s": complexes(&a.s), "r": a.r.0, "constants": constants()? }),
    );
    let mut rep = Report::new(
        "eval-phi",
        config,
        &[
            "n", "re_s", "im_s", "r", "log_mag", "phase", "re", "im", "branch", "nodes", "err_est",
            "warning",
        ],
    );
    for &n in &a.n {
        for s in complexes(&a.s) {
            for &r in &a.r.0 {
                let (value, branch, err, nodes, warning) = match g.nodes {
                    Some(nodes) => {
                        let e = phi_radial(n, s, r, nodes)?;
                        (e.value, Branch::Quadrature, e.err_est, e.nodes, e.warning)
                    }
                    None => {
                        let e = phi_eval(n, s, r)?;
                        (e.value, e.branch, e.err_est, e.nodes, e.warning)
                    }
                };
                rep.flagged |= warning.is_some() || exceeds(g, err);
                let z = value.to_complex();
                rep.push(vec![
                    n.into(),
                    s.re.into(),
                    s.im.into(),
                    r.into(),
                    value.log_magnitude.into(),
                    value.phase.into(),
                    z.re.into(),
                    z.im.into(),
                    branch.as_str().into(),
                    nodes.into(),
                    err.into(),
                    warning_name(warning),
                ]);
            }
        }
    }
    Ok(rep)
}

pub fn asym_compare(g: &Global, a: &AsymCompare) -> Result<Report> {
    check_tol(g)?;
    let config = resolved(
        g,
        None,
        json!({ "n": a.n, "s": complexes(&a.s), "r": a.r.0 }),
    );
    let mut rep = Report::new(
        "asym-compare",
        config,
        &[
            "n",
            "re_s",
            "im_s",
            "r",
            "quad_log_mag",
            "quad_phase",
            "asym_log_mag",
            "asym_phase",
            "rel_diff",
            "err_est",
        ],
    );
    let mut worst = 0.0f64;
    for &n in &a.n {
        for s in complexes(&a.s) {
            for &r in &a.r.0 {
                let q = match g.nodes {
                    Some(nodes) => phi_radial(n, s, r, nodes)?,
                    None => phi_radial_escalated(n, s, r)?,
                };
                let asym: LogComplex = phi_asymptotic(n, s, r)?;
                let d = q.value.relative_distance(asym);
                worst = worst.max(d);
                rep.flagged |= exceeds(g, d);
                rep.push(vec![
                    n.into(),
                    s.re.into(),
                    s.im.into(),
                    r.into(),
                    q.value.log_magnitude.into(),
                    q.value.phase.into(),
                    asym.log_magnitude.into(),
                    asym.phase.into(),
                    d.into(),
                    q.err_est.into(),
                ]);
            }
        }
    }
    rep.summary.insert("max_rel_diff".into(), json!(worst));
    Ok(rep)
}

pub fn sweep_bounded(g: &Global, a: &SweepBounded) -> Result<Report> {
    let model = parse_model(&a.model)?;
    let lambda = SpectralParam(complexes(&a.lambda));
    let cfg = BoundednessConfig {
        grid: a.grid.0.clone(),
        threshold: a.threshold,
        samples: g.samples.unwrap_or(BoundednessConfig::default().samples),
        seed: g.seed,
        std_error_ceiling: a.ceiling,
    };
    let config = resolved(
        g,
        Some(cfg.samples),
        json!({
            "model": model.name(),
            "lambda": lambda.0,
            "grid": cfg.grid,
            "threshold": cfg.threshold,
            "ceiling": cfg.std_error_ceiling,
            "constants": constants()?,
        }),
    );
    let report = boundedness_classify(&model, &lambda, &cfg)?;
    let mut rep = Report::new(
        "sweep-bounded",
        config,
        &[
            "direction",
            "t",
            "log_mag",
            "phase",
            "abs",
            "err",
            "evaluator",
            "witness",
        ],
    );
    rep.summary.insert("verdict".into(), json!(report.verdict));
    rep.summary.insert(
        "witness".into(),
        report.witness.map_or(
            Value::Null,
            |w| json!({ "direction": w.direction, "t": w.t }),
        ),
    );
    rep.flagged = report.verdict == Verdict::Inconclusive;
    for e in &report.evidence {
        rep.push(vec![
            e.direction.into(),
            e.t.into(),
            e.value.log_magnitude.into(),
            e.value.phase.into(),
            e.value.abs().into(),
            e.err.into(),
            kebab(&e.evaluator).into(),
            e.witness.into(),
        ]);
    }
    Ok(rep)
}

pub fn bochner(g: &Global, a: &Bochner) -> Result<Report> {
    let model = parse_model(&a.model)?;
    let lambda = SpectralParam(complexes(&a.lambda));
    let defaults = BochnerConfig::default();
    let cfg = BochnerConfig {
        trials: a.trials,
        m: a.m,
        seed: g.seed,
        margin: a.margin,
        spacing: a.spacing,
        scale: a.scale,
        probe_grid: defaults.probe_grid,
        evaluator: EvaluatorSettings {
            samples: g.samples.unwrap_or(defaults.evaluator.samples),
            seed: g.seed,
            ..defaults.evaluator
        },
    };
    let config = resolved(
        g,
        Some(cfg.evaluator.samples),
        json!({
            "model": model.name(),
            "lambda": lambda.0,
            "trials": cfg.trials,
            "m": cfg.m,
            "margin": cfg.margin,
            "spacing": cfg.spacing,
            "scale": cfg.scale,
            "probe_grid": cfg.probe_grid,
            "ceiling": cfg.evaluator.std_error_ceiling,
            "constants": constants()?,
        }),
    );
    let report = bochner_test(&model, &lambda, &cfg)?;
    let mut rep = Report::new(
        "bochner",
        config,
        &[
            "verdict",
            "trials_run",
            "probe_t",
            "probe_abs",
            "probe_err",
            "min_eigenvalue",
            "max_eigenvalue",
            "tolerance_used",
            "error_bound",
            "hermitian_defect",
        ],
    );
    rep.summary.insert("verdict".into(), json!(report.verdict));
    rep.flagged = report.verdict == PdVerdict::Inconclusive;
    let p = report.probe_witness;
    let w = report.worst.as_ref();
    rep.push(vec![
        kebab(&report.verdict).into(),
        report.trials_run.into(),
        p.map(|p| p.t).into(),
        p.map(|p| p.value.abs()).into(),
        p.map(|p| p.err).into(),
        w.map(|w| w.min_eigenvalue).into(),
        w.map(|w| w.max_eigenvalue).into(),
        w.map(|w| w.tolerance_used).into(),
        w.map(|w| w.error_bound).into(),
        w.map(|w| w.hermitian_defect).into(),
    ]);
    Ok(rep)
}

fn load_density(a: &EigenCheck, seed: u64) -> Result<(SphereDensity, Value)> {
    let n = a.n.unwrap_or(2);
    let (density, source) = match a.density.split_once(':') {
        _ if a.density == "random" => (
            SphereDensity::random(n, a.budget, seed)?,
            json!({ "random": seed }),
        ),
        Some(("random", s)) => {
            let s: u64 = s
                .parse()
                .map_err(|_| invalid(format!("bad density seed `{s}`")))?;
            (
                SphereDensity::random(n, a.budget, s)?,
                json!({ "random": s }),
            )
        }
        Some(("constant", c)) => {
            let c: ComplexArg = c.parse().map_err(CliError::Invalid)?;
            (
                SphereDensity::constant(n, a.budget, c.0)?,
                json!({ "constant": c.0 }),
            )
        }
        _ => {
            let text = std::fs::read_to_string(&a.density)
                .map_err(|e| invalid(format!("cannot read density {}: {e}", a.density)))?;
            let d = SphereDensity::from_json(&text)?;
            if a.n.is_some_and(|n| n != d.n()) {
                return Err(invalid(format!(
                    "--n {n} but the density file has n = {}",
                    d.n()
                )));
            }
            (d, json!({ "file": a.density }))
        }
    };
    Ok((density, source))
}

/// Uniform in [−1, 1) from a 64-bit hash.
fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

pub fn eigen_check(g: &Global, a: &EigenCheck) -> Result<Report> {
    check_tol(g)?;
    if !(a.h > 0.0 && a.h.is_finite()) {
        return Err(invalid(format!("--h must be positive, got {}", a.h)));
    }
    let (density, source) = load_density(a, g.seed)?;
    let n = density.n();
    let lambda = a.lambda.0;
    let xs: Vec<Vec<f64>> = if a.x.is_empty() {
        // keep the stencil inside the density's resolution budget
        let radius = if lambda.norm() > 0.0 {
            (0.5 * density.budget() / lambda.norm()).min(3.0)
        } else {
            3.0
        };
        (0..a.points)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        radius * unit(subseed(subseed(g.seed, i as u64), j as u64))
                            / (n as f64).sqrt()
                    })
                    .collect()
            })
            .collect()
    } else {
        a.x.iter().map(|x| x.0.clone()).collect()
    };
    let config = resolved(
        g,
        None,
        json!({
            "n": n,
            "lambda": lambda,
            "density": source,
            "budget": density.budget(),
            "x": xs,
            "h": a.h,
        }),
    );
    let mut columns: Vec<String> = (0..n).map(|i| format!("x_{i}")).collect();
    columns.extend(
        [
            "re_f",
            "im_f",
            "err_est",
            "residual_half",
            "order",
            "rel_residual",
        ]
        .map(String::from),
    );
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut rep = Report::new("eigen-check", config, &cols);
    let handle = EigenFunctionHandle::new(lambda, density);
    let mut worst_rel = 0.0f64;
    for x in &xs {
        let f = synthesize(&handle, x)?;
        let r1 = laplacian_residual(&handle, x, a.h)?;
        let r2 = laplacian_residual(&handle, x, 0.5 * a.h)?;
        let order = (r1 / r2).log2();
        let rel = r1 / f.norm().max(f64::MIN_POSITIVE);
        worst_rel = worst_rel.max(rel);
        rep.flagged |= exceeds(g, rel);
        let mut row: Vec<Cell> = x.iter().map(|v| Cell::Real(*v)).collect();
        row.extend([
            f.re.into(),
            f.im.into(),
            r1.into(),
            r2.into(),
            order.into(),
            rel.into(),
        ]);
        rep.push(row);
    }
    rep.summary
        .insert("max_rel_residual".into(), json!(worst_rel));
    Ok(rep)
}

pub fn classify_groups(g: &Global, a: &ClassifyGroups) -> Result<Report> {
    let entries = transitive_groups(a.n)?;
    let config = resolved(g, None, json!({ "n": a.n }));
    let mut rep = Report::new(
        "classify-groups",
        config,
        &["case", "n_predicate", "K0", "group", "extension", "sampler"],
    );
    for e in &entries {
        for (ext, group) in e.extensions.iter().zip(e.groups()) {
            rep.push(vec![
                e.case.label().into(),
                e.n_predicate.as_str().into(),
                e.identity_component.as_str().into(),
                group.into(),
                ext.descriptor().into(),
                e.sampler_available.into(),
            ]);
        }
    }
    rep.summary.insert("entries".into(), json!(entries.len()));
    Ok(rep)
}

pub fn psi_mc(g: &Global, a: &PsiMc) -> Result<Report> {
    check_tol(g)?;
    let model = parse_model(&a.model)?;
    let lambda = SpectralParam(complexes(&a.lambda));
    let samples = g.samples.unwrap_or(100_000);
    let ys: Vec<PVector> = match (&a.y[..], &a.t) {
        ([], Some(t)) => {
            if a.direction >= model.rank() {
                return Err(invalid(format!(
                    "--direction {} out of range for rank {}",
                    a.direction,
                    model.rank()
                )));
            }
            let mut h = vec![0.0; model.rank()];
            h[a.direction] = 1.0;
            let dir = model.embed_a(&h)?;
            t.0.iter().map(|t| dir.scaled(*t)).collect()
        }
        ([], None) => return Err(invalid("give points with --y or a ray grid with --t")),
        (ys, None) => ys.iter().map(|y| PVector(y.0.clone())).collect(),
        (_, Some(_)) => return Err(invalid("--y and --t are mutually exclusive")),
    };
    let config = resolved(
        g,
        Some(samples),
        json!({
            "model": model.name(),
            "lambda": lambda.0,
            "y": ys.iter().map(|y| y.0.clone()).collect::<Vec<_>>(),
        }),
    );
    let est = psi_monte_carlo_many(&model, &lambda, &ys, samples, g.seed)?;
    let dim = model.dim_p();
    let mut columns: Vec<String> = (0..dim).map(|i| format!("y_{i}")).collect();
    columns.extend(["re", "im", "abs", "std_error", "samples"].map(String::from));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut rep = Report::new("psi-mc", config, &cols);
    for (y, e) in ys.iter().zip(est) {
        rep.flagged |= exceeds(g, e.std_error);
        let mut row: Vec<Cell> = y.0.iter().map(|v| Cell::Real(*v)).collect();
        row.extend([
            e.value.re.into(),
            e.value.im.into(),
            e.value.norm().into(),
            e.std_error.into(),
            e.samples.into(),
        ]);
        rep.push(row);
    }
    Ok(rep)
}
