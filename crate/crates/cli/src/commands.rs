//! One function per subcommand.

use serde::Serialize;
use serde_json::{json, Value};

use reflpos::catalog::{self, Flag, RN_HALF_WIDTH, SYNTH_TOL};
use reflpos::diffcalc::{bernstein_check, completely_monotone_check, hankel_check};
use reflpos::kernelcheck::{cnd_check, gram_minus, gram_plus, psd_check, schoenberg_check};
use reflpos::levykhin::{self, synth_bernstein, synth_increasing, synth_interval, synth_reflection_negative};
use reflpos::reflection::{self, default_hs, polya_check, thm59_check};
use reflpos::{
    BernsteinRep, Error, FuncHandle, KernelGram, KernelKind, LKIncreasingRep, LKIntervalRep, Measure, PositivityVerdict,
    Verdict,
};

use crate::args::{AnalyzeForm, Command, GridArgs, KernelChoice, SynthForm};
use crate::input::{grid_options, points, read_json, tol, usage, CliError, CliResult, Target};

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Vec<Value>,
    /// `None` for commands without a pass/fail decision.
    pub verdict: Option<Verdict>,
    /// `(t, value)` rows for `--csv`.
    pub table: Vec<(f64, f64)>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.verdict.map_or(0, Verdict::exit_code)
    }
}

fn labeled<T: Serialize>(label: &str, v: &T) -> CliResult<Value> {
    let mut obj = serde_json::Map::new();
    obj.insert("label".into(), Value::String(label.into()));
    match serde_json::to_value(v).map_err(|e| CliError::Lib(e.into()))? {
        Value::Object(m) => obj.extend(m),
        other => {
            obj.insert("value".into(), other);
        }
    }
    Ok(Value::Object(obj))
}

fn gram(f: &FuncHandle, pts: &[f64], kernel: KernelChoice) -> reflpos::Result<KernelGram> {
    match kernel {
        KernelChoice::Plus => gram_plus(f, pts),
        KernelChoice::Minus => gram_minus(f, pts),
    }
}

/// Non-finite kernel values become INCONCLUSIVE instead of an error.
fn soften(r: reflpos::Result<PositivityVerdict>, pts: &[f64], tol: f64) -> CliResult<PositivityVerdict> {
    match r {
        Err(Error::NonFiniteEntry { row, col }) => Ok(PositivityVerdict::inconclusive(
            pts,
            tol,
            format!("kernel value at ({row}, {col}) is not finite"),
        )),
        Err(Error::NotConverged { bound, tol: t }) => {
            Ok(PositivityVerdict::inconclusive(pts, tol, format!("quadrature bound {bound:e} above {t:e}")))
        }
        other => Ok(other?),
    }
}

fn samples(f: &FuncHandle, ts: &[f64]) -> Vec<(f64, f64)> {
    ts.iter().filter_map(|&t| f.eval(t).ok().map(|v| (t, v))).collect()
}

fn single(label: &str, v: PositivityVerdict, f: &FuncHandle) -> CliResult<Outcome> {
    let table = samples(f, &v.grid);
    Ok(Outcome { verdict: Some(v.verdict), results: vec![labeled(label, &v)?], table })
}

fn rp_half_width(target: &Target) -> Option<f64> {
    target.entry.as_ref()?.claims.iter().find_map(|c| match c.flag {
        Flag::ReflectionPositive { a } if c.holds => Some(a),
        _ => None,
    })
}

/// `--a`, else a symmetric `--interval`, else `fallback`.
fn half_width(a: Option<f64>, grid: &GridArgs, fallback: f64) -> CliResult<f64> {
    if let Some(a) = a {
        return Ok(a);
    }
    match grid.interval {
        Some(i) if (i.0 + i.1).abs() <= 1e-12 * i.1.abs() => Ok(i.1),
        Some(_) => usage("reflection checks sample (-a, a); pass --a or a symmetric --interval"),
        None => Ok(fallback),
    }
}

fn reflection_outcome(report: &reflection::ReflectionReport, f: &FuncHandle) -> CliResult<Outcome> {
    let mut results = vec![labeled("reflection", report)?];
    if let Some((part, v)) = report.failing() {
        results.push(json!({"label": "witness", "part": part, "extremal_eig": v.extremal_eig, "witness": v.witness}));
    }
    Ok(Outcome { verdict: Some(report.verdict), results, table: samples(f, &report.minus_verdict.grid) })
}

pub fn run(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::CheckPd { func, grid, kernel } => {
            let t = Target::resolve(func)?;
            let pts = points(grid, t.interval(grid)?)?;
            let tol = tol(grid, pts.len())?;
            let g = gram(&t.func, &pts, *kernel)?;
            let v = soften(psd_check(&g, tol), &pts, tol)?;
            single("psd", v, &t.func)
        }
        Command::CheckNd { func, grid, kernel, h_list } => {
            let t = Target::resolve(func)?;
            let pts = points(grid, t.interval(grid)?)?;
            let tol = tol(grid, pts.len())?;
            let hs = if h_list.is_empty() { default_hs() } else { h_list.clone() };
            let kind = match kernel {
                KernelChoice::Plus => KernelKind::Plus,
                KernelChoice::Minus => KernelKind::Minus,
            };
            let cnd = soften(cnd_check(&gram(&t.func, &pts, *kernel)?, tol), &pts, tol)?;
            let sch = soften(schoenberg_check(&t.func, &pts, &hs, kind, tol), &pts, tol)?;
            Ok(Outcome {
                verdict: Some(Verdict::all([cnd.verdict, sch.verdict])),
                results: vec![labeled("cnd", &cnd)?, labeled("schoenberg", &sch)?],
                table: samples(&t.func, &pts),
            })
        }
        Command::CheckRp { func, grid, a } => {
            let t = Target::resolve(func)?;
            let a = half_width(*a, grid, rp_half_width(&t).unwrap_or(RN_HALF_WIDTH))?;
            let report = reflection::reflection_positive_check(&t.func, a, &grid_options(grid)?)?;
            reflection_outcome(&report, &t.func)
        }
        Command::CheckRn { func, grid, a, h_list, interval_only } => {
            let t = Target::resolve(func)?;
            let a = half_width(*a, grid, RN_HALF_WIDTH)?;
            let report = reflection::reflection_negative_check(&t.func, a, !interval_only, &grid_options(grid)?, h_list)?;
            reflection_outcome(&report, &t.func)
        }
        Command::CheckCm { func, grid, k_max, deltas } => {
            let t = Target::resolve(func)?;
            let pts = points(grid, t.interval(grid)?)?;
            let v = soften(completely_monotone_check(&t.func, &pts, *k_max, deltas, grid.tol), &pts, 0.0)?;
            single("completely_monotone", v, &t.func)
        }
        Command::CheckBernstein { func, grid, k_max, deltas } => {
            let t = Target::resolve(func)?;
            let pts = points(grid, t.interval(grid)?)?;
            let v = soften(bernstein_check(&t.func, &pts, *k_max, deltas, grid.tol), &pts, 0.0)?;
            single("bernstein", v, &t.func)
        }
        Command::Hankel { func, center, n, shifted, tol } => {
            let t = Target::resolve(func)?;
            let v = hankel_check(&t.func, *center, *n, *shifted, *tol)?;
            Ok(Outcome { verdict: Some(v.verdict), results: vec![labeled("hankel", &v)?], table: vec![] })
        }
        Command::Synth { form, rep, t, grid, quad_tol } => synth(*form, rep, t, grid, *quad_tol),
        Command::Analyze { func, grid, form, t0, lambda_grid } => {
            let t = Target::resolve(func)?;
            let pts = points(grid, t.interval(grid)?)?;
            let tol = tol(grid, pts.len())?;
            let lambdas = if lambda_grid.is_empty() { levykhin::default_lambda_grid() } else { lambda_grid.clone() };
            let (result, fitted) = match form {
                AnalyzeForm::Interval => {
                    let a = levykhin::analyze_interval(&t.func, *t0, &pts, &lambdas, tol)?;
                    (labeled("interval", &a)?, a.rep.to_func(SYNTH_TOL))
                }
                AnalyzeForm::Increasing => {
                    let a = levykhin::analyze_increasing(&t.func, &pts, &lambdas, tol)?;
                    (labeled("increasing", &a)?, a.rep.to_func(SYNTH_TOL))
                }
            };
            Ok(Outcome { verdict: None, results: vec![result], table: samples(&fitted, &pts) })
        }
        Command::Polya { func, grid } => {
            let t = Target::resolve(func)?;
            let (lo, hi) = t.interval(grid)?;
            let lo = if grid.interval.is_none() { lo.max(0.0) } else { lo };
            let pts = points(grid, (lo, hi))?;
            let v = polya_check(&t.func, &pts, grid.tol)?;
            single("polya", v, &t.func)
        }
        Command::Thm59 { measure, a, grid } => {
            let text = std::fs::read_to_string(measure)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", measure.display())))?;
            let mu = Measure::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", measure.display())))?;
            let report = thm59_check(&mu, *a, &grid_options(grid)?)?;
            let f = reflection::abs_laplace(&mu, *a);
            Ok(Outcome {
                verdict: Some(report.rp.verdict),
                table: samples(&f, &report.rp.minus_verdict.grid),
                results: vec![labeled("boundary_derivative", &report)?],
            })
        }
        Command::Gallery { name, verify } => gallery(name.as_deref(), *verify),
    }
}

fn synth(form: SynthForm, rep: &std::path::Path, ts: &[f64], grid: &GridArgs, quad_tol: f64) -> CliResult<Outcome> {
    let ts = if !ts.is_empty() {
        ts.to_vec()
    } else if let Some(i) = grid.interval {
        reflpos::grid::linspace(i.0, i.1, grid.points.max(2))
    } else {
        return usage("synth needs --t or --interval");
    };
    let eval: Box<dyn Fn(f64) -> reflpos::Result<f64>> = match form {
        SynthForm::Bernstein => {
            let r: BernsteinRep = read_json(rep)?;
            Box::new(move |t| synth_bernstein(&r, t, quad_tol))
        }
        SynthForm::ReflectionNegative => {
            let r: BernsteinRep = read_json(rep)?;
            Box::new(move |t| synth_reflection_negative(&r, t, quad_tol))
        }
        SynthForm::Increasing => {
            let r: LKIncreasingRep = read_json(rep)?;
            Box::new(move |t| synth_increasing(&r, t, quad_tol))
        }
        SynthForm::Interval => {
            let r: LKIntervalRep = read_json(rep)?;
            Box::new(move |t| synth_interval(&r, t, quad_tol))
        }
        SynthForm::Laplace => {
            let m: Measure = read_json(rep)?;
            m.validate().map_err(|e| CliError::Usage(format!("invalid measure: {e}")))?;
            Box::new(move |t| {
                let v = m.laplace(t, quad_tol)?;
                if v.converged {
                    Ok(v.value)
                } else {
                    Err(Error::NotConverged { bound: v.truncation_bound, tol: quad_tol })
                }
            })
        }
    };
    let mut table = Vec::with_capacity(ts.len());
    for t in ts {
        table.push((t, eval(t)?));
    }
    let results = table.iter().map(|(t, v)| json!({"t": t, "value": v})).collect();
    Ok(Outcome { verdict: None, results, table })
}

fn gallery(name: Option<&str>, verify: bool) -> CliResult<Outcome> {
    if let Some(n) = name {
        if !catalog::list().contains(&n) {
            return Err(Error::UnknownName(n.into()).into());
        }
    }
    let entries: Vec<_> = catalog::all().into_iter().filter(|e| name.is_none_or(|n| e.family == n)).collect();
    if !verify {
        let results = entries.iter().map(|e| labeled(&e.name, &e.summary())).collect::<CliResult<_>>()?;
        return Ok(Outcome { verdict: None, results, table: vec![] });
    }
    let mut results = Vec::new();
    let mut all_confirmed = true;
    for e in &entries {
        for check in catalog::verify_entry(e)? {
            all_confirmed &= check.confirmed;
            results.push(serde_json::to_value(&check).map_err(|e| CliError::Lib(e.into()))?);
        }
    }
    Ok(Outcome { verdict: Some(Verdict::from_bool(all_confirmed)), results, table: vec![] })
}
