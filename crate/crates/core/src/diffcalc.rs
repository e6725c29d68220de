//! Finite differences, derivative estimates and the difference-based tests
//! for complete monotonicity, Bernstein functions, Hankel positivity and
//! convex decrease.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::func::FuncHandle;
use crate::grid::validate_points;
use crate::kernelcheck::{default_tol, psd_check, KernelGram, PositivityVerdict, Verdict};

/// Highest order of a difference `Δ_δ^k`.
pub const MAX_DIFF_ORDER: usize = 12;
/// Highest order estimated from samples alone.
pub const MAX_NUMERIC_ORDER: usize = 4;
/// Relative step factors used when the caller gives none.
pub const DEFAULT_DELTAS: [f64; 3] = [1e-1, 1e-2, 1e-3];

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Δ_δ^k f(t) = Σ_j (-1)^j C(k, j) f(t + jδ)`, with `Δ_δ f(t) = f(t) - f(t + δ)`.
pub fn delta_k(f: &FuncHandle, t: f64, delta: f64, k: usize) -> Result<f64> {
    if k > MAX_DIFF_ORDER {
        return Err(Error::OrderTooHigh { order: k, max: MAX_DIFF_ORDER });
    }
    let d = f.domain();
    d.check(t)?;
    d.check(t + k as f64 * delta)?;
    let mut sum = 0.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binomial(k, j) * f.value(t + j as f64 * delta);
    }
    Ok(sum)
}

/// `f^{(k)}(t)`: closed form when the handle has one, otherwise an adaptive
/// Richardson extrapolation of central differences (Ridders' scheme).
pub fn derivative(f: &FuncHandle, t: f64, k: usize) -> Result<f64> {
    f.domain().check(t)?;
    if let Some(v) = f.analytic(k, t) {
        return Ok(v);
    }
    if k > MAX_NUMERIC_ORDER {
        let max = f.max_order().unwrap_or(0).max(MAX_NUMERIC_ORDER);
        return Err(Error::OrderTooHigh { order: k, max });
    }
    numeric_derivative(f, t, k)
}

/// Estimate from samples only, ignoring any closed form.
pub fn numeric_derivative(f: &FuncHandle, t: f64, k: usize) -> Result<f64> {
    let dom = f.domain();
    dom.check(t)?;
    if k == 0 {
        return Ok(f.value(t));
    }
    if k > MAX_NUMERIC_ORDER {
        return Err(Error::OrderTooHigh { order: k, max: MAX_NUMERIC_ORDER });
    }
    let room = (t - dom.lo).min(dom.hi - t);
    if !(room > 0.0) {
        return Err(Error::Domain { x: t, domain: dom.to_string() });
    }
    let h0 = (0.4 * t.abs().max(1.0)).min(0.5 * room / k as f64);
    Ok(ridders(|h| central_difference(f, t, k, h), h0))
}

fn central_difference(f: &FuncHandle, t: f64, k: usize, h: f64) -> f64 {
    let mut sum = 0.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let x = t + (0.5 * k as f64 - j as f64) * h;
        sum += sign * binomial(k, j) * f.value(x);
    }
    sum / h.powi(k as i32)
}

/// Richardson tableau in powers of `h²`, stopping once the error estimate
/// starts to grow.
fn ridders<D: Fn(f64) -> f64>(d: D, h0: f64) -> f64 {
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const NTAB: usize = 14;
    const SAFE: f64 = 2.0;
    let mut a = [[0.0f64; NTAB]; NTAB];
    let mut h = h0;
    a[0][0] = d(h);
    let mut best = a[0][0];
    let mut err = f64::INFINITY;
    for i in 1..NTAB {
        h /= CON;
        a[0][i] = d(h);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let errt = (a[j][i] - a[j - 1][i]).abs().max((a[j][i] - a[j - 1][i - 1]).abs());
            if errt <= err {
                err = errt;
                best = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= SAFE * err {
            break;
        }
    }
    best
}

/// `f^{(k)}` as a function: the closed form if present, else a numeric
/// estimate that yields NaN where it cannot be formed.
pub fn derivative_handle(f: &FuncHandle, k: usize) -> FuncHandle {
    if let Some(d) = f.derived(k) {
        return d;
    }
    let g = f.clone();
    FuncHandle::new(format!("{}^({k})", f.name()), f.domain(), move |t| derivative(&g, t, k).unwrap_or(f64::NAN))
}

fn local_scale(v: f64) -> f64 {
    v.abs().max(1.0)
}

fn steps(deltas: &[f64]) -> &[f64] {
    if deltas.is_empty() {
        &DEFAULT_DELTAS
    } else {
        deltas
    }
}

fn step_at(t: f64, rel: f64) -> f64 {
    if t == 0.0 {
        rel
    } else {
        rel * t.abs()
    }
}

fn resolve_tol(tol: Option<f64>, n: usize) -> Result<f64> {
    let tol = tol.unwrap_or_else(|| default_tol(n));
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")))
    }
}

/// Tracks the worst signed slack over a scan.
struct Worst {
    slack: f64,
    scale: f64,
    witness: Vec<f64>,
    nonfinite: bool,
}

impl Worst {
    fn new() -> Self {
        Worst { slack: f64::INFINITY, scale: 1.0, witness: vec![], nonfinite: false }
    }

    /// `slack` is already divided by `scale`; negative is a violation.
    fn see(&mut self, slack: f64, scale: f64, witness: &[f64]) {
        if !slack.is_finite() {
            self.nonfinite = true;
            return;
        }
        if slack < self.slack {
            self.slack = slack;
            self.scale = scale;
            self.witness = witness.to_vec();
        }
    }

    fn verdict(self, grid: &[f64], tol: f64) -> PositivityVerdict {
        let fail = self.slack < -tol;
        let verdict = if fail {
            Verdict::Fail
        } else if self.nonfinite {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        PositivityVerdict {
            verdict,
            extremal_eig: if self.slack.is_finite() { self.slack } else { 0.0 },
            tol,
            scale: self.scale,
            witness: fail.then_some(self.witness),
            grid: grid.to_vec(),
            context: BTreeMap::new(),
            note: None,
        }
    }
}

/// `Δ_δ^k f(t) ≥ -tol · max(1, |f(t)|)` for every grid point, step and
/// `0 ≤ k ≤ k_max`. Steps are relative to `|t|`. A FAIL witness is
/// `[t, δ, k]`.
pub fn completely_monotone_check(
    f: &FuncHandle,
    grid: &[f64],
    k_max: usize,
    deltas: &[f64],
    tol: Option<f64>,
) -> Result<PositivityVerdict> {
    validate_points(grid)?;
    let tol = resolve_tol(tol, grid.len())?;
    let mut worst = Worst::new();
    for &t in grid {
        let scale = local_scale(f.eval(t)?);
        for &rel in steps(deltas) {
            let delta = step_at(t, rel);
            f.domain().check(t + k_max as f64 * delta)?;
            for k in 0..=k_max {
                let d = delta_k(f, t, delta, k)?;
                worst.see(d / scale, scale, &[t, delta, k as f64]);
            }
        }
    }
    Ok(worst.verdict(grid, tol))
}

/// `ψ ≥ -tol` on the grid and `Δ_δ^{k+1} ψ ≤ tol · scale` for
/// `0 ≤ k ≤ k_max`. The context map records which part passed.
pub fn bernstein_check(
    psi: &FuncHandle,
    grid: &[f64],
    k_max: usize,
    deltas: &[f64],
    tol: Option<f64>,
) -> Result<PositivityVerdict> {
    validate_points(grid)?;
    let tol = resolve_tol(tol, grid.len())?;
    let mut nonneg = Worst::new();
    let mut diff = Worst::new();
    for &t in grid {
        let v = psi.eval(t)?;
        let scale = local_scale(v);
        nonneg.see(v / scale, scale, &[t, 0.0, 0.0]);
        for &rel in steps(deltas) {
            let delta = step_at(t, rel);
            psi.domain().check(t + (k_max + 1) as f64 * delta)?;
            for k in 0..=k_max {
                let d = delta_k(psi, t, delta, k + 1)?;
                diff.see(-d / scale, scale, &[t, delta, (k + 1) as f64]);
            }
        }
    }
    let a = nonneg.verdict(grid, tol);
    let b = diff.verdict(grid, tol);
    let verdict = Verdict::all([a.verdict, b.verdict]);
    let primary = if a.failed() || (!b.failed() && a.extremal_eig <= b.extremal_eig) { &a } else { &b };
    let note = match (a.failed(), b.failed()) {
        (true, true) => Some("nonnegativity and derivative parts failed"),
        (true, false) => Some("nonnegativity failed, derivative part passed"),
        (false, true) => Some("derivative part failed"),
        _ => None,
    };
    let mut out = PositivityVerdict { verdict, ..primary.clone() };
    out.note = note.map(String::from);
    Ok(out
        .with_context("nonnegativity_pass", (!a.failed()) as u8 as f64)
        .with_context("derivative_pass", (!b.failed()) as u8 as f64))
}

/// `(f^{(i+j)}(c))` or, shifted, `(-f^{(1+i+j)}(c))` for `0 ≤ i, j ≤ n`,
/// decided by [`psd_check`].
pub fn hankel_check(f: &FuncHandle, c: f64, n: usize, shifted: bool, tol: Option<f64>) -> Result<PositivityVerdict> {
    let top = 2 * n + shifted as usize;
    let analytic = f.max_order().unwrap_or(0);
    if top > analytic.max(MAX_NUMERIC_ORDER) {
        return Err(Error::OrderTooHigh { order: top, max: analytic.max(MAX_NUMERIC_ORDER) });
    }
    let mut ders = Vec::with_capacity(top + 1);
    for k in 0..=top {
        ders.push(derivative(f, c, k)?);
    }
    let m = DMatrix::from_fn(n + 1, n + 1, |i, j| if shifted { -ders[1 + i + j] } else { ders[i + j] });
    let pts: Vec<f64> = (0..=n).map(|i| i as f64).collect();
    let g = KernelGram::from_matrix(&pts, m)?;
    let tol = resolve_tol(tol, n + 1)?;
    if g.entries.iter().any(|x| !x.is_finite()) {
        return Ok(PositivityVerdict::inconclusive(&pts, tol, "non-finite derivative"));
    }
    Ok(psd_check(&g, tol)?.with_context("c", c))
}

/// Discrete convexity and monotone decrease on a grid.
///
/// Values must not rise by more than `tol · scale`, and each interior point
/// may exceed the chord through its neighbours by at most `tol · scale`, with
/// `scale = max(1, max |f|)`. A FAIL witness lists the offending points.
pub fn convex_decreasing_check(f: &FuncHandle, grid: &[f64], tol: Option<f64>) -> Result<PositivityVerdict> {
    validate_points(grid)?;
    if grid.len() < 3 {
        return Err(Error::InvalidGrid("need at least three points".into()));
    }
    let tol = resolve_tol(tol, grid.len())?;
    let vals = grid.iter().map(|&t| f.eval(t)).collect::<Result<Vec<f64>>>()?;
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut dec = Worst::new();
    let mut cvx = Worst::new();
    for i in 0..grid.len() - 1 {
        dec.see((vals[i] - vals[i + 1]) / scale, scale, &[grid[i], grid[i + 1]]);
    }
    for i in 0..grid.len() - 2 {
        let (x0, x1, x2) = (grid[i], grid[i + 1], grid[i + 2]);
        let chord = ((x2 - x1) * vals[i] + (x1 - x0) * vals[i + 2]) / (x2 - x0);
        cvx.see((chord - vals[i + 1]) / scale, scale, &[x0, x1, x2]);
    }
    let a = dec.verdict(grid, tol);
    let b = cvx.verdict(grid, tol);
    let note = match (a.failed(), b.failed()) {
        (true, true) => Some("not decreasing and not convex"),
        (true, false) => Some("not decreasing"),
        (false, true) => Some("not convex"),
        _ => None,
    };
    let primary = if a.extremal_eig <= b.extremal_eig { a.clone() } else { b.clone() };
    let mut out = PositivityVerdict { verdict: Verdict::all([a.verdict, b.verdict]), ..primary };
    out.note = note.map(String::from);
    Ok(out
        .with_context("decreasing_pass", (!a.failed()) as u8 as f64)
        .with_context("convex_pass", (!b.failed()) as u8 as f64))
}
