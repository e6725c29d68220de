//! Lévy–Khintchine representations of negative definite functions.
//!
//! Three forms are supported:
//!
//! * [`LKIntervalRep`]: `ψ(t) = c + d(t - t0) + ∫ e_λ(t) e^{-λ t0} dμ(λ)` on an
//!   interval `(a, b)`.
//! * [`LKIncreasingRep`]: `ψ(t) = c + ∫_{[0,∞)} f_λ(t) dμ(λ)` on `(0, ∞)`.
//! * [`BernsteinRep`]: `ψ(t) = a + bt + ∫ (1 - e^{-λt}) dσ(λ)`, used on
//!   `(0, ∞)` and, through `|t|`, on the whole line.
//!
//! Synthesis integrates against the measure; analysis recovers the scalar
//! data exactly and fits a discrete measure by nonnegative least squares.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diffcalc::{completely_monotone_check, derivative, derivative_handle};
use crate::error::{Error, Result};
use crate::func::{Domain, FuncHandle};
use crate::grid::{logspace, validate_points, GridKind};
use crate::linalg::nnls;
use crate::measure::{Density, Integrand, LaplaceValue, Measure, NEAR_ZERO_CAP};

/// `e_λ(t) = (1 - λu - e^{-λu}) / λ²` with `u = t - t0`, and `-u²/2` at `λ = 0`.
pub fn e_lambda(lambda: f64, t: f64, t0: f64) -> f64 {
    let u = t - t0;
    let x = lambda * u;
    if lambda == 0.0 {
        -0.5 * u * u
    } else if x.abs() < 1.0 {
        -u * u * e_series(x)
    } else {
        -(x + (-x).exp_m1()) / (lambda * lambda)
    }
}

/// `Σ_{n≥2} (-x)^{n-2} / n!`, so that `1 - x - e^{-x} = -x² · e_series(x)`.
fn e_series(x: f64) -> f64 {
    let mut term = 0.5;
    let mut sum = 0.5;
    for n in 3..40 {
        term *= -x / n as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `e_λ(t) e^{-λ t0}`, arranged so that neither factor overflows alone.
fn interval_kernel(lambda: f64, t: f64, t0: f64) -> f64 {
    let u = t - t0;
    let x = lambda * u;
    if lambda == 0.0 {
        -0.5 * u * u
    } else if x.abs() < 1.0 {
        -u * u * e_series(x) * (-lambda * t0).exp()
    } else {
        ((1.0 - x) * (-lambda * t0).exp() - (-lambda * t).exp()) / (lambda * lambda)
    }
}

/// `∂_t [e_λ(t) e^{-λ t0}] = (e^{-λt} - e^{-λ t0}) / λ`.
fn interval_kernel_dt(lambda: f64, t: f64, t0: f64) -> f64 {
    let u = t - t0;
    if lambda == 0.0 {
        -u
    } else {
        (-lambda * t0).exp() * (-lambda * u).exp_m1() / lambda
    }
}

/// `f_λ(t) = (e^{-λ} - e^{-λt}) / λ`, and `t - 1` at `λ = 0`.
pub fn f_lambda(lambda: f64, t: f64) -> f64 {
    let x = lambda * (t - 1.0);
    if lambda == 0.0 {
        t - 1.0
    } else if x < -1.0 {
        // e^{-λ} · expm1(-x) overflows for large λ when t < 1
        ((-lambda).exp() - (-lambda * t).exp()) / lambda
    } else {
        -(-lambda).exp() * (-x).exp_m1() / lambda
    }
}

/// Default `λ` grid for fits: zero plus 40 log-spaced points in `[1e-3, 1e3]`.
pub fn default_lambda_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend(logspace(1e-3, 1e3, 40));
    g
}

fn bounds_of(interval: [Option<f64>; 2]) -> (f64, f64) {
    (interval[0].unwrap_or(f64::NEG_INFINITY), interval[1].unwrap_or(f64::INFINITY))
}

fn as_interval(d: Domain) -> [Option<f64>; 2] {
    [d.lo.is_finite().then_some(d.lo), d.hi.is_finite().then_some(d.hi)]
}

/// A handful of points spread over an open interval, possibly unbounded.
pub fn probe_points(lo: f64, hi: f64) -> Vec<f64> {
    const SPREAD: [f64; 7] = [1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0];
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => GridKind::Cheb.points(lo, hi, 9).unwrap_or_default(),
        (true, false) => SPREAD.iter().map(|s| lo + s * lo.abs().max(1.0)).collect(),
        (false, true) => SPREAD.iter().rev().map(|s| hi - s * hi.abs().max(1.0)).collect(),
        (false, false) => vec![-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0],
    }
}

fn require_converged(v: LaplaceValue, tol: f64) -> Result<f64> {
    if v.converged {
        Ok(v.value)
    } else {
        Err(Error::NotConverged { bound: v.truncation_bound, tol })
    }
}

/// `max(1, e^{CAP · max(0, -x)})`: bound on `e^{-λx}` for `0 ≤ λ ≤ CAP`.
fn head_growth(x: f64) -> f64 {
    (NEAR_ZERO_CAP * (-x).max(0.0)).exp()
}

/// `ψ(t) = c + d(t - t0) + ∫ e_λ(t) e^{-λ t0} dμ(λ)` on `interval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LKIntervalRep {
    pub t0: f64,
    pub c: f64,
    pub d: f64,
    pub mu: Measure,
    /// Open interval; `null` marks an infinite end.
    pub interval: [Option<f64>; 2],
}

impl LKIntervalRep {
    pub fn domain(&self) -> Domain {
        let (lo, hi) = bounds_of(self.interval);
        Domain::open(lo, hi)
    }

    /// Checks scalars, the measure, and convergence of its transform on a
    /// probe grid of the interval.
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = bounds_of(self.interval);
        if !(lo < hi) {
            return Err(Error::InvalidRep("interval must satisfy a < b".into()));
        }
        if !self.c.is_finite() || !self.d.is_finite() || !self.t0.is_finite() {
            return Err(Error::InvalidRep("c, d and t0 must be finite".into()));
        }
        if !self.domain().contains(self.t0) {
            return Err(Error::InvalidRep(format!("t0 = {} lies outside {}", self.t0, self.domain())));
        }
        self.mu.validate()?;
        for s in probe_points(lo, hi) {
            self.mu
                .laplace(s, 1e-6)
                .map_err(|e| Error::InvalidRep(format!("transform of mu fails at t = {s}: {e}")))?;
        }
        Ok(())
    }

    fn integral(&self, t: f64, tol: f64) -> Result<LaplaceValue> {
        let t0 = self.t0;
        let u = t - t0;
        let k = move |l: f64| interval_kernel(l, t, t0);
        let lo = t.min(t0);
        let ig = Integrand { f: &k, near_zero: (0.5 * u * u * head_growth(lo), 0.0), far: (2.0 + u.abs(), -1.0, lo) };
        self.mu.integrate(&ig, tol)
    }

    fn integral_dt(&self, t: f64, tol: f64) -> Result<LaplaceValue> {
        let t0 = self.t0;
        let u = t - t0;
        let k = move |l: f64| interval_kernel_dt(l, t, t0);
        let lo = t.min(t0);
        let ig = Integrand { f: &k, near_zero: (u.abs() * head_growth(lo), 0.0), far: (2.0, -1.0, lo) };
        self.mu.integrate(&ig, tol)
    }

    /// The synthesized function with derivatives to order 8.
    pub fn to_func(&self, tol: f64) -> FuncHandle {
        let a = self.clone();
        let b = self.clone();
        FuncHandle::new("lk-interval", self.domain(), move |t| synth_interval(&a, t, tol).unwrap_or(f64::NAN))
            .with_derivatives(8, move |k, t| {
                let v = match k {
                    1 => b.integral_dt(t, tol).map(|v| (b.d + v.value, v.converged)),
                    _ => b.mu.laplace_deriv(t, (k - 2) as u32, tol).map(|v| (-v.value, v.converged)),
                };
                match v {
                    Ok((x, true)) => x,
                    _ => f64::NAN,
                }
            })
    }
}

/// `ψ(t) = c + ∫_{[0,∞)} f_λ(t) dμ(λ)` on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LKIncreasingRep {
    pub c: f64,
    pub mu: Measure,
}

impl LKIncreasingRep {
    pub fn validate(&self) -> Result<()> {
        if !self.c.is_finite() {
            return Err(Error::InvalidRep("c must be finite".into()));
        }
        self.mu.validate()?;
        if !self.mu.is_nonnegative_supported() {
            return Err(Error::InvalidRep("mu must live on [0, inf)".into()));
        }
        for s in probe_points(0.0, f64::INFINITY) {
            self.mu
                .laplace(s, 1e-6)
                .map_err(|e| Error::InvalidRep(format!("transform of mu fails at t = {s}: {e}")))?;
        }
        Ok(())
    }

    fn integral(&self, t: f64, tol: f64) -> Result<LaplaceValue> {
        let k = move |l: f64| f_lambda(l, t);
        let ig = Integrand { f: &k, near_zero: ((t - 1.0).abs(), 0.0), far: (2.0, -1.0, t.min(1.0)) };
        self.mu.integrate(&ig, tol)
    }

    pub fn to_func(&self, tol: f64) -> FuncHandle {
        let a = self.clone();
        let b = self.clone();
        FuncHandle::new("lk-increasing", Domain::positive(), move |t| synth_increasing(&a, t, tol).unwrap_or(f64::NAN))
            .with_derivatives(8, move |k, t| match b.mu.laplace_deriv(t, (k - 1) as u32, tol) {
                Ok(v) if v.converged => v.value,
                _ => f64::NAN,
            })
    }
}

/// `ψ(t) = a + bt + ∫_{(0,∞)} (1 - e^{-λt}) dσ(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinRep {
    pub a: f64,
    pub b: f64,
    pub sigma: Measure,
}

impl BernsteinRep {
    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0 && self.b >= 0.0) || !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::InvalidRep("a and b must be finite and >= 0".into()));
        }
        match self.sigma.one_wedge_integral() {
            Ok(v) if v.is_finite() => Ok(()),
            Ok(_) => Err(Error::InvalidRep("integral of min(1, lambda) is infinite".into())),
            Err(e) => Err(Error::InvalidRep(format!("integral of min(1, lambda) fails: {e}"))),
        }
    }

    fn integral(&self, t: f64, tol: f64) -> Result<LaplaceValue> {
        let k = move |l: f64| -(-l * t).exp_m1();
        let ig = Integrand { f: &k, near_zero: (t, 1.0), far: (1.0, 0.0, 0.0) };
        self.sigma.integrate(&ig, tol)
    }

    /// `ψ^{(k)}` for `k ≥ 1`.
    fn deriv(&self, k: usize, t: f64, tol: f64) -> f64 {
        match self.sigma.laplace_deriv(t, k as u32, tol) {
            Ok(v) if v.converged => -v.value + if k == 1 { self.b } else { 0.0 },
            _ => f64::NAN,
        }
    }

    /// Bernstein function on `[0, ∞)`.
    pub fn to_func(&self, tol: f64) -> FuncHandle {
        let a = self.clone();
        let b = self.clone();
        FuncHandle::new("bernstein", Domain::nonnegative(), move |t| synth_bernstein(&a, t, tol).unwrap_or(f64::NAN))
            .with_derivatives(8, move |k, t| b.deriv(k, t, tol))
    }

    /// The even extension `t ↦ ψ(|t|)` on the real line.
    pub fn to_reflection_negative(&self, tol: f64) -> FuncHandle {
        let a = self.clone();
        let b = self.clone();
        FuncHandle::new("reflection-negative", Domain::real_line(), move |t| {
            synth_reflection_negative(&a, t, tol).unwrap_or(f64::NAN)
        })
        .with_derivatives(8, move |k, t| {
            if t == 0.0 {
                return f64::NAN;
            }
            let s = if t < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            s * b.deriv(k, t.abs(), tol)
        })
    }

    /// The increasing form `c = ψ(1)`, `μ = b δ_0 + λ σ(dλ)`.
    pub fn to_increasing(&self, tol: f64) -> Result<LKIncreasingRep> {
        let c = synth_bernstein(self, 1.0, tol)?;
        let mut mu = times_lambda(&self.sigma);
        if self.b > 0.0 {
            mu = mu.with_atom(0.0, self.b);
        }
        Ok(LKIncreasingRep { c, mu })
    }
}

/// `λ · σ(dλ)` for a measure on `[0, ∞)`.
fn times_lambda(sigma: &Measure) -> Measure {
    let mut m = sigma.clone();
    for a in &mut m.atoms {
        a.weight *= a.lambda;
    }
    m.atoms.retain(|a| a.weight > 0.0);
    match &mut m.density {
        Some(Density::PowerExp(p)) => p.power += 1.0,
        Some(Density::Gridded(g)) => {
            for (v, l) in g.values.iter_mut().zip(&g.grid) {
                *v *= l;
            }
            if let Some(e) = &mut g.envelope {
                e.power += 1.0;
            }
        }
        None => {}
    }
    m
}

/// Evaluates the interval form at `t`.
pub fn synth_interval(rep: &LKIntervalRep, t: f64, tol: f64) -> Result<f64> {
    rep.domain().check(t)?;
    let v = rep.integral(t, tol)?;
    let i = require_converged(v, tol)?;
    Ok(rep.c + rep.d * (t - rep.t0) + i)
}

/// Evaluates the increasing form at `t > 0`.
pub fn synth_increasing(rep: &LKIncreasingRep, t: f64, tol: f64) -> Result<f64> {
    Domain::positive().check(t)?;
    if !rep.mu.is_nonnegative_supported() {
        return Err(Error::InvalidRep("mu must live on [0, inf)".into()));
    }
    let v = rep.integral(t, tol)?;
    Ok(rep.c + require_converged(v, tol)?)
}

/// Evaluates the Bernstein form at `t ≥ 0`.
pub fn synth_bernstein(rep: &BernsteinRep, t: f64, tol: f64) -> Result<f64> {
    Domain::nonnegative().check(t)?;
    rep.validate()?;
    if t == 0.0 {
        return Ok(rep.a);
    }
    let v = rep.integral(t, tol)?;
    Ok(rep.a + rep.b * t + require_converged(v, tol)?)
}

/// `ψ(|t|)` for the Bernstein form; `a` at `t = 0`.
pub fn synth_reflection_negative(rep: &BernsteinRep, t: f64, tol: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain { x: t, domain: Domain::real_line().to_string() });
    }
    synth_bernstein(rep, t.abs(), tol)
}

/// A representation recovered from samples, with the fit residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis<R> {
    pub rep: R,
    /// `max_s |target(s) - Σ w_j e^{-λ_j s}|` over the fit grid.
    pub residual: f64,
}

/// Fits `y(s) ≈ Σ w_j e^{-λ_j s}` with `w ≥ 0`; returns the atoms and the
/// largest pointwise misfit.
fn fit_exponentials(fit_grid: &[f64], y: &[f64], lambda_grid: &[f64]) -> Result<(Measure, f64)> {
    if lambda_grid.is_empty() || lambda_grid.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidArgument("lambda grid must be nonempty and finite".into()));
    }
    // Rates whose exponential overflows somewhere on the fit grid are dropped.
    let lambda_grid: Vec<f64> = lambda_grid
        .iter()
        .copied()
        .filter(|l| fit_grid.iter().all(|s| (-l * s).exp().is_finite()))
        .collect();
    if lambda_grid.is_empty() {
        return Err(Error::InvalidArgument("exp(-lambda s) overflows on the fit grid for every lambda".into()));
    }
    let a = DMatrix::from_fn(fit_grid.len(), lambda_grid.len(), |i, j| (-lambda_grid[j] * fit_grid[i]).exp());
    let b = DVector::from_column_slice(y);
    let w = nnls(&a, &b);
    let r = &a * &w - &b;
    let residual = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mu = Measure::from_atoms(lambda_grid.iter().zip(w.iter()).filter(|(_, w)| **w > 0.0).map(|(l, w)| (*l, *w)));
    Ok((mu, residual))
}

/// Recovers `c = ψ(t0)`, `d = ψ'(t0)` and a discrete `μ` with
/// `-ψ'' ≈ 𝓛(μ)` on the fit grid.
pub fn analyze_interval(
    psi: &FuncHandle,
    t0: f64,
    fit_grid: &[f64],
    lambda_grid: &[f64],
    tol: f64,
) -> Result<Analysis<LKIntervalRep>> {
    validate_points(fit_grid)?;
    let c = psi.eval(t0)?;
    let d = derivative(psi, t0, 1)?;
    let y = fit_grid.iter().map(|&s| derivative(psi, s, 2).map(|v| -v)).collect::<Result<Vec<f64>>>()?;
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if let Some((s, v)) = fit_grid.iter().zip(&y).find(|(_, v)| **v < -tol * scale || !v.is_finite()) {
        return Err(Error::NotNegativeDefinite(format!("-psi''({s}) = {v} < 0")));
    }
    let (mu, residual) = fit_exponentials(fit_grid, &y, lambda_grid)?;
    Ok(Analysis { rep: LKIntervalRep { t0, c, d, mu, interval: as_interval(psi.domain()) }, residual })
}

/// Recovers `c = ψ(1)` and a discrete `μ ⊂ [0, ∞)` with `ψ' ≈ 𝓛(μ)`.
pub fn analyze_increasing(
    psi: &FuncHandle,
    fit_grid: &[f64],
    lambda_grid: &[f64],
    tol: f64,
) -> Result<Analysis<LKIncreasingRep>> {
    validate_points(fit_grid)?;
    for &s in fit_grid {
        Domain::positive().check(s)?;
    }
    if lambda_grid.iter().any(|&l| l < 0.0) {
        return Err(Error::InvalidArgument("lambda grid must lie in [0, inf)".into()));
    }
    let c = psi.eval(1.0)?;
    let y = fit_grid.iter().map(|&s| derivative(psi, s, 1)).collect::<Result<Vec<f64>>>()?;
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if let Some((s, v)) = fit_grid.iter().zip(&y).find(|(_, v)| **v < -tol * scale || !v.is_finite()) {
        return Err(Error::NotIncreasing(format!("psi'({s}) = {v} < 0")));
    }
    let dpsi = derivative_handle(psi, 1);
    let cm_tol = tol.max(1e-6);
    let cm = completely_monotone_check(&dpsi, fit_grid, 3, &[], Some(cm_tol))?;
    if cm.failed() {
        return Err(Error::NotNegativeDefinite(format!(
            "psi' is not completely monotone (witness {:?})",
            cm.witness.unwrap_or_default()
        )));
    }
    let (mu, residual) = fit_exponentials(fit_grid, &y, lambda_grid)?;
    Ok(Analysis { rep: LKIncreasingRep { c, mu }, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use crate::kernelcheck::{cnd_check, default_tol, gram_plus};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use statrs::function::gamma::gamma;

    // 30-digit references for e_λ(t0 + u) e^0 and f_λ(t)
    const E_REF: [(f64, f64, f64); 12] = [
        (1e-3, 1.0, -0.49983337499166805536),
        (-1e-3, 1.0, -0.50016670834166805575),
        (1e-8, 1.0, -0.4999999983333333375),
        (-1e-8, 1.0, -0.50000000166666667083),
        (0.5, 1.0, -0.42612263885053369442),
        (-2.0, 1.0, -1.0972640247326625568),
        (1e-5, 2.5, -3.1249739584960929362),
        (0.5, 2.5, -2.1460191874407604013),
        (-2.0, 2.5, -35.603289775644150855),
        (1e-3, -0.7, -0.24505717667223408008),
        (-1e-5, -0.7, -0.2449994283343337486),
        (-2.0, -0.7, -0.16164924098540161923),
    ];
    const F_REF: [(f64, f64, f64); 6] = [
        (1e-3, 4.0, 2.9925104893835193157),
        (-1e-8, 4.0, 3.00000007500000105),
        (1e-5, 0.3, -0.69999545001621662534),
        (-1e-3, 0.3, -0.7004551622080041478),
        (1e-8, 2.5, 1.4999999737500002437),
        (-1e-5, 2.5, 1.5000262502437515859),
    ];

    #[test]
    fn e_lambda_references() {
        assert_eq!(e_lambda(0.0, 3.0, 0.0), -4.5);
        assert_eq!(e_lambda(0.7, 1.3, 1.3), 0.0);
        for (l, u, want) in E_REF {
            let got = e_lambda(l, 2.0 + u, 2.0);
            assert!((got - want).abs() <= 4e-16 * want.abs(), "λ={l} u={u}: {got} vs {want}");
        }
        assert!((e_lambda(1e-8, 1.0, 0.0) + 0.5).abs() < 1e-8);
        assert!((e_lambda(1e-7, 1.0, 0.0) + 0.49999998333333375).abs() < 1e-12);
    }

    #[test]
    fn e_lambda_has_zero_slope_at_t0() {
        for l in [-2.0, -1e-3, 0.0, 1e-6, 0.4, 3.0] {
            let h = 1e-5;
            let slope = (e_lambda(l, 1.0 + h, 1.0) - e_lambda(l, 1.0 - h, 1.0)) / (2.0 * h);
            assert!(slope.abs() < 1e-9);
        }
    }

    #[test]
    fn f_lambda_references() {
        assert_eq!(f_lambda(0.0, 4.0), 3.0);
        for l in [-3.0, -1e-6, 0.0, 0.2, 5.0] {
            assert_eq!(f_lambda(l, 1.0), 0.0);
        }
        let direct = ((-2.0f64).exp() - (-6.0f64).exp()) / 2.0;
        assert!((f_lambda(2.0, 3.0) - direct).abs() <= 4e-16 * direct);
        for (l, t, want) in F_REF {
            let got = f_lambda(l, t);
            assert!((got - want).abs() <= 4e-16 * want.abs(), "λ={l} t={t}");
        }
        // ∂_t f_λ = e^{-λt}
        let (l, t, h) = (0.8, 2.0, 1e-5);
        let slope = (f_lambda(l, t + h) - f_lambda(l, t - h)) / (2.0 * h);
        assert_abs_diff_eq!(slope, (-l * t).exp(), epsilon = 1e-9);
    }

    #[test]
    fn series_switch_is_continuous() {
        for k in [3, 5, 8] {
            for s in [1.0, -1.0] {
                let l = s * 10f64.powi(-k);
                for u in [1.0, 2.5, -0.7] {
                    let near = e_lambda(l, u, 0.0);
                    let at_zero = e_lambda(0.0, u, 0.0);
                    assert!((near - at_zero).abs() <= (l * u).abs() * at_zero.abs());
                }
                // either side of |λu| = 1
                let (a, b) = (e_lambda(s * (1.0 - 1e-15), 1.0, 0.0), e_lambda(s * (1.0 + 1e-15), 1.0, 0.0));
                assert!((a - b).abs() <= 1e-12 * a.abs());
            }
        }
    }

    #[test]
    fn synth_interval_examples() {
        let rep = LKIntervalRep { t0: 0.5, c: 1.0, d: -2.0, mu: Measure::zero(), interval: [Some(-1.0), Some(2.0)] };
        assert_eq!(synth_interval(&rep, 1.5, 1e-12).unwrap(), 1.0 - 2.0);
        let (l0, w, t0, t) = (0.7, 1.5, 0.2, 1.4);
        let rep = LKIntervalRep { t0, c: 0.0, d: 0.0, mu: Measure::dirac(l0, w), interval: [None, None] };
        let want = (1.0 - l0 * (t - t0) - (-l0 * (t - t0)).exp()) * w * (-l0 * t0).exp() / (l0 * l0);
        assert_abs_diff_eq!(synth_interval(&rep, t, 1e-12).unwrap(), want, epsilon = 1e-15);
        let bounded = LKIntervalRep { interval: [Some(0.0), Some(1.0)], t0: 0.5, ..rep };
        assert!(matches!(synth_interval(&bounded, 1.0, 1e-9), Err(Error::Domain { .. })));
    }

    #[test]
    fn synth_interval_lebesgue_gives_minus_t_log_t() {
        let rep = LKIntervalRep { t0: 1.0, c: 0.0, d: -1.0, mu: Measure::power_exp(1.0, 0.0, 0.0), interval: [Some(0.0), None] };
        rep.validate().unwrap();
        for t in [0.1, 0.5, 1.0, 2.0, 7.0] {
            assert_abs_diff_eq!(synth_interval(&rep, t, 1e-10).unwrap(), -t * f64::ln(t), epsilon = 1e-9);
        }
    }

    #[test]
    fn bernstein_examples() {
        let alpha = 0.5;
        let rep = BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(alpha / gamma(1.0 - alpha), -1.0 - alpha, 0.0) };
        assert_abs_diff_eq!(synth_bernstein(&rep, 4.0, 1e-10).unwrap(), 2.0, epsilon = 1e-8);
        let ratio = BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(1.0, 0.0, 1.0) };
        assert_abs_diff_eq!(synth_bernstein(&ratio, 1.0, 1e-12).unwrap(), 0.5, epsilon = 1e-10);
        let log1p = BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(1.0, -1.0, 1.0) };
        assert_abs_diff_eq!(synth_bernstein(&log1p, 1.0, 1e-12).unwrap(), std::f64::consts::LN_2, epsilon = 1e-10);
        assert_eq!(synth_bernstein(&log1p, 0.0, 1e-12).unwrap(), 0.0);
        let bad = BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(1.0, -2.0, 0.0) };
        assert!(matches!(synth_bernstein(&bad, 1.0, 1e-9), Err(Error::InvalidRep(_))));
        let neg = BernsteinRep { a: -1.0, b: 0.0, sigma: Measure::zero() };
        assert!(neg.validate().is_err());
    }

    #[test]
    fn reflection_negative_examples() {
        let rep = BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(0.5 / gamma(0.5), -1.5, 0.0) };
        for t in [-3.0, -0.4, 0.7, 9.0] {
            assert_abs_diff_eq!(synth_reflection_negative(&rep, t, 1e-10).unwrap(), t.abs().sqrt(), epsilon = 1e-8);
        }
        let r = BernsteinRep { a: 0.3, b: 0.0, sigma: Measure::dirac(1.0, 1.0) };
        assert_eq!(synth_reflection_negative(&r, 0.0, 1e-9).unwrap(), 0.3);
        assert_eq!(synth_reflection_negative(&r, -1.3, 1e-9).unwrap(), synth_reflection_negative(&r, 1.3, 1e-9).unwrap());
    }

    #[test]
    fn synth_increasing_examples() {
        let rep = LKIncreasingRep { c: 2.0, mu: Measure::dirac(0.0, 3.0) };
        assert_eq!(synth_increasing(&rep, 4.0, 1e-12).unwrap(), 2.0 + 3.0 * 3.0);
        let log = LKIncreasingRep { c: 0.0, mu: Measure::power_exp(1.0, 0.0, 0.0) };
        for t in [0.5, 2.0, 8.0] {
            assert_abs_diff_eq!(synth_increasing(&log, t, 1e-10).unwrap(), t.ln(), epsilon = 1e-8);
        }
        assert_eq!(synth_increasing(&log, 1.0, 1e-10).unwrap(), 0.0);
        assert!(synth_increasing(&log, 0.0, 1e-10).is_err());
    }

    #[test]
    fn analyze_interval_examples() {
        let rep = LKIntervalRep {
            t0: 0.5,
            c: 1.0,
            d: -2.0,
            mu: Measure::from_atoms([(1.0, 1.0), (-0.5, 2.0)]),
            interval: [Some(-1.0), Some(2.0)],
        };
        let f = rep.to_func(1e-13);
        let grid = linspace(-0.8, 1.8, 14);
        let lg = linspace(-3.0, 3.0, 13);
        let an = analyze_interval(&f, 0.5, &grid, &lg, 1e-9).unwrap();
        assert_abs_diff_eq!(an.rep.c, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(an.rep.d, -2.0, epsilon = 1e-12);
        assert!(an.residual < 1e-9);

        let sq = FuncHandle::new("t^2", Domain::real_line(), |t| t * t);
        assert!(matches!(analyze_interval(&sq, 0.0, &grid, &lg, 1e-9), Err(Error::NotNegativeDefinite(_))));

        let par = FuncHandle::new("-(t-1)^2/2", Domain::real_line(), |t| -0.5 * (t - 1.0) * (t - 1.0));
        let an = analyze_interval(&par, 1.0, &grid, &default_lambda_grid(), 1e-9).unwrap();
        assert_eq!(an.rep.c, 0.0);
        assert!(an.rep.d.abs() < 1e-12);
        assert!(an.residual < 1e-9);
        assert!((an.rep.mu.total_mass().unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(an.rep.mu.atoms[0].lambda, 0.0);
    }

    #[test]
    fn analyze_increasing_examples() {
        let grid = logspace(0.1, 10.0, 16);
        let log = FuncHandle::new("log", Domain::positive(), f64::ln);
        let an = analyze_increasing(&log, &grid, &default_lambda_grid(), 1e-9).unwrap();
        assert_eq!(an.rep.c, 0.0);
        assert!(an.residual < 1e-3, "{}", an.residual);

        let id = FuncHandle::new("t", Domain::positive(), |t| t);
        let an = analyze_increasing(&id, &grid, &default_lambda_grid(), 1e-9).unwrap();
        assert_eq!(an.rep.c, 1.0);
        assert!(an.residual < 1e-8);
        assert_eq!(an.rep.mu.atoms[0].lambda, 0.0);
        assert_abs_diff_eq!(an.rep.mu.atoms[0].weight, 1.0, epsilon = 1e-6);

        let e = FuncHandle::new("-e^-t", Domain::positive(), |t: f64| -(-t).exp());
        let lg = vec![0.0, 0.5, 1.0, 2.0, 4.0];
        let an = analyze_increasing(&e, &grid, &lg, 1e-9).unwrap();
        assert_abs_diff_eq!(an.rep.c, -(-1.0f64).exp(), epsilon = 1e-15);
        assert!(an.residual < 1e-7);
        let w1: f64 = an.rep.mu.atoms.iter().filter(|a| a.lambda == 1.0).map(|a| a.weight).sum();
        assert_abs_diff_eq!(w1, 1.0, epsilon = 1e-5);

        let dec = FuncHandle::new("1/t", Domain::positive(), |t: f64| 1.0 / t);
        assert!(matches!(analyze_increasing(&dec, &grid, &lg, 1e-9), Err(Error::NotIncreasing(_))));
        let cube = FuncHandle::new("t^3", Domain::positive(), |t: f64| t.powi(3));
        assert!(matches!(analyze_increasing(&cube, &grid, &lg, 1e-9), Err(Error::NotNegativeDefinite(_))));
    }

    #[test]
    fn json_roundtrip() {
        let rep = LKIntervalRep { t0: 1.0, c: 0.0, d: -1.0, mu: Measure::power_exp(1.0, 0.0, 0.0), interval: [Some(0.0), None] };
        let s = crate::json::to_string(&rep).unwrap();
        assert!(s.contains("\"interval\":[0.0000000000000000e0,null]"));
        let back: LKIntervalRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
        let b = BernsteinRep { a: 0.0, b: 1.0, sigma: Measure::dirac(2.0, 0.5) };
        let s = crate::json::to_string(&b).unwrap();
        assert_eq!(serde_json::from_str::<BernsteinRep>(&s).unwrap(), b);
    }

    fn arb_bernstein() -> impl Strategy<Value = BernsteinRep> {
        (0.0f64..2.0, 0.0f64..2.0, proptest::collection::vec((0.05f64..4.0, 0.0f64..2.0), 0..4), 0usize..3).prop_map(
            |(a, b, atoms, dens)| {
                let mut sigma = Measure::from_atoms(atoms);
                sigma.density = match dens {
                    1 => Measure::power_exp(0.7, -1.3, 0.5).density,
                    2 => Measure::power_exp(1.0, -1.0, 1.0).density,
                    _ => None,
                };
                sigma.support = [Some(0.0), None];
                BernsteinRep { a, b, sigma }
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn increasing_form_matches_bernstein_form(rep in arb_bernstein(), t in 0.05f64..20.0) {
            let inc = rep.to_increasing(1e-12).unwrap();
            let x = synth_increasing(&inc, t, 1e-11).unwrap();
            let y = synth_bernstein(&rep, t, 1e-11).unwrap();
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }

        #[test]
        fn increasing_synthesis_is_monotone(
            atoms in proptest::collection::vec((0.0f64..5.0, 0.0f64..2.0), 0..5),
            c in -2.0f64..2.0,
        ) {
            let rep = LKIncreasingRep { c, mu: Measure::from_atoms(atoms) };
            let vals: Vec<f64> = logspace(0.01, 50.0, 30).into_iter().map(|t| synth_increasing(&rep, t, 1e-12).unwrap()).collect();
            prop_assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0)));
        }

        #[test]
        fn forward_negativity(
            atoms in proptest::collection::vec((-3.0f64..3.0, 0.0f64..2.0), 0..=5),
            c in -1.0f64..1.0, d in -1.0f64..1.0, t0 in -0.9f64..1.9,
        ) {
            let rep = LKIntervalRep { t0, c, d, mu: Measure::from_atoms(atoms), interval: [Some(-1.0), Some(2.0)] };
            let f = rep.to_func(1e-12);
            let pts = GridKind::Cheb.points(-1.0, 2.0, 8).unwrap();
            let v = cnd_check(&gram_plus(&f, &pts).unwrap(), default_tol(8)).unwrap();
            prop_assert!(v.passed(), "{v:?}");
        }
    }
}
