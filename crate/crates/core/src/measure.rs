//! Positive Borel measures on the real line and their Laplace transforms.
//!
//! A [`Measure`] is a finite list of atoms plus an optional density. Densities
//! come in two flavours:
//!
//! * [`GriddedDensity`]: values on a strictly increasing grid, integrated with
//!   the trapezoid rule or with Gauss panels over the piecewise-linear
//!   interpolant. An optional [`Envelope`] bounds the density beyond the last
//!   grid point when the support hint extends past it.
//! * [`PowerExpDensity`]: the closed-form family `c λ^p e^{-rλ}` on `(lo, hi)`,
//!   which covers every catalog measure and carries its own tail envelope.
//!
//! Integrals against a density are computed with 20-point Gauss–Legendre
//! panels on a dyadic mesh (`[2^k, 2^{k+1}]`), refined geometrically toward
//! `λ = 0`, truncated where analytic head/tail envelopes fall below a share
//! of the requested tolerance. The 10-point rule on the same panels gives the
//! discretisation estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{gl10, gl20};

/// Largest `λ` for which near-zero kernel bounds are requested.
pub(crate) const NEAR_ZERO_CAP: f64 = 1e-3;

/// A point mass `weight · δ_lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub lambda: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Trapezoid,
    GaussComposite,
}

/// Dominating function `coef · λ^power · e^{-rate·λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub coef: f64,
    pub power: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GriddedDensity {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Envelope>,
}

/// `coef · λ^power · e^{-rate·λ}` on `(lo, hi)`; `hi = None` means `+∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerExpDensity {
    pub coef: f64,
    pub power: f64,
    pub rate: f64,
    #[serde(default)]
    pub lo: f64,
    #[serde(default)]
    pub hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Density {
    Gridded(GriddedDensity),
    PowerExp(PowerExpDensity),
}

/// Positive measure: atoms plus an optional density.
///
/// `support` is a hint `[lo, hi]`, `None` standing for an infinite end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub density: Option<Density>,
    #[serde(default = "unbounded")]
    pub support: [Option<f64>; 2],
}

fn unbounded() -> [Option<f64>; 2] {
    [None, None]
}

/// Result of a transform evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceValue {
    pub value: f64,
    pub truncation_bound: f64,
    pub converged: bool,
}

/// A kernel `λ ↦ f(λ)` together with envelopes used for truncation.
pub(crate) struct Integrand<'a> {
    pub f: &'a dyn Fn(f64) -> f64,
    /// `|f(λ)| ≤ coef · λ^power` for `0 ≤ λ ≤ NEAR_ZERO_CAP`.
    pub near_zero: (f64, f64),
    /// `|f(λ)| ≤ coef · λ^power · e^{-rate·λ}` for `λ ≥ 1`.
    pub far: (f64, f64, f64),
}

impl Default for Measure {
    fn default() -> Self {
        Measure::zero()
    }
}

impl Measure {
    /// The zero measure.
    pub fn zero() -> Self {
        Measure { atoms: Vec::new(), density: None, support: [Some(0.0), Some(0.0)] }
    }

    pub fn dirac(lambda: f64, weight: f64) -> Self {
        Measure::from_atoms([(lambda, weight)])
    }

    pub fn from_atoms<I: IntoIterator<Item = (f64, f64)>>(atoms: I) -> Self {
        let atoms: Vec<Atom> = atoms.into_iter().map(|(lambda, weight)| Atom { lambda, weight }).collect();
        let mut m = Measure { atoms, density: None, support: unbounded() };
        m.support = m.natural_support();
        m
    }

    /// `coef · λ^power · e^{-rate·λ} dλ` on `(0, ∞)`.
    pub fn power_exp(coef: f64, power: f64, rate: f64) -> Self {
        Measure::power_exp_on(coef, power, rate, 0.0, None)
    }

    pub fn power_exp_on(coef: f64, power: f64, rate: f64, lo: f64, hi: Option<f64>) -> Self {
        let mut m = Measure {
            atoms: Vec::new(),
            density: Some(Density::PowerExp(PowerExpDensity { coef, power, rate, lo, hi })),
            support: unbounded(),
        };
        m.support = m.natural_support();
        m
    }

    pub fn gridded(grid: Vec<f64>, values: Vec<f64>, rule: Rule) -> Self {
        let mut m = Measure {
            atoms: Vec::new(),
            density: Some(Density::Gridded(GriddedDensity { grid, values, rule, envelope: None })),
            support: unbounded(),
        };
        m.support = m.natural_support();
        m
    }

    pub fn with_atom(mut self, lambda: f64, weight: f64) -> Self {
        self.atoms.push(Atom { lambda, weight });
        self.support = merge_support(self.support, [Some(lambda), Some(lambda)]);
        self
    }

    pub fn with_support(mut self, lo: Option<f64>, hi: Option<f64>) -> Self {
        self.support = [lo, hi];
        self
    }

    /// Smallest interval containing the atoms and the density's domain.
    fn natural_support(&self) -> [Option<f64>; 2] {
        let mut s: Option<[Option<f64>; 2]> = None;
        let mut push = |r: [Option<f64>; 2]| {
            s = Some(match s {
                None => r,
                Some(cur) => merge_support(cur, r),
            })
        };
        for a in &self.atoms {
            push([Some(a.lambda), Some(a.lambda)]);
        }
        match &self.density {
            Some(Density::Gridded(g)) if !g.grid.is_empty() => {
                push([Some(g.grid[0]), Some(*g.grid.last().unwrap())]);
            }
            Some(Density::PowerExp(p)) => push([Some(p.lo), p.hi]),
            _ => {}
        }
        s.unwrap_or([Some(0.0), Some(0.0)])
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !a.lambda.is_finite() || !a.weight.is_finite() || a.weight < 0.0 {
                return Err(Error::InvalidMeasure(format!("bad atom {:?}", a)));
            }
        }
        if let [Some(lo), Some(hi)] = self.support {
            if !(lo <= hi) {
                return Err(Error::InvalidMeasure("support lower end exceeds upper end".into()));
            }
        }
        match &self.density {
            None => {}
            Some(Density::Gridded(g)) => {
                if g.grid.len() < 2 || g.grid.len() != g.values.len() {
                    return Err(Error::InvalidMeasure("grid and values need equal length >= 2".into()));
                }
                if g.grid.iter().any(|x| !x.is_finite()) || g.grid.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::InvalidMeasure("grid must be finite and strictly increasing".into()));
                }
                if g.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::InvalidMeasure("density values must be finite and >= 0".into()));
                }
                if let Some(e) = &g.envelope {
                    if !(e.coef >= 0.0) || !e.power.is_finite() || !e.rate.is_finite() {
                        return Err(Error::InvalidMeasure("bad envelope".into()));
                    }
                }
            }
            Some(Density::PowerExp(p)) => {
                if !(p.coef >= 0.0) || !p.coef.is_finite() || !p.power.is_finite() || !p.rate.is_finite() {
                    return Err(Error::InvalidMeasure("bad power-exp parameters".into()));
                }
                if !(p.lo >= 0.0) || !p.lo.is_finite() {
                    return Err(Error::InvalidMeasure("power-exp density needs 0 <= lo".into()));
                }
                if let Some(hi) = p.hi {
                    if !(hi > p.lo) || !hi.is_finite() {
                        return Err(Error::InvalidMeasure("power-exp density needs lo < hi".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Measure = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    /// True when every atom and the density live in `[0, ∞)`.
    pub fn is_nonnegative_supported(&self) -> bool {
        self.atoms.iter().all(|a| a.lambda >= 0.0 || a.weight == 0.0)
            && match &self.density {
                None => true,
                Some(Density::PowerExp(_)) => true,
                Some(Density::Gridded(g)) => g.grid[0] >= 0.0 && self.support[0].is_some_and(|lo| lo >= 0.0),
            }
    }

    /// `∫ e^{-λt} dμ(λ)`.
    pub fn laplace(&self, t: f64, tol: f64) -> Result<LaplaceValue> {
        self.laplace_deriv(t, 0, tol)
    }

    /// `k`-th derivative of the transform: `(-1)^k ∫ λ^k e^{-λt} dμ(λ)`.
    pub fn laplace_deriv(&self, t: f64, k: u32, tol: f64) -> Result<LaplaceValue> {
        if k > 8 {
            return Err(Error::OrderTooHigh { order: k as usize, max: 8 });
        }
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let f = move |l: f64| sign * l.powi(k as i32) * (-l * t).exp();
        let ig = Integrand {
            f: &f,
            near_zero: (1f64.max((-t * NEAR_ZERO_CAP).exp()), k as f64),
            far: (1.0, k as f64, t),
        };
        self.integrate(&ig, tol)
    }

    /// Total mass; `DivergentIntegral` when it is infinite.
    pub fn total_mass(&self) -> Result<f64> {
        self.validate()?;
        let one = |_: f64| 1.0;
        let ig = Integrand { f: &one, near_zero: (1.0, 0.0), far: (1.0, 0.0, 0.0) };
        let mut v = self.integrate(&ig, 1e-12)?;
        v.value = v.value.max(0.0);
        Ok(v.value)
    }

    /// Mass of `{|λ| > threshold}`.
    pub fn tail_mass(&self, threshold: f64) -> Result<f64> {
        self.validate()?;
        let t = threshold.max(0.0);
        let outside = |l: f64| l.abs() > t;
        let mut restricted = Measure {
            atoms: self.atoms.iter().copied().filter(|a| outside(a.lambda) || threshold < 0.0).collect(),
            density: None,
            support: self.support,
        };
        if threshold < 0.0 {
            restricted.density = self.density.clone();
            return restricted.total_mass();
        }
        let atoms_mass = neumaier(restricted.atoms.iter().map(|a| a.weight));
        let dens_mass = match &self.density {
            None => 0.0,
            Some(Density::PowerExp(p)) => {
                let lo = p.lo.max(t);
                if p.hi.is_some_and(|hi| hi <= lo) {
                    0.0
                } else {
                    let m = Measure::power_exp_on(p.coef, p.power, p.rate, lo, p.hi);
                    m.total_mass()?
                }
            }
            Some(Density::Gridded(g)) => {
                let full = gridded_mass_between(g, f64::NEG_INFINITY, f64::INFINITY);
                let inner = gridded_mass_between(g, -t, t);
                (full - inner).max(0.0)
            }
        };
        Ok(atoms_mass + dens_mass)
    }

    /// `∫ (1 ∧ λ) dσ(λ)` for a measure on `(0, ∞)`.
    pub fn one_wedge_integral(&self) -> Result<f64> {
        self.validate()?;
        if self.atoms.iter().any(|a| a.lambda <= 0.0 && a.weight > 0.0) {
            return Err(Error::InvalidMeasure("measure must live on (0, inf)".into()));
        }
        if let Some(Density::Gridded(g)) = &self.density {
            if g.grid[0] < 0.0 {
                return Err(Error::InvalidMeasure("measure must live on (0, inf)".into()));
            }
        }
        let f = |l: f64| l.min(1.0);
        let ig = Integrand { f: &f, near_zero: (1.0, 1.0), far: (1.0, 0.0, 0.0) };
        let v = self.integrate(&ig, 1e-11)?;
        Ok(v.value)
    }

    /// Integrates a kernel against the measure with a rigorous-ish error budget.
    pub(crate) fn integrate(&self, ig: &Integrand, tol: f64) -> Result<LaplaceValue> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tol must be > 0".into()));
        }
        self.validate()?;
        let mut acc = Neumaier::default();
        let mut abs_sum = 0.0;
        for a in &self.atoms {
            if a.weight == 0.0 {
                continue;
            }
            let v = a.weight * (ig.f)(a.lambda);
            if !v.is_finite() {
                return Err(Error::DivergentIntegral(format!("atom at lambda = {} overflows", a.lambda)));
            }
            acc.add(v);
            abs_sum += v.abs();
        }
        let mut bound = 0.0;
        let mut uncontrolled = false;
        match &self.density {
            None => {}
            Some(Density::PowerExp(p)) => {
                let r = integrate_power_exp(p, ig, tol)?;
                acc.add(r.value);
                abs_sum += r.abs;
                bound += r.bound;
            }
            Some(Density::Gridded(g)) => {
                let r = integrate_gridded(g, ig);
                acc.add(r.value);
                abs_sum += r.abs;
                bound += r.bound;
                let last = *g.grid.last().unwrap();
                let right_open = self.support[1].is_none_or(|hi| hi > last);
                let left_open = self.support[0].is_none_or(|lo| lo < g.grid[0]);
                if left_open {
                    uncontrolled = true;
                }
                if right_open {
                    match &g.envelope {
                        None => uncontrolled = true,
                        Some(e) => {
                            let env = PowerExpDensity {
                                coef: e.coef,
                                power: e.power,
                                rate: e.rate,
                                lo: last.max(0.0),
                                hi: self.support[1],
                            };
                            let absf = |l: f64| (ig.f)(l).abs();
                            let abs_ig = Integrand { f: &absf, near_zero: ig.near_zero, far: ig.far };
                            let tail = integrate_power_exp(&env, &abs_ig, tol)?;
                            bound += tail.value.abs() + tail.bound;
                        }
                    }
                }
            }
        }
        let value = acc.sum();
        if !value.is_finite() {
            return Err(Error::DivergentIntegral("transform is not finite".into()));
        }
        bound += 8.0 * f64::EPSILON * abs_sum;
        if uncontrolled {
            return Ok(LaplaceValue { value, truncation_bound: f64::MAX, converged: false });
        }
        Ok(LaplaceValue { value, truncation_bound: bound, converged: bound <= tol })
    }
}

fn merge_support(a: [Option<f64>; 2], b: [Option<f64>; 2]) -> [Option<f64>; 2] {
    let lo = match (a[0], b[0]) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    };
    let hi = match (a[1], b[1]) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    };
    [lo, hi]
}

struct Partial {
    value: f64,
    abs: f64,
    bound: f64,
}

/// Integral over `(p.lo, p.hi)` of `c λ^p e^{-rλ} f(λ)`.
fn integrate_power_exp(p: &PowerExpDensity, ig: &Integrand, tol: f64) -> Result<Partial> {
    if p.coef == 0.0 {
        return Ok(Partial { value: 0.0, abs: 0.0, bound: 0.0 });
    }
    let budget = tol / 20.0;
    let dens = |l: f64| p.coef * l.powf(p.power) * (-p.rate * l).exp();

    // head: [0, start)
    let mut head_bound = 0.0;
    let start = if p.lo > 0.0 {
        p.lo
    } else {
        let (a, q) = ig.near_zero;
        let e = p.power + q + 1.0;
        if e <= 0.0 {
            return Err(Error::DivergentIntegral(format!(
                "integrand ~ lambda^{} is not integrable at 0",
                p.power + q
            )));
        }
        let mut cap = NEAR_ZERO_CAP;
        if let Some(hi) = p.hi {
            cap = cap.min(hi / 2.0);
        }
        let growth = (-p.rate * cap).exp().max(1.0);
        let c = p.coef * a * growth;
        let lmin = if c == 0.0 {
            cap
        } else {
            let l = (budget * e / c).powf(1.0 / e);
            if l > 0.0 {
                l.min(cap)
            } else {
                // underflow: fall back to the smallest normal number, bound accordingly
                f64::MIN_POSITIVE.sqrt()
            }
        };
        head_bound = c * lmin.powf(e) / e;
        lmin
    };

    // tail: (end, ∞)
    let mut tail_bound = 0.0;
    let end = match p.hi {
        Some(hi) => hi,
        None => {
            let (b, s, kappa) = ig.far;
            let rho = p.rate + kappa;
            let m = p.power + s;
            let c = p.coef * b;
            let mut found = None;
            let mut tt = start.max(1.0).log2().ceil().exp2();
            for _ in 0..1100 {
                if let Some(tb) = tail_envelope(c, m, rho, tt) {
                    if tb <= budget {
                        found = Some((tt, tb));
                        break;
                    }
                }
                tt *= 2.0;
                if !tt.is_finite() {
                    break;
                }
            }
            match found {
                Some((tt, tb)) => {
                    tail_bound = tb;
                    tt
                }
                None => {
                    return Err(Error::DivergentIntegral(format!(
                        "tail ~ lambda^{m} e^(-{rho} lambda) cannot be bounded below {budget:e}"
                    )))
                }
            }
        }
    };

    let mut acc = Neumaier::default();
    let mut abs = 0.0;
    let mut disc = 0.0;
    if end > start {
        let g = |l: f64| dens(l) * (ig.f)(l);
        for (a, b) in dyadic_panels(start, end) {
            let q20 = gl20().integrate(a, b, g);
            let q10 = gl10().integrate(a, b, g);
            if !q20.is_finite() {
                return Err(Error::DivergentIntegral(format!("panel [{a}, {b}] overflows")));
            }
            acc.add(q20);
            abs += q20.abs();
            disc += (q20 - q10).abs();
        }
    }
    Ok(Partial { value: acc.sum(), abs, bound: head_bound + tail_bound + disc })
}

/// Bound for `c ∫_T^∞ λ^m e^{-ρλ} dλ`, `None` when the bound is infinite.
fn tail_envelope(c: f64, m: f64, rho: f64, t: f64) -> Option<f64> {
    if rho > 0.0 {
        let slope = if m > 0.0 { rho - m / t } else { rho };
        if slope <= 0.0 {
            return None;
        }
        let log = c.ln() + m * t.ln() - rho * t - slope.ln();
        Some(log.exp())
    } else if rho == 0.0 && m < -1.0 {
        Some(c * t.powf(m + 1.0) / (-m - 1.0))
    } else {
        None
    }
}

/// Splits `[a, b]` at the powers of two strictly inside it.
fn dyadic_panels(a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![a];
    let mut k = a.log2().floor() as i32 + 1;
    loop {
        let x = (k as f64).exp2();
        if x >= b {
            break;
        }
        if x > a {
            cuts.push(x);
        }
        k += 1;
    }
    cuts.push(b);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

fn integrate_gridded(g: &GriddedDensity, ig: &Integrand) -> Partial {
    let n = g.grid.len();
    match g.rule {
        Rule::Trapezoid => {
            let vals: Vec<f64> = (0..n).map(|i| g.values[i] * (ig.f)(g.grid[i])).collect();
            let fine = trapezoid(&g.grid, &vals, 1);
            let bound = if n >= 3 {
                let coarse = trapezoid(&g.grid, &vals, 2);
                (fine - coarse).abs() / 3.0
            } else {
                0.0
            };
            let abs = vals.iter().map(|v| v.abs()).sum::<f64>() * (g.grid[n - 1] - g.grid[0]) / n as f64;
            Partial { value: fine, abs, bound }
        }
        Rule::GaussComposite => {
            let mut acc = Neumaier::default();
            let mut abs = 0.0;
            let mut disc = 0.0;
            for i in 0..n - 1 {
                let (a, b) = (g.grid[i], g.grid[i + 1]);
                let (va, vb) = (g.values[i], g.values[i + 1]);
                let h = |l: f64| (va + (vb - va) * (l - a) / (b - a)) * (ig.f)(l);
                let q20 = gl20().integrate(a, b, h);
                let q10 = gl10().integrate(a, b, h);
                acc.add(q20);
                abs += q20.abs();
                disc += (q20 - q10).abs();
            }
            Partial { value: acc.sum(), abs, bound: disc }
        }
    }
}

/// Trapezoid over every `stride`-th node (the last node is always included).
fn trapezoid(x: &[f64], y: &[f64], stride: usize) -> f64 {
    let mut idx: Vec<usize> = (0..x.len()).step_by(stride).collect();
    if *idx.last().unwrap() != x.len() - 1 {
        idx.push(x.len() - 1);
    }
    let mut acc = Neumaier::default();
    for w in idx.windows(2) {
        let (i, j) = (w[0], w[1]);
        acc.add(0.5 * (y[i] + y[j]) * (x[j] - x[i]));
    }
    acc.sum()
}

/// Trapezoid mass of the gridded density restricted to `[lo, hi]`.
fn gridded_mass_between(g: &GriddedDensity, lo: f64, hi: f64) -> f64 {
    let mut acc = Neumaier::default();
    for i in 0..g.grid.len() - 1 {
        let (a, b) = (g.grid[i], g.grid[i + 1]);
        let (ca, cb) = (a.max(lo), b.min(hi));
        if cb <= ca {
            continue;
        }
        let interp = |x: f64| g.values[i] + (g.values[i + 1] - g.values[i]) * (x - a) / (b - a);
        acc.add(0.5 * (interp(ca) + interp(cb)) * (cb - ca));
    }
    acc.sum()
}

/// Compensated summation.
#[derive(Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn neumaier<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = Neumaier::default();
    for x in xs {
        acc.add(x);
    }
    acc.sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_transform() {
        let m = Measure::dirac(1.7, 1.0);
        let v = m.laplace(0.6, 1e-12).unwrap();
        assert_eq!(v.value, (-1.7f64 * 0.6).exp());
        assert!(v.converged);
    }

    #[test]
    fn zero_atom_is_constant() {
        let m = Measure::dirac(0.0, 3.0);
        assert_eq!(m.laplace(7.0, 1e-12).unwrap().value, 3.0);
    }

    #[test]
    fn gamma_half_from_power_density() {
        // λ^{-1/2} dλ on (0, ∞) at t = 1 gives Γ(1/2)
        let m = Measure::power_exp(1.0, -0.5, 0.0);
        let v = m.laplace(1.0, 1e-10).unwrap();
        assert!(v.converged, "{v:?}");
        assert!((v.value - 1.772_453_850_905_516).abs() < 1e-10, "{}", v.value);
        assert!((v.value - 1.772_453_850_905_516).abs() <= v.truncation_bound.max(1e-14));
    }

    #[test]
    fn derivative_of_single_atom() {
        let m = Measure::dirac(2.0, 1.0);
        let v = m.laplace_deriv(0.5, 1, 1e-12).unwrap();
        assert!((v.value + 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn derivative_vanishes_at_two_atom_boundary() {
        let m = Measure::from_atoms([(1.0, 1.0), (-1.0, (-2.0f64).exp())]);
        let v = m.laplace_deriv(1.0, 1, 1e-12).unwrap();
        assert!(v.value.abs() < 1e-16, "{}", v.value);
    }

    #[test]
    fn order_zero_derivative_is_the_transform_bitwise() {
        let m = Measure::power_exp(0.7, 0.3, 1.1).with_atom(0.4, 2.0);
        for t in [0.1, 1.0, 3.5] {
            let a = m.laplace(t, 1e-9).unwrap();
            let b = m.laplace_deriv(t, 0, 1e-9).unwrap();
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }

    #[test]
    fn masses_of_atoms() {
        let m = Measure::dirac(2.0, 1.5);
        assert_eq!(m.total_mass().unwrap(), 1.5);
        assert_eq!(m.tail_mass(1.0).unwrap(), 1.5);
        assert_eq!(m.tail_mass(3.0).unwrap(), 0.0);
        assert_eq!(Measure::zero().total_mass().unwrap(), 0.0);
    }

    #[test]
    fn gridded_exponential_mass() {
        let grid: Vec<f64> = (0..=4000).map(|i| i as f64 * 0.01).collect();
        let values: Vec<f64> = grid.iter().map(|l| (-l).exp()).collect();
        let m = Measure::gridded(grid, values, Rule::Trapezoid);
        let mass = m.total_mass().unwrap();
        // trapezoid error for e^{-λ} with h = 0.01 is about h²/12
        let exact = 1.0 - (-40.0f64).exp();
        assert!((mass - exact).abs() < 1e-5, "{mass}");
        let lv = m.laplace(0.0, 1e-4).unwrap();
        assert!(lv.converged);
        assert!((lv.value - exact).abs() <= 1e-5);
    }

    #[test]
    fn gridded_gauss_composite_is_sharper() {
        let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
        let values: Vec<f64> = grid.iter().map(|_| 1.0).collect();
        let m = Measure::gridded(grid, values, Rule::GaussComposite);
        // ∫_0^20 e^{-λ} dλ with exact density 1
        let v = m.laplace(1.0, 1e-12).unwrap();
        assert!((v.value - (1.0 - (-20.0f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn gridded_without_envelope_is_inconclusive_on_unbounded_support() {
        let m = Measure::gridded(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 1.0], Rule::Trapezoid).with_support(Some(0.0), None);
        let v = m.laplace(1.0, 1e-6).unwrap();
        assert!(!v.converged);
    }

    #[test]
    fn gridded_envelope_controls_tail() {
        let grid: Vec<f64> = (0..=3000).map(|i| i as f64 * 0.01).collect();
        let values: Vec<f64> = grid.iter().map(|l| (-l).exp()).collect();
        let mut m = Measure::gridded(grid, values, Rule::GaussComposite).with_support(Some(0.0), None);
        if let Some(Density::Gridded(g)) = &mut m.density {
            g.envelope = Some(Envelope { coef: 1.0, power: 0.0, rate: 1.0 });
        }
        let v = m.laplace(1.0, 1e-6).unwrap();
        assert!(v.converged, "{v:?}");
        // linear interpolation between nodes costs O(h²)
        assert!((v.value - 0.5).abs() < 1e-5, "{v:?}");
    }

    #[test]
    fn one_wedge_examples() {
        assert_eq!(Measure::dirac(0.5, 2.0).one_wedge_integral().unwrap(), 1.0);
        assert_eq!(Measure::dirac(3.0, 2.0).one_wedge_integral().unwrap(), 2.0);
        // e^{-λ}/λ: (1 - e^{-1}) + E1(1), 50-digit reference
        let v = Measure::power_exp(1.0, -1.0, 1.0).one_wedge_integral().unwrap();
        assert!((v - 0.851_504_493_224_077_95).abs() < 1e-10, "{v}");
        assert!(Measure::dirac(-1.0, 1.0).one_wedge_integral().is_err());
        assert!(matches!(
            Measure::power_exp(1.0, -2.5, 0.0).one_wedge_integral(),
            Err(Error::DivergentIntegral(_))
        ));
    }

    #[test]
    fn divergent_transform_is_an_error() {
        // Lebesgue measure on (0, ∞) at t = 0
        assert!(matches!(Measure::power_exp(1.0, 0.0, 0.0).laplace(0.0, 1e-8), Err(Error::DivergentIntegral(_))));
        // λ^{-1} at 0
        assert!(matches!(Measure::power_exp(1.0, -1.0, 0.0).laplace(1.0, 1e-8), Err(Error::DivergentIntegral(_))));
    }

    #[test]
    fn infinite_mass_is_divergent() {
        assert!(Measure::power_exp(1.0, 0.0, 0.0).total_mass().is_err());
        // but the tail beyond 1 of λ^{-2} is finite
        let t = Measure::power_exp(1.0, -2.0, 0.0).tail_mass(1.0).unwrap();
        assert!((t - 1.0).abs() < 1e-9, "{t}");
    }

    #[test]
    fn invalid_measures_rejected() {
        assert!(Measure::dirac(1.0, -1.0).validate().is_err());
        assert!(Measure::gridded(vec![0.0, 0.0], vec![1.0, 1.0], Rule::Trapezoid).validate().is_err());
        assert!(Measure::gridded(vec![0.0, 1.0], vec![1.0, -1.0], Rule::Trapezoid).validate().is_err());
        assert!(Measure::dirac(f64::NAN, 1.0).laplace(1.0, 1e-6).is_err());
    }

    #[test]
    fn overflowing_atom_is_divergent() {
        assert!(matches!(Measure::dirac(-1000.0, 1.0).laplace(1.0, 1e-6), Err(Error::DivergentIntegral(_))));
    }

    #[test]
    fn json_roundtrip() {
        let m = Measure::power_exp(1.0, -1.0, 1.0).with_atom(0.0, 0.25);
        let s = m.to_json().unwrap();
        let back = Measure::from_json(&s).unwrap();
        assert_eq!(back, m);
        let g = Measure::from_json(
            r#"{"atoms":[{"lambda":1,"weight":2}],"density":{"grid":[0,1,2],"values":[1,0.5,0.25],"rule":"trapezoid"},"support":[0,2]}"#,
        )
        .unwrap();
        assert!(matches!(g.density, Some(Density::Gridded(_))));
        let n = Measure::from_json(r#"{"atoms":[],"density":null,"support":[0,0]}"#).unwrap();
        assert_eq!(n.total_mass().unwrap(), 0.0);
        assert!(Measure::from_json(r#"{"atoms":[{"lambda":1,"weight":-2}]}"#).is_err());
    }
}
