//! Named functions with closed-form derivatives, known positivity properties
//! and exact representation data.
//!
//! Each entry records which flags hold and which are known to fail, with the
//! classical reason. [`verify_entry`] runs the matching checker for every
//! claim.

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::diffcalc::{bernstein_check, completely_monotone_check};
use crate::error::{Error, Result};
use crate::func::{Domain, FuncHandle};
use crate::grid::{linspace, logspace, GridKind, DEFAULT_POINTS};
use crate::kernelcheck::{cnd_check, default_tol, gram_minus, gram_plus, psd_check, schoenberg_check, KernelKind, Verdict};
use crate::levykhin::{BernsteinRep, LKIncreasingRep, LKIntervalRep};
use crate::measure::Measure;
use crate::reflection::{default_hs, reflection_negative_check, reflection_positive_check, GridOptions};

/// Order of the closed-form derivatives attached to every entry.
pub const DERIVATIVE_ORDER: usize = 8;

/// Quadrature tolerance used when synthesizing from `lk_data`.
pub const SYNTH_TOL: f64 = 1e-10;

/// Half-width used for reflection negativity claims on the line.
pub const RN_HALF_WIDTH: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum Flag {
    /// `f((x+y)/2)` positive definite on the check interval.
    PositiveDefinite,
    /// `f((x+y)/2)` conditionally negative definite on the check interval.
    NegativeDefinite,
    CompletelyMonotone,
    Bernstein,
    /// `f((x-y)/2)` positive definite on a symmetric interval.
    EvenPositiveDefinite,
    ReflectionPositive { a: f64 },
    ReflectionNegative,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::PositiveDefinite => write!(f, "positive_definite"),
            Flag::NegativeDefinite => write!(f, "negative_definite"),
            Flag::CompletelyMonotone => write!(f, "completely_monotone"),
            Flag::Bernstein => write!(f, "bernstein"),
            Flag::EvenPositiveDefinite => write!(f, "even_positive_definite"),
            Flag::ReflectionPositive { a } => write!(f, "reflection_positive(a={a})"),
            Flag::ReflectionNegative => write!(f, "reflection_negative"),
        }
    }
}

/// A flag that is known to hold (or known to fail) with its justification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    #[serde(flatten)]
    pub flag: Flag,
    pub holds: bool,
    pub basis: String,
}

fn yes(flag: Flag, basis: &str) -> Claim {
    Claim { flag, holds: true, basis: basis.into() }
}

fn no(flag: Flag, basis: &str) -> Claim {
    Claim { flag, holds: false, basis: basis.into() }
}

/// Exact representation data for an entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum LkData {
    /// Read through `|t|` when `even`.
    Bernstein { rep: BernsteinRep, even: bool },
    Increasing { rep: LKIncreasingRep },
    Interval { rep: LKIntervalRep },
    /// `t ↦ 𝓛(μ)(t)`, or `𝓛(μ)(|t|)` when `even`.
    Laplace { measure: Measure, even: bool },
}

impl LkData {
    pub fn form(&self) -> &'static str {
        match self {
            LkData::Bernstein { .. } => "bernstein",
            LkData::Increasing { .. } => "increasing",
            LkData::Interval { .. } => "interval",
            LkData::Laplace { .. } => "laplace",
        }
    }

    /// The synthesized function; NaN where the integral fails.
    pub fn to_func(&self, tol: f64) -> FuncHandle {
        match self {
            LkData::Bernstein { rep, even: true } => rep.to_reflection_negative(tol),
            LkData::Bernstein { rep, even: false } => rep.to_func(tol),
            LkData::Increasing { rep } => rep.to_func(tol),
            LkData::Interval { rep } => rep.to_func(tol),
            LkData::Laplace { measure, even } => {
                let (m, even) = (measure.clone(), *even);
                FuncHandle::new("laplace", Domain::real_line(), move |t: f64| {
                    let s = if even { t.abs() } else { t };
                    match m.laplace(s, tol) {
                        Ok(v) if v.converged => v.value,
                        _ => f64::NAN,
                    }
                })
            }
        }
    }
}

/// Parameters for the parametrized families; unset ones take defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

impl Params {
    pub fn alpha(alpha: f64) -> Self {
        Params { alpha: Some(alpha), ..Default::default() }
    }

    fn describe(&self) -> String {
        let mut parts = vec![];
        for (k, v) in [("alpha", self.alpha), ("lambda", self.lambda), ("beta", self.beta), ("c", self.c)] {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        parts.join(",")
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    /// Family name with parameters, e.g. `power(alpha=0.5)`.
    pub name: String,
    pub family: &'static str,
    pub params: Params,
    pub formula: String,
    pub func: FuncHandle,
    pub domain: Domain,
    pub claims: Vec<Claim>,
    pub lk_data: Option<LkData>,
    /// Where definiteness claims are tested.
    pub check_interval: (f64, f64),
}

/// Serializable view of an entry for listings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub name: String,
    pub formula: String,
    pub domain: String,
    pub claims: Vec<Claim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lk_form: Option<String>,
}

impl CatalogEntry {
    pub fn known_flags(&self) -> Vec<Flag> {
        self.claims.iter().filter(|c| c.holds).map(|c| c.flag).collect()
    }

    pub fn known_false(&self) -> Vec<Flag> {
        self.claims.iter().filter(|c| !c.holds).map(|c| c.flag).collect()
    }

    /// Whether a flag of this kind is claimed to hold.
    pub fn has_flag(&self, flag: &Flag) -> bool {
        self.claims.iter().any(|c| c.holds && std::mem::discriminant(&c.flag) == std::mem::discriminant(flag))
    }

    pub fn summary(&self) -> EntrySummary {
        EntrySummary {
            name: self.name.clone(),
            formula: self.formula.clone(),
            domain: self.domain.to_string(),
            claims: self.claims.clone(),
            lk_form: self.lk_data.as_ref().map(|l| l.form().to_string()),
        }
    }

    /// Twenty points inside the domain for comparing against `lk_data`.
    pub fn probe_grid(&self) -> Vec<f64> {
        let d = self.domain;
        if d.lo >= 0.0 && d.hi.is_infinite() {
            logspace(0.05, 20.0, 20)
        } else if d.lo.is_finite() && d.hi.is_finite() {
            GridKind::Cheb.points(d.lo, d.hi, 20).unwrap_or_default()
        } else {
            linspace(-3.0, 3.0, 20)
        }
    }
}

fn falling(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a - i as f64))
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

fn sign_pow(t: f64, k: usize) -> f64 {
    if t < 0.0 && k % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(what.into()))
    }
}

/// Family names accepted by [`get`].
pub fn list() -> Vec<&'static str> {
    vec![
        "power",
        "log1p",
        "log",
        "ratio",
        "neg_power",
        "neg_tlogt",
        "signed_power",
        "green",
        "thermal_green",
        "abs_power",
        "one_minus_cexp",
        "exp_decay",
        "cosh",
        "triangle",
    ]
}

/// Every standard instance of every family.
pub fn all() -> Vec<CatalogEntry> {
    let mut out = vec![];
    let mut push = |name: &str, p: Params| out.push(get(name, &p).expect("standard instance"));
    for a in [0.25, 0.5, 1.0, 1.5, 2.0] {
        push("power", Params::alpha(a));
    }
    push("log1p", Params::default());
    push("log", Params::default());
    push("ratio", Params::default());
    for a in [0.5, 1.0, 2.0] {
        push("neg_power", Params::alpha(a));
    }
    push("neg_tlogt", Params::default());
    for a in [0.5, 1.5, 2.0] {
        push("signed_power", Params::alpha(a));
    }
    push("green", Params::default());
    push("thermal_green", Params::default());
    for a in [0.0, 0.5, 1.0, 1.25, 1.5, 2.0] {
        push("abs_power", Params::alpha(a));
    }
    for c in [0.5, 5.0] {
        push("one_minus_cexp", Params { c: Some(c), lambda: Some(1.0), ..Default::default() });
    }
    push("exp_decay", Params::default());
    push("cosh", Params::default());
    push("triangle", Params::default());
    out
}

const HALF_LINE: (f64, f64) = (0.05, 10.0);

/// Looks up a family and instantiates it.
pub fn get(name: &str, params: &Params) -> Result<CatalogEntry> {
    let mut p = *params;
    let e = match name {
        "power" => {
            let a = *p.alpha.get_or_insert(0.5);
            require(a > 0.0 && a.is_finite(), "power needs alpha > 0")?;
            let func = FuncHandle::new("t^alpha", Domain::nonnegative(), move |t: f64| t.powf(a))
                .with_derivatives(DERIVATIVE_ORDER, move |k, t| falling(a, k) * t.powf(a - k as f64));
            let claims = if a <= 1.0 {
                vec![
                    yes(Flag::Bernstein, "t^alpha = int (1 - e^{-lt}) alpha/Gamma(1-alpha) l^{-1-alpha} dl for 0 < alpha < 1; t itself is affine"),
                    yes(Flag::NegativeDefinite, "Bernstein functions are negative definite on (0, inf) since e^{-h psi} is completely monotone"),
                ]
            } else {
                vec![
                    no(Flag::Bernstein, "the derivative alpha t^{alpha-1} increases, so it is not completely monotone"),
                    no(Flag::NegativeDefinite, "a convex non-affine function has positive second differences on sum-zero vectors"),
                ]
            };
            let lk = if a < 1.0 {
                Some(LkData::Bernstein {
                    rep: BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(a / gamma(1.0 - a), -1.0 - a, 0.0) },
                    even: false,
                })
            } else if a == 1.0 {
                Some(LkData::Bernstein { rep: BernsteinRep { a: 0.0, b: 1.0, sigma: Measure::zero() }, even: false })
            } else {
                None
            };
            entry(name, p, format!("t^{a}"), func, claims, lk, HALF_LINE)
        }
        "log1p" => {
            let func = FuncHandle::new("log(1+t)", Domain::nonnegative(), f64::ln_1p).with_derivatives(DERIVATIVE_ORDER, |k, t| {
                let s = if k % 2 == 1 { 1.0 } else { -1.0 };
                s * factorial(k - 1) / (1.0 + t).powi(k as i32)
            });
            let claims = vec![
                yes(Flag::Bernstein, "log(1+t) = int (1 - e^{-lt}) e^{-l}/l dl (Frullani)"),
                yes(Flag::NegativeDefinite, "Bernstein functions are negative definite on (0, inf)"),
            ];
            let lk = LkData::Bernstein { rep: BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(1.0, -1.0, 1.0) }, even: false };
            entry(name, p, "log(1+t)".into(), func, claims, Some(lk), HALF_LINE)
        }
        "log" => {
            let func = FuncHandle::new("log t", Domain::positive(), f64::ln).with_derivatives(DERIVATIVE_ORDER, |k, t| {
                let s = if k % 2 == 1 { 1.0 } else { -1.0 };
                s * factorial(k - 1) / t.powi(k as i32)
            });
            let claims = vec![
                yes(Flag::NegativeDefinite, "e^{-h log t} = t^{-h} is a Laplace transform of a positive measure"),
                no(Flag::Bernstein, "log t < 0 on (0, 1)"),
            ];
            let lk = LkData::Increasing { rep: LKIncreasingRep { c: 0.0, mu: Measure::power_exp(1.0, 0.0, 0.0) } };
            entry(name, p, "log t".into(), func, claims, Some(lk), HALF_LINE)
        }
        "ratio" => {
            let func = FuncHandle::new("t/(1+t)", Domain::nonnegative(), |t: f64| t / (1.0 + t)).with_derivatives(DERIVATIVE_ORDER, |k, t| {
                let s = if k % 2 == 1 { 1.0 } else { -1.0 };
                s * factorial(k) / (1.0 + t).powi(k as i32 + 1)
            });
            let claims = vec![
                yes(Flag::Bernstein, "t/(1+t) = int (1 - e^{-lt}) e^{-l} dl"),
                yes(Flag::NegativeDefinite, "Bernstein functions are negative definite on (0, inf)"),
            ];
            let lk = LkData::Bernstein { rep: BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(1.0, 0.0, 1.0) }, even: false };
            entry(name, p, "t/(1+t)".into(), func, claims, Some(lk), HALF_LINE)
        }
        "neg_power" => {
            let a = *p.alpha.get_or_insert(1.0);
            require(a > 0.0 && a.is_finite(), "neg_power needs alpha > 0")?;
            let func = FuncHandle::new("t^-alpha", Domain::positive(), move |t: f64| t.powf(-a))
                .with_derivatives(DERIVATIVE_ORDER, move |k, t| falling(-a, k) * t.powf(-a - k as f64));
            let claims = vec![
                yes(Flag::CompletelyMonotone, "t^{-alpha} = int e^{-lt} l^{alpha-1}/Gamma(alpha) dl"),
                yes(Flag::PositiveDefinite, "Laplace transform of a positive measure (Bernstein-Widder)"),
                no(Flag::NegativeDefinite, "a nonconstant positive definite kernel is positive on some sum-zero vector"),
            ];
            let lk = LkData::Laplace { measure: Measure::power_exp(1.0 / gamma(a), a - 1.0, 0.0), even: false };
            entry(name, p, format!("t^-{a}"), func, claims, Some(lk), HALF_LINE)
        }
        "neg_tlogt" => {
            let func = FuncHandle::new("-t log t", Domain::positive(), |t: f64| -t * t.ln()).with_derivatives(DERIVATIVE_ORDER, |k, t| {
                if k == 1 {
                    -t.ln() - 1.0
                } else {
                    let s = if k % 2 == 0 { -1.0 } else { 1.0 };
                    s * factorial(k - 2) / t.powi(k as i32 - 1)
                }
            });
            let claims = vec![
                yes(Flag::NegativeDefinite, "-psi'' = 1/t is a Laplace transform, so psi has an interval representation"),
                no(Flag::Bernstein, "-t log t < 0 for t > 1"),
            ];
            let lk = LkData::Interval {
                rep: LKIntervalRep { t0: 1.0, c: 0.0, d: -1.0, mu: Measure::power_exp(1.0, 0.0, 0.0), interval: [Some(0.0), None] },
            };
            entry(name, p, "-t log t".into(), func, claims, Some(lk), HALF_LINE)
        }
        "signed_power" => {
            let a = *p.alpha.get_or_insert(1.5);
            require(a > 0.0 && a <= 2.0, "signed_power needs 0 < alpha <= 2")?;
            let s = if a < 1.0 { 1.0 } else { -1.0 };
            let func = FuncHandle::new("signed t^alpha", Domain::positive(), move |t: f64| s * t.powf(a))
                .with_derivatives(DERIVATIVE_ORDER, move |k, t| s * falling(a, k) * t.powf(a - k as f64));
            let mut claims = vec![yes(
                Flag::NegativeDefinite,
                "-psi'' = |alpha(alpha-1)| t^{alpha-2} is a Laplace transform of a positive measure",
            )];
            claims.push(if a <= 1.0 {
                yes(Flag::Bernstein, "t^alpha is Bernstein for 0 < alpha <= 1")
            } else {
                no(Flag::Bernstein, "-t^alpha is negative on (0, inf)")
            });
            let coef = (a * (a - 1.0)).abs();
            let mu = if a == 2.0 {
                Measure::dirac(0.0, 2.0)
            } else if coef == 0.0 {
                Measure::zero()
            } else {
                Measure::power_exp(coef / gamma(2.0 - a), 1.0 - a, 0.0)
            };
            let lk = LkData::Interval { rep: LKIntervalRep { t0: 1.0, c: s, d: s * a, mu, interval: [Some(0.0), None] } };
            let sign = if s > 0.0 { "" } else { "-" };
            entry(name, p, format!("{sign}t^{a}"), func, claims, Some(lk), (0.05, 4.0))
        }
        "green" => {
            let l = *p.lambda.get_or_insert(1.0);
            require(l > 0.0 && l.is_finite(), "green needs lambda > 0")?;
            let func = FuncHandle::new("e^{-lambda|t|}", Domain::real_line(), move |t: f64| (-l * t.abs()).exp())
                .with_derivatives(DERIVATIVE_ORDER, move |k, t| {
                    if t == 0.0 {
                        f64::NAN
                    } else {
                        sign_pow(t, k) * (-l).powi(k as i32) * (-l * t.abs()).exp()
                    }
                });
            let claims = vec![
                yes(Flag::EvenPositiveDefinite, "Fourier transform of a Cauchy density"),
                yes(Flag::ReflectionPositive { a: 1.0 }, "minus kernel positive definite, plus kernel of rank one"),
                yes(Flag::PositiveDefinite, "Laplace transform of a point mass"),
                yes(Flag::CompletelyMonotone, "e^{-lambda t} with lambda > 0"),
            ];
            let lk = LkData::Laplace { measure: Measure::dirac(l, 1.0), even: true };
            entry(name, p, format!("e^(-{l}|t|)"), func, claims, Some(lk), HALF_LINE)
        }
        "thermal_green" => {
            let l = *p.lambda.get_or_insert(1.0);
            let beta = *p.beta.get_or_insert(2.0);
            require(l > 0.0 && l.is_finite(), "thermal_green needs lambda > 0")?;
            require(beta > 0.0 && beta.is_finite(), "thermal_green needs beta > 0")?;
            let func = FuncHandle::new("thermal", Domain::real_line(), move |t: f64| {
                let r = t.abs() % beta;
                (-l * r).exp() + (-l * (beta - r)).exp()
            })
            .with_derivatives(DERIVATIVE_ORDER, move |k, t| {
                let r = t.abs() % beta;
                if r == 0.0 {
                    return f64::NAN;
                }
                sign_pow(t, k) * ((-l).powi(k as i32) * (-l * r).exp() + l.powi(k as i32) * (-l * (beta - r)).exp())
            });
            let claims = vec![
                yes(Flag::PositiveDefinite, "Laplace transform of delta_lambda + e^{-lambda beta} delta_{-lambda}"),
                yes(Flag::ReflectionPositive { a: beta / 2.0 }, "sum of e^{-lambda t} and e^{-lambda(beta-t)} over a half period"),
            ];
            let lk = LkData::Laplace { measure: Measure::from_atoms([(l, 1.0), (-l, (-l * beta).exp())]), even: true };
            let mut e = entry(name, p, format!("e^(-{l}t) + e^(-{l}({beta}-t)), period {beta}"), func, claims, Some(lk), (0.0, beta))?;
            e.domain = Domain::open(-beta, beta);
            Ok(e)
        }
        "abs_power" => {
            let a = *p.alpha.get_or_insert(0.5);
            require(a >= 0.0 && a.is_finite(), "abs_power needs alpha >= 0")?;
            let func = FuncHandle::new("|t|^alpha", Domain::real_line(), move |t: f64| t.abs().powf(a))
                .with_derivatives(DERIVATIVE_ORDER, move |k, t| {
                    if a == 0.0 {
                        0.0
                    } else if t == 0.0 {
                        f64::NAN
                    } else {
                        sign_pow(t, k) * falling(a, k) * t.abs().powf(a - k as f64)
                    }
                });
            let claims = vec![if a <= 1.0 {
                yes(Flag::ReflectionNegative, "|t|^alpha is a Bernstein function of |t| for 0 <= alpha <= 1")
            } else {
                no(Flag::ReflectionNegative, "t^alpha is convex on (0, a) for alpha > 1, so the plus kernel is not negative definite")
            }];
            let rep = if a == 0.0 {
                Some(BernsteinRep { a: 1.0, b: 0.0, sigma: Measure::zero() })
            } else if a < 1.0 {
                Some(BernsteinRep { a: 0.0, b: 0.0, sigma: Measure::power_exp(a / gamma(1.0 - a), -1.0 - a, 0.0) })
            } else if a == 1.0 {
                Some(BernsteinRep { a: 0.0, b: 1.0, sigma: Measure::zero() })
            } else {
                None
            };
            let lk = rep.map(|rep| LkData::Bernstein { rep, even: true });
            entry(name, p, format!("|t|^{a}"), func, claims, lk, (0.0, RN_HALF_WIDTH))
        }
        "one_minus_cexp" => {
            let c = *p.c.get_or_insert(0.5);
            let l = *p.lambda.get_or_insert(1.0);
            require(c >= 0.0 && c.is_finite(), "one_minus_cexp needs c >= 0")?;
            require(l > 0.0 && l.is_finite(), "one_minus_cexp needs lambda > 0")?;
            let func = FuncHandle::new("1 - c e^{-lambda t}", Domain::nonnegative(), move |t: f64| 1.0 - c * (-l * t).exp())
                .with_derivatives(DERIVATIVE_ORDER, move |k, t| -c * (-l).powi(k as i32) * (-l * t).exp());
            let mut claims = vec![yes(
                Flag::NegativeDefinite,
                "-c e^{-lambda(x+y)/2} is negative semidefinite of rank one",
            )];
            claims.push(if c <= 1.0 {
                yes(Flag::Bernstein, "1 - c + c(1 - e^{-lambda t}) with 1 - c >= 0")
            } else {
                no(Flag::Bernstein, "psi(0) = 1 - c < 0")
            });
            let lk = (c <= 1.0).then(|| LkData::Bernstein {
                rep: BernsteinRep { a: 1.0 - c, b: 0.0, sigma: Measure::dirac(l, c) },
                even: false,
            });
            entry(name, p, format!("1 - {c} e^(-{l}t)"), func, claims, lk, HALF_LINE)
        }
        "exp_decay" => {
            let func = FuncHandle::new("e^{-t}", Domain::real_line(), |t: f64| (-t).exp())
                .with_derivatives(DERIVATIVE_ORDER, |k, t| if k % 2 == 0 { (-t).exp() } else { -(-t).exp() });
            let claims = vec![
                yes(Flag::CompletelyMonotone, "all derivatives alternate in sign"),
                yes(Flag::PositiveDefinite, "Laplace transform of delta_1"),
            ];
            let lk = LkData::Laplace { measure: Measure::dirac(1.0, 1.0), even: false };
            entry(name, p, "e^(-t)".into(), func, claims, Some(lk), (-2.0, 3.0))
        }
        "cosh" => {
            let func = FuncHandle::new("cosh t", Domain::real_line(), f64::cosh)
                .with_derivatives(DERIVATIVE_ORDER, |k, t| if k % 2 == 0 { t.cosh() } else { t.sinh() });
            let claims = vec![
                yes(Flag::PositiveDefinite, "Laplace transform of (delta_1 + delta_{-1})/2"),
                no(Flag::CompletelyMonotone, "cosh increases on (0, inf)"),
            ];
            let lk = LkData::Laplace { measure: Measure::from_atoms([(1.0, 0.5), (-1.0, 0.5)]), even: false };
            entry(name, p, "cosh t".into(), func, claims, Some(lk), (-2.0, 2.0))
        }
        "triangle" => {
            let func = FuncHandle::new("max(0, 1-|t|)", Domain::real_line(), |t: f64| (1.0 - t.abs()).max(0.0))
                .with_derivatives(DERIVATIVE_ORDER, |k, t| {
                    let s = t.abs();
                    if t == 0.0 || s == 1.0 {
                        f64::NAN
                    } else if k == 1 && s < 1.0 {
                        -t.signum()
                    } else {
                        0.0
                    }
                });
            let claims = vec![yes(Flag::EvenPositiveDefinite, "even, convex and decreasing on [0, inf) (Polya)")];
            entry(name, p, "max(0, 1 - |t|)".into(), func, claims, None, (0.0, 2.0))
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    }?;
    Ok(e)
}

fn entry(
    family: &str,
    params: Params,
    formula: String,
    func: FuncHandle,
    claims: Vec<Claim>,
    lk_data: Option<LkData>,
    check_interval: (f64, f64),
) -> Result<CatalogEntry> {
    let family = list().into_iter().find(|n| *n == family).unwrap_or("unknown");
    let desc = params.describe();
    let name = if desc.is_empty() { family.to_string() } else { format!("{family}({desc})") };
    let domain = func.domain();
    Ok(CatalogEntry { name: name.clone(), family, params, formula, func: func.renamed(name), domain, claims, lk_data, check_interval })
}

/// Runs the checker that decides `flag` for the entry at default settings.
pub fn verify_flag(entry: &CatalogEntry, flag: &Flag) -> Result<Verdict> {
    let n = DEFAULT_POINTS;
    let tol = default_tol(n);
    let (lo, hi) = entry.check_interval;
    let positive = (lo.max(0.05), hi);
    let f = &entry.func;
    Ok(match flag {
        Flag::PositiveDefinite => {
            let pts = GridKind::Cheb.points(lo, hi, n)?;
            psd_check(&gram_plus(f, &pts)?, tol)?.verdict
        }
        Flag::NegativeDefinite => {
            let pts = GridKind::Cheb.points(lo, hi, n)?;
            let cnd = cnd_check(&gram_plus(f, &pts)?, tol)?;
            let sch = schoenberg_check(f, &pts, &default_hs(), KernelKind::Plus, tol)?;
            Verdict::all([cnd.verdict, sch.verdict])
        }
        Flag::CompletelyMonotone => {
            let grid = logspace(positive.0, positive.1, n);
            completely_monotone_check(f, &grid, 6, &[], None)?.verdict
        }
        Flag::Bernstein => {
            let grid = logspace(positive.0, positive.1, n);
            bernstein_check(f, &grid, 6, &[], None)?.verdict
        }
        Flag::EvenPositiveDefinite => {
            let h = hi.abs().max(lo.abs());
            let pts = GridKind::Cheb.points(-h, h, n)?;
            psd_check(&gram_minus(f, &pts)?, tol)?.verdict
        }
        Flag::ReflectionPositive { a } => reflection_positive_check(f, *a, &GridOptions::default())?.verdict,
        Flag::ReflectionNegative => {
            reflection_negative_check(f, RN_HALF_WIDTH, true, &GridOptions::default(), &default_hs())?.verdict
        }
    })
}

/// Outcome of checking one claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagCheck {
    pub entry: String,
    #[serde(flatten)]
    pub flag: Flag,
    pub holds: bool,
    pub verdict: Verdict,
    /// PASS for a flag that holds, FAIL for one known to fail.
    pub confirmed: bool,
}

pub fn verify_entry(entry: &CatalogEntry) -> Result<Vec<FlagCheck>> {
    entry
        .claims
        .iter()
        .map(|c| {
            let verdict = verify_flag(entry, &c.flag)?;
            let want = if c.holds { Verdict::Pass } else { Verdict::Fail };
            Ok(FlagCheck { entry: entry.name.clone(), flag: c.flag, holds: c.holds, verdict, confirmed: verdict == want })
        })
        .collect()
}

/// Largest `|synth(lk_data)(t) - func(t)|` over the probe grid.
pub fn lk_fidelity(entry: &CatalogEntry) -> Option<f64> {
    let lk = entry.lk_data.as_ref()?;
    let g = lk.to_func(SYNTH_TOL);
    Some(entry.probe_grid().iter().fold(0.0f64, |m, &t| {
        let d = (g.value(t) - entry.func.value(t)).abs();
        if d.is_nan() {
            f64::INFINITY
        } else {
            m.max(d)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcalc::{hankel_check, numeric_derivative};
    use approx::assert_relative_eq;

    #[test]
    fn lookup_examples() {
        assert!(get("power", &Params::alpha(0.5)).unwrap().has_flag(&Flag::Bernstein));
        let p = get("power", &Params::alpha(1.5)).unwrap();
        assert!(!p.has_flag(&Flag::Bernstein));
        assert!(p.known_false().contains(&Flag::Bernstein));
        assert!(get("abs_power", &Params::alpha(1.0)).unwrap().has_flag(&Flag::ReflectionNegative));
        assert!(matches!(get("nope", &Params::default()), Err(Error::UnknownName(_))));
        assert!(get("power", &Params::alpha(-1.0)).is_err());
        assert_eq!(get("green", &Params::default()).unwrap().name, "green(lambda=1)");
    }

    #[test]
    fn list_covers_all_families() {
        let names: Vec<&str> = all().iter().map(|e| e.family).collect();
        for f in list() {
            assert!(names.contains(&f), "{f}");
        }
        assert_eq!(all().len(), 28);
    }

    #[test]
    fn analytic_derivatives_match_numeric() {
        for e in all() {
            let kinks: Vec<f64> = match e.family {
                "green" | "abs_power" => vec![0.0],
                "thermal_green" => vec![-2.0, 0.0, 2.0],
                "triangle" => vec![-1.0, 0.0, 1.0],
                _ => vec![],
            };
            let mut pts: Vec<f64> = e.probe_grid().into_iter().step_by(3).collect();
            if e.family == "thermal_green" {
                pts = vec![-1.0, 1.0];
            }
            for t in pts {
                // the sampled estimate needs room on both sides of t
                if e.domain.lo == 0.0 && t < 0.1 {
                    continue;
                }
                for k in 1..=4 {
                    let reach = 0.2 * k as f64 * t.abs().max(1.0);
                    if kinks.iter().any(|x| (x - t).abs() <= reach) {
                        continue;
                    }
                    let exact = e.func.analytic(k, t).unwrap();
                    let num = numeric_derivative(&e.func, t, k).unwrap();
                    let scale = exact.abs().max(0.1);
                    assert!((num - exact).abs() <= 1e-6 * scale, "{} k={k} t={t}: {num} vs {exact}", e.name);
                }
            }
        }
    }

    #[test]
    fn lk_data_reproduces_functions() {
        for e in all() {
            if let Some(d) = lk_fidelity(&e) {
                assert!(d <= 1e-7, "{}: {d:e}", e.name);
            }
        }
    }

    #[test]
    fn every_claim_is_confirmed() {
        let mut mismatches = vec![];
        for e in all() {
            for c in verify_entry(&e).unwrap() {
                if !c.confirmed {
                    mismatches.push(format!("{} {} holds={} got {}", c.entry, c.flag, c.holds, c.verdict));
                }
            }
        }
        assert!(mismatches.is_empty(), "{mismatches:#?}");
    }

    #[test]
    fn every_claim_has_a_basis() {
        for e in all() {
            assert!(!e.claims.is_empty());
            assert!(e.claims.iter().all(|c| c.basis.len() > 10));
        }
    }

    #[test]
    fn hankel_on_catalog_functions() {
        let e = get("exp_decay", &Params::default()).unwrap();
        assert!(hankel_check(&e.func, 0.5, 3, false, None).unwrap().passed());
        assert!(hankel_check(&e.func, 0.5, 3, true, None).unwrap().passed());
        let c = get("cosh", &Params::default()).unwrap();
        assert!(hankel_check(&c.func, 0.0, 3, false, None).unwrap().passed());
        assert!(hankel_check(&c.func, 0.0, 3, true, None).unwrap().failed());
    }

    #[test]
    fn negative_definite_entries_have_psd_hankel_of_minus_second_derivative() {
        for e in all().into_iter().filter(|e| e.has_flag(&Flag::NegativeDefinite)) {
            let (lo, hi) = e.check_interval;
            let f = e.func.clone();
            let neg = FuncHandle::new("-psi''", f.domain(), {
                let f = f.clone();
                move |t| -f.analytic(2, t).unwrap()
            })
            .with_derivatives(6, move |k, t| -f.analytic(k + 2, t).unwrap());
            for c in [lo.max(0.1), 0.5 * (lo + hi)] {
                let v = hankel_check(&neg, c, 2, false, None).unwrap();
                assert!(v.passed(), "{} c={c}: {:e}", e.name, v.extremal_eig);
            }
        }
    }

    #[test]
    fn summary_round_trips() {
        for e in all() {
            let s = crate::json::to_string(&e.summary()).unwrap();
            let back: EntrySummary = serde_json::from_str(&s).unwrap();
            assert_eq!(crate::json::to_string(&back).unwrap(), s);
        }
        let t = get("thermal_green", &Params::default()).unwrap();
        assert_relative_eq!(t.func.value(0.5), t.func.value(-0.5));
        assert_relative_eq!(t.func.value(0.5), t.func.value(2.5), max_relative = 1e-15);
    }
}
