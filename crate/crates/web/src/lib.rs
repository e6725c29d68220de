//! Browser bindings. Every export takes plain numbers and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use reflpos::catalog::{self, Params};
use reflpos::diffcalc::bernstein_check;
use reflpos::grid::{linspace, logspace};
use reflpos::levykhin::synth_bernstein;
use reflpos::reflection::{default_hs, reflection_negative_check, reflection_positive_check, two_atom_phi};
use reflpos::{BernsteinRep, GridOptions, Measure, ReflectionReport, Verdict};

const QUAD_TOL: f64 = 1e-10;

#[derive(Serialize)]
struct Curve {
    t: Vec<f64>,
    value: Vec<f64>,
}

#[derive(Serialize)]
struct BernsteinView {
    curve: Curve,
    verdict: Verdict,
}

#[derive(Serialize)]
struct Part {
    name: &'static str,
    verdict: Verdict,
    extremal: f64,
    witness: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct ReflectionView {
    curve: Curve,
    verdict: Verdict,
    parts: Vec<Part>,
}

fn render<T: Serialize>(r: reflpos::Result<T>) -> String {
    let out = r.and_then(|v| reflpos::json::to_string(&v));
    out.unwrap_or_else(|e| serde_json::json!({ "error": e.to_string() }).to_string())
}

fn sample(f: impl Fn(f64) -> reflpos::Result<f64>, t: Vec<f64>) -> reflpos::Result<Curve> {
    let value = t.iter().map(|&x| f(x)).collect::<reflpos::Result<_>>()?;
    Ok(Curve { t, value })
}

fn reflection_view(report: ReflectionReport, curve: Curve) -> ReflectionView {
    let parts = report
        .parts()
        .into_iter()
        .map(|(name, v)| Part { name, verdict: v.verdict, extremal: v.extremal_eig, witness: v.witness.clone() })
        .collect();
    ReflectionView { curve, verdict: report.verdict, parts }
}

/// `a + b t + ∫ (1 - e^{-λt}) c λ^p e^{-rλ} dλ` on `[0, t_max]`, with a
/// Bernstein test on a log grid.
#[wasm_bindgen]
pub fn bernstein_curve(a: f64, b: f64, coef: f64, power: f64, rate: f64, t_max: f64, n: usize) -> String {
    render((|| {
        let rep = BernsteinRep { a, b, sigma: Measure::power_exp(coef, power, rate) };
        rep.validate()?;
        let curve = sample(|t| synth_bernstein(&rep, t, QUAD_TOL), linspace(0.0, t_max, n.clamp(2, 400)))?;
        let f = rep.to_func(QUAD_TOL);
        let verdict = bernstein_check(&f, &logspace(0.05 * t_max.min(1.0), t_max, 12), 6, &[], None)?.verdict;
        Ok(BernsteinView { curve, verdict })
    })())
}

/// `e^{-λ0|t|} + c e^{λ0|t|}` tested for reflection positivity on `(-a, a)`.
#[wasm_bindgen]
pub fn two_atom_rp(lambda0: f64, c: f64, a: f64, n: usize) -> String {
    render((|| {
        let phi = two_atom_phi(lambda0, c);
        let report = reflection_positive_check(&phi, a, &GridOptions::with_n(n))?;
        let curve = sample(|t| phi.eval(t), linspace(-a, a, 201))?;
        Ok(reflection_view(report, curve))
    })())
}

/// `|t|^α` tested for reflection negativity on `(-a, a)` and on the line.
#[wasm_bindgen]
pub fn abs_power_rn(alpha: f64, a: f64, n: usize) -> String {
    render((|| {
        let psi = catalog::get("abs_power", &Params::alpha(alpha))?.func;
        let report = reflection_negative_check(&psi, a, true, &GridOptions::with_n(n), &default_hs())?;
        let curve = sample(|t| psi.eval(t), linspace(-a, a, 201))?;
        Ok(reflection_view(report, curve))
    })())
}
