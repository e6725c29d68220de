//! Reflection positivity and negativity on symmetric intervals and on the
//! line.
//!
//! An even `φ` is reflection positive on `(-a, a)` when both
//! `φ((t - s)/2)` on `(-a, a)` and `φ((t + s)/2)` on `(0, a)` are positive
//! definite kernels. An even `ψ` is reflection negative when `e^{-hψ}` is
//! reflection positive for every `h > 0`.

use serde::{Deserialize, Serialize};

use crate::diffcalc::{bernstein_check, convex_decreasing_check};
use crate::error::{Error, Result};
use crate::func::{Domain, FuncHandle};
use crate::grid::{linspace, validate_points, GridKind, DEFAULT_POINTS, MAX_POINTS};
use crate::kernelcheck::{
    cnd_check, default_tol, gram_minus, gram_plus, psd_check, schoenberg_check, KernelGram, KernelKind,
    PositivityVerdict, Verdict,
};
use crate::measure::Measure;

/// Grid and tolerance settings shared by the reflection checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub n: usize,
    pub kind: GridKind,
    /// Defaults to `1e-9 · n`.
    pub tol: Option<f64>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { n: DEFAULT_POINTS, kind: GridKind::Cheb, tol: None }
    }
}

impl GridOptions {
    pub fn with_n(n: usize) -> Self {
        GridOptions { n, ..Default::default() }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| default_tol(self.n))
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_POINTS {
            return Err(Error::InvalidGrid(format!("n must lie in 1..={MAX_POINTS}, got {}", self.n)));
        }
        let t = self.tol();
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {t}")));
        }
        Ok(())
    }
}

/// `h = 2^{-k}` for `k = 0..=10`.
pub fn default_hs() -> Vec<f64> {
    (0..=10).map(|k| 2f64.powi(-k)).collect()
}

/// Combined outcome of a reflection test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    /// Half-width of the sampled interval.
    pub a: f64,
    pub symmetric: bool,
    pub verdict: Verdict,
    pub minus_verdict: PositivityVerdict,
    pub plus_verdict: PositivityVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schoenberg_minus: Option<PositivityVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schoenberg_plus: Option<PositivityVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bernstein: Option<PositivityVerdict>,
}

impl ReflectionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The sub-verdicts in a fixed order, with their labels.
    pub fn parts(&self) -> Vec<(&'static str, &PositivityVerdict)> {
        let mut v = vec![("minus", &self.minus_verdict), ("plus", &self.plus_verdict)];
        if let Some(s) = &self.schoenberg_minus {
            v.push(("schoenberg_minus", s));
        }
        if let Some(s) = &self.schoenberg_plus {
            v.push(("schoenberg_plus", s));
        }
        if let Some(b) = &self.bernstein {
            v.push(("bernstein", b));
        }
        v
    }

    /// First failing sub-verdict.
    pub fn failing(&self) -> Option<(&'static str, &PositivityVerdict)> {
        self.parts().into_iter().find(|(_, v)| v.failed())
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }
}

/// Runs a Gram test, mapping non-finite kernel values to INCONCLUSIVE.
fn decide<F>(g: Result<KernelGram>, tol: f64, check: F) -> Result<PositivityVerdict>
where
    F: Fn(&KernelGram, f64) -> Result<PositivityVerdict>,
{
    let g = g?;
    match check(&g, tol) {
        Err(Error::NonFiniteEntry { row, col }) => Ok(PositivityVerdict::inconclusive(
            &g.points,
            tol,
            format!("kernel value at ({row}, {col}) is not finite"),
        )),
        other => other,
    }
}

/// Largest `|f(t) - f(-t)|` over the points, relative to `max(1, max |f|)`.
fn evenness_defect(f: &FuncHandle, pts: &[f64]) -> Result<f64> {
    let mut scale = 1.0f64;
    let mut worst = 0.0f64;
    for &t in pts {
        let (p, m) = (f.eval(t)?, f.eval(-t)?);
        scale = scale.max(p.abs()).max(m.abs());
        worst = worst.max((p - m).abs());
    }
    Ok(worst / scale)
}

/// Tests both kernels of an even `φ` on `(-a, a)` and evenness on the grid.
pub fn reflection_positive_check(phi: &FuncHandle, a: f64, opts: &GridOptions) -> Result<ReflectionReport> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be positive and finite, got {a}")));
    }
    opts.validate()?;
    let tol = opts.tol();
    let minus_pts = opts.kind.points(-a, a, opts.n)?;
    let plus_pts = opts.kind.points(0.0, a, opts.n)?;
    let defect = evenness_defect(phi, &plus_pts)?;
    let symmetric = defect <= tol;
    let minus_verdict = decide(gram_minus(phi, &minus_pts), tol, psd_check)?;
    let plus_verdict = decide(gram_plus(phi, &plus_pts), tol, psd_check)?;
    let mut verdict = Verdict::all([minus_verdict.verdict, plus_verdict.verdict]);
    if defect.is_nan() {
        verdict = Verdict::all([verdict, Verdict::Inconclusive]);
    } else if !symmetric {
        verdict = Verdict::Fail;
    }
    Ok(ReflectionReport {
        a,
        symmetric,
        verdict,
        minus_verdict,
        plus_verdict,
        schoenberg_minus: None,
        schoenberg_plus: None,
        bernstein: None,
    })
}

/// Tests an even `ψ` for reflection negativity on `(-a, a)`.
///
/// Both kernels are checked for conditional negative definiteness and
/// cross-checked by sampling `e^{-hψ}` for each `h`. With `whole_line` the
/// Bernstein property of `ψ - ψ(0+)` on the positive grid is required too.
pub fn reflection_negative_check(
    psi: &FuncHandle,
    a: f64,
    whole_line: bool,
    opts: &GridOptions,
    hs: &[f64],
) -> Result<ReflectionReport> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be positive and finite, got {a}")));
    }
    opts.validate()?;
    let tol = opts.tol();
    let hs = if hs.is_empty() { default_hs() } else { hs.to_vec() };
    let minus_pts = opts.kind.points(-a, a, opts.n)?;
    let plus_pts = opts.kind.points(0.0, a, opts.n)?;
    let defect = evenness_defect(psi, &plus_pts)?;
    if defect > tol {
        return Err(Error::NotSymmetric(format!("|psi(t) - psi(-t)| reaches {defect:e} of scale")));
    }
    let minus_verdict = decide(gram_minus(psi, &minus_pts), tol, cnd_check)?;
    let plus_verdict = decide(gram_plus(psi, &plus_pts), tol, cnd_check)?;
    let sm = schoenberg_check(psi, &minus_pts, &hs, KernelKind::Minus, tol)?;
    let sp = schoenberg_check(psi, &plus_pts, &hs, KernelKind::Plus, tol)?;
    let bern = if whole_line {
        let base = if psi.domain().contains(0.0) { psi.value(0.0) } else { psi.value(f64::MIN_POSITIVE) };
        let shifted = psi.map(format!("{} - psi(0+)", psi.name()), move |v| v - base);
        Some(bernstein_check(&shifted, &plus_pts, 6, &[], Some(tol))?)
    } else {
        None
    };
    let mut all = vec![minus_verdict.verdict, plus_verdict.verdict, sm.verdict, sp.verdict];
    if let Some(b) = &bern {
        all.push(b.verdict);
    }
    if defect.is_nan() {
        all.push(Verdict::Inconclusive);
    }
    Ok(ReflectionReport {
        a,
        symmetric: true,
        verdict: Verdict::all(all),
        minus_verdict,
        plus_verdict,
        schoenberg_minus: Some(sm),
        schoenberg_plus: Some(sp),
        bernstein: bern,
    })
}

/// Pólya's sufficient condition on `[0, ∞)`: nonnegative, convex and
/// decreasing on the grid. The function is read on the grid only and taken
/// as extended evenly. A FAIL means the criterion is not met, not that the
/// function fails to be positive definite.
pub fn polya_check(phi: &FuncHandle, grid: &[f64], tol: Option<f64>) -> Result<PositivityVerdict> {
    validate_points(grid)?;
    if let Some(&x) = grid.iter().find(|&&x| x < 0.0) {
        return Err(Error::Domain { x, domain: Domain::nonnegative().to_string() });
    }
    let tol = tol.unwrap_or_else(|| default_tol(grid.len()));
    let cd = convex_decreasing_check(phi, grid, Some(tol))?;
    let vals = grid.iter().map(|&t| phi.eval(t)).collect::<Result<Vec<f64>>>()?;
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let (imin, vmin) = vals.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &v)| if v < b.1 { (i, v) } else { b });
    let nonneg = vmin >= -tol * scale;
    let mut out = if !nonneg {
        PositivityVerdict {
            verdict: Verdict::Fail,
            extremal_eig: vmin / scale,
            witness: Some(vec![grid[imin]]),
            ..cd.clone()
        }
    } else {
        cd.clone()
    };
    out = out.with_context("nonnegative_pass", nonneg as u8 as f64);
    if out.failed() {
        out.note = Some(format!(
            "criterion not met ({}); this does not show the function is not positive definite",
            if nonneg { cd.note.as_deref().unwrap_or("shape") } else { "negative value" }
        ));
    }
    Ok(out)
}

/// Result of [`extendable_check`].
#[derive(Debug, Clone)]
pub struct Extension {
    pub extendable: bool,
    /// Backward-difference estimate of `ψ'(a-)`.
    pub left_derivative: f64,
    /// `ψ` on `[0, a]`, constant `ψ(a)` beyond.
    pub extension: FuncHandle,
}

impl Extension {
    /// `t ↦ extension(|t|)` on the line.
    pub fn even(&self) -> FuncHandle {
        let e = self.extension.clone();
        FuncHandle::new(format!("{}(|t|)", e.name()), Domain::real_line(), move |t| e.value(t.abs()))
    }
}

/// `ψ'(a-)` from backward differences with three Richardson levels.
///
/// For convex `ψ` the quotients increase towards `ψ'(a-)`, so the
/// extrapolated value is kept within `[D, D + 2(D - D')]` where `D` and `D'`
/// are the two finest quotients. This stops a kink near `a` from being
/// extrapolated into a spurious slope.
pub fn left_derivative(psi: &FuncHandle, a: f64, h: f64) -> Result<f64> {
    let fa = psi.eval(a)?;
    let mut d = [0.0f64; 4];
    for (i, di) in d.iter_mut().enumerate() {
        let hi = h / 2f64.powi(i as i32);
        *di = (fa - psi.eval(a - hi)?) / hi;
    }
    let (last, prev) = (d[3], d[2]);
    // errors in powers of h: eliminate h, h², h³
    for level in 1..4 {
        let f = 2f64.powi(level as i32);
        for i in 0..4 - level {
            d[i] = (f * d[i + 1] - d[i]) / (f - 1.0);
        }
    }
    let spread = 2.0 * (last - prev).abs();
    Ok(d[0].clamp(last, last + spread))
}

/// Whether a convex `ψ ≥ 0` on `[0, a]` continues as a convex decreasing
/// function: true iff `ψ'(a-) ≤ tol`.
pub fn extendable_check(psi: &FuncHandle, a: f64, tol: f64) -> Result<Extension> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be positive and finite, got {a}")));
    }
    let grid = linspace(0.0, a, 33);
    let cd = convex_decreasing_check(psi, &grid, Some(tol))?;
    if cd.context.get("convex_pass") == Some(&0.0) {
        return Err(Error::NotConvex(format!("chord test fails near {:?}", cd.witness.unwrap_or_default())));
    }
    let vals = grid.iter().map(|&t| psi.eval(t)).collect::<Result<Vec<f64>>>()?;
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if vals.iter().any(|&v| v < -tol * scale) {
        return Err(Error::InvalidArgument("psi must be nonnegative on [0, a]".into()));
    }
    let left = left_derivative(psi, a, a / 16.0)?;
    let fa = vals[vals.len() - 1];
    let p = psi.clone();
    let extension = FuncHandle::new(format!("{} extended", psi.name()), Domain::nonnegative(), move |t| {
        if t <= a {
            p.value(t)
        } else {
            fa
        }
    });
    Ok(Extension { extendable: left <= tol, left_derivative: left, extension })
}

/// Result of [`thm59_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm59Report {
    /// `𝓛(μ)'(a) ≤ tol`
    pub sufficient: bool,
    pub derivative_at_a: f64,
    pub nonconstant: bool,
    /// Smallest scanned `b ∈ (0, a]` with `𝓛(μ)'(b) < -tol`.
    pub necessary_witness: Option<f64>,
    pub rp: ReflectionReport,
}

const QUAD_TOL: f64 = 1e-10;

fn converged_or_divergent(v: crate::measure::LaplaceValue, what: &str) -> Result<f64> {
    if v.converged {
        Ok(v.value)
    } else {
        Err(Error::DivergentIntegral(format!("{what} did not converge (bound {:e})", v.truncation_bound)))
    }
}

/// `t ↦ 𝓛(μ)(|t|)` on `[-a, a]`.
pub fn abs_laplace(mu: &Measure, a: f64) -> FuncHandle {
    let m = mu.clone();
    FuncHandle::new("L(mu)(|t|)", Domain::closed(-a, a), move |t| match m.laplace(t.abs(), QUAD_TOL) {
        Ok(v) if v.converged => v.value,
        _ => f64::NAN,
    })
}

/// Boundary-derivative test for `φ(t) = 𝓛(μ)(|t|)` on `(-a, a)`.
///
/// `𝓛(μ)'(a) ≤ 0` suffices for reflection positivity. When the grid test
/// passes and `φ` is not constant, the scan looks for a point `b` with
/// `𝓛(μ)'(b) < 0` at spacing `a/1000`.
pub fn thm59_check(mu: &Measure, a: f64, opts: &GridOptions) -> Result<Thm59Report> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be positive and finite, got {a}")));
    }
    mu.validate()?;
    let tol = opts.tol();
    let derivative_at_a = converged_or_divergent(mu.laplace_deriv(a, 1, QUAD_TOL)?, "L(mu)'(a)")?;
    let sufficient = derivative_at_a <= tol;
    let phi = abs_laplace(mu, a);
    let rp = reflection_positive_check(&phi, a, opts)?;
    let probe = linspace(0.0, a, 1001);
    let vals = probe
        .iter()
        .map(|&t| converged_or_divergent(mu.laplace(t, QUAD_TOL)?, "L(mu)"))
        .collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let nonconstant = hi - lo > tol * scale;
    let mut necessary_witness = None;
    if rp.passed() && nonconstant {
        for k in 1..=1000 {
            let b = a * k as f64 / 1000.0;
            let d = converged_or_divergent(mu.laplace_deriv(b, 1, QUAD_TOL)?, "L(mu)'(b)")?;
            if d < -tol {
                necessary_witness = Some(b);
                break;
            }
        }
    }
    if sufficient && rp.verdict == Verdict::Fail {
        return Err(Error::Inconsistent(format!(
            "L(mu)'(a) = {derivative_at_a:e} <= tol but the grid test fails"
        )));
    }
    Ok(Thm59Report { sufficient, derivative_at_a, nonconstant, necessary_witness, rp })
}

/// The `β`-periodic function `∫ e^{-tλ} + e^{-(β - t)λ} dμ₊(λ)`.
///
/// Arguments outside `[0, β]` are reduced with `fmod` after folding by
/// evenness.
pub fn periodic_rp(mu_plus: &Measure, beta: f64, t: f64, tol: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must be positive and finite, got {beta}")));
    }
    if !t.is_finite() {
        return Err(Error::Domain { x: t, domain: Domain::real_line().to_string() });
    }
    mu_plus.validate()?;
    if !mu_plus.is_nonnegative_supported() {
        return Err(Error::InvalidMeasure("mu_plus must live on [0, inf)".into()));
    }
    let r = t.abs() % beta;
    let a = converged_or_divergent(mu_plus.laplace(r, tol)?, "L(mu_plus)(t)")?;
    let b = converged_or_divergent(mu_plus.laplace(beta - r, tol)?, "L(mu_plus)(beta - t)")?;
    Ok(a + b)
}

/// [`periodic_rp`] as a function on the line; NaN where it fails.
pub fn periodic_func(mu_plus: &Measure, beta: f64, tol: f64) -> FuncHandle {
    let m = mu_plus.clone();
    FuncHandle::new("periodic", Domain::real_line(), move |t| periodic_rp(&m, beta, t, tol).unwrap_or(f64::NAN))
}

/// One atom `weight · δ_{(lambda, beta)}` of a measure on `[0, ∞) × [a, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleAtom {
    pub lambda: f64,
    pub beta: f64,
    pub weight: f64,
}

/// `Σ w (e^{-λ|t|} + e^{-βλ} e^{λ|t|})` for `|t| < a`.
pub fn double_integral_rp(atoms: &[DoubleAtom], a: f64, t: f64) -> Result<f64> {
    if !(t.abs() < a) {
        return Err(Error::Domain { x: t, domain: Domain::open(-a, a).to_string() });
    }
    let s = t.abs();
    let mut sum = 0.0;
    for at in atoms {
        if !(at.lambda >= 0.0) || !(at.beta >= a) || !(at.weight >= 0.0) || !at.beta.is_finite() {
            return Err(Error::InvalidMeasure(format!("atom {at:?} must have lambda >= 0, beta >= a, weight >= 0")));
        }
        sum += at.weight * ((-at.lambda * s).exp() + (-at.lambda * (at.beta - s)).exp());
    }
    Ok(sum)
}

/// `e^{-λ0|t|} + c e^{λ0|t|}` on the line.
pub fn two_atom_phi(lambda0: f64, c: f64) -> FuncHandle {
    FuncHandle::new(format!("e^(-{lambda0}|t|) + {c} e^({lambda0}|t|)"), Domain::real_line(), move |t: f64| {
        (-lambda0 * t.abs()).exp() + c * (lambda0 * t.abs()).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn green(l: f64) -> FuncHandle {
        FuncHandle::new("green", Domain::real_line(), move |t: f64| (-l * t.abs()).exp())
    }

    fn abs_power(alpha: f64) -> FuncHandle {
        FuncHandle::new("|t|^a", Domain::real_line(), move |t: f64| if alpha == 0.0 { 1.0 } else { t.abs().powf(alpha) })
    }

    fn tri() -> FuncHandle {
        FuncHandle::new("tri", Domain::real_line(), |t: f64| (1.0 - t.abs()).max(0.0))
    }

    #[test]
    fn rp_examples() {
        let o = GridOptions::default();
        assert!(reflection_positive_check(&green(1.0), 2.0, &o).unwrap().passed());
        let thermal = FuncHandle::new("thermal", Domain::open(-1.0, 1.0), |t: f64| (-t.abs()).exp() + (-1.0f64).exp() * t.abs().exp());
        assert!(reflection_positive_check(&thermal, 1.0, &o).unwrap().passed());
        let r = reflection_positive_check(&two_atom_phi(1.0, 1.2 * (-1.0f64).exp()), 1.0, &o).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.minus_verdict.failed());
    }

    #[test]
    fn rp_detects_odd_functions() {
        let odd = FuncHandle::new("odd", Domain::real_line(), |t: f64| (-t).exp());
        let r = reflection_positive_check(&odd, 1.0, &GridOptions::default()).unwrap();
        assert!(!r.symmetric);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn rp_inconclusive_on_nan() {
        let bad = FuncHandle::new("nan", Domain::real_line(), |t: f64| if t.abs() < 0.3 { f64::NAN } else { 1.0 });
        let r = reflection_positive_check(&bad, 1.0, &GridOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn rn_examples() {
        let o = GridOptions::default();
        assert!(reflection_negative_check(&abs_power(0.5), 2.0, true, &o, &[]).unwrap().passed());
        let r = reflection_negative_check(&abs_power(1.5), 2.0, true, &o, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let (_, w) = r.failing().unwrap();
        assert!(w.witness.is_some());
        let aff = FuncHandle::new("a+b|t|", Domain::real_line(), |t: f64| 0.7 + 1.3 * t.abs());
        assert!(reflection_negative_check(&aff, 2.0, true, &o, &[]).unwrap().passed());
        let odd = FuncHandle::new("t", Domain::real_line(), |t| t);
        assert!(matches!(reflection_negative_check(&odd, 1.0, true, &o, &[]), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn report_json_embeds_sub_verdicts() {
        let r = reflection_positive_check(&green(1.0), 2.0, &GridOptions::default()).unwrap();
        let s = r.to_json().unwrap();
        assert!(s.starts_with("{\"a\":2.0000000000000000e0,\"symmetric\":true,\"verdict\":\"PASS\",\"minus_verdict\":{"));
        let back: ReflectionReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
    }

    #[test]
    fn polya_examples() {
        let g = linspace(0.0, 3.0, 31);
        assert!(polya_check(&tri(), &g, None).unwrap().passed());
        assert!(polya_check(&green(1.0), &g, None).unwrap().passed());
        let gauss = FuncHandle::new("gauss", Domain::real_line(), |t: f64| (-t * t).exp());
        let v = polya_check(&gauss, &g, None).unwrap();
        assert!(v.failed());
        assert!(v.note.unwrap().contains("criterion not met"));
        assert!(polya_check(&tri(), &[-1.0, 0.0, 1.0], None).is_err());
    }

    #[test]
    fn polya_pass_implies_psd_on_random_grids() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in [tri(), green(1.0)] {
            assert!(polya_check(&f, &linspace(0.0, 4.0, 41), None).unwrap().passed());
            for _ in 0..10 {
                let mut half: Vec<f64> = (0..6).map(|_| rng.random_range(0.01..3.0)).collect();
                half.sort_by(f64::total_cmp);
                let mut pts: Vec<f64> = half.iter().rev().map(|x| -x).collect();
                pts.extend(&half);
                let g = gram_minus(&f, &pts).unwrap();
                assert!(psd_check(&g, default_tol(pts.len())).unwrap().passed());
            }
        }
    }

    #[test]
    fn extendable_examples() {
        let e = FuncHandle::new("exp", Domain::real_line(), |t: f64| (-t).exp());
        let x = extendable_check(&e, 1.0, 1e-9).unwrap();
        assert!(x.extendable);
        assert_abs_diff_eq!(x.left_derivative, -(-1.0f64).exp(), epsilon = 1e-5);
        assert_eq!(x.extension.value(5.0), (-1.0f64).exp());
        let sq = FuncHandle::new("(t-1)^2", Domain::real_line(), |t: f64| (t - 1.0) * (t - 1.0));
        let x = extendable_check(&sq, 2.0, 1e-9).unwrap();
        assert!(!x.extendable);
        assert_abs_diff_eq!(x.left_derivative, 2.0, epsilon = 1e-9);
        let x = extendable_check(&sq, 1.0, 1e-9).unwrap();
        assert!(x.extendable);
        assert!(x.left_derivative.abs() < 1e-9);
        let concave = FuncHandle::new("1-t^2", Domain::real_line(), |t: f64| 1.0 - t * t);
        assert!(matches!(extendable_check(&concave, 1.0, 1e-9), Err(Error::NotConvex(_))));
    }

    #[test]
    fn extension_is_positive_definite() {
        let sq = FuncHandle::new("(t-1)^2", Domain::real_line(), |t: f64| (t - 1.0) * (t - 1.0));
        let x = extendable_check(&sq, 1.0, 1e-9).unwrap();
        let pts = GridKind::Cheb.points(-1.0, 1.0, 16).unwrap();
        let g = gram_minus(&x.even(), &pts).unwrap();
        assert!(psd_check(&g, default_tol(16)).unwrap().passed());
    }

    #[test]
    fn thm59_examples() {
        let o = GridOptions::default();
        let r = thm59_check(&Measure::dirac(1.0, 1.0), 1.0, &o).unwrap();
        assert!(r.sufficient && r.rp.passed() && r.nonconstant);
        assert_eq!(r.necessary_witness, Some(1e-3));
        let c = (-2.0f64).exp();
        let m = Measure::from_atoms([(1.0, 1.0), (-1.0, c)]);
        let r = thm59_check(&m, 1.0, &o).unwrap();
        assert!(r.derivative_at_a.abs() < 1e-15);
        assert!(r.sufficient && r.rp.passed());
        assert!(r.necessary_witness.is_some());
        let m = Measure::from_atoms([(1.0, 1.0), (-1.0, 1.2 * (-1.0f64).exp())]);
        let r = thm59_check(&m, 1.0, &o).unwrap();
        assert!(!r.sufficient);
        assert_eq!(r.rp.verdict, Verdict::Fail);
        let flat = thm59_check(&Measure::dirac(0.0, 2.0), 1.0, &o).unwrap();
        assert!(!flat.nonconstant && flat.necessary_witness.is_none());
    }

    #[test]
    fn periodic_examples() {
        let (l, beta) = (1.3, 2.0);
        let m = Measure::dirac(l, 1.0);
        for t in [0.0, 0.3, 1.0, 1.7, 2.0] {
            let want = 2.0 * (-beta * l / 2.0).exp() * ((beta / 2.0 - t) * l).cosh();
            assert_abs_diff_eq!(periodic_rp(&m, beta, t, 1e-12).unwrap(), want, epsilon = 1e-14);
        }
        let mid = periodic_rp(&m, beta, 1.0, 1e-12).unwrap();
        for t in linspace(0.0, 2.0, 41) {
            assert!(periodic_rp(&m, beta, t, 1e-12).unwrap() >= mid - 1e-15);
        }
        assert!(periodic_rp(&Measure::dirac(-1.0, 1.0), beta, 0.5, 1e-12).is_err());
    }

    #[test]
    fn periodic_restriction_is_reflection_positive() {
        let m = Measure::from_atoms([(0.5, 1.0), (2.0, 0.3)]);
        let f = periodic_func(&m, 3.0, 1e-12);
        assert!(reflection_positive_check(&f, 1.5, &GridOptions::default()).unwrap().passed());
    }

    #[test]
    fn double_integral_examples() {
        let one = [DoubleAtom { lambda: 1.0, beta: 1.0, weight: 1.0 }];
        for t in [-0.7f64, 0.0, 0.4] {
            let want = (-t.abs()).exp() + (-1.0f64).exp() * t.abs().exp();
            assert_abs_diff_eq!(double_integral_rp(&one, 1.0, t).unwrap(), want, epsilon = 1e-15);
        }
        assert_eq!(double_integral_rp(&[], 1.0, 0.5).unwrap(), 0.0);
        assert!(double_integral_rp(&one, 1.0, 1.0).is_err());
        let two = [DoubleAtom { lambda: 1.0, beta: 1.0, weight: 1.0 }, DoubleAtom { lambda: 0.4, beta: 2.5, weight: 0.7 }];
        let f = FuncHandle::new("dbl", Domain::open(-1.0, 1.0), move |t| double_integral_rp(&two, 1.0, t).unwrap_or(f64::NAN));
        assert!(reflection_positive_check(&f, 1.0, &GridOptions::with_n(10)).unwrap().passed());
    }

    #[test]
    fn two_atom_min_eigenvalue_is_decreasing_and_brackets_bound() {
        let (a, eps) = (1.0, 1e-3);
        let pts = [-(a - eps), a - eps];
        let min_eig = |c: f64| sym_eigen(&gram_minus(&two_atom_phi(1.0, c), &pts).unwrap().entries).min();
        let cs = linspace(0.0, 0.6, 61);
        let eigs: Vec<f64> = cs.iter().map(|&c| min_eig(c)).collect();
        assert!(eigs.windows(2).all(|w| w[1] < w[0]));
        let star = (-(a - eps)).exp();
        assert!(min_eig(star * 0.999) > 0.0 && min_eig(star * 1.001) < 0.0);
        assert!((star - (-a).exp()).abs() < 2e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn periodic_is_even_and_periodic(t in -10.0f64..10.0, beta in 0.5f64..4.0, l in 0.0f64..3.0) {
            let m = Measure::from_atoms([(l, 1.0), (0.5 * l, 0.4)]);
            let f = |x: f64| periodic_rp(&m, beta, x, 1e-12).unwrap();
            let v = f(t);
            prop_assert!((v - f(-t)).abs() <= 1e-12 * v.abs());
            prop_assert!((v - f(t + beta)).abs() <= 1e-12 * v.abs());
            prop_assert!((v - f(beta - t)).abs() <= 1e-12 * v.abs());
        }

        #[test]
        fn thm59_sufficient_implies_rp(
            atoms in proptest::collection::vec((0.0f64..3.0, 0.01f64..2.0), 1..4),
        ) {
            let r = thm59_check(&Measure::from_atoms(atoms), 1.0, &GridOptions::default()).unwrap();
            prop_assert!(r.sufficient);
            prop_assert!(r.rp.passed());
            prop_assert_eq!(r.nonconstant, r.necessary_witness.is_some());
        }

        #[test]
        fn extendable_implies_psd(p in 1.0f64..3.0, s in 0.2f64..1.0, a in 0.5f64..2.0) {
            // convex decreasing up to s, then flat or rising
            let f = FuncHandle::new("f", Domain::real_line(), move |t: f64| (s - t).max(0.0).powf(p) + 0.1);
            let x = extendable_check(&f, a, 1e-9).unwrap();
            prop_assert!(x.extendable);
            let pts = GridKind::Cheb.points(-a, a, 12).unwrap();
            let g = gram_minus(&x.even(), &pts).unwrap();
            prop_assert!(psd_check(&g, default_tol(12)).unwrap().passed());
        }
    }

    #[test]
    fn witness_violation_exceeds_tolerance() {
        let r = reflection_negative_check(&abs_power(1.5), 2.0, true, &GridOptions::default(), &[]).unwrap();
        let (_, v) = r.failing().unwrap();
        assert!(v.extremal_eig.abs() > 10.0 * v.tol * v.scale);
    }

    #[test]
    fn rejects_bad_options() {
        assert!(reflection_positive_check(&green(1.0), 0.0, &GridOptions::default()).is_err());
        assert!(reflection_positive_check(&green(1.0), 1.0, &GridOptions::with_n(65)).is_err());
    }
}
