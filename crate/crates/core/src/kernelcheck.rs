//! Gram matrices of two-variable kernels and their positivity tests.
//!
//! The decision procedure is a full symmetric eigendecomposition, so a FAIL
//! always carries an eigenvector witness.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::FuncHandle;
use crate::grid::validate_points;
use crate::linalg::sym_eigen;

/// Which kernel a Gram matrix samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// `f((x + y) / 2)`
    Plus,
    /// `f((x - y) / 2)`
    Minus,
    Custom,
}

/// A symmetric kernel matrix sampled at increasing points.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGram {
    pub points: Vec<f64>,
    pub entries: DMatrix<f64>,
    pub kind: KernelKind,
}

impl KernelGram {
    /// Samples `k(x_i, x_j)` on the upper triangle and mirrors it.
    pub fn from_kernel<K>(points: &[f64], kind: KernelKind, k: K) -> Result<Self>
    where
        K: Fn(f64, f64) -> Result<f64>,
    {
        validate_points(points)?;
        let n = points.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = k(points[i], points[j])?;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(KernelGram { points: points.to_vec(), entries: m, kind })
    }

    /// Wraps an explicit matrix. Only the upper triangle is read.
    pub fn from_matrix(points: &[f64], entries: DMatrix<f64>) -> Result<Self> {
        validate_points(points)?;
        let n = points.len();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, expected {n}x{n}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let mut m = entries;
        for i in 0..n {
            for j in 0..i {
                m[(i, j)] = m[(j, i)];
            }
        }
        Ok(KernelGram { points: points.to_vec(), entries: m, kind: KernelKind::Custom })
    }

    /// Square matrix with its index positions `0, 1, …` as points.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let pts: Vec<f64> = (0..n).map(|i| i as f64).collect();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        Self::from_matrix(&pts, DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.entries.row(i).iter().copied().collect()).collect()
    }

    /// `max(1, max |G_ij|)`
    pub fn scale(&self) -> f64 {
        self.entries.iter().fold(1.0f64, |m, x| m.max(x.abs()))
    }

    pub fn scaled(&self, c: f64) -> KernelGram {
        KernelGram { points: self.points.clone(), entries: &self.entries * c, kind: self.kind }
    }

    fn check_finite(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if !self.entries[(i, j)].is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// `f((x_i + x_j) / 2)`
pub fn gram_plus(f: &FuncHandle, points: &[f64]) -> Result<KernelGram> {
    KernelGram::from_kernel(points, KernelKind::Plus, |x, y| f.eval(0.5 * (x + y)))
}

/// `f((x_i - x_j) / 2)`
pub fn gram_minus(f: &FuncHandle, points: &[f64]) -> Result<KernelGram> {
    // Sampled on the upper triangle, so the lower one is f((x_j - x_i)/2)
    // only when f is even; callers test evenness separately.
    KernelGram::from_kernel(points, KernelKind::Minus, |x, y| f.eval(0.5 * (x - y)))
}

/// Outcome of a positivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Combined verdict: any FAIL wins, then any INCONCLUSIVE.
    pub fn all<I: IntoIterator<Item = Verdict>>(vs: I) -> Verdict {
        let mut out = Verdict::Pass;
        for v in vs {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        out
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Verdict with the number that decided it.
///
/// For Gram tests `extremal_eig` is the eigenvalue compared against the
/// tolerance. For difference tests it is the worst signed slack divided by the
/// local scale, so negative means violated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub verdict: Verdict,
    pub extremal_eig: f64,
    pub tol: f64,
    pub scale: f64,
    pub witness: Option<Vec<f64>>,
    pub grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub context: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PositivityVerdict {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// A verdict for a grid where some evaluation did not converge.
    pub fn inconclusive(grid: &[f64], tol: f64, note: impl Into<String>) -> Self {
        PositivityVerdict {
            verdict: Verdict::Inconclusive,
            extremal_eig: 0.0,
            tol,
            scale: 1.0,
            witness: None,
            grid: grid.to_vec(),
            context: BTreeMap::new(),
            note: Some(note.into()),
        }
    }

    pub fn with_context(mut self, key: &str, value: f64) -> Self {
        self.context.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }
}

/// `1e-9 · n`
pub fn default_tol(n: usize) -> f64 {
    1e-9 * n.max(1) as f64
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")))
    }
}

/// Positive semidefiniteness: `λ_min ≥ -tol · scale`.
pub fn psd_check(g: &KernelGram, tol: f64) -> Result<PositivityVerdict> {
    check_tol(tol)?;
    g.check_finite()?;
    let scale = g.scale();
    let eig = sym_eigen(&g.entries);
    let lmin = eig.min();
    let pass = lmin >= -tol * scale;
    Ok(PositivityVerdict {
        verdict: Verdict::from_bool(pass),
        extremal_eig: lmin,
        tol,
        scale,
        witness: (!pass).then(|| eig.vector(0)),
        grid: g.points.clone(),
        context: BTreeMap::new(),
        note: None,
    })
}

/// Conditional negative definiteness: `λ_max(P G P) ≤ tol · scale` with `P`
/// the projection onto vectors summing to zero.
pub fn cnd_check(g: &KernelGram, tol: f64) -> Result<PositivityVerdict> {
    check_tol(tol)?;
    g.check_finite()?;
    let n = g.len();
    let scale = g.scale();
    let p = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    let mut pgp = &p * &g.entries * &p;
    // Restore exact symmetry lost to rounding in the triple product.
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (pgp[(i, j)] + pgp[(j, i)]);
            pgp[(i, j)] = m;
            pgp[(j, i)] = m;
        }
    }
    let eig = sym_eigen(&pgp);
    let lmax = eig.max();
    let pass = lmax <= tol * scale;
    let witness = (!pass).then(|| {
        let v = DVector::from_vec(eig.vector(n - 1));
        let mean = v.mean();
        v.iter().map(|x| x - mean).collect()
    });
    Ok(PositivityVerdict {
        verdict: Verdict::from_bool(pass),
        extremal_eig: lmax,
        tol,
        scale,
        witness,
        grid: g.points.clone(),
        context: BTreeMap::new(),
        note: None,
    })
}

/// `wᵀ G w` for a witness vector.
pub fn quadratic_form(g: &KernelGram, w: &[f64]) -> f64 {
    let v = DVector::from_column_slice(w);
    (v.transpose() * &g.entries * &v)[(0, 0)]
}

/// Samples `e^{-hψ}` for each `h` and requires every Gram to be PSD.
///
/// A necessary condition for `ψ` to be negative definite. The first failing
/// `h` is reported in the context map.
pub fn schoenberg_check(
    psi: &FuncHandle,
    points: &[f64],
    hs: &[f64],
    kind: KernelKind,
    tol: f64,
) -> Result<PositivityVerdict> {
    if hs.is_empty() || hs.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
        return Err(Error::InvalidArgument("hs must be a nonempty list of positive reals".into()));
    }
    let base = match kind {
        KernelKind::Plus => gram_plus(psi, points)?,
        KernelKind::Minus => gram_minus(psi, points)?,
        KernelKind::Custom => {
            return Err(Error::InvalidArgument("schoenberg_check needs the plus or minus kernel".into()))
        }
    };
    if base.check_finite().is_err() {
        return Ok(PositivityVerdict::inconclusive(points, tol, "non-finite kernel value"));
    }
    let mut worst: Option<PositivityVerdict> = None;
    for &h in hs {
        let g = KernelGram { points: base.points.clone(), entries: base.entries.map(|x| (-h * x).exp()), kind };
        if g.check_finite().is_err() {
            return Ok(PositivityVerdict::inconclusive(points, tol, format!("e^(-h psi) overflows at h = {h}")));
        }
        let v = psd_check(&g, tol)?.with_context("h", h);
        if v.failed() {
            return Ok(v);
        }
        if worst.as_ref().is_none_or(|w| v.extremal_eig / v.scale < w.extremal_eig / w.scale) {
            worst = Some(v);
        }
    }
    Ok(worst.expect("hs is nonempty"))
}

/// The reflection-positive quotient built from a PSD kernel on a grid that
/// is closed under a reflection `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSpace {
    /// `K(τx_i, x_j)` for `i, j` in the positive half.
    pub gram_tau: DMatrix<f64>,
    pub rank: usize,
    pub null_dim: usize,
    /// Eigenvalues of `gram_tau`, descending.
    pub q_gram_eigvals: Vec<f64>,
    /// Row `i` holds the coordinates of `q(K_{x_i})` in an orthonormal basis
    /// of the quotient.
    pub q_vectors: DMatrix<f64>,
    /// `max |⟨q(K_x), q(K_y)⟩ - K^τ(x, y)|`
    pub reproduction_error: f64,
}

/// Builds the quotient of the positive half by the null space of `K^τ`.
///
/// `tau[i]` is the index of the reflection of `plus[i]` in the full grid.
pub fn quotient_space(k: &KernelGram, tau: &[usize], plus: &[usize], tol: f64) -> Result<QuotientSpace> {
    check_tol(tol)?;
    k.check_finite()?;
    let n_all = k.len();
    if tau.len() != plus.len() {
        return Err(Error::InvalidArgument("tau and plus index lists differ in length".into()));
    }
    if let Some(&bad) = tau.iter().chain(plus).find(|&&i| i >= n_all) {
        return Err(Error::Index(bad));
    }
    let full = psd_check(k, tol)?;
    if !full.passed() {
        return Err(Error::InvalidArgument(format!(
            "kernel is not positive semidefinite (min eigenvalue {:e})",
            full.extremal_eig
        )));
    }
    let n = plus.len();
    let scale = k.scale();
    for i in 0..n {
        for j in 0..n {
            let a = k.entries[(tau[i], tau[j])];
            let b = k.entries[(plus[i], plus[j])];
            if (a - b).abs() > tol * scale {
                return Err(Error::NotTauInvariant);
            }
        }
    }
    let mut gt = DMatrix::from_fn(n, n, |i, j| k.entries[(tau[i], plus[j])]);
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (gt[(i, j)] + gt[(j, i)]);
            gt[(i, j)] = m;
            gt[(j, i)] = m;
        }
    }
    if n == 0 {
        return Ok(QuotientSpace {
            gram_tau: gt,
            rank: 0,
            null_dim: 0,
            q_gram_eigvals: vec![],
            q_vectors: DMatrix::zeros(0, 0),
            reproduction_error: 0.0,
        });
    }
    let eig = sym_eigen(&gt);
    if eig.min() < -tol * scale {
        return Err(Error::NotReflectionPositive { min_eig: eig.min(), witness: eig.vector(0) });
    }
    let keep: Vec<usize> = (0..n).rev().filter(|&i| eig.values[i] > tol * scale).collect();
    let rank = keep.len();
    let mut q = DMatrix::zeros(n, rank);
    for (c, &i) in keep.iter().enumerate() {
        let s = eig.values[i].sqrt();
        for r in 0..n {
            q[(r, c)] = s * eig.vectors[(r, i)];
        }
    }
    let rebuilt = &q * q.transpose();
    let reproduction_error = (&rebuilt - &gt).iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(QuotientSpace {
        gram_tau: gt,
        rank,
        null_dim: n - rank,
        q_gram_eigvals: eig.values.iter().rev().copied().collect(),
        q_vectors: q,
        reproduction_error,
    })
}
