//! Small dense linear algebra: symmetric eigendecomposition and
//! nonnegative least squares.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenvalues in ascending order with matching unit eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct SortedEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SortedEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i).iter().copied().collect()
    }
}

/// Full symmetric eigendecomposition (Householder tridiagonalisation + implicit QL).
pub fn sym_eigen(m: &DMatrix<f64>) -> SortedEigen {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    SortedEigen { values, vectors }
}

/// Lawson–Hanson active-set NNLS: minimise |Ax - b| subject to x >= 0.
///
/// Columns are normalised internally; zero columns get a zero coefficient.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let (m, n) = a.shape();
    let mut scale = vec![0.0; n];
    let mut an = a.clone();
    for (j, s) in scale.iter_mut().enumerate() {
        let nrm = a.column(j).norm();
        *s = nrm;
        if nrm > 0.0 && nrm.is_finite() {
            an.column_mut(j).scale_mut(1.0 / nrm);
        } else {
            an.column_mut(j).fill(0.0);
        }
    }
    let usable: Vec<bool> = scale.iter().map(|s| *s > 0.0 && s.is_finite()).collect();

    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let tol = 10.0 * f64::EPSILON * (m.max(n) as f64) * b.norm().max(1e-300);
    let max_outer = 3 * n + 10;

    for _ in 0..max_outer {
        let resid = b - &an * &x;
        let w = an.transpose() * resid;
        let cand = (0..n)
            .filter(|&j| !passive[j] && usable[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = cand else { break };
        if w[j] <= tol {
            break;
        }
        passive[j] = true;

        for _ in 0..(3 * n + 10) {
            let s = solve_passive(&an, b, &passive);
            let bad: Vec<usize> = (0..n).filter(|&i| passive[i] && s[i] <= 0.0).collect();
            if bad.is_empty() {
                x = s;
                break;
            }
            let alpha = bad
                .iter()
                .map(|&i| x[i] / (x[i] - s[i]))
                .fold(f64::INFINITY, f64::min);
            x += (s - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= 1e-300 {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    for j in 0..n {
        x[j] = if usable[j] { (x[j] / scale[j]).max(0.0) } else { 0.0 };
    }
    x
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let n = a.ncols();
    let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
    let mut sub = DMatrix::zeros(a.nrows(), idx.len());
    for (k, &i) in idx.iter().enumerate() {
        sub.set_column(k, &a.column(i));
    }
    let svd = sub.svd(true, true);
    let eps = f64::EPSILON * svd.singular_values.max() * (a.nrows().max(idx.len()) as f64);
    let sol = svd.solve(b, eps).unwrap_or_else(|_| DVector::zeros(idx.len()));
    let mut out = DVector::zeros(n);
    for (k, &i) in idx.iter().enumerate() {
        out[i] = sol[k];
    }
    out
}
