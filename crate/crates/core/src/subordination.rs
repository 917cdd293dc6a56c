//! Phillips functional calculus on symmetric positive-semidefinite matrices.
//!
//! For a Bernstein function with triple `(a, b, µ)` and generator `A`,
//! `f(A)u = a u + b A u + ∫ (u − e^{−tA}u) µ(dt)`, with the integral
//! discretized by the same node scheme as scalar evaluation. Eigenvalues of
//! `A` enter through the semigroup only; [`spectral_apply`] is the
//! independent reference `V f(Λ) Vᵀ u`.
//!
//! Matrix text format: the order `m`, then `m²` whitespace-separated reals
//! in row-major order.

use crate::bernstein::BernsteinFn;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-12;
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Distance from 1 at which an eigenvalue counts as the unit eigenvalue.
pub const UNIT_EIGEN_TOL: f64 = 1e-12;

/// `A = V Λ Vᵀ` with `Λ ≥ 0`.
#[derive(Debug, Clone)]
pub struct MatrixGenerator {
    matrix: DMatrix<f64>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl MatrixGenerator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let m = matrix.nrows();
        if m == 0 || matrix.ncols() != m {
            return Err(Error::Size(format!("generator must be square, got {}×{}", m, matrix.ncols())));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("generator has non-finite entries".into()));
        }
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let eig = SymmetricEigen::new(matrix.clone());
        let min = eig.eigenvalues.min();
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        let eigenvalues = eig.eigenvalues.map(|l| l.max(0.0));
        let eigenvectors = eig.eigenvectors;
        let rebuilt = &eigenvectors * DMatrix::from_diagonal(&eigenvalues) * eigenvectors.transpose();
        let err = (&rebuilt - &matrix).norm();
        if err > RECONSTRUCTION_TOL * matrix.norm().max(1.0) {
            return Err(Error::InvalidParameter(format!("spectral reconstruction error {err:e}")));
        }
        Ok(MatrixGenerator { matrix, eigenvalues, eigenvectors })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `V g(Λ) Vᵀ u`.
    fn spectral_map<G: Fn(f64) -> f64>(&self, u: &DVector<f64>, g: G) -> DVector<f64> {
        let coeffs = self.eigenvectors.transpose() * u;
        let scaled = DVector::from_iterator(
            coeffs.len(),
            coeffs.iter().zip(self.eigenvalues.iter()).map(|(c, &l)| c * g(l)),
        );
        &self.eigenvectors * scaled
    }

    /// `e^{−tA}`.
    pub fn semigroup(&self, t: f64) -> Result<DMatrix<f64>> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("semigroup time {t} must be ≥ 0")));
        }
        let diag = self.eigenvalues.map(|l| (-t * l).exp());
        Ok(&self.eigenvectors * DMatrix::from_diagonal(&diag) * self.eigenvectors.transpose())
    }

    /// `u − e^{−tA}u`, computed without cancellation.
    fn increment(&self, t: f64, u: &DVector<f64>) -> DVector<f64> {
        self.spectral_map(u, |l| -(-t * l).exp_m1())
    }
}

fn check_vector(a: &MatrixGenerator, u: &DVector<f64>) -> Result<()> {
    if u.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: u.len() });
    }
    Ok(())
}

/// `f(A)u` by subordination.
pub fn phillips_apply(a: &MatrixGenerator, f: &BernsteinFn, u: &DVector<f64>) -> Result<DVector<f64>> {
    check_vector(a, u)?;
    let triple = f
        .triple()
        .ok_or_else(|| Error::InvalidParameter(format!("{} has no Lévy triple", f.name())))?;
    let mut out = u * triple.a + a.matrix() * u * triple.b;
    let positive: Vec<f64> = a.eigenvalues.iter().copied().filter(|&l| l > PSD_TOL).collect();
    if triple.measure.is_zero() || positive.is_empty() {
        return Ok(out);
    }
    let lo = positive.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = positive.iter().copied().fold(0.0, f64::max);
    let disc = triple.discretize(lo, hi, 0)?;
    for (&t, &w) in disc.nodes.iter().zip(&disc.weights) {
        out += a.increment(t, u) * w;
    }
    if let Some((t, m)) = disc.tail {
        out += a.increment(t, u) * m;
    }
    Ok(out)
}

/// `V f(Λ) Vᵀ u` from closed-form values.
pub fn spectral_apply(a: &MatrixGenerator, f: &BernsteinFn, u: &DVector<f64>) -> Result<DVector<f64>> {
    check_vector(a, u)?;
    let values: Vec<f64> = a.eigenvalues.iter().map(|&l| f.eval(l)).collect::<Result<_>>()?;
    let coeffs = a.eigenvectors.transpose() * u;
    let scaled = DVector::from_iterator(coeffs.len(), coeffs.iter().zip(&values).map(|(c, v)| c * v));
    Ok(&a.eigenvectors * scaled)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub eigenvalue: f64,
    pub f1: f64,
    /// `‖f(A)u − f(1)u‖ / ‖u‖` for the unit eigenvector `u`.
    pub residual: f64,
}

/// Unit eigenvector (`Au = u`) of `A`, if any.
pub fn unit_eigenvector(a: &MatrixGenerator) -> Result<(f64, DVector<f64>)> {
    let (i, l) = a
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 - 1.0).abs().total_cmp(&(y.1 - 1.0).abs()))
        .ok_or(Error::NoUnitEigenvalue)?;
    if (l - 1.0).abs() > UNIT_EIGEN_TOL {
        return Err(Error::NoUnitEigenvalue);
    }
    Ok((*l, a.eigenvectors.column(i).into_owned()))
}

/// Checks `f(A)u = f(1)u` on the unit eigenvector.
pub fn eigen_transfer_check(a: &MatrixGenerator, f: &BernsteinFn) -> Result<TransferReport> {
    let (eigenvalue, u) = unit_eigenvector(a)?;
    eigen_transfer_check_on(a, f, &u).map(|r| TransferReport { eigenvalue, ..r })
}

/// [`eigen_transfer_check`] on a caller-supplied eigenvector.
pub fn eigen_transfer_check_on(a: &MatrixGenerator, f: &BernsteinFn, u: &DVector<f64>) -> Result<TransferReport> {
    let norm = u.norm();
    if !(norm > 0.0) {
        return Err(Error::InvalidParameter("eigenvector must be nonzero".into()));
    }
    let au = a.matrix() * u;
    let eigenvalue = au.dot(u) / (norm * norm);
    if (eigenvalue - 1.0).abs() > UNIT_EIGEN_TOL || (&au - u).norm() > UNIT_EIGEN_TOL * norm.max(1.0) * 10.0 {
        return Err(Error::NoUnitEigenvalue);
    }
    let fu = phillips_apply(a, f, u)?;
    let residual = (fu - u * f.f1()).norm() / norm;
    Ok(TransferReport { eigenvalue, f1: f.f1(), residual })
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut tokens = text.split_whitespace();
    let m: usize = tokens
        .next()
        .ok_or_else(|| Error::Format("empty matrix file".into()))?
        .parse()
        .map_err(|e| Error::Format(format!("matrix order: {e}")))?;
    if m == 0 || m > 4096 {
        return Err(Error::Format(format!("matrix order {m} out of range")));
    }
    let values: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().map_err(|e| Error::Format(format!("matrix entry '{t}': {e}"))))
        .collect::<Result<_>>()?;
    if values.len() != m * m {
        return Err(Error::Format(format!("expected {} entries, found {}", m * m, values.len())));
    }
    Ok(DMatrix::from_row_slice(m, m, &values))
}

pub fn format_matrix(a: &DMatrix<f64>) -> String {
    let mut out = format!("{}\n", a.nrows());
    for row in a.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
