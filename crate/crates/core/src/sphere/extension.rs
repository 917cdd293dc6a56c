//! Radial extension `Eφ(x) = ρ(|x|) φ(x/|x|)` of sphere densities and the
//! difference quotient `γ(ξ) = (φ̃(ξ) − φ(ξ/|ξ|)) / (|ξ|² − 1)`.

use super::{SphereDensity, SphereQuadrature};
use crate::error::{Error, Result};
use crate::findiff::derivative_1d;
use crate::testfn::BumpProfile;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct Extension {
    density: SphereDensity,
    bump: BumpProfile,
}

/// `Eφ` for a density given pointwise; point masses have no pointwise values.
pub fn extension_operator(density: &SphereDensity, bump: BumpProfile) -> Result<Extension> {
    if density.is_point_masses() {
        return Err(Error::InvalidParameter("point masses cannot be extended pointwise".into()));
    }
    Ok(Extension { density: density.clone(), bump })
}

impl Extension {
    pub fn d(&self) -> usize {
        self.density.d()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), got: x.len() });
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rho = self.bump.value(r);
        if rho == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let dir: Vec<f64> = x.iter().map(|v| v / r).collect();
        Ok(self.density.value(&dir).expect("pointwise density") * rho)
    }

    /// `Eφ` at the quadrature nodes.
    pub fn restrict(&self, quad: &SphereQuadrature) -> Result<Vec<Complex64>> {
        quad.nodes().iter().map(|x| self.eval(x)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaRow {
    pub k: u32,
    /// `|ξ|`.
    pub radius: f64,
    pub gamma_re: f64,
    pub gamma_im: f64,
    /// `(1 + |ξ|)^{−1} ∂_r φ̃(ξ)`.
    pub taylor_re: f64,
    pub taylor_im: f64,
    pub gap: f64,
}

/// `γ(rω)` for a unit direction `ω`.
pub fn gamma_quotient<T, P>(tilde: &T, phi: &P, omega: &[f64], r: f64) -> Complex64
where
    T: Fn(&[f64]) -> Complex64,
    P: Fn(&[f64]) -> Complex64,
{
    let xi: Vec<f64> = omega.iter().map(|w| r * w).collect();
    (tilde(&xi) - phi(omega)) / (r * r - 1.0)
}

/// `γ` at `|ξ| = 1 ± 10^{−k}`, `k = 2..=8`, against the leading Taylor term.
pub fn gamma_table<T, P>(tilde: &T, phi: &P, omega: &[f64]) -> Result<Vec<GammaRow>>
where
    T: Fn(&[f64]) -> Complex64,
    P: Fn(&[f64]) -> Complex64,
{
    let norm = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("direction has length {norm}")));
    }
    let along = |r: f64| -> Complex64 {
        let xi: Vec<f64> = omega.iter().map(|w| r * w).collect();
        tilde(&xi)
    };
    let mut rows = Vec::with_capacity(14);
    for k in 2..=8u32 {
        for sign in [-1.0, 1.0] {
            let r = 1.0 + sign * 10f64.powi(-(k as i32));
            let g = gamma_quotient(tilde, phi, omega, r);
            let dre = derivative_1d(|s| along(s).re, r, 1, 1e-4);
            let dim = derivative_1d(|s| along(s).im, r, 1, 1e-4);
            let t = Complex64::new(dre, dim) / (1.0 + r);
            rows.push(GammaRow {
                k,
                radius: r,
                gamma_re: g.re,
                gamma_im: g.im,
                taylor_re: t.re,
                taylor_im: t.im,
                gap: (g - t).norm(),
            });
        }
    }
    Ok(rows)
}
