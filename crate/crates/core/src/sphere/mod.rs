//! Quadrature on `S^{d−1}`, Herglotz waves `u(x) = ∫ Φ(ξ) e^{−ix·ξ} dσ(ξ)`
//! synthesized from sphere densities and their layer derivatives, and the
//! `B*` profile `g(R) = R^{−1} ∫_{|x|<R} |u|²`.
//!
//! Synthesis carries no `(2π)^{−d}` factor: `u` is exactly the integral above.

mod bstar;
mod density;
mod extension;
mod herglotz;

pub use bstar::{bstar_limit, bstar_norm, bstar_norm_capped, BStarProfile, BSTAR_GRID_POINTS, BSTAR_NODE_CAP, BSTAR_R_MAX};
pub use density::{DensityKind, SmoothDensity, SphereDensity, MAX_HARMONIC_ORDER};
pub use extension::{extension_operator, gamma_quotient, gamma_table, Extension, GammaRow};
pub use herglotz::{herglotz, herglotz_layer, layer_residual_demo, LayerDemoReport, LayerSpec};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use std::f64::consts::PI;

/// Largest supported quadrature degree.
pub const MAX_DEGREE: usize = 200;

/// Nodes and positive weights on `S^{d−1}` summing to its surface measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    d: usize,
    degree: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
        F: FnMut(&[f64]) -> T,
    {
        self.nodes.iter().zip(&self.weights).map(|(x, &w)| f(x) * w).sum()
    }
}

/// Surface measure of `S^{d−1}`: 2, 2π, 4π.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => f64::NAN,
    }
}

/// `d = 1`: the two points `±1`; `d = 2`: trapezoid rule with `degree + 1`
/// angles; `d = 3`: Gauss–Legendre in `cos θ` times `degree + 1` uniform
/// longitudes.
pub fn make_quadrature(d: usize, degree: usize) -> Result<SphereQuadrature> {
    if degree > MAX_DEGREE {
        return Err(Error::Domain(format!("quadrature degree {degree} above {MAX_DEGREE}")));
    }
    let (nodes, weights) = match d {
        1 => (vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0]),
        2 => {
            let n = degree + 1;
            let nodes = (0..n)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / n as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            (nodes, vec![2.0 * PI / n as f64; n])
        }
        3 => {
            let gl = gauss_legendre(degree / 2 + 1);
            let np = degree + 1;
            let mut nodes = Vec::with_capacity(gl.len() * np);
            let mut weights = Vec::with_capacity(gl.len() * np);
            for (&ct, &wt) in gl.nodes.iter().zip(&gl.weights) {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for k in 0..np {
                    let phi = 2.0 * PI * k as f64 / np as f64;
                    nodes.push(vec![st * phi.cos(), st * phi.sin(), ct]);
                    weights.push(wt * 2.0 * PI / np as f64);
                }
            }
            (nodes, weights)
        }
        _ => return Err(Error::Domain(format!("no sphere quadrature in dimension {d}"))),
    };
    Ok(SphereQuadrature { d, degree, nodes, weights })
}
