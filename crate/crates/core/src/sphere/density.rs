//! Densities on `S^{d−1}` and their JSON form
//! `{"d": int, "kind": "point|smooth|harmonic", "nodes": [...], "coeffs": [...]}`.
//!
//! Complex coefficients are written as a number or an `[re, im]` pair.
//! Smooth densities are polynomials `Σ c_j ξ^{e_j}` whose `nodes` are the
//! exponent multi-indices `e_j`. Harmonic coefficients are `c_{−M..M}` of
//! `Σ c_m e^{imθ}` on the circle, or `(M + 1)²` real spherical-harmonic
//! coefficients in `(l, m)` order on `S²`.

use crate::error::{Error, Result};
use crate::special::real_sph_harmonics;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub const MAX_HARMONIC_ORDER: usize = 64;
const UNIT_TOL: f64 = 1e-14;

/// A smooth density given by a formula.
#[derive(Clone)]
pub enum SmoothDensity {
    /// `Σ c_j ξ^{e_j}`.
    Polynomial { exponents: Vec<Vec<u32>>, coeffs: Vec<Complex64> },
    /// Arbitrary callable; `bandwidth` bounds its harmonic degree for
    /// spectral projections.
    Custom { func: Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>, bandwidth: usize },
}

impl fmt::Debug for SmoothDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothDensity::Polynomial { exponents, coeffs } => f
                .debug_struct("Polynomial")
                .field("exponents", exponents)
                .field("coeffs", coeffs)
                .finish(),
            SmoothDensity::Custom { bandwidth, .. } => {
                f.debug_struct("Custom").field("bandwidth", bandwidth).finish_non_exhaustive()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum DensityKind {
    PointMasses { nodes: Vec<Vec<f64>>, coeffs: Vec<Complex64> },
    Smooth(SmoothDensity),
    Harmonic { order: usize, coeffs: Vec<Complex64> },
}

#[derive(Debug, Clone)]
pub struct SphereDensity {
    d: usize,
    kind: DensityKind,
}

fn check_dim(d: usize, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&d) {
        Ok(())
    } else {
        Err(Error::Domain(format!("density kind unavailable in dimension {d}")))
    }
}

impl SphereDensity {
    pub fn point_masses(d: usize, nodes: Vec<Vec<f64>>, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dim(d, &[1, 2, 3])?;
        if nodes.len() != coeffs.len() {
            return Err(Error::InvalidParameter(format!(
                "{} nodes but {} coefficients",
                nodes.len(),
                coeffs.len()
            )));
        }
        for node in &nodes {
            if node.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: node.len() });
            }
            let r = node.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !((r - 1.0).abs() <= UNIT_TOL) {
                return Err(Error::InvalidParameter(format!("node {node:?} is off the unit sphere")));
            }
        }
        Ok(SphereDensity { d, kind: DensityKind::PointMasses { nodes, coeffs } })
    }

    pub fn polynomial(d: usize, exponents: Vec<Vec<u32>>, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dim(d, &[2, 3])?;
        if exponents.len() != coeffs.len() {
            return Err(Error::InvalidParameter("exponent and coefficient counts differ".into()));
        }
        if let Some(e) = exponents.iter().find(|e| e.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: e.len() });
        }
        Ok(SphereDensity { d, kind: DensityKind::Smooth(SmoothDensity::Polynomial { exponents, coeffs }) })
    }

    pub fn custom<F>(d: usize, bandwidth: usize, func: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        check_dim(d, &[2, 3])?;
        let smooth = SmoothDensity::Custom { func: Arc::new(func), bandwidth };
        Ok(SphereDensity { d, kind: DensityKind::Smooth(smooth) })
    }

    /// `Φ ≡ 1` (on `S⁰`, unit masses at `±1`).
    pub fn uniform(d: usize) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        if d == 1 {
            return Self::point_masses(1, vec![vec![1.0], vec![-1.0]], vec![one, one]);
        }
        Self::polynomial(d, vec![vec![0; d]], vec![one])
    }

    pub fn harmonic(d: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dim(d, &[2, 3])?;
        let order = match d {
            2 if coeffs.len() % 2 == 1 => (coeffs.len() - 1) / 2,
            3 => {
                let s = (coeffs.len() as f64).sqrt().round() as usize;
                if s == 0 || s * s != coeffs.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} spherical-harmonic coefficients is not a square count",
                        coeffs.len()
                    )));
                }
                s - 1
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "{} circle coefficients is not an odd count",
                    coeffs.len()
                )))
            }
        };
        if order > MAX_HARMONIC_ORDER {
            return Err(Error::InvalidParameter(format!(
                "harmonic order {order} above {MAX_HARMONIC_ORDER}"
            )));
        }
        Ok(SphereDensity { d, kind: DensityKind::Harmonic { order, coeffs } })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    pub fn is_point_masses(&self) -> bool {
        matches!(self.kind, DensityKind::PointMasses { .. })
    }

    /// `Φ(ξ)` for smooth and harmonic densities; `None` for point masses.
    pub fn value(&self, xi: &[f64]) -> Option<Complex64> {
        match &self.kind {
            DensityKind::PointMasses { .. } => None,
            DensityKind::Smooth(SmoothDensity::Polynomial { exponents, coeffs }) => Some(
                exponents
                    .iter()
                    .zip(coeffs)
                    .map(|(e, c)| {
                        let mono: f64 = xi.iter().zip(e).map(|(x, &p)| x.powi(p as i32)).product();
                        c * mono
                    })
                    .sum(),
            ),
            DensityKind::Smooth(SmoothDensity::Custom { func, .. }) => Some(func(xi)),
            DensityKind::Harmonic { order, coeffs } => Some(match self.d {
                2 => {
                    let theta = xi[1].atan2(xi[0]);
                    let m0 = *order as i64;
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c * Complex64::from_polar(1.0, (i as i64 - m0) as f64 * theta))
                        .sum()
                }
                _ => {
                    let y = real_sph_harmonics(*order, xi);
                    coeffs.iter().zip(&y).map(|(c, v)| c * v).sum()
                }
            }),
        }
    }

    /// Harmonic degree bound used by spectral projections.
    pub fn bandwidth(&self) -> usize {
        match &self.kind {
            DensityKind::PointMasses { .. } => 0,
            DensityKind::Smooth(SmoothDensity::Polynomial { exponents, .. }) => exponents
                .iter()
                .map(|e| e.iter().sum::<u32>() as usize)
                .max()
                .unwrap_or(0),
            DensityKind::Smooth(SmoothDensity::Custom { bandwidth, .. }) => *bandwidth,
            DensityKind::Harmonic { order, .. } => *order,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DensityFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("density JSON: {e}")))?;
        let coeffs: Vec<Complex64> = file.coeffs.iter().map(|c| c.to_complex()).collect();
        let built = match file.kind.as_str() {
            "point" => Self::point_masses(file.d, file.nodes, coeffs),
            "smooth" => {
                let exponents = file
                    .nodes
                    .iter()
                    .map(|e| {
                        e.iter()
                            .map(|&p| {
                                (p >= 0.0 && p.fract() == 0.0 && p <= 64.0)
                                    .then_some(p as u32)
                                    .ok_or_else(|| Error::Format(format!("exponent {p} is not a small natural number")))
                            })
                            .collect::<Result<Vec<u32>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::polynomial(file.d, exponents, coeffs)
            }
            "harmonic" => Self::harmonic(file.d, coeffs),
            other => return Err(Error::Format(format!("unknown density kind '{other}'"))),
        };
        built.map_err(|e| Error::Format(e.to_string()))
    }

    /// JSON form; custom densities have none.
    pub fn to_json(&self) -> Result<String> {
        let pair = |c: &Complex64| ComplexValue::Pair([c.re, c.im]);
        let file = match &self.kind {
            DensityKind::PointMasses { nodes, coeffs } => DensityFile {
                d: self.d,
                kind: "point".into(),
                nodes: nodes.clone(),
                coeffs: coeffs.iter().map(pair).collect(),
            },
            DensityKind::Smooth(SmoothDensity::Polynomial { exponents, coeffs }) => DensityFile {
                d: self.d,
                kind: "smooth".into(),
                nodes: exponents.iter().map(|e| e.iter().map(|&p| p as f64).collect()).collect(),
                coeffs: coeffs.iter().map(pair).collect(),
            },
            DensityKind::Smooth(SmoothDensity::Custom { .. }) => {
                return Err(Error::Format("custom densities have no JSON form".into()))
            }
            DensityKind::Harmonic { coeffs, .. } => DensityFile {
                d: self.d,
                kind: "harmonic".into(),
                nodes: vec![],
                coeffs: coeffs.iter().map(pair).collect(),
            },
        };
        serde_json::to_string(&file).map_err(|e| Error::Format(e.to_string()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityFile {
    d: usize,
    kind: String,
    #[serde(default)]
    nodes: Vec<Vec<f64>>,
    #[serde(default)]
    coeffs: Vec<ComplexValue>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    fn to_complex(&self) -> Complex64 {
        match *self {
            ComplexValue::Real(r) => Complex64::new(r, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}
