//! The `B*` profile `g(R) = R^{−1} ∫_{|x|<R} |u|² dx` of a Herglotz wave.
//!
//! The angular part of `∫_{|x|<R} |u|²` is done exactly. Expanding the
//! plane wave in harmonics gives the spherical mean of `|u(r·)|²`:
//!
//! * `S²`: `A(r) = 16π² Σ_l j_l(r)² Σ_m |c_lm|²`, `c_lm = ∫ Φ Y_lm dσ`;
//! * `S¹`: `A(r) = 8π³ Σ_m |c_m|² J_|m|(r)²` for `Φ = Σ c_m e^{imθ}`;
//! * point masses: `Σ_jk c_j c̄_k K(r|ξ_j − ξ_k|)` with `K = 4π j₀` or `2π J₀`.
//!
//! Only the radial integral `∫₀^R A(r) r^{d−1} dr` is discretized.

use super::{DensityKind, SphereDensity, SphereQuadrature};
use crate::error::{Error, Result};
use crate::quadrature::{composite, gauss_legendre};
use crate::special::{bessel_j_all, real_sph_harmonics, sh_index, sph_bessel_j_all};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

pub const BSTAR_GRID_POINTS: usize = 128;
pub const BSTAR_R_MAX: f64 = 500.0;
/// Cap on radial nodes times spectral terms.
pub const BSTAR_NODE_CAP: usize = 200_000_000;
const PANEL_WIDTH: f64 = 0.5;
const PANEL_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BStarProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub sup: f64,
    pub sup_radius: f64,
    /// `lim g(R)` when finite and known in closed form.
    pub limit: Option<f64>,
}

impl BStarProfile {
    /// CSV with columns `R, g_R`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let fmt = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["R", "g_R"]).map_err(fmt)?;
        for (r, g) in self.radii.iter().zip(&self.values) {
            out.write_record([format!("{r}"), format!("{g:e}")]).map_err(fmt)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Squared spectral weights of a density.
enum Spectrum {
    /// `w_l = Σ_m |c_lm|²` per degree on `S²`, or `|c_m|²` per `|m|` on `S¹`.
    Radial(Vec<f64>),
    /// Point masses: pair separations and `Re(c_j c̄_k)`.
    Pairs(Vec<(f64, f64)>),
}

fn spectrum(density: &SphereDensity, quad: &SphereQuadrature) -> Result<Spectrum> {
    let d = density.d();
    if d != 2 && d != 3 {
        return Err(Error::Domain(format!("B* profile needs d in {{2, 3}}, got {d}")));
    }
    match density.kind() {
        DensityKind::PointMasses { nodes, coeffs } => {
            let mut pairs = Vec::with_capacity(nodes.len() * nodes.len());
            for (xj, cj) in nodes.iter().zip(coeffs) {
                for (xk, ck) in nodes.iter().zip(coeffs) {
                    let sep = xj.iter().zip(xk).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                    pairs.push((sep, (cj * ck.conj()).re));
                }
            }
            Ok(Spectrum::Pairs(pairs))
        }
        DensityKind::Harmonic { order, coeffs } => {
            let m0 = *order;
            let mut w = vec![0.0; m0 + 1];
            if d == 2 {
                for (i, c) in coeffs.iter().enumerate() {
                    w[(i as i64 - m0 as i64).unsigned_abs() as usize] += c.norm_sqr();
                }
            } else {
                for l in 0..=m0 {
                    w[l] = (-(l as i64)..=l as i64).map(|m| coeffs[sh_index(l, m)].norm_sqr()).sum();
                }
            }
            Ok(Spectrum::Radial(w))
        }
        DensityKind::Smooth(_) => {
            let band = density.bandwidth();
            if quad.d() != d {
                return Err(Error::DimensionMismatch { expected: d, got: quad.d() });
            }
            if quad.degree() < 2 * band {
                return Err(Error::InvalidParameter(format!(
                    "quadrature degree {} cannot project a band-{band} density",
                    quad.degree()
                )));
            }
            let mut w = vec![0.0; band + 1];
            if d == 2 {
                for m in -(band as i64)..=band as i64 {
                    let c = quad.integrate(|xi| {
                        let t = xi[1].atan2(xi[0]);
                        density.value(xi).expect("smooth") * Complex64::from_polar(1.0, -(m as f64) * t)
                    }) / (2.0 * PI);
                    w[m.unsigned_abs() as usize] += c.norm_sqr();
                }
            } else {
                let mut c = vec![Complex64::new(0.0, 0.0); (band + 1) * (band + 1)];
                for (xi, &wt) in quad.nodes().iter().zip(quad.weights()) {
                    let v = density.value(xi).expect("smooth") * wt;
                    for (acc, y) in c.iter_mut().zip(real_sph_harmonics(band, xi)) {
                        *acc += v * y;
                    }
                }
                for l in 0..=band {
                    w[l] = (-(l as i64)..=l as i64).map(|m| c[sh_index(l, m)].norm_sqr()).sum();
                }
            }
            Ok(Spectrum::Radial(w))
        }
    }
}

impl Spectrum {
    fn terms(&self) -> usize {
        match self {
            Spectrum::Radial(w) => w.len(),
            Spectrum::Pairs(p) => p.len(),
        }
    }

    /// Spherical mean `∫_{S^{d−1}} |u(rθ)|² dσ(θ)`.
    fn shell(&self, d: usize, r: f64) -> f64 {
        match self {
            Spectrum::Radial(w) => {
                let top = w.len() - 1;
                if d == 3 {
                    let j = sph_bessel_j_all(top, r);
                    16.0 * PI * PI * w.iter().zip(&j).map(|(a, b)| a * b * b).sum::<f64>()
                } else {
                    let j = bessel_j_all(top, r);
                    8.0 * PI.powi(3) * w.iter().zip(&j).map(|(a, b)| a * b * b).sum::<f64>()
                }
            }
            Spectrum::Pairs(p) => p
                .iter()
                .map(|&(sep, c)| {
                    let z = r * sep;
                    let k = if d == 3 {
                        4.0 * PI * if z < 1e-8 { 1.0 - z * z / 6.0 } else { z.sin() / z }
                    } else {
                        2.0 * PI * bessel_j_all(0, z)[0]
                    };
                    c * k
                })
                .sum(),
        }
    }

    fn limit(&self) -> Option<f64> {
        match self {
            // R^{−1} ∫₀^R r² j_l² → 1/2 and R^{−1} ∫₀^R r J_m² → 1/π.
            Spectrum::Radial(w) => Some(8.0 * PI * PI * w.iter().sum::<f64>()),
            Spectrum::Pairs(p) => p.iter().all(|&(_, c)| c == 0.0).then_some(0.0),
        }
    }
}

/// `lim_{R→∞} g(R)`: `8π² Σ |c|²` for `L²` densities, `None` (unbounded) for
/// nonzero point masses.
pub fn bstar_limit(density: &SphereDensity, quad: &SphereQuadrature) -> Result<Option<f64>> {
    Ok(spectrum(density, quad)?.limit())
}

/// `g(R)` on `BSTAR_GRID_POINTS` log-spaced radii in `(1, r_max]` and its
/// maximum there.
pub fn bstar_norm(density: &SphereDensity, r_max: f64, quad: &SphereQuadrature) -> Result<BStarProfile> {
    bstar_norm_capped(density, r_max, quad, BSTAR_NODE_CAP)
}

/// [`bstar_norm`] with an explicit work cap.
pub fn bstar_norm_capped(
    density: &SphereDensity,
    r_max: f64,
    quad: &SphereQuadrature,
    cap: usize,
) -> Result<BStarProfile> {
    if !(r_max > 1.0 && r_max <= BSTAR_R_MAX) {
        return Err(Error::Domain(format!("R_max = {r_max} outside (1, {BSTAR_R_MAX}]")));
    }
    let d = density.d();
    let spec = spectrum(density, quad)?;
    let radii: Vec<f64> = (1..=BSTAR_GRID_POINTS)
        .map(|i| r_max.powf(i as f64 / BSTAR_GRID_POINTS as f64))
        .collect();
    let radial_nodes = (r_max / PANEL_WIDTH).ceil() as usize * PANEL_NODES + BSTAR_GRID_POINTS * PANEL_NODES;
    let needed = radial_nodes.saturating_mul(spec.terms().max(1));
    if needed > cap {
        return Err(Error::BudgetExceeded { needed, cap });
    }

    let base = gauss_legendre(PANEL_NODES);
    let mut acc = 0.0;
    let mut lo = 0.0;
    let mut values = Vec::with_capacity(radii.len());
    for &r in &radii {
        let rule = composite(&base, lo, r, PANEL_WIDTH);
        acc += rule.integrate(|s| spec.shell(d, s) * s.powi(d as i32 - 1));
        values.push(acc / r);
        lo = r;
    }
    let (imax, &sup) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    Ok(BStarProfile { sup_radius: radii[imax], radii, values, sup, limit: spec.limit() })
}
