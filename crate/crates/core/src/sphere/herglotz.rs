//! Herglotz synthesis and its layer derivatives.
//!
//! The order-`k` layer pairs `T` with the `k`-th radial derivative of the
//! test function `e_x(ξ) = e^{−ix·ξ}` in `ξ`, taken at `|ξ| = 1`:
//! `(−1)^k ∫ Φ(ξ) (−ix·ξ)^k e^{−ix·ξ} dσ(ξ)`.

use super::{DensityKind, SphereDensity, SphereQuadrature};
use crate::bernstein::BernsteinFn;
use crate::error::{Error, Result};
use crate::findiff::derivative_1d;
use num_complex::Complex64;
use serde::Serialize;
use std::cell::RefCell;

#[derive(Debug, Clone)]
pub struct LayerSpec {
    order: usize,
    density: SphereDensity,
}

impl LayerSpec {
    pub fn new(order: usize, density: SphereDensity) -> Result<Self> {
        if order > 2 {
            return Err(Error::UnsupportedOrder(order));
        }
        Ok(LayerSpec { order, density })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn density(&self) -> &SphereDensity {
        &self.density
    }
}

fn layer_kernel(order: usize, x: &[f64], xi: &[f64]) -> Complex64 {
    let s = Complex64::new(0.0, -x.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>());
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    s.powu(order as u32) * s.exp() * sign
}

/// `u(x) = ∫ Φ(ξ) e^{−ix·ξ} dσ(ξ)`; point masses are summed exactly.
pub fn herglotz(density: &SphereDensity, x: &[f64], quad: &SphereQuadrature) -> Result<Complex64> {
    herglotz_layer(&LayerSpec { order: 0, density: density.clone() }, x, quad)
}

/// `(−1)^k ⟨T, ∂_r^k e^{−i r x·ξ}|_{r=1}⟩`.
pub fn herglotz_layer(layer: &LayerSpec, x: &[f64], quad: &SphereQuadrature) -> Result<Complex64> {
    let density = &layer.density;
    let d = density.d();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }
    match density.kind() {
        DensityKind::PointMasses { nodes, coeffs } => Ok(nodes
            .iter()
            .zip(coeffs)
            .map(|(xi, c)| c * layer_kernel(layer.order, x, xi))
            .sum()),
        _ => {
            if quad.d() != d {
                return Err(Error::DimensionMismatch { expected: d, got: quad.d() });
            }
            Ok(quad.integrate(|xi| {
                density.value(xi).expect("non-point density") * layer_kernel(layer.order, x, xi)
            }))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerDemoReport {
    /// `‖(f(−Δ) − f(1))u‖ / ‖(−Δ − 1)u‖` over the sample grid.
    pub ratio: f64,
    /// `f′(1)`.
    pub prediction: f64,
    /// Largest pointwise deviation of `(−Δ − 1)u` from `2i e^{−ix}`.
    pub laplace_deviation: f64,
}

/// Residuals of the first-order point layer `u(x) = x e^{−ix}` on the line.
///
/// A multiplier `p(D)` with `p(D) e^{iκx} = p(κ) e^{iκx}` acts on
/// `x e^{iκx}` as `p(κ) x e^{iκx} − i p′(κ) e^{iκx}`. At `κ = −1` the
/// symbols `f(κ²) − f(1)` and `κ² − 1` both vanish, leaving
/// `−i p′(−1) e^{−ix}`; the ratio of the two residuals is `f′(1)`, never 0,
/// so `u` solves neither equation.
pub fn layer_residual_demo(f: &BernsteinFn, order: usize) -> Result<LayerDemoReport> {
    if order != 1 {
        return Err(Error::UnsupportedOrder(order));
    }
    if f.is_constant() {
        return Err(Error::ConstantSymbol);
    }
    let kappa = -1.0;
    let f1 = f.f1();
    let err = RefCell::new(None);
    let symbol = |k: f64| match f.eval(k * k) {
        Ok(v) => v - f1,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let p_f = symbol(kappa);
    let dp_f = derivative_1d(symbol, kappa, 1, 1e-3);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let (p_lap, dp_lap) = (kappa * kappa - 1.0, 2.0 * kappa);

    let residual = |p: f64, dp: f64, x: f64| {
        let mode = Complex64::from_polar(1.0, kappa * x);
        mode * Complex64::new(p * x, -dp)
    };
    let (mut e_f, mut e_lap, mut dev): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for j in 0..=400 {
        let x = -20.0 + 0.1 * j as f64;
        let r_lap = residual(p_lap, dp_lap, x);
        e_f += residual(p_f, dp_f, x).norm_sqr();
        e_lap += r_lap.norm_sqr();
        dev = dev.max((r_lap - Complex64::new(0.0, 2.0) * Complex64::from_polar(1.0, -x)).norm());
    }
    Ok(LayerDemoReport { ratio: (e_f / e_lap).sqrt(), prediction: f.fprime1(), laplace_deviation: dev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::{catalogue, parse_id};
    use crate::multiplier::{helmholtz_residual, GridFunction};
    use crate::quadrature::gauss_legendre;
    use crate::sphere::make_quadrature;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn uniform_density_on_s2() {
        let q = make_quadrature(3, 40).unwrap();
        let u = SphereDensity::uniform(3).unwrap();
        let at0 = herglotz(&u, &[0.0; 3], &q).unwrap();
        assert!((at0 - 4.0 * PI).norm() < 1e-10);
        // Oracle: 2π ∫₀^π e^{−ir cos θ} sin θ dθ by a 1-D rule.
        let gl = gauss_legendre(80).mapped(0.0, PI);
        for &r in &[1.0, 2.5] {
            let re = gl.integrate(|t| 2.0 * PI * (r * t.cos()).cos() * t.sin());
            let im = gl.integrate(|t| -2.0 * PI * (r * t.cos()).sin() * t.sin());
            let x = [r * 0.48, -r * 0.6, r * 0.64];
            let got = herglotz(&u, &x, &q).unwrap();
            assert!((got - c(re, im)).norm() < 1e-8, "r={r}");
            assert!((got.re - 4.0 * PI * r.sin() / r).abs() < 1e-8);
        }
    }

    #[test]
    fn point_mass_examples() {
        let q = make_quadrature(2, 8).unwrap();
        let p = SphereDensity::point_masses(2, vec![vec![1.0, 0.0]], vec![c(1.0, 0.0)]).unwrap();
        let v = herglotz(&p, &[PI, 0.0], &q).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);

        let cc = c(0.3, -1.2);
        let p = SphereDensity::point_masses(3, vec![vec![1.0, 0.0, 0.0]], vec![cc]).unwrap();
        let q3 = make_quadrature(3, 4).unwrap();
        let x = [0.7, -0.2, 1.1];
        let layer = LayerSpec::new(1, p.clone()).unwrap();
        let got = herglotz_layer(&layer, &x, &q3).unwrap();
        let expect = c(0.0, 1.0) * cc * x[0] * Complex64::from_polar(1.0, -x[0]);
        assert!((got - expect).norm() < 1e-14);
        let k0 = herglotz_layer(&LayerSpec::new(0, p.clone()).unwrap(), &x, &q3).unwrap();
        assert_eq!(k0, herglotz(&p, &x, &q3).unwrap());
        assert!(matches!(LayerSpec::new(3, p), Err(Error::UnsupportedOrder(3))));
    }

    #[test]
    fn first_layer_of_uniform_vanishes_at_origin() {
        let q = make_quadrature(3, 20).unwrap();
        let layer = LayerSpec::new(1, SphereDensity::uniform(3).unwrap()).unwrap();
        assert!(herglotz_layer(&layer, &[0.0; 3], &q).unwrap().norm() < 1e-15);
    }

    #[test]
    fn dimension_checks() {
        let q = make_quadrature(2, 8).unwrap();
        let u = SphereDensity::uniform(3).unwrap();
        assert!(matches!(herglotz(&u, &[0.0; 3], &q), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(herglotz(&u, &[0.0; 2], &q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lattice_point_masses_are_eigenfunctions() {
        let nodes = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let coeffs = vec![c(0.3, 0.1), c(-1.0, 0.5), c(0.2, 0.0), c(0.0, -0.7)];
        let t = SphereDensity::point_masses(2, nodes, coeffs).unwrap();
        let q = make_quadrature(2, 4).unwrap();
        let u = GridFunction::from_fn(2, 32, 2.0 * PI, |x| herglotz(&t, x, &q).unwrap()).unwrap();
        for f in catalogue() {
            assert!(helmholtz_residual(&u, &f, 0.1).unwrap().res_f <= 1e-12, "{}", f.name());
        }
    }

    #[test]
    fn quadrature_converges_in_degree() {
        let t = SphereDensity::polynomial(3, vec![vec![0, 0, 0], vec![1, 2, 0]], vec![c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        for &r in &[1.0, 3.0, 5.0] {
            let x = [r * 0.6, 0.0, r * 0.8];
            let base = (4.0 * r) as usize + 20;
            let a = herglotz(&t, &x, &make_quadrature(3, base).unwrap()).unwrap();
            let b = herglotz(&t, &x, &make_quadrature(3, 2 * base).unwrap()).unwrap();
            assert!((a - b).norm() < 1e-10, "r={r}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn real_even_density_gives_real_wave(x in prop::array::uniform3(-4.0f64..4.0)) {
            let t = SphereDensity::polynomial(3, vec![vec![0, 0, 0], vec![2, 0, 0], vec![1, 1, 0]], vec![c(1.0, 0.0), c(-0.5, 0.0), c(2.0, 0.0)]).unwrap();
            let q = make_quadrature(3, 40).unwrap();
            let u = herglotz(&t, &x, &q).unwrap();
            prop_assert!(u.im.abs() < 1e-12);
        }
    }

    #[test]
    fn layer_demo_ratio_is_derivative_at_one() {
        let id = layer_residual_demo(&parse_id("affine:0,1").unwrap(), 1).unwrap();
        assert!((id.ratio - 1.0).abs() < 1e-12);
        assert!(id.laplace_deviation < 1e-12);
        for name in ["fractional:0.5", "log1p"] {
            let r = layer_residual_demo(&parse_id(name).unwrap(), 1).unwrap();
            assert!((r.ratio - 0.5).abs() < 1e-6, "{name}: {}", r.ratio);
        }
        for f in catalogue() {
            let r = layer_residual_demo(&f, 1).unwrap();
            assert!((r.ratio - r.prediction).abs() < 1e-6, "{}", f.name());
        }
        assert!(matches!(layer_residual_demo(&parse_id("log1p").unwrap(), 2), Err(Error::UnsupportedOrder(2))));
    }
}
