//! Annulus bumps and Fourier-side test functions supported away from the
//! origin, with finite-difference checks of the products `f(|x|²) φ̂(x)`.
//!
//! A [`ZTestFunction`] is `φ̂(ξ) = A · w(|ξ|) · (1 + t·ξ)` where `w` is a
//! smooth radial window vanishing outside `[r₀, r₁]`, so every derivative of
//! `φ̂` vanishes at the origin. Suprema are grid maxima: lower bounds that
//! converge under refinement, not certified values.

use crate::bernstein::BernsteinFn;
use crate::error::{Error, Result};
use crate::findiff::{central_stencil, multi_indices, partial, stencil_reach};
use crate::multiplier::GridFunction;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cell::RefCell;

fn glue(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// `g(x) / (g(x) + g(1 − x))` with `g(x) = e^{−1/x}`: 0 for `x ≤ 0`, 1 for
/// `x ≥ 1`, smooth in between.
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let (a, b) = (glue(x), glue(1.0 - x));
        a / (a + b)
    }
}

pub fn smoothstep_derivative(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let (a, b) = (glue(x), glue(1.0 - x));
    a * b * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) / ((a + b) * (a + b))
}

/// Radial window: 1 on `|r − center| ≤ plateau`, 0 on `|r − center| ≥ outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialWindow {
    pub center: f64,
    pub plateau: f64,
    pub outer: f64,
}

impl RadialWindow {
    fn argument(&self, r: f64) -> f64 {
        (self.outer - (r - self.center).abs()) / (self.outer - self.plateau)
    }

    pub fn value(&self, r: f64) -> f64 {
        smoothstep(self.argument(r))
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let sign = if r >= self.center { -1.0 } else { 1.0 };
        smoothstep_derivative(self.argument(r)) * sign / (self.outer - self.plateau)
    }

    pub fn inner_radius(&self) -> f64 {
        self.center - self.outer
    }

    pub fn outer_radius(&self) -> f64 {
        self.center + self.outer
    }

    pub fn transition_width(&self) -> f64 {
        self.outer - self.plateau
    }
}

/// The annulus bump: 1 on `[1 − ε/4, 1 + ε/4]`, 0 outside `(1 − ε/2, 1 + ε/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpProfile {
    eps: f64,
    window: RadialWindow,
}

impl BumpProfile {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Domain(format!("bump width {eps} outside (0, 1)")));
        }
        let window = RadialWindow { center: 1.0, plateau: eps / 4.0, outer: eps / 2.0 };
        Ok(BumpProfile { eps, window })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn window(&self) -> RadialWindow {
        self.window
    }

    pub fn value(&self, r: f64) -> f64 {
        self.window.value(r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.window.derivative(r)
    }
}

/// `φ̂(ξ) = A · w(|ξ|) · (1 + t·ξ)` on `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZTestFunction {
    d: usize,
    window: RadialWindow,
    amplitude: f64,
    tilt: Vec<f64>,
}

impl ZTestFunction {
    /// Radial window supported in `r0 ≤ |ξ| ≤ r1` with a plateau on the
    /// middle half.
    pub fn radial(d: usize, r0: f64, r1: f64) -> Result<Self> {
        check_dim(d)?;
        if !(r0 > 0.0 && r1 > r0) || !r1.is_finite() {
            return Err(Error::Domain(format!("annulus [{r0}, {r1}] must satisfy 0 < r0 < r1")));
        }
        let outer = (r1 - r0) / 2.0;
        let window = RadialWindow { center: (r0 + r1) / 2.0, plateau: outer / 2.0, outer };
        Ok(ZTestFunction { d, window, amplitude: 1.0, tilt: vec![0.0; d] })
    }

    pub fn from_bump(d: usize, bump: &BumpProfile) -> Result<Self> {
        check_dim(d)?;
        Ok(ZTestFunction { d, window: bump.window(), amplitude: 1.0, tilt: vec![0.0; d] })
    }

    /// The zero function, carried on a nominal annulus.
    pub fn zero(d: usize) -> Result<Self> {
        Ok(Self::radial(d, 0.5, 1.5)?.scaled(0.0))
    }

    pub fn with_tilt(mut self, tilt: Vec<f64>) -> Result<Self> {
        if tilt.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: tilt.len() });
        }
        self.tilt = tilt;
        Ok(self)
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.amplitude *= s;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn window(&self) -> RadialWindow {
        self.window
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn inner_radius(&self) -> f64 {
        self.window.inner_radius()
    }

    pub fn outer_radius(&self) -> f64 {
        self.window.outer_radius()
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let r = norm(xi);
        let w = self.window.value(r);
        if w == 0.0 || self.amplitude == 0.0 {
            return 0.0;
        }
        self.amplitude * w * (1.0 + dot(&self.tilt, xi))
    }

    pub fn gradient(&self, xi: &[f64]) -> Vec<f64> {
        let r = norm(xi);
        let (w, dw) = (self.window.value(r), self.window.derivative(r));
        let lin = 1.0 + dot(&self.tilt, xi);
        xi.iter()
            .zip(&self.tilt)
            .map(|(&x, &t)| {
                let radial = if r > 0.0 { dw * x / r * lin } else { 0.0 };
                self.amplitude * (radial + w * t)
            })
            .collect()
    }

    /// `φ̂` sampled at the frequencies of an `n`-point periodic grid, in the
    /// bin layout of the multiplier transforms.
    pub fn spectrum_grid(&self, n: usize, period: f64) -> Result<GridFunction> {
        let mut g = GridFunction::zeros(self.d, n, period)?;
        let unit = g.frequency_unit();
        for flat in 0..g.len() {
            let xi: Vec<f64> = g.lattice_vector(flat).iter().map(|&k| k as f64 * unit).collect();
            g.values_mut()[flat] = Complex64::new(self.eval(&xi), 0.0);
        }
        Ok(g)
    }
}

fn check_dim(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::Domain(format!("dimension {d} outside 1..=3")))
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Samples of a scalar field on a padded Cartesian grid over
/// `[−half, half]^d`, for stencil evaluation at interior nodes.
struct SampledCube {
    d: usize,
    side: usize,
    pad: usize,
    h: f64,
    half: f64,
    values: Vec<f64>,
}

impl SampledCube {
    fn new<F: Fn(&[f64]) -> Result<f64>>(d: usize, half: f64, resolution: usize, pad: usize, f: F) -> Result<Self> {
        // Odd point counts keep the origin and the axes on the grid.
        let res = (resolution.max(3)) | 1;
        let h = 2.0 * half / (res - 1) as f64;
        let side = res + 2 * pad;
        let total = side.pow(d as u32);
        let mut values = Vec::with_capacity(total);
        let mut x = vec![0.0; d];
        for flat in 0..total {
            let mut rem = flat;
            for axis in (0..d).rev() {
                x[axis] = -half + ((rem % side) as f64 - pad as f64) * h;
                rem /= side;
            }
            values.push(f(&x)?);
        }
        Ok(SampledCube { d, side, pad, h, half, values })
    }

    fn interior(&self) -> impl Iterator<Item = (usize, Vec<f64>)> + '_ {
        let res = self.side - 2 * self.pad;
        let count = res.pow(self.d as u32);
        (0..count).map(move |i| {
            let mut rem = i;
            let mut flat = 0;
            let mut x = vec![0.0; self.d];
            let mut stride = 1;
            for axis in (0..self.d).rev() {
                let j = rem % res;
                rem /= res;
                x[axis] = -self.half + j as f64 * self.h;
                flat += (j + self.pad) * stride;
                stride *= self.side;
            }
            (flat, x)
        })
    }

    /// `∂^β` at an interior node by tensor-product stencils on the grid.
    fn partial(&self, flat: usize, beta: &[usize]) -> f64 {
        let stencils: Vec<_> = beta.iter().map(|&k| central_stencil(k)).collect();
        let sizes: Vec<usize> = stencils.iter().map(|s| s.0.len()).collect();
        let strides: Vec<isize> = (0..self.d)
            .map(|axis| self.side.pow((self.d - 1 - axis) as u32) as isize)
            .collect();
        let total: usize = sizes.iter().product();
        let mut acc = 0.0;
        for combo in 0..total {
            let mut rem = combo;
            let mut c = 1.0;
            let mut idx = flat as isize;
            for axis in 0..self.d {
                let i = rem % sizes[axis];
                rem /= sizes[axis];
                let (off, coef) = stencils[axis];
                c *= coef[i];
                idx += off[i] as isize * strides[axis];
            }
            if c != 0.0 {
                acc += c * self.values[idx as usize];
            }
        }
        let order: usize = beta.iter().sum();
        acc / self.h.powi(order as i32)
    }
}

/// `max_{|α| = N} sup_{|y| ≤ 1} |∂^α φ̂(y)|` over a Cartesian grid with
/// `resolution` points per axis.
pub fn taylor_constant(phi: &ZTestFunction, order: usize, resolution: usize) -> Result<f64> {
    if order > 6 {
        return Err(Error::UnsupportedOrder(order));
    }
    if phi.amplitude == 0.0 {
        return Ok(0.0);
    }
    let pad = stencil_reach(order) as usize;
    let cube = SampledCube::new(phi.d, 1.0, resolution, pad, |x| Ok(phi.eval(x)))?;
    let reach = pad as f64 * cube.h * (phi.d as f64).sqrt();
    let alphas = multi_indices(phi.d, order);
    let mut best: f64 = 0.0;
    for (flat, x) in cube.interior() {
        let r = norm(&x);
        // Stencils entirely inside |y| < r₀ only see zeros.
        if r > 1.0 + 1e-12 || r + reach < phi.inner_radius() {
            continue;
        }
        for alpha in &alphas {
            best = best.max(cube.partial(flat, alpha).abs());
        }
    }
    Ok(best)
}

/// Count sampled points of the unit ball where `|φ̂(x)| > C_N |x|^N`.
pub fn taylor_bound_violations(phi: &ZTestFunction, order: usize, c_n: f64, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut taken = 0;
    while taken < samples {
        let x: Vec<f64> = (0..phi.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = norm(&x);
        if r > 1.0 {
            continue;
        }
        taken += 1;
        if phi.eval(&x).abs() > c_n * r.powi(order as i32) * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    violations
}

/// `f(|x|²) φ̂(x)`.
pub fn product(f: &BernsteinFn, phi: &ZTestFunction, x: &[f64]) -> Result<f64> {
    let p = phi.eval(x);
    if p == 0.0 {
        return Ok(0.0);
    }
    Ok(f.eval(dot(x, x))? * p)
}

/// `∂^β (f(|x|²) φ̂(x))` by central differences with step `h`.
pub fn product_partial(f: &BernsteinFn, phi: &ZTestFunction, x: &[f64], beta: &[usize], h: f64) -> Result<f64> {
    let err = RefCell::new(None);
    let g = |y: &[f64]| match product(f, phi, y) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let v = partial(&g, x, beta, h);
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `∂_i (f(|x|²) φ̂(x)) = f′(|x|²) 2xᵢ φ̂(x) + f(|x|²) ∂ᵢφ̂(x)`.
pub fn leibniz_first_order(f: &BernsteinFn, phi: &ZTestFunction, x: &[f64], axis: usize) -> Result<f64> {
    let lambda = dot(x, x);
    let p = phi.eval(x);
    let dp = phi.gradient(x)[axis];
    if p == 0.0 && dp == 0.0 {
        return Ok(0.0);
    }
    let fp = f.deriv(1, lambda)?.value;
    Ok(fp * 2.0 * x[axis] * p + f.eval(lambda)? * dp)
}

fn step_for(phi: &ZTestFunction) -> f64 {
    phi.window.transition_width() / 40.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionRow {
    pub k: u32,
    pub radius: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionTable {
    pub beta: Vec<usize>,
    pub rows: Vec<ExtensionRow>,
    /// Least-squares slope of `log value` against `log |x|` over rows with
    /// `|x| > r₀` and nonzero values.
    pub decay_exponent: Option<f64>,
}

/// `|∂^β (f(|x|²) φ̂(x))|` along the diagonal at `|x| = 2^{−k}`, `k = 1..=20`.
pub fn smooth_extension_check(f: &BernsteinFn, phi: &ZTestFunction, beta: &[usize]) -> Result<ExtensionTable> {
    let radii: Vec<f64> = (1..=20).map(|k| 0.5f64.powi(k)).collect();
    let values = extension_values(f, phi, beta, &radii)?;
    let rows: Vec<ExtensionRow> = radii
        .iter()
        .zip(&values)
        .enumerate()
        .map(|(i, (&radius, &value))| ExtensionRow { k: i as u32 + 1, radius, value })
        .collect();
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.radius > phi.inner_radius() && r.value > 0.0)
        .map(|r| (r.radius.ln(), r.value.ln()))
        .collect();
    Ok(ExtensionTable { beta: beta.to_vec(), rows, decay_exponent: slope(&fit) })
}

/// `|∂^β (f(|x|²) φ̂(x))|` at `x = r·(1, …, 1)/√d` for each radius.
pub fn extension_values(f: &BernsteinFn, phi: &ZTestFunction, beta: &[usize], radii: &[f64]) -> Result<Vec<f64>> {
    if beta.len() != phi.d {
        return Err(Error::DimensionMismatch { expected: phi.d, got: beta.len() });
    }
    let order: usize = beta.iter().sum();
    if order > 3 {
        return Err(Error::UnsupportedOrder(order));
    }
    if f.is_constant() {
        return Err(Error::ConstantSymbol);
    }
    let h = step_for(phi);
    let unit = 1.0 / (phi.d as f64).sqrt();
    radii
        .iter()
        .map(|&r| {
            let x = vec![r * unit; phi.d];
            Ok(product_partial(f, phi, &x, beta, h)?.abs())
        })
        .collect()
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormReport {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub value: f64,
    pub resolution: usize,
}

/// `sup |x^α ∂^β (f(|x|²) φ̂(x))|` on a Cartesian grid covering the support
/// of `φ̂`; outside the support the product vanishes identically.
pub fn seminorm(
    f: &BernsteinFn,
    phi: &ZTestFunction,
    alpha: &[usize],
    beta: &[usize],
    resolution: usize,
) -> Result<SeminormReport> {
    for m in [alpha, beta] {
        if m.len() != phi.d {
            return Err(Error::DimensionMismatch { expected: phi.d, got: m.len() });
        }
    }
    let orders = [alpha.iter().sum::<usize>(), beta.iter().sum()];
    let top = orders[0].max(orders[1]);
    if top > 3 {
        return Err(Error::UnsupportedOrder(top));
    }
    let table = seminorm_table_for(f, phi, &[alpha.to_vec()], &[beta.to_vec()], resolution)?;
    Ok(table.into_iter().next().expect("one pair requested"))
}

/// Every seminorm with `|α|, |β| ≤ max_order`, sharing one sampled grid.
pub fn seminorm_table(f: &BernsteinFn, phi: &ZTestFunction, max_order: usize, resolution: usize) -> Result<Vec<SeminormReport>> {
    if max_order > 3 {
        return Err(Error::UnsupportedOrder(max_order));
    }
    let all: Vec<Vec<usize>> = (0..=max_order).flat_map(|n| multi_indices(phi.d, n)).collect();
    seminorm_table_for(f, phi, &all, &all, resolution)
}

fn seminorm_table_for(
    f: &BernsteinFn,
    phi: &ZTestFunction,
    alphas: &[Vec<usize>],
    betas: &[Vec<usize>],
    resolution: usize,
) -> Result<Vec<SeminormReport>> {
    let max_beta = betas.iter().map(|b| b.iter().sum::<usize>()).max().unwrap_or(0);
    let pad = (0..=max_beta).map(stencil_reach).max().unwrap_or(0) as usize;
    let mut sup = vec![0.0f64; alphas.len() * betas.len()];
    if phi.amplitude != 0.0 {
        // Margin of a few cells keeps every stencil touching the support on
        // the grid.
        let probe = 2.0 * phi.outer_radius() / resolution.max(3) as f64;
        let half = phi.outer_radius() + (pad as f64 + 2.0) * probe;
        let cube = SampledCube::new(phi.d, half, resolution, pad, |x| product(f, phi, x))?;
        let reach = pad as f64 * cube.h * (phi.d as f64).sqrt();
        let (lo, hi) = (phi.inner_radius() - reach, phi.outer_radius() + reach);
        let mut derivs = vec![0.0; betas.len()];
        for (flat, x) in cube.interior() {
            let r = norm(&x);
            if r < lo || r > hi {
                continue;
            }
            for (slot, beta) in derivs.iter_mut().zip(betas) {
                *slot = cube.partial(flat, beta);
            }
            for (i, alpha) in alphas.iter().enumerate() {
                let weight: f64 = x.iter().zip(alpha).map(|(v, &a)| v.powi(a as i32)).product();
                for (j, dv) in derivs.iter().enumerate() {
                    let s = &mut sup[i * betas.len() + j];
                    *s = s.max((weight * dv).abs());
                }
            }
        }
    }
    let mut out = Vec::with_capacity(sup.len());
    for (i, alpha) in alphas.iter().enumerate() {
        for (j, beta) in betas.iter().enumerate() {
            out.push(SeminormReport {
                alpha: alpha.clone(),
                beta: beta.clone(),
                value: sup[i * betas.len() + j],
                resolution,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::parse_id;
    use crate::findiff::derivative_1d;
    use approx::assert_relative_eq;

    #[test]
    fn bump_profile_shape() {
        let b = BumpProfile::new(0.5).unwrap();
        assert_eq!(b.value(1.0), 1.0);
        assert_eq!(b.value(0.875), 1.0);
        assert_eq!(b.value(1.125), 1.0);
        assert_eq!(b.value(0.5), 0.0);
        assert_eq!(b.value(0.75), 0.0);
        assert_eq!(b.value(1.25), 0.0);
        let v = b.value(1.2);
        assert!(v > 0.0 && v < 1.0);
        for i in 0..=1000 {
            let r = i as f64 * 2e-3;
            let v = b.value(r);
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(BumpProfile::new(0.0).is_err());
        assert!(BumpProfile::new(1.0).is_err());
    }

    #[test]
    fn window_derivative_matches_differences() {
        let b = BumpProfile::new(0.6).unwrap();
        for &r in &[0.75, 0.8, 0.84, 1.17, 1.2, 1.26] {
            let fd = derivative_1d(|s| b.value(s), r, 1, 1e-4);
            assert!((b.derivative(r) - fd).abs() < 1e-7, "r={r}");
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let phi = ZTestFunction::radial(3, 0.4, 1.6).unwrap().with_tilt(vec![0.3, -0.2, 0.5]).unwrap();
        let x = [0.35, -0.3, 0.25];
        let g = phi.gradient(&x);
        for axis in 0..3 {
            let mut beta = [0; 3];
            beta[axis] = 1;
            let fd = partial(&|y: &[f64]| phi.eval(y), &x, &beta, 1e-4);
            assert!((g[axis] - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn taylor_constants() {
        let zero = ZTestFunction::zero(2).unwrap();
        assert_eq!(taylor_constant(&zero, 3, 64).unwrap(), 0.0);

        let bump = BumpProfile::new(0.5).unwrap();
        let phi = ZTestFunction::from_bump(2, &bump).unwrap();
        let c1 = taylor_constant(&phi, 1, 257).unwrap();
        // Dense 1-D oracle for a radial profile: max |ρ′|.
        let oracle = (0..=200_000)
            .map(|i| 0.7 + 0.2 * i as f64 / 200_000.0)
            .map(|r| derivative_1d(|s| bump.value(s), r, 1, 1e-5).abs())
            .fold(0.0, f64::max);
        assert!(c1 > 0.0 && c1.is_finite());
        assert!(((c1 - oracle) / oracle).abs() < 0.02, "{c1} vs {oracle}");
        assert!(matches!(taylor_constant(&phi, 7, 32), Err(Error::UnsupportedOrder(7))));
    }

    #[test]
    fn taylor_constant_refinement_and_bound() {
        let phi = ZTestFunction::radial(2, 0.4, 1.6).unwrap().with_tilt(vec![0.5, 0.25]).unwrap();
        for order in 1..=3 {
            let coarse = taylor_constant(&phi, order, 257).unwrap();
            let fine = taylor_constant(&phi, order, 513).unwrap();
            assert!(((coarse - fine) / fine).abs() < 0.05, "N={order}: {coarse} vs {fine}");
            assert_eq!(taylor_bound_violations(&phi, order, fine, 1000, order as u64), 0);
        }
    }

    #[test]
    fn extension_vanishes_inside_annulus() {
        let f = parse_id("fractional:0.5").unwrap();
        let phi = ZTestFunction::radial(2, 0.5, 1.5).unwrap();
        assert_eq!(extension_values(&f, &phi, &[0, 0], &[0.25]).unwrap()[0], 0.0);
        let table = smooth_extension_check(&f, &phi, &[1, 0]).unwrap();
        assert_eq!(table.rows.len(), 20);
        for row in &table.rows {
            assert!(row.value.is_finite());
            if row.radius < 0.45 {
                assert_eq!(row.value, 0.0, "k={}", row.k);
            }
        }
    }

    #[test]
    fn extension_decreases_toward_inner_edge() {
        let f = parse_id("fractional:0.5").unwrap();
        let phi = ZTestFunction::radial(2, 0.1, 0.5).unwrap();
        let radii = [0.2, 0.15, 0.11];
        let v = extension_values(&f, &phi, &[0, 0], &radii).unwrap();
        for (r, got) in radii.iter().zip(&v) {
            let x = [r / 2f64.sqrt(); 2];
            let direct = f.eval(r * r).unwrap() * phi.eval(&x);
            assert_relative_eq!(*got, direct, max_relative = 1e-14);
        }
        assert!(v[0] > v[1] && v[1] > v[2] && v[2] > 0.0);
        let table = smooth_extension_check(&f, &phi, &[0, 0]).unwrap();
        assert!(table.decay_exponent.is_some());
    }

    #[test]
    fn leibniz_first_order_agrees() {
        let phi = ZTestFunction::radial(2, 0.3, 1.7).unwrap().with_tilt(vec![0.4, -0.3]).unwrap();
        for f in [parse_id("fractional:0.5").unwrap(), parse_id("log1p").unwrap()] {
            for x in [[0.5, 0.2], [-0.3, 0.45], [0.9, -0.7]] {
                for axis in 0..2 {
                    let mut beta = [0; 2];
                    beta[axis] = 1;
                    let fd = product_partial(&f, &phi, &x, &beta, 1e-3).unwrap();
                    let exact = leibniz_first_order(&f, &phi, &x, axis).unwrap();
                    assert!(((fd - exact) / exact).abs() < 1e-6, "{} {x:?} {axis}", f.name());
                }
            }
        }
    }

    #[test]
    fn seminorm_examples() {
        let f = parse_id("affine:0,1").unwrap();
        let zero = ZTestFunction::zero(2).unwrap();
        assert_eq!(seminorm(&f, &zero, &[0, 0], &[0, 0], 64).unwrap().value, 0.0);

        let phi = ZTestFunction::from_bump(2, &BumpProfile::new(0.5).unwrap()).unwrap();
        let got = seminorm(&f, &phi, &[0, 0], &[0, 0], 257).unwrap().value;
        let oracle = (0..=100_000)
            .map(|i| 0.7 + 0.6 * i as f64 / 100_000.0)
            .map(|r| r * r * phi.eval(&[r, 0.0]))
            .fold(0.0, f64::max);
        assert!(((got - oracle) / oracle).abs() < 1e-3, "{got} vs {oracle}");
        assert!(matches!(seminorm(&f, &phi, &[4, 0], &[0, 0], 32), Err(Error::UnsupportedOrder(4))));
    }

    #[test]
    fn seminorms_scale_linearly() {
        let f = parse_id("log1p").unwrap();
        let phi = ZTestFunction::radial(2, 0.25, 2.25).unwrap();
        let base = seminorm_table(&f, &phi, 3, 65).unwrap();
        let scaled = seminorm_table(&f, &phi.clone().scaled(1.0 / 7.0), 3, 65).unwrap();
        assert_eq!(base.len(), 100);
        for (a, b) in base.iter().zip(&scaled) {
            assert!(a.value.is_finite() && a.value > 0.0);
            assert!((b.value * 7.0 - a.value).abs() <= 1e-12 * a.value);
        }
    }

    #[test]
    fn spectrum_grid_samples_frequencies() {
        let phi = ZTestFunction::radial(2, 0.5, 3.5).unwrap();
        let g = phi.spectrum_grid(16, 2.0 * std::f64::consts::PI).unwrap();
        for flat in 0..g.len() {
            let k = g.lattice_vector(flat);
            let expect = phi.eval(&[k[0] as f64, k[1] as f64]);
            assert_eq!(g.values()[flat].re, expect);
        }
        assert_eq!(g.values()[0].re, 0.0);
    }
}
