//! `f(−Δ)` as a Fourier multiplier on periodic grids, Helmholtz residuals,
//! and the ω-ratio identity `(f(λ) − f(1)) = ω(λ)(λ − 1)` measured on
//! single lattice modes.

mod grid;
mod io;

pub use grid::{forward_transform, inverse_transform, signed_bin, GridFunction};
pub use io::{read_grdf, sweep_csv, write_grdf, write_sweep_csv, GRDF_MAGIC, GRDF_VERSION};

use crate::bernstein::{parse_id, BernsteinFn};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;

/// Boxes searched by [`omega_ratio_sweep`]: periods `2πL`, `L ≤ MAX_BOX_SCALE`.
pub const MAX_BOX_SCALE: u32 = 32;
/// Energy fraction in the zero bin above which a residual is refused.
pub const ZERO_MODE_GATE: f64 = 1e-14;
/// `res_lap` below this makes the ratio undefined.
pub const RATIO_FLOOR: f64 = 1e-14;
pub const DEFAULT_DELTA: f64 = 0.1;

/// The symbol `f(|ξ|²) − shift`.
#[derive(Debug, Clone)]
pub struct MultiplierSymbol {
    pub f: BernsteinFn,
    pub shift: f64,
}

impl MultiplierSymbol {
    pub fn new(f: BernsteinFn) -> Self {
        MultiplierSymbol { f, shift: 0.0 }
    }

    /// `f(|ξ|²) − f(1)`.
    pub fn shifted(f: BernsteinFn) -> Self {
        let shift = f.f1();
        MultiplierSymbol { f, shift }
    }

    pub fn value(&self, lambda: f64) -> Result<f64> {
        Ok(self.f.eval(lambda)? - self.shift)
    }
}

/// Multiply the spectrum of `u` by `sym(|ξ|²)` and transform back.
pub fn apply_symbol(u: &GridFunction, sym: &MultiplierSymbol) -> Result<GridFunction> {
    let mut s = forward_transform(u)?;
    // Symbol values depend only on the integer |k|², so cache them.
    let mut cache: HashMap<i64, f64> = HashMap::new();
    let unit = s.frequency_unit();
    for flat in 0..s.len() {
        let k2 = s.lattice_norm_sq(flat);
        let m = match cache.get(&k2) {
            Some(&m) => m,
            None => {
                let m = sym.value(unit * unit * k2 as f64)?;
                cache.insert(k2, m);
                m
            }
        };
        s.values_mut()[flat] *= m;
    }
    inverse_transform(&s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `‖f(−Δ)u − f(1)u‖ / ‖u‖`
    pub res_f: f64,
    /// `‖(−Δ)u − u‖ / ‖u‖`
    pub res_lap: f64,
    /// `res_f / res_lap`, present when `res_lap > RATIO_FLOOR`.
    pub ratio: Option<f64>,
    /// Fraction of spectral energy with `||ξ| − 1| ≥ δ`.
    pub spectral_offsphere_energy: f64,
}

/// Residuals of `f(−Δ)u = f(1)u` and `−Δu = u`, both computed through the
/// full transform path.
pub fn helmholtz_residual(u: &GridFunction, f: &BernsteinFn, delta: f64) -> Result<ResidualReport> {
    if f.is_constant() {
        return Err(Error::ConstantSymbol);
    }
    let norm = u.norm();
    if norm == 0.0 {
        return Err(Error::EmptyField);
    }
    let spectrum = forward_transform(u)?;
    let zero = (0..spectrum.len()).find(|&i| spectrum.lattice_norm_sq(i) == 0).unwrap_or(0);
    let fraction = spectrum.values()[zero].norm_sqr() / spectrum.energy();
    if fraction > ZERO_MODE_GATE {
        return Err(Error::ZeroModeEnergy { fraction });
    }
    let lap = parse_id("affine:0,1")?;
    let res_f = apply_symbol(u, &MultiplierSymbol::shifted(f.clone()))?.norm() / norm;
    let res_lap = apply_symbol(u, &MultiplierSymbol::shifted(lap))?.norm() / norm;
    Ok(ResidualReport {
        res_f,
        res_lap,
        ratio: (res_lap > RATIO_FLOOR).then(|| res_f / res_lap),
        spectral_offsphere_energy: offsphere_fraction(&spectrum, delta),
    })
}

fn offsphere_fraction(spectrum: &GridFunction, delta: f64) -> f64 {
    let total = spectrum.energy();
    if total == 0.0 {
        return 0.0;
    }
    let off: f64 = (0..spectrum.len())
        .filter(|&i| (spectrum.freq_norm_sq(i).sqrt() - 1.0).abs() >= delta)
        .map(|i| spectrum.values()[i].norm_sqr())
        .sum();
    off / total
}

/// Fraction of `‖û‖²` on lattice points with `||ξ| − 1| ≥ delta`; zero for
/// the zero field.
pub fn spectral_support(u: &GridFunction, delta: f64) -> Result<f64> {
    Ok(offsphere_fraction(&forward_transform(u)?, delta))
}

/// Integer vectors `k ∈ Z^d` with `|k|² = m`, in lexicographic order.
pub fn lattice_vectors(d: usize, m: i64) -> Vec<Vec<i64>> {
    let r = (m as f64).sqrt().floor() as i64 + 1;
    let mut out = Vec::new();
    let mut k = vec![-r; d];
    loop {
        if k.iter().map(|v| v * v).sum::<i64>() == m {
            out.push(k.clone());
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if k[axis] < r {
                k[axis] += 1;
                break;
            }
            k[axis] = -r;
        }
    }
}

/// The `2d` unit lattice modes `±e_i`, which lie on the unit sphere for
/// period `2π`.
pub fn unit_sphere_modes(d: usize) -> Vec<Vec<i64>> {
    lattice_vectors(d, 1)
}

/// A lattice mode realizing `|ξ|² = λ` on some periodic box.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMode {
    /// Box scale `L`; the period is `2πL`.
    pub scale: u32,
    pub k: Vec<i64>,
    /// Smallest power of two resolving the mode without aliasing.
    pub n: usize,
}

impl LatticeMode {
    pub fn period(&self) -> f64 {
        2.0 * PI * self.scale as f64
    }

    pub fn field(&self) -> Result<GridFunction> {
        GridFunction::plane_wave(self.k.len(), self.n, self.period(), &self.k)
    }
}

/// Search boxes `L = 1..=MAX_BOX_SCALE` for `k ∈ Z^d` with `|k|²/L² = λ`.
pub fn find_lattice_mode(d: usize, lambda: f64) -> Result<LatticeMode> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("λ = {lambda} must be positive")));
    }
    for scale in 1..=MAX_BOX_SCALE {
        let target = lambda * (scale * scale) as f64;
        let m = target.round();
        if (target - m).abs() > 1e-12 * target.max(1.0) || m > 1e6 {
            continue;
        }
        if let Some(k) = lattice_vectors(d, m as i64).into_iter().next_back() {
            let reach = k.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
            let n = (2 * reach + 2).next_power_of_two().max(8);
            return Ok(LatticeMode { scale, k, n });
        }
    }
    Err(Error::LatticeUnreachable { lambda })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub res_f: f64,
    pub res_lap: f64,
    pub ratio: Option<f64>,
    pub omega_pred: f64,
    pub note: Option<String>,
}

impl SweepRow {
    /// `|ratio − ω| / ω`, when the ratio is defined.
    pub fn relative_gap(&self) -> Option<f64> {
        self.ratio.map(|r| ((r - self.omega_pred) / self.omega_pred).abs())
    }
}

pub const EIGEN_NOTE: &str = "eigen: ratio undefined";

/// For each λ, measure `res_f / res_lap` on a single lattice mode with
/// `|ξ|² = λ` and pair it with the predicted `ω(λ)`.
pub fn omega_ratio_sweep(f: &BernsteinFn, lambdas: &[f64], d: usize) -> Result<Vec<SweepRow>> {
    if f.is_constant() {
        return Err(Error::ConstantSymbol);
    }
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mode = find_lattice_mode(d, lambda)?;
        let report = helmholtz_residual(&mode.field()?, f, DEFAULT_DELTA)?;
        let note = report.ratio.is_none().then(|| EIGEN_NOTE.to_string());
        rows.push(SweepRow {
            lambda,
            res_f: report.res_f,
            res_lap: report.res_lap,
            ratio: report.ratio,
            omega_pred: f.omega(lambda)?,
            note,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::catalogue;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TWO_PI: f64 = 2.0 * PI;

    fn combo(d: usize, n: usize, modes: &[(Vec<i64>, Complex64)]) -> GridFunction {
        let mut acc = GridFunction::zeros(d, n, TWO_PI).unwrap();
        for (k, c) in modes {
            let w = GridFunction::plane_wave(d, n, TWO_PI, k).unwrap();
            for (a, b) in acc.values_mut().iter_mut().zip(w.values()) {
                *a += c * b;
            }
        }
        acc
    }

    fn max_dev(a: &GridFunction, b: &GridFunction) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn symbol_acts_mode_by_mode() {
        let half = parse_id("fractional:0.5").unwrap();
        let u1 = GridFunction::plane_wave(2, 16, TWO_PI, &[1, 0]).unwrap();
        let out = apply_symbol(&u1, &MultiplierSymbol::new(half.clone())).unwrap();
        assert!(max_dev(&out, &u1) < 1e-13);
        let u4 = GridFunction::plane_wave(2, 16, TWO_PI, &[0, 2]).unwrap();
        let out = apply_symbol(&u4, &MultiplierSymbol::new(half)).unwrap();
        let two = u4.with_values(u4.values().iter().map(|v| v * 2.0).collect()).unwrap();
        assert!(max_dev(&out, &two) < 1e-13);

        let one = Complex64::new(1.0, 0.0);
        let u = combo(2, 16, &[(vec![1, 0], one), (vec![1, 1], one)]);
        let out = apply_symbol(&u, &MultiplierSymbol::new(parse_id("log1p").unwrap())).unwrap();
        let expect = combo(2, 16, &[(vec![1, 0], one * 2f64.ln()), (vec![1, 1], one * 3f64.ln())]);
        assert!(max_dev(&out, &expect) < 1e-13);
    }

    #[test]
    fn symbol_accepts_zero_mode() {
        let u = GridFunction::from_fn(2, 8, TWO_PI, |_| Complex64::new(1.0, 0.0)).unwrap();
        let f = parse_id("affine:2,1").unwrap();
        let out = apply_symbol(&u, &MultiplierSymbol::new(f.clone())).unwrap();
        assert!(out.values().iter().all(|v| (v - 2.0).norm() < 1e-13));
        assert!(matches!(
            helmholtz_residual(&u, &f, 0.1),
            Err(Error::ZeroModeEnergy { .. })
        ));
    }

    #[test]
    fn residual_gates() {
        let u = GridFunction::plane_wave(2, 8, TWO_PI, &[1, 0]).unwrap();
        let c = parse_id("affine:3,0").unwrap();
        assert_eq!(helmholtz_residual(&u, &c, 0.1), Err(Error::ConstantSymbol));
        let z = GridFunction::zeros(2, 8, TWO_PI).unwrap();
        let f = parse_id("log1p").unwrap();
        assert_eq!(helmholtz_residual(&z, &f, 0.1), Err(Error::EmptyField));
    }

    #[test]
    fn on_sphere_modes_are_eigenfunctions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let modes: Vec<_> = unit_sphere_modes(2)
            .into_iter()
            .map(|k| (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let u = combo(2, 32, &modes);
        for f in catalogue() {
            let r = helmholtz_residual(&u, &f, 0.1).unwrap();
            assert!(r.res_f <= 1e-12, "{}: {}", f.name(), r.res_f);
            assert!(r.res_lap <= 1e-12);
            assert!(r.spectral_offsphere_energy < 1e-25);
        }
    }

    #[test]
    fn single_off_sphere_mode_ratio() {
        let half = parse_id("fractional:0.5").unwrap();
        let u = GridFunction::plane_wave(2, 16, TWO_PI, &[1, 1]).unwrap();
        let r = helmholtz_residual(&u, &half, 0.1).unwrap();
        assert_relative_eq!(r.ratio.unwrap(), 1.0 / (2f64.sqrt() + 1.0), max_relative = 1e-12);
        assert_relative_eq!(r.res_f, 2f64.sqrt() - 1.0, max_relative = 1e-12);
        assert_relative_eq!(r.res_lap, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn off_sphere_field_bounded_below() {
        // Modes with |k|² ∈ {4, 5, 8, 9}: res_f ≥ min |f(|k|²) − f(1)|.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ks = [vec![2, 0], vec![1, 2], vec![2, 2], vec![0, -3], vec![-2, 1]];
        let modes: Vec<_> = ks
            .iter()
            .map(|k| (k.clone(), Complex64::new(rng.gen_range(0.1..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let u = combo(2, 16, &modes);
        for f in catalogue() {
            let gap = ks
                .iter()
                .map(|k| (f.eval((k[0] * k[0] + k[1] * k[1]) as f64).unwrap() - f.f1()).abs())
                .fold(f64::INFINITY, f64::min);
            let r = helmholtz_residual(&u, &f, 0.5).unwrap();
            assert!(r.res_f >= gap * (1.0 - 1e-12), "{}", f.name());
            assert_relative_eq!(r.spectral_offsphere_energy, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn spectral_support_fractions() {
        let one = Complex64::new(1.0, 0.0);
        let on = combo(2, 16, &[(vec![1, 0], one), (vec![0, -1], one)]);
        assert!(spectral_support(&on, 0.1).unwrap() < 1e-25);
        let off = GridFunction::plane_wave(2, 16, TWO_PI, &[2, 0]).unwrap();
        assert_relative_eq!(spectral_support(&off, 0.5).unwrap(), 1.0, max_relative = 1e-14);
        let mix = combo(2, 16, &[(vec![1, 0], one), (vec![2, 1], one)]);
        assert!((spectral_support(&mix, 0.1).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sweep_examples() {
        let half = parse_id("fractional:0.5").unwrap();
        let rows = omega_ratio_sweep(&half, &[4.0, 1.0], 2).unwrap();
        assert_relative_eq!(rows[0].ratio.unwrap(), 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(rows[0].omega_pred, 1.0 / 3.0, max_relative = 1e-14);
        assert_eq!(rows[1].ratio, None);
        assert_eq!(rows[1].note.as_deref(), Some(EIGEN_NOTE));

        let g = parse_id("log1p").unwrap();
        let rows = omega_ratio_sweep(&g, &[2.0, 0.5, 2.25], 2).unwrap();
        assert_relative_eq!(rows[0].ratio.unwrap(), 1.5f64.ln(), max_relative = 1e-12);
        for r in &rows {
            assert!(r.relative_gap().unwrap() < 1e-10);
        }
    }

    #[test]
    fn lattice_search() {
        assert_eq!(find_lattice_mode(2, 5.0).unwrap().scale, 1);
        // 3L² carries an odd power of 3, so no planar box reaches λ = 3.
        assert!(matches!(find_lattice_mode(2, 3.0), Err(Error::LatticeUnreachable { .. })));
        assert_eq!(find_lattice_mode(3, 3.0).unwrap().scale, 1);
        assert_eq!(find_lattice_mode(2, 0.25).unwrap().scale, 2);
        assert!(matches!(find_lattice_mode(2, 0.3), Err(Error::LatticeUnreachable { .. })));
        assert_eq!(lattice_vectors(2, 5).len(), 8);
        assert_eq!(unit_sphere_modes(3).len(), 6);
    }

    fn random_grid(seed: u64, real_even: bool) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 8;
        let mut g = GridFunction::zeros(2, n, TWO_PI).unwrap();
        for i in 0..n * n {
            g.values_mut()[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        if real_even {
            let src = g.clone();
            for i in 0..n * n {
                let (a, b) = (i / n, i % n);
                let j = ((n - a) % n) * n + (n - b) % n;
                g.values_mut()[i] = Complex64::new(src.values()[i].re + src.values()[j].re, 0.0);
            }
        }
        g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn symbol_is_linear_and_translation_invariant(seed in 0u64..500, ai in -2.0f64..2.0, bi in -2.0f64..2.0, shift in 0usize..8) {
            let f = MultiplierSymbol::new(parse_id("log1p").unwrap());
            let u = random_grid(seed, false);
            let v = random_grid(seed + 1, false);
            let (a, b) = (Complex64::new(ai, 0.5), Complex64::new(bi, -1.0));
            let comb = u.with_values(u.values().iter().zip(v.values()).map(|(x, y)| a * x + b * y).collect()).unwrap();
            let lhs = apply_symbol(&comb, &f).unwrap();
            let (fu, fv) = (apply_symbol(&u, &f).unwrap(), apply_symbol(&v, &f).unwrap());
            let rhs = u.with_values(fu.values().iter().zip(fv.values()).map(|(x, y)| a * x + b * y).collect()).unwrap();
            prop_assert!(max_dev(&lhs, &rhs) <= 1e-12 * lhs.norm());

            let n = 8;
            let roll = |g: &GridFunction| {
                let vals = (0..n * n).map(|i| g.values()[(i / n) * n + (i % n + shift) % n]).collect();
                g.with_values(vals).unwrap()
            };
            let t1 = apply_symbol(&roll(&u), &f).unwrap();
            let t2 = roll(&fu);
            prop_assert!(max_dev(&t1, &t2) <= 1e-12 * t1.norm());
        }

        #[test]
        fn real_even_fields_stay_real_even(seed in 0u64..500) {
            let u = random_grid(seed, true);
            let out = apply_symbol(&u, &MultiplierSymbol::new(parse_id("sqrt-tanh-sqrt").unwrap())).unwrap();
            let n = 8;
            for i in 0..n * n {
                let j = ((n - i / n) % n) * n + (n - i % n) % n;
                prop_assert!(out.values()[i].im.abs() < 1e-12 * out.norm());
                prop_assert!((out.values()[i] - out.values()[j]).norm() < 1e-12 * out.norm());
            }
        }
    }
}
