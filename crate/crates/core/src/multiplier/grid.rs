//! Periodic grids and the unitary discrete Fourier transform.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Complex samples on the periodic box `[0, period)^d`, row-major, `n`
/// points per axis at `x_j = j · period / n`.
///
/// The same container carries frequency-side data after
/// [`forward_transform`]; bin `m` along an axis then corresponds to the
/// frequency `2π · signed(m) / period`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    d: usize,
    n: usize,
    period: f64,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(d: usize, n: usize, period: f64, values: Vec<Complex64>) -> Result<Self> {
        check_shape(d, n, period)?;
        let expected = n.pow(d as u32);
        if values.len() != expected {
            return Err(Error::Size(format!("{} samples for a {n}^{d} grid", values.len())));
        }
        Ok(GridFunction { d, n, period, values })
    }

    pub fn zeros(d: usize, n: usize, period: f64) -> Result<Self> {
        check_shape(d, n, period)?;
        Ok(GridFunction { d, n, period, values: vec![Complex64::new(0.0, 0.0); n.pow(d as u32)] })
    }

    /// Sample `u(x)` at every grid point.
    pub fn from_fn<F: FnMut(&[f64]) -> Complex64>(d: usize, n: usize, period: f64, mut u: F) -> Result<Self> {
        let mut g = Self::zeros(d, n, period)?;
        let mut x = vec![0.0; d];
        for flat in 0..g.values.len() {
            g.point_into(flat, &mut x);
            g.values[flat] = u(&x);
        }
        Ok(g)
    }

    /// `e^{−ix·ξ}` with `ξ = 2πk / period`.
    pub fn plane_wave(d: usize, n: usize, period: f64, k: &[i64]) -> Result<Self> {
        if k.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: k.len() });
        }
        let mut g = Self::zeros(d, n, period)?;
        // Reduce the phase j·k modulo n in integers so samples carry no
        // error growing with the grid size.
        let modulus = n as i64;
        for flat in 0..g.values.len() {
            let idx = g.multi_index(flat);
            let turns = idx
                .iter()
                .zip(k)
                .map(|(&j, &kj)| (j as i64 * kj).rem_euclid(modulus))
                .sum::<i64>()
                .rem_euclid(modulus);
            g.values[flat] = Complex64::from_polar(1.0, -2.0 * PI * turns as f64 / n as f64);
        }
        Ok(g)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Per-axis indices of a flat row-major index.
    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.d];
        let mut rem = flat;
        for axis in (0..self.d).rev() {
            idx[axis] = rem % self.n;
            rem /= self.n;
        }
        idx
    }

    fn point_into(&self, flat: usize, x: &mut [f64]) {
        let h = self.period / self.n as f64;
        let mut rem = flat;
        for axis in (0..self.d).rev() {
            x[axis] = (rem % self.n) as f64 * h;
            rem /= self.n;
        }
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.d];
        self.point_into(flat, &mut x);
        x
    }

    /// Signed integer lattice vector of a frequency bin.
    pub fn lattice_vector(&self, flat: usize) -> Vec<i64> {
        self.multi_index(flat)
            .into_iter()
            .map(|m| signed_bin(m, self.n))
            .collect()
    }

    /// `|k|²` of the lattice vector of a bin.
    pub fn lattice_norm_sq(&self, flat: usize) -> i64 {
        let mut rem = flat;
        let mut s = 0;
        for _ in 0..self.d {
            let k = signed_bin(rem % self.n, self.n);
            rem /= self.n;
            s += k * k;
        }
        s
    }

    /// Frequency scale `2π / period`.
    pub fn frequency_unit(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// `|ξ|²` of a frequency bin.
    pub fn freq_norm_sq(&self, flat: usize) -> f64 {
        let u = self.frequency_unit();
        u * u * self.lattice_norm_sq(flat) as f64
    }

    /// `Σ |v|²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Self::new(self.d, self.n, self.period, values)
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.d == other.d && self.n == other.n && self.period == other.period
    }
}

fn check_shape(d: usize, n: usize, period: f64) -> Result<()> {
    if !(1..=3).contains(&d) {
        return Err(Error::Size(format!("dimension {d} outside 1..=3")));
    }
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Size(format!("{n} samples per axis is not a power of two")));
    }
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::Size(format!("period {period} must be positive")));
    }
    Ok(())
}

/// Bin `m` of an `n`-point DFT as a signed frequency in `[−n/2, n/2)`.
pub fn signed_bin(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Unitary DFT `û[m] = N^{−1/2} Σ_j u[j] e^{−2πi j·m/n}`.
pub fn forward_transform(u: &GridFunction) -> Result<GridFunction> {
    transform(u, false)
}

/// Inverse of [`forward_transform`].
pub fn inverse_transform(u: &GridFunction) -> Result<GridFunction> {
    transform(u, true)
}

fn transform(u: &GridFunction, inverse: bool) -> Result<GridFunction> {
    check_shape(u.d, u.n, u.period)?;
    let n = u.n;
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let mut data = u.values.clone();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let total = data.len();
    for axis in 0..u.d {
        let stride = n.pow((u.d - 1 - axis) as u32);
        let block = stride * n;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
    let scale = 1.0 / (total as f64).sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
    Ok(GridFunction { d: u.d, n, period: u.period, values: data })
}
