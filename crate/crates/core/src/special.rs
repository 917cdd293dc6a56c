//! Bessel functions and real spherical harmonics used by the sphere module.

use std::f64::consts::PI;

fn miller_start(order: usize, x: f64) -> usize {
    let top = (order as f64).max(x);
    let start = top + 30.0 + (40.0 * top).sqrt();
    let s = start.ceil() as usize;
    s + (s % 2)
}

/// `J_0(x), …, J_max(x)` for `x ≥ 0`, by Miller's backward recurrence.
pub fn bessel_j_all(max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = miller_start(max, x);
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        let j = k - 1;
        if j <= max {
            out[j] = cur;
        }
        if j % 2 == 0 && j > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Spherical Bessel functions `j_0(x), …, j_max(x)` for `x ≥ 0`.
pub fn sph_bessel_j_all(max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max + 1];
    if x < 1e-12 {
        out[0] = 1.0;
        return out;
    }
    let j0 = x.sin() / x;
    let j1 = x.sin() / (x * x) - x.cos() / x;
    if max == 0 {
        out[0] = j0;
        return out;
    }
    if (max as f64) < x {
        // Upward recurrence is stable while l < x.
        out[0] = j0;
        out[1] = j1;
        for l in 1..max {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
        return out;
    }
    let start = miller_start(max, x);
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut raw = vec![0.0; max + 1];
    let mut raw0 = 0.0;
    let mut raw1 = 0.0;
    for l in (1..=start).rev() {
        let prev = (2 * l + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        let j = l - 1;
        if j <= max {
            raw[j] = cur;
        }
        if j == 1 {
            raw1 = cur;
        }
        if j == 0 {
            raw0 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            raw1 *= 1e-250;
            for v in raw.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / raw0 } else { j1 / raw1 };
    for (o, r) in out.iter_mut().zip(&raw) {
        *o = r * scale;
    }
    out
}

/// Index of the real spherical harmonic `(l, m)` in the flat layout
/// `l = 0..=M`, `m = -l..=l`.
pub fn sh_index(l: usize, m: i64) -> usize {
    (l * l) as usize + (m + l as i64) as usize
}

/// Orthonormal real spherical harmonics up to degree `max` at the unit
/// vector `v`, in the [`sh_index`] layout.
pub fn real_sph_harmonics(max: usize, v: &[f64]) -> Vec<f64> {
    let (x, y, z) = (v[0], v[1], v[2]);
    let ct = z.clamp(-1.0, 1.0);
    let st = (1.0 - ct * ct).max(0.0).sqrt();
    let phi = y.atan2(x);
    // Fully normalized associated Legendre values P̃_l^m(cos θ).
    let mut p = vec![vec![0.0; max + 1]; max + 1];
    p[0][0] = 1.0 / (4.0 * PI).sqrt();
    for m in 1..=max {
        let mf = m as f64;
        p[m][m] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * st * p[m - 1][m - 1];
    }
    for m in 0..max {
        p[m + 1][m] = ct * (2.0 * m as f64 + 3.0).sqrt() * p[m][m];
    }
    for m in 0..=max {
        for l in (m + 2)..=max {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            p[l][m] = a * (ct * p[l - 1][m] - b * p[l - 2][m]);
        }
    }
    let mut out = vec![0.0; (max + 1) * (max + 1)];
    let sqrt2 = 2.0_f64.sqrt();
    for l in 0..=max {
        out[sh_index(l, 0)] = p[l][0];
        for m in 1..=l {
            let mf = m as f64;
            out[sh_index(l, m as i64)] = sqrt2 * p[l][m] * (mf * phi).cos();
            out[sh_index(l, -(m as i64))] = sqrt2 * p[l][m] * (mf * phi).sin();
        }
    }
    out
}
