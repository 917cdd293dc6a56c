//! Central finite-difference stencils and tensor-product partial derivatives.

/// Offsets and coefficients of a fourth-order accurate central stencil for
/// the `k`-th derivative on a unit step.
pub fn central_stencil(k: usize) -> (&'static [i32], &'static [f64]) {
    match k {
        0 => (&[0], &[1.0]),
        1 => (&[-2, -1, 1, 2], &[1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0]),
        2 => (
            &[-2, -1, 0, 1, 2],
            &[-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
        ),
        3 => (
            &[-3, -2, -1, 1, 2, 3],
            &[1.0 / 8.0, -1.0, 13.0 / 8.0, -13.0 / 8.0, 1.0, -1.0 / 8.0],
        ),
        4 => (
            &[-3, -2, -1, 0, 1, 2, 3],
            &[-1.0 / 6.0, 2.0, -13.0 / 2.0, 28.0 / 3.0, -13.0 / 2.0, 2.0, -1.0 / 6.0],
        ),
        5 => (
            &[-4, -3, -2, -1, 1, 2, 3, 4],
            &[1.0 / 6.0, -1.5, 13.0 / 3.0, -29.0 / 6.0, 29.0 / 6.0, -13.0 / 3.0, 1.5, -1.0 / 6.0],
        ),
        6 => (
            &[-4, -3, -2, -1, 0, 1, 2, 3, 4],
            &[-0.25, 3.0, -13.0, 29.0, -37.5, 29.0, -13.0, 3.0, -0.25],
        ),
        _ => panic!("no stencil for derivative order {k}"),
    }
}

/// Largest stencil offset, in steps, used for order `k`.
pub fn stencil_reach(k: usize) -> i32 {
    central_stencil(k).0.iter().map(|o| o.abs()).max().unwrap_or(0)
}

/// `k`-th derivative of a scalar function by a central stencil of step `h`.
pub fn derivative_1d<F: Fn(f64) -> f64>(f: F, x: f64, k: usize, h: f64) -> f64 {
    let (off, coef) = central_stencil(k);
    let s: f64 = off
        .iter()
        .zip(coef)
        .map(|(&o, &c)| c * f(x + o as f64 * h))
        .sum();
    s / h.powi(k as i32)
}

/// Mixed partial `∂^β f(x)` by tensor products of 1-D stencils.
pub fn partial<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], beta: &[usize], h: f64) -> f64 {
    let d = x.len();
    assert_eq!(beta.len(), d);
    let stencils: Vec<_> = beta.iter().map(|&k| central_stencil(k)).collect();
    let sizes: Vec<usize> = stencils.iter().map(|s| s.0.len()).collect();
    let total: usize = sizes.iter().product();
    let mut point = x.to_vec();
    let mut acc = 0.0;
    for flat in 0..total {
        let mut rem = flat;
        let mut c = 1.0;
        for axis in 0..d {
            let i = rem % sizes[axis];
            rem /= sizes[axis];
            let (off, coef) = stencils[axis];
            point[axis] = x[axis] + off[i] as f64 * h;
            c *= coef[i];
        }
        if c != 0.0 {
            acc += c * f(&point);
        }
    }
    let order: usize = beta.iter().sum();
    acc / h.powi(order as i32)
}

/// All multi-indices of length `d` with total order `n`.
pub fn multi_indices(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if d == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=n).rev() {
            prefix.push(k);
            rec(d - 1, n - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    rec(d, n, &mut Vec::new(), &mut out);
    out
}
