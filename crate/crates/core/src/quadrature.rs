//! One-dimensional Gauss rules.
//!
//! Gauss–Legendre nodes come from Newton iteration on the three-term
//! recurrence. Gauss–Jacobi rules for the weight `t^β` on `(0, 1)` use the
//! Golub–Welsch eigenvalue construction.

use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// Nodes and weights of a 1-D rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Affine map of a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n > 0, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Legendre polynomial `P_n(x)` and its derivative.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n`-point Gauss rule on `(0, 1)` for the weight `t^beta`, `beta > -1`.
///
/// The weights integrate `∫₀¹ t^β g(t) dt ≈ Σ wᵢ g(tᵢ)` with `g` smooth.
pub fn gauss_jacobi_unit(n: usize, beta: f64) -> Rule {
    assert!(n > 0);
    assert!(beta > -1.0, "Jacobi exponent must exceed -1");
    // Monic Jacobi recurrence on [-1, 1] for (1-x)^0 (1+x)^beta.
    let a = 0.0_f64;
    let b = beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let diag = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let s1 = 2.0 * j + a + b;
            let num = 4.0 * j * (j + a) * (j + b) * (j + a + b);
            let den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            let off = (num / den).sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mass = 1.0 / (beta + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            (0.5 * (1.0 + x), mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Composite Gauss–Legendre rule on `[a, b]` with panels no wider than `width`.
pub fn composite(base: &Rule, a: f64, b: f64, width: f64) -> Rule {
    let panels = (((b - a) / width).ceil() as usize).max(1);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * base.len());
    let mut weights = Vec::with_capacity(panels * base.len());
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let r = base.mapped(lo, lo + h);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Rule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let r = gauss_legendre(10);
        for k in 0..20usize {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let got = r.integrate(|x| x.powi(k as i32));
            assert!((got - exact).abs() < 1e-14, "k={k} got={got}");
        }
        assert_relative_eq!(r.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn legendre_rule_high_order() {
        let r = gauss_legendre(120);
        let got = r.integrate(|x| (3.0 * x).cos());
        assert_relative_eq!(got, 2.0 * 3.0_f64.sin() / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn jacobi_rule_moments() {
        for &beta in &[-0.75, -0.5, -0.25, 0.0, 0.5, 1.5] {
            let r = gauss_jacobi_unit(30, beta);
            for k in 0..40 {
                let exact = 1.0 / (beta + k as f64 + 1.0);
                let got = r.integrate(|t| t.powi(k));
                assert!(
                    ((got - exact) / exact).abs() < 1e-12,
                    "beta={beta} k={k} got={got} exact={exact}"
                );
            }
            assert!(r.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
        }
    }

    #[test]
    fn jacobi_rule_on_singular_integrand() {
        // ∫₀¹ t^{-1/2} e^{-t} dt = √π erf(1)
        let r = gauss_jacobi_unit(20, -0.5);
        let got = r.integrate(|t| (-t).exp());
        let exact = 1.493648265624854;
        assert_relative_eq!(got, exact, epsilon = 1e-13);
    }

    #[test]
    fn composite_rule_covers_interval() {
        let r = composite(&gauss_legendre(8), 0.0, 10.0, 0.3);
        assert_relative_eq!(r.weights.iter().sum::<f64>(), 10.0, epsilon = 1e-12);
        assert_relative_eq!(r.integrate(|x| x.sin()), 1.0 - 10f64.cos(), epsilon = 1e-12);
    }
}
