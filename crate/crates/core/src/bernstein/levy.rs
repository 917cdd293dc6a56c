//! Lévy triples and the quadrature that discretizes their measures.
//!
//! A closed-family measure `µ(dt) = t^κ g(t) dt` is split at
//! `τ = min(1, 1/λ_hi)`. On `(0, τ]` a Gauss–Jacobi rule absorbs the
//! `t^{κ+1}` singularity; on `(τ, T]` the substitution `t = e^s` turns the
//! integrand into a smooth, doubly-exponentially decaying function of `s`,
//! integrated with composite Gauss–Legendre panels. Heavy tails carry their
//! remaining mass `µ((T, ∞))` as a single terminal node.

use crate::error::{Error, Result};
use crate::quadrature::{composite, gauss_jacobi_unit, gauss_legendre, Rule};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

/// Upper bound on `Σ (1 ∧ t_k) w_k` for node-based measures.
pub const INTEGRABILITY_CAP: f64 = 1e12;

const NEAR_NODES: usize = 40;
const PANEL_NODES: usize = 16;
const PANEL_WIDTH: f64 = 0.125;
const MAX_PANELS: usize = 4000;
/// `ln(1e-18)`: relative truncation level for the far integrand.
const LN_TRUNCATION: f64 = -41.446531673892822;

/// Closed-form Lévy densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `σ/Γ(1−σ) t^{−1−σ}`, the measure of `λ^σ`. Vanishes at `σ = 1`.
    Fractional { sigma: f64 },
    /// `e^{−t}/t`, the measure of `log(1+λ)`.
    Log1p,
}

impl Family {
    fn validate(&self) -> Result<()> {
        match *self {
            Family::Fractional { sigma } if !(sigma > 0.0 && sigma <= 1.0) => Err(
                Error::InvalidParameter(format!("fractional exponent {sigma} outside (0, 1]")),
            ),
            _ => Ok(()),
        }
    }

    /// Exponent `κ` with `µ(dt) = t^κ g(t) dt`, `g` smooth at 0.
    fn kappa(&self) -> f64 {
        match *self {
            Family::Fractional { sigma } => -1.0 - sigma,
            Family::Log1p => -1.0,
        }
    }

    fn smooth_part(&self, t: f64) -> f64 {
        match *self {
            Family::Fractional { sigma } => fractional_constant(sigma),
            Family::Log1p => (-t).exp(),
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        t.powf(self.kappa()) * self.smooth_part(t)
    }

    /// Exponential decay rate of the density, if any.
    fn decay_rate(&self) -> f64 {
        match self {
            Family::Fractional { .. } => 0.0,
            Family::Log1p => 1.0,
        }
    }

    /// `µ((T, ∞))` when it is not negligible at the truncation point.
    fn tail_mass(&self, t_max: f64) -> Option<f64> {
        match *self {
            Family::Fractional { sigma } => {
                Some(fractional_constant(sigma) / sigma * t_max.powf(-sigma))
            }
            Family::Log1p => None,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(*self, Family::Fractional { sigma } if sigma == 1.0)
    }
}

/// `σ/Γ(1−σ)`, zero at `σ = 1`.
fn fractional_constant(sigma: f64) -> f64 {
    if sigma >= 1.0 {
        0.0
    } else {
        sigma / gamma(1.0 - sigma)
    }
}

/// Lévy measure on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    ClosedFamily(Family),
    QuadratureNodes { nodes: Vec<f64>, weights: Vec<f64> },
}

impl MeasureSpec {
    pub fn zero() -> Self {
        MeasureSpec::QuadratureNodes { nodes: vec![], weights: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MeasureSpec::ClosedFamily(f) => f.is_zero(),
            MeasureSpec::QuadratureNodes { weights, .. } => weights.iter().all(|&w| w == 0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::ClosedFamily(f) => f.validate(),
            MeasureSpec::QuadratureNodes { nodes, weights } => {
                if nodes.len() != weights.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} nodes but {} weights",
                        nodes.len(),
                        weights.len()
                    )));
                }
                if nodes.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
                    return Err(Error::InvalidParameter("measure nodes must be positive".into()));
                }
                if nodes.windows(2).any(|p| p[0] >= p[1]) {
                    return Err(Error::InvalidParameter(
                        "measure nodes must be strictly increasing".into(),
                    ));
                }
                if weights.iter().any(|&w| !(w >= 0.0)) {
                    return Err(Error::InvalidParameter("measure weights must be nonnegative".into()));
                }
                let mass = self.integrability_mass();
                if !(mass <= INTEGRABILITY_CAP) {
                    return Err(Error::NonIntegrableMeasure(format!(
                        "Σ(1∧t)w = {mass:e} exceeds {INTEGRABILITY_CAP:e}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `∫ (1 ∧ t) µ(dt)`.
    pub fn integrability_mass(&self) -> f64 {
        match self {
            MeasureSpec::ClosedFamily(Family::Fractional { sigma }) => {
                if *sigma >= 1.0 {
                    0.0
                } else {
                    1.0 / gamma(2.0 - sigma)
                }
            }
            // (1 − e^{−1}) + E₁(1)
            MeasureSpec::ClosedFamily(Family::Log1p) => {
                1.0 - (-1.0f64).exp() + 0.219_383_934_395_520_27
            }
            MeasureSpec::QuadratureNodes { nodes, weights } => {
                nodes.iter().zip(weights).map(|(&t, &w)| t.min(1.0) * w).sum()
            }
        }
    }
}

/// The data `(a, b, µ)` of `f(λ) = a + bλ + ∫(1 − e^{−λt}) µ(dt)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyTriple {
    pub a: f64,
    pub b: f64,
    pub measure: MeasureSpec,
}

impl LevyTriple {
    pub fn new(a: f64, b: f64, measure: MeasureSpec) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) || !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Lévy triple needs a, b ≥ 0 (got a={a}, b={b})"
            )));
        }
        measure.validate()?;
        Ok(LevyTriple { a, b, measure })
    }

    pub fn is_constant(&self) -> bool {
        self.b == 0.0 && self.measure.is_zero()
    }

    /// Quadrature of µ adapted to spectral parameters in `[lam_lo, lam_hi]`
    /// and moments `tⁿ` up to `max_power`.
    pub fn discretize(&self, lam_lo: f64, lam_hi: f64, max_power: u32) -> Result<Discretization> {
        Discretization::build(&self.measure, lam_lo, lam_hi, max_power)
    }
}

/// Weighted nodes approximating a Lévy measure, plus an optional terminal
/// node carrying the untruncated tail mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub tail: Option<(f64, f64)>,
}

impl Discretization {
    fn build(measure: &MeasureSpec, lam_lo: f64, lam_hi: f64, max_power: u32) -> Result<Self> {
        if !(lam_lo > 0.0) || !(lam_hi >= lam_lo) || !lam_hi.is_finite() {
            return Err(Error::Domain(format!(
                "spectral window [{lam_lo}, {lam_hi}] must be positive and ordered"
            )));
        }
        let family = match measure {
            MeasureSpec::QuadratureNodes { nodes, weights } => {
                return Ok(Discretization {
                    nodes: nodes.clone(),
                    weights: weights.clone(),
                    tail: None,
                })
            }
            MeasureSpec::ClosedFamily(f) => *f,
        };
        if family.is_zero() {
            return Ok(Discretization { nodes: vec![], weights: vec![], tail: None });
        }

        let kappa = family.kappa();
        let tau = (1.0 / lam_hi).min(1.0);
        let near = near_rule(kappa + 1.0);
        let scale = tau.powf(kappa + 2.0);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (&u, &om) in near.nodes.iter().zip(&near.weights) {
            let t = tau * u;
            nodes.push(t);
            weights.push(scale * om * family.smooth_part(t) / t);
        }

        // 1 − e^{−λt} tends to 1, so without a closed tail mass only the
        // density's own decay can bound the far range.
        let rate = if max_power == 0 && family.tail_mass(1.0).is_none() {
            family.decay_rate()
        } else {
            lam_lo + family.decay_rate()
        };
        let t_max = truncation_point(rate, max_power, tau);
        let (s_lo, s_hi) = (tau.ln(), t_max.ln());
        let panels = ((s_hi - s_lo) / PANEL_WIDTH).ceil() as usize;
        if panels > MAX_PANELS {
            return Err(Error::NonIntegrableMeasure(format!(
                "far quadrature needs {panels} panels (cap {MAX_PANELS})"
            )));
        }
        let far = composite(panel_rule(), s_lo, s_hi, PANEL_WIDTH);
        for (&s, &om) in far.nodes.iter().zip(&far.weights) {
            let t = s.exp();
            nodes.push(t);
            weights.push(om * family.density(t) * t);
        }
        let tail = family.tail_mass(t_max).map(|m| (t_max, m));
        Ok(Discretization { nodes, weights, tail })
    }

    /// `∫ (1 − e^{−λt}) µ(dt)`.
    pub fn bernstein_integral(&self, lambda: f64) -> f64 {
        let body: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| -w * (-lambda * t).exp_m1())
            .sum();
        let tail = self
            .tail
            .map(|(t, m)| -m * (-lambda * t).exp_m1())
            .unwrap_or(0.0);
        body + tail
    }

    /// `∫ tⁿ e^{−λt} µ(dt)` for `n ≥ 1`.
    pub fn moment(&self, n: u32, lambda: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * t.powi(n as i32) * (-lambda * t).exp())
            .sum()
    }

    pub fn total_nodes(&self) -> usize {
        self.nodes.len() + usize::from(self.tail.is_some())
    }
}

/// Smallest doubling of `start` beyond which `tᵖ e^{−rt}` stays below
/// `1e-18` of its peak.
/// Gauss–Jacobi rules are rebuilt by an eigensolve, so keep one per exponent.
fn near_rule(beta: f64) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(beta.to_bits())
        .or_insert_with(|| Arc::new(gauss_jacobi_unit(NEAR_NODES, beta)))
        .clone()
}

fn panel_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_NODES))
}

fn truncation_point(rate: f64, power: u32, tau: f64) -> f64 {
    let p = power as f64;
    let peak_t = if p > 0.0 { (p / rate).max(tau) } else { tau };
    let log_peak = p * peak_t.ln() - rate * peak_t;
    let log_at = |t: f64| p * t.ln() - rate * t;
    let mut t = peak_t.max(1.0);
    while log_at(t) - log_peak > LN_TRUNCATION {
        t *= 1.25;
    }
    t
}

/// `a + bλ + ∫(1 − e^{−λt}) µ(dt)` evaluated by quadrature.
pub fn eval_from_triple(triple: &LevyTriple, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("λ = {lambda} must be positive")));
    }
    let disc = triple.discretize(lambda, lambda, 0)?;
    Ok(triple.a + triple.b * lambda + disc.bernstein_integral(lambda))
}

/// `f⁽ⁿ⁾(λ) = (−1)^{n−1} ∫ tⁿ e^{−λt} µ(dt) + b·[n = 1]`.
pub fn deriv_from_triple(triple: &LevyTriple, n: u32, lambda: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("derivative order must be ≥ 1".into()));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("λ = {lambda} must be positive")));
    }
    let disc = triple.discretize(lambda, lambda, n)?;
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let drift = if n == 1 { triple.b } else { 0.0 };
    Ok(sign * disc.moment(n, lambda) + drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn frac(sigma: f64) -> LevyTriple {
        LevyTriple::new(0.0, 0.0, MeasureSpec::ClosedFamily(Family::Fractional { sigma })).unwrap()
    }

    #[test]
    fn fractional_half_at_four() {
        assert_relative_eq!(eval_from_triple(&frac(0.5), 4.0).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn constant_and_drift_triples() {
        let c = LevyTriple::new(3.0, 0.0, MeasureSpec::zero()).unwrap();
        for &l in &[0.1, 1.0, 77.0] {
            assert_eq!(eval_from_triple(&c, l).unwrap(), 3.0);
        }
        let d = LevyTriple::new(0.0, 2.0, MeasureSpec::zero()).unwrap();
        assert_eq!(eval_from_triple(&d, 5.0).unwrap(), 10.0);
        assert!(c.is_constant());
        assert!(!d.is_constant());
    }

    #[test]
    fn log1p_family_matches_closed_form() {
        let t = LevyTriple::new(0.0, 0.0, MeasureSpec::ClosedFamily(Family::Log1p)).unwrap();
        for &l in &[1e-6, 0.1, 1.0, 7.0, 1e3] {
            let got = eval_from_triple(&t, l).unwrap();
            assert_relative_eq!(got, l.ln_1p(), max_relative = 1e-12);
        }
    }

    #[test]
    fn fractional_wide_lambda_range() {
        for &s in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            for &l in &[1e-8, 1e-3, 0.1, 1.0, 10.0, 1e4, 1e7] {
                let got = eval_from_triple(&frac(s), l).unwrap();
                let exact = l.powf(s);
                assert!(((got - exact) / exact).abs() < 1e-11, "σ={s} λ={l} {got} {exact}");
            }
        }
    }

    #[test]
    fn derivatives_follow_moment_formula() {
        // f⁽ⁿ⁾ of λ^σ is σ(σ−1)…(σ−n+1) λ^{σ−n}.
        for &s in &[0.25, 0.5, 0.75] {
            for n in 1..=4u32 {
                for &l in &[1e-6f64, 0.1, 1.0, 10.0] {
                    let mut exact = l.powf(s - n as f64);
                    for k in 0..n {
                        exact *= s - k as f64;
                    }
                    let got = deriv_from_triple(&frac(s), n, l).unwrap();
                    assert!(((got - exact) / exact).abs() < 1e-11, "σ={s} n={n} λ={l}");
                }
            }
        }
    }

    #[test]
    fn unit_exponent_is_the_zero_measure() {
        assert!(frac(1.0).measure.is_zero());
        assert_eq!(eval_from_triple(&frac(1.0), 3.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LevyTriple::new(-1.0, 0.0, MeasureSpec::zero()).is_err());
        assert!(LevyTriple::new(0.0, 0.0, MeasureSpec::ClosedFamily(Family::Fractional { sigma: 1.5 })).is_err());
        let unordered = MeasureSpec::QuadratureNodes { nodes: vec![2.0, 1.0], weights: vec![1.0, 1.0] };
        assert!(LevyTriple::new(0.0, 0.0, unordered).is_err());
        let nonpos = MeasureSpec::QuadratureNodes { nodes: vec![0.0, 1.0], weights: vec![1.0, 1.0] };
        assert!(LevyTriple::new(0.0, 0.0, nonpos).is_err());
        let heavy = MeasureSpec::QuadratureNodes { nodes: vec![1.0, 2.0], weights: vec![1e13, 1.0] };
        assert!(matches!(
            LevyTriple::new(0.0, 0.0, heavy),
            Err(Error::NonIntegrableMeasure(_))
        ));
        assert!(matches!(eval_from_triple(&frac(0.5), 0.0), Err(Error::Domain(_))));
        assert!(matches!(eval_from_triple(&frac(0.5), -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn node_measure_is_a_plain_sum() {
        let m = MeasureSpec::QuadratureNodes { nodes: vec![0.5, 2.0], weights: vec![1.0, 3.0] };
        let t = LevyTriple::new(1.0, 0.5, m).unwrap();
        let l = 1.3;
        let exact = 1.0 + 0.5 * l + (1.0 - (-0.5f64 * l).exp()) + 3.0 * (1.0 - (-2.0f64 * l).exp());
        assert_relative_eq!(eval_from_triple(&t, l).unwrap(), exact, max_relative = 1e-15);
        assert_relative_eq!(t.measure.integrability_mass(), 3.5);
    }

    #[test]
    fn integrability_mass_of_closed_families() {
        // Compare against the discretized (1 ∧ t) integral.
        for fam in [Family::Fractional { sigma: 0.3 }, Family::Log1p] {
            let m = MeasureSpec::ClosedFamily(fam);
            let d = Discretization::build(&m, 1e-3, 1e-3, 0).unwrap();
            let body: f64 = d.nodes.iter().zip(&d.weights).map(|(&t, &w)| t.min(1.0) * w).sum();
            let tail = d.tail.map(|(_, m)| m).unwrap_or(0.0);
            assert_relative_eq!(body + tail, m.integrability_mass(), max_relative = 1e-10);
        }
    }
}
