//! Bernstein functions, their derivatives, and the quotient symbol
//! `ω(λ) = (f(λ) − f(1))/(λ − 1)`.
//!
//! A [`BernsteinFn`] pairs a closed-form evaluator with an optional
//! [`LevyTriple`]. Derivatives come from the moment formula
//! `f⁽ⁿ⁾(λ) = (−1)^{n−1} ∫ tⁿ e^{−λt} µ(dt)` when a triple is present and fall
//! back to central differences otherwise; the result records which route
//! produced it.

mod catalogue;
mod levy;

pub use catalogue::{catalogue, parse_id};
pub use levy::{
    deriv_from_triple, eval_from_triple, Discretization, Family, LevyTriple, MeasureSpec,
    INTEGRABILITY_CAP,
};

use crate::error::{Error, Result};
use crate::findiff::derivative_1d;

/// Half-width of the Taylor branch of ω around `λ = 1`.
pub const OMEGA_SEAM: f64 = 1e-4;
/// Positivity gate for `1/ω`.
pub const OMEGA_ZERO_TOL: f64 = 1e-12;

/// Closed-form evaluators of the catalogued functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `λ^σ`
    Fractional(f64),
    /// `log(1 + λ)`
    Log1p,
    /// `√λ · tanh(√λ)`
    SqrtTanhSqrt,
    /// `a + bλ`
    Affine { a: f64, b: f64 },
    /// No closed form: evaluate the Lévy triple by quadrature.
    Levy,
}

impl ClosedForm {
    fn eval(&self, lambda: f64) -> f64 {
        match *self {
            ClosedForm::Fractional(s) => lambda.powf(s),
            ClosedForm::Log1p => lambda.ln_1p(),
            ClosedForm::SqrtTanhSqrt => {
                let r = lambda.sqrt();
                r * r.tanh()
            }
            ClosedForm::Affine { a, b } => a + b * lambda,
            ClosedForm::Levy => f64::NAN,
        }
    }
}

/// How a derivative value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivMethod {
    /// Moment formula over the Lévy measure.
    Levy,
    /// Central finite differences of the closed form; approximate.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub method: DerivMethod,
}

impl Derivative {
    pub fn is_approximate(&self) -> bool {
        self.method == DerivMethod::FiniteDifference
    }
}

/// A Bernstein function with cached values at `λ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinFn {
    name: String,
    closed: ClosedForm,
    triple: Option<LevyTriple>,
    f1: f64,
    fprime1: f64,
    /// `f″(1)` and `f‴(1)` for the Taylor branch of ω.
    higher1: [f64; 2],
}

impl BernsteinFn {
    pub fn new(name: impl Into<String>, closed: ClosedForm, triple: Option<LevyTriple>) -> Result<Self> {
        if closed == ClosedForm::Levy && triple.is_none() {
            return Err(Error::InvalidParameter(
                "a function without closed form needs a Lévy triple".into(),
            ));
        }
        let mut f = BernsteinFn {
            name: name.into(),
            closed,
            triple,
            f1: 0.0,
            fprime1: 0.0,
            higher1: [0.0; 2],
        };
        f.f1 = f.eval(1.0)?;
        f.fprime1 = f.deriv(1, 1.0)?.value;
        f.higher1 = [f.deriv(2, 1.0)?.value, f.deriv(3, 1.0)?.value];
        Ok(f)
    }

    /// Function defined only through its Lévy triple.
    pub fn from_triple(name: impl Into<String>, triple: LevyTriple) -> Result<Self> {
        Self::new(name, ClosedForm::Levy, Some(triple))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn closed_form(&self) -> ClosedForm {
        self.closed
    }

    pub fn triple(&self) -> Option<&LevyTriple> {
        self.triple.as_ref()
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn fprime1(&self) -> f64 {
        self.fprime1
    }

    /// True when `b = 0` and `µ = 0`, i.e. `f ≡ a`.
    pub fn is_constant(&self) -> bool {
        match (&self.triple, self.closed) {
            (Some(t), _) => t.is_constant(),
            (None, ClosedForm::Affine { b, .. }) => b == 0.0,
            (None, _) => self.fprime1 == 0.0,
        }
    }

    /// `f(λ)` on `[0, ∞)`.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("λ = {lambda} outside [0, ∞)")));
        }
        match (self.closed, &self.triple) {
            (ClosedForm::Levy, Some(t)) if lambda == 0.0 => Ok(t.a),
            (ClosedForm::Levy, Some(t)) => eval_from_triple(t, lambda),
            (c, _) => Ok(c.eval(lambda)),
        }
    }

    /// `f⁽ⁿ⁾(λ)` for `n ≥ 1`, `λ > 0`.
    pub fn deriv(&self, n: u32, lambda: f64) -> Result<Derivative> {
        if n == 0 {
            return Err(Error::Domain("derivative order must be ≥ 1".into()));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("λ = {lambda} must be positive")));
        }
        if let Some(t) = &self.triple {
            return Ok(Derivative {
                value: deriv_from_triple(t, n, lambda)?,
                method: DerivMethod::Levy,
            });
        }
        if n > 4 {
            return Err(Error::Domain(format!(
                "finite-difference fallback supports n ≤ 4 (got {n})"
            )));
        }
        let base = [0.0, 1e-3, 3e-3, 6e-3, 1e-2][n as usize];
        let h = (base * lambda.max(1.0)).min(lambda / 3.0);
        let closed = self.closed;
        Ok(Derivative {
            value: derivative_1d(|x| closed.eval(x), lambda, n as usize, h),
            method: DerivMethod::FiniteDifference,
        })
    }

    /// Both branches of ω at `λ`: the difference quotient and the cubic
    /// Taylor polynomial around 1.
    pub fn omega_branches(&self, lambda: f64) -> Result<(f64, f64)> {
        let h = lambda - 1.0;
        let quotient = if h == 0.0 {
            self.fprime1
        } else {
            (self.eval(lambda)? - self.f1) / h
        };
        let taylor = self.fprime1 + self.higher1[0] * h / 2.0 + self.higher1[1] * h * h / 6.0;
        Ok((quotient, taylor))
    }

    /// `ω(λ)`, with `ω(1) = f′(1)`.
    pub fn omega(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("λ = {lambda} must be positive")));
        }
        if lambda == 1.0 {
            return Ok(self.fprime1);
        }
        let (quotient, taylor) = self.omega_branches(lambda)?;
        Ok(if (lambda - 1.0).abs() < OMEGA_SEAM { taylor } else { quotient })
    }

    /// `1/ω(λ)`, refused where ω falls below [`OMEGA_ZERO_TOL`].
    pub fn inv_omega(&self, lambda: f64) -> Result<f64> {
        let w = self.omega(lambda)?;
        if !(w > OMEGA_ZERO_TOL) {
            return Err(Error::NearZeroSymbol { lambda, value: w });
        }
        Ok(1.0 / w)
    }

    /// `max |λⁿ f⁽ⁿ⁾(λ)|` over a logarithmic grid of `[1e-8, 1]`.
    pub fn lambda_pow_deriv_bound(&self, n: u32) -> Result<f64> {
        self.lambda_pow_deriv_bound_on(n, 200)
    }

    pub fn lambda_pow_deriv_bound_on(&self, n: u32, points: usize) -> Result<f64> {
        let triple = self.triple.as_ref().ok_or_else(|| {
            Error::InvalidParameter(format!("{} has no Lévy triple", self.name))
        })?;
        let points = points.max(2);
        let (lo, hi) = (1e-8f64.ln(), 0.0);
        let mut best: f64 = 0.0;
        for i in 0..points {
            let lambda = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
            let v = if n == 0 {
                eval_from_triple(triple, lambda)?
            } else {
                lambda.powi(n as i32) * deriv_from_triple(triple, n, lambda)?
            };
            best = best.max(v.abs());
        }
        Ok(best)
    }
}
