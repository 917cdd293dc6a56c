use super::{BernsteinFn, ClosedForm, Family, LevyTriple, MeasureSpec};
use crate::error::{Error, Result};

/// `λ^σ`, `σ ∈ (0, 1]`. At `σ = 1` the triple is the pure drift `(0, 1, 0)`.
pub fn fractional(sigma: f64) -> Result<BernsteinFn> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::InvalidParameter(format!("fractional exponent {sigma} outside (0, 1]")));
    }
    let triple = if sigma == 1.0 {
        LevyTriple::new(0.0, 1.0, MeasureSpec::zero())?
    } else {
        LevyTriple::new(0.0, 0.0, MeasureSpec::ClosedFamily(Family::Fractional { sigma }))?
    };
    BernsteinFn::new(format!("fractional:{sigma}"), ClosedForm::Fractional(sigma), Some(triple))
}

pub fn log1p() -> Result<BernsteinFn> {
    let triple = LevyTriple::new(0.0, 0.0, MeasureSpec::ClosedFamily(Family::Log1p))?;
    BernsteinFn::new("log1p", ClosedForm::Log1p, Some(triple))
}

/// `√λ tanh √λ`, closed form only.
pub fn sqrt_tanh_sqrt() -> Result<BernsteinFn> {
    BernsteinFn::new("sqrt-tanh-sqrt", ClosedForm::SqrtTanhSqrt, None)
}

pub fn affine(a: f64, b: f64) -> Result<BernsteinFn> {
    let triple = LevyTriple::new(a, b, MeasureSpec::zero())?;
    BernsteinFn::new(format!("affine:{a},{b}"), ClosedForm::Affine { a, b }, Some(triple))
}

/// Representative members of every catalogued family.
pub fn catalogue() -> Vec<BernsteinFn> {
    ["fractional:0.25", "fractional:0.5", "fractional:0.75", "fractional:1", "log1p", "sqrt-tanh-sqrt", "affine:0,1", "affine:1,2"]
        .iter()
        .map(|id| parse_id(id).expect("catalogue ids are valid"))
        .collect()
}

/// Parse a function id: `fractional:<σ>`, `log1p`, `sqrt-tanh-sqrt`,
/// `affine:<a>,<b>`.
pub fn parse_id(id: &str) -> Result<BernsteinFn> {
    let bad = || Error::InvalidParameter(format!("unknown function id '{id}'"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let (head, args) = match id.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a)),
        None => (id.trim(), None),
    };
    match (head, args) {
        ("fractional", Some(a)) => fractional(num(a)?),
        ("log1p", None) => log1p(),
        ("sqrt-tanh-sqrt", None) => sqrt_tanh_sqrt(),
        ("affine", Some(a)) => {
            let (x, y) = a.split_once(',').ok_or_else(bad)?;
            affine(num(x)?, num(y)?)
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn catalogue_values() {
        let id = parse_id("fractional:1").unwrap();
        for &l in &[0.0, 0.3, 5.0] {
            assert_eq!(id.eval(l).unwrap(), l);
        }
        assert_relative_eq!(parse_id("log1p").unwrap().eval(1.0).unwrap(), 0.6931471805599453);
        assert_relative_eq!(
            parse_id("sqrt-tanh-sqrt").unwrap().eval(1.0).unwrap(),
            0.7615941559557649
        );
        assert_eq!(parse_id("affine:1.5,2").unwrap().eval(2.0).unwrap(), 5.5);
    }

    #[test]
    fn id_grammar() {
        for bad in ["foo", "fractional", "fractional:x", "fractional:0", "fractional:1.2", "affine:1", "log1p:2", "affine:-1,0"] {
            assert!(parse_id(bad).is_err(), "{bad} should be rejected");
        }
        assert_eq!(parse_id(" fractional:0.5").unwrap().name(), "fractional:0.5");
    }

    #[test]
    fn catalogue_has_every_family() {
        let names: Vec<String> = catalogue().iter().map(|f| f.name().to_string()).collect();
        assert!(names.iter().any(|n| n.starts_with("fractional")));
        assert!(names.iter().any(|n| n == "log1p"));
        assert!(names.iter().any(|n| n == "sqrt-tanh-sqrt"));
        assert!(names.iter().any(|n| n.starts_with("affine")));
        assert!(catalogue().iter().all(|f| !f.is_constant() && f.fprime1() > 0.0));
    }
}
