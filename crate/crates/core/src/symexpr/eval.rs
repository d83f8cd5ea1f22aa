use alloc::collections::BTreeMap;
use alloc::string::ToString;

use num_traits::{ToPrimitive, Zero};

use super::{Polynomial, Rational, RationalExpr, Symbol};
use crate::error::{Error, Result};

/// Exact values for symbols.
pub type Bindings = BTreeMap<Symbol, Rational>;

/// Floating values for symbols. Converted exactly before substitution.
pub type FloatBindings = BTreeMap<Symbol, f64>;

fn eval_poly(p: &Polynomial, b: &Bindings) -> Result<Rational> {
    let mut missing = None;
    let v = p.eval_with(|s| match b.get(s) {
        Some(v) => Some(v.clone()),
        None => {
            missing = Some(s.clone());
            None
        }
    });
    match (v, missing) {
        (Some(v), _) => Ok(v),
        (None, Some(s)) => Err(Error::MissingBinding(s.name().to_string())),
        (None, None) => unreachable!("evaluation only fails on a missing binding"),
    }
}

impl RationalExpr {
    /// Exact substitution followed by exact arithmetic.
    pub fn eval(&self, bindings: &Bindings) -> Result<Rational> {
        let num = eval_poly(self.numerator(), bindings)?;
        let den = eval_poly(self.denominator(), bindings)?;
        if den.is_zero() {
            return Err(Error::Pole);
        }
        Ok(num / den)
    }

    /// Floating bindings are converted to exact rationals, the expression is
    /// evaluated exactly, and only the final value is rounded to `f64`.
    pub fn eval_f64(&self, bindings: &FloatBindings) -> Result<f64> {
        let exact = exact_bindings(bindings)?;
        let v = self.eval(&exact)?;
        Ok(v.to_f64().unwrap_or(f64::NAN))
    }
}

/// Converts floating bindings to their exact rational values.
pub fn exact_bindings(bindings: &FloatBindings) -> Result<Bindings> {
    bindings
        .iter()
        .map(|(s, v)| {
            Rational::from_float(*v)
                .map(|r| (s.clone(), r))
                .ok_or_else(|| Error::NonFiniteBinding(s.name().to_string()))
        })
        .collect()
}
