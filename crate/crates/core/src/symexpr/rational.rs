use alloc::collections::{BTreeMap, BTreeSet};
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed};

use super::polynomial::write_coefficient;
use super::{Monomial, Polynomial, Rational, Symbol};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Quotient of two polynomials. The denominator is never zero.
///
/// Values are kept lightly reduced: common monomial factors and integer
/// content are stripped, and a denominator that divides the numerator exactly
/// (or vice versa) is cancelled. A polynomial-valued expression always has the
/// constant `1` as denominator. Equality is cross-multiplication equality.
#[derive(Clone)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(c))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn symbol(name: &str) -> Self {
        Self::from_poly(Polynomial::var(Symbol::named(name)))
    }

    pub fn var(symbol: Symbol) -> Self {
        Self::from_poly(Polynomial::var(symbol))
    }

    pub fn from_poly(num: Polynomial) -> Self {
        RationalExpr {
            num,
            den: Polynomial::one(),
        }
    }

    /// `num / den` in reduced form; `None` when `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(reduce(num, den))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    /// True when every coefficient of the numerator has one sign and every
    /// coefficient of the denominator the opposite sign, i.e. the value is
    /// negative at every positive binding.
    pub fn is_manifestly_negative(&self) -> bool {
        (self.num.all_negative() && self.den.all_positive()) || (self.num.all_positive() && self.den.all_negative())
    }

    pub fn arith(lhs: &RationalExpr, rhs: &RationalExpr, op: ArithOp) -> Result<RationalExpr> {
        Ok(match op {
            ArithOp::Add => lhs + rhs,
            ArithOp::Sub => lhs - rhs,
            ArithOp::Mul => lhs * rhs,
            ArithOp::Div => lhs.checked_div(rhs)?,
        })
    }

    pub fn recip(&self) -> Result<RationalExpr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RationalExpr) -> Result<RationalExpr> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, exp: u32) -> RationalExpr {
        RationalExpr {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalExpr {
        reduce(self.num.scale(c), self.den.clone())
    }

    /// Replaces symbols by expressions.
    pub fn substitute(&self, map: &BTreeMap<Symbol, RationalExpr>) -> Result<RationalExpr> {
        let num = substitute_poly(&self.num, map);
        let den = substitute_poly(&self.den, map);
        num.checked_div(&den)
    }
}

fn substitute_poly(p: &Polynomial, map: &BTreeMap<Symbol, RationalExpr>) -> RationalExpr {
    let mut out = RationalExpr::zero();
    for (m, c) in p.terms() {
        let mut rest = alloc::vec::Vec::new();
        let mut prod = RationalExpr::from_rational(c.clone());
        for (s, e) in m.factors() {
            match map.get(s) {
                Some(v) => prod = &prod * &v.pow(*e),
                None => rest.push((s.clone(), *e)),
            }
        }
        let rest = RationalExpr::from_poly(Polynomial::term(Rational::one(), Monomial::from_factors(rest)));
        out = &out + &(&prod * &rest);
    }
    out
}

/// Cancels `a / b` when one divides the other exactly.
fn cancel_pair(a: Polynomial, b: Polynomial) -> (Polynomial, Polynomial) {
    if a.is_constant() || b.is_constant() {
        return (a, b);
    }
    if let Some(q) = a.div_exact(&b) {
        return (q, Polynomial::one());
    }
    if let Some(q) = b.div_exact(&a) {
        return (Polynomial::one(), q);
    }
    (a, b)
}

fn reduce(num: Polynomial, den: Polynomial) -> RationalExpr {
    debug_assert!(!den.is_zero());
    if num.is_zero() {
        return RationalExpr::zero();
    }
    if let Some(c) = den.as_constant() {
        return RationalExpr::from_poly(num.scale(&c.recip()));
    }
    let g = num.monomial_content().gcd(&den.monomial_content());
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (
            num.div_monomial(&g).expect("content divides"),
            den.div_monomial(&g).expect("content divides"),
        )
    };
    let (num, den) = cancel_pair(num, den);
    if let Some(c) = den.as_constant() {
        return RationalExpr::from_poly(num.scale(&c.recip()));
    }
    normalize_scalars(num, den)
}

/// Clears coefficient denominators, removes the common integer content and
/// makes the denominator's leading coefficient positive.
fn normalize_scalars(num: Polynomial, den: Polynomial) -> RationalExpr {
    let (ln, _) = num.coefficient_lcm_gcd();
    let (ld, _) = den.coefficient_lcm_gcd();
    let l = Rational::from_integer(ln.lcm(&ld));
    let (num, den) = if l.is_one() {
        (num, den)
    } else {
        (num.scale(&l), den.scale(&l))
    };
    let (_, gn) = num.coefficient_lcm_gcd();
    let (_, gd) = den.coefficient_lcm_gcd();
    let mut factor = Rational::from_integer(gn.gcd(&gd)).recip();
    if den.leading_term().is_some_and(|(_, c)| c.is_negative()) {
        factor = -factor;
    }
    if factor.is_one() {
        return RationalExpr { num, den };
    }
    RationalExpr {
        num: num.scale(&factor),
        den: den.scale(&factor),
    }
}

impl PartialEq for RationalExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalExpr {}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return reduce(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return reduce(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        if self.den.is_one() {
            return reduce(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if let Some(q) = self.den.div_exact(&rhs.den) {
            return reduce(&self.num + &(&rhs.num * &q), self.den.clone());
        }
        if let Some(q) = rhs.den.div_exact(&self.den) {
            return reduce(&(&self.num * &q) + &rhs.num, rhs.den.clone());
        }
        reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() || rhs.is_zero() {
            return RationalExpr::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalExpr::from_poly(&self.num * &rhs.num);
        }
        let (n1, d2) = cancel_pair(self.num.clone(), rhs.den.clone());
        let (n2, d1) = cancel_pair(rhs.num.clone(), self.den.clone());
        reduce(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RationalExpr {
    type Output = RationalExpr;
    /// Panics on a structurally zero divisor; see [`RationalExpr::checked_div`].
    fn div(self, rhs: &RationalExpr) -> RationalExpr {
        self.checked_div(rhs).expect("division by zero expression")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalExpr {
            type Output = RationalExpr;
            fn $f(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $f(self, rhs: &RationalExpr) -> RationalExpr {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

impl Sum for RationalExpr {
    fn sum<I: Iterator<Item = RationalExpr>>(iter: I) -> Self {
        iter.fold(RationalExpr::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> Sum<&'a RationalExpr> for RationalExpr {
    fn sum<I: Iterator<Item = &'a RationalExpr>>(iter: I) -> Self {
        iter.fold(RationalExpr::zero(), |acc, x| &acc + x)
    }
}

impl From<Polynomial> for RationalExpr {
    fn from(p: Polynomial) -> Self {
        RationalExpr::from_poly(p)
    }
}

impl From<i64> for RationalExpr {
    fn from(c: i64) -> Self {
        RationalExpr::from_int(c)
    }
}

impl From<Symbol> for RationalExpr {
    fn from(s: Symbol) -> Self {
        RationalExpr::var(s)
    }
}

fn is_atomic(p: &Polynomial) -> bool {
    if let Some(c) = p.as_constant() {
        return c.is_integer() && !c.is_negative();
    }
    match p.terms().next() {
        Some((m, c)) if p.len() == 1 => c.is_one() && m.factors().len() == 1,
        _ => false,
    }
}

impl fmt::Display for RationalExpr {
    /// `num` for polynomials, otherwise `num/den` with parentheses around any
    /// side that is not a single atom.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else if let Some(c) = self.num.as_constant() {
            write_coefficient(f, &c)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if is_atomic(&self.den) {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
