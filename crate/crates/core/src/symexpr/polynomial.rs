use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational, Symbol};

/// Multivariate polynomial with exact rational coefficients in canonical form.
///
/// Terms live in a map keyed by [`Monomial`], so duplicates cannot occur, and
/// zero coefficients are never stored. The zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(symbol: Symbol) -> Self {
        Self::term(Rational::one(), Monomial::var(symbol))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// Builds a canonical polynomial from arbitrary `(coefficient, monomial)`
    /// pairs, merging like terms and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Monomial)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    fn add_term(&mut self, c: Rational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn trailing_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.symbols().cloned()).collect()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(t, k)| (t.mul(m), k.clone())).collect(),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (t, k) in &self.terms {
            terms.insert(t.div(m)?, k.clone());
        }
        Some(Polynomial { terms })
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Greatest common monomial dividing every term. `1` for the zero polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Least common multiple of the coefficient denominators and gcd of the
    /// coefficient numerators.
    pub(crate) fn coefficient_lcm_gcd(&self) -> (BigInt, BigInt) {
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        (l, g)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    ///
    /// Uses leading-term reduction and bails out at the first leading term the
    /// divisor's leading monomial fails to divide.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading_term()?;
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if divisor.terms.len() == 1 {
            let q = self.div_monomial(lm)?;
            return Some(q.scale(&lc.recip()));
        }
        // Cheap necessary conditions before running the reduction.
        let (tm, _) = divisor.trailing_term()?;
        let (self_tm, _) = self.trailing_term()?;
        if !tm.divides(self_tm) || divisor.degree() > self.degree() {
            return None;
        }
        for s in divisor.symbols() {
            let need = divisor.terms.keys().map(|m| m.exponent(&s)).max().unwrap_or(0);
            let have = self.terms.keys().map(|m| m.exponent(&s)).max().unwrap_or(0);
            if need > have {
                return None;
            }
        }
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c * &lc_inv;
            let step = Polynomial::term(qc.clone(), qm.clone());
            rem = &rem - &(divisor * &step);
            quot.add_term(qc, qm);
        }
        Some(quot)
    }

    /// Substitutes polynomials for symbols.
    pub fn substitute(&self, map: &BTreeMap<Symbol, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::new();
            let mut prod = Polynomial::constant(c.clone());
            for (s, e) in m.factors() {
                match map.get(s) {
                    Some(p) => prod = &prod * &p.pow(*e),
                    None => rest.push((s.clone(), *e)),
                }
            }
            let prod = prod.mul_monomial(&Monomial::from_factors(rest));
            out = &out + &prod;
        }
        out
    }

    /// Evaluates with exact values for every symbol.
    pub fn eval_with<F>(&self, mut value: F) -> Option<Rational>
    where
        F: FnMut(&Symbol) -> Option<Rational>,
    {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.factors() {
                let v = value(s)?;
                t *= num_traits::pow(v, *e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// True if every coefficient is strictly negative.
    pub fn all_negative(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_negative())
    }

    pub fn all_positive(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_positive())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ca * cb, ma.mul(mb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub(crate) fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending graded-lex order, explicit `*` and `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write_coefficient(f, &mag)?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write_coefficient(f, &mag)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Polynomial {
        Polynomial::var(Symbol::named(s))
    }

    #[test]
    fn like_terms_merge() {
        let p = &v("a") + &v("a");
        assert_eq!(p.to_string(), "2*a");
        assert!((&v("a") - &v("a")).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&v("a") + &v("b")) * &(&v("a") - &v("b"));
        assert_eq!(p.to_string(), "a^2 - b^2");
    }

    #[test]
    fn exact_division() {
        let a = v("a");
        let b = v("b");
        let c = v("c");
        let f = &(&a + &b) * &(&(&a * &c) - &b);
        assert_eq!(f.div_exact(&(&a + &b)), Some(&(&a * &c) - &b));
        assert_eq!(f.div_exact(&(&a + &c)), None);
        assert_eq!(
            f.div_exact(&Polynomial::from_int(2)),
            Some(f.scale(&Rational::new(1.into(), 2.into())))
        );
    }

    #[test]
    fn substitute_and_eval() {
        let p = &(&v("a") * &v("b")) + &v("c");
        let mut map = BTreeMap::new();
        map.insert(Symbol::named("a"), &v("x") + &Polynomial::one());
        let q = p.substitute(&map);
        assert_eq!(q.to_string(), "b*x + b + c");
        let val = p.eval_with(|s| {
            Some(Rational::from_integer(match s.name() {
                "a" => 2.into(),
                "b" => 3.into(),
                _ => 1.into(),
            }))
        });
        assert_eq!(val, Some(Rational::from_integer(7.into())));
    }
}
