//! Exact multivariate polynomial and rational-function arithmetic over
//! edge-label symbols.
//!
//! Every matrix entry and steady-state component produced by this crate is a
//! [`RationalExpr`]: a quotient of two [`Polynomial`]s with arbitrary-precision
//! rational coefficients. Terms are kept in graded lexicographic order on
//! symbol names so rendering is deterministic.
//!
//! No multivariate GCD is computed. Equality of rational expressions is
//! decided by cross-multiplication, and reduction only strips common monomial
//! factors, integer content, and exact polynomial quotients.

mod eval;
mod monomial;
mod polynomial;
mod rational;

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

pub use eval::{exact_bindings, Bindings, FloatBindings};
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use rational::{ArithOp, RationalExpr};

/// Arbitrary-precision rational coefficient.
pub type Rational = num_rational::BigRational;

/// A named indeterminate, typically an edge label such as `a`, `k_1` or `C_md`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    /// Creates a symbol. Returns `None` for an empty name.
    pub fn new(name: &str) -> Option<Self> {
        if name.is_empty() {
            None
        } else {
            Some(Symbol(Arc::from(name)))
        }
    }

    /// Like [`Symbol::new`] but panics on an empty name.
    pub fn named(name: &str) -> Self {
        Self::new(name).expect("symbol names are non-empty")
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", &*self.0)
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::named(name)
    }
}

impl From<String> for Symbol {
    fn from(name: String) -> Self {
        Symbol::named(&name)
    }
}
