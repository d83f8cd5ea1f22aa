//! Label expressions: identifiers, integer and decimal literals,
//! `+ - * / ^` and parentheses. `^` binds tighter than unary minus and takes
//! a signed integer exponent.

use std::collections::BTreeMap;
use std::fmt;

use steadykernel_core::{RationalExpr, Symbol};

/// A parse failure with a one-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(RationalExpr),
    Op(char),
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Named subexpressions substituted for identifiers during parsing.
pub type Definitions = BTreeMap<String, RationalExpr>;

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_column: usize,
    defs: Option<&'a Definitions>,
}

fn lex(text: &str, line: usize, offset: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            let value = decimal(&lit).ok_or_else(|| ParseError::new(line, col, format!("bad number `{lit}`")))?;
            out.push((Tok::Num(value), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Exact value of an integer or decimal literal.
fn decimal(lit: &str) -> Option<RationalExpr> {
    let (int, frac) = match lit.split_once('.') {
        Some((a, b)) => (a, b),
        None => (lit, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().ok()?;
    let den = 10i64.checked_pow(frac.len() as u32)?;
    Some(RationalExpr::from_int(num) / RationalExpr::from_int(den))
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column(), message)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.column();
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc
                    .checked_div(&rhs)
                    .map_err(|_| ParseError::new(self.line, col, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalExpr, ParseError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RationalExpr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let col = self.column();
        let negative = self.eat('-');
        let exp = match self.toks.get(self.pos) {
            Some((Tok::Num(n), _)) => n.as_constant().filter(|c| c.is_integer()).and_then(|c| {
                let s = c.to_string();
                s.parse::<u32>().ok()
            }),
            _ => None,
        }
        .ok_or_else(|| ParseError::new(self.line, col, "exponent must be an integer"))?;
        self.pos += 1;
        let p = base.pow(exp);
        if negative {
            p.recip()
                .map_err(|_| ParseError::new(self.line, col, "division by zero"))
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<RationalExpr, ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Num(n), _)) => {
                self.pos += 1;
                Ok(n)
            }
            Some((Tok::Ident(name), _)) => {
                self.pos += 1;
                if let Some(e) = self.defs.and_then(|d| d.get(&name)) {
                    return Ok(e.clone());
                }
                Ok(RationalExpr::var(Symbol::named(&name)))
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some((Tok::Op(c), _)) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses `text` as found on `line` starting after `offset` characters, so
/// error columns refer to the whole line.
pub fn parse_expr_at(
    text: &str,
    line: usize,
    offset: usize,
    defs: Option<&Definitions>,
) -> Result<RationalExpr, ParseError> {
    let toks = lex(text, line, offset)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_column: offset + text.chars().count() + 1,
        defs,
    };
    if p.toks.is_empty() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_expr(text: &str) -> Result<RationalExpr, ParseError> {
    parse_expr_at(text, 1, 0, None)
}
