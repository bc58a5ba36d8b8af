//! Text syntax for Laurent polynomials and log-basis forms.
//!
//! ```text
//! expr   := [sign] term (sign term)*
//! term   := factor ('*' factor)*
//! factor := int ['/' int] | 't' idx ['^' ['-'] int] | 'Q' idx
//! ```
//!
//! `Q{k}` stands for `θ_k = dt_k/t_k`; a term with several `Q` factors is their
//! wedge product in the written order. Whitespace between tokens is ignored.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{DlogForm, Exponent, LaurentPoly, Rational, MAX_DEGREE};
use crate::error::{Error, Result};

/// Result of parsing an expression: a function or a form of positive degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Poly(LaurentPoly),
    Form(DlogForm),
}

impl Expr {
    pub fn degree(&self) -> usize {
        match self {
            Expr::Poly(_) => 0,
            Expr::Form(w) => w.degree(),
        }
    }

    /// Views the expression as a form of the given degree. A zero polynomial is
    /// accepted as the zero form of any degree.
    pub fn into_form(self, degree: usize) -> Result<DlogForm> {
        match self {
            Expr::Poly(p) if degree == 0 => Ok(DlogForm::function(p)),
            Expr::Poly(p) if p.is_zero() => Ok(DlogForm::zero(p.nvars(), degree)),
            Expr::Form(w) if w.degree() == degree => Ok(w),
            other => Err(Error::Invalid(format!(
                "expected a form of degree {}, found degree {}",
                degree,
                other.degree()
            ))),
        }
    }
}

struct Term {
    offset: usize,
    coeff: Rational,
    exponent: Exponent,
    thetas: Vec<usize>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: Option<usize>,
    max_var: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn digits(&mut self, what: &str) -> Result<(usize, BigInt)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, format!("expected {}", what));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok((start, s.parse().unwrap()))
    }

    fn index(&mut self) -> Result<usize> {
        // Variable indices follow their letter without whitespace.
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected variable index");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let k: usize = s.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "variable index too large".into(),
        })?;
        if k == 0 || self.nvars.is_some_and(|n| k > n) {
            return Err(Error::UnknownVariable(k));
        }
        self.max_var = self.max_var.max(k);
        Ok(k - 1)
    }

    fn small_int(&self, offset: usize, v: BigInt) -> Result<i64> {
        i64::try_from(v).or_else(|_| self.err(offset, "exponent out of range"))
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        let offset = {
            self.skip_ws();
            self.pos
        };
        let mut coeff = if negative {
            -Rational::one()
        } else {
            Rational::one()
        };
        let mut exps: Vec<(usize, i64)> = Vec::new();
        let mut thetas = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let (_, num) = self.digits("number")?;
                    let mut value = Rational::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let (at, den) = self.digits("denominator")?;
                        if den.is_zero() {
                            return Err(Error::ZeroDenominator { offset: at });
                        }
                        value /= Rational::from_integer(den);
                    }
                    coeff *= value;
                }
                Some(b't') => {
                    self.pos += 1;
                    let k = self.index()?;
                    let mut e = 1i64;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let neg = if self.peek() == Some(b'-') {
                            self.pos += 1;
                            true
                        } else {
                            false
                        };
                        let (at, v) = self.digits("exponent")?;
                        e = self.small_int(at, v)?;
                        if neg {
                            e = -e;
                        }
                    }
                    exps.push((k, e));
                }
                Some(b'Q') => {
                    self.pos += 1;
                    thetas.push(self.index()?);
                }
                Some(_) => return self.err(self.pos, "expected number, variable or Q"),
                None => return self.err(self.pos, "unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if thetas.len() > MAX_DEGREE {
            return Err(Error::DegreeOverflow(thetas.len()));
        }
        Ok(Term {
            offset,
            coeff,
            exponent: {
                let mut v = vec![0i64; 0];
                for (k, e) in exps {
                    if v.len() <= k {
                        v.resize(k + 1, 0);
                    }
                    v[k] += e;
                }
                v
            },
            thetas,
        })
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negative = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negative = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            terms.push(self.term(negative)?);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                None => break,
                Some(_) => return self.err(self.pos, "expected `+`, `-` or `*`"),
            }
        }
        Ok(terms)
    }
}

/// Parses an expression in `nvars` variables, or infers `nvars` from the largest
/// index used when `nvars` is `None`.
pub fn parse_expression(text: &str, nvars: Option<usize>) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
        max_var: 0,
    };
    let terms = p.expr()?;
    let n = nvars.unwrap_or(p.max_var.max(1));
    let degree = terms[0].thetas.len();
    if let Some(t) = terms.iter().find(|t| t.thetas.len() != degree) {
        return Err(Error::Syntax {
            offset: t.offset,
            message: format!(
                "term of degree {} in an expression of degree {}",
                t.thetas.len(),
                degree
            ),
        });
    }
    let monomial = |t: &Term| {
        let mut e = t.exponent.clone();
        e.resize(n, 0);
        LaurentPoly::monomial(t.coeff.clone(), e)
    };
    if degree == 0 {
        let mut f = LaurentPoly::zero(n);
        for t in &terms {
            f = &f + &monomial(t);
        }
        Ok(Expr::Poly(f))
    } else {
        let w = DlogForm::from_components(
            n,
            degree,
            terms.iter().map(|t| (t.thetas.clone(), monomial(t))),
        )?;
        Ok(Expr::Form(w))
    }
}

pub fn parse_poly(text: &str, nvars: usize) -> Result<LaurentPoly> {
    match parse_expression(text, Some(nvars))? {
        Expr::Poly(p) => Ok(p),
        Expr::Form(_) => Err(Error::Invalid("expected a function, found a form".into())),
    }
}

pub fn parse_form(text: &str, nvars: usize, degree: usize) -> Result<DlogForm> {
    parse_expression(text, Some(nvars))?.into_form(degree)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let bad = || Error::Syntax {
        offset: 0,
        message: format!("invalid rational `{}`", text),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::ZeroDenominator {
            offset: s.find('/').unwrap_or(0) + 1,
        });
    }
    Ok(Rational::new(n, d))
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    e: &[i64],
    thetas: &[usize],
) -> fmt::Result {
    if first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else if c.is_negative() {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let mut factors: Vec<String> = Vec::new();
    let a = c.abs();
    for (k, &x) in e.iter().enumerate() {
        match x {
            0 => {}
            1 => factors.push(format!("t{}", k + 1)),
            _ => factors.push(format!("t{}^{}", k + 1, x)),
        }
    }
    factors.extend(thetas.iter().map(|k| format!("Q{}", k + 1)));
    if !a.is_one() || factors.is_empty() {
        factors.insert(0, a.to_string());
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<_> = self.terms().collect();
        for (i, (e, c)) in terms.iter().rev().enumerate() {
            write_term(f, i == 0, c, e, &[])?;
        }
        Ok(())
    }
}

impl fmt::Display for DlogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, g) in self.components() {
            let terms: Vec<_> = g.terms().collect();
            for (e, c) in terms.iter().rev() {
                write_term(f, first, c, e, idx)?;
                first = false;
            }
        }
        Ok(())
    }
}
