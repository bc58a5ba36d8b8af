use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{DlogForm, Exponent, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// A unit of a Laurent ring: `coeff · t^exponent` with `coeff ≠ 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "UnitRepr", into = "UnitRepr")]
pub struct UnitMonomial {
    coeff: Rational,
    exponent: Exponent,
}

impl UnitMonomial {
    pub fn new(coeff: Rational, exponent: Exponent) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::ZeroUnit);
        }
        Ok(Self { coeff, exponent })
    }

    /// `t^exponent` with coefficient one.
    pub fn pure(exponent: Exponent) -> Self {
        Self {
            coeff: Rational::one(),
            exponent,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::pure(vec![0; nvars])
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn exponent(&self) -> &[i64] {
        &self.exponent
    }

    pub fn nvars(&self) -> usize {
        self.exponent.len()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exponent.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeff: &self.coeff * &other.coeff,
            exponent: self
                .exponent
                .iter()
                .zip(&other.exponent)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            coeff: self.coeff.recip(),
            exponent: self.exponent.iter().map(|a| -a).collect(),
        }
    }

    /// `self / other`.
    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inverse())
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::monomial(self.coeff.clone(), self.exponent.clone())
    }

    /// Logarithmic derivative `du/u = Σ_k a_k θ_k`.
    pub fn dlog(&self) -> DlogForm {
        let coeffs: Vec<Rational> = self
            .exponent
            .iter()
            .map(|&a| Rational::from_integer(a.into()))
            .collect();
        DlogForm::constant_one_form(&coeffs)
    }
}

impl fmt::Debug for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unit({})", self.to_poly())
    }
}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Wire form: `{ "coeff": "p/q", "exponent": [..] }`.
#[derive(Serialize, Deserialize)]
pub(crate) struct UnitRepr {
    coeff: String,
    exponent: Exponent,
}

impl TryFrom<UnitRepr> for UnitMonomial {
    type Error = Error;
    fn try_from(r: UnitRepr) -> Result<Self> {
        let coeff = crate::syntax::parse_rational(&r.coeff)?;
        UnitMonomial::new(coeff, r.exponent)
    }
}

impl From<UnitMonomial> for UnitRepr {
    fn from(u: UnitMonomial) -> Self {
        UnitRepr {
            coeff: u.coeff.to_string(),
            exponent: u.exponent,
        }
    }
}
