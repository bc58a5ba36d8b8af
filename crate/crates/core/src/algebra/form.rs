use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use super::{Exponent, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// Highest form degree the engine represents.
pub const MAX_DEGREE: usize = 3;

/// A differential form written in the logarithmic basis `θ_k = dt_k / t_k`.
///
/// A degree-`p` form is `Σ_I f_I θ_I` over strictly increasing index tuples
/// `I = (k_1 < … < k_p)` (zero-based). Degree 0 uses the empty tuple as its only key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DlogForm {
    nvars: usize,
    degree: usize,
    components: BTreeMap<Vec<usize>, LaurentPoly>,
}

/// Sign of the permutation sorting the concatenation `a ++ b`; zero if they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return 0;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn merged(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

impl DlogForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Self {
            nvars,
            degree,
            components: BTreeMap::new(),
        }
    }

    /// Degree-0 form from a function.
    pub fn function(f: LaurentPoly) -> Self {
        let mut out = Self::zero(f.nvars(), 0);
        if !f.is_zero() {
            out.components.insert(Vec::new(), f);
        }
        out
    }

    /// The basis 1-form `θ_k` (zero-based `k`).
    pub fn theta(nvars: usize, k: usize) -> Self {
        Self::one_form(
            (0..nvars)
                .map(|j| {
                    if j == k {
                        LaurentPoly::one(nvars)
                    } else {
                        LaurentPoly::zero(nvars)
                    }
                })
                .collect(),
        )
    }

    /// `Σ_k coeffs[k] θ_k`. The vector must be non-empty.
    pub fn one_form(coeffs: Vec<LaurentPoly>) -> Self {
        let nvars = coeffs.len();
        let mut out = Self::zero(nvars, 1);
        for (k, f) in coeffs.into_iter().enumerate() {
            if !f.is_zero() {
                out.components.insert(vec![k], f);
            }
        }
        out
    }

    /// Constant-coefficient 1-form `Σ_k c_k θ_k`.
    pub fn constant_one_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        Self::one_form(
            coeffs
                .iter()
                .map(|c| LaurentPoly::constant(n, c.clone()))
                .collect(),
        )
    }

    /// Builds a form from `(index tuple, coefficient)` pairs. Tuples need not be
    /// sorted; they are sorted with the matching sign, and repeated indices give zero.
    pub fn from_components<I>(nvars: usize, degree: usize, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, LaurentPoly)>,
    {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow(degree));
        }
        let mut out = Self::zero(nvars, degree);
        for (idx, f) in parts {
            if idx.len() != degree {
                return Err(Error::Invalid(format!(
                    "component {:?} does not have degree {}",
                    idx, degree
                )));
            }
            if let Some(&k) = idx.iter().find(|&&k| k >= nvars) {
                return Err(Error::UnknownVariable(k + 1));
            }
            if f.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: f.nvars(),
                });
            }
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != idx.len() {
                continue;
            }
            let sign = permutation_sign(&idx);
            let f = if sign < 0 { -f } else { f };
            out.add_component(sorted, f);
        }
        Ok(out)
    }

    fn add_component(&mut self, idx: Vec<usize>, f: LaurentPoly) {
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.components.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(f);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &f;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &LaurentPoly)> {
        self.components.iter()
    }

    /// Coefficient of `θ_idx` (sorted tuple).
    pub fn component(&self, idx: &[usize]) -> LaurentPoly {
        self.components
            .get(idx)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.nvars))
    }

    /// For a 1-form, the coefficient vector `(f_1, …, f_n)`.
    pub fn coefficients(&self) -> Vec<LaurentPoly> {
        debug_assert_eq!(self.degree, 1);
        (0..self.nvars).map(|k| self.component(&[k])).collect()
    }

    /// The function underlying a degree-0 form.
    pub fn as_function(&self) -> LaurentPoly {
        debug_assert_eq!(self.degree, 0);
        self.component(&[])
    }

    /// For a 1-form with constant coefficients, the vector of constants.
    pub fn constant_coefficients(&self) -> Option<Vec<Rational>> {
        if self.degree != 1 {
            return None;
        }
        self.coefficients()
            .iter()
            .map(|f| f.as_constant())
            .collect()
    }

    /// All multidegrees occurring in any coefficient.
    pub fn multidegrees(&self) -> BTreeSet<Exponent> {
        self.components
            .values()
            .flat_map(|f| f.exponents().cloned())
            .collect()
    }

    pub fn max_abs_degree(&self) -> i64 {
        self.components
            .values()
            .map(|f| f.max_abs_degree())
            .max()
            .unwrap_or(0)
    }

    /// The part of pure multidegree `v`.
    pub fn homogeneous_part(&self, v: &[i64]) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (idx, f) in &self.components {
            out.add_component(idx.clone(), f.homogeneous_part(v));
        }
        out
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (idx, f) in &other.components {
            out.add_component(idx.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// `f · ω` for a function `f`.
    pub fn mul_function(&self, f: &LaurentPoly) -> Result<Self> {
        if f.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: f.nvars(),
            });
        }
        let mut out = Self::zero(self.nvars, self.degree);
        for (idx, g) in &self.components {
            out.add_component(idx.clone(), g * f);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        for (idx, g) in &self.components {
            out.add_component(idx.clone(), g.scale(c));
        }
        out
    }

    /// Exterior derivative. In the log basis `dθ_k = 0` and
    /// `d(f θ_I) = Σ_l (t_l ∂f/∂t_l) θ_l ∧ θ_I`.
    pub fn exterior_derivative(&self) -> Result<Self> {
        if self.degree >= MAX_DEGREE {
            return Err(Error::DegreeOverflow(self.degree + 1));
        }
        let mut out = Self::zero(self.nvars, self.degree + 1);
        for (idx, f) in &self.components {
            for l in 0..self.nvars {
                let sign = merge_sign(&[l], idx);
                if sign == 0 {
                    continue;
                }
                let df = f.euler(l);
                let df = if sign < 0 { -df } else { df };
                out.add_component(merged(&[l], idx), df);
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let degree = self.degree + other.degree;
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow(degree));
        }
        let mut out = Self::zero(self.nvars, degree);
        for (i, f) in &self.components {
            for (j, g) in &other.components {
                let sign = merge_sign(i, j);
                if sign == 0 {
                    continue;
                }
                let fg = f * g;
                out.add_component(merged(i, j), if sign < 0 { -fg } else { fg });
            }
        }
        Ok(out)
    }
}

fn permutation_sign(idx: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] > idx[b] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl fmt::Debug for DlogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DlogForm[{}]({})", self.degree, self)
    }
}

impl Add<&DlogForm> for &DlogForm {
    type Output = DlogForm;
    /// Panics on shape mismatch.
    fn add(self, rhs: &DlogForm) -> DlogForm {
        self.try_add(rhs).expect("form shape mismatch")
    }
}

impl Sub<&DlogForm> for &DlogForm {
    type Output = DlogForm;
    fn sub(self, rhs: &DlogForm) -> DlogForm {
        self.try_sub(rhs).expect("form shape mismatch")
    }
}

impl Neg for &DlogForm {
    type Output = DlogForm;
    fn neg(self) -> DlogForm {
        DlogForm {
            nvars: self.nvars,
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(i, f)| (i.clone(), -f))
                .collect(),
        }
    }
}

impl Neg for DlogForm {
    type Output = DlogForm;
    fn neg(self) -> DlogForm {
        -&self
    }
}
