//! Čech cochains on an atlas nerve, the coboundary, and the exact coboundary
//! solver.
//!
//! The coboundary preserves the ℤⁿ multidegree of every coefficient monomial,
//! and membership of a form in Ω¹ (or Ω¹(log D)) on a toric chart is decided
//! monomial by monomial. Solving `δα = β` therefore splits into one finite
//! ℚ-linear system per multidegree occurring in `β`, with `n` unknowns per chart.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{DlogForm, Exponent, LaurentPoly, Rational, UnitMonomial};
use crate::atlas::{Admissible, Atlas, Chart, FormMode};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};

/// Faces of a nerve tuple, with the Čech signs: `(−1)^k` for dropping index `k`.
fn faces(idx: &[usize]) -> impl Iterator<Item = (Vec<usize>, bool)> + '_ {
    (0..idx.len()).map(move |k| {
        let face = idx
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .map(|(_, &i)| i)
            .collect();
        (face, k % 2 == 0)
    })
}

/// Charts and modes a form on `U_I` must satisfy: regular on the intersection
/// chart, and in log mode also logarithmic on every compactification chart
/// attached to all of `I`.
fn constraint_charts<'a>(
    atlas: &'a Atlas,
    idx: &[usize],
    mode: FormMode,
) -> Result<Vec<(&'a Chart, FormMode)>> {
    let chart = atlas
        .chart_of(idx)
        .ok_or_else(|| Error::Invalid(format!("{:?} is not in the nerve", idx)))?;
    let mut out = vec![(chart, FormMode::Regular)];
    if mode == FormMode::Log {
        let comp = atlas
            .compactification()
            .ok_or(Error::MissingCompactification)?;
        for v in comp.cover(idx[0]) {
            if idx.iter().all(|&i| comp.cover(i).contains(v)) {
                out.push((comp.atlas().chart(*v), FormMode::Log));
            }
        }
    }
    Ok(out)
}

/// A form satisfies the mode's membership test on `U_I`.
pub fn form_in_mode(atlas: &Atlas, idx: &[usize], w: &DlogForm, mode: FormMode) -> Result<bool> {
    for (chart, m) in constraint_charts(atlas, idx, mode)? {
        if !chart.form_in(w, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A Čech cochain of 1-forms: one `DlogForm(1)` per nerve tuple of length `degree + 1`.
#[derive(Clone, Debug)]
pub struct FormCochain {
    atlas: Arc<Atlas>,
    degree: usize,
    mode: FormMode,
    values: BTreeMap<Vec<usize>, DlogForm>,
}

impl PartialEq for FormCochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.values == other.values && self.atlas == other.atlas
    }
}

impl FormCochain {
    pub fn zero(atlas: Arc<Atlas>, degree: usize, mode: FormMode) -> Self {
        Self {
            atlas,
            degree,
            mode,
            values: BTreeMap::new(),
        }
    }

    /// Builds a cochain, checking that each value lives on a nerve tuple of the
    /// right length and passes the mode's membership test there. Missing
    /// tuples are zero.
    pub fn new<I>(atlas: Arc<Atlas>, degree: usize, mode: FormMode, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, DlogForm)>,
    {
        let mut out = Self::zero(atlas, degree, mode);
        for (idx, w) in values {
            if idx.len() != degree + 1 || !out.atlas.contains(&idx) {
                return Err(Error::Invalid(format!(
                    "{:?} is not a nerve tuple of degree {}",
                    idx, degree
                )));
            }
            if w.degree() != 1 || w.nvars() != out.atlas.nvars() {
                return Err(Error::Invalid(format!(
                    "value at {:?} is not a 1-form",
                    idx
                )));
            }
            if !form_in_mode(&out.atlas, &idx, &w, mode)? {
                return Err(Error::NotRegular(idx[0]));
            }
            if !w.is_zero() {
                out.values.insert(idx, w);
            }
        }
        Ok(out)
    }

    /// The 0-cochain with the same form on every chart.
    pub fn constant(atlas: Arc<Atlas>, w: &DlogForm, mode: FormMode) -> Result<Self> {
        let n = atlas.len();
        Self::new(atlas, 0, mode, (0..n).map(|i| (vec![i], w.clone())))
    }

    pub fn atlas(&self) -> &Arc<Atlas> {
        &self.atlas
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mode(&self) -> FormMode {
        self.mode
    }

    pub fn get(&self, idx: &[usize]) -> DlogForm {
        self.values
            .get(idx)
            .cloned()
            .unwrap_or_else(|| DlogForm::zero(self.atlas.nvars(), 1))
    }

    /// Value on chart `i` of a 0-cochain.
    pub fn local(&self, i: usize) -> DlogForm {
        self.get(&[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Nonzero values.
    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &DlogForm)> {
        self.values.iter()
    }

    fn combine(&self, other: &Self, sign: bool) -> Result<Self> {
        if self.atlas != other.atlas {
            return Err(Error::AtlasMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::Invalid("cochain degrees differ".into()));
        }
        let mut out = self.clone();
        if other.mode != self.mode {
            out.mode = FormMode::Regular;
        }
        for (idx, w) in &other.values {
            let cur = out.get(idx);
            let next = if sign { &cur + w } else { &cur - w };
            if next.is_zero() {
                out.values.remove(idx);
            } else {
                out.values.insert(idx.clone(), next);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn neg(&self) -> Self {
        Self {
            values: self.values.iter().map(|(i, w)| (i.clone(), -w)).collect(),
            ..self.clone()
        }
    }

    /// Largest absolute exponent among all coefficients.
    pub fn max_abs_degree(&self) -> i64 {
        self.values
            .values()
            .map(|w| w.max_abs_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn multidegrees(&self) -> std::collections::BTreeSet<Exponent> {
        self.values
            .values()
            .flat_map(|w| w.multidegrees())
            .collect()
    }
}

/// Alternating-sum Čech coboundary `(δc)_{i_0…i_{p+1}} = Σ_k (−1)^k c_{…î_k…}`.
pub fn coboundary(c: &FormCochain) -> Result<FormCochain> {
    if c.degree > 1 {
        return Err(Error::Invalid(
            "coboundary is only defined up to degree 1".into(),
        ));
    }
    let atlas = &c.atlas;
    let mut values = BTreeMap::new();
    for idx in atlas.tuples(c.degree + 2) {
        let mut sum = DlogForm::zero(atlas.nvars(), 1);
        for (face, plus) in faces(&idx) {
            let w = c.get(&face);
            sum = if plus { &sum + &w } else { &sum - &w };
        }
        if !sum.is_zero() {
            values.insert(idx, sum);
        }
    }
    let out = FormCochain {
        atlas: atlas.clone(),
        degree: c.degree + 1,
        mode: c.mode,
        values,
    };
    for (idx, w) in &out.values {
        assert!(
            form_in_mode(atlas, idx, w, c.mode)?,
            "restriction of a regular form failed to be regular on {:?}",
            idx
        );
    }
    Ok(out)
}

/// Čech cochain of units: one unit monomial per nerve tuple; missing tuples are `1`.
#[derive(Clone, Debug)]
pub struct UnitCochain {
    atlas: Arc<Atlas>,
    degree: usize,
    values: BTreeMap<Vec<usize>, UnitMonomial>,
}

impl PartialEq for UnitCochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.values == other.values && self.atlas == other.atlas
    }
}

impl UnitCochain {
    pub fn trivial(atlas: Arc<Atlas>, degree: usize) -> Self {
        Self {
            atlas,
            degree,
            values: BTreeMap::new(),
        }
    }

    /// Builds a unit cochain, checking that each value is a unit on its
    /// intersection chart.
    pub fn new<I>(atlas: Arc<Atlas>, degree: usize, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, UnitMonomial)>,
    {
        let mut out = Self::trivial(atlas, degree);
        for (idx, u) in values {
            let Some(chart) = (idx.len() == degree + 1)
                .then(|| out.atlas.chart_of(&idx))
                .flatten()
            else {
                return Err(Error::Invalid(format!(
                    "{:?} is not a nerve tuple of degree {}",
                    idx, degree
                )));
            };
            if u.nvars() != out.atlas.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: out.atlas.nvars(),
                    found: u.nvars(),
                });
            }
            if !chart.monomial_is_unit(u.exponent()) {
                return Err(Error::Invalid(format!(
                    "{} is not a unit on U_{:?}",
                    u, idx
                )));
            }
            out.insert(idx, u);
        }
        Ok(out)
    }

    fn insert(&mut self, idx: Vec<usize>, u: UnitMonomial) {
        if u.is_one() {
            self.values.remove(&idx);
        } else {
            self.values.insert(idx, u);
        }
    }

    pub fn atlas(&self) -> &Arc<Atlas> {
        &self.atlas
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, idx: &[usize]) -> UnitMonomial {
        self.values
            .get(idx)
            .cloned()
            .unwrap_or_else(|| UnitMonomial::one(self.atlas.nvars()))
    }

    /// Values on every nerve tuple of the cochain's degree, including ones.
    pub fn entries(&self) -> Vec<(Vec<usize>, UnitMonomial)> {
        self.atlas
            .tuples(self.degree + 1)
            .into_iter()
            .map(|idx| {
                let u = self.get(&idx);
                (idx, u)
            })
            .collect()
    }

    pub fn is_trivial_cochain(&self) -> bool {
        self.values.is_empty()
    }

    /// Componentwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.atlas != other.atlas {
            return Err(Error::AtlasMismatch);
        }
        let mut out = self.clone();
        for idx in self.atlas.tuples(self.degree + 1) {
            let u = self.get(&idx).mul(&other.get(&idx));
            out.insert(idx, u);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|(i, u)| (i.clone(), u.inverse()))
                .collect(),
            ..self.clone()
        }
    }

    /// Multiplicative coboundary: for a 0-cochain `u`, `(δu)_{ij} = u_j / u_i`;
    /// for a 1-cochain `g`, `(δg)_{ijk} = g_jk g_ij / g_ik`.
    pub fn coboundary(&self) -> Result<Self> {
        if self.degree > 1 {
            return Err(Error::Invalid(
                "coboundary is only defined up to degree 1".into(),
            ));
        }
        let mut out = Self::trivial(self.atlas.clone(), self.degree + 1);
        for idx in self.atlas.tuples(self.degree + 2) {
            let mut prod = UnitMonomial::one(self.atlas.nvars());
            for (face, plus) in faces(&idx) {
                let u = self.get(&face);
                prod = if plus { prod.mul(&u) } else { prod.div(&u) };
            }
            out.insert(idx, prod);
        }
        Ok(out)
    }

    /// First nerve triple where the cocycle identity `g_ik = g_ij g_jk` fails.
    pub fn cocycle_defect(&self) -> Option<Vec<usize>> {
        debug_assert_eq!(self.degree, 1);
        self.coboundary()
            .ok()
            .and_then(|d| d.values.keys().next().cloned())
    }
}

/// Componentwise logarithmic derivative of a unit cochain.
pub fn dlog_cochain(g: &UnitCochain) -> FormCochain {
    let values = g
        .values
        .iter()
        .map(|(idx, u)| (idx.clone(), u.dlog()))
        .filter(|(_, w)| !w.is_zero())
        .collect();
    FormCochain {
        atlas: g.atlas.clone(),
        degree: g.degree,
        mode: FormMode::Regular,
        values,
    }
}

/// Why `δα = β` has no solution: the multidegree whose linear system is
/// infeasible, and a chart whose membership constraints block it (the first
/// chart whose constraints, when dropped, make that system feasible).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub multidegree: Exponent,
    pub chart: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoboundarySolution {
    Solved(FormCochain),
    Obstructed(Certificate),
}

impl CoboundarySolution {
    pub fn solution(&self) -> Option<&FormCochain> {
        match self {
            CoboundarySolution::Solved(c) => Some(c),
            CoboundarySolution::Obstructed(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CoboundarySolution::Solved(_) => None,
            CoboundarySolution::Obstructed(c) => Some(c),
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, CoboundarySolution::Solved(_))
    }
}

/// Linear system for the multidegree-`v` part of `δα = β`. Unknown `i·n + k`
/// is the coefficient of `t^v θ_k` in `α_i`. Constraints of `skip` are left out.
fn graded_system(
    atlas: &Atlas,
    target: &FormCochain,
    v: &[i64],
    mode: FormMode,
    skip: Option<usize>,
) -> Result<Echelon> {
    let n = atlas.nvars();
    let mut sys = Echelon::new(n * atlas.len());
    for idx in atlas.pairs() {
        let (i, j) = (idx[0], idx[1]);
        let b = target.get(&idx).coefficients();
        for k in 0..n {
            let mut row = SparseRow::new();
            row.insert(j * n + k, Rational::one());
            row.insert(i * n + k, -Rational::one());
            sys.push(row, b[k].coeff(v));
        }
    }
    for i in 0..atlas.len() {
        if skip == Some(i) {
            continue;
        }
        for (chart, m) in constraint_charts(atlas, &[i], mode)? {
            match chart.admissible(v, m)? {
                Admissible::Nothing => {
                    for k in 0..n {
                        sys.push(
                            [(i * n + k, Rational::one())].into_iter().collect(),
                            Rational::zero(),
                        );
                    }
                }
                Admissible::VanishAt(js) => {
                    for j in js {
                        let row: SparseRow = chart
                            .chart_coefficient_row(j)
                            .iter()
                            .enumerate()
                            .filter(|(_, &a)| a != 0)
                            .map(|(k, &a)| (i * n + k, Rational::from_integer(a.into())))
                            .collect();
                        sys.push(row, Rational::zero());
                    }
                }
            }
        }
    }
    Ok(sys)
}

/// Decides whether the 1-cocycle `target` is the coboundary of a 0-cochain
/// whose values pass the `mode` membership test, and returns one if so.
pub fn solve_coboundary(target: &FormCochain, mode: FormMode) -> Result<CoboundarySolution> {
    if target.degree != 1 {
        return Err(Error::Invalid("target must be a 1-cochain".into()));
    }
    let atlas = target.atlas.clone();
    if let Some((idx, _)) = coboundary(target)?.values().next() {
        return Err(Error::NotACocycle(idx.clone()));
    }
    if mode == FormMode::Log && atlas.compactification().is_none() {
        return Err(Error::MissingCompactification);
    }
    let n = atlas.nvars();
    let mut locals: Vec<Vec<LaurentPoly>> = vec![vec![LaurentPoly::zero(n); n]; atlas.len()];
    for v in target.multidegrees() {
        let sys = graded_system(&atlas, target, &v, mode, None)?;
        let Some(x) = sys.solution() else {
            let mut chart = None;
            for i in 0..atlas.len() {
                if graded_system(&atlas, target, &v, mode, Some(i))?.is_consistent() {
                    chart = Some(i);
                    break;
                }
            }
            return Ok(CoboundarySolution::Obstructed(Certificate {
                multidegree: v,
                chart,
            }));
        };
        for (i, local) in locals.iter_mut().enumerate() {
            for (k, coeff) in local.iter_mut().enumerate() {
                let c = &x[i * n + k];
                if !c.is_zero() {
                    *coeff = &*coeff + &LaurentPoly::monomial(c.clone(), v.clone());
                }
            }
        }
    }
    let alpha = FormCochain::new(
        atlas,
        0,
        mode,
        locals
            .into_iter()
            .enumerate()
            .map(|(i, c)| (vec![i], DlogForm::one_form(c))),
    )?;
    debug_assert_eq!(&coboundary(&alpha)?.values, &target.values);
    Ok(CoboundarySolution::Solved(alpha))
}

/// Splits a ℚ*-valued 1-cochain on the nerve graph: finds `k_i` with
/// `r_ij = k_j / k_i` for every nerve pair, if possible.
pub(crate) fn split_coefficients(
    atlas: &Atlas,
    ratio: impl Fn(&[usize]) -> Rational,
) -> Option<Vec<Rational>> {
    let m = atlas.len();
    let pairs = atlas.pairs();
    let mut k: Vec<Option<Rational>> = vec![None; m];
    for root in 0..m {
        if k[root].is_some() {
            continue;
        }
        k[root] = Some(Rational::one());
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for p in &pairs {
                let (i, j) = (p[0], p[1]);
                let r = ratio(p);
                if i == a && k[j].is_none() {
                    k[j] = Some(k[i].as_ref().unwrap() * &r);
                    queue.push_back(j);
                } else if j == a && k[i].is_none() {
                    k[i] = Some(k[j].as_ref().unwrap() / &r);
                    queue.push_back(i);
                }
            }
        }
    }
    let k: Vec<Rational> = k.into_iter().map(|x| x.unwrap()).collect();
    pairs
        .iter()
        .all(|p| &k[p[1]] / &k[p[0]] == ratio(p))
        .then_some(k)
}

/// Equality in the first hypercohomology of `O* → Ω¹`: the pairs `(g, α)` and
/// `(g', α')` are equivalent iff some unit 0-cochain `u` has
/// `g'_ij / g_ij = u_j / u_i` and `α'_i − α_i = dlog u_i`. Returns `u`.
pub fn pic_c_equivalence(
    a: (&UnitCochain, &FormCochain),
    b: (&UnitCochain, &FormCochain),
) -> Result<Option<UnitCochain>> {
    let atlas = a.0.atlas.clone();
    for (g, alpha) in [a, b] {
        if g.atlas != atlas || alpha.atlas != atlas {
            return Err(Error::AtlasMismatch);
        }
        check_compatible(g, alpha)?;
    }
    let n = atlas.nvars();
    let mut exps = Vec::with_capacity(atlas.len());
    for i in 0..atlas.len() {
        let d = &b.1.local(i) - &a.1.local(i);
        let Some(c) = d.constant_coefficients() else {
            return Ok(None);
        };
        if c.iter().any(|x| !x.is_integer()) {
            return Ok(None);
        }
        let e: Exponent = c
            .iter()
            .map(|x| i64::try_from(x.to_integer()).unwrap_or(i64::MAX))
            .collect();
        if !atlas.chart(i).monomial_is_unit(&e) {
            return Ok(None);
        }
        exps.push(e);
    }
    for p in atlas.pairs() {
        let q = b.0.get(&p).div(&a.0.get(&p));
        let expected: Exponent = (0..n).map(|k| exps[p[1]][k] - exps[p[0]][k]).collect();
        if q.exponent() != expected.as_slice() {
            return Ok(None);
        }
    }
    let Some(k) = split_coefficients(&atlas, |p| b.0.get(p).coeff() / a.0.get(p).coeff()) else {
        return Ok(None);
    };
    let u = UnitCochain::new(
        atlas,
        0,
        k.into_iter()
            .zip(exps)
            .enumerate()
            .map(|(i, (c, e))| Ok((vec![i], UnitMonomial::new(c, e)?)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok(Some(u))
}

pub fn pic_c_equal(
    a: (&UnitCochain, &FormCochain),
    b: (&UnitCochain, &FormCochain),
) -> Result<bool> {
    Ok(pic_c_equivalence(a, b)?.is_some())
}

/// Checks `δα = dlog g`.
pub fn check_compatible(g: &UnitCochain, alpha: &FormCochain) -> Result<()> {
    if g.degree != 1 || alpha.degree != 0 {
        return Err(Error::Invalid(
            "expected a 1-cocycle and a 0-cochain".into(),
        ));
    }
    let lhs = coboundary(alpha)?;
    let rhs = dlog_cochain(g);
    for idx in g.atlas.pairs() {
        if lhs.get(&idx) != rhs.get(&idx) {
            return Err(Error::Incompatible(idx));
        }
    }
    Ok(())
}
