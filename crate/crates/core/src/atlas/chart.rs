use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{DlogForm, LaurentPoly, Rational};
use crate::error::{Error, Result};
use crate::linalg::rational_inverse;

/// Which sheaf of 1-forms a local form must belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormMode {
    /// Regular 1-forms on the chart.
    Regular,
    /// 1-forms with at most logarithmic poles along the boundary coordinates.
    Log,
}

/// What a chart allows for the log-basis coefficients of a 1-form of pure
/// multidegree `v`, expressed in the chart's own log basis `dw_j / w_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissible {
    /// Only the zero form.
    Nothing,
    /// Forms whose chart coefficients vanish at the listed coordinates.
    VanishAt(Vec<usize>),
}

/// A smooth toric chart: coordinates `w_j = t^{M e_j}` for a unimodular `M`.
///
/// `w_j` is a unit on the chart when `invertible[j]`; otherwise the chart is the
/// affine line in that coordinate. `boundary[j]` marks `w_j = 0` as a component
/// of the boundary divisor (compactification charts only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    basis: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
    invertible: Vec<bool>,
    boundary: Option<Vec<bool>>,
}

impl Chart {
    pub fn new(
        basis: Vec<Vec<i64>>,
        invertible: Vec<bool>,
        boundary: Option<Vec<bool>>,
    ) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidAtlas(
                "chart basis must be a square matrix".into(),
            ));
        }
        if invertible.len() != n || boundary.as_ref().is_some_and(|b| b.len() != n) {
            return Err(Error::InvalidAtlas(
                "chart flag vector has wrong length".into(),
            ));
        }
        if let Some(b) = &boundary {
            if b.iter().zip(&invertible).any(|(&bd, &inv)| bd && inv) {
                return Err(Error::InvalidAtlas(
                    "boundary coordinate marked invertible".into(),
                ));
            }
        }
        let inv = rational_inverse(&basis).ok_or(Error::NotUnimodular)?;
        let inverse = inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        if x.is_integer() {
                            i64::try_from(x.to_integer()).map_err(|_| Error::NotUnimodular)
                        } else {
                            Err(Error::NotUnimodular)
                        }
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            basis,
            inverse,
            invertible,
            boundary,
        })
    }

    /// The torus chart: every coordinate invertible.
    pub fn torus(n: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(id, vec![true; n], None).unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn invertible(&self) -> &[bool] {
        &self.invertible
    }

    pub fn boundary(&self) -> Option<&[bool]> {
        self.boundary.as_deref()
    }

    /// Exponent vector (in global coordinates) of the chart coordinate `w_j`.
    pub fn coordinate_exponent(&self, j: usize) -> Vec<i64> {
        self.basis.iter().map(|row| row[j]).collect()
    }

    /// Exponents of the invertible coordinates; they generate the chart's unit lattice.
    pub fn unit_generators(&self) -> Vec<Vec<i64>> {
        (0..self.nvars())
            .filter(|&j| self.invertible[j])
            .map(|j| self.coordinate_exponent(j))
            .collect()
    }

    pub fn with_boundary(&self, boundary: Option<Vec<bool>>) -> Result<Self> {
        Self::new(self.basis.clone(), self.invertible.clone(), boundary)
    }

    /// Chart coordinates of the global exponent `v`: the `x` with `t^v = w^x`.
    pub fn local_exponent(&self, v: &[i64]) -> Vec<i64> {
        self.inverse
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn is_boundary(&self, j: usize) -> bool {
        self.boundary.as_ref().is_some_and(|b| b[j])
    }

    /// `t^v` is regular on the chart.
    pub fn monomial_is_regular(&self, v: &[i64]) -> bool {
        let x = self.local_exponent(v);
        (0..self.nvars()).all(|j| self.invertible[j] || x[j] >= 0)
    }

    /// `t^v` is a unit on the chart.
    pub fn monomial_is_unit(&self, v: &[i64]) -> bool {
        let x = self.local_exponent(v);
        (0..self.nvars()).all(|j| self.invertible[j] || x[j] == 0)
    }

    pub fn is_regular_function(&self, f: &LaurentPoly) -> bool {
        f.nvars() == self.nvars() && f.exponents().all(|v| self.monomial_is_regular(v))
    }

    /// Constraint on forms `t^v Σ f_k θ_k` of multidegree `v` in the given mode.
    ///
    /// Writing the form as `Σ_j g_j dw_j/w_j`, a non-invertible interior
    /// coordinate needs `g_j` divisible by `w_j`, a boundary coordinate (log
    /// mode) only needs `g_j` regular.
    pub fn admissible(&self, v: &[i64], mode: FormMode) -> Result<Admissible> {
        if mode == FormMode::Log && self.boundary.is_none() {
            return Err(Error::NoBoundaryData);
        }
        let x = self.local_exponent(v);
        let mut vanish = Vec::new();
        for j in 0..self.nvars() {
            if self.invertible[j] {
                continue;
            }
            if x[j] < 0 {
                return Ok(Admissible::Nothing);
            }
            let pole_allowed = mode == FormMode::Log && self.is_boundary(j);
            if x[j] == 0 && !pole_allowed {
                vanish.push(j);
            }
        }
        Ok(Admissible::VanishAt(vanish))
    }

    /// Row `j` of `M⁻¹`: the linear functional `f ↦ g_j` taking global log
    /// coefficients to the chart's log coefficient at `w_j`.
    pub fn chart_coefficient_row(&self, j: usize) -> &[i64] {
        &self.inverse[j]
    }

    /// Chart log coefficients `g = M⁻¹ f` of a constant coefficient vector.
    pub fn chart_coefficients(&self, f: &[Rational]) -> Vec<Rational> {
        self.inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(f)
                    .map(|(&a, b)| Rational::from_integer(a.into()) * b)
                    .sum()
            })
            .collect()
    }

    fn form_in_mode(&self, w: &DlogForm, mode: FormMode) -> Result<bool> {
        if mode == FormMode::Log && self.boundary.is_none() {
            return Err(Error::NoBoundaryData);
        }
        if w.nvars() != self.nvars() || w.degree() != 1 {
            return Ok(false);
        }
        let coeffs = w.coefficients();
        for v in w.multidegrees() {
            let f: Vec<Rational> = coeffs.iter().map(|c| c.coeff(&v)).collect();
            let g = self.chart_coefficients(&f);
            let ok = match self.admissible(&v, mode)? {
                Admissible::Nothing => g.iter().all(|x| x.is_zero()),
                Admissible::VanishAt(js) => js.iter().all(|&j| g[j].is_zero()),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The 1-form is regular on the chart.
    pub fn is_regular_form(&self, w: &DlogForm) -> bool {
        self.form_in_mode(w, FormMode::Regular)
            .expect("regular mode needs no boundary data")
    }

    /// The 1-form has at most logarithmic poles along the boundary and is
    /// regular elsewhere on the chart.
    pub fn is_log_form(&self, w: &DlogForm) -> Result<bool> {
        self.form_in_mode(w, FormMode::Log)
    }

    pub fn form_in(&self, w: &DlogForm, mode: FormMode) -> Result<bool> {
        self.form_in_mode(w, mode)
    }
}

/// Wire form of a chart. `basis` lists the rows of `M`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChartRepr {
    pub basis: Vec<Vec<i64>>,
    pub invertible: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<bool>>,
}

impl TryFrom<ChartRepr> for Chart {
    type Error = Error;
    fn try_from(r: ChartRepr) -> Result<Self> {
        Chart::new(r.basis, r.invertible, r.boundary)
    }
}

impl From<&Chart> for ChartRepr {
    fn from(c: &Chart) -> Self {
        ChartRepr {
            basis: c.basis.clone(),
            invertible: c.invertible.clone(),
            boundary: c.boundary.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::syntax::{parse_form, parse_poly};

    fn chart(basis: Vec<Vec<i64>>, inv: Vec<bool>, bd: Option<Vec<bool>>) -> Chart {
        Chart::new(basis, inv, bd).unwrap()
    }

    #[test]
    fn function_membership() {
        let f = parse_poly("t1^-1", 2).unwrap();
        let c_line = chart(vec![vec![1, 0], vec![0, 1]], vec![false, true], None);
        let c_star = chart(vec![vec![1, 0], vec![0, 1]], vec![true, false], None);
        assert!(!c_line.is_regular_function(&f));
        assert!(c_star.is_regular_function(&f));
        // P1 x P1 chart with coordinates (t1^-1, t2).
        let p = chart(vec![vec![-1, 0], vec![0, 1]], vec![false, false], None);
        assert!(p.is_regular_function(&parse_poly("t1^-1*t2", 2).unwrap()));
        assert_eq!(p.local_exponent(&[-1, 1]), vec![1, 1]);
    }

    #[test]
    fn forms_on_projective_line() {
        let u0 = chart(vec![vec![1]], vec![false], None);
        let u1 = chart(vec![vec![-1]], vec![false], None);
        let theta = parse_form("Q1", 1, 1).unwrap();
        let dz = parse_form("t1*Q1", 1, 1).unwrap();
        assert!(!u0.is_regular_form(&theta));
        assert!(u0.is_regular_form(&dz));
        assert!(!u1.is_regular_form(&dz));
        let at_infinity = chart(vec![vec![-1]], vec![false], Some(vec![true]));
        assert!(at_infinity.is_log_form(&theta).unwrap());
        assert!(at_infinity.is_log_form(&DlogForm::zero(1, 1)).unwrap());
    }

    #[test]
    fn dz1_is_not_logarithmic_at_infinity_of_p2() {
        // u = t1^-1, v = t2 t1^-1; the line at infinity is u = 0.
        let c = chart(
            vec![vec![-1, -1], vec![0, 1]],
            vec![false, false],
            Some(vec![true, false]),
        );
        let dz1 = parse_form("t1*Q1", 2, 1).unwrap();
        assert!(!c.is_log_form(&dz1).unwrap());
    }

    #[test]
    fn log_test_needs_boundary_data() {
        let c = chart(vec![vec![1]], vec![false], None);
        assert!(matches!(
            c.is_log_form(&DlogForm::zero(1, 1)),
            Err(Error::NoBoundaryData)
        ));
    }

    #[test]
    fn rejects_bad_charts() {
        assert!(matches!(
            Chart::new(vec![vec![2]], vec![false], None),
            Err(Error::NotUnimodular)
        ));
        assert!(Chart::new(vec![vec![1]], vec![true], Some(vec![true])).is_err());
        assert!(Chart::new(vec![vec![1, 0]], vec![true], None).is_err());
    }

    #[test]
    fn chart_coefficients_transform() {
        let c = chart(vec![vec![-1]], vec![false], None);
        assert_eq!(c.chart_coefficients(&[rat(1, 1)]), vec![rat(-1, 1)]);
    }
}
