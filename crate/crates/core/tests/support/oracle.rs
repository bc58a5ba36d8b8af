//! Dense brute-force coboundary solver over a whole exponent box.
//!
//! Shares no code with the graded solver: chart membership is re-derived from
//! the chart matrix (`t^v · dlog w_j` is regular iff `w^x / w_j` is, for
//! `x = M⁻¹ v`), and all multidegrees go into one linear system solved by a
//! plain sparse Gauss–Jordan elimination.

use std::collections::BTreeMap;

use lbconn::algebra::{DlogForm, Exponent, Rational};
use lbconn::atlas::Chart;
use lbconn::cech::FormCochain;
use num_traits::{One, Zero};

/// `M⁻¹` over ℚ by Gauss–Jordan on the augmented matrix.
pub fn inverse(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .chain((0..n).map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }))
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !a[r][c].is_zero())
            .expect("singular chart matrix");
        a.swap(c, p);
        let inv = Rational::one() / &a[c][c];
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn apply(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Which chart log-coefficients `g_j` may be nonzero at multidegree `v`;
/// `None` if no nonzero form of that multidegree is allowed.
pub fn allowed(chart: &Chart, v: &[i64], log: bool) -> Option<Vec<bool>> {
    let minv = inverse(chart.basis());
    let vq: Vec<Rational> = v
        .iter()
        .map(|&x| Rational::from_integer(x.into()))
        .collect();
    let x = apply(&minv, &vq);
    let n = chart.nvars();
    let affine = |j: usize| !chart.invertible()[j];
    if (0..n).any(|j| affine(j) && x[j] < Rational::zero()) {
        return None;
    }
    let boundary = |j: usize| log && chart.boundary().is_some_and(|b| b[j]);
    Some(
        (0..n)
            .map(|j| !(affine(j) && x[j].is_zero() && !boundary(j)))
            .collect(),
    )
}

/// Independent membership test for a 1-form on a chart.
pub fn form_ok(chart: &Chart, w: &DlogForm, log: bool) -> bool {
    let minv = inverse(chart.basis());
    let coeffs = w.coefficients();
    w.multidegrees().iter().all(|v| {
        let f: Vec<Rational> = coeffs.iter().map(|c| c.coeff(v)).collect();
        let g = apply(&minv, &f);
        match allowed(chart, v, log) {
            None => g.iter().all(Zero::is_zero),
            Some(ok) => g.iter().zip(ok).all(|(x, ok)| ok || x.is_zero()),
        }
    })
}

pub fn box_points(n: usize, b: i64) -> Vec<Exponent> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |x| {
                    let mut q: Exponent = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect()
    })
}

/// Incremental sparse row reduction with full back-substitution on demand.
struct System {
    pivots: BTreeMap<usize, (BTreeMap<usize, Rational>, Rational)>,
    consistent: bool,
}

impl System {
    fn new() -> Self {
        Self {
            pivots: BTreeMap::new(),
            consistent: true,
        }
    }

    fn add(&mut self, mut row: BTreeMap<usize, Rational>, mut rhs: Rational) {
        row.retain(|_, c| !c.is_zero());
        while let Some(col) = row.keys().copied().find(|c| self.pivots.contains_key(c)) {
            let (prow, prhs) = &self.pivots[&col];
            let f = row[&col].clone();
            for (k, c) in prow {
                let e = row.entry(*k).or_insert_with(Rational::zero);
                *e = &*e - &(&f * c);
            }
            rhs = &rhs - &(&f * prhs);
            row.retain(|_, c| !c.is_zero());
        }
        let Some((&lead, lc)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.consistent = false;
            }
            return;
        };
        let inv = Rational::one() / lc;
        let row: BTreeMap<usize, Rational> = row.iter().map(|(k, c)| (*k, c * &inv)).collect();
        let rhs = rhs * &inv;
        // keep pivot rows reduced against each other
        for (prow, prhs) in self.pivots.values_mut() {
            if let Some(f) = prow.get(&lead).cloned() {
                for (k, c) in &row {
                    let e = prow.entry(*k).or_insert_with(Rational::zero);
                    *e = &*e - &(&f * c);
                }
                *prhs = &*prhs - &(&f * &rhs);
                prow.retain(|_, c| !c.is_zero());
            }
        }
        self.pivots.insert(lead, (row, rhs));
    }

    fn solution(&self, ncols: usize) -> Option<Vec<Rational>> {
        if !self.consistent {
            return None;
        }
        let mut x = vec![Rational::zero(); ncols];
        for (lead, (_, rhs)) in &self.pivots {
            x[*lead] = rhs.clone();
        }
        Some(x)
    }
}

/// Brute-force answer to `δα = β`: unknowns are the coefficients of
/// `t^v θ_k` in every `α_i` for every `v` in `[−B, B]ⁿ`, `B = deg β + 1`.
/// Returns the local forms of a solution if there is one.
pub fn brute_force(target: &FormCochain, log: bool) -> Option<Vec<DlogForm>> {
    let atlas = target.atlas();
    let n = atlas.nvars();
    let b = target.max_abs_degree() + 1;
    let pts = box_points(n, b);
    let var = |i: usize, p: usize, k: usize| (i * pts.len() + p) * n + k;
    let ncols = atlas.len() * pts.len() * n;
    let mut sys = System::new();
    for idx in atlas.pairs() {
        let (i, j) = (idx[0], idx[1]);
        let coeffs = target.get(&idx).coefficients();
        for (p, v) in pts.iter().enumerate() {
            for k in 0..n {
                let row = BTreeMap::from([
                    (var(j, p, k), Rational::one()),
                    (var(i, p, k), -Rational::one()),
                ]);
                sys.add(row, coeffs[k].coeff(v));
            }
        }
    }
    for i in 0..atlas.len() {
        let mut charts: Vec<(&Chart, bool)> = vec![(atlas.chart(i), false)];
        if log {
            let comp = atlas
                .compactification()
                .expect("log mode needs a compactification");
            charts.extend(comp.cover(i).iter().map(|&v| (comp.atlas().chart(v), true)));
        }
        for (chart, lg) in charts {
            let minv = inverse(chart.basis());
            for (p, v) in pts.iter().enumerate() {
                let ok = allowed(chart, v, lg);
                for j in 0..n {
                    if ok.as_ref().is_some_and(|o| o[j]) {
                        continue;
                    }
                    let row = (0..n)
                        .filter(|&k| !minv[j][k].is_zero())
                        .map(|k| (var(i, p, k), minv[j][k].clone()))
                        .collect();
                    sys.add(row, Rational::zero());
                }
            }
        }
    }
    let x = sys.solution(ncols)?;
    Some(
        (0..atlas.len())
            .map(|i| {
                let parts = (0..n).map(|k| {
                    let terms = pts
                        .iter()
                        .enumerate()
                        .map(|(p, v)| (v.clone(), x[var(i, p, k)].clone()));
                    (
                        vec![k],
                        lbconn::algebra::LaurentPoly::from_terms(n, terms).unwrap(),
                    )
                });
                DlogForm::from_components(n, 1, parts).unwrap()
            })
            .collect(),
    )
}
