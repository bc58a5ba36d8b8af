//! Degree-truncated description of `Pic`, `Pic_c` and `Pic_ci` for an atlas.
//!
//! The fibers of `Pic_c → Pic` and `Pic_ci → Pic` over the trivial bundle are
//! the global (closed) 1-forms modulo `dlog` of global units. Global 1-forms
//! form an infinite-dimensional space on affine pieces, so they are listed
//! multidegree by multidegree inside the box `[−B, B]ⁿ`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{DlogForm, Exponent, LaurentPoly, Rational};
use crate::atlas::{Admissible, Atlas, FormMode};
use crate::error::Result;
use crate::linalg::{int_matrix, smith, AbelianGroup, Echelon, IntMatrix, SparseRow};
use crate::topology::{pic_ci_structure, PicCiStructure};

pub const DEFAULT_DEGREE_BOUND: i64 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct PicardReport {
    pub degree_bound: i64,
    /// Basis of the global regular 1-forms with multidegree in the box.
    pub global_forms: Vec<DlogForm>,
    /// Basis of the closed ones among them.
    pub closed_forms: Vec<DlogForm>,
    /// Lattice basis of exponents of global units; their `dlog` are `Σ e_k θ_k`.
    pub dlog_units: Vec<Exponent>,
    /// Monomial cocycles modulo monomial coboundaries, exponent part.
    pub pic: AbelianGroup,
    /// Rank of `H¹` of the nerve; each contributes a `ℚ*` factor of scalar cocycles.
    pub coefficient_rank: usize,
    /// `Hom(H₁(X), ℂ*)` when the atlas has at most two charts.
    pub pic_ci: Option<PicCiStructure>,
}

impl PicardReport {
    /// Every global form in the box is `dlog` of a unit, i.e. there are none.
    pub fn pic_c_fiber_trivial(&self) -> bool {
        self.global_forms.is_empty()
    }

    pub fn pic_ci_fiber_trivial(&self) -> bool {
        self.closed_forms.is_empty()
    }

    /// Monomial `Pic` (both exponent and scalar parts) is zero.
    pub fn pic_trivial(&self) -> bool {
        self.pic.is_trivial() && self.coefficient_rank == 0
    }
}

fn box_points(n: usize, bound: i64) -> Vec<Exponent> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Exponent| {
                (-bound..=bound).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Constraint rows on `(f_1..f_n)` for `t^v Σ f_k θ_k` to be regular on every chart,
/// or `None` if no nonzero form of this multidegree is.
fn global_constraints(atlas: &Atlas, v: &[i64]) -> Option<Echelon> {
    let n = atlas.nvars();
    let mut sys = Echelon::new(n);
    for chart in atlas.charts() {
        match chart
            .admissible(v, FormMode::Regular)
            .expect("regular mode needs no boundary data")
        {
            Admissible::Nothing => return None,
            Admissible::VanishAt(js) => {
                for j in js {
                    let row: SparseRow = chart
                        .chart_coefficient_row(j)
                        .iter()
                        .enumerate()
                        .filter(|(_, &a)| a != 0)
                        .map(|(k, &a)| (k, Rational::from_integer(a.into())))
                        .collect();
                    sys.push(row, Rational::zero());
                }
            }
        }
    }
    Some(sys)
}

fn form_from(v: &[i64], f: &[Rational]) -> DlogForm {
    DlogForm::one_form(
        f.iter()
            .map(|c| {
                if c.is_zero() {
                    LaurentPoly::zero(v.len())
                } else {
                    LaurentPoly::monomial(c.clone(), v.to_vec())
                }
            })
            .collect(),
    )
}

fn global_forms(atlas: &Atlas, bound: i64) -> (Vec<DlogForm>, Vec<DlogForm>) {
    let n = atlas.nvars();
    let (mut all, mut closed) = (Vec::new(), Vec::new());
    for v in box_points(n, bound) {
        let Some(mut sys) = global_constraints(atlas, &v) else {
            continue;
        };
        all.extend(sys.nullspace().iter().map(|f| form_from(&v, f)));
        // d(t^v Σ f_k θ_k) = t^v Σ_{l<k} (v_l f_k − v_k f_l) θ_l ∧ θ_k
        for l in 0..n {
            for k in l + 1..n {
                let mut row = SparseRow::new();
                if v[l] != 0 {
                    row.insert(k, Rational::from_integer(v[l].into()));
                }
                if v[k] != 0 {
                    row.insert(l, Rational::from_integer((-v[k]).into()));
                }
                sys.push(row, Rational::zero());
            }
        }
        closed.extend(sys.nullspace().iter().map(|f| form_from(&v, f)));
    }
    (all, closed)
}

fn to_i64(v: &[BigInt]) -> Exponent {
    v.iter()
        .map(|x| x.to_i64().expect("small exponent"))
        .collect()
}

/// Exponents `e` with `t^e` a unit on every chart.
fn global_unit_lattice(atlas: &Atlas) -> Vec<Exponent> {
    let n = atlas.nvars();
    let rows: Vec<Vec<BigInt>> = atlas
        .charts()
        .iter()
        .flat_map(|c| {
            (0..n)
                .filter(|&j| !c.invertible()[j])
                .map(|j| {
                    c.chart_coefficient_row(j)
                        .iter()
                        .map(|&a| BigInt::from(a))
                        .collect()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let s = smith(&rows, rows.len(), n);
    s.kernel_basis().iter().map(|b| to_i64(b)).collect()
}

/// Exponent part of monomial `Pic`: cocycles `a_ij` (units on `U_ij`, additive
/// on triples) modulo differences `e_j − e_i` of chart units.
fn monomial_pic(atlas: &Atlas) -> AbelianGroup {
    let n = atlas.nvars();
    let pairs = atlas.pairs();
    let col = |p: usize, k: usize| p * n + k;
    let ncols = pairs.len() * n;
    let mut rows: IntMatrix = Vec::new();
    for (p, idx) in pairs.iter().enumerate() {
        let c = atlas.chart_of(idx).expect("nerve pair");
        for j in (0..n).filter(|&j| !c.invertible()[j]) {
            let mut r = vec![BigInt::zero(); ncols];
            for k in 0..n {
                r[col(p, k)] = BigInt::from(c.chart_coefficient_row(j)[k]);
            }
            rows.push(r);
        }
    }
    let pos = |a: usize, b: usize| pairs.iter().position(|q| q[0] == a && q[1] == b).unwrap();
    for t in atlas.triples() {
        let (ij, jk, ik) = (pos(t[0], t[1]), pos(t[1], t[2]), pos(t[0], t[2]));
        for k in 0..n {
            let mut r = vec![BigInt::zero(); ncols];
            r[col(ij, k)] += 1;
            r[col(jk, k)] += 1;
            r[col(ik, k)] -= 1;
            rows.push(r);
        }
    }
    let kernel = smith(&rows, rows.len(), ncols).kernel_basis();
    let z = kernel.len();
    if z == 0 {
        return AbelianGroup::trivial();
    }
    // Kernel basis as the columns of a matrix, to express coboundaries in it.
    let mut kmat = int_matrix(ncols, z);
    for (c, b) in kernel.iter().enumerate() {
        for r in 0..ncols {
            kmat[r][c] = b[r].clone();
        }
    }
    let ks = smith(&kmat, ncols, z);
    let mut coboundaries: Vec<Vec<BigInt>> = Vec::new();
    for (i, chart) in atlas.charts().iter().enumerate() {
        for e in chart.unit_generators() {
            let mut b = vec![BigInt::zero(); ncols];
            for (p, idx) in pairs.iter().enumerate() {
                let sign = if idx[1] == i {
                    1
                } else if idx[0] == i {
                    -1
                } else {
                    continue;
                };
                for k in 0..n {
                    b[col(p, k)] += sign * e[k];
                }
            }
            coboundaries.push(ks.solve(&b).expect("coboundaries are cocycles"));
        }
    }
    let mut cmat = int_matrix(z, coboundaries.len());
    for (c, v) in coboundaries.iter().enumerate() {
        for r in 0..z {
            cmat[r][c] = v[r].clone();
        }
    }
    smith(&cmat, z, coboundaries.len()).cokernel()
}

/// Rank of `H¹(nerve; ℚ)`.
fn nerve_h1_rank(atlas: &Atlas) -> usize {
    let pairs = atlas.pairs();
    let triples = atlas.triples();
    let mut d0 = int_matrix(pairs.len(), atlas.len());
    for (r, p) in pairs.iter().enumerate() {
        d0[r][p[0]] -= 1;
        d0[r][p[1]] += 1;
    }
    let pos = |a: usize, b: usize| pairs.iter().position(|q| q[0] == a && q[1] == b).unwrap();
    let mut d1 = int_matrix(triples.len(), pairs.len());
    for (r, t) in triples.iter().enumerate() {
        d1[r][pos(t[1], t[2])] += 1;
        d1[r][pos(t[0], t[2])] -= 1;
        d1[r][pos(t[0], t[1])] += 1;
    }
    let r0 = smith(&d0, pairs.len(), atlas.len()).rank();
    let r1 = smith(&d1, triples.len(), pairs.len()).rank();
    pairs.len() - r1 - r0
}

pub fn pic_group_report(atlas: &Atlas, degree_bound: i64) -> Result<PicardReport> {
    let (global_forms, closed_forms) = global_forms(atlas, degree_bound);
    Ok(PicardReport {
        degree_bound,
        global_forms,
        closed_forms,
        dlog_units: global_unit_lattice(atlas),
        pic: monomial_pic(atlas),
        coefficient_rank: nerve_h1_rank(atlas),
        pic_ci: (atlas.len() <= 2)
            .then(|| pic_ci_structure(atlas))
            .transpose()?,
    })
}
