//! Exact linear algebra over ℚ (sparse Gaussian elimination) and over ℤ
//! (Smith normal form with transforms).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

/// A sparse row: column index to nonzero coefficient.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Incremental row-echelon form of a linear system `A x = b` over ℚ.
///
/// Each stored row is normalized so that its smallest column (the pivot) has
/// coefficient one.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, (SparseRow, Rational)>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            pivots: BTreeMap::new(),
            inconsistent: false,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Adds the equation `row · x = rhs`. Returns `false` if it made the system
    /// inconsistent.
    pub fn push(&mut self, mut row: SparseRow, mut rhs: Rational) -> bool {
        row.retain(|_, c| !c.is_zero());
        loop {
            let Some((&col, _)) = row.iter().next() else {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                    return false;
                }
                return true;
            };
            match self.pivots.get(&col) {
                Some((prow, prhs)) => {
                    let factor = row[&col].clone();
                    for (c, v) in prow {
                        let entry = row.entry(*c).or_insert_with(Rational::zero);
                        *entry -= &factor * v;
                        if entry.is_zero() {
                            row.remove(c);
                        }
                    }
                    rhs -= &factor * prhs;
                }
                None => {
                    let lead = row[&col].clone();
                    for v in row.values_mut() {
                        *v /= &lead;
                    }
                    rhs /= lead;
                    self.pivots.insert(col, (row, rhs));
                    return true;
                }
            }
        }
    }

    /// Back substitution for `x` with `free` values assigned to non-pivot
    /// columns, or `None` if inconsistent.
    fn back_substitute(
        &self,
        free: &dyn Fn(usize) -> Rational,
        homogeneous: bool,
    ) -> Vec<Rational> {
        let mut x: Vec<Rational> = (0..self.ncols)
            .map(|c| {
                if self.pivots.contains_key(&c) {
                    Rational::zero()
                } else {
                    free(c)
                }
            })
            .collect();
        for (&col, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = if homogeneous {
                Rational::zero()
            } else {
                rhs.clone()
            };
            for (&c, a) in row.range(col + 1..) {
                v -= a * &x[c];
            }
            x[col] = v;
        }
        x
    }

    /// A particular solution with all free variables set to zero.
    pub fn solution(&self) -> Option<Vec<Rational>> {
        if self.inconsistent {
            return None;
        }
        Some(self.back_substitute(&|_| Rational::zero(), false))
    }

    /// A basis of the solution space of the homogeneous system.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|f| {
                self.back_substitute(
                    &|c| {
                        if c == f {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    },
                    true,
                )
            })
            .collect()
    }
}

/// Solves `A x = b` for dense `A`; `None` if inconsistent.
pub fn solve_dense(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let mut e = Echelon::new(ncols);
    for (row, rhs) in a.iter().zip(b) {
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        if !e.push(sparse, rhs.clone()) {
            return None;
        }
    }
    e.solution()
}

/// Inverse of a square integer matrix over ℚ, if it exists.
pub fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let a: Vec<Vec<Rational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let b: Vec<Rational> = (0..n)
            .map(|i| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let mut e = Echelon::new(n);
        for (row, rhs) in a.iter().zip(&b) {
            let sparse: SparseRow = row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect();
            e.push(sparse, rhs.clone());
        }
        if e.rank() < n || !e.is_consistent() {
            return None;
        }
        cols.push(e.solution()?);
    }
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect(),
    )
}

/// Integer determinant (fraction-free elimination).
pub fn det_i64(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> IntMatrix {
    let mut m = int_matrix(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn to_int_matrix(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Smith normal form `P · A · Q = D` with `P`, `Q` unimodular and the diagonal
/// entries `d_1 | d_2 | …` positive for the first `rank` positions.
#[derive(Clone, Debug)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    pub diagonal: Vec<BigInt>,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Basis of the integer kernel of `A` (columns of `Q` beyond the rank).
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.cols)
            .map(|j| (0..self.cols).map(|i| self.q[i][j].clone()).collect())
            .collect()
    }

    /// Integer solution of `A y = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let z = mat_vec(&self.p, b);
        let mut w = vec![BigInt::zero(); self.cols];
        for (i, zi) in z.iter().enumerate() {
            if i < self.rank() {
                let (quot, rem) = zi.div_rem(&self.diagonal[i]);
                if !rem.is_zero() {
                    return None;
                }
                w[i] = quot;
            } else if !zi.is_zero() {
                return None;
            }
        }
        Some(mat_vec(&self.q, &w))
    }

    /// Invariant factors of the cokernel `ℤ^rows / im A`: the non-unit
    /// diagonal entries followed by `rows - rank` free summands.
    pub fn cokernel(&self) -> AbelianGroup {
        AbelianGroup {
            free_rank: self.rows - self.rank(),
            torsion: self
                .diagonal
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect(),
        }
    }

    /// Coordinates of `y ∈ ℤ^rows` in the cokernel presentation returned by
    /// [`Smith::cokernel`]: torsion coordinates reduced modulo their order,
    /// then free coordinates.
    pub fn cokernel_coordinates(&self, y: &[BigInt]) -> Vec<BigInt> {
        let z = mat_vec(&self.p, y);
        let mut out = Vec::new();
        for (i, zi) in z.iter().enumerate() {
            if i < self.rank() {
                let d = &self.diagonal[i];
                if !d.is_one() {
                    out.push(zi.mod_floor(d));
                }
            } else {
                out.push(zi.clone());
            }
        }
        out
    }
}

pub fn smith(a: &IntMatrix, rows: usize, cols: usize) -> Smith {
    let mut m = a.clone();
    let mut p = identity(rows);
    let mut q = identity(cols);
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block goes to (t, t).
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        p.swap(t, bi);
        swap_cols(&mut m, t, bj);
        swap_cols(&mut q, t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let f = m[i][t].div_floor(&m[t][t]);
                add_row(&mut m, i, t, &-&f);
                add_row(&mut p, i, t, &-&f);
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    p.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let f = m[t][j].div_floor(&m[t][t]);
                add_col(&mut m, j, t, &-&f);
                add_col(&mut q, j, t, &-&f);
                if !m[t][j].is_zero() {
                    swap_cols(&mut m, t, j);
                    swap_cols(&mut q, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
            match bad {
                Some(i) => {
                    add_row(&mut m, t, i, &BigInt::one());
                    add_row(&mut p, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
            for x in p[t].iter_mut() {
                *x = -&*x;
            }
        }
        diagonal.push(m[t][t].clone());
        t += 1;
    }
    Smith {
        rows,
        cols,
        diagonal,
        p,
        q,
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row[dst] += f · row[src]`.
fn add_row(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(src_row) {
        *x += f * s;
    }
}

/// `col[dst] += f · col[src]`.
fn add_col(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[dst] += f * s;
    }
}

/// A finitely generated abelian group `ℤ^free_rank ⊕ ⨁ ℤ/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of coordinates of an element (torsion coordinates first).
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Direct sum, torsion of `self` then of `other`, free parts merged last.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            free_rank: self.free_rank + other.free_rank,
            torsion: self.torsion.iter().chain(&other.torsion).cloned().collect(),
        }
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{}", d)).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{}", r)),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn big(m: &[Vec<i64>]) -> IntMatrix {
        to_int_matrix(m)
    }

    fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let n = b[0].len();
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().enumerate().map(|(k, x)| x * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_decomposition_is_valid() {
        let a = big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith(&a, 3, 3);
        let d = mat_mul(&mat_mul(&s.p, &a), &s.q);
        assert_eq!(
            s.diagonal,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j {
                    s.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(d[i][j], expected);
            }
        }
        assert_eq!(det_i64(&[vec![1, 0], vec![0, 1]]).abs(), BigInt::one());
    }

    #[test]
    fn cokernel_with_torsion() {
        let a = big(&[vec![1, 1], vec![2, 0]]);
        let s = smith(&a, 2, 2);
        let g = s.cokernel();
        assert_eq!(g.to_string(), "Z/2");
        assert_eq!(
            smith(&big(&[vec![0], vec![0]]), 2, 1)
                .cokernel()
                .to_string(),
            "Z^2"
        );
    }

    #[test]
    fn integer_solve_and_kernel() {
        let a = big(&[vec![2, 0], vec![0, 3]]);
        let s = smith(&a, 2, 2);
        assert!(s.solve(&[BigInt::from(1), BigInt::from(0)]).is_none());
        let y = s.solve(&[BigInt::from(4), BigInt::from(9)]).unwrap();
        assert_eq!(mat_vec(&a, &y), vec![BigInt::from(4), BigInt::from(9)]);
        let k = smith(&big(&[vec![1, -1, 0]]), 1, 3).kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0], v[1]);
        }
    }

    #[test]
    fn rational_echelon() {
        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)]];
        let x = solve_dense(&a, &[rat(3, 1), rat(1, 1)], 2).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]];
        assert!(solve_dense(&a, &[rat(1, 1), rat(3, 1)], 2).is_none());
        let mut e = Echelon::new(3);
        e.push(
            [(0, rat(1, 1)), (2, rat(-1, 1))].into_iter().collect(),
            rat(0, 1),
        );
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        assert!(rational_inverse(&[vec![-1, -1], vec![0, 1]]).is_some());
        assert!(rational_inverse(&[vec![1, 2], vec![2, 4]]).is_none());
    }
}
