//! Monomial line bundles: unit 1-cocycles on an atlas, up to unit coboundaries.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{Exponent, UnitMonomial};
use crate::atlas::{Atlas, FormMode};
use crate::cech::{
    dlog_cochain, solve_coboundary, split_coefficients, Certificate, CoboundarySolution,
    FormCochain, UnitCochain,
};
use crate::error::{Error, Result};
use crate::linalg::{int_matrix, smith};

/// An invertible sheaf given by transition functions `g_ij` (for `i < j`) with
/// `s_j = g_ij s_i`-style conventions fixed by `α_j − α_i = dlog g_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineBundle {
    cocycle: UnitCochain,
}

/// Result of the Atiyah obstruction computation.
///
/// The class of `−(dg_ij/g_ij)` in `H¹(X, Ω¹)` vanishes exactly when
/// `dg_ij/g_ij = α_j − α_i` is solvable with regular `α_i`; `witness` is such an `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub vanishes: bool,
    pub witness: Option<FormCochain>,
    pub certificate: Option<Certificate>,
}

impl LineBundle {
    /// Builds a bundle, rejecting transition data that fails the cocycle identity.
    pub fn new(cocycle: UnitCochain) -> Result<Self> {
        let b = Self::new_unchecked(cocycle)?;
        if let Some(idx) = b.cocycle.cocycle_defect() {
            return Err(Error::NotACocycle(idx));
        }
        Ok(b)
    }

    /// Wraps transition data without checking the triple identities; see
    /// [`LineBundle::check_cocycle`].
    pub fn new_unchecked(cocycle: UnitCochain) -> Result<Self> {
        if cocycle.degree() != 1 {
            return Err(Error::Invalid("transition data must be a 1-cochain".into()));
        }
        Ok(Self { cocycle })
    }

    /// Bundle on `atlas` with the given transition functions; missing pairs are `1`.
    pub fn from_transitions<I>(atlas: Arc<Atlas>, transitions: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, UnitMonomial)>,
    {
        Self::new(UnitCochain::new(atlas, 1, transitions)?)
    }

    pub fn trivial(atlas: Arc<Atlas>) -> Self {
        Self {
            cocycle: UnitCochain::trivial(atlas, 1),
        }
    }

    pub fn atlas(&self) -> &Arc<Atlas> {
        self.cocycle.atlas()
    }

    pub fn cocycle(&self) -> &UnitCochain {
        &self.cocycle
    }

    /// `g_ik = g_ij g_jk` on every triple and every `g_ij` a unit on `U_ij`.
    pub fn check_cocycle(&self) -> bool {
        let atlas = self.atlas();
        self.cocycle.entries().iter().all(|(idx, u)| {
            atlas
                .chart_of(idx)
                .is_some_and(|c| c.monomial_is_unit(u.exponent()))
        }) && self.cocycle.cocycle_defect().is_none()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            cocycle: self.cocycle.mul(&other.cocycle)?,
        })
    }

    pub fn dual(&self) -> Self {
        Self {
            cocycle: self.cocycle.inverse(),
        }
    }

    /// Exponent vectors of the transition functions, one per nerve pair.
    pub fn exponents(&self) -> Vec<(Vec<usize>, Exponent)> {
        self.cocycle
            .entries()
            .into_iter()
            .map(|(idx, u)| (idx, u.exponent().to_vec()))
            .collect()
    }

    /// A trivialization: units `u_i` on `U_i` with `g_ij = u_j / u_i`, if any.
    ///
    /// The exponent part is an integer linear system over the charts' unit
    /// lattices (solved through a Smith normal form); the coefficient part is a
    /// multiplicative splitting on the nerve graph.
    pub fn trivialization(&self) -> Result<Option<UnitCochain>> {
        let atlas = self.atlas().clone();
        let n = atlas.nvars();
        let gens: Vec<Vec<Exponent>> = atlas.charts().iter().map(|c| c.unit_generators()).collect();
        let offsets: Vec<usize> = gens
            .iter()
            .scan(0, |acc, g| {
                let o = *acc;
                *acc += g.len();
                Some(o)
            })
            .collect();
        let ncols: usize = gens.iter().map(Vec::len).sum();
        let pairs = atlas.pairs();
        let nrows = pairs.len() * n;
        let mut a = int_matrix(nrows, ncols);
        let mut b = vec![BigInt::from(0); nrows];
        for (p, idx) in pairs.iter().enumerate() {
            let (i, j) = (idx[0], idx[1]);
            let g = self.cocycle.get(idx);
            for k in 0..n {
                let r = p * n + k;
                b[r] = BigInt::from(g.exponent()[k]);
                for (s, e) in gens[j].iter().enumerate() {
                    a[r][offsets[j] + s] += BigInt::from(e[k]);
                }
                for (s, e) in gens[i].iter().enumerate() {
                    a[r][offsets[i] + s] -= BigInt::from(e[k]);
                }
            }
        }
        let y = if nrows == 0 {
            vec![BigInt::from(0); ncols]
        } else {
            match smith(&a, nrows, ncols).solve(&b) {
                Some(y) => y,
                None => return Ok(None),
            }
        };
        let exps: Vec<Exponent> = (0..atlas.len())
            .map(|i| {
                let mut e = vec![0i64; n];
                for (s, gen) in gens[i].iter().enumerate() {
                    let coef = y[offsets[i] + s].to_i64().expect("small exponent");
                    for k in 0..n {
                        e[k] += coef * gen[k];
                    }
                }
                e
            })
            .collect();
        let Some(k) = split_coefficients(&atlas, |p| self.cocycle.get(p).coeff().clone()) else {
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
        debug_assert_eq!(&u.coboundary()?, &self.cocycle);
        Ok(Some(u))
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.trivialization()?.is_some())
    }

    pub fn atiyah_obstruction(&self) -> Result<ObstructionReport> {
        let target = dlog_cochain(&self.cocycle);
        Ok(match solve_coboundary(&target, FormMode::Regular)? {
            CoboundarySolution::Solved(alpha) => ObstructionReport {
                vanishes: true,
                witness: Some(alpha),
                certificate: None,
            },
            CoboundarySolution::Obstructed(cert) => ObstructionReport {
                vanishes: false,
                witness: None,
                certificate: Some(cert),
            },
        })
    }
}
