//! Integer cohomology of one- and two-chart atlases by Mayer–Vietoris.
//!
//! Every chart and intersection is `ℂᵃ × (ℂ*)ᵇ`, homotopic to a real `b`-torus.
//! Its `H¹` is the lattice of unit exponents (basis: the invertible coordinate
//! exponents) and `H²` is the second exterior power of that lattice.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::Exponent;
use crate::atlas::{Atlas, Chart};
use crate::bundle::LineBundle;
use crate::error::{Error, Result};
use crate::linalg::{int_matrix, smith, AbelianGroup, IntMatrix, Smith};

/// Homotopy type of a chart: a torus of the given rank, with the unit lattice
/// generators that identify its `H¹` with a sublattice of `ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusHomotopy {
    pub rank: usize,
    pub generators: Vec<Exponent>,
}

impl TorusHomotopy {
    pub fn of_chart(chart: &Chart) -> Self {
        let generators = chart.unit_generators();
        Self {
            rank: generators.len(),
            generators,
        }
    }

    /// Coordinates of a unit exponent in the generator basis.
    fn coordinates(chart: &Chart, v: &[i64]) -> Vec<BigInt> {
        let x = chart.local_exponent(v);
        (0..chart.nvars())
            .filter(|&j| chart.invertible()[j])
            .map(|j| BigInt::from(x[j]))
            .collect()
    }
}

/// A cohomology class: a group presentation and the coordinates of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub group: AbelianGroup,
    pub element: Vec<BigInt>,
}

impl CohClass {
    pub fn is_zero(&self) -> bool {
        self.element.iter().all(Zero::is_zero)
    }

    /// The class has finite order: its free coordinates vanish.
    pub fn is_torsion(&self) -> bool {
        self.element[self.group.torsion.len()..]
            .iter()
            .all(Zero::is_zero)
    }
}

/// `H¹(X;ℤ)` and `H²(X;ℤ)` of a one- or two-chart atlas.
#[derive(Clone, Debug)]
pub struct MvCohomology {
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    /// Smith form of `ρ¹ : H¹(U₀) ⊕ H¹(U₁) → H¹(U₀₁)` for two charts.
    restriction: Option<Smith>,
}

fn check_chart_count(atlas: &Atlas) -> Result<()> {
    if atlas.len() > 2 || atlas.is_empty() {
        return Err(Error::UnsupportedAtlas(format!(
            "Mayer-Vietoris needs one or two charts, the atlas has {}",
            atlas.len()
        )));
    }
    Ok(())
}

fn binomial2(b: usize) -> usize {
    b * b.saturating_sub(1) / 2
}

/// Matrix of the restriction `H¹(U) → H¹(U₀₁)` in generator bases.
fn restriction_matrix(from: &Chart, to: &Chart) -> IntMatrix {
    let gens = from.unit_generators();
    let rows = to.unit_generators().len();
    let mut m = int_matrix(rows, gens.len());
    for (c, g) in gens.iter().enumerate() {
        for (r, x) in TorusHomotopy::coordinates(to, g).into_iter().enumerate() {
            m[r][c] = x;
        }
    }
    m
}

/// Second exterior power of a matrix, in the lexicographic bases `e_a ∧ e_b`.
fn wedge2(m: &IntMatrix, rows: usize, cols: usize) -> IntMatrix {
    let pairs = |n: usize| -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect()
    };
    let (rp, cp) = (pairs(rows), pairs(cols));
    rp.iter()
        .map(|&(p, q)| {
            cp.iter()
                .map(|&(a, b)| &m[p][a] * &m[q][b] - &m[p][b] * &m[q][a])
                .collect()
        })
        .collect()
}

fn hstack(blocks: &[(&IntMatrix, bool)], rows: usize) -> IntMatrix {
    (0..rows)
        .map(|r| {
            blocks
                .iter()
                .flat_map(|(b, neg)| b[r].iter().map(move |x| if *neg { -x } else { x.clone() }))
                .collect()
        })
        .collect()
}

pub fn mv_cohomology(atlas: &Atlas) -> Result<MvCohomology> {
    check_chart_count(atlas)?;
    if atlas.len() == 1 {
        let b = TorusHomotopy::of_chart(atlas.chart(0)).rank;
        return Ok(MvCohomology {
            h1: AbelianGroup::free(b),
            h2: AbelianGroup::free(binomial2(b)),
            restriction: None,
        });
    }
    let u01 = atlas
        .chart_of(&[0, 1])
        .ok_or_else(|| Error::UnsupportedAtlas("the two charts do not meet".into()))?;
    let r01 = u01.unit_generators().len();
    let (c0, c1) = (atlas.chart(0), atlas.chart(1));
    let (b0, b1) = (c0.unit_generators().len(), c1.unit_generators().len());
    let (m0, m1) = (restriction_matrix(c0, u01), restriction_matrix(c1, u01));

    let rho1 = hstack(&[(&m0, true), (&m1, false)], r01);
    let s1 = smith(&rho1, r01, b0 + b1);
    let h1 = AbelianGroup::free(b0 + b1 - s1.rank());

    let (w0, w1) = (wedge2(&m0, r01, b0), wedge2(&m1, r01, b1));
    let rows2 = binomial2(r01);
    let cols2 = binomial2(b0) + binomial2(b1);
    let rho2 = hstack(&[(&w0, true), (&w1, false)], rows2);
    let ker2 = cols2 - smith(&rho2, rows2, cols2).rank();
    // 0 → coker ρ¹ → H²(X) → ker ρ² → 0 splits because ker ρ² is free.
    let h2 = s1.cokernel().direct_sum(&AbelianGroup::free(ker2));
    Ok(MvCohomology {
        h1,
        h2,
        restriction: Some(s1),
    })
}

/// First Chern class: the winding vector of `g₀₁` pushed through the
/// Mayer–Vietoris connecting map `H¹(U₀₁) → H²(X)`.
pub fn chern_class(bundle: &LineBundle) -> Result<CohClass> {
    let atlas = bundle.atlas();
    let mv = mv_cohomology(atlas)?;
    let Some(s1) = &mv.restriction else {
        return Ok(CohClass {
            element: vec![BigInt::zero(); mv.h2.ngens()],
            group: mv.h2,
        });
    };
    let u01 = atlas.chart_of(&[0, 1]).expect("checked by mv_cohomology");
    let g = bundle.cocycle().get(&[0, 1]);
    let y = TorusHomotopy::coordinates(u01, g.exponent());
    let mut element = s1.cokernel_coordinates(&y);
    element.resize(mv.h2.ngens(), BigInt::zero());
    Ok(CohClass {
        group: mv.h2,
        element,
    })
}

/// `Hom(H₁(X;ℤ), ℂ*) ≅ (ℂ*)^rank × (torsion of H₁)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicCiStructure {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl PicCiStructure {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for PicCiStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("C*".to_string()),
            r => parts.push(format!("(C*)^{}", r)),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{}", d)));
        write!(f, "{}", parts.join(" x "))
    }
}

/// Structure of the group of line bundles with integrable connection, up to
/// analytic isomorphism. By universal coefficients `H₁` has free rank
/// `rank H¹` and the torsion of `H²`; the dual of a finite group is isomorphic
/// to it.
pub fn pic_ci_structure(atlas: &Atlas) -> Result<PicCiStructure> {
    let mv = mv_cohomology(atlas)?;
    assert!(mv.h1.torsion.is_empty(), "H¹ of a space is torsion-free");
    Ok(PicCiStructure {
        rank: mv.h1.free_rank,
        torsion: mv.h2.torsion.clone(),
    })
}

/// Converts an integer coordinate vector for display.
pub fn element_to_i64(element: &[BigInt]) -> Vec<i64> {
    element
        .iter()
        .map(|x| {
            x.to_i64()
                .unwrap_or(if x.is_negative() { i64::MIN } else { i64::MAX })
        })
        .collect()
}
