//! Seeded random inputs: polynomials, forms, chart-regular forms, bundles.

use std::collections::HashMap;
use std::sync::Arc;

use lbconn::algebra::{DlogForm, Exponent, LaurentPoly, Rational, UnitMonomial};
use lbconn::atlas::{Atlas, Chart};
use lbconn::bundle::LineBundle;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=4).into())
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = rational(rng);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

pub fn exponent(rng: &mut impl Rng, n: usize, bound: i64) -> Exponent {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn poly(rng: &mut impl Rng, n: usize, max_terms: usize, bound: i64) -> LaurentPoly {
    let k = rng.gen_range(0..=max_terms);
    LaurentPoly::from_terms(n, (0..k).map(|_| (exponent(rng, n, bound), rational(rng)))).unwrap()
}

/// Random `degree`-form in `n` variables.
pub fn form(rng: &mut impl Rng, n: usize, degree: usize, max_terms: usize, bound: i64) -> DlogForm {
    let k = rng.gen_range(0..=max_terms);
    let parts: Vec<(Vec<usize>, LaurentPoly)> = (0..k)
        .map(|_| {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            idx.truncate(degree);
            (idx, poly(rng, n, 2, bound))
        })
        .collect();
    DlogForm::from_components(n, degree, parts).unwrap()
}

/// Random 1-form that is regular on `chart` (log along boundary if `log`),
/// built from the admissible generators `t^v dlog w_j`.
pub fn regular_form(
    rng: &mut impl Rng,
    chart: &Chart,
    log: bool,
    max_terms: usize,
    bound: i64,
) -> DlogForm {
    let n = chart.nvars();
    let mut w = DlogForm::zero(n, 1);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let v = exponent(rng, n, bound);
        let Some(ok) = oracle::allowed(chart, &v, log) else {
            continue;
        };
        let choices: Vec<usize> = (0..n).filter(|&j| ok[j]).collect();
        let Some(&j) = choices.choose(rng) else {
            continue;
        };
        let dir = chart.coordinate_exponent(j);
        let c = nonzero_rational(rng);
        let term = DlogForm::one_form(
            dir.iter()
                .map(|&a| LaurentPoly::monomial(&c * Rational::from_integer(a.into()), v.clone()))
                .collect(),
        );
        w = &w + &term;
    }
    w
}

/// Random monomial bundle from toric Cartier data: an integer weight per ray
/// fixes the pairing of each chart's `m_i` with its rays, and
/// `g_ij = c_ij t^{m_j − m_i}`.
pub fn bundle(rng: &mut impl Rng, atlas: &Arc<Atlas>, bound: i64) -> LineBundle {
    let n = atlas.nvars();
    let mut weights: HashMap<Vec<i64>, i64> = HashMap::new();
    let ms: Vec<Exponent> = atlas
        .charts()
        .iter()
        .map(|c| {
            let mut m = vec![0i64; n];
            for j in 0..n {
                let x = if c.invertible()[j] {
                    rng.gen_range(-bound..=bound)
                } else {
                    let ray = c.chart_coefficient_row(j).to_vec();
                    *weights
                        .entry(ray)
                        .or_insert_with(|| rng.gen_range(-bound..=bound))
                };
                for (mk, ek) in m.iter_mut().zip(c.coordinate_exponent(j)) {
                    *mk += x * ek;
                }
            }
            m
        })
        .collect();
    let ks: Vec<Rational> = (0..atlas.len()).map(|_| nonzero_rational(rng)).collect();
    let transitions = atlas.pairs().into_iter().map(|p| {
        let e: Exponent = (0..n).map(|k| ms[p[1]][k] - ms[p[0]][k]).collect();
        let u = UnitMonomial::new(&ks[p[1]] / &ks[p[0]], e).unwrap();
        (p, u)
    });
    LineBundle::from_transitions(atlas.clone(), transitions).unwrap()
}

/// Random unit on every chart of the atlas (a constant if there is no
/// nonconstant global unit in reach).
pub fn global_unit(rng: &mut impl Rng, atlas: &Atlas, bound: i64) -> UnitMonomial {
    let n = atlas.nvars();
    let e = exponent(rng, n, bound);
    let e = if atlas.charts().iter().all(|c| c.monomial_is_unit(&e)) {
        e
    } else {
        vec![0; n]
    };
    UnitMonomial::new(nonzero_rational(rng), e).unwrap()
}
