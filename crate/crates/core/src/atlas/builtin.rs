//! Built-in smooth toric spaces, generated from small fans.
//!
//! A cone spanned by rays `u_1..u_k` (part of a lattice basis) gives the chart
//! whose coordinates are the dual basis `m_j` of a completed basis
//! `(u_1..u_k, v_{k+1}..v_n)`: the first `k` coordinates are affine, the rest
//! are units.

use std::sync::Arc;

use num_traits::Signed;

use super::{Atlas, Chart};
use crate::error::{Error, Result};
use crate::linalg::{det_i64, rational_inverse};

pub const BUILTIN_NAMES: [&str; 6] = ["P1", "A2", "Gm2", "A2minus0", "P1xP1", "P2"];

struct Fan {
    name: &'static str,
    n: usize,
    rays: Vec<Vec<i64>>,
    boundary: Vec<bool>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    fn new(name: &'static str, n: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Self {
        Fan {
            name,
            n,
            rays: rays.iter().map(|r| r.to_vec()).collect(),
            boundary: vec![false; rays.len()],
            cones: cones.iter().map(|c| c.to_vec()).collect(),
        }
    }

    fn with_boundary(mut self, rays: &[usize]) -> Self {
        for &r in rays {
            self.boundary[r] = true;
        }
        self
    }

    fn cone_chart(&self, cone: &[usize], flags: bool) -> Chart {
        let mut cols: Vec<Vec<i64>> = cone.iter().map(|&r| self.rays[r].clone()).collect();
        complete_basis(&mut cols, self.n);
        let u: Vec<Vec<i64>> = (0..self.n)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        let inv = rational_inverse(&u).expect("completed basis is invertible");
        // M = U^{-T}
        let m: Vec<Vec<i64>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| i64::try_from(inv[j][i].to_integer()).unwrap())
                    .collect()
            })
            .collect();
        let k = cone.len();
        let invertible = (0..self.n).map(|j| j >= k).collect();
        let boundary = flags.then(|| {
            (0..self.n)
                .map(|j| j < k && self.boundary[cone[j]])
                .collect()
        });
        Chart::new(m, invertible, boundary).expect("fan charts are unimodular")
    }

    fn atlas(&self, flags: bool, comp: Option<&Fan>) -> Result<Atlas> {
        let charts = self
            .cones
            .iter()
            .map(|c| self.cone_chart(c, flags))
            .collect();
        let mut nerve = Vec::new();
        let m = self.cones.len();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                subsets.push(vec![a, b]);
                for c in b + 1..m {
                    subsets.push(vec![a, b, c]);
                }
            }
        }
        subsets.sort();
        for s in subsets {
            let common: Vec<usize> = self.cones[s[0]]
                .iter()
                .copied()
                .filter(|r| s.iter().all(|&i| self.cones[i].contains(r)))
                .collect();
            nerve.push((s, self.cone_chart(&common, flags)));
        }
        let comp = match comp {
            Some(cf) => {
                let comp_atlas = Arc::new(cf.atlas(true, None)?);
                let cover = self
                    .cones
                    .iter()
                    .map(|cone| {
                        (0..cf.cones.len())
                            .filter(|&v| {
                                cf.cones[v]
                                    .iter()
                                    .filter(|&&r| !cf.boundary[r])
                                    .all(|&r| cone.iter().any(|&s| self.rays[s] == cf.rays[r]))
                            })
                            .collect()
                    })
                    .collect();
                Some((comp_atlas, cover))
            }
            None => None,
        };
        Atlas::new(Some(self.name.to_string()), self.n, charts, nerve, comp)
    }
}

/// Extends `cols` to a unimodular basis of ℤⁿ with small vectors.
fn complete_basis(cols: &mut Vec<Vec<i64>>, n: usize) {
    fn search(cols: &mut Vec<Vec<i64>>, n: usize, cands: &[Vec<i64>]) -> bool {
        if cols.len() == n {
            let u: Vec<Vec<i64>> = (0..n)
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect();
            return det_i64(&u).abs() == 1.into();
        }
        for c in cands {
            cols.push(c.clone());
            if search(cols, n, cands) {
                return true;
            }
            cols.pop();
        }
        false
    }
    let mut cands: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(n);
        let mut x = code;
        for _ in 0..n {
            c.push((x % 3) as i64 - 1);
            x /= 3;
        }
        if c.iter().any(|&v| v != 0) && !cands.contains(&c) {
            cands.push(c);
        }
    }
    assert!(
        search(cols, n, &cands),
        "rays are not part of a lattice basis"
    );
}

fn p1() -> Fan {
    Fan::new("P1", 1, &[&[1], &[-1]], &[&[0], &[1]])
}

fn p2() -> Fan {
    Fan::new(
        "P2",
        2,
        &[&[1, 0], &[0, 1], &[-1, -1]],
        &[&[0, 1], &[1, 2], &[2, 0]],
    )
}

fn p1xp1() -> Fan {
    Fan::new(
        "P1xP1",
        2,
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[2, 1], &[2, 3], &[0, 3]],
    )
}

/// The blow-up of ℙ² at the origin, a compactification of ℂ²∖{0} whose
/// boundary is the exceptional curve plus the line at infinity.
fn bl0p2() -> Fan {
    Fan::new(
        "Bl0P2",
        2,
        &[&[1, 0], &[0, 1], &[1, 1], &[-1, -1]],
        &[&[0, 2], &[2, 1], &[1, 3], &[3, 0]],
    )
    .with_boundary(&[2, 3])
}

/// Built-in atlas by name. `A2`, `Gm2` and `A2minus0` are compactified in ℙ²,
/// ℙ¹×ℙ¹ and the blown-up plane; the complete spaces are their own
/// compactification with empty boundary.
pub fn builtin_atlas(name: &str) -> Result<Arc<Atlas>> {
    let atlas = match name {
        "P1" => p1().atlas(false, Some(&p1()))?,
        "P2" => p2().atlas(false, Some(&p2()))?,
        "P1xP1" => p1xp1().atlas(false, Some(&p1xp1()))?,
        "A2" => Fan::new("A2", 2, &[&[1, 0], &[0, 1]], &[&[0, 1]])
            .atlas(false, Some(&p2().with_boundary(&[2])))?,
        "Gm2" => Fan::new("Gm2", 2, &[], &[&[]])
            .atlas(false, Some(&p1xp1().with_boundary(&[0, 1, 2, 3])))?,
        "A2minus0" => Fan::new("A2minus0", 2, &[&[1, 0], &[0, 1]], &[&[0], &[1]])
            .atlas(false, Some(&bl0p2()))?,
        other => return Err(Error::UnknownAtlas(other.to_string())),
    };
    Ok(Arc::new(atlas))
}
