//! Toric-style charts and atlases.
//!
//! An atlas stores its charts, the nonempty intersections of up to three charts
//! (each with an explicit chart of its own), and optionally a smooth
//! compactification whose charts carry boundary flags. Everything is written in
//! global torus coordinates `t_1, …, t_n`.

mod builtin;
mod chart;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use builtin::{builtin_atlas, BUILTIN_NAMES};
pub use chart::{Admissible, Chart, ChartRepr, FormMode};

use crate::error::{Error, Result};

/// Deepest intersection stored in a nerve.
pub const MAX_NERVE_DEPTH: usize = 3;

/// A compactification of an atlas: a second atlas whose charts carry boundary
/// flags, plus, for each chart `U_i`, the compactification charts `V` with
/// `V ∩ X ⊂ U_i`. On those charts the local form of a connection on `U_i` is
/// the one to test for logarithmic poles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compactification {
    atlas: Arc<Atlas>,
    cover: Vec<Vec<usize>>,
}

impl Compactification {
    pub fn atlas(&self) -> &Arc<Atlas> {
        &self.atlas
    }

    /// Compactification charts attached to chart `i`.
    pub fn cover(&self, i: usize) -> &[usize] {
        &self.cover[i]
    }

    pub fn covers(&self) -> &[Vec<usize>] {
        &self.cover
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    name: Option<String>,
    nvars: usize,
    charts: Vec<Chart>,
    nerve: BTreeMap<Vec<usize>, Chart>,
    compactification: Option<Compactification>,
}

impl Atlas {
    /// Builds and validates an atlas. `nerve` lists the nonempty intersections
    /// of two or three charts; singletons are implicit.
    pub fn new(
        name: Option<String>,
        nvars: usize,
        charts: Vec<Chart>,
        nerve: Vec<(Vec<usize>, Chart)>,
        compactification: Option<(Arc<Atlas>, Vec<Vec<usize>>)>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidAtlas(msg));
        if charts.is_empty() {
            return bad("atlas has no charts".into());
        }
        if let Some(c) = charts.iter().find(|c| c.nvars() != nvars) {
            return bad(format!(
                "chart has {} variables, atlas {}",
                c.nvars(),
                nvars
            ));
        }
        let mut map = BTreeMap::new();
        for (idx, chart) in nerve {
            if idx.len() < 2 || idx.len() > MAX_NERVE_DEPTH {
                return bad(format!("nerve entry {:?} must have 2 or 3 indices", idx));
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= charts.len()) {
                return bad(format!(
                    "nerve entry {:?} is not an increasing chart tuple",
                    idx
                ));
            }
            if chart.nvars() != nvars {
                return bad(format!("nerve chart {:?} has wrong dimension", idx));
            }
            if map.insert(idx.clone(), chart).is_some() {
                return bad(format!("duplicate nerve entry {:?}", idx));
            }
        }
        let mut atlas = Atlas {
            name,
            nvars,
            charts,
            nerve: map,
            compactification: None,
        };
        atlas.check_nerve()?;
        if let Some((comp, cover)) = compactification {
            atlas.compactification = Some(atlas.check_compactification(comp, cover)?);
        }
        Ok(atlas)
    }

    fn check_nerve(&self) -> Result<()> {
        for (idx, chart) in &self.nerve {
            for skip in 0..idx.len() {
                let face: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                let Some(face_chart) = self.chart_of(&face) else {
                    return Err(Error::InvalidAtlas(format!(
                        "nerve is not closed under subsets: {:?} lacks {:?}",
                        idx, face
                    )));
                };
                if !ring_contains(chart, face_chart) {
                    return Err(Error::InvalidAtlas(format!(
                        "intersection chart {:?} does not contain the ring of {:?}",
                        idx, face
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_compactification(
        &self,
        comp: Arc<Atlas>,
        cover: Vec<Vec<usize>>,
    ) -> Result<Compactification> {
        let bad = |msg: &str| Err(Error::InvalidAtlas(format!("compactification: {}", msg)));
        if comp.nvars != self.nvars {
            return bad("dimension differs from the atlas");
        }
        if cover.len() != self.charts.len() {
            return bad("cover table needs one entry per chart");
        }
        if comp.charts.iter().any(|c| c.boundary().is_none()) {
            return bad("every compactification chart needs boundary flags");
        }
        for list in &cover {
            if list.iter().any(|&v| v >= comp.charts.len()) {
                return bad("cover references an unknown chart");
            }
        }
        if (0..comp.charts.len()).any(|v| !cover.iter().any(|l| l.contains(&v))) {
            return bad("some compactification chart is attached to no chart");
        }
        Ok(Compactification { atlas: comp, cover })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> &Chart {
        &self.charts[i]
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn compactification(&self) -> Option<&Compactification> {
        self.compactification.as_ref()
    }

    /// Chart of `U_I` for a nerve tuple (a singleton gives the chart itself).
    pub fn chart_of(&self, idx: &[usize]) -> Option<&Chart> {
        match idx {
            [i] => self.charts.get(*i),
            _ => self.nerve.get(idx),
        }
    }

    pub fn contains(&self, idx: &[usize]) -> bool {
        self.chart_of(idx).is_some()
    }

    /// All nerve tuples with `k` elements, in lexicographic order.
    pub fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        if k == 1 {
            return (0..self.charts.len()).map(|i| vec![i]).collect();
        }
        self.nerve
            .keys()
            .filter(|t| t.len() == k)
            .cloned()
            .collect()
    }

    pub fn pairs(&self) -> Vec<Vec<usize>> {
        self.tuples(2)
    }

    pub fn triples(&self) -> Vec<Vec<usize>> {
        self.tuples(3)
    }

    pub fn to_repr(&self) -> AtlasFile {
        AtlasFile {
            name: self.name.clone(),
            nvars: self.nvars,
            charts: self.charts.iter().map(ChartRepr::from).collect(),
            nerve: self
                .nerve
                .iter()
                .map(|(idx, c)| NerveEntry {
                    indices: idx.clone(),
                    chart: c.into(),
                })
                .collect(),
            compactification: self
                .compactification
                .as_ref()
                .map(|c| CompactificationRepr {
                    atlas: AtlasRef::Inline(Box::new(c.atlas.to_repr())),
                    cover: c.cover.clone(),
                }),
        }
    }

    /// Builds an atlas from its file form; string references are resolved as
    /// built-in names or as paths relative to `base`.
    pub fn from_repr(repr: AtlasFile, base: Option<&Path>) -> Result<Self> {
        let charts = repr
            .charts
            .into_iter()
            .map(Chart::try_from)
            .collect::<Result<Vec<_>>>()?;
        let nerve = repr
            .nerve
            .into_iter()
            .map(|e| Ok((e.indices, Chart::try_from(e.chart)?)))
            .collect::<Result<Vec<_>>>()?;
        let comp = match repr.compactification {
            Some(c) => Some((c.atlas.resolve(base)?, c.cover)),
            None => None,
        };
        Atlas::new(repr.name, repr.nvars, charts, nerve, comp)
    }
}

/// The ring of `inner` (generated by its coordinates and the inverses of the
/// invertible ones) lies in the ring of `outer`.
fn ring_contains(outer: &Chart, inner: &Chart) -> bool {
    (0..inner.nvars()).all(|j| {
        let e = inner.coordinate_exponent(j);
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        outer.monomial_is_regular(&e) && (!inner.invertible()[j] || outer.monomial_is_regular(&neg))
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NerveEntry {
    pub indices: Vec<usize>,
    pub chart: ChartRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompactificationRepr {
    pub atlas: AtlasRef,
    pub cover: Vec<Vec<usize>>,
}

/// Atlas file contents.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtlasFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub nvars: usize,
    pub charts: Vec<ChartRepr>,
    #[serde(default)]
    pub nerve: Vec<NerveEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compactification: Option<CompactificationRepr>,
}

/// An atlas given by built-in name, file path, or inline object.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtlasRef {
    Named(String),
    Inline(Box<AtlasFile>),
}

impl AtlasRef {
    pub fn resolve(self, base: Option<&Path>) -> Result<Arc<Atlas>> {
        match self {
            AtlasRef::Named(s) => resolve_atlas(&s, base),
            AtlasRef::Inline(f) => Ok(Arc::new(Atlas::from_repr(*f, base)?)),
        }
    }
}

/// Resolves a built-in atlas name or reads an atlas file.
pub fn resolve_atlas(spec: &str, base: Option<&Path>) -> Result<Arc<Atlas>> {
    if BUILTIN_NAMES.contains(&spec) {
        return builtin_atlas(spec);
    }
    let path = match base {
        Some(b) if Path::new(spec).is_relative() => b.join(spec),
        _ => Path::new(spec).to_path_buf(),
    };
    if !path.exists() {
        return Err(Error::UnknownAtlas(spec.to_string()));
    }
    let text = std::fs::read_to_string(&path)?;
    let repr: AtlasFile = serde_json::from_str(&text)?;
    Ok(Arc::new(Atlas::from_repr(repr, path.parent())?))
}
