//! JSON file formats for line bundles and connections.
//!
//! ```json
//! { "atlas": "P1", "cocycle": [{ "pair": [0, 1], "coeff": "1", "exponent": [2] }] }
//! { "bundle": { ... }, "forms": [{ "chart": 0, "form": "t1*Q1" }] }
//! ```
//!
//! `atlas` is a built-in name, a path relative to the file, or an inline atlas
//! object; `bundle` is an inline bundle object or a path.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{DlogForm, Exponent, UnitMonomial};
use crate::atlas::{AtlasRef, FormMode};
use crate::bundle::LineBundle;
use crate::cech::{FormCochain, UnitCochain};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::syntax::{parse_form, parse_rational};

fn one() -> String {
    "1".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub pair: [usize; 2],
    #[serde(default = "one")]
    pub coeff: String,
    pub exponent: Exponent,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub atlas: AtlasRef,
    #[serde(default)]
    pub cocycle: Vec<TransitionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BundleRef {
    Path(String),
    Inline(Box<BundleFile>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub chart: usize,
    pub form: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub bundle: BundleRef,
    #[serde(default)]
    pub forms: Vec<FormEntry>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

impl BundleFile {
    /// Builds the bundle without checking triple identities, so that
    /// [`LineBundle::check_cocycle`] can report on invalid data.
    pub fn into_unchecked(self, base: Option<&Path>) -> Result<LineBundle> {
        let atlas = self.atlas.resolve(base)?;
        let mut seen = std::collections::BTreeSet::new();
        let mut values = Vec::new();
        for t in self.cocycle {
            let [i, j] = t.pair;
            if i >= j {
                return Err(Error::Invalid(format!(
                    "pair {:?} must be listed with increasing indices",
                    t.pair
                )));
            }
            if !seen.insert(t.pair) {
                return Err(Error::Invalid(format!("pair {:?} listed twice", t.pair)));
            }
            let u = UnitMonomial::new(parse_rational(&t.coeff)?, t.exponent)?;
            values.push((vec![i, j], u));
        }
        LineBundle::new_unchecked(UnitCochain::new(atlas, 1, values)?)
    }

    pub fn into_bundle(self, base: Option<&Path>) -> Result<LineBundle> {
        let b = self.into_unchecked(base)?;
        LineBundle::new(b.cocycle().clone())
    }

    pub fn from_bundle(bundle: &LineBundle, atlas: AtlasRef) -> Self {
        Self {
            atlas,
            cocycle: bundle
                .cocycle()
                .entries()
                .into_iter()
                .filter(|(_, u)| !u.is_one())
                .map(|(idx, u)| TransitionEntry {
                    pair: [idx[0], idx[1]],
                    coeff: u.coeff().to_string(),
                    exponent: u.exponent().to_vec(),
                })
                .collect(),
        }
    }
}

impl BundleRef {
    fn resolve(self, base: Option<&Path>) -> Result<(BundleFile, Option<std::path::PathBuf>)> {
        match self {
            BundleRef::Inline(f) => Ok((*f, base.map(Path::to_path_buf))),
            BundleRef::Path(p) => {
                let path = match base {
                    Some(b) if Path::new(&p).is_relative() => b.join(&p),
                    _ => Path::new(&p).to_path_buf(),
                };
                let file = read_json(&path)?;
                Ok((file, path.parent().map(Path::to_path_buf)))
            }
        }
    }
}

impl ConnectionFile {
    pub fn into_connection(self, base: Option<&Path>) -> Result<Connection> {
        let (bf, bbase) = self.bundle.resolve(base)?;
        let bundle = bf.into_bundle(bbase.as_deref())?;
        let atlas = bundle.atlas().clone();
        let mut forms: Vec<(Vec<usize>, DlogForm)> = Vec::new();
        for e in self.forms {
            if e.chart >= atlas.len() {
                return Err(Error::Invalid(format!("chart {} does not exist", e.chart)));
            }
            if forms.iter().any(|(idx, _)| idx[0] == e.chart) {
                return Err(Error::Invalid(format!("chart {} listed twice", e.chart)));
            }
            forms.push((vec![e.chart], parse_form(&e.form, atlas.nvars(), 1)?));
        }
        let cochain = FormCochain::new(atlas, 0, FormMode::Regular, forms)?;
        Connection::new(bundle, cochain)
    }
}

pub fn load_bundle_unchecked(path: &Path) -> Result<LineBundle> {
    read_json::<BundleFile>(path)?.into_unchecked(path.parent())
}

pub fn load_bundle(path: &Path) -> Result<LineBundle> {
    read_json::<BundleFile>(path)?.into_bundle(path.parent())
}

pub fn load_connection(path: &Path) -> Result<Connection> {
    read_json::<ConnectionFile>(path)?.into_connection(path.parent())
}
