//! Connections on monomial line bundles: existence, curvature, integrability,
//! logarithmic regularity, and the group operations on pairs `(L, ∇)`.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::DlogForm;
use crate::atlas::{Atlas, FormMode};
use crate::bundle::LineBundle;
use crate::cech::{
    check_compatible, dlog_cochain, form_in_mode, pic_c_equivalence, solve_coboundary, Certificate,
    CoboundarySolution, FormCochain, UnitCochain,
};
use crate::error::{Error, Result};

/// A connection `∇ = d + α_i` in the trivialization of chart `i`, with
/// `α_j − α_i = dlog g_ij` on overlaps.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    bundle: LineBundle,
    forms: FormCochain,
}

/// The global curvature 2-form `dα_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureForm {
    pub form: DlogForm,
    pub is_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectionKind {
    Any,
    Integrable,
    RegularIntegrable,
}

impl FromStr for ConnectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(Self::Any),
            "integrable" => Ok(Self::Integrable),
            "regular-integrable" | "regular_integrable" => Ok(Self::RegularIntegrable),
            other => Err(Error::Invalid(format!(
                "unknown connection kind {:?}",
                other
            ))),
        }
    }
}

/// Outcome of [`solve_connection`]; absence carries the blocking multidegree.
#[derive(Clone, Debug, PartialEq)]
pub enum ConnectionSolution {
    Found(Connection),
    NotFound(Certificate),
}

impl ConnectionSolution {
    pub fn connection(&self) -> Option<&Connection> {
        match self {
            Self::Found(c) => Some(c),
            Self::NotFound(_) => None,
        }
    }

    pub fn into_connection(self) -> Option<Connection> {
        match self {
            Self::Found(c) => Some(c),
            Self::NotFound(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found(_))
    }
}

impl Connection {
    /// Pairs a bundle with local forms, checking `δα = dlog g` exactly.
    pub fn new(bundle: LineBundle, forms: FormCochain) -> Result<Self> {
        if forms.degree() != 0 {
            return Err(Error::Invalid(
                "connection forms must be a 0-cochain".into(),
            ));
        }
        if bundle.atlas() != forms.atlas() {
            return Err(Error::AtlasMismatch);
        }
        if let Some(idx) = bundle.cocycle().cocycle_defect() {
            return Err(Error::NotACocycle(idx));
        }
        check_compatible(bundle.cocycle(), &forms)?;
        Ok(Self { bundle, forms })
    }

    /// Builds the connection from one form per chart; each must be regular there.
    pub fn from_local_forms(bundle: LineBundle, forms: Vec<DlogForm>) -> Result<Self> {
        let atlas = bundle.atlas().clone();
        if forms.len() != atlas.len() {
            return Err(Error::DimensionMismatch {
                expected: atlas.len(),
                found: forms.len(),
            });
        }
        let cochain = FormCochain::new(
            atlas,
            0,
            FormMode::Regular,
            forms.into_iter().enumerate().map(|(i, w)| (vec![i], w)),
        )?;
        Self::new(bundle, cochain)
    }

    /// `(O, d)`.
    pub fn trivial(atlas: Arc<Atlas>) -> Self {
        Self {
            forms: FormCochain::zero(atlas.clone(), 0, FormMode::Regular),
            bundle: LineBundle::trivial(atlas),
        }
    }

    pub fn bundle(&self) -> &LineBundle {
        &self.bundle
    }

    pub fn forms(&self) -> &FormCochain {
        &self.forms
    }

    pub fn atlas(&self) -> &Arc<Atlas> {
        self.bundle.atlas()
    }

    /// The local form on chart `i`.
    pub fn form(&self, i: usize) -> DlogForm {
        self.forms.local(i)
    }

    pub fn curvature(&self) -> Result<CurvatureForm> {
        let atlas = self.atlas();
        let local: Vec<DlogForm> = (0..atlas.len())
            .map(|i| self.form(i).exterior_derivative())
            .collect::<Result<_>>()?;
        for p in atlas.pairs() {
            if local[p[0]] != local[p[1]] {
                return Err(Error::CurvatureMismatch(p));
            }
        }
        let form = local
            .into_iter()
            .next()
            .unwrap_or_else(|| DlogForm::zero(atlas.nvars(), 2));
        Ok(CurvatureForm {
            is_zero: form.is_zero(),
            form,
        })
    }

    pub fn is_integrable(&self) -> Result<bool> {
        Ok(self.curvature()?.is_zero)
    }

    /// Every `α_i` has at most logarithmic poles on each compactification chart
    /// attached to `U_i`.
    pub fn is_regular(&self) -> Result<bool> {
        let atlas = self.atlas();
        if atlas.compactification().is_none() {
            return Err(Error::MissingCompactification);
        }
        for i in 0..atlas.len() {
            if !form_in_mode(atlas, &[i], &self.form(i), FormMode::Log)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let bundle = self.bundle.tensor(&other.bundle)?;
        let forms = self.forms.add(&other.forms)?;
        Self::new(bundle, forms)
    }

    pub fn dual(&self) -> Self {
        Self {
            bundle: self.bundle.dual(),
            forms: self.forms.neg(),
        }
    }

    /// Isomorphism of pairs: returns the unit 0-cochain `u` realizing it.
    pub fn isomorphism_to(&self, other: &Self) -> Result<Option<UnitCochain>> {
        pic_c_equivalence(
            (self.bundle.cocycle(), &self.forms),
            (other.bundle.cocycle(), &other.forms),
        )
    }

    pub fn pic_c_equal(&self, other: &Self) -> Result<bool> {
        Ok(self.isomorphism_to(other)?.is_some())
    }
}

/// `(O, d + ω)` for a global 1-form `ω`.
pub fn twist_trivial(w: &DlogForm, atlas: Arc<Atlas>) -> Result<Connection> {
    let forms = FormCochain::constant(atlas.clone(), w, FormMode::Regular)?;
    Connection::new(LineBundle::trivial(atlas), forms)
}

/// Finds a connection of the requested kind on `bundle`.
///
/// The target `dlog g` has constant coefficients, so the graded solver only
/// ever produces constant-coefficient forms, which are closed. For the regular
/// kind the solve runs with logarithmic constraints on the compactification.
pub fn solve_connection(bundle: &LineBundle, kind: ConnectionKind) -> Result<ConnectionSolution> {
    let mode = match kind {
        ConnectionKind::Any | ConnectionKind::Integrable => FormMode::Regular,
        ConnectionKind::RegularIntegrable => FormMode::Log,
    };
    let target = dlog_cochain(bundle.cocycle());
    let alpha = match solve_coboundary(&target, mode)? {
        CoboundarySolution::Solved(alpha) => alpha,
        CoboundarySolution::Obstructed(cert) => return Ok(ConnectionSolution::NotFound(cert)),
    };
    let c = Connection::new(bundle.clone(), alpha)?;
    if kind != ConnectionKind::Any {
        assert!(
            c.is_integrable()?,
            "constant-coefficient witness is not closed"
        );
    }
    if kind == ConnectionKind::RegularIntegrable {
        assert!(
            c.is_regular()?,
            "log-mode witness failed the regularity test"
        );
    }
    Ok(ConnectionSolution::Found(c))
}
