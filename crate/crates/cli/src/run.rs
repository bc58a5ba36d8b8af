use std::path::Path;

use lbconn::atlas::{resolve_atlas, Atlas, BUILTIN_NAMES};
use lbconn::connection::{solve_connection, Connection, ConnectionKind, ConnectionSolution};
use lbconn::io::{load_bundle, load_bundle_unchecked, load_connection};
use lbconn::picard::pic_group_report;
use lbconn::topology::{chern_class, element_to_i64};
use lbconn::{Error, Result};
use serde_json::{json, Value};

use crate::args::{AtlasCommand, BundleCommand, Command, ConnCommand, PicardCommand};
use crate::report::{certificate_json, forms_json, unit_cochain_json, Report, Status};
use crate::worked::example_suite;

/// Executes one command. Engine errors become reports with status `error`.
pub fn run(cmd: &Command) -> Report {
    let name = command_name(cmd);
    match dispatch(cmd, name) {
        Ok(r) => r,
        Err(e) => Report::error(name, e),
    }
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Atlas(AtlasCommand::List) => "atlas list",
        Command::Atlas(AtlasCommand::Show { .. }) => "atlas show",
        Command::Bundle(BundleCommand::Check(_)) => "bundle check",
        Command::Bundle(BundleCommand::Chern(_)) => "bundle chern",
        Command::Bundle(BundleCommand::Trivial(_)) => "bundle trivial",
        Command::Conn(ConnCommand::Solve { .. }) => "conn solve",
        Command::Conn(ConnCommand::Curvature(_)) => "conn curvature",
        Command::Conn(ConnCommand::CheckRegular(_)) => "conn check-regular",
        Command::Conn(ConnCommand::CheckIntegrable(_)) => "conn check-integrable",
        Command::Picard(PicardCommand::Report { .. }) => "picard report",
        Command::PaperExamples { .. } => "paper-examples",
    }
}

fn dispatch(cmd: &Command, name: &str) -> Result<Report> {
    match cmd {
        Command::Atlas(AtlasCommand::List) => {
            let atlases = BUILTIN_NAMES
                .iter()
                .map(|n| resolve_atlas(n, None).map(|a| atlas_summary(&a)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Report::ok(name, json!({ "atlases": atlases })))
        }
        Command::Atlas(AtlasCommand::Show { atlas }) => {
            let a = resolve_atlas(atlas, None)?;
            let mut v = atlas_summary(&a);
            v["definition"] = serde_json::to_value(a.to_repr())?;
            Ok(Report::ok(name, v))
        }
        Command::Bundle(BundleCommand::Check(input)) => {
            let b = with_path(input.path(), load_bundle_unchecked)?;
            let defect = b.cocycle().cocycle_defect();
            Ok(Report::ok(
                name,
                json!({
                    "valid": defect.is_none(),
                    "defect": defect,
                    "transitions": unit_cochain_json(b.cocycle()),
                }),
            ))
        }
        Command::Bundle(BundleCommand::Chern(input)) => {
            let c = chern_class(&with_path(input.path(), load_bundle)?)?;
            Ok(Report::ok(
                name,
                json!({
                    "group": c.group.to_string(),
                    "element": element_to_i64(&c.element),
                    "torsion": c.is_torsion(),
                }),
            ))
        }
        Command::Bundle(BundleCommand::Trivial(input)) => {
            let w = with_path(input.path(), load_bundle)?.trivialization()?;
            Ok(Report::ok(
                name,
                json!({
                    "trivial": w.is_some(),
                    "witness": w.as_ref().map(unit_cochain_json),
                }),
            ))
        }
        Command::Conn(ConnCommand::Solve { input, kind }) => {
            let kind = ConnectionKind::from(*kind);
            let kind_name = serde_json::to_value(kind)?;
            match solve_connection(&with_path(input.path(), load_bundle)?, kind)? {
                ConnectionSolution::Found(c) => {
                    let mut v = connection_json(&c)?;
                    v["kind"] = kind_name;
                    Ok(Report::ok(name, v))
                }
                ConnectionSolution::NotFound(cert) => Ok(Report::with_status(
                    name,
                    Status::NoSolution,
                    json!({ "kind": kind_name, "certificate": certificate_json(&cert) }),
                )),
            }
        }
        Command::Conn(ConnCommand::Curvature(input)) => {
            let r = load(input.path())?.curvature()?;
            Ok(Report::ok(
                name,
                json!({ "form": r.form.to_string(), "is_zero": r.is_zero }),
            ))
        }
        Command::Conn(ConnCommand::CheckRegular(input)) => {
            let c = load(input.path())?;
            Ok(Report::ok(name, json!({ "regular": c.is_regular()? })))
        }
        Command::Conn(ConnCommand::CheckIntegrable(input)) => {
            let c = load(input.path())?;
            let r = c.curvature()?;
            Ok(Report::ok(
                name,
                json!({ "integrable": r.is_zero, "curvature": r.form.to_string() }),
            ))
        }
        Command::Picard(PicardCommand::Report {
            atlas,
            degree_bound,
        }) => {
            if *degree_bound < 0 {
                return Err(Error::Invalid(format!(
                    "degree bound must be nonnegative, got {}",
                    degree_bound
                )));
            }
            let a = resolve_atlas(atlas, None)?;
            let r = pic_group_report(&a, *degree_bound)?;
            let strings = |fs: &[lbconn::algebra::DlogForm]| -> Vec<String> {
                fs.iter().map(ToString::to_string).collect()
            };
            Ok(Report::ok(
                name,
                json!({
                    "atlas": a.name(),
                    "degree_bound": r.degree_bound,
                    "global_forms": strings(&r.global_forms),
                    "closed_forms": strings(&r.closed_forms),
                    "dlog_units": r.dlog_units,
                    "pic": r.pic.to_string(),
                    "pic_trivial": r.pic_trivial(),
                    "coefficient_rank": r.coefficient_rank,
                    "pic_c_fiber_trivial": r.pic_c_fiber_trivial(),
                    "pic_ci_fiber_trivial": r.pic_ci_fiber_trivial(),
                    "pic_ci": r.pic_ci.as_ref().map(ToString::to_string),
                }),
            ))
        }
        Command::PaperExamples { mutate_curvature } => Ok(example_suite(*mutate_curvature)),
    }
}

fn load(path: &Path) -> Result<Connection> {
    with_path(path, load_connection)
}

/// Prefixes file-level failures with the offending path.
fn with_path<T>(path: &Path, f: impl FnOnce(&Path) -> Result<T>) -> Result<T> {
    f(path).map_err(|e| match e {
        Error::Io(_) | Error::Json(_) => Error::Invalid(format!("{}: {}", path.display(), e)),
        other => other,
    })
}

fn atlas_summary(a: &Atlas) -> Value {
    json!({
        "name": a.name(),
        "nvars": a.nvars(),
        "charts": a.len(),
        "pairs": a.pairs(),
        "triples": a.triples(),
        "compactification": a.compactification().map(|c| c.atlas().name().map(str::to_string)),
    })
}

fn connection_json(c: &Connection) -> Result<Value> {
    let r = c.curvature()?;
    let regular = match c.is_regular() {
        Ok(b) => Some(b),
        Err(Error::MissingCompactification) => None,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "forms": forms_json(c.forms()),
        "curvature": r.form.to_string(),
        "integrable": r.is_zero,
        "regular": regular,
    }))
}
