//! Regression suite over the worked examples: the projective line, the affine
//! plane, the two-torus and the punctured plane. Each check becomes one row
//! comparing a fixed expected verdict with the computed one.

use std::fmt::Display;
use std::sync::Arc;

use lbconn::algebra::{DlogForm, Rational, UnitMonomial};
use lbconn::atlas::{builtin_atlas, Atlas};
use lbconn::bundle::LineBundle;
use lbconn::connection::{solve_connection, twist_trivial, Connection, ConnectionKind};
use lbconn::picard::{pic_group_report, DEFAULT_DEGREE_BOUND};
use lbconn::syntax::parse_form;
use lbconn::topology::{chern_class, mv_cohomology, pic_ci_structure};
use lbconn::Result;
use serde::Serialize;
use serde_json::json;

use crate::report::{Report, Status};

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub id: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

struct Suite {
    rows: Vec<Row>,
    mutate_curvature: bool,
}

impl Suite {
    fn row(
        &mut self,
        id: &str,
        check: impl Into<String>,
        expected: impl Display,
        actual: Result<String>,
    ) {
        let expected = expected.to_string();
        let (actual, pass) = match actual {
            Ok(a) => {
                let pass = a == expected;
                (a, pass)
            }
            Err(e) => (format!("error: {}", e), false),
        };
        self.rows.push(Row {
            id: id.into(),
            check: check.into(),
            expected,
            actual,
            pass,
        });
    }

    fn curvature(&self, c: &Connection) -> Result<DlogForm> {
        let r = c.curvature()?.form;
        Ok(if self.mutate_curvature { -r } else { r })
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn atlas(name: &str) -> Result<Arc<Atlas>> {
    builtin_atlas(name)
}

fn pure_bundle(a: &Arc<Atlas>, e: Vec<i64>) -> Result<LineBundle> {
    LineBundle::from_transitions(a.clone(), [(vec![0, 1], UnitMonomial::pure(e))])
}

fn projective_line(s: &mut Suite) {
    let p1 = match atlas("P1") {
        Ok(a) => a,
        Err(e) => return s.row("4.1", "load P1", "ok", Err(e)),
    };
    for k in -3..=3 {
        let l = pure_bundle(&p1, vec![k]);
        let found = l
            .as_ref()
            .map_err(|e| lbconn::Error::Invalid(e.to_string()))
            .and_then(|l| solve_connection(l, ConnectionKind::Any))
            .map(|r| yes_no(r.is_found()));
        s.row(
            "4.1",
            format!("O({k}) admits a connection"),
            yes_no(k == 0),
            found,
        );
        let c1 = l.and_then(|l| chern_class(&l)).map(|c| {
            let e: Vec<String> = c.element.iter().map(ToString::to_string).collect();
            format!("{} in {}", e.join(","), c.group)
        });
        s.row("4.1", format!("c1(O({k}))"), format!("{k} in Z"), c1);
    }
    s.row(
        "4.1",
        "Pic_ci(P1)",
        "trivial",
        pic_ci_structure(&p1).map(|p| p.to_string()),
    );
    let report = pic_group_report(&p1, DEFAULT_DEGREE_BOUND);
    s.row(
        "4.1",
        "Pic(P1)",
        "Z",
        report
            .as_ref()
            .map(|r| r.pic.to_string())
            .map_err(clone_err),
    );
    s.row(
        "4.1",
        "Pic_c fiber over O (global 1-forms)",
        "trivial",
        report.map(|r| {
            if r.pic_c_fiber_trivial() {
                "trivial".into()
            } else {
                format!("{} forms", r.global_forms.len())
            }
        }),
    );
}

fn clone_err(e: &lbconn::Error) -> lbconn::Error {
    lbconn::Error::Invalid(e.to_string())
}

fn affine_plane(s: &mut Suite) {
    let setup = || -> Result<(Connection, Connection, DlogForm)> {
        let a2 = atlas("A2")?;
        let z1dz2 = twist_trivial(&parse_form("t1*t2*Q2", 2, 1)?, a2.clone())?;
        let dz1 = twist_trivial(&parse_form("t1*Q1", 2, 1)?, a2)?;
        Ok((z1dz2, dz1, parse_form("t1*t2*Q1*Q2", 2, 2)?))
    };
    let (z1dz2, dz1, expected) = match setup() {
        Ok(x) => x,
        Err(e) => return s.row("4.3", "build connections on A2", "ok", Err(e)),
    };
    let r = s.curvature(&z1dz2).map(|f| f.to_string());
    s.row("4.3", "curvature of d + z1 dz2 (dz1^dz2)", &expected, r);
    let r = z1dz2.is_integrable().map(yes_no);
    s.row("4.3", "d + z1 dz2 integrable", "no", r);
    let r = s.curvature(&dz1).map(|f| f.to_string());
    s.row("4.3", "curvature of d + dz1", "0", r);
    s.row(
        "4.3",
        "d + dz1 integrable",
        "yes",
        dz1.is_integrable().map(yes_no),
    );
    s.row(
        "4.3",
        "d + dz1 regular in P2",
        "no",
        dz1.is_regular().map(yes_no),
    );
}

fn torus(s: &mut Suite) {
    let gm2 = match atlas("Gm2") {
        Ok(a) => a,
        Err(e) => return s.row("4.4", "load Gm2", "ok", Err(e)),
    };
    s.row(
        "4.4",
        "Pic(Gm2)",
        "trivial",
        pic_group_report(&gm2, 0).map(|r| {
            if r.pic_trivial() {
                "trivial".into()
            } else {
                format!("{} (scalar rank {})", r.pic, r.coefficient_rank)
            }
        }),
    );
    s.row(
        "4.4",
        "Pic_ci(Gm2)",
        "(C*)^2",
        pic_ci_structure(&gm2).map(|p| p.to_string()),
    );
    let trivial = Connection::trivial(gm2.clone());
    let units: [(i64, i64, i64, i64); 4] =
        [(1, 1, 0, 1), (2, 1, 1, 0), (-3, 2, 2, -3), (5, 7, -1, -1)];
    for (p, q, a, b) in units {
        let r = UnitMonomial::new(Rational::new(p.into(), q.into()), vec![a, b])
            .and_then(|u| twist_trivial(&u.dlog(), gm2.clone()))
            .and_then(|c| c.pic_c_equal(&trivial))
            .map(yes_no);
        s.row(
            "4.4",
            format!("(O, d + dlog({p}/{q} t1^{a} t2^{b})) isomorphic to (O, d)"),
            "yes",
            r,
        );
    }
}

fn punctured_plane(s: &mut Suite) {
    let a = match atlas("A2minus0") {
        Ok(a) => a,
        Err(e) => return s.row("4.5", "load A2minus0", "ok", Err(e)),
    };
    for x in -3..=3 {
        for y in -3..=3 {
            let r = pure_bundle(&a, vec![x, y]).and_then(|l| {
                Ok(match l.trivialization()? {
                    None => "not trivial".to_string(),
                    Some(u) => {
                        let (u0, u1) = (u.get(&[0]), u.get(&[1]));
                        let ok = u1.div(&u0) == l.cocycle().get(&[0, 1])
                            && a.chart(0).monomial_is_unit(u0.exponent())
                            && a.chart(1).monomial_is_unit(u1.exponent());
                        if ok {
                            "trivial".into()
                        } else {
                            "bad witness".into()
                        }
                    }
                })
            });
            s.row(
                "4.5",
                format!("t1^{x} t2^{y} trivial with checked witness"),
                "trivial",
                r,
            );
        }
    }
    let mv = mv_cohomology(&a);
    s.row(
        "4.5",
        "H1(A2minus0)",
        "0",
        mv.as_ref().map(|m| m.h1.to_string()).map_err(clone_err),
    );
    s.row("4.5", "H2(A2minus0)", "0", mv.map(|m| m.h2.to_string()));
}

/// Runs every check. The report has status `ok` only if all rows pass.
/// With `mutate_curvature` every computed curvature is negated before it is
/// compared, which must make the affine-plane rows fail.
pub fn run_suite(mutate_curvature: bool) -> Vec<Row> {
    let mut s = Suite {
        rows: Vec::new(),
        mutate_curvature,
    };
    projective_line(&mut s);
    affine_plane(&mut s);
    torus(&mut s);
    punctured_plane(&mut s);
    s.rows
}

pub fn example_suite(mutate_curvature: bool) -> Report {
    let rows = run_suite(mutate_curvature);
    let failed = rows.iter().filter(|r| !r.pass).count();
    let mut payload = json!({
        "passed": failed == 0,
        "total": rows.len(),
        "failed": failed,
        "rows": rows,
    });
    let status = if failed == 0 {
        Status::Ok
    } else {
        payload["message"] = json!(format!("{} of {} checks failed", failed, rows.len()));
        Status::Error
    };
    Report::with_status("paper-examples", status, payload)
}
