//! End-to-end checks of the engine against the worked examples and the
//! structural theorems, each returning a one-line summary or a failure.

use std::sync::Arc;

use lbconn::algebra::{DlogForm, UnitMonomial};
use lbconn::atlas::{builtin_atlas, Atlas, FormMode, BUILTIN_NAMES};
use lbconn::bundle::LineBundle;
use lbconn::cech::{coboundary, dlog_cochain, solve_coboundary, FormCochain, UnitCochain};
use lbconn::connection::{solve_connection, twist_trivial, Connection, ConnectionKind};
use lbconn::picard::pic_group_report;
use lbconn::syntax::parse_form;
use lbconn::topology::{chern_class, mv_cohomology, pic_ci_structure};
use num_bigint::BigInt;
use rand::Rng;

use super::{gen, oracle};

pub type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn atlas(name: &str) -> Arc<Atlas> {
    builtin_atlas(name).expect("built-in atlas")
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{:?}", e)
}

fn pure(atlas: &Arc<Atlas>, e: Vec<i64>) -> Result<LineBundle, String> {
    LineBundle::from_transitions(atlas.clone(), [(vec![0, 1], UnitMonomial::pure(e))]).map_err(err)
}

/// Projective line: no connection on `O(k)` for `k ≠ 0`, `c₁ = k`, trivial `Pic_ci`, `Pic_c` fiber.
pub fn projective_line() -> Outcome {
    let p1 = atlas("P1");
    for k in -3..=3 {
        let l = pure(&p1, vec![k])?;
        let found = solve_connection(&l, ConnectionKind::Any)
            .map_err(err)?
            .is_found();
        ensure!(found == (k == 0), "O({}): connection found = {}", k, found);
        let c = chern_class(&l).map_err(err)?;
        ensure!(
            c.group.to_string() == "Z" && c.element == vec![BigInt::from(k)],
            "c1(O({})) = {:?} in {}",
            k,
            c.element,
            c.group
        );
    }
    ensure!(
        pic_ci_structure(&p1).map_err(err)?.is_trivial(),
        "Pic_ci(P1) not trivial"
    );
    let r = pic_group_report(&p1, 3).map_err(err)?;
    ensure!(
        r.pic_c_fiber_trivial(),
        "P1 has global 1-forms: {:?}",
        r.global_forms
    );
    ensure!(r.pic_ci_fiber_trivial(), "P1 has closed global 1-forms");
    ensure!(r.pic.to_string() == "Z", "Pic(P1) = {}", r.pic);
    Ok("O(k), k in [-3,3]: connection iff k = 0; c1 = k; Pic_ci = Pic_c fiber = 0".into())
}

/// The affine plane: `d + z₁dz₂` has curvature `dz₁∧dz₂`; `d + dz₁` is flat but not regular.
pub fn affine_plane() -> Outcome {
    let a2 = atlas("A2");
    let f = |s: &str, d: usize| parse_form(s, 2, d).map_err(err);
    let c = twist_trivial(&f("t1*t2*Q2", 1)?, a2.clone()).map_err(err)?;
    let r = c.curvature().map_err(err)?;
    ensure!(
        r.form == f("t1*t2*Q1*Q2", 2)?,
        "curvature of z1 dz2 is {}",
        r.form
    );
    ensure!(
        !r.is_zero && !c.is_integrable().map_err(err)?,
        "z1 dz2 reported integrable"
    );
    let c = twist_trivial(&f("t1*Q1", 1)?, a2).map_err(err)?;
    ensure!(
        c.curvature().map_err(err)?.is_zero,
        "dz1 has nonzero curvature"
    );
    ensure!(c.is_integrable().map_err(err)?, "dz1 not integrable");
    ensure!(
        !c.is_regular().map_err(err)?,
        "dz1 reported regular along the line at infinity"
    );
    Ok("R(d + z1 dz2) = dz1^dz2; d + dz1 integrable, not regular in P2".into())
}

/// The two-torus: trivial `Pic`, `Pic_ci = (ℂ*)²`, `dlog` twists are trivial in `Pic_c`.
pub fn torus() -> Outcome {
    let gm2 = atlas("Gm2");
    let r = pic_group_report(&gm2, 2).map_err(err)?;
    ensure!(r.pic_trivial(), "Pic(Gm2) = {}", r.pic);
    ensure!(r.dlog_units.len() == 2, "dlog units {:?}", r.dlog_units);
    let s = pic_ci_structure(&gm2).map_err(err)?;
    ensure!(s.to_string() == "(C*)^2", "Pic_ci(Gm2) = {}", s);
    let mut rng = gen::rng(0x44);
    let trivial = Connection::trivial(gm2.clone());
    for _ in 0..100 {
        let u = UnitMonomial::new(
            gen::nonzero_rational(&mut rng),
            gen::exponent(&mut rng, 2, 6),
        )
        .map_err(err)?;
        let c = twist_trivial(&u.dlog(), gm2.clone()).map_err(err)?;
        let iso = c.isomorphism_to(&trivial).map_err(err)?;
        ensure!(iso.is_some(), "twist by dlog {} not trivial", u);
    }
    let half = parse_form("1/2*Q1", 2, 1).map_err(err)?;
    ensure!(
        !twist_trivial(&half, gm2)
            .map_err(err)?
            .pic_c_equal(&trivial)
            .map_err(err)?,
        "twist by theta1/2 reported trivial"
    );
    Ok("Pic = 0, Pic_ci = (C*)^2, 100 dlog twists trivial in Pic_c".into())
}

/// The punctured plane: every monomial bundle trivializes; `H¹ = H² = 0`.
pub fn punctured_plane() -> Outcome {
    let a = atlas("A2minus0");
    for x in -3..=3 {
        for y in -3..=3 {
            let l = pure(&a, vec![x, y])?;
            let u = l
                .trivialization()
                .map_err(err)?
                .ok_or(format!("t1^{} t2^{} not trivial", x, y))?;
            let (u0, u1) = (u.get(&[0]), u.get(&[1]));
            ensure!(
                u1.div(&u0) == l.cocycle().get(&[0, 1])
                    && a.chart(0).monomial_is_unit(u0.exponent())
                    && a.chart(1).monomial_is_unit(u1.exponent()),
                "bad witness for ({}, {})",
                x,
                y
            );
        }
    }
    let mv = mv_cohomology(&a).map_err(err)?;
    ensure!(
        mv.h1.is_trivial() && mv.h2.is_trivial(),
        "H1 = {}, H2 = {}",
        mv.h1,
        mv.h2
    );
    Ok("49 bundles trivialized with checked witnesses; H1 = H2 = 0".into())
}

/// A global 1-form, or zero when the random candidate is not global.
fn random_global_form(rng: &mut impl Rng, atlas: &Atlas) -> DlogForm {
    let w = gen::regular_form(rng, atlas.chart(0), false, 3, 2);
    if atlas.charts().iter().all(|c| oracle::form_ok(c, &w, false)) {
        w
    } else {
        DlogForm::zero(atlas.nvars(), 1)
    }
}

/// A random unit 0-cochain: `u_i` a unit on chart `i`.
fn random_unit_cochain(rng: &mut impl Rng, atlas: &Arc<Atlas>) -> Result<UnitCochain, String> {
    let values = (0..atlas.len())
        .map(|i| {
            let gens = atlas.chart(i).unit_generators();
            let mut e = vec![0i64; atlas.nvars()];
            for g in gens {
                let c = rng.gen_range(-3..=3);
                for (ek, gk) in e.iter_mut().zip(g) {
                    *ek += c * gk;
                }
            }
            Ok((
                vec![i],
                UnitMonomial::new(gen::nonzero_rational(rng), e).map_err(err)?,
            ))
        })
        .collect::<Result<Vec<_>, String>>()?;
    UnitCochain::new(atlas.clone(), 0, values).map_err(err)
}

/// Exactness of `H⁰(Ω¹) → Pic_c → Pic → H¹(Ω¹)` on random data, per atlas.
pub fn exactness() -> Outcome {
    let mut rng = gen::rng(0x5E);
    let mut with_connection = 0;
    for name in BUILTIN_NAMES {
        let a = atlas(name);
        let trivial = Connection::trivial(a.clone());
        for _ in 0..100 {
            // (a) global units twist to the trivial class, and so do unit coboundaries
            let u = gen::global_unit(&mut rng, &a, 3);
            let c = twist_trivial(&u.dlog(), a.clone()).map_err(err)?;
            ensure!(
                c.pic_c_equal(&trivial).map_err(err)?,
                "{}: dlog {} twist nontrivial",
                name,
                u
            );
            let uc = random_unit_cochain(&mut rng, &a)?;
            let l = LineBundle::new(uc.coboundary().map_err(err)?).map_err(err)?;
            ensure!(
                l.is_trivial().map_err(err)?,
                "{}: unit coboundary not trivial",
                name
            );
            let forms = FormCochain::new(
                a.clone(),
                0,
                FormMode::Regular,
                (0..a.len()).map(|i| (vec![i], uc.get(&[i]).dlog())),
            )
            .map_err(err)?;
            let c = Connection::new(l, forms).map_err(err)?;
            ensure!(
                c.pic_c_equal(&trivial).map_err(err)?,
                "{}: (du, dlog u) nontrivial",
                name
            );

            // (b), (c) on a random bundle
            let l = gen::bundle(&mut rng, &a, 3);
            let target = dlog_cochain(l.cocycle());
            let report = l.atiyah_obstruction().map_err(err)?;
            let solved = solve_connection(&l, ConnectionKind::Any).map_err(err)?;
            let brute = oracle::brute_force(&target, false).is_some();
            ensure!(
                report.vanishes == solved.is_found() && report.vanishes == brute,
                "{}: obstruction vanishes = {}, solver = {}, brute force = {}",
                name,
                report.vanishes,
                solved.is_found(),
                brute
            );
            ensure!(
                report.vanishes == report.witness.is_some(),
                "{}: witness presence disagrees with verdict",
                name
            );
            if l.is_trivial().map_err(err)? {
                ensure!(
                    report.vanishes,
                    "{}: trivial bundle with nonzero obstruction",
                    name
                );
            }
            if let Some(c) = solved.into_connection() {
                with_connection += 1;
                let tw =
                    twist_trivial(&random_global_form(&mut rng, &a), a.clone()).map_err(err)?;
                let c = c.tensor(&tw).map_err(err)?;
                let d = coboundary(c.forms()).map_err(err)?;
                for p in a.pairs() {
                    ensure!(
                        d.get(&p) == target.get(&p),
                        "{}: delta alpha != dlog g on {:?}",
                        name,
                        p
                    );
                }
                ensure!(
                    solve_coboundary(&target, FormMode::Regular)
                        .map_err(err)?
                        .is_solved(),
                    "{}: own forms are a witness but the solver failed",
                    name
                );
            }
        }
    }
    Ok(format!(
        "6 atlases x 100 bundles and unit twists; {} connections verified",
        with_connection
    ))
}

/// Regular connections are integrable (torus, plane) and every connection on a
/// complete atlas is integrable.
pub fn regular_and_complete() -> Outcome {
    let mut rng = gen::rng(0x6A);
    let mut regular = 0;
    for name in ["Gm2", "A2"] {
        let a = atlas(name);
        let comp = a.compactification().expect("compactified").clone();
        for t in 0..120 {
            let mut w = gen::regular_form(&mut rng, a.chart(0), false, 3, 2);
            if t % 2 == 0 {
                let consts: Vec<_> = (0..2).map(|_| gen::rational(&mut rng)).collect();
                w = DlogForm::constant_one_form(&consts);
                if name == "A2" {
                    w = DlogForm::zero(2, 1);
                }
            }
            let c = twist_trivial(&w, a.clone()).map_err(err)?;
            let reg = c.is_regular().map_err(err)?;
            let expected = comp
                .cover(0)
                .iter()
                .all(|&v| oracle::form_ok(comp.atlas().chart(v), &w, true));
            ensure!(
                reg == expected,
                "{}: is_regular({}) = {}, oracle {}",
                name,
                w,
                reg,
                expected
            );
            if reg {
                regular += 1;
                ensure!(
                    c.is_integrable().map_err(err)?,
                    "{}: regular {} not integrable",
                    name,
                    w
                );
            }
        }
    }
    ensure!(regular >= 50, "only {} regular samples", regular);
    let mut complete = 0;
    for name in ["P1", "P1xP1"] {
        let a = atlas(name);
        for _ in 0..100 {
            let l = gen::bundle(&mut rng, &a, 3);
            if let Some(c) = solve_connection(&l, ConnectionKind::Any)
                .map_err(err)?
                .into_connection()
            {
                complete += 1;
                ensure!(
                    c.is_integrable().map_err(err)?,
                    "{}: found connection not integrable",
                    name
                );
            }
            let forms = (0..a.len())
                .map(|i| gen::regular_form(&mut rng, a.chart(i), false, 2, 2))
                .collect();
            if let Ok(c) = Connection::from_local_forms(l, forms) {
                complete += 1;
                ensure!(
                    c.is_integrable().map_err(err)?,
                    "{}: supplied connection not integrable",
                    name
                );
            }
            // (δu, dlog u_i) on a randomly re-trivialized trivial bundle
            let uc = random_unit_cochain(&mut rng, &a)?;
            let l = LineBundle::new(uc.coboundary().map_err(err)?).map_err(err)?;
            let forms = (0..a.len()).map(|i| uc.get(&[i]).dlog()).collect();
            let c = Connection::from_local_forms(l, forms).map_err(err)?;
            complete += 1;
            ensure!(
                c.is_integrable().map_err(err)?,
                "{}: (du, dlog u) not integrable",
                name
            );
        }
    }
    ensure!(
        complete >= 100,
        "only {} connections on complete atlases",
        complete
    );
    Ok(format!(
        "240 connections on Gm2/A2 ({} regular, all integrable); {} connections on P1, P1xP1 integrable",
        regular, complete
    ))
}

/// Existence of any / integrable / regular integrable connections and torsion `c₁` agree.
pub fn torsion_bridge() -> Outcome {
    let mut cases = Vec::new();
    for k in -5..=5 {
        cases.push(("P1", vec![k]));
    }
    for x in -5..=5 {
        for y in -5..=5 {
            cases.push(("A2minus0", vec![x, y]));
        }
    }
    for (name, e) in &cases {
        let l = pure(&atlas(name), e.clone())?;
        let verdicts: Vec<bool> = [
            ConnectionKind::Any,
            ConnectionKind::Integrable,
            ConnectionKind::RegularIntegrable,
        ]
        .into_iter()
        .map(|k| solve_connection(&l, k).map(|s| s.is_found()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
        let torsion = chern_class(&l).map_err(err)?.is_torsion();
        ensure!(
            verdicts.iter().all(|&v| v == torsion),
            "{} {:?}: any/integrable/regular = {:?}, c1 torsion = {}",
            name,
            e,
            verdicts,
            torsion
        );
    }
    Ok(format!(
        "{} bundles: the four conditions agree",
        cases.len()
    ))
}

fn random_target(rng: &mut impl Rng, a: &Arc<Atlas>) -> Result<FormCochain, String> {
    let gamma = FormCochain::new(
        a.clone(),
        0,
        FormMode::Regular,
        (0..a.len()).map(|i| (vec![i], gen::regular_form(rng, a.chart(i), false, 3, 2))),
    )
    .map_err(err)?;
    let mut t = coboundary(&gamma).map_err(err)?;
    if rng.gen_bool(0.5) {
        t = t
            .add(&dlog_cochain(gen::bundle(rng, a, 2).cocycle()))
            .map_err(err)?;
    }
    if a.len() == 2 && rng.gen_bool(0.5) {
        let u01 = a.chart_of(&[0, 1]).unwrap();
        let w = gen::regular_form(rng, u01, false, 3, 2);
        let extra =
            FormCochain::new(a.clone(), 1, FormMode::Regular, [(vec![0, 1], w)]).map_err(err)?;
        t = t.add(&extra).map_err(err)?;
    }
    Ok(t)
}

/// The graded solver agrees with the dense brute-force solver.
pub fn solver_oracle() -> Outcome {
    let mut rng = gen::rng(0x0A);
    let mut checked = 0;
    let mut obstructed = 0;
    for name in BUILTIN_NAMES {
        let a = atlas(name);
        let has_boundary = a.compactification().is_some_and(|c| {
            c.atlas()
                .charts()
                .iter()
                .any(|ch| ch.boundary().is_some_and(|b| b.contains(&true)))
        });
        for _ in 0..100 {
            let target = random_target(&mut rng, &a)?;
            let modes: &[FormMode] = if has_boundary {
                &[FormMode::Regular, FormMode::Log]
            } else {
                &[FormMode::Regular]
            };
            for &mode in modes {
                let log = mode == FormMode::Log;
                let fast = solve_coboundary(&target, mode).map_err(err)?;
                let slow = oracle::brute_force(&target, log);
                checked += 1;
                ensure!(
                    fast.is_solved() == slow.is_some(),
                    "{} ({:?}): graded solver {} but brute force {}",
                    name,
                    mode,
                    fast.is_solved(),
                    slow.is_some()
                );
                if let Some(alpha) = fast.solution() {
                    ensure!(
                        coboundary(alpha).map_err(err)? == target,
                        "{}: graded witness wrong",
                        name
                    );
                    for i in 0..a.len() {
                        ensure!(
                            oracle::form_ok(a.chart(i), &alpha.local(i), false),
                            "{}: graded witness irregular on chart {}",
                            name,
                            i
                        );
                    }
                } else {
                    obstructed += 1;
                }
                if let Some(sol) = slow {
                    let alpha = FormCochain::new(
                        a.clone(),
                        0,
                        mode,
                        sol.into_iter().enumerate().map(|(i, w)| (vec![i], w)),
                    )
                    .map_err(err)?;
                    ensure!(
                        coboundary(&alpha).map_err(err)? == target,
                        "{}: brute-force witness wrong",
                        name
                    );
                }
            }
        }
    }
    Ok(format!(
        "{} targets on 6 atlases agree ({} obstructed)",
        checked, obstructed
    ))
}

/// Algebraic identities on random inputs.
pub fn algebra_suite(instances: usize) -> Outcome {
    let mut rng = gen::rng(0x09);
    let p2 = atlas("P2");
    let p1p1 = atlas("P1xP1");
    for i in 0..instances {
        let n = 1 + i % 3;
        let f = gen::poly(&mut rng, n, 3, 3);
        let p = rng.gen_range(0..n.min(2));
        let w = gen::form(&mut rng, n, p, 3, 3);
        let eta = gen::form(&mut rng, n, 1, 3, 3);
        let d = |x: &DlogForm| x.exterior_derivative().map_err(err);
        let wedge = |x: &DlogForm, y: &DlogForm| x.wedge(y).map_err(err);

        let df = d(&DlogForm::function(f.clone()))?;
        ensure!(d(&df)?.is_zero(), "d d f != 0 for f = {}", f);
        ensure!(d(&d(&w)?)?.is_zero(), "d d w != 0 for w = {}", w);

        // d(f w) = df ^ w + f dw
        let fw = w.mul_function(&f).map_err(err)?;
        let rhs = &wedge(&df, &w)? + &d(&w)?.mul_function(&f).map_err(err)?;
        ensure!(d(&fw)? == rhs, "Leibniz fails for f = {}, w = {}", f, w);

        // d(w ^ eta) = dw ^ eta + (-1)^p w ^ d eta
        let lhs = d(&wedge(&w, &eta)?)?;
        let second = wedge(&w, &d(&eta)?)?;
        let rhs = if p % 2 == 0 {
            &wedge(&d(&w)?, &eta)? + &second
        } else {
            &wedge(&d(&w)?, &eta)? - &second
        };
        ensure!(lhs == rhs, "graded Leibniz fails for {} and {}", w, eta);

        // w ^ eta = (-1)^{p q} eta ^ w
        let q = 1;
        let a = wedge(&w, &eta)?;
        let b = wedge(&eta, &w)?;
        let b = if (p * q) % 2 == 0 { b } else { -b };
        ensure!(a == b, "graded commutativity fails for {} and {}", w, eta);

        // dlog(u v) = dlog u + dlog v
        let u = UnitMonomial::new(
            gen::nonzero_rational(&mut rng),
            gen::exponent(&mut rng, n, 5),
        )
        .map_err(err)?;
        let v = UnitMonomial::new(
            gen::nonzero_rational(&mut rng),
            gen::exponent(&mut rng, n, 5),
        )
        .map_err(err)?;
        ensure!(
            u.mul(&v).dlog() == &u.dlog() + &v.dlog(),
            "dlog({} * {}) not additive",
            u,
            v
        );
        let direct = d(&DlogForm::function(u.to_poly()))?;
        let via_dlog = u.dlog().mul_function(&u.to_poly()).map_err(err)?;
        ensure!(direct == via_dlog, "du != u dlog u for {}", u);

        // δδ = 0 on three- and four-chart nerves
        let a = if i % 2 == 0 { &p2 } else { &p1p1 };
        let c = FormCochain::new(
            a.clone(),
            0,
            FormMode::Regular,
            (0..a.len()).map(|k| {
                (
                    vec![k],
                    gen::regular_form(&mut rng, a.chart(k), false, 2, 2),
                )
            }),
        )
        .map_err(err)?;
        ensure!(
            coboundary(&coboundary(&c).map_err(err)?)
                .map_err(err)?
                .is_zero(),
            "delta delta != 0"
        );
    }
    Ok(format!(
        "{} instances of d^2, delta^2, Leibniz, dlog, graded commutativity",
        instances
    ))
}
