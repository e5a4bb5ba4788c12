use serde_json::json;

use fundgpd::acceptance::{self, Config};
use fundgpd::envgpd::{enveloping_groupoid, verify_enveloping};
use fundgpd::fieldgalois::{classify_torsors, is_separable, primitive_idempotents, Fq, GAlgebra};
use fundgpd::fincat::{enumerate_functors, equivalence_check, FinCategory, FinGroup, FinGroupoid, Functor};
use fundgpd::limits::{
    compute_limit, default_test_family, equalizer, universal_property_oracle, LimitCone, LimitDiagram,
};
use fundgpd::progpd::{cross_check_field, non_representability_demo, pro_hom, zhat_chain, ProGroupoid};
use fundgpd::schema::{self, AlgebraDoc, CategoryDoc, DiagramDoc, FunctorDoc, RingDoc, TorsorDoc};
use fundgpd::topos::CartRing;
use fundgpd::torsors::{
    enumerate_torsors, eta_iso_check, is_torsor, lattice_torsors, pushforward, round_trip_st, round_trip_ts,
    DescentDatum, RightGRep, TorsorGroupoid,
};
use fundgpd::{corpus, Error};

use crate::report::Recorder;
use crate::{CatCmd, Cli, Command, GaloisCmd, LimitKind, ProCmd, SuiteArgs, ToposCmd, TorsorsCmd};

pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SCHEMA: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// A document that parsed but does not describe a valid object.
    #[error("{doc}: {source}")]
    Document { doc: String, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

fn core_exit_code(e: &Error) -> u8 {
    match e {
        Error::Schema { .. } | Error::Axioms(_) => EXIT_SCHEMA,
        Error::BudgetExceeded { .. } | Error::Inconclusive { .. } | Error::NoStabilization { .. } => EXIT_BUDGET,
        Error::NotGood(_) | Error::FreenessFailure(_) | Error::PushforwardNotTorsor(_) => EXIT_PROPERTY,
        Error::Precondition(_) | Error::MixedInstance => EXIT_USAGE,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Document { source, .. } => match core_exit_code(source) {
                EXIT_BUDGET => EXIT_BUDGET,
                _ => EXIT_SCHEMA,
            },
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

/// Command name, findings, and the exit code: 0 when the asserted property held.
pub fn dispatch(cli: &Cli) -> Res<(String, Recorder, u8)> {
    let mut rec = Recorder::default();
    let b = cli.budget;
    rec.param("budget", b);
    let (name, passed) = match &cli.command {
        Command::Cat(c) => cat(c, b, &mut rec)?,
        Command::Limit(a) => ("limit".to_string(), limit(a.kind, &a.input, a.check_universal, b, &mut rec)?),
        Command::Envgpd(a) => ("envgpd".to_string(), envgpd(&a.input, a.bound, b, &mut rec)?),
        Command::Topos(ToposCmd::Good { input, bound }) => {
            ("topos good".to_string(), topos_good(input, *bound, &mut rec)?)
        }
        Command::Torsors(c) => torsors(c, b, &mut rec)?,
        Command::Galois(c) => galois(c, b, &mut rec)?,
        Command::Pro(c) => pro(c, b, &mut rec)?,
        Command::Suite(a) => {
            let code = suite(a, b, cli.timing, &mut rec)?;
            return Ok(("suite".to_string(), rec, code));
        }
    };
    Ok((name, rec, if passed { 0 } else { EXIT_PROPERTY }))
}

fn read(rec: &mut Recorder, role: &str, arg: &str) -> Res<String> {
    let text = match arg.strip_prefix("corpus:") {
        Some(name) => corpus::get(name)
            .map(str::to_string)
            .ok_or_else(|| CliError::Usage(format!("no bundled document \"{name}\"")))?,
        None => std::fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.into(), source })?,
    };
    rec.input(role, &text);
    Ok(text)
}

fn in_doc<T>(arg: &str, r: fundgpd::Result<T>) -> Res<T> {
    r.map_err(|source| CliError::Document { doc: arg.into(), source })
}

fn load_category(rec: &mut Recorder, role: &str, arg: &str) -> Res<FinCategory> {
    let text = read(rec, role, arg)?;
    in_doc(arg, schema::parse::<CategoryDoc>(&text).and_then(|d| d.to_category()))
}

fn load_groupoid(rec: &mut Recorder, role: &str, arg: &str) -> Res<FinGroupoid> {
    let c = load_category(rec, role, arg)?;
    in_doc(arg, c.into_groupoid())
}

fn load_functor(rec: &mut Recorder, role: &str, arg: &str, dom: &FinCategory, cod: &FinCategory) -> Res<Functor> {
    let text = read(rec, role, arg)?;
    in_doc(arg, schema::parse::<FunctorDoc>(&text).and_then(|d| d.to_functor(dom, cod)))
}

fn load_ring(rec: &mut Recorder, arg: &str) -> Res<CartRing> {
    let text = read(rec, "ring", arg)?;
    in_doc(arg, schema::parse::<RingDoc>(&text).and_then(|d| d.to_ring()))
}

fn load_torsor(rec: &mut Recorder, arg: &str) -> Res<RightGRep> {
    let text = read(rec, "in", arg)?;
    in_doc(arg, schema::parse::<TorsorDoc>(&text).and_then(|d| d.to_rep()))
}

fn load_algebra(rec: &mut Recorder, arg: &str) -> Res<GAlgebra> {
    let text = read(rec, "in", arg)?;
    in_doc(arg, schema::parse::<AlgebraDoc>(&text).and_then(|d| d.to_g_algebra()))
}

fn group(rec: &mut Recorder, name: &str) -> Res<FinGroup> {
    rec.param("group", name);
    FinGroup::by_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown group \"{name}\" (try 1, Z4, S3, D4, Q8, Z2xZ2)")))
}

fn describe(c: &FinCategory) -> serde_json::Value {
    let components = c.connected_components();
    let (skeleton, _) = c.skeleton();
    json!({
        "objects": c.num_objects(),
        "arrows": c.num_arrows(),
        "components": components.num_classes(),
        "iso_classes": skeleton.num_objects(),
        "endomorphisms": skeleton.objects().map(|o| skeleton.hom(o, o).len()).collect::<Vec<_>>(),
    })
}

fn cat(c: &CatCmd, budget: u64, rec: &mut Recorder) -> Res<(String, bool)> {
    match c {
        CatCmd::Check { input } => {
            let text = read(rec, "in", input)?;
            let doc = in_doc(input, schema::parse::<CategoryDoc>(&text))?;
            match doc.to_category() {
                Ok(c) => {
                    rec.verdict("valid", true);
                    rec.verdict("groupoid", c.is_groupoid().is_ok());
                    rec.cert("category", describe(&c));
                }
                Err(Error::Axioms(v)) => {
                    rec.verdict("valid", false);
                    rec.cert("violations", v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
                    return Ok(("cat check".into(), false));
                }
                Err(e) => return Err(CliError::Document { doc: input.clone(), source: e }),
            }
            Ok(("cat check".into(), true))
        }
        CatCmd::Equiv { a, b } => {
            let (ca, cb) = (load_category(rec, "a", a)?, load_category(rec, "b", b)?);
            let eq = equivalence_check(&ca, &cb, budget)?;
            rec.verdict("equivalent", eq.is_some());
            if let Some(e) = &eq {
                rec.cert("witness", FunctorDoc::from_functor(&ca, &cb, &e.witness));
                rec.cert("skeleton_objects", e.skeleton_objects);
            }
            Ok(("cat equiv".into(), eq.is_some()))
        }
        CatCmd::Functors { dom, cod } => {
            let (d, c) = (load_category(rec, "dom", dom)?, load_category(rec, "cod", cod)?);
            let fun = enumerate_functors(&d, &c, budget)?;
            rec.cert("functor_category", describe(&fun.category));
            Ok(("cat functors".into(), true))
        }
    }
}

fn limit(kind: LimitKind, input: &str, check: bool, budget: u64, rec: &mut Recorder) -> Res<bool> {
    let text = read(rec, "in", input)?;
    let d = in_doc(input, schema::parse::<DiagramDoc>(&text).and_then(|d| d.to_diagram()))?;
    rec.param("kind", format!("{kind:?}").to_lowercase());
    rec.param("check_universal", check);
    let matches = matches!(
        (kind, &d),
        (LimitKind::Product, LimitDiagram::Product { .. })
            | (LimitKind::Equalizer, LimitDiagram::Equalizer { .. })
            | (LimitKind::Equifier, LimitDiagram::Equifier { .. })
    );
    if !matches {
        return Err(CliError::Document {
            doc: input.into(),
            source: Error::schema("kind", "does not match the subcommand"),
        });
    }
    let cone = compute_limit(&d);
    let apex = cone.apex();
    rec.cert("apex", CategoryDoc::from_category(apex));
    rec.cert("apex_summary", describe(apex));
    match &cone {
        LimitCone::Product { p1, p2, .. } => rec.cert("projections", [&p1.obj, &p2.obj]),
        LimitCone::Equalizer { xi, p, .. } => rec.cert("structure", json!({"xi_objects": xi.obj, "p": p})),
        LimitCone::Equifier { j, .. } => rec.cert("inclusion_objects", &j.obj),
    }
    if !check {
        return Ok(true);
    }
    let r = universal_property_oracle(&d, &cone, &default_test_family(), budget)?;
    rec.verdict("universal", r.passed);
    rec.cert(
        "per_test",
        r.per_test
            .iter()
            .map(|t| json!({"cone_objects": t.cone_objects, "iso_classes": t.cone_iso_classes, "equivalence": t.equivalence}))
            .collect::<Vec<_>>(),
    );
    Ok(r.passed)
}

fn envgpd(input: &str, bound: u64, budget: u64, rec: &mut Recorder) -> Res<bool> {
    let c = load_category(rec, "in", input)?;
    rec.param("bound", bound);
    let env = enveloping_groupoid(&c, bound)?;
    let v = verify_enveloping(&c, &env.groupoid, &env.unit, &default_test_family(), budget)?;
    rec.verdict("universal", v.passed);
    rec.cert("envelope", CategoryDoc::from_category(&env.groupoid));
    rec.cert("unit", FunctorDoc::from_functor(&c, &env.groupoid, &env.unit));
    rec.cert(
        "presentations",
        env.presentations
            .iter()
            .map(|(root, p)| json!({"root": c.obj_name(*root), "generators": p.gens, "relators": p.relators}))
            .collect::<Vec<_>>(),
    );
    rec.cert("steps_used", env.steps_used);
    Ok(v.passed)
}

fn topos_good(input: &str, bound: usize, rec: &mut Recorder) -> Res<bool> {
    let ring = load_ring(rec, input)?;
    rec.param("bound", bound);
    let r = ring.is_good(bound);
    rec.verdict("disjoint", r.disjoint);
    rec.verdict("stable", r.stable);
    rec.cert("checks", r.checks);
    rec.cert("structural", r.structural);
    rec.cert("scope", format!("{:?}", r.scope));
    if let Some(w) = &r.disjoint_counterexample {
        rec.cert("disjointness_counterexample", format!("{w:?}"));
    }
    if let Some(w) = &r.stable_counterexample {
        rec.cert("stability_counterexample", format!("{w:?}"));
    }
    Ok(r.good())
}

fn torsors(c: &TorsorsCmd, budget: u64, rec: &mut Recorder) -> Res<(String, bool)> {
    match c {
        TorsorsCmd::Enumerate { groupoid, ring, bound } => {
            let g = load_groupoid(rec, "groupoid", groupoid)?;
            let r = load_ring(rec, ring)?;
            rec.param("bound", bound);
            let t = match &r {
                CartRing::Lattice(_) => TorsorGroupoid::assemble(lattice_torsors(&g, &r)?),
                _ => enumerate_torsors(&g, &r, *bound, budget)?,
            };
            rec.verdict("all_invertible", t.all_invertible());
            let expected = match &r {
                CartRing::FinSet => Some(g.category().clone()),
                CartRing::Presheaf(c) => Some(enumerate_functors(c, &g, budget)?.category),
                CartRing::Lattice(_) => None,
            };
            let mut ok = t.all_invertible();
            if let Some(e) = expected {
                let eq = equivalence_check(&t.category, &e, budget)?.is_some();
                rec.verdict("equivalent_to_expected", eq);
                ok &= eq;
            }
            rec.cert("classes", t.torsors.len());
            rec.cert("automorphism_orders", t.automorphism_orders());
            rec.cert("torsors", t.torsors.iter().map(|w| TorsorDoc::from_rep(&w.rep)).collect::<Vec<_>>());
            Ok(("torsors enumerate".into(), ok))
        }
        TorsorsCmd::Check { input } => {
            let x = load_torsor(rec, input)?;
            let ok = match is_torsor(&x) {
                Ok(w) => {
                    rec.verdict("tau_iso", true);
                    rec.verdict("counit_iso", true);
                    rec.cert("support", w.support.iter().map(|&o| x.g.obj_name(o)).collect::<Vec<_>>());
                    true
                }
                Err(f) => {
                    rec.verdict("tau_iso", f.tau_iso);
                    rec.verdict("counit_iso", f.counit_iso);
                    rec.cert("reason", f.reason);
                    false
                }
            };
            rec.verdict("eta_iso", eta_iso_check(&x));
            Ok(("torsors check".into(), ok))
        }
        TorsorsCmd::Push { input, target, phi } => {
            let x = load_torsor(rec, input)?;
            let h = load_groupoid(rec, "target", target)?;
            let f = load_functor(rec, "phi", phi, &x.g, &h)?;
            let w = match is_torsor(&x) {
                Ok(w) => w,
                Err(e) => {
                    rec.verdict("input_torsor", false);
                    rec.cert("reason", e.reason);
                    return Ok(("torsors push".into(), false));
                }
            };
            rec.verdict("input_torsor", true);
            let p = pushforward(&w, &h, &f)?;
            rec.verdict("pushed_torsor", true);
            rec.cert("pushed", TorsorDoc::from_rep(&p.witness.rep));
            Ok(("torsors push".into(), true))
        }
        TorsorsCmd::Descend { ring, groupoid, target, phi, psi, bound } => {
            let r = load_ring(rec, ring)?;
            let g = load_groupoid(rec, "groupoid", groupoid)?;
            let h = load_groupoid(rec, "target", target)?;
            let phi = load_functor(rec, "phi", phi, &g, &h)?;
            let psi = load_functor(rec, "psi", psi, &g, &h)?;
            rec.param("bound", bound);
            let eq = equalizer(&g, &h, &phi, &psi);
            let (mut st, mut st_ok) = (0, true);
            for y in &enumerate_torsors(&eq.k, &r, *bound, budget)?.torsors {
                st_ok &= round_trip_st(&eq, y, &g, &h, &phi, &psi)?.ok();
                st += 1;
            }
            let (mut ts, mut ts_ok) = (0, true);
            for x in &enumerate_torsors(&g, &r, *bound, budget)?.torsors {
                for d in DescentDatum::enumerate(x, &h, &phi, &psi)? {
                    ts_ok &= round_trip_ts(&d)?.ok();
                    ts += 1;
                }
            }
            rec.verdict("s_after_t_is_identity", st_ok);
            rec.verdict("t_after_s_is_identity", ts_ok);
            rec.cert("equalizer", describe(&eq.k));
            rec.cert("equalizer_torsors", st);
            rec.cert("descent_data", ts);
            Ok(("torsors descend".into(), st_ok && ts_ok))
        }
    }
}

fn galois(c: &GaloisCmd, budget: u64, rec: &mut Recorder) -> Res<(String, bool)> {
    match c {
        GaloisCmd::Classify { group: name, q } => {
            let gamma = group(rec, name)?;
            rec.param("q", q);
            let t = classify_torsors(&gamma, &Fq::of_order(*q)?, budget)?;
            let mut classes = Vec::new();
            for (i, c) in t.classes.iter().enumerate() {
                classes.push(json!({
                    "element": c.element,
                    "element_order": c.order,
                    "dimension": c.rep.algebra.dim(),
                    "points": primitive_idempotents(&c.rep.algebra)?.points(),
                    "automorphism_order": t.automorphism_orders[i],
                    "galois_rank": t.verdicts[i].galois_rank,
                }));
            }
            let torsors = t.verdicts.iter().all(|v| v.torsor());
            rec.verdict("all_torsors", torsors);
            rec.verdict("inertia_equivalent", t.inertia_equivalent);
            rec.cert("classes", classes);
            Ok(("galois classify".into(), torsors && t.inertia_equivalent))
        }
        GaloisCmd::Pierce { input } => {
            let r = load_algebra(rec, input)?.algebra;
            let s = primitive_idempotents(&r)?;
            let verified = s.verify(&r);
            rec.verdict("verified", verified);
            rec.cert("points", s.points());
            rec.cert("primitives", &s.primitives);
            rec.cert("component_dimensions", s.components.iter().map(|c| c.dim()).collect::<Vec<_>>());
            rec.cert("method", format!("{:?}", s.method).to_lowercase());
            Ok(("galois pierce".into(), verified))
        }
        GaloisCmd::Separable { input } => {
            let r = load_algebra(rec, input)?.algebra;
            let sep = is_separable(&r);
            rec.verdict("separable", sep);
            Ok(("galois separable".into(), sep))
        }
    }
}

fn pro(c: &ProCmd, budget: u64, rec: &mut Recorder) -> Res<(String, bool)> {
    match c {
        ProCmd::Hom { pro, target } => {
            let x = if let Some(n) = pro.strip_prefix("zhat:") {
                rec.param("pro", pro);
                let n = n.parse().map_err(|_| CliError::Usage(format!("bad level count in \"{pro}\"")))?;
                zhat_chain(n)?
            } else if let Some(doc) = pro.strip_prefix("const:") {
                ProGroupoid::constant(load_groupoid(rec, "pro", doc)?)
            } else {
                return Err(CliError::Usage(format!("expected zhat:N or const:DOC, got \"{pro}\"")));
            };
            let g = load_category(rec, "target", target)?;
            let h = pro_hom(&x, &g, budget)?;
            rec.verdict("stabilized", h.stabilized);
            rec.cert("hom", describe(h.groupoid()));
            rec.cert("position", h.position);
            rec.cert("levels_tried", h.levels_tried);
            Ok(("pro hom".into(), h.stabilized))
        }
        ProCmd::Crosscheck { group: name, q } => {
            let gamma = group(rec, name)?;
            rec.param("q", q);
            let c = cross_check_field(&gamma, *q, budget)?;
            rec.verdict("equivalent", c.equivalent);
            let (field, pro) = c.automorphism_orders();
            rec.cert("field_automorphism_orders", field);
            rec.cert("pro_automorphism_orders", pro);
            rec.cert("pro_level", c.pro.position + 1);
            Ok(("pro crosscheck".into(), c.equivalent))
        }
        ProCmd::Nonrep => {
            let d = non_representability_demo(budget)?;
            rec.verdict("holds", d.holds);
            rec.cert("evidence", &d);
            Ok(("pro nonrep".into(), d.holds))
        }
    }
}

fn suite(a: &SuiteArgs, budget: u64, timing: bool, rec: &mut Recorder) -> Res<u8> {
    let cfg = Config { seed: a.seed, quick: a.quick, budget, timing };
    rec.param("seed", a.seed);
    rec.param("quick", a.quick);
    let ids: Vec<u8> =
        if a.only.is_empty() { acceptance::CRITERIA.iter().map(|c| c.0).collect() } else { a.only.clone() };
    rec.param("only", &ids);
    let mut outcomes = Vec::new();
    let mut all = true;
    let mut budget_hit = false;
    for id in ids {
        match acceptance::run(id, &cfg) {
            Ok(o) => {
                let ok = o.passed && o.within_time();
                rec.verdict(&format!("criterion_{id:02}"), ok);
                all &= ok;
                outcomes.push(serde_json::to_value(&o).expect("outcomes serialize"));
            }
            Err(e @ Error::Precondition(_)) => return Err(CliError::Usage(e.to_string())),
            Err(e) => {
                rec.verdict(&format!("criterion_{id:02}"), false);
                outcomes.push(json!({"id": id, "error": e.to_string()}));
                all = false;
                budget_hit |= core_exit_code(&e) == EXIT_BUDGET;
            }
        }
    }
    rec.cert("outcomes", outcomes);
    Ok(match (all, budget_hit) {
        (true, _) => 0,
        (false, true) => EXIT_BUDGET,
        (false, false) => EXIT_PROPERTY,
    })
}
