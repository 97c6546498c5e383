//! Seeded property suites behind `folab check`.
//!
//! Each suite runs `count` independent cases off one base seed. A case
//! draws its instances from a per-index generator, checks a batch of
//! identities, and stops at the first broken one. Failing cases are
//! replayed at decreasing generator sizes and the smallest instance that
//! still breaks is the one reported, as JSON the other verbs accept.

use std::fmt;
use std::fs;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::collapsed::{
    graft_category, graft_homs, graft_lengths_ok, r_map, strip_collapsed_element,
    strip_collapsed_forest, EdgeSite, Grafted, GraftSite,
};
use crate::extreal::ExtReal;
use crate::forest::{compose, Corolla, Forest, Head, Tail};
use crate::free::{FreeOperad, PointedCollection};
use crate::gen::{
    gen_colors, gen_decoration, gen_forest_from, gen_forest_into, gen_labeling, gen_plain_tree,
    gen_profile_forest, gen_sc_data, gen_sc_forest_into, gen_sc_young, gen_triple,
    gen_weight_above, gen_young, rng_from_seed, GenParams,
};
use crate::operad::{decorations_equal, Operad, TerminalOperad};
use crate::sc::{compose_sc, validate_sc, ScElement, ScOperad};
use crate::wcons::{
    counit, reduce, validate_wpoint, w_act, w_equal, w_infty, w_sigma, EdgeLabeling, ReduceOrder,
    WPoint,
};
use crate::weight::{boundary_analysis_k_plus_1, weighted_compose, Weight};

pub const SUITES: [&str; 5] =
    ["forest-axioms", "weights", "w-relations", "sc-functoriality", "trees-alpha"];

/// Which operad decorates the points in the `w-relations` suite. Parsed
/// from `terminal`, `sc:<d>`, or `free:<collection file>`.
pub enum OperadSpec {
    Terminal,
    Sc(usize),
    Free(PointedCollection),
}

impl OperadSpec {
    pub fn parse(name: &str) -> Result<OperadSpec, String> {
        if name == "terminal" {
            return Ok(OperadSpec::Terminal);
        }
        if let Some(d) = name.strip_prefix("sc:") {
            let d: usize = d.parse().map_err(|_| format!("bad dimension {d:?}"))?;
            if d == 0 {
                return Err("disc dimension must be at least 1".into());
            }
            return Ok(OperadSpec::Sc(d));
        }
        if let Some(path) = name.strip_prefix("free:") {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            let coll = PointedCollection::from_json(&text).map_err(|e| e.to_string())?;
            return Ok(OperadSpec::Free(coll));
        }
        Err(format!("unknown operad {name:?} (expected terminal, sc:<d>, or free:<file>)"))
    }
}

pub struct SuiteConfig {
    pub seed: u64,
    pub count: u64,
    pub tol: f64,
    pub operad: OperadSpec,
    /// Fixed disc dimension for `sc-functoriality`; `None` draws from 1..=3.
    pub d: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, count: 100, tol: 1e-9, operad: OperadSpec::Terminal, d: None }
    }
}

#[derive(Debug)]
pub struct CaseFailure {
    pub index: u64,
    pub law: String,
    pub detail: String,
}

#[derive(Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub count: u64,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passed(&self) -> u64 {
        self.count - self.failures.len() as u64
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            w,
            "suite {} seed={} count={}: {} ({}/{} cases)",
            self.suite,
            self.seed,
            self.count,
            if self.ok() { "PASS" } else { "FAIL" },
            self.passed(),
            self.count
        )?;
        for f in &self.failures {
            writeln!(w, "case {} broke {}:", f.index, f.law)?;
            for line in f.detail.lines() {
                writeln!(w, "  {line}")?;
            }
        }
        Ok(())
    }
}

struct Broken {
    law: &'static str,
    detail: String,
}

type CaseResult = Result<(), Broken>;

fn broken(law: &'static str, detail: String) -> CaseResult {
    Err(Broken { law, detail })
}

fn show<T: Serialize>(label: &str, value: &T) -> String {
    match serde_json::to_string(value) {
        Ok(s) => format!("{label} = {s}"),
        Err(e) => format!("{label} = <unprintable: {e}>"),
    }
}

/// Decorrelate case indices from the base seed (splitmix64 finalizer).
fn case_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const SHRINK: [GenParams; 3] = [
    GenParams { max_roots: 2, max_slots: 2, moves: 2 },
    GenParams { max_roots: 1, max_slots: 1, moves: 1 },
    GenParams { max_roots: 1, max_slots: 0, moves: 0 },
];

fn run_case(
    case: &dyn Fn(&GenParams, &mut ChaCha8Rng) -> CaseResult,
    seed: u64,
) -> Option<Broken> {
    let mut rng = rng_from_seed(seed);
    let mut fail = match case(&GenParams::default(), &mut rng) {
        Ok(()) => return None,
        Err(b) => b,
    };
    for p in SHRINK {
        let mut rng = rng_from_seed(seed);
        if let Err(b) = case(&p, &mut rng) {
            fail = b;
        }
    }
    Some(fail)
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, String> {
    let case: Box<dyn Fn(&GenParams, &mut ChaCha8Rng) -> CaseResult> = match name {
        "forest-axioms" => Box::new(forest_axioms_case),
        "weights" => Box::new(weights_case),
        "w-relations" => {
            let tol = cfg.tol;
            match &cfg.operad {
                OperadSpec::Terminal => Box::new(move |p, rng| {
                    let colors = gen_colors(rng);
                    let op = TerminalOperad { colors: colors.clone() };
                    let chain = |p: &GenParams, rng: &mut ChaCha8Rng| {
                        let z = gen_young(&colors, p, rng);
                        let h = gen_forest_into(&z, p, rng);
                        let g = gen_forest_into(&h.source, p, rng);
                        let f = gen_forest_into(&g.source, p, rng);
                        (h, g, f)
                    };
                    w_relations_case(&op, &chain, tol, p, rng)
                }),
                OperadSpec::Sc(d) => {
                    let d = *d;
                    Box::new(move |p, rng| {
                        let op = ScOperad::new(d);
                        let chain = |p: &GenParams, rng: &mut ChaCha8Rng| {
                            let z = gen_sc_young(d, p, rng);
                            let h = gen_sc_forest_into(&z, d, p.moves, rng);
                            let g = gen_sc_forest_into(&h.source, d, p.moves, rng);
                            let f = gen_sc_forest_into(&g.source, d, p.moves, rng);
                            (h, g, f)
                        };
                        w_relations_case(&op, &chain, tol, p, rng)
                    })
                }
                OperadSpec::Free(coll) => {
                    let op = FreeOperad::new(coll).map_err(|e| e.to_string())?;
                    let profiles: Vec<Corolla> =
                        coll.generators.iter().map(|g| g.corolla()).collect();
                    let colors = op.color_set().clone();
                    Box::new(move |p, rng| {
                        let chain = |p: &GenParams, rng: &mut ChaCha8Rng| {
                            let f = gen_profile_forest(&colors, &profiles, p, rng);
                            let g = gen_forest_from(&f.target, rng);
                            let h = gen_forest_from(&g.target, rng);
                            (h, g, f)
                        };
                        w_relations_case(&op, &chain, tol, p, rng)
                    })
                }
            }
        }
        "sc-functoriality" => {
            let tol = cfg.tol;
            let fixed_d = cfg.d;
            Box::new(move |p, rng| sc_functoriality_case(fixed_d, tol, p, rng))
        }
        "trees-alpha" => Box::new(trees_alpha_case),
        _ => return Err(format!("unknown suite {name:?} (expected one of {})", SUITES.join(", "))),
    };
    let mut failures = Vec::new();
    for i in 0..cfg.count {
        if let Some(b) = run_case(&*case, case_seed(cfg.seed, i)) {
            failures.push(CaseFailure { index: i, law: b.law.to_string(), detail: b.detail });
        }
    }
    Ok(SuiteReport { suite: name.to_string(), seed: cfg.seed, count: cfg.count, failures })
}

/// Category axioms plus the per-root edge count identity on every
/// composite the case forms.
fn forest_axioms_case(p: &GenParams, rng: &mut ChaCha8Rng) -> CaseResult {
    let colors = gen_colors(rng);
    let (f, g, h) = gen_triple(&colors, p, rng);
    let ctx = || [show("f", &f), show("g", &g), show("h", &h)].join("\n");
    let err = |law: &'static str, e: &dyn fmt::Display| Broken {
        law,
        detail: format!("{e}\n{}", ctx()),
    };
    let fg = compose(&f, &g).map_err(|e| err("composability", &e))?;
    let gh = compose(&g, &h).map_err(|e| err("composability", &e))?;
    let left = compose(&fg, &h).map_err(|e| err("composability", &e))?;
    let right = compose(&f, &gh).map_err(|e| err("composability", &e))?;
    if left != right {
        return broken("associativity", ctx());
    }
    let src = compose(&f, &Forest::identity(&f.source)).map_err(|e| err("unit law", &e))?;
    let tgt = compose(&Forest::identity(&f.target), &f).map_err(|e| err("unit law", &e))?;
    if src != f {
        return broken("right unit law", show("f", &f));
    }
    if tgt != f {
        return broken("left unit law", show("f", &f));
    }
    for (outer, inner) in [(&f, &g), (&g, &h), (&fg, &h), (&f, &gh)] {
        let ok = crate::weight::edge_count_identity(outer, inner)
            .map_err(|e| err("edge count identity", &e))?;
        if !ok {
            return broken(
                "edge count identity",
                [show("outer", outer), show("inner", inner)].join("\n"),
            );
        }
    }
    Ok(())
}

/// Weight closure under composition, the edge count identity, and the
/// forced consequences at every saturated root of the top filtration step.
fn weights_case(p: &GenParams, rng: &mut ChaCha8Rng) -> CaseResult {
    let colors = gen_colors(rng);
    let (outer, inner, _) = gen_triple(&colors, p, rng);
    let wx: Weight =
        inner.source.outputs.ids().map(|v| (v.to_string(), rng.gen_range(0..=2))).collect();
    let wy = gen_weight_above(&inner, &wx, 2, rng);
    let wz = gen_weight_above(&outer, &wy, 2, rng);
    let ctx = || {
        [
            show("g", &outer),
            show("f", &inner),
            show("wx", &wx),
            show("wy", &wy),
            show("wz", &wz),
        ]
        .join("\n")
    };
    let rep = weighted_compose(&outer, &inner, &wx, &wy, &wz)
        .map_err(|e| Broken { law: "weighted composition", detail: format!("{e}\n{}", ctx()) })?;
    if !(rep.f_ok && rep.g_ok) {
        return broken("weight generation soundness", ctx());
    }
    if !rep.composite_ok {
        return broken("weight closure under composition", ctx());
    }
    if !rep.edge_identity_ok {
        return broken("edge count identity", ctx());
    }
    let top = |w: &Weight| w.values().copied().max().unwrap_or(0);
    let k = top(&wy).max(top(&wz).saturating_sub(1));
    let report = boundary_analysis_k_plus_1(&outer, &inner, &wx, &wy, &wz, k)
        .map_err(|e| Broken { law: "boundary analysis", detail: format!("{e}\n{}", ctx()) })?;
    if !report.violations().is_empty() {
        return broken(
            "saturated root consequences",
            format!("k = {k}\nviolations = {:?}\n{}", report.violations(), ctx()),
        );
    }
    Ok(())
}

/// The label transport square, the coend relation, confluence of the
/// reduction rules, and the counit identities, over one decorating operad.
fn w_relations_case<O: Operad>(
    op: &O,
    chain: &dyn Fn(&GenParams, &mut ChaCha8Rng) -> (Forest, Forest, Forest),
    tol: f64,
    p: &GenParams,
    rng: &mut ChaCha8Rng,
) -> CaseResult {
    let (h, g, f) = chain(p, rng);
    let t = gen_labeling(&g, rng);
    let alpha = gen_decoration(op, &f.source, rng);
    let ctx = || [show("h", &h), show("g", &g), show("f", &f), show("t", &t)].join("\n");
    let err = |law: &'static str| {
        let detail = ctx();
        move |e: WconsErr| Broken { law, detail: format!("{e}\n{detail}") }
    };

    let gf = compose(&g, &f).map_err(|e| err("composability")(e.into()))?;
    let hg = compose(&h, &g).map_err(|e| err("composability")(e.into()))?;
    let sigma_t = w_sigma(&g, &f, &t).map_err(err("label transport"))?;
    let lhs = w_infty(&h, &gf, &sigma_t).map_err(err("label transport"))?;
    let infty_t = w_infty(&h, &g, &t).map_err(err("label transport"))?;
    let rhs = w_sigma(&hg, &f, &infty_t).map_err(err("label transport"))?;
    if lhs != rhs {
        return broken(
            "label transport square",
            [ctx(), show("lhs", &lhs), show("rhs", &rhs)].join("\n"),
        );
    }

    let acted = op
        .act(&f, &alpha)
        .map_err(|e| Broken { law: "operad action", detail: format!("{e}\n{}", ctx()) })?;
    let p_left = WPoint { shape: gf, lengths: sigma_t, decoration: alpha };
    let p_right = WPoint { shape: g.clone(), lengths: t.clone(), decoration: acted };
    validate_wpoint(op, &p_left).map_err(err("point validity"))?;
    validate_wpoint(op, &p_right).map_err(err("point validity"))?;
    if !w_equal(op, &p_left, &p_right, tol).map_err(err("coend relation"))? {
        return broken("coend relation", [ctx(), show("lengths", &p_left.lengths)].join("\n"));
    }

    let r0 = reduce(op, &p_left, tol, ReduceOrder::ZeroEdgesFirst).map_err(err("reduction"))?;
    for _ in 0..4 {
        let rs = reduce(op, &p_left, tol, ReduceOrder::Seeded(rng.gen()))
            .map_err(err("reduction"))?;
        if !w_equal(op, &r0, &rs, tol).map_err(err("reduction confluence"))? {
            return broken("reduction confluence", ctx());
        }
    }

    let c0 = counit(op, &p_right).map_err(err("counit"))?;
    let reduced = reduce(op, &p_right, tol, ReduceOrder::ZeroEdgesFirst)
        .map_err(err("reduction"))?;
    let cr = counit(op, &reduced).map_err(err("counit"))?;
    if !decorations_equal(op, &c0, &cr, tol) {
        return broken("counit invariance under reduction", ctx());
    }
    let moved = w_act(&h, &p_right).map_err(err("outer action"))?;
    let cl = counit(op, &moved).map_err(err("counit"))?;
    let cr = op
        .act(&h, &c0)
        .map_err(|e| Broken { law: "counit naturality", detail: format!("{e}\n{}", ctx()) })?;
    if !decorations_equal(op, &cl, &cr, tol) {
        return broken("counit naturality", ctx());
    }
    Ok(())
}

/// Both associations of a double composite agree on configurations, the
/// identity acts trivially, composites stay valid, and deleting the marked
/// data commutes with everything.
fn sc_functoriality_case(
    fixed_d: Option<usize>,
    tol: f64,
    p: &GenParams,
    rng: &mut ChaCha8Rng,
) -> CaseResult {
    let d = fixed_d.unwrap_or_else(|| rng.gen_range(1..=3));
    let op = ScOperad::new(d);
    let z = gen_sc_young(d, p, rng);
    let g = gen_sc_forest_into(&z, d, p.moves, rng);
    let f = gen_sc_forest_into(&g.source, d, p.moves, rng);
    let e = gen_sc_data(&f.source, d, rng);
    let ctx = || [format!("d = {d}"), show("g", &g), show("f", &f), show("e", &e)].join("\n");
    let err = |law: &'static str| {
        let detail = ctx();
        move |e: crate::sc::ScDefect| Broken { law, detail: format!("{e:?}\n{detail}") }
    };

    validate_sc(&e).map_err(err("sampled configuration validity"))?;
    let step1 = compose_sc(&f, &e).map_err(err("composition"))?;
    validate_sc(&step1).map_err(err("composite validity"))?;
    let step2 = compose_sc(&g, &step1).map_err(err("composition"))?;
    validate_sc(&step2).map_err(err("composite validity"))?;
    let gf = compose(&g, &f)
        .map_err(|e| Broken { law: "composability", detail: format!("{e}\n{}", ctx()) })?;
    let joint = compose_sc(&gf, &e).map_err(err("composition"))?;
    if !sc_elements_close(&op, &joint, &step2, tol) {
        return broken(
            "composition functoriality",
            [ctx(), show("joint", &joint), show("stepwise", &step2)].join("\n"),
        );
    }

    let ident = compose_sc(&Forest::identity(&e.shape), &e).map_err(err("composition"))?;
    if !sc_elements_close(&op, &ident, &e, tol) {
        return broken("identity acts trivially", ctx());
    }

    let strip = |law: &'static str| {
        let detail = ctx();
        move |e: crate::collapsed::CollapsedError| Broken {
            law,
            detail: format!("{e}\n{detail}"),
        }
    };
    let pf = strip_collapsed_forest(&f).map_err(strip("marked data projection"))?;
    let pg = strip_collapsed_forest(&g).map_err(strip("marked data projection"))?;
    let pgf = strip_collapsed_forest(&gf).map_err(strip("marked data projection"))?;
    let composed = compose(&pg, &pf)
        .map_err(|e| Broken { law: "projection functoriality", detail: format!("{e}\n{}", ctx()) })?;
    if composed != pgf {
        return broken("projection functoriality", ctx());
    }
    let left = strip_collapsed_element(&step1);
    let right = compose_sc(&pf, &strip_collapsed_element(&e))
        .map_err(err("projection commutes with composition"))?;
    if !sc_elements_close(&op, &left, &right, tol) {
        return broken(
            "projection commutes with composition",
            [ctx(), show("projected composite", &left), show("composed projections", &right)]
                .join("\n"),
        );
    }
    Ok(())
}

fn sc_elements_close(op: &ScOperad, a: &ScElement, b: &ScElement, tol: f64) -> bool {
    a.shape == b.shape
        && a.data.len() == b.data.len()
        && a.data
            .iter()
            .all(|(j, v)| b.data.get(j).is_some_and(|w| op.points_equal(v, w, tol)))
}

/// The head of the edge a grafting site cuts, if that head is a vertex.
fn edge_up(t: &Forest, es: &EdgeSite) -> Option<String> {
    t.attach
        .iter()
        .find(|(_, h)| match es {
            EdgeSite::Root => matches!(h, Head::Root(_)),
            EdgeSite::Slot(i) => **h == Head::Slot(i.clone()),
        })
        .and_then(|(tail, _)| match tail {
            Tail::Vertex(u) => Some(u.clone()),
            Tail::Input(_) => None,
        })
}

/// The vertex holding the slot a grafting site cuts.
fn edge_down(t: &Forest, es: &EdgeSite) -> Option<String> {
    match es {
        EdgeSite::Slot(i) => Some(t.source.structure[i].clone()),
        EdgeSite::Root => None,
    }
}

/// The morphism count the grafting category must realize: one morphism on
/// every object, one from the infinite to the finite variant of a site,
/// and one from an edge site to each of its endpoint vertices when the
/// variants are compatible. Everything else is empty.
fn expected_homs(t: &Forest, a: &Grafted, b: &Grafted) -> usize {
    if a.site == b.site {
        return usize::from(a.k == b.k || (a.k, b.k) == (1, 0));
    }
    let GraftSite::Edge(es) = &a.site else { return 0 };
    let GraftSite::Vertex(j) = &b.site else { return 0 };
    let hit = edge_up(t, es).as_deref() == Some(j.as_str())
        || edge_down(t, es).as_deref() == Some(j.as_str());
    let k_ok = matches!((a.k, b.k), (0, 0) | (1, 1) | (1, 0));
    usize::from(hit && k_ok)
}

/// Enumerated morphism counts against the predicted table, morphisms
/// projecting functorially, length splitting on a cut edge, and the
/// boundary rescaling map.
fn trees_alpha_case(p: &GenParams, rng: &mut ChaCha8Rng) -> CaseResult {
    let t = gen_plain_tree(p, rng);
    let ctx = || show("t", &t);
    let err = |law: &'static str| {
        let detail = ctx();
        move |e: crate::collapsed::CollapsedError| Broken {
            law,
            detail: format!("{e}\n{detail}"),
        }
    };
    let objs = graft_category(&t).map_err(err("grafting objects"))?;
    for a in &objs {
        for b in &objs {
            let homs = graft_homs(a, b).map_err(err("morphism enumeration"))?;
            let want = expected_homs(&t, a, b);
            if homs.len() != want {
                return broken(
                    "morphism count",
                    format!(
                        "{:?} (k={}) -> {:?} (k={}): found {}, expected {}\n{}",
                        a.site,
                        a.k,
                        b.site,
                        b.k,
                        homs.len(),
                        want,
                        ctx()
                    ),
                );
            }
            for mu in &homs {
                let bs_mu = compose(&b.s, mu).map_err(|e| Broken {
                    law: "morphism projection",
                    detail: format!("{e}\n{}", ctx()),
                })?;
                let lhs = strip_collapsed_forest(&bs_mu).map_err(err("morphism projection"))?;
                let rhs = compose(
                    &strip_collapsed_forest(&b.s).map_err(err("morphism projection"))?,
                    &strip_collapsed_forest(mu).map_err(err("morphism projection"))?,
                )
                .map_err(|e| Broken {
                    law: "morphism projection",
                    detail: format!("{e}\n{}", ctx()),
                })?;
                if lhs != rhs {
                    return broken("morphism projection", ctx());
                }
            }
        }
    }

    let fin = |x: f64| ExtReal::finite(x).expect("nonnegative");
    let cut: Vec<&Grafted> = objs.iter().filter(|o| o.pair.is_some()).collect();
    if let Some(obj) = cut.choose(rng) {
        let pair = obj.pair.as_ref().expect("filtered on pair");
        let a = rng.gen_range(0..=8) as f64 / 4.0;
        let b = rng.gen_range(0..=8) as f64 / 4.0;
        let mut s = EdgeLabeling::new();
        s.insert(pair.upper.clone(), fin(a));
        s.insert(pair.lower.clone(), fin(b));
        if let Some(eps) = &obj.epsilon {
            s.insert(eps.clone(), fin(1.0));
        }
        let mut totals = EdgeLabeling::new();
        totals.insert(pair.total_key.clone(), fin(a + b));
        let lctx = || format!("site {:?} (k={})\n{}", obj.site, obj.k, ctx());
        let run = |s: &EdgeLabeling, totals: &EdgeLabeling, inf: bool| {
            graft_lengths_ok(obj, s, totals, inf)
        };
        if run(&s, &totals, false) != Ok(true) {
            return broken("length splitting accepts the true split", lctx());
        }
        let mut wrong = totals.clone();
        wrong.insert(pair.total_key.clone(), fin(a + b + 0.5));
        if run(&s, &wrong, false) != Ok(false) {
            return broken("length splitting rejects a bad total", lctx());
        }
        if run(&s, &totals, true) != Ok(false) {
            return broken("finite split fails the infinite requirement", lctx());
        }
        let mut s_inf = s.clone();
        s_inf.insert(pair.upper.clone(), ExtReal::INF);
        let mut t_inf = totals.clone();
        t_inf.insert(pair.total_key.clone(), ExtReal::INF);
        if run(&s_inf, &t_inf, true) != Ok(true) {
            return broken("infinite split passes the infinite requirement", lctx());
        }
    }

    let ends = [fin(0.1), fin(1.0), fin(10.0), ExtReal::INF];
    let sv = *ends.choose(rng).expect("nonempty");
    let rerr = |law: &'static str| {
        move |e: crate::collapsed::CollapsedError| Broken { law, detail: e.to_string() }
    };
    if r_map(ExtReal::ZERO, sv).map_err(rerr("rescaling"))? != ExtReal::ZERO {
        return broken("rescaling vanishes with the outer length", format!("s = {sv:?}"));
    }
    if r_map(sv, ExtReal::ZERO).map_err(rerr("rescaling"))? != ExtReal::INF {
        return broken("rescaling diverges with the inner length", format!("s = {sv:?}"));
    }
    if r_map(sv, sv).map_err(rerr("rescaling"))? != fin(1.0) {
        return broken("rescaling is one on the diagonal", format!("s = {sv:?}"));
    }
    let total = rng.gen_range(2..=20) as f64 / 4.0;
    let mut last = -1.0;
    for step in 0..=20 {
        let s_o = total * step as f64 / 20.0;
        let val = match r_map(fin(s_o), fin(total - s_o)).map_err(rerr("rescaling"))? {
            ExtReal::Finite(x) => x,
            ExtReal::Infinity => f64::INFINITY,
        };
        if !(val > last) {
            return broken(
                "rescaling is strictly monotone on a constraint line",
                format!("total = {total}, step = {step}"),
            );
        }
        last = val;
    }
    Ok(())
}

type WconsErr = crate::wcons::WconsError;

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(count: u64) -> SuiteConfig {
        SuiteConfig { count, ..SuiteConfig::default() }
    }

    #[test]
    fn every_suite_passes_at_desk_scale() {
        for name in SUITES {
            let report = run_suite(name, &cfg(25)).unwrap();
            assert!(report.ok(), "{report}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("forest-axioms", &cfg(10)).unwrap().to_string();
        let b = run_suite("forest-axioms", &cfg(10)).unwrap().to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn w_relations_run_over_every_registered_operad() {
        for operad in [OperadSpec::Terminal, OperadSpec::Sc(1), OperadSpec::Sc(2)] {
            let c = SuiteConfig { count: 10, operad, ..SuiteConfig::default() };
            let report = run_suite("w-relations", &c).unwrap();
            assert!(report.ok(), "{report}");
        }
        let coll = PointedCollection::from_json(
            r#"{"colors":["a","b"],
                "generators":[
                  {"name":"m","root_color":"a","slots":["a","b"],"symmetry":"none"},
                  {"name":"u","root_color":"b","slots":[],"symmetry":"none"}]}"#,
        )
        .unwrap();
        let c = SuiteConfig { count: 10, operad: OperadSpec::Free(coll), ..SuiteConfig::default() };
        let report = run_suite("w-relations", &c).unwrap();
        assert!(report.ok(), "{report}");
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(run_suite("nope", &cfg(1)).is_err());
        assert!(OperadSpec::parse("sc:0").is_err());
        assert!(OperadSpec::parse("mystery").is_err());
        assert!(matches!(OperadSpec::parse("sc:3"), Ok(OperadSpec::Sc(3))));
    }

    #[test]
    fn a_broken_law_is_caught_and_shrunk() {
        // A case that fails whenever the generated young forest is nonempty:
        // claims every young forest has no roots.
        let case = |p: &GenParams, rng: &mut ChaCha8Rng| -> CaseResult {
            let colors = gen_colors(rng);
            let y = gen_young(&colors, p, rng);
            if y.outputs.len() > 0 {
                return broken("emptiness", format!("roots = {}", y.outputs.len()));
            }
            Ok(())
        };
        let mut hits = 0;
        for i in 0..20 {
            if let Some(b) = run_case(&case, case_seed(3, i)) {
                assert_eq!(b.law, "emptiness");
                hits += 1;
            }
        }
        assert!(hits > 0);
    }
}
