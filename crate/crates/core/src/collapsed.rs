//! The collapsed colors: projection that forgets them, standard shapes,
//! and the little category of trees with one marked-point graft.
//!
//! Forgetting the marked inputs and collapsed roots is a projection from
//! four-colored objects to plain disc/half-disc objects. Going the other
//! way, a tree `t` over a single half-disc root can sprout one marked disc
//! at a vertex or along an edge, with or without a collapsed half-disc
//! vertex in the middle. These grafted trees, together with the forests
//! between them compatible with the projection, form a finite category; the
//! distinguished edge lengths on each object split the cut edge's original
//! length, which is what the `r_map` rescaling consumes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::colored::{ColoredElem, ColoredSet};
use crate::extreal::ExtReal;
use crate::forest::{
    compose, hom_over, transport, wedge, Forest, ForestOpError, Head, Tail, YoungForest, YoungIso,
};
use crate::sc::{sc_colors, ScElement, COLOR_F, COLOR_FB, COLOR_H, COLOR_HB};
use crate::wcons::EdgeLabeling;

#[derive(Debug, Error, PartialEq)]
pub enum CollapsedError {
    #[error("{0}")]
    Invalid(String),
    #[error("forest operation: {0}")]
    Forest(#[from] ForestOpError),
}

fn invalid(msg: impl Into<String>) -> CollapsedError {
    CollapsedError::Invalid(msg.into())
}

pub fn is_collapsed_color(color: &str) -> bool {
    color == COLOR_FB || color == COLOR_HB
}

/// Delete the marked inputs and collapsed roots of a young forest.
pub fn strip_collapsed_young(y: &YoungForest) -> YoungForest {
    let keep_in = |id: &str| !is_collapsed_color(y.inputs.color_of(id).unwrap_or(COLOR_FB));
    let keep_out = |id: &str| !is_collapsed_color(y.outputs.color_of(id).unwrap_or(COLOR_FB));
    YoungForest {
        inputs: y.inputs.restrict(keep_in),
        outputs: y.outputs.restrict(keep_out),
        structure: y
            .structure
            .iter()
            .filter(|(i, j)| keep_in(i) && keep_out(j))
            .map(|(i, j)| (i.clone(), j.clone()))
            .collect(),
    }
}

/// Restrict a forest's attaching bijection to the surviving ids. Color
/// preservation makes the restriction a bijection again whenever the input
/// is a valid forest; the result is validated.
pub fn strip_collapsed_forest(f: &Forest) -> Result<Forest, CollapsedError> {
    let source = strip_collapsed_young(&f.source);
    let target = strip_collapsed_young(&f.target);
    let attach = f
        .attach
        .iter()
        .filter(|(t, _)| match t {
            Tail::Input(i) => target.inputs.contains(i),
            Tail::Vertex(v) => source.outputs.contains(v),
        })
        .map(|(t, h)| (t.clone(), h.clone()))
        .collect();
    let out = Forest { source, target, attach };
    out.validate().map_err(|e| invalid(format!("projection broke the forest: {e}")))?;
    Ok(out)
}

/// Drop the data of marked slots; surviving slots keep their order.
pub fn strip_collapsed_element(e: &ScElement) -> ScElement {
    let shape = strip_collapsed_young(&e.shape);
    let data = shape
        .outputs
        .ids()
        .map(|j| {
            let old_fiber = e.shape.fiber(j);
            let kept = old_fiber
                .iter()
                .zip(e.data.get(j).map(Vec::as_slice).unwrap_or(&[]))
                .filter(|(i, _)| shape.inputs.contains(i))
                .map(|(_, d)| d.clone())
                .collect();
            (j.to_string(), kept)
        })
        .collect();
    ScElement { d: e.d, shape, data }
}

/// Restrict edge lengths to the edges that survive the projection. Every
/// surviving edge must be labeled.
pub fn strip_collapsed_labels(
    f: &Forest,
    t: &EdgeLabeling,
) -> Result<EdgeLabeling, CollapsedError> {
    let pf = strip_collapsed_forest(f)?;
    pf.internal_edge_ids()
        .into_iter()
        .map(|k| {
            let v = t
                .get(&k)
                .copied()
                .ok_or_else(|| invalid(format!("surviving edge {k:?} has no length")))?;
            Ok((k, v))
        })
        .collect()
}

/// The one-root young tree with `k` marked discs, `l` marked half-discs,
/// `n` discs and `m` half-discs under an h-colored root "r". Stripping the
/// marked inputs leaves the `(0,0,n,m)` tree exactly.
pub fn standard_tree(k: usize, l: usize, n: usize, m: usize) -> YoungForest {
    let mut slots: Vec<(String, String)> = Vec::new();
    slots.extend((1..=k).map(|x| (format!("fb{x}"), COLOR_FB.to_string())));
    slots.extend((1..=l).map(|x| (format!("hb{x}"), COLOR_HB.to_string())));
    slots.extend((1..=n).map(|x| (format!("f{x}"), COLOR_F.to_string())));
    slots.extend((1..=m).map(|x| (format!("h{x}"), COLOR_H.to_string())));
    YoungForest::corolla_shape(sc_colors(), "r", COLOR_H, slots)
}

/// The collapsed-root young tree: one h• root holding one marked disc.
pub fn star_tree() -> YoungForest {
    YoungForest::corolla_shape(sc_colors(), "r", COLOR_HB, [("fb1", COLOR_FB)])
}

/// The graft pieces: a bare marked disc (`k = 0`), or a collapsed
/// half-disc vertex holding a marked disc (`k = 1`). Both map into the
/// young tree with one marked-disc input over one root; the root's color
/// (f• or h•) becomes the fresh slot's color when the piece is wedged in.
pub fn sprout(k: u8) -> Forest {
    match k {
        0 => Forest::unit(&sc_colors(), COLOR_FB, "a", "m"),
        1 => {
            let z = YoungForest::corolla_shape(sc_colors(), "g", COLOR_HB, [("b", COLOR_FB)]);
            let w = YoungForest::new(
                ColoredSet::new(sc_colors(), [("a", COLOR_FB)]),
                ColoredSet::new(sc_colors(), [("m", COLOR_HB)]),
                [("a", "m")],
            );
            Forest::new(
                z,
                w,
                [
                    (Tail::Input("a".into()), Head::Slot("b".into())),
                    (Tail::Vertex("g".into()), Head::Root("m".into())),
                ],
            )
        }
        _ => panic!("sprout: k must be 0 or 1"),
    }
}

/// An edge of a tree `t: z -> y`: either the root edge or the edge ending
/// in a named slot of `z` (leaf and internal edges alike).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeSite {
    Root,
    Slot(String),
}

/// Where a graft goes: along an edge (a fresh unary vertex is inserted
/// first) or directly at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GraftSite {
    Edge(EdgeSite),
    Vertex(String),
}

/// Cut the given edge of a tree and put a fresh unary vertex "iv" (with
/// slot "sv") in the middle. Returns the new tree together with the forest
/// that realizes it from the old one by a unit edge at "sv".
pub fn insert_unary(t: &Forest, site: &EdgeSite) -> Result<(Forest, Forest), CollapsedError> {
    let (cut_head, color) = match site {
        EdgeSite::Slot(i) => {
            let c = t
                .source
                .inputs
                .color_of(i)
                .ok_or_else(|| invalid(format!("no slot {i:?}")))?;
            (Head::Slot(i.clone()), c.to_string())
        }
        EdgeSite::Root => {
            let roots: Vec<&str> = t.target.outputs.ids().collect();
            let [r] = roots.as_slice() else {
                return Err(invalid("root-edge insertion needs a single target root"));
            };
            let c = t.target.outputs.color_of(r).expect("root has a color");
            (Head::Root(r.to_string()), c.to_string())
        }
    };
    if t.source.inputs.contains("sv") || t.source.outputs.contains("iv") {
        return Err(invalid("ids \"sv\" and \"iv\" are reserved for the insertion"));
    }
    let tail = t
        .attach
        .iter()
        .find(|(_, h)| **h == cut_head)
        .map(|(tail, _)| tail.clone())
        .ok_or_else(|| invalid("cut edge has no tail; is the forest valid?"))?;

    let mut z = t.source.clone();
    z.inputs.elements.push(ColoredElem { id: "sv".into(), color: color.clone() });
    z.outputs.elements.push(ColoredElem { id: "iv".into(), color });
    z.structure.insert("sv".into(), "iv".into());

    let mut attach = t.attach.clone();
    attach.insert(tail, Head::Slot("sv".into()));
    attach.insert(Tail::Vertex("iv".into()), cut_head);
    let inserted = Forest { source: z.clone(), target: t.target.clone(), attach };
    inserted.validate().map_err(|e| invalid(format!("insertion broke the tree: {e}")))?;

    let mut nu_attach = BTreeMap::new();
    for s in t.source.inputs.ids() {
        nu_attach.insert(Tail::Input(s.to_string()), Head::Slot(s.to_string()));
    }
    nu_attach.insert(Tail::Input("sv".into()), Head::Root("iv".into()));
    for v in t.source.outputs.ids() {
        nu_attach.insert(Tail::Vertex(v.to_string()), Head::Root(v.to_string()));
    }
    let nu = Forest { source: t.source.clone(), target: z, attach: nu_attach };
    nu.validate().map_err(|e| invalid(format!("insertion witness is broken: {e}")))?;
    Ok((inserted, nu))
}

/// The two distinguished halves of a cut internal edge, plus the key of the
/// original edge whose length they must split.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedEdges {
    pub upper: String,
    pub lower: String,
    pub total_key: String,
}

/// A tree with one marked-point graft: the grafted forest `s` over the
/// augmented target, the witness `nu` from the original source to the
/// projected source, and the distinguished internal edges whose lengths
/// are constrained.
#[derive(Debug, Clone)]
pub struct Grafted {
    pub site: GraftSite,
    pub k: u8,
    pub s: Forest,
    pub nu: Forest,
    pub special_edges: BTreeSet<String>,
    /// The collapsed-half-disc edge, present when `k = 1`; its length is
    /// never constrained.
    pub epsilon: Option<String>,
    pub pair: Option<PairedEdges>,
}

fn unprefix_iso(y: &YoungForest) -> YoungIso {
    let strip = |id: &str| id.strip_prefix("L:").unwrap_or(id).to_string();
    YoungIso {
        inputs: y.inputs.ids().map(|i| (i.to_string(), strip(i))).collect(),
        outputs: y.outputs.ids().map(|j| (j.to_string(), strip(j))).collect(),
    }
}

fn require_plain_tree(t: &Forest) -> Result<(), CollapsedError> {
    t.validate().map_err(|e| invalid(e.to_string()))?;
    if t.target.outputs.len() != 1 {
        return Err(invalid("grafting needs a tree over a single root"));
    }
    let all = t
        .source
        .outputs
        .elements
        .iter()
        .chain(t.target.outputs.elements.iter())
        .all(|e| e.color == COLOR_H)
        && t.source
            .inputs
            .elements
            .iter()
            .chain(t.target.inputs.elements.iter())
            .all(|e| e.color == COLOR_F || e.color == COLOR_H);
    if !all {
        return Err(invalid("grafting needs h-colored roots and plain f/h inputs"));
    }
    let reserved = |id: &str| {
        id.starts_with("L:") || id.starts_with("R:") || id.starts_with("W:")
    };
    let ids = t
        .source
        .inputs
        .ids()
        .chain(t.source.outputs.ids())
        .chain(t.target.inputs.ids())
        .chain(t.target.outputs.ids());
    for id in ids {
        if reserved(id) {
            return Err(invalid(format!("id {id:?} uses a prefix reserved for grafting")));
        }
    }
    Ok(())
}

/// Graft a marked point onto `t` at the given site. Along an edge the site
/// must be h-colored and a unary vertex is inserted first; the fresh slot
/// lands on that vertex. The projection of the result recovers the
/// (possibly inserted) tree, which is checked.
pub fn graft(t: &Forest, site: &GraftSite, k: u8) -> Result<Grafted, CollapsedError> {
    require_plain_tree(t)?;
    let (base, nu, host) = match site {
        GraftSite::Vertex(j) => {
            if !t.source.outputs.contains(j) {
                return Err(invalid(format!("no vertex {j:?}")));
            }
            (t.clone(), Forest::identity(&t.source), j.clone())
        }
        GraftSite::Edge(es) => {
            if let EdgeSite::Slot(i) = es {
                if t.source.inputs.color_of(i) != Some(COLOR_H) {
                    return Err(invalid(format!("edge {i:?} is not h-colored")));
                }
            }
            let (inserted, nu) = insert_unary(t, es)?;
            (inserted, nu, "iv".to_string())
        }
    };
    let piece = sprout(k);
    let tau = BTreeMap::from([("m".to_string(), host.clone())]);
    let wedged = wedge(&base, &piece, &tau).map_err(|e| invalid(e.to_string()))?;
    let s = transport(&wedged, &unprefix_iso(&wedged.source), &unprefix_iso(&wedged.target));
    s.validate().map_err(|e| invalid(format!("graft is broken: {e}")))?;
    let projected = strip_collapsed_forest(&s)?;
    if projected != base {
        return Err(invalid("projection does not recover the grafted tree"));
    }

    let internal: BTreeSet<String> = s.internal_edge_ids().into_iter().collect();
    let epsilon = (k == 1).then(|| "R:g".to_string());
    let mut special_edges = BTreeSet::new();
    if let Some(eps) = &epsilon {
        debug_assert!(internal.contains(eps));
        special_edges.insert(eps.clone());
    }
    let mut pair = None;
    if let GraftSite::Edge(es) = site {
        // In the inserted tree the cut edge splits into the half above the
        // fresh vertex (keyed by the cut edge's old tail, when that tail is
        // a vertex) and the half below it (keyed "iv", internal when the
        // cut edge ended in a slot).
        let lower = matches!(es, EdgeSite::Slot(_)).then(|| "iv".to_string());
        let upper = t
            .attach
            .iter()
            .find(|(_, h)| match es {
                EdgeSite::Slot(i) => **h == Head::Slot(i.clone()),
                EdgeSite::Root => matches!(h, Head::Root(_)),
            })
            .and_then(|(tail, _)| match tail {
                Tail::Vertex(u) => Some(u.clone()),
                Tail::Input(_) => None,
            });
        for e in lower.iter().chain(upper.iter()) {
            debug_assert!(internal.contains(e));
            special_edges.insert(e.clone());
        }
        if let (Some(u), Some(l)) = (upper, lower) {
            pair = Some(PairedEdges { upper: u.clone(), lower: l, total_key: u });
        }
    }
    Ok(Grafted { site: site.clone(), k, s, nu, special_edges, epsilon, pair })
}

/// Every graft object of `t`: both sprout kinds at the root edge, at each
/// h-colored slot edge, and at each vertex.
pub fn graft_category(t: &Forest) -> Result<Vec<Grafted>, CollapsedError> {
    let mut sites = vec![GraftSite::Edge(EdgeSite::Root)];
    for i in t.source.inputs.ids() {
        if t.source.inputs.color_of(i) == Some(COLOR_H) {
            sites.push(GraftSite::Edge(EdgeSite::Slot(i.to_string())));
        }
    }
    for j in t.source.outputs.ids() {
        sites.push(GraftSite::Vertex(j.to_string()));
    }
    let mut out = Vec::new();
    for site in &sites {
        for k in [0u8, 1] {
            out.push(graft(t, site, k)?);
        }
    }
    Ok(out)
}

/// Morphisms `a -> b` of grafted trees: forests `mu` with `b.s . mu = a.s`
/// whose projection carries `a.nu` to `b.nu`.
pub fn graft_homs(a: &Grafted, b: &Grafted) -> Result<Vec<Forest>, CollapsedError> {
    let mut out = Vec::new();
    for mu in hom_over(&a.s, &b.s) {
        let pmu = strip_collapsed_forest(&mu)?;
        if compose(&pmu, &a.nu)? == b.nu {
            out.push(mu);
        }
    }
    Ok(out)
}

/// Check a length assignment on the distinguished edges of a graft object:
/// the two halves of a cut internal edge must sum to that edge's original
/// length, the collapsed edge is free, and in the `require_infinite`
/// variant at least one distinguished length is infinite.
pub fn graft_lengths_ok(
    obj: &Grafted,
    s: &EdgeLabeling,
    totals: &EdgeLabeling,
    require_infinite: bool,
) -> Result<bool, CollapsedError> {
    let keys: BTreeSet<String> = s.keys().cloned().collect();
    if keys != obj.special_edges {
        return Err(invalid("lengths must be keyed by exactly the distinguished edges"));
    }
    if let Some(p) = &obj.pair {
        let total = totals
            .get(&p.total_key)
            .ok_or_else(|| invalid(format!("no original length for edge {:?}", p.total_key)))?;
        if s[&p.upper] + s[&p.lower] != *total {
            return Ok(false);
        }
    }
    if require_infinite && !s.values().any(|v| v.is_infinite()) {
        return Ok(false);
    }
    Ok(true)
}

/// The boundary rescaling `(1 - e^{-s_o}) / (1 - e^{-s_i})` on `[0, ∞]`,
/// defined when `s_o + s_i > 0`. Zero iff `s_o = 0`, infinite iff
/// `s_i = 0`, and one on the diagonal.
pub fn r_map(s_o: ExtReal, s_i: ExtReal) -> Result<ExtReal, CollapsedError> {
    if s_o.is_zero() && s_i.is_zero() {
        return Err(invalid("r_map needs s_o + s_i > 0"));
    }
    let num = s_o.one_minus_exp_neg();
    let den = s_i.one_minus_exp_neg();
    if den == 0.0 {
        return Ok(ExtReal::INF);
    }
    Ok(ExtReal::finite(num / den).expect("quotient of [0,1] values"))
}
