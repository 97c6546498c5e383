//! Seeded generators for the property suites: young forests, forests into
//! and out of them, composable chains, weights, edge labels, swiss-cheese
//! shapes with sampled disc data, and deliberately broken configurations.
//!
//! Everything is driven by an explicit `ChaCha8Rng`, so a failing instance
//! is reproducible from its seed alone. Forests are generated by local
//! moves starting from the identity: a split carves a subset of a vertex's
//! slots off into a fresh child, a collapse deletes a unary vertex whose
//! slot matches its color. Both moves preserve validity, and together they
//! reach every forest into a given target.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colored::{ColorSet, ColoredElem, ColoredSet};
use crate::extreal::ExtReal;
use crate::forest::{Corolla, Forest, Head, Tail, YoungForest};
use crate::operad::{Decoration, Operad};
use crate::sc::{sc_colors, DiscDatum, ScElement, ScOperad, COLOR_F, COLOR_FB, COLOR_H, COLOR_HB};
use crate::wcons::EdgeLabeling;
use crate::weight::{root_counts, Weight};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size knobs for the generators. `moves` bounds the number of split and
/// collapse steps applied to an identity forest.
#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    pub max_roots: usize,
    pub max_slots: usize,
    pub moves: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_roots: 3, max_slots: 3, moves: 4 }
    }
}

/// A random young forest over the given colors: up to `max_roots` corollas
/// with up to `max_slots` slots each, colors uniform.
pub fn gen_young(colors: &ColorSet, p: &GenParams, rng: &mut impl Rng) -> YoungForest {
    let palette: Vec<&str> = colors.names.iter().map(String::as_str).collect();
    let mut inputs: Vec<(String, String)> = Vec::new();
    let mut outputs: Vec<(String, String)> = Vec::new();
    let mut structure: Vec<(String, String)> = Vec::new();
    for k in 0..rng.gen_range(0..=p.max_roots) {
        let rid = format!("o{k}");
        outputs.push((rid.clone(), palette.choose(rng).expect("nonempty palette").to_string()));
        for j in 0..rng.gen_range(0..=p.max_slots) {
            let iid = format!("i{k}x{j}");
            inputs.push((iid.clone(), palette.choose(rng).expect("nonempty palette").to_string()));
            structure.push((iid, rid.clone()));
        }
    }
    YoungForest::new(
        ColoredSet::new(colors.clone(), inputs),
        ColoredSet::new(colors.clone(), outputs),
        structure,
    )
}

fn fresh_pair(f: &Forest, counter: &mut usize) -> (String, String) {
    loop {
        let vid = format!("g{counter}");
        let sid = format!("gs{counter}");
        *counter += 1;
        let clash = f.source.outputs.contains(&vid)
            || f.source.inputs.contains(&sid)
            || f.source.outputs.contains(&sid)
            || f.source.inputs.contains(&vid);
        if !clash {
            return (vid, sid);
        }
    }
}

/// Carve `subset` out of vertex `v` into a fresh child of color `child_color`,
/// plugged into a fresh slot of `v` with the same color.
fn apply_split(f: &mut Forest, v: &str, subset: &[String], child_color: &str, counter: &mut usize) {
    let (vid, sid) = fresh_pair(f, counter);
    f.source.outputs.elements.push(ColoredElem { id: vid.clone(), color: child_color.into() });
    f.source.inputs.elements.push(ColoredElem { id: sid.clone(), color: child_color.into() });
    f.source.structure.insert(sid.clone(), v.to_string());
    for s in subset {
        f.source.structure.insert(s.clone(), vid.clone());
    }
    f.attach.insert(Tail::Vertex(vid), Head::Slot(sid));
}

fn split_random(f: &mut Forest, counter: &mut usize, rng: &mut impl Rng) {
    let vertices: Vec<String> = f.source.outputs.ids().map(str::to_string).collect();
    let Some(v) = vertices.choose(rng) else { return };
    let palette = f.source.colors().names.clone();
    let child_color = palette.choose(rng).expect("nonempty palette").clone();
    let subset: Vec<String> = f
        .source
        .fiber(v)
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(str::to_string)
        .collect();
    apply_split(f, v, &subset, &child_color, counter);
}

/// Delete a unary vertex whose single slot has its own color, rerouting
/// whatever sat in the slot to the vertex's old attachment.
fn collapse_random(f: &mut Forest, rng: &mut impl Rng) {
    let candidates: Vec<String> = f
        .source
        .outputs
        .ids()
        .filter(|v| {
            let fiber = f.source.fiber(v);
            fiber.len() == 1
                && f.source.inputs.color_of(fiber[0]) == f.source.outputs.color_of(v)
        })
        .map(str::to_string)
        .collect();
    let Some(v) = candidates.choose(rng) else { return };
    let slot = f.source.fiber(v)[0].to_string();
    let head = f.attach.remove(&Tail::Vertex(v.clone())).expect("vertex is attached");
    let tail = f
        .attach
        .iter()
        .find(|(_, h)| **h == Head::Slot(slot.clone()))
        .map(|(t, _)| t.clone())
        .expect("slot is filled");
    f.attach.insert(tail, head);
    f.source.inputs.elements.retain(|e| e.id != slot);
    f.source.outputs.elements.retain(|e| e.id != *v);
    f.source.structure.remove(&slot);
}

/// A random forest with the given target, built from the identity by
/// splits and collapses.
pub fn gen_forest_into(y: &YoungForest, p: &GenParams, rng: &mut impl Rng) -> Forest {
    let mut f = Forest::identity(y);
    let mut counter = 0;
    for _ in 0..rng.gen_range(0..=p.moves) {
        if rng.gen_bool(0.7) {
            split_random(&mut f, &mut counter, rng);
        } else {
            collapse_random(&mut f, rng);
        }
        debug_assert_eq!(f.validate(), Ok(()));
    }
    f
}

/// A random forest with the given source: the roots of `y` are grouped into
/// trees by plugging each, in a shuffled order, either into a color-matching
/// open slot of an earlier vertex or under a fresh target root.
pub fn gen_forest_from(y: &YoungForest, rng: &mut impl Rng) -> Forest {
    let mut order: Vec<String> = y.outputs.ids().map(str::to_string).collect();
    order.shuffle(rng);
    let mut attach: BTreeMap<Tail, Head> = BTreeMap::new();
    let mut open: Vec<String> = Vec::new();
    let mut tree_roots: Vec<String> = Vec::new();
    for v in order {
        let c = y.outputs.color_of(&v).expect("vertex has a color");
        let fits: Vec<String> = open
            .iter()
            .filter(|s| y.inputs.color_of(s) == Some(c))
            .cloned()
            .collect();
        match fits.choose(rng) {
            Some(s) if rng.gen_bool(0.6) => {
                open.retain(|x| x != s);
                attach.insert(Tail::Vertex(v.clone()), Head::Slot(s.clone()));
            }
            _ => tree_roots.push(v.clone()),
        }
        open.extend(y.fiber(&v).into_iter().map(str::to_string));
    }

    let mut outputs: Vec<(String, String)> = Vec::new();
    for (k, v) in tree_roots.iter().enumerate() {
        let rid = format!("zr{k}");
        outputs.push((rid.clone(), y.outputs.color_of(v).expect("color").to_string()));
        attach.insert(Tail::Vertex(v.clone()), Head::Root(rid));
    }
    let mut inputs: Vec<(String, String)> = Vec::new();
    let mut structure: Vec<(String, String)> = Vec::new();
    let leftover: Vec<String> = y
        .inputs
        .ids()
        .filter(|s| open.contains(&s.to_string()))
        .map(str::to_string)
        .collect();
    for (n, s) in leftover.iter().enumerate() {
        let iid = format!("zi{n}");
        inputs.push((iid.clone(), y.inputs.color_of(s).expect("color").to_string()));
        structure.push((iid.clone(), chase_root(y, &attach, s)));
        attach.insert(Tail::Input(iid), Head::Slot(s.clone()));
    }
    let colors = y.colors().clone();
    let target = YoungForest::new(
        ColoredSet::new(colors.clone(), inputs),
        ColoredSet::new(colors, outputs),
        structure,
    );
    let f = Forest { source: y.clone(), target, attach };
    debug_assert_eq!(f.validate(), Ok(()));
    f
}

fn chase_root(y: &YoungForest, attach: &BTreeMap<Tail, Head>, slot: &str) -> String {
    let mut s = slot.to_string();
    loop {
        let holder = y.structure[&s].clone();
        match &attach[&Tail::Vertex(holder)] {
            Head::Root(r) => return r.clone(),
            Head::Slot(next) => s = next.clone(),
        }
    }
}

/// A composable chain `(f, g, h)` with `f: y -> z`, `g: x -> y`, `h: w -> x`.
pub fn gen_triple(colors: &ColorSet, p: &GenParams, rng: &mut impl Rng) -> (Forest, Forest, Forest) {
    let z = gen_young(colors, p, rng);
    let f = gen_forest_into(&z, p, rng);
    let g = gen_forest_into(&f.source, p, rng);
    let h = gen_forest_into(&g.source, p, rng);
    (f, g, h)
}

/// A small random palette, for suites that draw their own color sets.
pub fn gen_colors(rng: &mut impl Rng) -> ColorSet {
    let names = ["ca", "cb", "cc"];
    ColorSet::new(names[..rng.gen_range(1..=names.len())].to_vec())
}

/// The smallest target weight closing `wx` over `f`, plus per-root slack.
pub fn gen_weight_above(f: &Forest, wx: &Weight, slack: u64, rng: &mut impl Rng) -> Weight {
    let counts = root_counts(f).expect("generated forest is valid");
    f.target
        .outputs
        .ids()
        .map(|j| {
            let interior: u64 = counts.vertices[j].iter().map(|v| wx[v]).sum();
            let min = counts.internal_at(j) as u64 + interior;
            (j.to_string(), min + rng.gen_range(0..=slack))
        })
        .collect()
}

/// Source and target weights making `f` a weighted forest: random source
/// weights, target weights at the forced lower bound plus random slack.
pub fn gen_weight_pair(f: &Forest, rng: &mut impl Rng) -> (Weight, Weight) {
    let wx: Weight =
        f.source.outputs.ids().map(|v| (v.to_string(), rng.gen_range(0..=2))).collect();
    let wy = gen_weight_above(f, &wx, 2, rng);
    (wx, wy)
}

/// An edge length from the dyadic grid `k/64`, `k <= 512`, with mass on the
/// two endpoints `0` and `∞`.
pub fn gen_label(rng: &mut impl Rng) -> ExtReal {
    let u: f64 = rng.gen();
    if u < 0.15 {
        ExtReal::ZERO
    } else if u < 0.30 {
        ExtReal::INF
    } else {
        ExtReal::finite(rng.gen_range(1..=512) as f64 / 64.0).expect("grid value")
    }
}

/// Labels for every internal edge of `f`.
pub fn gen_labeling(f: &Forest, rng: &mut impl Rng) -> EdgeLabeling {
    f.internal_edge_ids().into_iter().map(|e| (e, gen_label(rng))).collect()
}

/// One sampled point per root of `x`.
pub fn gen_decoration<O: Operad>(
    op: &O,
    x: &YoungForest,
    rng: &mut dyn RngCore,
) -> Decoration<O::Point> {
    x.outputs
        .ids()
        .map(|j| (j.to_string(), op.sample_point(&x.corolla(j).expect("root exists"), rng)))
        .collect()
}

/// A random legal swiss-cheese young forest in dimension `d`. Half-disc
/// roots carry up to two discs, up to two half-discs (one when `d = 1`) and
/// at most one marked point; disc roots carry discs only.
pub fn gen_sc_young(d: usize, p: &GenParams, rng: &mut impl Rng) -> YoungForest {
    let mut inputs: Vec<(String, String)> = Vec::new();
    let mut outputs: Vec<(String, String)> = Vec::new();
    let mut structure: Vec<(String, String)> = Vec::new();
    for k in 0..rng.gen_range(1..=p.max_roots.max(1)) {
        let rid = format!("o{k}");
        let kind = rng.gen_range(0..100);
        let mut slots: Vec<(String, String)> = Vec::new();
        if kind < 35 {
            outputs.push((rid.clone(), COLOR_F.to_string()));
            for j in 0..rng.gen_range(0..=p.max_slots) {
                slots.push((format!("i{k}x{j}"), COLOR_F.to_string()));
            }
        } else if kind < 85 {
            outputs.push((rid.clone(), COLOR_H.to_string()));
            let nf = rng.gen_range(0..=2);
            let nh = if d == 1 { rng.gen_range(0..=1) } else { rng.gen_range(0..=2) };
            for j in 0..nf {
                slots.push((format!("i{k}x{j}"), COLOR_F.to_string()));
            }
            for j in 0..nh {
                slots.push((format!("i{k}h{j}"), COLOR_H.to_string()));
            }
            match rng.gen_range(0..3) {
                0 => slots.push((format!("i{k}b"), COLOR_FB.to_string())),
                // A half-disc of R^1 covers the boundary point, so a marked
                // boundary point next to one has nowhere to go.
                1 if !(d == 1 && nh > 0) => {
                    slots.push((format!("i{k}b"), COLOR_HB.to_string()))
                }
                _ => {}
            }
            slots.shuffle(rng);
        } else {
            outputs.push((rid.clone(), COLOR_HB.to_string()));
            slots.push((format!("i{k}b"), COLOR_FB.to_string()));
        }
        for (iid, c) in slots {
            inputs.push((iid.clone(), c));
            structure.push((iid, rid.clone()));
        }
    }
    YoungForest::new(
        ColoredSet::new(sc_colors(), inputs),
        ColoredSet::new(sc_colors(), outputs),
        structure,
    )
}

/// One legal split of a swiss-cheese vertex, if any applies: disc vertices
/// spawn disc children, half-disc vertices spawn disc, half-disc or
/// collapsed half-disc children subject to the color rules (and, when
/// `d = 1`, to the one-half-disc-per-vertex rule).
fn sc_split(f: &mut Forest, d: usize, counter: &mut usize, rng: &mut impl Rng) {
    let vertices: Vec<String> = f.source.outputs.ids().map(str::to_string).collect();
    let Some(v) = vertices.choose(rng) else { return };
    let vcolor = f.source.outputs.color_of(v).expect("vertex has a color").to_string();
    let fiber: Vec<(String, String)> = f
        .source
        .fiber(v)
        .into_iter()
        .map(|s| (s.to_string(), f.source.inputs.color_of(s).expect("color").to_string()))
        .collect();
    let mut options: Vec<(String, Vec<String>)> = Vec::new();
    match vcolor.as_str() {
        COLOR_F => {
            let subset: Vec<String> = fiber
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .map(|(s, _)| s.clone())
                .collect();
            options.push((COLOR_F.to_string(), subset));
        }
        COLOR_H => {
            let has_h = fiber.iter().any(|(_, c)| c == COLOR_H);
            let hb = fiber.iter().find(|(_, c)| c == COLOR_HB);
            let f_subset: Vec<String> = fiber
                .iter()
                .filter(|(_, c)| c == COLOR_F)
                .filter(|_| rng.gen_bool(0.5))
                .map(|(s, _)| s.clone())
                .collect();
            options.push((COLOR_F.to_string(), f_subset));
            if d >= 2 {
                let h_subset: Vec<String> = fiber
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .map(|(s, _)| s.clone())
                    .collect();
                options.push((COLOR_H.to_string(), h_subset));
            } else if hb.is_none() {
                // The fresh slot is the vertex's new half-disc; in the line,
                // every old half-disc must move into the child.
                let h_subset: Vec<String> = fiber
                    .iter()
                    .filter(|(_, c)| c == COLOR_H || rng.gen_bool(0.5))
                    .map(|(s, _)| s.clone())
                    .collect();
                options.push((COLOR_H.to_string(), h_subset));
            } else if !has_h {
                // A marked boundary point cannot stay behind next to the
                // fresh half-disc, so it moves into the child.
                let h_subset: Vec<String> = fiber
                    .iter()
                    .filter(|(_, c)| c == COLOR_HB || (c == COLOR_F && rng.gen_bool(0.5)))
                    .map(|(s, _)| s.clone())
                    .collect();
                options.push((COLOR_H.to_string(), h_subset));
            }
            if let Some((s, _)) = fiber.iter().find(|(_, c)| c == COLOR_FB) {
                if d >= 2 || !has_h {
                    options.push((COLOR_HB.to_string(), vec![s.clone()]));
                }
            }
        }
        _ => {}
    }
    if let Some((child_color, subset)) = options.choose(rng) {
        apply_split(f, v, subset, child_color, counter);
    }
}

/// A random forest between legal swiss-cheese shapes with the given target.
pub fn gen_sc_forest_into(y: &YoungForest, d: usize, moves: usize, rng: &mut impl Rng) -> Forest {
    let mut f = Forest::identity(y);
    let mut counter = 0;
    for _ in 0..rng.gen_range(0..=moves) {
        if rng.gen_bool(0.75) {
            sc_split(&mut f, d, &mut counter, rng);
        } else {
            collapse_random(&mut f, rng);
        }
        debug_assert_eq!(f.validate(), Ok(()));
    }
    f
}

/// Sampled disc data on a given legal shape.
pub fn gen_sc_data(shape: &YoungForest, d: usize, rng: &mut impl Rng) -> ScElement {
    let op = ScOperad::new(d);
    let data = shape
        .outputs
        .ids()
        .map(|j| (j.to_string(), op.sample_point(&shape.corolla(j).expect("root"), rng)))
        .collect();
    ScElement { d, shape: shape.clone(), data }
}

/// A valid random configuration: legal shape plus sampled disc data.
pub fn gen_sc_element(d: usize, p: &GenParams, rng: &mut impl Rng) -> ScElement {
    let shape = gen_sc_young(d, p, rng);
    gen_sc_data(&shape, d, rng)
}

/// A random forest whose source corollas all match one of the given
/// profiles, for operads that can only decorate those shapes (free operads
/// sample points on generator corollas). Each tree stacks profile corollas
/// under a fresh target root; unfilled slots become target inputs, and a
/// tree may degenerate to a bare unit edge.
pub fn gen_profile_forest(
    colors: &ColorSet,
    profiles: &[Corolla],
    p: &GenParams,
    rng: &mut impl Rng,
) -> Forest {
    let mut src_inputs: Vec<(String, String)> = Vec::new();
    let mut src_outputs: Vec<(String, String)> = Vec::new();
    let mut src_structure: Vec<(String, String)> = Vec::new();
    let mut tgt_inputs: Vec<(String, String)> = Vec::new();
    let mut tgt_outputs: Vec<(String, String)> = Vec::new();
    let mut tgt_structure: Vec<(String, String)> = Vec::new();
    let mut attach: BTreeMap<Tail, Head> = BTreeMap::new();
    let mut vc = 0usize;
    let mut ic = 0usize;

    let mut place = |profile: &Corolla,
                     src_inputs: &mut Vec<(String, String)>,
                     src_outputs: &mut Vec<(String, String)>,
                     src_structure: &mut Vec<(String, String)>|
     -> (String, Vec<(String, String)>) {
        let vid = format!("v{vc}");
        vc += 1;
        src_outputs.push((vid.clone(), profile.root_color.clone()));
        let mut slots = Vec::new();
        for (i, s) in profile.slots.iter().enumerate() {
            let sid = format!("{vid}s{i}");
            src_inputs.push((sid.clone(), s.color.clone()));
            src_structure.push((sid.clone(), vid.clone()));
            slots.push((sid, s.color.clone()));
        }
        (vid, slots)
    };

    for t in 0..rng.gen_range(1..=p.max_roots.max(1)) {
        let rid = format!("zr{t}");
        let unit_edge = profiles.is_empty() || rng.gen_bool(0.15);
        if unit_edge {
            let c = colors.names.choose(rng).expect("nonempty colors").clone();
            let iid = format!("zi{ic}");
            ic += 1;
            tgt_inputs.push((iid.clone(), c.clone()));
            tgt_outputs.push((rid.clone(), c));
            tgt_structure.push((iid.clone(), rid.clone()));
            attach.insert(Tail::Input(iid), Head::Root(rid));
            continue;
        }
        let root_profile = profiles.choose(rng).expect("profiles nonempty");
        let (vid, slots) = place(root_profile, &mut src_inputs, &mut src_outputs, &mut src_structure);
        tgt_outputs.push((rid.clone(), root_profile.root_color.clone()));
        attach.insert(Tail::Vertex(vid), Head::Root(rid.clone()));
        let mut open = slots;
        for _ in 0..rng.gen_range(0..=p.moves) {
            let fits: Vec<(usize, usize)> = open
                .iter()
                .enumerate()
                .flat_map(|(si, (_, c))| {
                    profiles
                        .iter()
                        .enumerate()
                        .filter(move |(_, pr)| pr.root_color == *c)
                        .map(move |(pi, _)| (si, pi))
                })
                .collect();
            let Some((si, pi)) = fits.choose(rng).copied() else { break };
            let (sid, _) = open.remove(si);
            let (cid, child_slots) =
                place(&profiles[pi], &mut src_inputs, &mut src_outputs, &mut src_structure);
            attach.insert(Tail::Vertex(cid), Head::Slot(sid));
            open.extend(child_slots);
        }
        for (sid, c) in open {
            let iid = format!("zi{ic}");
            ic += 1;
            tgt_inputs.push((iid.clone(), c));
            tgt_structure.push((iid.clone(), rid.clone()));
            attach.insert(Tail::Input(iid), Head::Slot(sid));
        }
    }

    let f = Forest {
        source: YoungForest::new(
            ColoredSet::new(colors.clone(), src_inputs),
            ColoredSet::new(colors.clone(), src_outputs),
            src_structure,
        ),
        target: YoungForest::new(
            ColoredSet::new(colors.clone(), tgt_inputs),
            ColoredSet::new(colors.clone(), tgt_outputs),
            tgt_structure,
        ),
        attach,
    };
    debug_assert_eq!(f.validate(), Ok(()));
    f
}

/// A random tree of half-disc vertices under one target root, the shape
/// the grafting objects are built on: every vertex `h`-colored, every leaf
/// `f`- or `h`-colored.
pub fn gen_plain_tree(p: &GenParams, rng: &mut impl Rng) -> Forest {
    let n = rng.gen_range(1..=p.max_roots.max(1) + 1);
    let mut inputs: Vec<(String, String)> = Vec::new();
    let mut outputs: Vec<(String, String)> = Vec::new();
    let mut structure: Vec<(String, String)> = Vec::new();
    let mut attach: BTreeMap<Tail, Head> = BTreeMap::new();
    for k in 0..n {
        let vid = format!("v{k}");
        outputs.push((vid.clone(), COLOR_H.to_string()));
        if k == 0 {
            attach.insert(Tail::Vertex(vid.clone()), Head::Root("rt".into()));
        } else {
            let parent = format!("v{}", rng.gen_range(0..k));
            let sid = format!("c{k}");
            inputs.push((sid.clone(), COLOR_H.to_string()));
            structure.push((sid.clone(), parent));
            attach.insert(Tail::Vertex(vid.clone()), Head::Slot(sid));
        }
        for j in 0..rng.gen_range(0..=p.max_slots.min(2)) {
            inputs.push((format!("q{k}x{j}"), COLOR_F.to_string()));
            structure.push((format!("q{k}x{j}"), vid.clone()));
        }
        if rng.gen_bool(0.35) {
            inputs.push((format!("hl{k}"), COLOR_H.to_string()));
            structure.push((format!("hl{k}"), vid.clone()));
        }
    }
    let mut tgt_inputs: Vec<(String, String)> = Vec::new();
    let mut tgt_structure: Vec<(String, String)> = Vec::new();
    let mut ic = 0;
    for (sid, c) in &inputs {
        if attach.values().any(|h| *h == Head::Slot(sid.clone())) {
            continue;
        }
        let iid = format!("a{ic}");
        ic += 1;
        tgt_inputs.push((iid.clone(), c.clone()));
        tgt_structure.push((iid.clone(), "rt".into()));
        attach.insert(Tail::Input(iid), Head::Slot(sid.clone()));
    }
    let colors = sc_colors();
    let t = Forest {
        source: YoungForest::new(
            ColoredSet::new(colors.clone(), inputs),
            ColoredSet::new(colors.clone(), outputs),
            structure,
        ),
        target: YoungForest::new(
            ColoredSet::new(colors.clone(), tgt_inputs),
            ColoredSet::new(colors, vec![("rt".to_string(), COLOR_H.to_string())]),
            tgt_structure,
        ),
        attach,
    };
    debug_assert_eq!(t.validate(), Ok(()));
    t
}

/// A configuration broken on purpose: one targeted mutation that provably
/// violates an invariant (containment, the boundary plane, radius
/// positivity, disjointness, or vector length).
pub fn gen_mutated_sc(d: usize, p: &GenParams, rng: &mut impl Rng) -> ScElement {
    let mut e = gen_sc_element(d, p, rng);
    while e.data.values().all(Vec::is_empty) {
        e = gen_sc_element(d, p, rng);
    }
    let spots: Vec<(String, usize)> = e
        .data
        .iter()
        .flat_map(|(j, v)| (0..v.len()).map(move |i| (j.clone(), i)))
        .collect();
    let (j, i) = spots.choose(rng).expect("nonempty fiber").clone();
    let datum = &mut e.data.get_mut(&j).expect("fiber")[i];
    match datum {
        DiscDatum::F { r, c } | DiscDatum::H { r, c } => match rng.gen_range(0..4) {
            0 => *r = 2.5,
            1 => *r = -0.25,
            2 => c.push(0.0),
            _ => {
                // Swallow the whole closed half-space: overlaps everything
                // and escapes the unit ball.
                *r = 40.0;
                for x in c.iter_mut() {
                    *x = 0.0;
                }
            }
        },
        DiscDatum::FBullet { q } => match q {
            Some(q) => q.push(0.0),
            None => *q = Some(vec![0.0; d]),
        },
        DiscDatum::HBullet { q } => {
            if d >= 2 && rng.gen_bool(0.5) {
                q[d - 1] = 0.25;
            } else {
                q.clear();
            }
        }
    }
    e
}
