//! Points of the W construction: forests with `[0, ∞]`-labeled internal
//! edges and operad-decorated vertices, together with the label maps along
//! composition, reduction to canonical form, equality, and the counit.
//!
//! A point over a young forest `z` is a triple: a shape `g: y -> z`, a
//! length for every internal edge of `g`, and an operad value for every
//! vertex of `y`. Two label maps drive everything:
//!
//! * `w_sigma(g, f, t)` carries labels on `E(g)` to labels on `E(gf)` by
//!   summing over the position map of `g`'s edges inside the composite:
//!   edges contributed by `f` get the empty sum `0`, edges merged through
//!   unit edges of `f` get multi-term sums, and `∞` absorbs.
//! * `w_infty(h, g, t)` extends labels along an outer forest: old edges
//!   keep their labels, edges created by `h` get `∞`.
//!
//! Canonical form contracts `0`-labeled edges (composing decorations along
//! the one-edge contraction) and deletes unary identity-decorated vertices
//! (summing the merged labels via `w_sigma` itself). Equality reduces both
//! sides and searches label- and decoration-preserving isomorphisms over
//! the fixed target.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extreal::ExtReal;
use crate::forest::{
    compose, composite_position, forest_isos_fixing_target, Forest, ForestOpError, Head, Tail,
    YoungForest,
};
use crate::operad::{Decoration, Operad, OperadError};

/// Internal edge id (the source vertex of the edge) -> length.
pub type EdgeLabeling = BTreeMap<String, ExtReal>;

#[derive(Debug, Error, PartialEq)]
pub enum WconsError {
    #[error(transparent)]
    Forest(#[from] ForestOpError),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error("labels do not match the internal edges: {0}")]
    Labels(String),
}

/// Check that a labeling is total on exactly the internal edges of `g`.
pub fn validate_labeling(g: &Forest, t: &EdgeLabeling) -> Result<(), WconsError> {
    let edges = g.internal_edge_ids();
    for e in &edges {
        if !t.contains_key(e) {
            return Err(WconsError::Labels(format!("edge {e:?} unlabeled")));
        }
    }
    if t.len() != edges.len() {
        let extra: Vec<&String> = t.keys().filter(|k| !edges.contains(k)).collect();
        return Err(WconsError::Labels(format!("labels on non-edges {extra:?}")));
    }
    Ok(())
}

/// Push a labeling on `E(g)` down to `E(gf)`: each composite edge collects
/// the labels of the `g`-edges whose position lands in its slot. Edges of
/// the composite that come from `f` collect nothing and read `0`.
pub fn w_sigma(g: &Forest, f: &Forest, t: &EdgeLabeling) -> Result<EdgeLabeling, WconsError> {
    validate_labeling(g, t)?;
    let gf = compose(g, f)?;
    let pos = composite_position(g, f)?;
    let mut out = EdgeLabeling::new();
    for eps in gf.internal_edge_ids() {
        let slot = gf.attach[&Tail::Vertex(eps.clone())].clone();
        let total = ExtReal::sum(
            pos.iter().filter(|(_, h)| **h == slot).map(|(e, _)| t[e]),
        );
        out.insert(eps, total);
    }
    Ok(out)
}

/// Extend a labeling on `E(g)` to `E(hg)`: the inclusion keeps keys, new
/// edges read `∞`.
pub fn w_infty(h: &Forest, g: &Forest, t: &EdgeLabeling) -> Result<EdgeLabeling, WconsError> {
    validate_labeling(g, t)?;
    let hg = compose(h, g)?;
    Ok(hg
        .internal_edge_ids()
        .into_iter()
        .map(|e| {
            let label = t.get(&e).copied().unwrap_or(ExtReal::INF);
            (e, label)
        })
        .collect())
}

/// A point of the W construction over the target of `shape`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WPoint<P> {
    pub shape: Forest,
    pub lengths: EdgeLabeling,
    pub decoration: Decoration<P>,
}

impl<P> WPoint<P> {
    pub fn target(&self) -> &YoungForest {
        &self.shape.target
    }
}

pub fn validate_wpoint<O: Operad>(
    operad: &O,
    p: &WPoint<O::Point>,
) -> Result<(), WconsError> {
    p.shape
        .validate()
        .map_err(|e| WconsError::Forest(ForestOpError::Invalid(e.defect)))?;
    validate_labeling(&p.shape, &p.lengths)?;
    crate::operad::validate_decoration(operad, &p.shape.source, &p.decoration)?;
    Ok(())
}

/// Act on a point by an outer forest `h`: compose shapes, extend labels by
/// `∞`, keep the decoration.
pub fn w_act<P: Clone>(h: &Forest, p: &WPoint<P>) -> Result<WPoint<P>, WconsError> {
    Ok(WPoint {
        shape: compose(h, &p.shape)?,
        lengths: w_infty(h, &p.shape, &p.lengths)?,
        decoration: p.decoration.clone(),
    })
}

/// Forget the lengths: evaluate the decoration along the shape.
pub fn counit<O: Operad>(
    operad: &O,
    p: &WPoint<O::Point>,
) -> Result<Decoration<O::Point>, WconsError> {
    Ok(operad.act(&p.shape, &p.decoration)?)
}

/// Rule order for [`reduce`]: the default pass contracts all `0`-edges
/// before deleting identity vertices; the seeded variant picks applicable
/// rules in pseudorandom order (used to check confluence).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReduceOrder {
    ZeroEdgesFirst,
    Seeded(u64),
}

/// The one-edge contraction forest: `y -> y'` where the vertex `v` of `y`
/// is absorbed into the vertex holding the slot it fills. The target keeps
/// every id of `y` except `v` and the filled slot.
fn contraction_forest(y: &YoungForest, v: &str, slot: &str) -> Forest {
    let w = y.structure[slot].clone();
    let target = YoungForest {
        inputs: y.inputs.restrict(|i| i != slot),
        outputs: y.outputs.restrict(|j| j != v),
        structure: y
            .structure
            .iter()
            .filter(|(i, _)| i.as_str() != slot)
            .map(|(i, j)| {
                let j = if j == v { w.clone() } else { j.clone() };
                (i.clone(), j)
            })
            .collect(),
    };
    let mut attach = BTreeMap::new();
    for i in target.inputs.ids() {
        attach.insert(Tail::Input(i.to_string()), Head::Slot(i.to_string()));
    }
    for u in y.outputs.ids() {
        if u == v {
            attach.insert(Tail::Vertex(u.to_string()), Head::Slot(slot.to_string()));
        } else {
            attach.insert(Tail::Vertex(u.to_string()), Head::Root(u.to_string()));
        }
    }
    Forest { source: y.clone(), target, attach }
}

/// The unit-insertion forest: `y' -> y` where `y'` is `y` without the
/// unary vertex `v`, and `v`'s corolla is realized by a unit edge.
fn unit_insertion_forest(y: &YoungForest, v: &str, slot: &str) -> Forest {
    let source = YoungForest {
        inputs: y.inputs.restrict(|i| i != slot),
        outputs: y.outputs.restrict(|j| j != v),
        structure: y
            .structure
            .iter()
            .filter(|(i, _)| i.as_str() != slot)
            .map(|(i, j)| (i.clone(), j.clone()))
            .collect(),
    };
    let mut attach = BTreeMap::new();
    for i in y.inputs.ids() {
        if i == slot {
            attach.insert(Tail::Input(i.to_string()), Head::Root(v.to_string()));
        } else {
            attach.insert(Tail::Input(i.to_string()), Head::Slot(i.to_string()));
        }
    }
    for u in source.outputs.ids() {
        attach.insert(Tail::Vertex(u.to_string()), Head::Root(u.to_string()));
    }
    Forest { source, target: y.clone(), attach }
}

fn applicable_steps<O: Operad>(
    operad: &O,
    p: &WPoint<O::Point>,
    tol: f64,
) -> (Vec<String>, Vec<String>) {
    let zeros: Vec<String> = p
        .lengths
        .iter()
        .filter(|(_, t)| t.is_zero())
        .map(|(e, _)| e.clone())
        .collect();
    let identities: Vec<String> = p
        .shape
        .source
        .outputs
        .ids()
        .filter(|v| {
            let corolla = p.shape.source.corolla(v).expect("root exists");
            corolla.is_unary_same_color()
                && operad.is_identity(&corolla, &p.decoration[*v], tol)
        })
        .map(str::to_string)
        .collect();
    (zeros, identities)
}

fn contract_zero_edge<O: Operad>(
    operad: &O,
    p: &WPoint<O::Point>,
    edge: &str,
) -> Result<WPoint<O::Point>, WconsError> {
    let Head::Slot(slot) = p.shape.attach[&Tail::Vertex(edge.to_string())].clone() else {
        return Err(WconsError::Labels(format!("{edge:?} is not an internal edge")));
    };
    let c = contraction_forest(&p.shape.source, edge, &slot);
    let mut shape = p.shape.clone();
    shape.source = c.target.clone();
    shape.attach.remove(&Tail::Vertex(edge.to_string()));
    let mut lengths = p.lengths.clone();
    lengths.remove(edge);
    let decoration = operad.act(&c, &p.decoration)?;
    Ok(WPoint { shape, lengths, decoration })
}

fn delete_identity_vertex<P: Clone>(
    p: &WPoint<P>,
    vertex: &str,
) -> Result<WPoint<P>, WconsError> {
    let slot = p
        .shape
        .source
        .fiber(vertex)
        .first()
        .map(|s| s.to_string())
        .expect("unary vertex has a slot");
    let u = unit_insertion_forest(&p.shape.source, vertex, &slot);
    let shape = compose(&p.shape, &u)?;
    let lengths = w_sigma(&p.shape, &u, &p.lengths)?;
    let mut decoration = p.decoration.clone();
    decoration.remove(vertex);
    Ok(WPoint { shape, lengths, decoration })
}

/// Reduce a point to canonical form: no `0`-labeled internal edge, no
/// unary identity-decorated vertex. Terminates because each rule removes a
/// vertex; the result is independent of rule order up to [`w_equal`].
pub fn reduce<O: Operad>(
    operad: &O,
    p: &WPoint<O::Point>,
    tol: f64,
    order: ReduceOrder,
) -> Result<WPoint<O::Point>, WconsError> {
    let mut rng = match order {
        ReduceOrder::ZeroEdgesFirst => None,
        ReduceOrder::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut cur = p.clone();
    loop {
        let (zeros, identities) = applicable_steps(operad, &cur, tol);
        let step = match &mut rng {
            None => zeros
                .first()
                .map(|e| (true, e.clone()))
                .or_else(|| identities.first().map(|v| (false, v.clone()))),
            Some(rng) => {
                let mut moves: Vec<(bool, String)> =
                    zeros.iter().map(|e| (true, e.clone())).collect();
                moves.extend(identities.iter().map(|v| (false, v.clone())));
                moves.choose(rng).cloned()
            }
        };
        match step {
            None => return Ok(cur),
            Some((true, edge)) => cur = contract_zero_edge(operad, &cur, &edge)?,
            Some((false, vertex)) => cur = delete_identity_vertex(&cur, &vertex)?,
        }
    }
}

/// The relabeling forest induced by a young iso: one vertex per root, each
/// input of `to` landing in its iso-preimage slot. The target is the
/// literal destination young forest, not a rename of `from`: the two agree
/// as sets but can order their inputs differently, and per-slot positional
/// data acted along the forest must line up with decorations of `to`.
fn relabeling_forest(
    from: &YoungForest,
    to: &YoungForest,
    iso: &crate::forest::YoungIso,
) -> Forest {
    let inverse_inputs: BTreeMap<&String, &String> =
        iso.inputs.iter().map(|(a, b)| (b, a)).collect();
    let mut attach = BTreeMap::new();
    for i in to.inputs.ids() {
        attach.insert(
            Tail::Input(i.to_string()),
            Head::Slot(inverse_inputs[&i.to_string()].clone()),
        );
    }
    for v in from.outputs.ids() {
        attach.insert(Tail::Vertex(v.to_string()), Head::Root(iso.outputs[v].clone()));
    }
    Forest { source: from.clone(), target: to.clone(), attach }
}

/// Equality in the coend: reduce both points, then look for an isomorphism
/// of shapes over the strictly shared target that matches labels exactly
/// and decorations up to the operad's tolerance.
pub fn w_equal<O: Operad>(
    operad: &O,
    p: &WPoint<O::Point>,
    q: &WPoint<O::Point>,
    tol: f64,
) -> Result<bool, WconsError> {
    if p.shape.target != q.shape.target {
        return Ok(false);
    }
    let p = reduce(operad, p, tol, ReduceOrder::ZeroEdgesFirst)?;
    let q = reduce(operad, q, tol, ReduceOrder::ZeroEdgesFirst)?;
    for iso in forest_isos_fixing_target(&p.shape, &q.shape) {
        let labels_match = p
            .lengths
            .iter()
            .all(|(e, t)| q.lengths.get(&iso.outputs[e]) == Some(t));
        if !labels_match {
            continue;
        }
        let rho = relabeling_forest(&p.shape.source, &q.shape.source, &iso);
        let transported = operad.act(&rho, &p.decoration)?;
        if crate::operad::decorations_equal(operad, &transported, &q.decoration, tol) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Membership in the boundary part at filtration `k+1`: either the shape
/// has at most `k` internal edges, or some label is `0` or `∞`, or some
/// vertex decoration is an identity.
pub fn in_boundary_plus<O: Operad>(
    operad: &O,
    p: &WPoint<O::Point>,
    k: usize,
    tol: f64,
) -> bool {
    if p.lengths.len() <= k {
        return true;
    }
    if p.lengths.values().any(|t| t.is_zero() || t.is_infinite()) {
        return true;
    }
    p.shape.source.outputs.ids().any(|v| {
        let corolla = p.shape.source.corolla(v).expect("root exists");
        corolla.is_unary_same_color() && operad.is_identity(&corolla, &p.decoration[v], tol)
    })
}

/// For every vertex, the number of finitely-labeled internal edges in its
/// weak subtree (the edges strictly below it, following parents upward).
pub fn subtree_finite_edge_counts<P>(p: &WPoint<P>) -> BTreeMap<String, usize> {
    let g = &p.shape;
    let parent = |u: &str| -> Option<String> {
        match &g.attach[&Tail::Vertex(u.to_string())] {
            Head::Slot(s) => Some(g.source.structure[s].clone()),
            Head::Root(_) => None,
        }
    };
    let mut counts: BTreeMap<String, usize> =
        g.source.outputs.ids().map(|v| (v.to_string(), 0)).collect();
    for (e, t) in &p.lengths {
        if t.is_infinite() {
            continue;
        }
        // The edge from e to its parent counts for the parent and every
        // vertex above it.
        let mut cur = parent(e);
        while let Some(v) = cur {
            *counts.get_mut(&v).expect("vertex") += 1;
            cur = parent(&v);
        }
    }
    counts
}

/// All vertex subtree weights bounded by `k`.
pub fn within_weight_filtration<P>(p: &WPoint<P>, k: usize) -> bool {
    subtree_finite_edge_counts(p).values().all(|c| *c <= k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored::{ColorSet, ColoredSet};
    use crate::forest::fixtures::*;
    use crate::forest::Corolla;
    use crate::operad::TerminalOperad;
    use rand::RngCore;

    fn terminal() -> TerminalOperad {
        TerminalOperad { colors: one_color() }
    }

    fn labels(entries: &[(&str, ExtReal)]) -> EdgeLabeling {
        entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn fin(x: f64) -> ExtReal {
        ExtReal::finite(x).unwrap()
    }

    #[test]
    fn sigma_gives_new_edges_the_empty_sum() {
        // E(g) is empty and E(gf) = {u}: the label is the empty sum 0.
        let t = w_sigma(&forest_g(), &forest_f(), &EdgeLabeling::new()).unwrap();
        assert_eq!(t, labels(&[("u", ExtReal::ZERO)]));
    }

    #[test]
    fn sigma_along_the_identity_is_the_identity() {
        let f = forest_f();
        let t = labels(&[("u", fin(3.0))]);
        let out = w_sigma(&f, &Forest::identity(&f.source), &t).unwrap();
        assert_eq!(out, t);
    }

    /// A chain of three unary corollas c1 <- c2 <- c3 over one root, and
    /// the forest deleting the middle vertex.
    fn chain_and_middle_deletion() -> (Forest, Forest) {
        let colors = one_color();
        let y = YoungForest::new(
            ColoredSet::new(colors.clone(), [("s1", "a"), ("s2", "a"), ("s3", "a")]),
            ColoredSet::new(colors.clone(), [("c1", "a"), ("c2", "a"), ("c3", "a")]),
            [("s1", "c1"), ("s2", "c2"), ("s3", "c3")],
        );
        let z = YoungForest::corolla_shape(colors.clone(), "R", "a", [("A", "a")]);
        let g = Forest::new(
            y.clone(),
            z,
            [
                (Tail::Input("A".into()), Head::Slot("s3".into())),
                (Tail::Vertex("c3".into()), Head::Slot("s2".into())),
                (Tail::Vertex("c2".into()), Head::Slot("s1".into())),
                (Tail::Vertex("c1".into()), Head::Root("R".into())),
            ],
        );
        let x = YoungForest::new(
            ColoredSet::new(colors.clone(), [("w1", "a"), ("w3", "a")]),
            ColoredSet::new(colors, [("d1", "a"), ("d3", "a")]),
            [("w1", "d1"), ("w3", "d3")],
        );
        let f = Forest::new(
            x,
            y,
            [
                (Tail::Input("s1".into()), Head::Slot("w1".into())),
                (Tail::Input("s2".into()), Head::Root("c2".into())),
                (Tail::Input("s3".into()), Head::Slot("w3".into())),
                (Tail::Vertex("d1".into()), Head::Root("c1".into())),
                (Tail::Vertex("d3".into()), Head::Root("c3".into())),
            ],
        );
        assert_eq!(g.validate(), Ok(()));
        assert_eq!(f.validate(), Ok(()));
        (g, f)
    }

    #[test]
    fn sigma_merges_labels_through_a_deleted_unary_vertex() {
        let (g, f) = chain_and_middle_deletion();
        let t = labels(&[("c3", fin(2.0)), ("c2", fin(5.0))]);
        assert_eq!(w_sigma(&g, &f, &t).unwrap(), labels(&[("d3", fin(7.0))]));
        let t = labels(&[("c3", fin(2.0)), ("c2", ExtReal::INF)]);
        assert_eq!(w_sigma(&g, &f, &t).unwrap(), labels(&[("d3", ExtReal::INF)]));
    }

    #[test]
    fn infty_extends_by_infinity_on_new_edges_only() {
        // Identity-ish case: composing the running pair creates no edges
        // beyond E(f), so the labeling is untouched.
        let t = labels(&[("u", fin(3.0))]);
        assert_eq!(w_infty(&forest_g(), &forest_f(), &t).unwrap(), t);
        // The chain case: hg has edges {c3, c2} while g = id has none ...
        // use h = chain forest with g its identity.
        let (h, _) = chain_and_middle_deletion();
        let idy = Forest::identity(&h.source);
        let out = w_infty(&h, &idy, &EdgeLabeling::new()).unwrap();
        assert_eq!(out, labels(&[("c2", ExtReal::INF), ("c3", ExtReal::INF)]));
        // h = id is the identity on labelings.
        let f = forest_f();
        let t = labels(&[("u", fin(3.0))]);
        assert_eq!(w_infty(&Forest::identity(&f.target), &f, &t).unwrap(), t);
    }

    #[test]
    fn square_of_sigma_and_infty_commutes_on_the_running_triple() {
        let f = forest_f();
        let g = forest_g();
        let (h_big, _) = chain_and_middle_deletion();
        // Need h composable after g: z is a corolla on R with inputs a,b,c;
        // h_big's source is the chain over 3 roots. Build a simple h
        // relabeling z into a bigger corolla instead.
        let colors = one_color();
        let w = YoungForest::corolla_shape(colors, "W", "a", [("A", "a"), ("B", "a"), ("C", "a")]);
        let h = Forest::new(
            young_z(),
            w,
            [
                (Tail::Input("A".into()), Head::Slot("a".into())),
                (Tail::Input("B".into()), Head::Slot("b".into())),
                (Tail::Input("C".into()), Head::Slot("c".into())),
                (Tail::Vertex("R".into()), Head::Root("W".into())),
            ],
        );
        assert_eq!(h.validate(), Ok(()));
        let _ = h_big;
        let t = EdgeLabeling::new();
        let gf = compose(&g, &f).unwrap();
        let hg = compose(&h, &g).unwrap();
        let left = w_infty(&h, &gf, &w_sigma(&g, &f, &t).unwrap()).unwrap();
        let right = w_sigma(&hg, &f, &w_infty(&h, &g, &t).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn contracting_a_zero_edge_composes_the_vertices() {
        let o = terminal();
        let f = forest_f();
        let p = WPoint {
            shape: f.clone(),
            lengths: labels(&[("u", ExtReal::ZERO)]),
            decoration: Decoration::from([("u".to_string(), ()), ("v".to_string(), ())]),
        };
        let out = reduce(&o, &p, 0.0, ReduceOrder::ZeroEdgesFirst).unwrap();
        assert_eq!(out.shape.validate(), Ok(()));
        assert!(out.lengths.is_empty());
        // One merged vertex remains, keeping the absorber's id.
        assert_eq!(out.shape.source.outputs.ids().collect::<Vec<_>>(), vec!["v"]);
        assert_eq!(out.shape.source.inputs.len(), 3);
        assert_eq!(out.decoration.len(), 1);
    }

    /// A two-valued operad used to pin down identity deletion: a point is
    /// a tag, the unit is "id", and action concatenates the non-unit tags
    /// found over each target root.
    #[derive(Debug, Clone)]
    struct TagOperad {
        colors: ColorSet,
    }

    impl Operad for TagOperad {
        type Point = String;

        fn color_set(&self) -> &ColorSet {
            &self.colors
        }

        fn validate_point(&self, _c: &Corolla, _p: &String) -> Result<(), OperadError> {
            Ok(())
        }

        fn act(
            &self,
            f: &Forest,
            dec: &Decoration<String>,
        ) -> Result<Decoration<String>, OperadError> {
            crate::operad::validate_decoration(self, &f.source, dec)?;
            let rm = f.root_map().map_err(|e| OperadError::InvalidForest(e.to_string()))?;
            let mut grouped: BTreeMap<String, Vec<String>> =
                f.target.outputs.ids().map(|j| (j.to_string(), Vec::new())).collect();
            for v in f.source.outputs.ids() {
                let tag = &dec[v];
                if tag != "id" {
                    let root = rm[&crate::forest::ForestElem::Vertex(v.to_string())].clone();
                    grouped.get_mut(&root).expect("root").push(tag.clone());
                }
            }
            Ok(grouped
                .into_iter()
                .map(|(j, mut tags)| {
                    tags.sort();
                    let val = if tags.is_empty() { "id".to_string() } else { tags.join(".") };
                    (j, val)
                })
                .collect())
        }

        fn identity(&self, _color: &str) -> Result<String, OperadError> {
            Ok("id".to_string())
        }

        fn is_identity(&self, corolla: &Corolla, p: &String, _tol: f64) -> bool {
            corolla.is_unary_same_color() && p == "id"
        }

        fn points_equal(&self, a: &String, b: &String, _tol: f64) -> bool {
            a == b
        }

        fn sample_point(&self, _c: &Corolla, rng: &mut dyn RngCore) -> String {
            format!("t{}", rng.next_u32() % 8)
        }
    }

    /// Chain shape c1 <- c2 <- c3 as a forest over the unary corolla.
    fn chain_shape() -> Forest {
        chain_and_middle_deletion().0
    }

    #[test]
    fn deleting_a_unary_identity_vertex_sums_adjacent_labels() {
        let o = TagOperad { colors: one_color() };
        let p = WPoint {
            shape: chain_shape(),
            lengths: labels(&[("c3", fin(2.0)), ("c2", fin(5.0))]),
            decoration: Decoration::from([
                ("c1".to_string(), "a".to_string()),
                ("c2".to_string(), "id".to_string()),
                ("c3".to_string(), "b".to_string()),
            ]),
        };
        let out = reduce(&o, &p, 0.0, ReduceOrder::ZeroEdgesFirst).unwrap();
        assert_eq!(out.lengths, labels(&[("c3", fin(7.0))]));
        assert_eq!(
            out.shape.source.outputs.ids().collect::<Vec<_>>(),
            vec!["c1", "c3"]
        );
        assert_eq!(out.decoration["c1"], "a");
        assert_eq!(out.decoration["c3"], "b");
    }

    #[test]
    fn canonical_points_are_fixed_by_reduce() {
        let o = TagOperad { colors: one_color() };
        let p = WPoint {
            shape: chain_shape(),
            lengths: labels(&[("c3", fin(2.0)), ("c2", fin(5.0))]),
            decoration: Decoration::from([
                ("c1".to_string(), "a".to_string()),
                ("c2".to_string(), "b".to_string()),
                ("c3".to_string(), "c".to_string()),
            ]),
        };
        let out = reduce(&o, &p, 0.0, ReduceOrder::ZeroEdgesFirst).unwrap();
        assert_eq!(out, p);
    }

    #[test]
    fn top_identity_vertex_label_is_absorbed() {
        // Deleting the top vertex c3 (identity) drops the label of the
        // edge c3 -> c2: the leaf edge absorbs it.
        let o = TagOperad { colors: one_color() };
        let p = WPoint {
            shape: chain_shape(),
            lengths: labels(&[("c3", fin(2.0)), ("c2", fin(5.0))]),
            decoration: Decoration::from([
                ("c1".to_string(), "a".to_string()),
                ("c2".to_string(), "b".to_string()),
                ("c3".to_string(), "id".to_string()),
            ]),
        };
        let out = reduce(&o, &p, 0.0, ReduceOrder::ZeroEdgesFirst).unwrap();
        assert_eq!(out.lengths, labels(&[("c2", fin(5.0))]));
        assert_eq!(
            out.shape.source.outputs.ids().collect::<Vec<_>>(),
            vec!["c1", "c2"]
        );
    }

    #[test]
    fn coend_relation_identifies_the_two_presentations() {
        // (gf, w_sigma(g,f,t), alpha) ~ (g, t, act(f, alpha)).
        let o = TagOperad { colors: one_color() };
        let f = forest_f();
        let g = forest_g();
        let alpha = Decoration::from([
            ("u".to_string(), "a".to_string()),
            ("v".to_string(), "b".to_string()),
        ]);
        let t = EdgeLabeling::new();
        let left = WPoint {
            shape: compose(&g, &f).unwrap(),
            lengths: w_sigma(&g, &f, &t).unwrap(),
            decoration: alpha.clone(),
        };
        let right = WPoint {
            shape: g.clone(),
            lengths: t,
            decoration: o.act(&f, &alpha).unwrap(),
        };
        assert!(w_equal(&o, &left, &right, 0.0).unwrap());
    }

    #[test]
    fn randomized_reduction_order_is_confluent_here() {
        let o = TagOperad { colors: one_color() };
        let p = WPoint {
            shape: chain_shape(),
            lengths: labels(&[("c3", ExtReal::ZERO), ("c2", fin(5.0))]),
            decoration: Decoration::from([
                ("c1".to_string(), "a".to_string()),
                ("c2".to_string(), "id".to_string()),
                ("c3".to_string(), "b".to_string()),
            ]),
        };
        let base = reduce(&o, &p, 0.0, ReduceOrder::ZeroEdgesFirst).unwrap();
        for seed in 0..8 {
            let alt = reduce(&o, &p, 0.0, ReduceOrder::Seeded(seed)).unwrap();
            let eq = w_equal(
                &o,
                &base,
                &alt,
                0.0,
            )
            .unwrap();
            assert!(eq, "seed {seed} gave a different canonical form");
        }
    }

    #[test]
    fn equality_is_iso_invariant_and_label_sensitive() {
        let o = TagOperad { colors: one_color() };
        let f = forest_f();
        let p = WPoint {
            shape: f.clone(),
            lengths: labels(&[("u", fin(1.0))]),
            decoration: Decoration::from([
                ("u".to_string(), "a".to_string()),
                ("v".to_string(), "b".to_string()),
            ]),
        };
        // Rename the source vertices and slots.
        let src = crate::forest::YoungIso {
            inputs: [("p", "P"), ("q", "Q"), ("s", "S"), ("t", "T")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
            outputs: [("u", "U"), ("v", "V")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
        };
        let tgt = crate::forest::YoungIso::identity(&f.target);
        let q = WPoint {
            shape: crate::forest::transport(&f, &src, &tgt),
            lengths: labels(&[("U", fin(1.0))]),
            decoration: Decoration::from([
                ("U".to_string(), "a".to_string()),
                ("V".to_string(), "b".to_string()),
            ]),
        };
        assert!(w_equal(&o, &p, &q, 0.0).unwrap());
        let mut q2 = q.clone();
        q2.lengths = labels(&[("U", fin(2.0))]);
        assert!(!w_equal(&o, &p, &q2, 0.0).unwrap());
        let mut q3 = q;
        q3.decoration.insert("V".to_string(), "zzz".to_string());
        assert!(!w_equal(&o, &p, &q3, 0.0).unwrap());
    }

    #[test]
    fn counit_is_invariant_under_reduce() {
        let o = TagOperad { colors: one_color() };
        let p = WPoint {
            shape: chain_shape(),
            lengths: labels(&[("c3", ExtReal::ZERO), ("c2", fin(5.0))]),
            decoration: Decoration::from([
                ("c1".to_string(), "a".to_string()),
                ("c2".to_string(), "id".to_string()),
                ("c3".to_string(), "b".to_string()),
            ]),
        };
        let before = counit(&o, &p).unwrap();
        let after = counit(&o, &reduce(&o, &p, 0.0, ReduceOrder::ZeroEdgesFirst).unwrap()).unwrap();
        assert_eq!(before, after);
        assert_eq!(before["R"], "a.b");
    }

    #[test]
    fn counit_is_natural_for_w_act() {
        let o = TagOperad { colors: one_color() };
        let f = forest_f();
        let g = forest_g();
        let p = WPoint {
            shape: f.clone(),
            lengths: labels(&[("u", fin(1.0))]),
            decoration: Decoration::from([
                ("u".to_string(), "a".to_string()),
                ("v".to_string(), "b".to_string()),
            ]),
        };
        let moved = w_act(&g, &p).unwrap();
        let lhs = counit(&o, &moved).unwrap();
        let rhs = o.act(&g, &counit(&o, &p).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // And labels were preserved: E(g) adds nothing here.
        assert_eq!(moved.lengths, p.lengths);
    }

    #[test]
    fn boundary_membership_cases() {
        let o = TagOperad { colors: one_color() };
        let dec = Decoration::from([
            ("c1".to_string(), "a".to_string()),
            ("c2".to_string(), "b".to_string()),
            ("c3".to_string(), "c".to_string()),
        ]);
        let interior = WPoint {
            shape: chain_shape(),
            lengths: labels(&[("c3", fin(2.0)), ("c2", fin(5.0))]),
            decoration: dec.clone(),
        };
        // Two edges: below the bound at k = 2, boundary at k = 1 only via
        // a special label or identity.
        assert!(in_boundary_plus(&o, &interior, 2, 0.0));
        assert!(!in_boundary_plus(&o, &interior, 1, 0.0));
        let mut infty = interior.clone();
        infty.lengths.insert("c2".to_string(), ExtReal::INF);
        assert!(in_boundary_plus(&o, &infty, 1, 0.0));
        let mut zero = interior.clone();
        zero.lengths.insert("c3".to_string(), ExtReal::ZERO);
        assert!(in_boundary_plus(&o, &zero, 1, 0.0));
        let mut ided = interior;
        ided.decoration.insert("c2".to_string(), "id".to_string());
        assert!(in_boundary_plus(&o, &ided, 1, 0.0));
    }

    #[test]
    fn subtree_counts_skip_infinite_labels() {
        let p: WPoint<String> = WPoint {
            shape: chain_shape(),
            lengths: labels(&[("c3", ExtReal::INF), ("c2", fin(5.0))]),
            decoration: Decoration::new(),
        };
        let counts = subtree_finite_edge_counts(&p);
        assert_eq!(counts["c3"], 0);
        assert_eq!(counts["c2"], 0); // its own edge belongs to c1's subtree
        assert_eq!(counts["c1"], 1); // only the finite edge c2 -> c1
        assert!(within_weight_filtration(&p, 1));
        assert!(!within_weight_filtration(&p, 0));
    }

    #[test]
    fn w_equal_transports_positional_data_across_renamed_slots() {
        use crate::sc::{sc_colors, DiscDatum, ScOperad};

        // Two shapes over the same target corolla, equal up to renaming the
        // f slot and listing the inputs in a different order. The per-slot
        // disc data must be compared along the iso, not by raw position.
        let z = YoungForest::new(
            ColoredSet::new(sc_colors(), [("a", "f"), ("b", "h")]),
            ColoredSet::new(sc_colors(), [("r", "h")]),
            [("a", "r"), ("b", "r")],
        );
        let z2 = YoungForest::new(
            ColoredSet::new(sc_colors(), [("b", "h"), ("c", "f")]),
            ColoredSet::new(sc_colors(), [("r", "h")]),
            [("b", "r"), ("c", "r")],
        );
        let mu = Forest {
            source: z2,
            target: z.clone(),
            attach: BTreeMap::from([
                (Tail::Input("a".into()), Head::Slot("c".into())),
                (Tail::Input("b".into()), Head::Slot("b".into())),
                (Tail::Vertex("r".into()), Head::Root("r".into())),
            ]),
        };
        assert_eq!(mu.validate(), Ok(()));

        let disc = DiscDatum::F { r: 0.25, c: vec![0.5, 0.25] };
        let half = DiscDatum::H { r: 0.25, c: vec![-0.5, 0.0] };
        let op = ScOperad::new(2);
        let q = WPoint {
            shape: Forest::identity(&z),
            lengths: EdgeLabeling::new(),
            decoration: Decoration::from([("r".to_string(), vec![disc.clone(), half.clone()])]),
        };
        let p = WPoint {
            shape: mu,
            lengths: EdgeLabeling::new(),
            decoration: Decoration::from([("r".to_string(), vec![half, disc])]),
        };
        validate_wpoint(&op, &p).unwrap();
        validate_wpoint(&op, &q).unwrap();
        assert!(w_equal(&op, &p, &q, 1e-9).unwrap());
        assert!(w_equal(&op, &q, &p, 1e-9).unwrap());
    }

    #[test]
    fn wpoint_json_roundtrip() {
        let p: WPoint<String> = WPoint {
            shape: forest_f(),
            lengths: labels(&[("u", ExtReal::INF)]),
            decoration: Decoration::from([
                ("u".to_string(), "a".to_string()),
                ("v".to_string(), "b".to_string()),
            ]),
        };
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"u\":\"inf\""));
        let back: WPoint<String> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
