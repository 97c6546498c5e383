//! Composition of forests by chasing attachments through the middle young
//! forest, and the induced position map on internal edges.

use std::collections::BTreeMap;

use super::{Forest, ForestOpError, Head, Tail};

/// Where a chase through `g . f` starts: at a head inside the outer forest
/// `g`, or at a head inside the inner forest `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum GfStart {
    InOuter(Head),
    InInner(Head),
}

/// Chase a position through the composite of `g: y -> z` after `f: x -> y`.
///
/// Heads of `g` live in `J_z ⊔ I_y`: a root of `z` is final, a slot of `y`
/// feeds the corresponding input of `f`. Heads of `f` live in `J_y ⊔ I_x`: a
/// slot of `x` is final, a root of `y` feeds the corresponding vertex of
/// `g`. Alternation must stop within `|I_y| + |J_y| + 2` steps on valid
/// forests; the composite head lives in `J_z ⊔ I_x`.
pub fn chase_tail(g: &Forest, f: &Forest, start: GfStart) -> Result<Head, ForestOpError> {
    let bound = f.target.inputs.len() + f.target.outputs.len() + 2;
    let mut cur = start;
    for _ in 0..bound {
        match cur {
            GfStart::InOuter(Head::Root(r)) => return Ok(Head::Root(r)),
            GfStart::InOuter(Head::Slot(i)) => {
                let h = f
                    .attach
                    .get(&Tail::Input(i.clone()))
                    .ok_or(ForestOpError::UnknownId(i))?;
                cur = GfStart::InInner(h.clone());
            }
            GfStart::InInner(Head::Slot(s)) => return Ok(Head::Slot(s)),
            GfStart::InInner(Head::Root(j)) => {
                let h = g
                    .attach
                    .get(&Tail::Vertex(j.clone()))
                    .ok_or(ForestOpError::UnknownId(j))?;
                cur = GfStart::InOuter(h.clone());
            }
        }
    }
    Err(ForestOpError::ChaseDiverged)
}

/// Compose `g: y -> z` after `f: x -> y`. The middle young forests must
/// agree strictly.
pub fn compose(g: &Forest, f: &Forest) -> Result<Forest, ForestOpError> {
    if f.target != g.source {
        return Err(ForestOpError::BoundaryMismatch);
    }
    let mut attach = BTreeMap::new();
    for i in g.target.inputs.ids() {
        let start = GfStart::InOuter(g.attach[&Tail::Input(i.to_string())].clone());
        attach.insert(Tail::Input(i.to_string()), chase_tail(g, f, start)?);
    }
    for v in f.source.outputs.ids() {
        let start = GfStart::InInner(f.attach[&Tail::Vertex(v.to_string())].clone());
        attach.insert(Tail::Vertex(v.to_string()), chase_tail(g, f, start)?);
    }
    Ok(Forest { source: f.source.clone(), target: g.target.clone(), attach })
}

/// Where an internal edge of the outer forest `g` sits inside the composite
/// `g . f`: its head, pushed through `f` until it lands in `J_z ⊔ I_x`.
///
/// Internal edges of `g` are vertices of `g` whose attachment is a slot of
/// `y`; the returned map sends each such edge id to a head of the composite.
pub fn composite_position(
    g: &Forest,
    f: &Forest,
) -> Result<BTreeMap<String, Head>, ForestOpError> {
    if f.target != g.source {
        return Err(ForestOpError::BoundaryMismatch);
    }
    let mut out = BTreeMap::new();
    for e in g.internal_edge_ids() {
        let start = GfStart::InOuter(g.attach[&Tail::Vertex(e.clone())].clone());
        out.insert(e, chase_tail(g, f, start)?);
    }
    Ok(out)
}
