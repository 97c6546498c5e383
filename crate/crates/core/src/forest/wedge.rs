//! Disjoint unions, per-root restriction, and the wedge of two forests
//! along a root-to-vertex attachment table.

use std::collections::BTreeMap;

use super::{Defect, DefectDetail, Forest, ForestElem, ForestOpError, Head, Tail, YoungForest};
use crate::colored::{disjoint_union, tag, ColorSet, ColoredSet};

pub fn disjoint_union_young(a: &YoungForest, b: &YoungForest) -> Result<YoungForest, ForestOpError> {
    let inputs = disjoint_union(&a.inputs, &b.inputs)
        .map_err(|_| ForestOpError::Invalid(Defect::ColorBroken))?;
    let outputs = disjoint_union(&a.outputs, &b.outputs)
        .map_err(|_| ForestOpError::Invalid(Defect::ColorBroken))?;
    let structure = a
        .structure
        .iter()
        .map(|(i, j)| (tag("L", i), tag("L", j)))
        .chain(b.structure.iter().map(|(i, j)| (tag("R", i), tag("R", j))))
        .collect();
    Ok(YoungForest { inputs, outputs, structure })
}

pub fn disjoint_union_forests(a: &Forest, b: &Forest) -> Result<Forest, ForestOpError> {
    let source = disjoint_union_young(&a.source, &b.source)?;
    let target = disjoint_union_young(&a.target, &b.target)?;
    let retag = |side: &str, h: &Head| match h {
        Head::Root(r) => Head::Root(tag(side, r)),
        Head::Slot(s) => Head::Slot(tag(side, s)),
    };
    let attach = a
        .attach
        .iter()
        .map(|(t, h)| {
            let t2 = match t {
                Tail::Input(i) => Tail::Input(tag("L", i)),
                Tail::Vertex(v) => Tail::Vertex(tag("L", v)),
            };
            (t2, retag("L", h))
        })
        .chain(b.attach.iter().map(|(t, h)| {
            let t2 = match t {
                Tail::Input(i) => Tail::Input(tag("R", i)),
                Tail::Vertex(v) => Tail::Vertex(tag("R", v)),
            };
            (t2, retag("R", h))
        }))
        .collect();
    Ok(Forest { source, target, attach })
}

/// Split a young forest into its corollas, one single-root young forest per
/// root, ids preserved, in root order.
pub fn decompose_into_trees(y: &YoungForest) -> Vec<YoungForest> {
    y.outputs
        .ids()
        .map(|j| {
            let inputs = y.inputs.restrict(|id| y.structure.get(id).map(String::as_str) == Some(j));
            let outputs = y.outputs.restrict(|id| id == j);
            let structure = y
                .structure
                .iter()
                .filter(|(_, root)| root.as_str() == j)
                .map(|(i, root)| (i.clone(), root.clone()))
                .collect();
            YoungForest { inputs, outputs, structure }
        })
        .collect()
}

/// The tree of a forest over one target root: target restricted to that
/// corolla, source restricted to everything rooting there. Ids and order
/// are preserved.
pub fn restrict_to_root(f: &Forest, root: &str) -> Result<Forest, ForestOpError> {
    if !f.target.outputs.contains(root) {
        return Err(ForestOpError::UnknownId(root.to_string()));
    }
    let rm = f.root_map()?;
    let keep_slot = |s: &str| rm[&ForestElem::Slot(s.to_string())] == root;
    let keep_vertex = |v: &str| rm[&ForestElem::Vertex(v.to_string())] == root;

    let source = YoungForest {
        inputs: f.source.inputs.restrict(keep_slot),
        outputs: f.source.outputs.restrict(keep_vertex),
        structure: f
            .source
            .structure
            .iter()
            .filter(|(s, _)| keep_slot(s))
            .map(|(s, v)| (s.clone(), v.clone()))
            .collect(),
    };
    let target = YoungForest {
        inputs: f.target.inputs.restrict(|i| f.target.structure.get(i).map(String::as_str) == Some(root)),
        outputs: f.target.outputs.restrict(|j| j == root),
        structure: f
            .target
            .structure
            .iter()
            .filter(|(_, j)| j.as_str() == root)
            .map(|(i, j)| (i.clone(), j.clone()))
            .collect(),
    };
    let attach = f
        .attach
        .iter()
        .filter(|(t, _)| match t {
            Tail::Input(i) => target.inputs.contains(i),
            Tail::Vertex(v) => keep_vertex(v),
        })
        .map(|(t, h)| (t.clone(), h.clone()))
        .collect();
    Ok(Forest { source, target, attach })
}

fn recolor(y: &YoungForest, colors: &ColorSet) -> YoungForest {
    YoungForest {
        inputs: ColoredSet { colors: colors.clone(), elements: y.inputs.elements.clone() },
        outputs: ColoredSet { colors: colors.clone(), elements: y.outputs.elements.clone() },
        structure: y.structure.clone(),
    }
}

/// Wedge `f: x -> y` with `g: z -> w` along `tau`, a total map from the
/// roots of `w` to the vertices of `f`. Each root of `w` becomes a fresh
/// input slot of its tau-image, and the whole of `g` hangs below it.
///
/// Ids are tagged `L:` (from `f`), `R:` (from `g`) and `W:` (the fresh
/// slots, one per root of `w`); color sets are merged by name.
pub fn wedge(
    f: &Forest,
    g: &Forest,
    tau: &BTreeMap<String, String>,
) -> Result<Forest, DefectDetail> {
    for r in g.target.outputs.ids() {
        match tau.get(r) {
            None => {
                return Err(DefectDetail::plain(
                    Defect::NotBijection,
                    format!("tau misses root {r:?}"),
                ))
            }
            Some(v) if !f.source.outputs.contains(v) => {
                return Err(DefectDetail::plain(
                    Defect::NotBijection,
                    format!("tau sends {r:?} to unknown vertex {v:?}"),
                ))
            }
            _ => {}
        }
    }

    let colors = f.source.colors().merge(g.source.colors());
    let x = recolor(&f.source, &colors);
    let y = recolor(&f.target, &colors);
    let z = recolor(&g.source, &colors);
    let w = recolor(&g.target, &colors);

    // Source x v_tau z: slots of x, one fresh slot per root of w, slots of z.
    let mut src_inputs = ColoredSet::empty(colors.clone());
    let mut src_structure = BTreeMap::new();
    for e in &x.inputs.elements {
        src_inputs.elements.push(e.retagged("L"));
        src_structure.insert(tag("L", &e.id), tag("L", &x.structure[&e.id]));
    }
    for e in &w.outputs.elements {
        src_inputs.elements.push(e.retagged("W"));
        src_structure.insert(tag("W", &e.id), tag("L", &tau[&e.id]));
    }
    for e in &z.inputs.elements {
        src_inputs.elements.push(e.retagged("R"));
        src_structure.insert(tag("R", &e.id), tag("R", &z.structure[&e.id]));
    }
    let mut src_outputs = ColoredSet::empty(colors.clone());
    src_outputs.elements.extend(x.outputs.elements.iter().map(|e| e.retagged("L")));
    src_outputs.elements.extend(z.outputs.elements.iter().map(|e| e.retagged("R")));
    let source = YoungForest { inputs: src_inputs, outputs: src_outputs, structure: src_structure };

    // Target y v_tau w: inputs of y and of w, roots of y only. An input of
    // w sits under the y-root its tau-image chases to.
    let mut tgt_inputs = ColoredSet::empty(colors.clone());
    let mut tgt_structure = BTreeMap::new();
    for e in &y.inputs.elements {
        tgt_inputs.elements.push(e.retagged("L"));
        tgt_structure.insert(tag("L", &e.id), tag("L", &y.structure[&e.id]));
    }
    for e in &w.inputs.elements {
        tgt_inputs.elements.push(e.retagged("R"));
        let wroot = &w.structure[&e.id];
        let yroot = f
            .root_of(&ForestElem::Vertex(tau[wroot].clone()))
            .map_err(|e| DefectDetail::plain(Defect::Cycle, e.to_string()))?;
        tgt_structure.insert(tag("R", &e.id), tag("L", &yroot));
    }
    let mut tgt_outputs = ColoredSet::empty(colors);
    tgt_outputs.elements.extend(y.outputs.elements.iter().map(|e| e.retagged("L")));
    let target = YoungForest { inputs: tgt_inputs, outputs: tgt_outputs, structure: tgt_structure };

    // Attachments: f's stay on the L side; g's roots now land in the fresh
    // W slots.
    let f_head = |h: &Head| match h {
        Head::Root(r) => Head::Root(tag("L", r)),
        Head::Slot(s) => Head::Slot(tag("L", s)),
    };
    let g_head = |h: &Head| match h {
        Head::Root(r) => Head::Slot(tag("W", r)),
        Head::Slot(s) => Head::Slot(tag("R", s)),
    };
    let mut attach = BTreeMap::new();
    for (t, h) in &f.attach {
        let t2 = match t {
            Tail::Input(i) => Tail::Input(tag("L", i)),
            Tail::Vertex(v) => Tail::Vertex(tag("L", v)),
        };
        attach.insert(t2, f_head(h));
    }
    for (t, h) in &g.attach {
        let t2 = match t {
            Tail::Input(i) => Tail::Input(tag("R", i)),
            Tail::Vertex(v) => Tail::Vertex(tag("R", v)),
        };
        attach.insert(t2, g_head(h));
    }

    let out = Forest { source, target, attach };
    out.validate()?;
    Ok(out)
}
