//! Isomorphisms of young forests and of forests, and transport of a forest
//! along a relabeling of its boundary.

use std::collections::BTreeMap;

use super::{Forest, Head, Tail, YoungForest};

/// A pair of id bijections (inputs and outputs) between young forests.
#[derive(Debug, Clone, PartialEq)]
pub struct YoungIso {
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

impl YoungIso {
    pub fn identity(y: &YoungForest) -> YoungIso {
        YoungIso {
            inputs: y.inputs.ids().map(|i| (i.to_string(), i.to_string())).collect(),
            outputs: y.outputs.ids().map(|j| (j.to_string(), j.to_string())).collect(),
        }
    }
}

/// All bijections between two equal-length id slices that respect the given
/// compatibility predicate. Plain backtracking; callers stay small.
pub fn bijections(
    xs: &[&str],
    ys: &[&str],
    compatible: impl Fn(&str, &str) -> bool,
) -> Vec<BTreeMap<String, String>> {
    fn go(
        xs: &[&str],
        ys: &[&str],
        used: &mut Vec<bool>,
        acc: &mut BTreeMap<String, String>,
        compatible: &impl Fn(&str, &str) -> bool,
        out: &mut Vec<BTreeMap<String, String>>,
    ) {
        let k = acc.len();
        if k == xs.len() {
            out.push(acc.clone());
            return;
        }
        for (idx, y) in ys.iter().enumerate() {
            if !used[idx] && compatible(xs[k], y) {
                used[idx] = true;
                acc.insert(xs[k].to_string(), y.to_string());
                go(xs, ys, used, acc, compatible, out);
                acc.remove(xs[k]);
                used[idx] = false;
            }
        }
    }
    if xs.len() != ys.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(xs, ys, &mut vec![false; ys.len()], &mut BTreeMap::new(), &compatible, &mut out);
    out
}

fn fiber_color_counts(y: &YoungForest, root: &str) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for s in y.fiber(root) {
        let c = y.inputs.color_of(s).expect("fiber slot has a color").to_string();
        *counts.entry(c).or_insert(0) += 1;
    }
    counts
}

/// All color-preserving isomorphisms `a -> b` commuting with the root
/// structure.
pub fn young_isos(a: &YoungForest, b: &YoungForest) -> Vec<YoungIso> {
    if a.colors() != b.colors()
        || a.inputs.len() != b.inputs.len()
        || a.outputs.len() != b.outputs.len()
    {
        return Vec::new();
    }
    let roots_a: Vec<&str> = a.outputs.ids().collect();
    let roots_b: Vec<&str> = b.outputs.ids().collect();
    let root_maps = bijections(&roots_a, &roots_b, |ra, rb| {
        a.outputs.color_of(ra) == b.outputs.color_of(rb)
            && fiber_color_counts(a, ra) == fiber_color_counts(b, rb)
    });

    let mut out = Vec::new();
    for outputs in root_maps {
        // Per matched root pair, all color-preserving fiber bijections;
        // combine across roots by cartesian product.
        let mut partials: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
        for (ra, rb) in &outputs {
            let fa = a.fiber(ra);
            let fb = b.fiber(rb);
            let fibs =
                bijections(&fa, &fb, |sa, sb| a.inputs.color_of(sa) == b.inputs.color_of(sb));
            let mut next = Vec::new();
            for p in &partials {
                for fb_map in &fibs {
                    let mut merged = p.clone();
                    merged.extend(fb_map.iter().map(|(k, v)| (k.clone(), v.clone())));
                    next.push(merged);
                }
            }
            partials = next;
        }
        for inputs in partials {
            out.push(YoungIso { inputs, outputs: outputs.clone() });
        }
    }
    out
}

fn commutes(a: &Forest, b: &Forest, src: &YoungIso, tgt: &YoungIso) -> bool {
    a.attach.iter().all(|(t, h)| {
        let t2 = match t {
            Tail::Input(i) => Tail::Input(tgt.inputs[i].clone()),
            Tail::Vertex(v) => Tail::Vertex(src.outputs[v].clone()),
        };
        let h2 = match h {
            Head::Root(r) => Head::Root(tgt.outputs[r].clone()),
            Head::Slot(s) => Head::Slot(src.inputs[s].clone()),
        };
        b.attach.get(&t2) == Some(&h2)
    })
}

/// Isomorphisms of forests over a strictly shared target: young isos of the
/// sources commuting with both attachments while the target stays pointwise
/// fixed.
pub fn forest_isos_fixing_target(a: &Forest, b: &Forest) -> Vec<YoungIso> {
    if a.target != b.target {
        return Vec::new();
    }
    let id_tgt = YoungIso::identity(&a.target);
    young_isos(&a.source, &b.source)
        .into_iter()
        .filter(|src| commutes(a, b, src, &id_tgt))
        .collect()
}

/// All isomorphisms of forests: pairs of young isos (source, target) under
/// which the attachments correspond.
pub fn forest_isos(a: &Forest, b: &Forest) -> Vec<(YoungIso, YoungIso)> {
    let mut out = Vec::new();
    for tgt in young_isos(&a.target, &b.target) {
        for src in young_isos(&a.source, &b.source) {
            if commutes(a, b, &src, &tgt) {
                out.push((src.clone(), tgt.clone()));
            }
        }
    }
    out
}

/// Rename the ids of a young forest along an iso's tables, preserving order
/// and colors.
pub fn rename_young(y: &YoungForest, iso: &YoungIso) -> YoungForest {
    let mut renamed = y.clone();
    for e in &mut renamed.inputs.elements {
        e.id = iso.inputs[&e.id].clone();
    }
    for e in &mut renamed.outputs.elements {
        e.id = iso.outputs[&e.id].clone();
    }
    renamed.structure =
        y.structure.iter().map(|(i, j)| (iso.inputs[i].clone(), iso.outputs[j].clone())).collect();
    renamed
}

/// Conjugate a forest along renamings of its source and target.
pub fn transport(f: &Forest, src: &YoungIso, tgt: &YoungIso) -> Forest {
    let attach = f
        .attach
        .iter()
        .map(|(t, h)| {
            let t2 = match t {
                Tail::Input(i) => Tail::Input(tgt.inputs[i].clone()),
                Tail::Vertex(v) => Tail::Vertex(src.outputs[v].clone()),
            };
            let h2 = match h {
                Head::Root(r) => Head::Root(tgt.outputs[r].clone()),
                Head::Slot(s) => Head::Slot(src.inputs[s].clone()),
            };
            (t2, h2)
        })
        .collect();
    Forest {
        source: rename_young(&f.source, src),
        target: rename_young(&f.target, tgt),
        attach,
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::colored::{ColorSet, ColoredSet};

    #[test]
    fn corolla_with_two_like_slots_has_two_automorphisms() {
        let y = YoungForest::corolla_shape(one_color(), "r", "a", [("1", "a"), ("2", "a")]);
        assert_eq!(young_isos(&y, &y).len(), 2);
    }

    #[test]
    fn mixed_colors_pin_the_automorphism() {
        let two = ColorSet::new(["a", "b"]);
        let y = YoungForest::corolla_shape(two, "r", "a", [("1", "a"), ("2", "b")]);
        let isos = young_isos(&y, &y);
        assert_eq!(isos.len(), 1);
        assert_eq!(isos[0], YoungIso::identity(&y));
    }

    #[test]
    fn cardinality_mismatch_gives_no_isos() {
        let y = young_y();
        let z = YoungForest::corolla_shape(one_color(), "r", "a", [("1", "a"), ("2", "a")]);
        assert!(young_isos(&y, &z).is_empty());
    }

    #[test]
    fn multiset_of_fibers_must_match() {
        let colors = one_color();
        // Two roots with fibers (2,0) vs (1,1).
        let a = YoungForest::new(
            ColoredSet::new(colors.clone(), [("1", "a"), ("2", "a")]),
            ColoredSet::new(colors.clone(), [("p", "a"), ("q", "a")]),
            [("1", "p"), ("2", "p")],
        );
        let b = YoungForest::new(
            ColoredSet::new(colors.clone(), [("1", "a"), ("2", "a")]),
            ColoredSet::new(colors, [("p", "a"), ("q", "a")]),
            [("1", "p"), ("2", "q")],
        );
        assert!(young_isos(&a, &b).is_empty());
        // And two roots with matching fibers have the swap as well.
        assert_eq!(young_isos(&b, &b).len(), 2);
    }

    #[test]
    fn running_forest_has_trivial_automorphism_group_over_target() {
        let f = forest_f();
        let autos = forest_isos_fixing_target(&f, &f);
        assert_eq!(autos.len(), 1);
        assert_eq!(autos[0], YoungIso::identity(&f.source));
    }

    #[test]
    fn transport_conjugates_and_is_found_again() {
        let f = forest_f();
        let src = YoungIso {
            inputs: [("p", "P"), ("q", "Q"), ("s", "S"), ("t", "T")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
            outputs: [("u", "U"), ("v", "V")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
        };
        let tgt = YoungIso::identity(&f.target);
        let f2 = transport(&f, &src, &tgt);
        assert_eq!(f2.validate(), Ok(()));
        assert_eq!(f2.attach[&Tail::Vertex("U".into())], Head::Slot("P".into()));
        let isos = forest_isos_fixing_target(&f, &f2);
        assert_eq!(isos.len(), 1);
        assert_eq!(isos[0], src);
    }

    #[test]
    fn full_forest_isos_include_target_relabelings() {
        let f = forest_f();
        let tgt = YoungIso {
            inputs: [("1", "one"), ("2", "two"), ("3", "three")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
            outputs: [("r", "root")].map(|(a, b)| (a.to_string(), b.to_string())).into(),
        };
        let f2 = transport(&f, &YoungIso::identity(&f.source), &tgt);
        assert_eq!(f2.validate(), Ok(()));
        let isos = forest_isos(&f, &f2);
        // The expected pair, plus one more: u's two slots can be swapped
        // together with the matching swap of target inputs one/two.
        assert_eq!(isos.len(), 2);
        assert!(isos.contains(&(YoungIso::identity(&f.source), tgt)));
    }
}
