//! Free operads on a pointed collection of generators.
//!
//! A collection names its generators: each has a root color, an ordered
//! list of slot colors, and a symmetry mode. A point of the free operad
//! over a corolla is a decorated tree: a forest into that corolla whose
//! source vertices each carry a generator name matching their colors.
//! Grafting along a forest is composition of shapes; the identity at a
//! color is the vertex-free unit tree, so grafting a unit into a slot
//! threads through without leaving a vertex behind.
//!
//! Generator slots are bound to vertex slots by position. A relabeling of
//! a corolla therefore acts by twisting the shape's attachment, and two
//! elements are equal when some shape isomorphism matches generator names
//! and, for asymmetric generators, slot positions.

use std::collections::BTreeMap;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::colored::{ColorSet, ColoredSet};
use crate::forest::{
    compose, forest_isos_fixing_target, restrict_to_root, transport, Corolla,
    Forest, Tail, YoungForest, YoungIso,
};
use crate::operad::{Decoration, Operad, OperadError};

/// How a generator's inputs may be permuted without changing the element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    None,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub root_color: String,
    pub slots: Vec<String>,
    pub symmetry: Symmetry,
}

impl Generator {
    /// The generator's own corolla, with slots named s1, s2, ...
    pub fn corolla(&self) -> Corolla {
        Corolla {
            root_id: "r".to_string(),
            root_color: self.root_color.clone(),
            slots: self
                .slots
                .iter()
                .enumerate()
                .map(|(i, c)| crate::colored::ColoredElem {
                    id: format!("s{}", i + 1),
                    color: c.clone(),
                })
                .collect(),
        }
    }
}

/// A named set of generators over a color set. Loaded from JSON for the
/// command line; basepoints are not generators but the unit trees, so a
/// collection lists only the non-unit spaces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointedCollection {
    pub colors: Vec<String>,
    pub generators: Vec<Generator>,
}

impl PointedCollection {
    pub fn from_json(s: &str) -> Result<PointedCollection, OperadError> {
        serde_json::from_str(s).map_err(|e| OperadError::BadDecoration(e.to_string()))
    }
}

/// One stage of a decorated tree: shape into a single-root young forest,
/// generator names on the source vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeElement {
    pub shape: Forest,
    pub decorations: BTreeMap<String, String>,
}

impl FreeElement {
    /// A single generator as an element over its own corolla.
    pub fn generator(colors: &ColorSet, gen: &Generator) -> FreeElement {
        let c = gen.corolla();
        let target = YoungForest::corolla_shape(
            colors.clone(),
            &c.root_id,
            &c.root_color,
            c.slots.iter().map(|s| (s.id.as_str(), s.color.as_str())),
        );
        let source = YoungForest::new(
            ColoredSet::new(
                colors.clone(),
                c.slots.iter().map(|s| (format!("v.{}", s.id), s.color.clone())),
            ),
            ColoredSet::new(colors.clone(), [("v".to_string(), c.root_color.clone())]),
            c.slots.iter().map(|s| (format!("v.{}", s.id), "v".to_string())),
        );
        let mut attach = BTreeMap::new();
        for s in &c.slots {
            attach.insert(
                Tail::Input(s.id.clone()),
                crate::forest::Head::Slot(format!("v.{}", s.id)),
            );
        }
        attach.insert(
            Tail::Vertex("v".to_string()),
            crate::forest::Head::Root(c.root_id.clone()),
        );
        FreeElement {
            shape: Forest { source, target, attach },
            decorations: BTreeMap::from([("v".to_string(), gen.name.clone())]),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.shape.source.outputs.is_empty()
    }
}

/// The free operad on a collection: points are reduced decorated trees.
#[derive(Debug, Clone)]
pub struct FreeOperad {
    colors: ColorSet,
    generators: BTreeMap<String, Generator>,
}

impl FreeOperad {
    pub fn new(collection: &PointedCollection) -> Result<FreeOperad, OperadError> {
        let colors = ColorSet::new(collection.colors.iter().map(String::as_str));
        let mut generators = BTreeMap::new();
        for g in &collection.generators {
            for c in g.slots.iter().chain([&g.root_color]) {
                if !colors.contains(c) {
                    return Err(OperadError::UnknownColor(c.clone()));
                }
            }
            if generators.insert(g.name.clone(), g.clone()).is_some() {
                return Err(OperadError::BadDecoration(format!(
                    "duplicate generator {:?}",
                    g.name
                )));
            }
        }
        Ok(FreeOperad { colors, generators })
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.get(name)
    }

    pub fn element(&self, name: &str) -> Result<FreeElement, OperadError> {
        let gen = self
            .generators
            .get(name)
            .ok_or_else(|| OperadError::BadDecoration(format!("unknown generator {name:?}")))?;
        Ok(FreeElement::generator(&self.colors, gen))
    }

    /// The target corolla of an element, or an error if the target is not
    /// a single young tree.
    fn target_corolla(e: &FreeElement) -> Result<Corolla, OperadError> {
        let roots: Vec<&str> = e.shape.target.outputs.ids().collect();
        if roots.len() != 1 {
            return Err(OperadError::BadDecoration(format!(
                "element target must have one root, found {}",
                roots.len()
            )));
        }
        Ok(e.shape.target.corolla(roots[0]).expect("root exists"))
    }

    /// Rename an element's shape so its target becomes the corolla of
    /// vertex `j` inside `y`, slots matched by position, and its source
    /// ids are prefixed to stay disjoint.
    fn plant(
        &self,
        y: &YoungForest,
        j: &str,
        e: &FreeElement,
    ) -> Result<(Forest, BTreeMap<String, String>), OperadError> {
        let c = Self::target_corolla(e)?;
        let fiber = y.fiber(j);
        if c.root_color != *y.outputs.color_of(j).expect("root color")
            || c.slots.len() != fiber.len()
            || c.slots
                .iter()
                .zip(&fiber)
                .any(|(s, i)| Some(s.color.as_str()) != y.inputs.color_of(i))
        {
            return Err(OperadError::BadDecoration(format!(
                "element does not fit the corolla of {j:?}"
            )));
        }
        let tgt = YoungIso {
            inputs: c
                .slots
                .iter()
                .zip(&fiber)
                .map(|(s, i)| (s.id.clone(), i.to_string()))
                .collect(),
            outputs: BTreeMap::from([(c.root_id.clone(), j.to_string())]),
        };
        let src = YoungIso {
            inputs: e
                .shape
                .source
                .inputs
                .ids()
                .map(|i| (i.to_string(), format!("{j}/{i}")))
                .collect(),
            outputs: e
                .shape
                .source
                .outputs
                .ids()
                .map(|v| (v.to_string(), format!("{j}/{v}")))
                .collect(),
        };
        let planted = transport(&e.shape, &src, &tgt);
        let decorations = e
            .decorations
            .iter()
            .map(|(v, g)| (format!("{j}/{v}"), g.clone()))
            .collect();
        Ok((planted, decorations))
    }
}

impl Operad for FreeOperad {
    type Point = FreeElement;

    fn color_set(&self) -> &ColorSet {
        &self.colors
    }

    fn validate_point(&self, corolla: &Corolla, e: &FreeElement) -> Result<(), OperadError> {
        e.shape
            .validate()
            .map_err(|d| OperadError::InvalidForest(d.to_string()))?;
        let c = Self::target_corolla(e)?;
        let fits = c.root_color == corolla.root_color
            && c.slots.len() == corolla.slots.len()
            && c.slots
                .iter()
                .zip(&corolla.slots)
                .all(|(a, b)| a.color == b.color);
        if !fits {
            return Err(OperadError::BadDecoration(
                "element target does not match the corolla".to_string(),
            ));
        }
        for v in e.shape.source.outputs.ids() {
            let gen = e
                .decorations
                .get(v)
                .and_then(|name| self.generators.get(name))
                .ok_or_else(|| {
                    OperadError::BadDecoration(format!("vertex {v:?} has no known generator"))
                })?;
            let fiber = e.shape.source.fiber(v);
            let matches = *e.shape.source.outputs.color_of(v).expect("color") == gen.root_color
                && fiber.len() == gen.slots.len()
                && fiber
                    .iter()
                    .zip(&gen.slots)
                    .all(|(i, c)| e.shape.source.inputs.color_of(i) == Some(c));
            if !matches {
                return Err(OperadError::BadDecoration(format!(
                    "generator {:?} does not match the corolla of {v:?}",
                    e.decorations[v]
                )));
            }
        }
        if e.decorations.len() != e.shape.source.outputs.len() {
            return Err(OperadError::BadDecoration("stray decoration key".to_string()));
        }
        Ok(())
    }

    fn act(
        &self,
        f: &Forest,
        dec: &Decoration<FreeElement>,
    ) -> Result<Decoration<FreeElement>, OperadError> {
        crate::operad::validate_decoration(self, &f.source, dec)?;
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut structure = BTreeMap::new();
        let mut attach = BTreeMap::new();
        let mut decorations = BTreeMap::new();
        for j in f.source.outputs.ids() {
            let (planted, dec_j) = self.plant(&f.source, j, &dec[j])?;
            inputs.extend(planted.source.inputs.elements.iter().cloned());
            outputs.extend(planted.source.outputs.elements.iter().cloned());
            structure.extend(planted.source.structure.clone());
            attach.extend(planted.attach.clone());
            decorations.extend(dec_j);
        }
        let grafted = Forest {
            source: YoungForest {
                inputs: ColoredSet { colors: self.colors.clone(), elements: inputs },
                outputs: ColoredSet { colors: self.colors.clone(), elements: outputs },
                structure,
            },
            target: f.source.clone(),
            attach,
        };
        let whole = compose(f, &grafted).map_err(|e| OperadError::InvalidForest(e.to_string()))?;
        let mut out = Decoration::new();
        for z in f.target.outputs.ids() {
            let shape = restrict_to_root(&whole, z)
                .map_err(|e| OperadError::InvalidForest(e.to_string()))?;
            let kept: BTreeMap<String, String> = shape
                .source
                .outputs
                .ids()
                .map(|v| (v.to_string(), decorations[v].clone()))
                .collect();
            out.insert(z.to_string(), FreeElement { shape, decorations: kept });
        }
        Ok(out)
    }

    fn identity(&self, color: &str) -> Result<FreeElement, OperadError> {
        if !self.colors.contains(color) {
            return Err(OperadError::UnknownColor(color.to_string()));
        }
        Ok(FreeElement {
            shape: Forest::unit(&self.colors, color, "i", "r"),
            decorations: BTreeMap::new(),
        })
    }

    fn is_identity(&self, corolla: &Corolla, e: &FreeElement, _tol: f64) -> bool {
        corolla.is_unary_same_color() && e.is_unit()
    }

    fn points_equal(&self, a: &FreeElement, b: &FreeElement, _tol: f64) -> bool {
        let (Ok(ca), Ok(cb)) = (Self::target_corolla(a), Self::target_corolla(b)) else {
            return false;
        };
        let fits = ca.root_color == cb.root_color
            && ca.slots.len() == cb.slots.len()
            && ca.slots.iter().zip(&cb.slots).all(|(x, y)| x.color == y.color);
        if !fits {
            return false;
        }
        // Rename b's target positionally onto a's, then search shape isos
        // fixing that common target.
        let tgt = YoungIso {
            inputs: cb
                .slots
                .iter()
                .zip(&ca.slots)
                .map(|(x, y)| (x.id.clone(), y.id.clone()))
                .collect(),
            outputs: BTreeMap::from([(cb.root_id.clone(), ca.root_id.clone())]),
        };
        let b_renamed = transport(&b.shape, &YoungIso::identity(&b.shape.source), &tgt);
        for iso in forest_isos_fixing_target(&a.shape, &b_renamed) {
            let names_match = a
                .decorations
                .iter()
                .all(|(v, g)| b.decorations.get(&iso.outputs[v]) == Some(g));
            if !names_match {
                continue;
            }
            let positions_ok = a.shape.source.outputs.ids().all(|v| {
                let gen = &self.generators[&a.decorations[v]];
                if gen.symmetry == Symmetry::Full {
                    return true;
                }
                let fa = a.shape.source.fiber(v);
                let fb = b.shape.source.fiber(&iso.outputs[v]);
                fa.iter().zip(&fb).all(|(x, y)| iso.inputs[*x] == **y)
            });
            if positions_ok {
                return true;
            }
        }
        false
    }

    fn sample_point(&self, corolla: &Corolla, rng: &mut dyn RngCore) -> FreeElement {
        let fits = |g: &&Generator| {
            g.root_color == corolla.root_color
                && g.slots.len() == corolla.slots.len()
                && g.slots.iter().zip(&corolla.slots).all(|(c, s)| *c == s.color)
        };
        let matching: Vec<&Generator> = self.generators.values().filter(fits).collect();
        if let Some(gen) = matching.get(rng.next_u32() as usize % matching.len().max(1)) {
            return FreeElement::generator(&self.colors, gen);
        }
        if corolla.is_unary_same_color() {
            return self.identity(&corolla.root_color).expect("known color");
        }
        panic!("no generator matches the corolla {corolla:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Head;
    use rand::SeedableRng;

    fn binary_collection() -> PointedCollection {
        PointedCollection {
            colors: vec!["a".to_string()],
            generators: vec![Generator {
                name: "m".to_string(),
                root_color: "a".to_string(),
                slots: vec!["a".to_string(), "a".to_string()],
                symmetry: Symmetry::None,
            }],
        }
    }

    fn corolla2(colors: &ColorSet, root: &str, s1: &str, s2: &str) -> YoungForest {
        YoungForest::corolla_shape(colors.clone(), root, "a", [(s1, "a"), (s2, "a")])
    }

    #[test]
    fn elements_must_fit_their_vertices() {
        let op = FreeOperad::new(&binary_collection()).unwrap();
        let colors = op.color_set().clone();
        // A unary vertex cannot carry the binary generator.
        let x = YoungForest::new(
            ColoredSet::new(colors.clone(), [("l1", "a")]),
            ColoredSet::new(colors.clone(), [("v", "a")]),
            [("l1", "v")],
        );
        let y = YoungForest::corolla_shape(colors.clone(), "R", "a", [("A", "a")]);
        let f = Forest::new(
            x,
            y,
            [
                (Tail::Input("A".into()), Head::Slot("l1".into())),
                (Tail::Vertex("v".into()), Head::Root("R".into())),
            ],
        );
        assert_eq!(f.validate(), Ok(()));
        let m = op.element("m").unwrap();
        let dec = Decoration::from([("v".to_string(), m)]);
        assert!(op.act(&f, &dec).is_err());
    }

    /// y is a corolla with three slots; x stacks two binary vertices.
    fn two_binary_stack(colors: &ColorSet) -> Forest {
        let x = YoungForest::new(
            ColoredSet::new(
                colors.clone(),
                [("b1", "a"), ("b2", "a"), ("t1", "a"), ("t2", "a")],
            ),
            ColoredSet::new(colors.clone(), [("bot", "a"), ("top", "a")]),
            [("b1", "bot"), ("b2", "bot"), ("t1", "top"), ("t2", "top")],
        );
        let y = YoungForest::corolla_shape(
            colors.clone(),
            "R",
            "a",
            [("A", "a"), ("B", "a"), ("C", "a")],
        );
        Forest::new(
            x,
            y,
            [
                (Tail::Input("A".into()), Head::Slot("t1".into())),
                (Tail::Input("B".into()), Head::Slot("t2".into())),
                (Tail::Input("C".into()), Head::Slot("b2".into())),
                (Tail::Vertex("top".into()), Head::Slot("b1".into())),
                (Tail::Vertex("bot".into()), Head::Root("R".into())),
            ],
        )
    }

    #[test]
    fn grafting_m_into_m_yields_the_two_vertex_element() {
        let op = FreeOperad::new(&binary_collection()).unwrap();
        let colors = op.color_set().clone();
        let f = two_binary_stack(&colors);
        assert_eq!(f.validate(), Ok(()));
        let m = op.element("m").unwrap();
        let dec = Decoration::from([
            ("bot".to_string(), m.clone()),
            ("top".to_string(), m.clone()),
        ]);
        let out = op.act(&f, &dec).unwrap();
        let e = &out["R"];
        assert_eq!(op.validate_point(&f.target.corolla("R").unwrap(), e), Ok(()));
        assert_eq!(e.shape.source.outputs.len(), 2);
        assert_eq!(e.shape.source.inputs.len(), 4);
        assert_eq!(e.shape.internal_edge_ids().len(), 1);
        assert!(e.decorations.values().all(|g| g == "m"));
    }

    #[test]
    fn grafting_a_unit_into_a_slot_preserves_the_element() {
        let op = FreeOperad::new(&binary_collection()).unwrap();
        let colors = op.color_set().clone();
        // x: binary vertex v with a unary vertex u in its first slot.
        let x = YoungForest::new(
            ColoredSet::new(colors.clone(), [("p", "a"), ("q", "a"), ("w", "a")]),
            ColoredSet::new(colors.clone(), [("v", "a"), ("u", "a")]),
            [("p", "v"), ("q", "v"), ("w", "u")],
        );
        let y = corolla2(&colors, "R", "A", "B");
        let f = Forest::new(
            x,
            y,
            [
                (Tail::Input("A".into()), Head::Slot("w".into())),
                (Tail::Input("B".into()), Head::Slot("q".into())),
                (Tail::Vertex("u".into()), Head::Slot("p".into())),
                (Tail::Vertex("v".into()), Head::Root("R".into())),
            ],
        );
        assert_eq!(f.validate(), Ok(()));
        let m = op.element("m").unwrap();
        let dec = Decoration::from([
            ("v".to_string(), m.clone()),
            ("u".to_string(), op.identity("a").unwrap()),
        ]);
        let out = op.act(&f, &dec).unwrap();
        assert!(op.points_equal(&out["R"], &m, 0.0));
    }

    fn transposition(colors: &ColorSet) -> Forest {
        let y = corolla2(colors, "r", "s1", "s2");
        let y2 = corolla2(colors, "r2", "c1", "c2");
        Forest::new(
            y.clone(),
            y2,
            [
                (Tail::Input("c1".into()), Head::Slot("s2".into())),
                (Tail::Input("c2".into()), Head::Slot("s1".into())),
                (Tail::Vertex("r".into()), Head::Root("r2".into())),
            ],
        )
    }

    #[test]
    fn transposing_twice_is_the_identity_relabeling() {
        let op = FreeOperad::new(&binary_collection()).unwrap();
        let colors = op.color_set().clone();
        let m = op.element("m").unwrap();
        let tau = transposition(&colors);
        let once = op
            .act(&tau, &Decoration::from([("r".to_string(), m.clone())]))
            .unwrap();
        // Asymmetric generator: one twist is a different element.
        assert!(!op.points_equal(&once["r2"], &m, 0.0));
        // Twist back: rename r2's corolla onto r's and act again.
        let tau_back = transport(
            &transposition(&colors),
            &YoungIso {
                inputs: [("s1", "c1"), ("s2", "c2")]
                    .map(|(x, y)| (x.to_string(), y.to_string()))
                    .into(),
                outputs: BTreeMap::from([("r".to_string(), "r2".to_string())]),
            },
            &YoungIso {
                inputs: [("c1", "s1"), ("c2", "s2")]
                    .map(|(x, y)| (x.to_string(), y.to_string()))
                    .into(),
                outputs: BTreeMap::from([("r2".to_string(), "r".to_string())]),
            },
        );
        let twice = op
            .act(&tau_back, &Decoration::from([("r2".to_string(), once["r2"].clone())]))
            .unwrap();
        assert!(op.points_equal(&twice["r"], &m, 0.0));
    }

    #[test]
    fn full_symmetry_absorbs_the_twist() {
        let mut coll = binary_collection();
        coll.generators[0].symmetry = Symmetry::Full;
        let op = FreeOperad::new(&coll).unwrap();
        let colors = op.color_set().clone();
        let m = op.element("m").unwrap();
        let tau = transposition(&colors);
        let once = op
            .act(&tau, &Decoration::from([("r".to_string(), m.clone())]))
            .unwrap();
        assert!(op.points_equal(&once["r2"], &m, 0.0));
    }

    #[test]
    fn act_is_functorial_on_elements() {
        let op = FreeOperad::new(&binary_collection()).unwrap();
        let colors = op.color_set().clone();
        let f = two_binary_stack(&colors);
        // g: relabel the 3-corolla into another 3-corolla with a twist.
        let y2 = YoungForest::corolla_shape(
            colors.clone(),
            "S",
            "a",
            [("D", "a"), ("E", "a"), ("F", "a")],
        );
        let g = Forest::new(
            f.target.clone(),
            y2,
            [
                (Tail::Input("D".into()), Head::Slot("C".into())),
                (Tail::Input("E".into()), Head::Slot("A".into())),
                (Tail::Input("F".into()), Head::Slot("B".into())),
                (Tail::Vertex("R".into()), Head::Root("S".into())),
            ],
        );
        let m = op.element("m").unwrap();
        let dec = Decoration::from([
            ("bot".to_string(), m.clone()),
            ("top".to_string(), m.clone()),
        ]);
        let two_step = op.act(&g, &op.act(&f, &dec).unwrap()).unwrap();
        let one_step = op.act(&compose(&g, &f).unwrap(), &dec).unwrap();
        assert!(op.points_equal(&two_step["S"], &one_step["S"], 0.0));
    }

    #[test]
    fn collection_json_loads_and_validates() {
        let json = r#"{
            "colors": ["a"],
            "generators": [
                {"name": "m", "root_color": "a", "slots": ["a", "a"], "symmetry": "none"}
            ]
        }"#;
        let coll = PointedCollection::from_json(json).unwrap();
        let op = FreeOperad::new(&coll).unwrap();
        assert!(op.generator("m").is_some());
        let bad = PointedCollection {
            colors: vec!["a".to_string()],
            generators: vec![Generator {
                name: "m".to_string(),
                root_color: "b".to_string(),
                slots: vec![],
                symmetry: Symmetry::None,
            }],
        };
        assert!(FreeOperad::new(&bad).is_err());
    }

    #[test]
    fn sampling_returns_a_matching_generator() {
        let op = FreeOperad::new(&binary_collection()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let corolla = op.generator("m").unwrap().corolla();
        let e = op.sample_point(&corolla, &mut rng);
        assert_eq!(op.validate_point(&corolla, &e), Ok(()));
        assert_eq!(e.decorations.len(), 1);
    }
}
