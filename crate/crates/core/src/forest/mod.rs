//! Young forests and the forests that assemble them.
//!
//! A young forest is an arbitrary map of colored sets `x: I_x -> J_x`,
//! read as a disjoint union of corollas: each root `j` in `J_x` carries the
//! input slots `x^{-1}(j)`. A forest `f: x -> y` between young forests is a
//! color-preserving bijection
//!
//! ```text
//! f : I_y ⊔ J_x  ->  J_y ⊔ I_x
//! ```
//!
//! sending each input of `y` and each vertex (root of `x`) either to a root
//! of `y` or into an input slot of `x`, subject to acyclicity and to
//! compatibility with the root structure of `y`. Forests compose by chasing
//! attachments through the middle young forest; the four edge species
//! (unit, leaf, root, internal) fall out of the bijection.

mod compose;
mod hom;
mod iso;
mod wedge;

pub use compose::{chase_tail, compose, composite_position, GfStart};
pub use hom::hom_over;
pub use iso::{
    bijections, forest_isos, forest_isos_fixing_target, rename_young, transport, young_isos,
    YoungIso,
};
pub use wedge::{
    decompose_into_trees, disjoint_union_forests, disjoint_union_young, restrict_to_root, wedge,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::colored::{ColorSet, ColoredElem, ColoredSet};

/// Why a forest failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    NotBijection,
    ColorBroken,
    Cycle,
    RootMismatch,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Defect::NotBijection => "NotBijection",
            Defect::ColorBroken => "ColorBroken",
            Defect::Cycle => "Cycle",
            Defect::RootMismatch => "RootMismatch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ForestOpError {
    #[error("boundary mismatch: inner target differs from outer source")]
    BoundaryMismatch,
    #[error("chase did not terminate; inputs are not valid forests")]
    ChaseDiverged,
    #[error("invalid forest: {0}")]
    Invalid(Defect),
    #[error("unknown id {0:?}")]
    UnknownId(String),
}

/// A map of colored sets presented as a disjoint union of corollas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungForest {
    pub inputs: ColoredSet,
    pub outputs: ColoredSet,
    /// Total map inputs -> outputs. Need not preserve colors.
    pub structure: BTreeMap<String, String>,
}

impl YoungForest {
    pub fn new<I, S, T>(inputs: ColoredSet, outputs: ColoredSet, structure: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let structure = structure.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        YoungForest { inputs, outputs, structure }
    }

    pub fn empty(colors: ColorSet) -> Self {
        YoungForest {
            inputs: ColoredSet::empty(colors.clone()),
            outputs: ColoredSet::empty(colors),
            structure: BTreeMap::new(),
        }
    }

    /// A single corolla: one root with the given slots.
    pub fn corolla_shape<S, T>(
        colors: ColorSet,
        root_id: &str,
        root_color: &str,
        slots: impl IntoIterator<Item = (S, T)>,
    ) -> Self
    where
        S: Into<String>,
        T: Into<String>,
    {
        let slots: Vec<(String, String)> =
            slots.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        let inputs = ColoredSet::new(colors.clone(), slots.iter().cloned());
        let outputs = ColoredSet::new(colors, [(root_id, root_color)]);
        let structure = slots.into_iter().map(|(id, _)| (id, root_id.to_string())).collect();
        YoungForest { inputs, outputs, structure }
    }

    pub fn colors(&self) -> &ColorSet {
        &self.inputs.colors
    }

    pub fn validate(&self) -> Result<(), DefectDetail> {
        self.inputs.validate().map_err(|e| DefectDetail::new(Defect::NotBijection, e))?;
        self.outputs.validate().map_err(|e| DefectDetail::new(Defect::NotBijection, e))?;
        if self.inputs.colors != self.outputs.colors {
            return Err(DefectDetail::plain(Defect::ColorBroken, "color sets differ"));
        }
        for id in self.inputs.ids() {
            match self.structure.get(id) {
                None => {
                    return Err(DefectDetail::plain(
                        Defect::NotBijection,
                        format!("input {id:?} has no root"),
                    ))
                }
                Some(j) if !self.outputs.contains(j) => {
                    return Err(DefectDetail::plain(
                        Defect::NotBijection,
                        format!("input {id:?} maps to unknown root {j:?}"),
                    ))
                }
                _ => {}
            }
        }
        for k in self.structure.keys() {
            if !self.inputs.contains(k) {
                return Err(DefectDetail::plain(
                    Defect::NotBijection,
                    format!("structure key {k:?} is not an input"),
                ));
            }
        }
        Ok(())
    }

    pub fn root_of_input(&self, id: &str) -> Option<&str> {
        self.structure.get(id).map(String::as_str)
    }

    /// Input slots of a root, in input order.
    pub fn fiber(&self, root: &str) -> Vec<&str> {
        self.inputs
            .ids()
            .filter(|id| self.structure.get(*id).map(String::as_str) == Some(root))
            .collect()
    }

    pub fn corolla(&self, root: &str) -> Option<Corolla> {
        let root_color = self.outputs.color_of(root)?.to_string();
        let slots = self
            .inputs
            .elements
            .iter()
            .filter(|e| self.structure.get(&e.id).map(String::as_str) == Some(root))
            .cloned()
            .collect();
        Some(Corolla { root_id: root.to_string(), root_color, slots })
    }
}

/// One root together with its input slots: the shape an operad value sits on.
#[derive(Debug, Clone, PartialEq)]
pub struct Corolla {
    pub root_id: String,
    pub root_color: String,
    pub slots: Vec<ColoredElem>,
}

impl Corolla {
    pub fn is_unary_same_color(&self) -> bool {
        self.slots.len() == 1 && self.slots[0].color == self.root_color
    }
}

/// Validation failure with a human-readable detail. The `defect` code is the
/// machine-readable part.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectDetail {
    pub defect: Defect,
    pub detail: String,
}

impl DefectDetail {
    fn new(defect: Defect, e: impl fmt::Display) -> Self {
        DefectDetail { defect, detail: e.to_string() }
    }

    fn plain(defect: Defect, detail: impl Into<String>) -> Self {
        DefectDetail { defect, detail: detail.into() }
    }
}

impl fmt::Display for DefectDetail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.defect, self.detail)
    }
}

/// Domain element of the attaching bijection: an input of the target or a
/// vertex (root) of the source.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tail {
    Input(String),
    Vertex(String),
}

/// Codomain element of the attaching bijection (an "extended edge"): a root
/// of the target or an input slot of the source.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Root(String),
    Slot(String),
}

impl Tail {
    pub fn encode(&self) -> String {
        match self {
            Tail::Input(i) => format!("in:{i}"),
            Tail::Vertex(v) => format!("src_out:{v}"),
        }
    }

    pub fn decode(s: &str) -> Option<Tail> {
        if let Some(rest) = s.strip_prefix("in:") {
            Some(Tail::Input(rest.to_string()))
        } else {
            s.strip_prefix("src_out:").map(|rest| Tail::Vertex(rest.to_string()))
        }
    }
}

impl Head {
    pub fn encode(&self) -> String {
        match self {
            Head::Root(r) => format!("out:{r}"),
            Head::Slot(s) => format!("src_in:{s}"),
        }
    }

    pub fn decode(s: &str) -> Option<Head> {
        if let Some(rest) = s.strip_prefix("out:") {
            Some(Head::Root(rest.to_string()))
        } else {
            s.strip_prefix("src_in:").map(|rest| Head::Slot(rest.to_string()))
        }
    }
}

/// Any of the four underlying sets of a forest, for the total root map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ForestElem {
    /// Input of the target (`I_y`).
    Input(String),
    /// Root of the target (`J_y`).
    Root(String),
    /// Input slot of the source (`I_x`).
    Slot(String),
    /// Vertex of the forest, i.e. root of the source (`J_x`).
    Vertex(String),
}

/// A forest `f: source -> target`: the attaching bijection together with its
/// two young forests.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub source: YoungForest,
    pub target: YoungForest,
    pub attach: BTreeMap<Tail, Head>,
}

impl Forest {
    pub fn new(
        source: YoungForest,
        target: YoungForest,
        attach: impl IntoIterator<Item = (Tail, Head)>,
    ) -> Self {
        Forest { source, target, attach: attach.into_iter().collect() }
    }

    /// The identity forest on `y`: every input is a leaf into its own slot,
    /// every vertex roots at itself.
    pub fn identity(y: &YoungForest) -> Forest {
        let mut attach = BTreeMap::new();
        for i in y.inputs.ids() {
            attach.insert(Tail::Input(i.to_string()), Head::Slot(i.to_string()));
        }
        for j in y.outputs.ids() {
            attach.insert(Tail::Vertex(j.to_string()), Head::Root(j.to_string()));
        }
        Forest { source: y.clone(), target: y.clone(), attach }
    }

    /// The unit tree at a color: no vertices, one input attached straight to
    /// the root.
    pub fn unit(colors: &ColorSet, color: &str, input_id: &str, root_id: &str) -> Forest {
        let target = YoungForest::new(
            ColoredSet::new(colors.clone(), [(input_id, color)]),
            ColoredSet::new(colors.clone(), [(root_id, color)]),
            [(input_id, root_id)],
        );
        let attach =
            BTreeMap::from([(Tail::Input(input_id.to_string()), Head::Root(root_id.to_string()))]);
        Forest { source: YoungForest::empty(colors.clone()), target, attach }
    }

    pub fn color_of_tail(&self, t: &Tail) -> Option<&str> {
        match t {
            Tail::Input(i) => self.target.inputs.color_of(i),
            Tail::Vertex(v) => self.source.outputs.color_of(v),
        }
    }

    pub fn color_of_head(&self, h: &Head) -> Option<&str> {
        match h {
            Head::Root(r) => self.target.outputs.color_of(r),
            Head::Slot(s) => self.source.inputs.color_of(s),
        }
    }

    /// Full validation, in order: well-formed pieces, bijectivity, color
    /// preservation, acyclicity, root compatibility.
    pub fn validate(&self) -> Result<(), DefectDetail> {
        self.source.validate()?;
        self.target.validate()?;
        if self.source.colors() != self.target.colors() {
            return Err(DefectDetail::plain(Defect::ColorBroken, "color sets differ"));
        }

        // Bijectivity: keys are exactly I_y ⊔ J_x, values distinct in J_y ⊔ I_x.
        let n_dom = self.target.inputs.len() + self.source.outputs.len();
        let n_cod = self.target.outputs.len() + self.source.inputs.len();
        if self.attach.len() != n_dom || n_dom != n_cod {
            return Err(DefectDetail::plain(
                Defect::NotBijection,
                format!("attach has {} entries for {n_dom} tails and {n_cod} heads", self.attach.len()),
            ));
        }
        let mut heads = BTreeSet::new();
        for (t, h) in &self.attach {
            let present = match t {
                Tail::Input(i) => self.target.inputs.contains(i),
                Tail::Vertex(v) => self.source.outputs.contains(v),
            };
            if !present {
                return Err(DefectDetail::plain(
                    Defect::NotBijection,
                    format!("unknown tail {}", t.encode()),
                ));
            }
            let legal = match h {
                Head::Root(r) => self.target.outputs.contains(r),
                Head::Slot(s) => self.source.inputs.contains(s),
            };
            if !legal {
                return Err(DefectDetail::plain(
                    Defect::NotBijection,
                    format!("unknown head {}", h.encode()),
                ));
            }
            if !heads.insert(h.clone()) {
                return Err(DefectDetail::plain(
                    Defect::NotBijection,
                    format!("head {} hit twice", h.encode()),
                ));
            }
        }

        for (t, h) in &self.attach {
            if self.color_of_tail(t) != self.color_of_head(h) {
                return Err(DefectDetail::plain(
                    Defect::ColorBroken,
                    format!("{} -> {} changes color", t.encode(), h.encode()),
                ));
            }
        }

        // Acyclicity: chasing any slot through vertices must reach a root
        // within |I_x| steps.
        for s in self.source.inputs.ids() {
            if self.root_of_slot(s).is_none() {
                return Err(DefectDetail::plain(
                    Defect::Cycle,
                    format!("slot {s:?} never reaches a root"),
                ));
            }
        }

        // Root compatibility: each input of y lands under its own root.
        for i in self.target.inputs.ids() {
            let chased = match &self.attach[&Tail::Input(i.to_string())] {
                Head::Root(r) => Some(r.clone()),
                Head::Slot(s) => self.root_of_slot(s),
            };
            if chased.as_deref() != self.target.root_of_input(i) {
                return Err(DefectDetail::plain(
                    Defect::RootMismatch,
                    format!("input {i:?} lands under {chased:?}"),
                ));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Chase a slot of the source up to the root of the target it sits
    /// under. `None` means a cycle (only possible on invalid data).
    fn root_of_slot(&self, slot: &str) -> Option<String> {
        let bound = self.source.inputs.len() + 1;
        let mut s = slot.to_string();
        for _ in 0..bound {
            let v = self.source.structure.get(&s)?;
            match self.attach.get(&Tail::Vertex(v.clone()))? {
                Head::Root(r) => return Some(r.clone()),
                Head::Slot(next) => s = next.clone(),
            }
        }
        None
    }

    /// The root of the target over any of the four underlying sets.
    pub fn root_of(&self, e: &ForestElem) -> Result<String, ForestOpError> {
        let chase_head = |h: &Head| match h {
            Head::Root(r) => Ok(r.clone()),
            Head::Slot(s) => self.root_of_slot(s).ok_or(ForestOpError::ChaseDiverged),
        };
        match e {
            ForestElem::Root(r) => {
                if self.target.outputs.contains(r) {
                    Ok(r.clone())
                } else {
                    Err(ForestOpError::UnknownId(r.clone()))
                }
            }
            ForestElem::Input(i) => {
                let h = self
                    .attach
                    .get(&Tail::Input(i.clone()))
                    .ok_or_else(|| ForestOpError::UnknownId(i.clone()))?;
                chase_head(h)
            }
            ForestElem::Vertex(v) => {
                let h = self
                    .attach
                    .get(&Tail::Vertex(v.clone()))
                    .ok_or_else(|| ForestOpError::UnknownId(v.clone()))?;
                chase_head(h)
            }
            ForestElem::Slot(s) => {
                if !self.source.inputs.contains(s) {
                    return Err(ForestOpError::UnknownId(s.clone()));
                }
                self.root_of_slot(s).ok_or(ForestOpError::ChaseDiverged)
            }
        }
    }

    /// Total root map on `I_y ⊔ J_y ⊔ I_x ⊔ J_x`.
    pub fn root_map(&self) -> Result<BTreeMap<ForestElem, String>, ForestOpError> {
        let mut out = BTreeMap::new();
        let elems = self
            .target
            .inputs
            .ids()
            .map(|i| ForestElem::Input(i.to_string()))
            .chain(self.target.outputs.ids().map(|r| ForestElem::Root(r.to_string())))
            .chain(self.source.inputs.ids().map(|s| ForestElem::Slot(s.to_string())))
            .chain(self.source.outputs.ids().map(|v| ForestElem::Vertex(v.to_string())));
        for e in elems {
            let r = self.root_of(&e)?;
            out.insert(e, r);
        }
        Ok(out)
    }

    pub fn classify_edges(&self) -> EdgeClassification {
        let mut c = EdgeClassification::default();
        for (t, h) in &self.attach {
            match (t, h) {
                (Tail::Input(i), Head::Root(r)) => c.unit.push((i.clone(), r.clone())),
                (Tail::Input(i), Head::Slot(s)) => c.leaf.push((i.clone(), s.clone())),
                (Tail::Vertex(v), Head::Root(r)) => c.root.push((v.clone(), r.clone())),
                (Tail::Vertex(v), Head::Slot(s)) => c.internal.push((v.clone(), s.clone())),
            }
        }
        c
    }

    /// Ids of the internal edges, i.e. the vertices whose output lands in a
    /// slot. This is the canonical index set for edge labelings.
    pub fn internal_edge_ids(&self) -> Vec<String> {
        self.attach
            .iter()
            .filter_map(|(t, h)| match (t, h) {
                (Tail::Vertex(v), Head::Slot(_)) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }

    /// Vertices of the forest (roots of the source), in source order.
    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.source.outputs.ids()
    }
}

/// The four edge species of a forest, as (tail id, head id) pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EdgeClassification {
    /// Inputs attached straight to a root.
    pub unit: Vec<(String, String)>,
    /// Inputs attached into a slot.
    pub leaf: Vec<(String, String)>,
    /// Vertices attached to a root.
    pub root: Vec<(String, String)>,
    /// Vertices attached into a slot: the internal edges.
    pub internal: Vec<(String, String)>,
}

impl Serialize for Forest {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            source: &'a YoungForest,
            target: &'a YoungForest,
            attach: BTreeMap<String, String>,
        }
        let attach =
            self.attach.iter().map(|(t, h)| (t.encode(), h.encode())).collect();
        Repr { source: &self.source, target: &self.target, attach }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Forest {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Forest, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            source: YoungForest,
            target: YoungForest,
            attach: BTreeMap<String, String>,
        }
        let r = Repr::deserialize(d)?;
        let mut attach = BTreeMap::new();
        for (k, v) in r.attach {
            let t = Tail::decode(&k)
                .ok_or_else(|| D::Error::custom(format!("bad attach key {k:?}")))?;
            let h = Head::decode(&v)
                .ok_or_else(|| D::Error::custom(format!("bad attach value {v:?}")))?;
            attach.insert(t, h);
        }
        Ok(Forest { source: r.source, target: r.target, attach })
    }
}
