//! Finite colored sets and the maps between them.
//!
//! A colored set is a finite ordered list of string ids, each tagged with a
//! color drawn from an ambient [`ColorSet`]. Maps come in two flavours:
//! plain (no condition) and colored (color preserving). Disjoint unions tag
//! ids with `L:`/`R:` prefixes so the union of overlapping id sets is still
//! well defined at the data level.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoredError {
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("element {id:?} has color {color:?} not in the color set")]
    UnknownColor { id: String, color: String },
    #[error("map is not total: {0:?} has no image")]
    NotTotal(String),
    #[error("map key {0:?} is not in the domain")]
    UnknownKey(String),
    #[error("map sends {0:?} outside the codomain (to {1:?})")]
    OutsideCodomain(String, String),
    #[error("color sets differ")]
    ColorSetMismatch,
}

/// An ordered list of distinct color names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorSet {
    pub names: Vec<String>,
}

impl ColorSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let mut seen = BTreeSet::new();
        let names = names
            .into_iter()
            .map(Into::into)
            .filter(|n| seen.insert(n.clone()))
            .collect();
        ColorSet { names }
    }

    pub fn contains(&self, color: &str) -> bool {
        self.names.iter().any(|n| n == color)
    }

    /// Union by name, keeping first-seen order.
    pub fn merge(&self, other: &ColorSet) -> ColorSet {
        ColorSet::new(self.names.iter().chain(other.names.iter()).cloned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredElem {
    pub id: String,
    pub color: String,
}

impl ColoredElem {
    pub fn retagged(&self, prefix: &str) -> ColoredElem {
        ColoredElem { id: tag(prefix, &self.id), color: self.color.clone() }
    }
}

/// A finite set with a coloring function into a [`ColorSet`].
///
/// Element order is part of the data only insofar as iteration and JSON
/// output are deterministic; isomorphism never depends on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredSet {
    pub colors: ColorSet,
    pub elements: Vec<ColoredElem>,
}

impl ColoredSet {
    pub fn new<I, S, T>(colors: ColorSet, elements: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let elements = elements
            .into_iter()
            .map(|(id, color)| ColoredElem { id: id.into(), color: color.into() })
            .collect();
        ColoredSet { colors, elements }
    }

    pub fn empty(colors: ColorSet) -> Self {
        ColoredSet { colors, elements: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), ColoredError> {
        let mut seen = BTreeSet::new();
        for e in &self.elements {
            if !seen.insert(&e.id) {
                return Err(ColoredError::DuplicateId(e.id.clone()));
            }
            if !self.colors.contains(&e.color) {
                return Err(ColoredError::UnknownColor { id: e.id.clone(), color: e.color.clone() });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.elements.iter().any(|e| e.id == id)
    }

    pub fn color_of(&self, id: &str) -> Option<&str> {
        self.elements.iter().find(|e| e.id == id).map(|e| e.color.as_str())
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(|e| e.id.as_str())
    }

    /// Elements of a given color, in set order.
    pub fn ids_of_color<'a>(&'a self, color: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.elements.iter().filter(move |e| e.color == color).map(|e| e.id.as_str())
    }

    /// Keep the elements whose id satisfies the predicate, preserving order.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> ColoredSet {
        ColoredSet {
            colors: self.colors.clone(),
            elements: self.elements.iter().filter(|e| keep(&e.id)).cloned().collect(),
        }
    }
}

pub fn tag(prefix: &str, id: &str) -> String {
    format!("{prefix}:{id}")
}

/// Disjoint union with `L:`/`R:` id tagging. Both sets must share a color set.
pub fn disjoint_union(a: &ColoredSet, b: &ColoredSet) -> Result<ColoredSet, ColoredError> {
    if a.colors != b.colors {
        return Err(ColoredError::ColorSetMismatch);
    }
    let mut elements = Vec::with_capacity(a.len() + b.len());
    for e in &a.elements {
        elements.push(ColoredElem { id: tag("L", &e.id), color: e.color.clone() });
    }
    for e in &b.elements {
        elements.push(ColoredElem { id: tag("R", &e.id), color: e.color.clone() });
    }
    Ok(ColoredSet { colors: a.colors.clone(), elements })
}

/// A map of finite sets, stored with its (co)domain so totality and color
/// preservation are checkable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoredMap {
    pub domain: ColoredSet,
    pub codomain: ColoredSet,
    pub map: BTreeMap<String, String>,
}

impl ColoredMap {
    pub fn new<I, S, T>(domain: ColoredSet, codomain: ColoredSet, entries: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let map = entries.into_iter().map(|(k, v)| (k.into(), v.into())).collect();
        ColoredMap { domain, codomain, map }
    }

    pub fn apply(&self, id: &str) -> Option<&str> {
        self.map.get(id).map(String::as_str)
    }

    /// Total on the domain and landing in the codomain.
    pub fn validate(&self) -> Result<(), ColoredError> {
        self.domain.validate()?;
        self.codomain.validate()?;
        for id in self.domain.ids() {
            let v = self.map.get(id).ok_or_else(|| ColoredError::NotTotal(id.to_string()))?;
            if !self.codomain.contains(v) {
                return Err(ColoredError::OutsideCodomain(id.to_string(), v.clone()));
            }
        }
        for k in self.map.keys() {
            if !self.domain.contains(k) {
                return Err(ColoredError::UnknownKey(k.clone()));
            }
        }
        Ok(())
    }

    pub fn is_colored(&self) -> bool {
        self.validate().is_ok()
            && self
                .domain
                .elements
                .iter()
                .all(|e| self.codomain.color_of(&self.map[&e.id]) == Some(e.color.as_str()))
    }

    /// Color-preserving bijection.
    pub fn is_colored_iso(&self) -> bool {
        if !self.is_colored() {
            return false;
        }
        let images: BTreeSet<&String> = self.map.values().collect();
        images.len() == self.domain.len() && self.domain.len() == self.codomain.len()
    }

    pub fn inverse(&self) -> Option<ColoredMap> {
        if !self.is_colored_iso() {
            return None;
        }
        Some(ColoredMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        })
    }
}

/// g after f. The middle sets must agree strictly.
pub fn compose_maps(g: &ColoredMap, f: &ColoredMap) -> Result<ColoredMap, ColoredError> {
    if f.codomain != g.domain {
        return Err(ColoredError::ColorSetMismatch);
    }
    let mut map = BTreeMap::new();
    for (k, v) in &f.map {
        let w = g.map.get(v).ok_or_else(|| ColoredError::NotTotal(v.clone()))?;
        map.insert(k.clone(), w.clone());
    }
    Ok(ColoredMap { domain: f.domain.clone(), codomain: g.codomain.clone(), map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> ColorSet {
        ColorSet::new(["a", "b"])
    }

    #[test]
    fn union_tags_left_and_right() {
        let x = ColoredSet::new(ab(), [("1", "a")]);
        let y = ColoredSet::new(ab(), [("1", "a"), ("2", "b")]);
        let u = disjoint_union(&x, &y).unwrap();
        let got: Vec<(&str, &str)> =
            u.elements.iter().map(|e| (e.id.as_str(), e.color.as_str())).collect();
        assert_eq!(got, vec![("L:1", "a"), ("R:1", "a"), ("R:2", "b")]);
        assert!(u.validate().is_ok());
    }

    #[test]
    fn union_requires_shared_colors() {
        let x = ColoredSet::new(ab(), [("1", "a")]);
        let y = ColoredSet::new(ColorSet::new(["a"]), [("1", "a")]);
        assert_eq!(disjoint_union(&x, &y), Err(ColoredError::ColorSetMismatch));
    }

    #[test]
    fn identity_is_a_colored_iso() {
        let x = ColoredSet::new(ab(), [("1", "a"), ("2", "b")]);
        let id = ColoredMap::new(x.clone(), x, [("1", "1"), ("2", "2")]);
        assert!(id.is_colored_iso());
    }

    #[test]
    fn color_breaking_map_is_not_colored() {
        let x = ColoredSet::new(ab(), [("1", "a")]);
        let y = ColoredSet::new(ab(), [("1", "b")]);
        let m = ColoredMap::new(x, y, [("1", "1")]);
        assert!(m.validate().is_ok());
        assert!(!m.is_colored());
        assert!(!m.is_colored_iso());
    }

    #[test]
    fn non_injective_map_is_not_an_iso() {
        let x = ColoredSet::new(ab(), [("1", "a"), ("2", "a")]);
        let y = ColoredSet::new(ab(), [("1", "a"), ("2", "a")]);
        let m = ColoredMap::new(x, y, [("1", "1"), ("2", "1")]);
        assert!(m.is_colored());
        assert!(!m.is_colored_iso());
    }

    #[test]
    fn composition_of_colored_maps_is_colored() {
        let x = ColoredSet::new(ab(), [("1", "a"), ("2", "b")]);
        let y = ColoredSet::new(ab(), [("p", "a"), ("q", "b")]);
        let z = ColoredSet::new(ab(), [("u", "a"), ("v", "b")]);
        let f = ColoredMap::new(x, y.clone(), [("1", "p"), ("2", "q")]);
        let g = ColoredMap::new(y, z, [("p", "u"), ("q", "v")]);
        let gf = compose_maps(&g, &f).unwrap();
        assert!(gf.is_colored());
        assert_eq!(gf.apply("1"), Some("u"));
    }

    #[test]
    fn union_is_associative_up_to_retagging() {
        let x = ColoredSet::new(ab(), [("1", "a")]);
        let y = ColoredSet::new(ab(), [("2", "b")]);
        let z = ColoredSet::new(ab(), [("3", "a")]);
        let left = disjoint_union(&disjoint_union(&x, &y).unwrap(), &z).unwrap();
        let right = disjoint_union(&x, &disjoint_union(&y, &z).unwrap()).unwrap();
        // The canonical comparison iso: (L:L:i, L:R:j, R:k) -> (L:i, R:L:j, R:R:k).
        let retag = ColoredMap::new(
            left.clone(),
            right.clone(),
            [("L:L:1", "L:1"), ("L:R:2", "R:L:2"), ("R:3", "R:R:3")],
        );
        assert!(retag.is_colored_iso());
        // And commutativity: swap the tags.
        let xy = disjoint_union(&x, &y).unwrap();
        let yx = disjoint_union(&y, &x).unwrap();
        let swap = ColoredMap::new(xy, yx, [("L:1", "R:1"), ("R:2", "L:2")]);
        assert!(swap.is_colored_iso());
    }
}
