//! Operads as actions of forests on per-vertex values.
//!
//! An operad assigns to every corolla a set of values and to every forest
//! `f: x -> y` a map that combines a value for each vertex of `x` into a
//! value for each root of `y`. The action must be functorial (compose
//! forests, compose actions), unital on identity forests, and monoidal on
//! disjoint unions. Implementations are plain behavior objects so the
//! harness can treat the terminal operad, free operads, and the disc
//! operads uniformly.

use std::collections::BTreeMap;
use std::fmt;

use rand::RngCore;
use thiserror::Error;

use crate::colored::ColorSet;
use crate::forest::{Corolla, Forest, YoungForest};

/// One operad value per vertex (root of a young forest), keyed by id.
pub type Decoration<P> = BTreeMap<String, P>;

#[derive(Debug, Error, PartialEq)]
pub enum OperadError {
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("bad decoration: {0}")]
    BadDecoration(String),
    #[error("unknown color {0:?}")]
    UnknownColor(String),
}

pub trait Operad {
    type Point: Clone + fmt::Debug;

    fn color_set(&self) -> &ColorSet;

    /// Is `p` a value of this operad on the given corolla?
    fn validate_point(&self, corolla: &Corolla, p: &Self::Point) -> Result<(), OperadError>;

    /// Push a source decoration along a forest. The result decorates the
    /// target roots. Callers pass a valid forest and a decoration keyed by
    /// exactly the source roots.
    fn act(
        &self,
        f: &Forest,
        dec: &Decoration<Self::Point>,
    ) -> Result<Decoration<Self::Point>, OperadError>;

    /// The c-colored unit: the value on the unary corolla (c; c) that acts
    /// as an identity for grafting.
    fn identity(&self, color: &str) -> Result<Self::Point, OperadError>;

    fn is_identity(&self, corolla: &Corolla, p: &Self::Point, tol: f64) -> bool;

    fn points_equal(&self, a: &Self::Point, b: &Self::Point, tol: f64) -> bool;

    /// A pseudorandom value on the corolla, for the property suites.
    fn sample_point(&self, corolla: &Corolla, rng: &mut dyn RngCore) -> Self::Point;
}

/// Check a decoration against a young forest: one valid point per root.
pub fn validate_decoration<O: Operad>(
    operad: &O,
    x: &YoungForest,
    dec: &Decoration<O::Point>,
) -> Result<(), OperadError> {
    for j in x.outputs.ids() {
        let p = dec
            .get(j)
            .ok_or_else(|| OperadError::BadDecoration(format!("vertex {j:?} undecorated")))?;
        let corolla = x.corolla(j).expect("root exists");
        operad.validate_point(&corolla, p)?;
    }
    for k in dec.keys() {
        if !x.outputs.contains(k) {
            return Err(OperadError::BadDecoration(format!("decoration key {k:?} is not a root")));
        }
    }
    Ok(())
}

pub fn decorations_equal<O: Operad>(
    operad: &O,
    a: &Decoration<O::Point>,
    b: &Decoration<O::Point>,
    tol: f64,
) -> bool {
    a.len() == b.len()
        && a.iter().all(|(k, pa)| b.get(k).is_some_and(|pb| operad.points_equal(pa, pb, tol)))
}

/// A decoration assigning every root of `y` its colored unit.
pub fn identity_decoration<O: Operad>(
    operad: &O,
    y: &YoungForest,
) -> Result<Decoration<O::Point>, OperadError> {
    y.outputs
        .ids()
        .map(|j| {
            let c = y.outputs.color_of(j).expect("root has a color");
            Ok((j.to_string(), operad.identity(c)?))
        })
        .collect()
}

/// Evaluate a decorated tree down to the single value at its root: the
/// action of the shape, projected to the unique target root.
pub fn counit_eval<O: Operad>(
    operad: &O,
    shape: &Forest,
    dec: &Decoration<O::Point>,
) -> Result<O::Point, OperadError> {
    let roots: Vec<&str> = shape.target.outputs.ids().collect();
    if roots.len() != 1 {
        return Err(OperadError::InvalidForest(format!(
            "expected a single target root, found {}",
            roots.len()
        )));
    }
    let out = operad.act(shape, dec)?;
    Ok(out[roots[0]].clone())
}

/// The operad with exactly one value everywhere.
#[derive(Debug, Clone)]
pub struct TerminalOperad {
    pub colors: ColorSet,
}

impl Operad for TerminalOperad {
    type Point = ();

    fn color_set(&self) -> &ColorSet {
        &self.colors
    }

    fn validate_point(&self, corolla: &Corolla, _p: &()) -> Result<(), OperadError> {
        if !self.colors.contains(&corolla.root_color) {
            return Err(OperadError::UnknownColor(corolla.root_color.clone()));
        }
        Ok(())
    }

    fn act(&self, f: &Forest, dec: &Decoration<()>) -> Result<Decoration<()>, OperadError> {
        validate_decoration(self, &f.source, dec)?;
        Ok(f.target.outputs.ids().map(|j| (j.to_string(), ())).collect())
    }

    fn identity(&self, color: &str) -> Result<(), OperadError> {
        if !self.colors.contains(color) {
            return Err(OperadError::UnknownColor(color.to_string()));
        }
        Ok(())
    }

    fn is_identity(&self, corolla: &Corolla, _p: &(), _tol: f64) -> bool {
        corolla.is_unary_same_color()
    }

    fn points_equal(&self, _a: &(), _b: &(), _tol: f64) -> bool {
        true
    }

    fn sample_point(&self, _corolla: &Corolla, _rng: &mut dyn RngCore) {}
}
