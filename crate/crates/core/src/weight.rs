//! Root weights on young forests, the inequality that composition must
//! respect, and the bounded subclasses it carves out.
//!
//! A weight assigns a nonnegative integer to every root of a young forest.
//! A forest `f: x -> y` is weighted when, over every root `j` of `y`, the
//! weight `w_y(j)` covers the internal edges of `f` above `j` plus the
//! total weight of the `x`-vertices above `j`. Weighted forests compose:
//! the per-root internal edge count of a composite satisfies
//!
//! ```text
//! #E(gf)(j) = #E(g)(j) + #E(f)(j) - #un(f)(j)
//! ```
//!
//! and this identity drives both the closure check and the boundary
//! analysis at a saturated root (where `#E(gf)(j)` hits `k+1`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{compose, Forest, ForestElem, YoungForest};

/// Root id -> nonnegative weight.
pub type Weight = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedYoungForest {
    pub base: YoungForest,
    pub weight: Weight,
}

impl WeightedYoungForest {
    pub fn validate(&self) -> Result<(), WeightError> {
        self.base.validate().map_err(|e| WeightError::Invalid(e.to_string()))?;
        check_total(&self.base, &self.weight)
    }
}

/// A bound on weights: a finite integer (possibly -1, which no weight
/// satisfies) or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightBound {
    Finite(i64),
    Omega,
}

impl WeightBound {
    pub fn admits(&self, w: u64) -> bool {
        match self {
            WeightBound::Finite(k) => i64::try_from(w).map(|w| w <= *k).unwrap_or(false),
            WeightBound::Omega => true,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("invalid forest: {0}")]
    Invalid(String),
    #[error("weight is not total: root {0:?} has no weight")]
    MissingWeight(String),
    #[error("weight key {0:?} is not a root")]
    UnknownRoot(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

fn check_total(y: &YoungForest, w: &Weight) -> Result<(), WeightError> {
    for j in y.outputs.ids() {
        if !w.contains_key(j) {
            return Err(WeightError::MissingWeight(j.to_string()));
        }
    }
    for k in w.keys() {
        if !y.outputs.contains(k) {
            return Err(WeightError::UnknownRoot(k.clone()));
        }
    }
    Ok(())
}

/// Per-root tallies of a forest: its internal edges, unit edges, and source
/// vertices, grouped under the target root they live over.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootCounts {
    pub internal: BTreeMap<String, usize>,
    pub unit: BTreeMap<String, usize>,
    pub vertices: BTreeMap<String, Vec<String>>,
}

impl RootCounts {
    pub fn internal_at(&self, j: &str) -> usize {
        self.internal.get(j).copied().unwrap_or(0)
    }

    pub fn unit_at(&self, j: &str) -> usize {
        self.unit.get(j).copied().unwrap_or(0)
    }
}

pub fn root_counts(f: &Forest) -> Result<RootCounts, WeightError> {
    f.validate().map_err(|e| WeightError::Invalid(e.to_string()))?;
    let rm = f.root_map().map_err(|e| WeightError::Invalid(e.to_string()))?;
    let mut counts = RootCounts::default();
    for j in f.target.outputs.ids() {
        counts.internal.insert(j.to_string(), 0);
        counts.unit.insert(j.to_string(), 0);
        counts.vertices.insert(j.to_string(), Vec::new());
    }
    let classes = f.classify_edges();
    for (v, _) in &classes.internal {
        let j = &rm[&ForestElem::Vertex(v.clone())];
        *counts.internal.get_mut(j).expect("known root") += 1;
    }
    for (i, _) in &classes.unit {
        let j = &rm[&ForestElem::Input(i.clone())];
        *counts.unit.get_mut(j).expect("known root") += 1;
    }
    for v in f.source.outputs.ids() {
        let j = &rm[&ForestElem::Vertex(v.to_string())];
        counts.vertices.get_mut(j).expect("known root").push(v.to_string());
    }
    Ok(counts)
}

/// Does `f` carry `(x, wx)` to `(y, wy)` as a weighted forest? True iff
/// over every root `j` of the target, `wy(j)` is at least the number of
/// internal edges over `j` plus the weights of the source vertices over `j`.
pub fn is_weighted_forest(f: &Forest, wx: &Weight, wy: &Weight) -> Result<bool, WeightError> {
    check_total(&f.source, wx)?;
    check_total(&f.target, wy)?;
    let counts = root_counts(f)?;
    for j in f.target.outputs.ids() {
        let interior: u64 = counts.vertices[j].iter().map(|v| wx[v]).sum();
        if wy[j] < counts.internal_at(j) as u64 + interior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of `(x, wx)` in the weight-bounded class: every root weight
/// admitted by the bound.
pub fn in_for_k(x: &WeightedYoungForest, k: WeightBound) -> bool {
    x.base.outputs.ids().all(|j| k.admits(x.weight[j]))
}

/// The one-sided variant where the bound only applies to roots with at
/// least two inputs of the counted color.
pub fn in_c_k(x: &WeightedYoungForest, k: WeightBound, counted_color: &str) -> bool {
    x.base.outputs.ids().all(|j| {
        let count = x
            .base
            .fiber(j)
            .into_iter()
            .filter(|&s| x.base.inputs.color_of(s) == Some(counted_color))
            .count();
        count < 2 || k.admits(x.weight[j])
    })
}

/// What a composite of weighted forests satisfies, checked explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComposeReport {
    /// `f` is weighted for (wx, wy).
    pub f_ok: bool,
    /// `g` is weighted for (wy, wz).
    pub g_ok: bool,
    /// The composite is weighted for (wx, wz).
    pub composite_ok: bool,
    /// The per-root edge-count identity for the composite holds, in both
    /// its grouped and its collapsed form.
    pub edge_identity_ok: bool,
}

/// Check the composite `g . f` against weights on the three layers. When
/// both layers are weighted, closure says the composite is too; the report
/// states each fact separately so a failure localizes.
pub fn weighted_compose(
    g: &Forest,
    f: &Forest,
    wx: &Weight,
    wy: &Weight,
    wz: &Weight,
) -> Result<WeightedComposeReport, WeightError> {
    let f_ok = is_weighted_forest(f, wx, wy)?;
    let g_ok = is_weighted_forest(g, wy, wz)?;
    let gf = compose(g, f).map_err(|e| WeightError::Invalid(e.to_string()))?;
    let composite_ok = is_weighted_forest(&gf, wx, wz)?;
    let edge_identity_ok = edge_count_identity(g, f)?;
    Ok(WeightedComposeReport { f_ok, g_ok, composite_ok, edge_identity_ok })
}

/// The per-root identity `#E(gf)(j) = #E(g)(j) + #E(f)(j) - #un(f)(j)
/// + (#un(gf)(j) - #un(g)(j))`, verified both grouped over the vertices of
/// `g` and collapsed, against a direct count on the composite.
///
/// The final term corrects for unit trees of `f` threaded through bare
/// unary vertices of `g` (leaf edge in, root edge out): such a thread
/// produces a fresh unit edge of the composite instead of consuming an
/// internal edge of `g`, so subtracting `#un(f)(j)` alone overshoots by
/// one per thread. Whenever the composite creates no new unit edges over
/// `j` the correction vanishes and the plain three-term identity holds.
pub fn edge_count_identity(g: &Forest, f: &Forest) -> Result<bool, WeightError> {
    let gf = compose(g, f).map_err(|e| WeightError::Invalid(e.to_string()))?;
    let cf = root_counts(f)?;
    let cg = root_counts(g)?;
    let cgf = root_counts(&gf)?;
    let g_roots = g.root_map().map_err(|e| WeightError::Invalid(e.to_string()))?;

    for j in g.target.outputs.ids() {
        let direct = cgf.internal_at(j);
        let threads = cgf.unit_at(j) as i64 - cg.unit_at(j) as i64;
        // Grouped: sum #E(f)(i) - #un(f)(i) over the g-vertices i above j.
        let grouped: i64 = cg.vertices[j]
            .iter()
            .map(|i| cf.internal_at(i) as i64 - cf.unit_at(i) as i64)
            .sum();
        // Collapsed: push every f-edge and f-unit up to its z-root at once.
        let mut ef_at = 0i64;
        for e in f.internal_edge_ids() {
            let fr = f.root_of(&ForestElem::Vertex(e)).map_err(|e| WeightError::Invalid(e.to_string()))?;
            if g_roots[&ForestElem::Vertex(fr)] == j {
                ef_at += 1;
            }
        }
        let mut un_at = 0i64;
        for (i, _) in &f.classify_edges().unit {
            if g_roots[&ForestElem::Slot(i.clone())] == j {
                un_at -= 1;
            }
        }
        let lhs = direct as i64;
        let base = cg.internal_at(j) as i64 + threads;
        if lhs != base + grouped || lhs != base + ef_at + un_at {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One saturated root of the boundary analysis: a `z`-root whose composite
/// edge count hits `k+1`, with the three forced consequences checked.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturatedRoot {
    pub root: String,
    pub interior_weights_vanish: bool,
    pub no_unit_edges: bool,
    pub outer_edge_present: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryReport {
    pub saturated: Vec<SaturatedRoot>,
}

impl BoundaryReport {
    pub fn violations(&self) -> Vec<&SaturatedRoot> {
        self.saturated
            .iter()
            .filter(|s| !(s.interior_weights_vanish && s.no_unit_edges && s.outer_edge_present))
            .collect()
    }
}

/// At the top of the filtration step: given weighted `f: (x,wx) -> (y,wy)`
/// and `g: (y,wy) -> (z,wz)` with `wy <= k` and `wz <= k+1`, every root of
/// `z` where the composite has `k+1` internal edges forces all interior
/// weights over it to vanish, forbids unit edges of `f` over it, and
/// requires at least one internal edge of `g` over it.
pub fn boundary_analysis_k_plus_1(
    g: &Forest,
    f: &Forest,
    wx: &Weight,
    wy: &Weight,
    wz: &Weight,
    k: u64,
) -> Result<BoundaryReport, WeightError> {
    if !is_weighted_forest(f, wx, wy)? {
        return Err(WeightError::Precondition("f is not weighted".into()));
    }
    if !is_weighted_forest(g, wy, wz)? {
        return Err(WeightError::Precondition("g is not weighted".into()));
    }
    if let Some(j) = f.target.outputs.ids().find(|j| wy[*j] > k) {
        return Err(WeightError::Precondition(format!("wy({j:?}) exceeds {k}")));
    }
    if let Some(j) = g.target.outputs.ids().find(|j| wz[*j] > k + 1) {
        return Err(WeightError::Precondition(format!("wz({j:?}) exceeds {}", k + 1)));
    }

    let gf = compose(g, f).map_err(|e| WeightError::Invalid(e.to_string()))?;
    let cgf = root_counts(&gf)?;
    let cg = root_counts(g)?;
    let g_roots = g.root_map().map_err(|e| WeightError::Invalid(e.to_string()))?;

    let mut report = BoundaryReport::default();
    for j in g.target.outputs.ids() {
        if cgf.internal_at(j) as u64 != k + 1 {
            continue;
        }
        let interior_weights_vanish = cgf.vertices[j].iter().all(|v| wx[v] == 0);
        let no_unit_edges = f
            .classify_edges()
            .unit
            .iter()
            .all(|(i, _)| g_roots[&ForestElem::Slot(i.clone())] != j);
        let outer_edge_present = cg.internal_at(j) >= 1;
        report.saturated.push(SaturatedRoot {
            root: j.to_string(),
            interior_weights_vanish,
            no_unit_edges,
            outer_edge_present,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored::{ColorSet, ColoredSet};
    use crate::forest::fixtures::*;
    use crate::forest::{Head, Tail};

    fn w(entries: &[(&str, u64)]) -> Weight {
        entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn running_forest_weight_threshold() {
        let f = forest_f();
        let wx = w(&[("u", 0), ("v", 0)]);
        assert_eq!(is_weighted_forest(&f, &wx, &w(&[("r", 1)])), Ok(true));
        assert_eq!(is_weighted_forest(&f, &wx, &w(&[("r", 0)])), Ok(false));
    }

    #[test]
    fn identity_preserves_any_weight() {
        let y = young_y();
        let id = Forest::identity(&y);
        for k in [0, 3, 17] {
            let wy = w(&[("r", k)]);
            assert_eq!(is_weighted_forest(&id, &wy, &wy), Ok(true));
        }
    }

    #[test]
    fn weight_must_be_total() {
        let f = forest_f();
        let err = is_weighted_forest(&f, &w(&[("u", 0)]), &w(&[("r", 1)])).unwrap_err();
        assert_eq!(err, WeightError::MissingWeight("v".to_string()));
        let err =
            is_weighted_forest(&f, &w(&[("u", 0), ("v", 0), ("zz", 1)]), &w(&[("r", 1)]))
                .unwrap_err();
        assert_eq!(err, WeightError::UnknownRoot("zz".to_string()));
    }

    #[test]
    fn composite_of_weighted_is_weighted() {
        let f = forest_f();
        let g = forest_g();
        let wx = w(&[("u", 0), ("v", 0)]);
        let wy = w(&[("r", 1)]);
        let wz = w(&[("R", 1)]);
        let report = weighted_compose(&g, &f, &wx, &wy, &wz).unwrap();
        assert!(report.f_ok && report.g_ok);
        assert!(report.composite_ok);
        assert!(report.edge_identity_ok);
    }

    #[test]
    fn composite_fails_when_top_weight_is_too_small() {
        let f = forest_f();
        let g = forest_g();
        let wx = w(&[("u", 0), ("v", 0)]);
        let wy = w(&[("r", 1)]);
        let report = weighted_compose(&g, &f, &wx, &wy, &w(&[("R", 0)])).unwrap();
        assert!(report.f_ok);
        assert!(!report.g_ok);
        assert!(!report.composite_ok);
    }

    #[test]
    fn identity_inner_layer_reduces_to_the_outer_check() {
        let g = forest_g();
        let id = Forest::identity(&g.source);
        let wy = w(&[("r", 1)]);
        let wz = w(&[("R", 2)]);
        let report = weighted_compose(&g, &id, &wy, &wy, &wz).unwrap();
        assert_eq!(report.composite_ok, is_weighted_forest(&g, &wy, &wz).unwrap());
        assert!(report.edge_identity_ok);
    }

    #[test]
    fn edge_identity_with_a_threaded_unit_tree() {
        // A unit tree of f at a root whose g-vertex is unary, fed by a
        // target input, and emits straight to a root: the composite gains
        // a unit edge and loses nothing internal, so the three-term count
        // only balances with the correction term.
        let colors = one_color();
        let f = Forest::unit(&colors, "a", "i", "r");
        let z = YoungForest::new(
            ColoredSet::new(colors.clone(), [("zi", "a")]),
            ColoredSet::new(colors.clone(), [("zr", "a")]),
            [("zi", "zr")],
        );
        let g = Forest {
            source: f.target.clone(),
            target: z,
            attach: BTreeMap::from([
                (Tail::Input("zi".into()), Head::Slot("i".into())),
                (Tail::Vertex("r".into()), Head::Root("zr".into())),
            ]),
        };
        assert_eq!(g.validate(), Ok(()));
        let gf = compose(&g, &f).unwrap();
        assert!(gf.internal_edge_ids().is_empty());
        assert_eq!(gf.classify_edges().unit.len(), 1);
        assert_eq!(edge_count_identity(&g, &f), Ok(true));
    }

    #[test]
    fn edge_identity_on_the_running_pair() {
        let f = forest_f();
        let g = forest_g();
        assert_eq!(edge_count_identity(&g, &f), Ok(true));
        let counts = root_counts(&compose(&g, &f).unwrap()).unwrap();
        assert_eq!(counts.internal_at("R"), 1);
        assert_eq!(root_counts(&g).unwrap().internal_at("R"), 0);
        assert_eq!(root_counts(&f).unwrap().internal_at("r"), 1);
        assert_eq!(root_counts(&f).unwrap().unit_at("r"), 0);
    }

    #[test]
    fn bounds_and_monotonicity() {
        let x = WeightedYoungForest { base: young_x(), weight: w(&[("u", 0), ("v", 0)]) };
        assert!(in_for_k(&x, WeightBound::Finite(0)));
        assert!(in_for_k(&x, WeightBound::Omega));
        let x2 = WeightedYoungForest { base: young_x(), weight: w(&[("u", 0), ("v", 2)]) };
        assert!(!in_for_k(&x2, WeightBound::Finite(1)));
        assert!(in_for_k(&x2, WeightBound::Finite(2)));
        assert!(in_for_k(&x2, WeightBound::Finite(3)));
        assert!(!in_for_k(&x2, WeightBound::Finite(-1)));
    }

    #[test]
    fn counted_color_gate_exempts_single_input_roots() {
        let colors = ColorSet::new(["f", "h"]);
        // One f-colored input and three h-colored ones: the gate does not
        // apply, so any weight passes any bound.
        let exempt = YoungForest::corolla_shape(
            colors.clone(),
            "r",
            "h",
            [("1", "f"), ("2", "h"), ("3", "h"), ("4", "h")],
        );
        let x = WeightedYoungForest { base: exempt, weight: w(&[("r", 7)]) };
        assert!(in_c_k(&x, WeightBound::Finite(0), "f"));
        assert!(in_c_k(&x, WeightBound::Finite(-1), "f"));

        let gated = YoungForest::corolla_shape(colors, "r", "h", [("1", "f"), ("2", "f")]);
        let x = WeightedYoungForest { base: gated, weight: w(&[("r", 7)]) };
        assert!(!in_c_k(&x, WeightBound::Finite(0), "f"));
        let x = WeightedYoungForest { base: x.base, weight: w(&[("r", 0)]) };
        assert!(in_c_k(&x, WeightBound::Finite(0), "f"));
        assert!(!in_c_k(&x, WeightBound::Finite(-1), "f"));
    }

    #[test]
    fn source_inherits_the_target_bound() {
        // wy <= k and the inequality force wx <= k pointwise.
        let f = forest_f();
        let wy = w(&[("r", 2)]);
        for (a, b) in [(0, 0), (0, 1), (1, 0)] {
            let wx = w(&[("u", a), ("v", b)]);
            if is_weighted_forest(&f, &wx, &wy).unwrap() {
                assert!(wx.values().all(|v| *v <= 2));
            }
        }
        // And a weight that pretends otherwise is simply not weighted.
        assert_eq!(is_weighted_forest(&f, &w(&[("u", 3), ("v", 0)]), &wy), Ok(false));
    }

    /// A two-layer stack whose composite has two internal edges over R.
    fn saturating_stack() -> (Forest, Forest) {
        let colors = one_color();
        let y2 = YoungForest::new(
            ColoredSet::new(colors.clone(), [("1", "a"), ("2", "a"), ("3", "a"), ("n", "a")]),
            ColoredSet::new(colors.clone(), [("r", "a"), ("w", "a")]),
            [("1", "r"), ("2", "r"), ("3", "r"), ("n", "w")],
        );
        let z = YoungForest::corolla_shape(
            colors.clone(),
            "R",
            "a",
            [("A", "a"), ("B", "a"), ("C", "a")],
        );
        let g = Forest::new(
            y2.clone(),
            z,
            [
                (Tail::Input("A".into()), Head::Slot("1".into())),
                (Tail::Input("B".into()), Head::Slot("2".into())),
                (Tail::Input("C".into()), Head::Slot("3".into())),
                (Tail::Vertex("r".into()), Head::Slot("n".into())),
                (Tail::Vertex("w".into()), Head::Root("R".into())),
            ],
        );
        let x2 = YoungForest::new(
            ColoredSet::new(
                colors.clone(),
                [("p", "a"), ("q", "a"), ("s", "a"), ("t", "a"), ("N", "a")],
            ),
            ColoredSet::new(colors, [("u", "a"), ("v", "a"), ("W2", "a")]),
            [("p", "v"), ("q", "v"), ("s", "u"), ("t", "u"), ("N", "W2")],
        );
        let f = Forest::new(
            x2,
            y2,
            [
                (Tail::Input("1".into()), Head::Slot("s".into())),
                (Tail::Input("2".into()), Head::Slot("t".into())),
                (Tail::Input("3".into()), Head::Slot("q".into())),
                (Tail::Input("n".into()), Head::Slot("N".into())),
                (Tail::Vertex("u".into()), Head::Slot("p".into())),
                (Tail::Vertex("v".into()), Head::Root("r".into())),
                (Tail::Vertex("W2".into()), Head::Root("w".into())),
            ],
        );
        assert_eq!(f.validate(), Ok(()));
        assert_eq!(g.validate(), Ok(()));
        (g, f)
    }

    #[test]
    fn boundary_analysis_on_a_saturated_root() {
        let (g, f) = saturating_stack();
        let wx = w(&[("u", 0), ("v", 0), ("W2", 0)]);
        let wy = w(&[("r", 1), ("w", 0)]);
        let wz = w(&[("R", 2)]);
        let report = boundary_analysis_k_plus_1(&g, &f, &wx, &wy, &wz, 1).unwrap();
        assert_eq!(report.saturated.len(), 1);
        let s = &report.saturated[0];
        assert_eq!(s.root, "R");
        assert!(s.interior_weights_vanish && s.no_unit_edges && s.outer_edge_present);
        assert!(report.violations().is_empty());
    }

    #[test]
    fn boundary_analysis_rejects_unweighted_layers() {
        // The running pair with wy(r) = 0 is not weighted at all, so the
        // k = 0 analysis refuses to start.
        let err = boundary_analysis_k_plus_1(
            &forest_g(),
            &forest_f(),
            &w(&[("u", 0), ("v", 0)]),
            &w(&[("r", 0)]),
            &w(&[("R", 1)]),
            0,
        )
        .unwrap_err();
        assert_eq!(err, WeightError::Precondition("f is not weighted".into()));
    }

    #[test]
    fn boundary_analysis_is_empty_below_saturation() {
        let f = forest_f();
        let g = forest_g();
        let report = boundary_analysis_k_plus_1(
            &g,
            &f,
            &w(&[("u", 0), ("v", 0)]),
            &w(&[("r", 1)]),
            &w(&[("R", 2)]),
            1,
        )
        .unwrap();
        assert!(report.saturated.is_empty());
    }
}
