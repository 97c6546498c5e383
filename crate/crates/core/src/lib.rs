//! Calculus of colored forests, the W construction on concrete labeled
//! trees, and the swiss-cheese operad as numerical disc configurations.
//!
//! The library is organized in layers:
//!
//! * [`colored`] — finite colored sets and colored maps, the raw material.
//! * [`forest`] — young forests (disjoint unions of corollas) and forests
//!   (attaching bijections that assemble corollas into trees), with
//!   composition by edge chasing, edge classification, wedges, and
//!   isomorphism/morphism search.
//! * [`weight`] — weight functions on roots, the closure inequality for
//!   weighted composition, and the induced filtrations.
//! * [`operad`] / [`free`] — operads as forest actions on per-vertex
//!   values; the terminal operad and free operads on finite pointed
//!   collections.
//! * [`extreal`] / [`wcons`] — `[0, ∞]`-valued edge labels and the
//!   W construction: labeled decorated trees, the pushforward/extension
//!   maps on labels, reduction to canonical form, and the counit.
//! * [`sc`] / [`collapsed`] — swiss-cheese disc configurations in
//!   dimension d, their validation and composition, and the marked-point
//!   (collapsed disc) extension with its projection, wedge trees, and
//!   interval coordinates.
//! * [`gen`] / [`suites`] — seeded random generators and the property
//!   suites behind `folab check`.
//! * [`render`] — SVG output for d = 2 configurations.

pub mod colored;
pub mod extreal;
pub mod forest;
pub mod weight;

pub mod free;
pub mod operad;

pub mod wcons;

pub mod collapsed;
pub mod sc;

pub mod gen;
pub mod render;
pub mod suites;

pub use colored::{ColorSet, ColoredMap, ColoredSet};
pub use extreal::ExtReal;
pub use forest::{compose, Corolla, EdgeClassification, Forest, Head, Tail, YoungForest};
pub use free::{FreeOperad, PointedCollection};
pub use operad::{counit_eval, decorations_equal, Decoration, Operad, TerminalOperad};
pub use sc::{compose_sc, validate_sc, DiscDatum, ScElement, ScOperad};
pub use wcons::{
    counit, reduce, validate_wpoint, w_act, w_equal, w_infty, w_sigma, EdgeLabeling, ReduceOrder,
    WPoint,
};
pub use weight::{
    boundary_analysis_k_plus_1, edge_count_identity, is_weighted_forest, weighted_compose, Weight,
};
