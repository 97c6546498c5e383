//! Configurations of affine discs and half-discs.
//!
//! A value at color `f` places round discs inside the closed unit disc of
//! R^d. A value at color `h` places discs and half-discs inside the closed
//! unit half-disc, with every half-disc centered on the bounding hyperplane.
//! The collapsed colors `f•` and `h•` mark a single point of the region left
//! over after the open discs are removed; an `h•`-rooted value carries no
//! coordinates at all, its location is inherited when it is plugged into a
//! collapsed half-disc.
//!
//! Each input occupies its region through an affine map `p -> r p + c` with
//! `r > 0`, so an element is a finite list of (radius, center) pairs plus
//! marked points, and composition is a chase through the attaching
//! bijection multiplying the affines along the way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::colored::ColorSet;
use crate::forest::{Corolla, Forest, Head, Tail, YoungForest};
use crate::operad::{Decoration, Operad, OperadError};

pub const COLOR_F: &str = "f";
pub const COLOR_H: &str = "h";
pub const COLOR_FB: &str = "f•";
pub const COLOR_HB: &str = "h•";

pub fn sc_colors() -> ColorSet {
    ColorSet::new([COLOR_F, COLOR_H, COLOR_FB, COLOR_HB])
}

/// The value carried by one input slot. Vectors always have length `d`;
/// `h` centers and `h•` points keep their last coordinate exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "color")]
pub enum DiscDatum {
    #[serde(rename = "f")]
    F { r: f64, c: Vec<f64> },
    #[serde(rename = "h")]
    H { r: f64, c: Vec<f64> },
    /// A marked point. Under an `h•` root the location is absent: the whole
    /// value is a single abstract point and `q` is inherited on composition.
    #[serde(rename = "f•")]
    FBullet {
        #[serde(skip_serializing_if = "Option::is_none")]
        q: Option<Vec<f64>>,
    },
    #[serde(rename = "h•")]
    HBullet { q: Vec<f64> },
}

impl DiscDatum {
    pub fn color(&self) -> &'static str {
        match self {
            DiscDatum::F { .. } => COLOR_F,
            DiscDatum::H { .. } => COLOR_H,
            DiscDatum::FBullet { .. } => COLOR_FB,
            DiscDatum::HBullet { .. } => COLOR_HB,
        }
    }

    fn solid(&self) -> Option<(f64, &[f64])> {
        match self {
            DiscDatum::F { r, c } | DiscDatum::H { r, c } => Some((*r, c)),
            _ => None,
        }
    }
}

/// A disc configuration on every corolla of a young forest: for each root,
/// one datum per input slot in fiber order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScElement {
    pub d: usize,
    pub shape: YoungForest,
    pub data: BTreeMap<String, Vec<DiscDatum>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScDefectCode {
    ColorRule,
    Containment,
    Overlap,
    CollapsedOutside,
}

impl fmt::Display for ScDefectCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ScDefectCode::ColorRule => "ColorRule",
            ScDefectCode::Containment => "Containment",
            ScDefectCode::Overlap => "Overlap",
            ScDefectCode::CollapsedOutside => "CollapsedOutside",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScDefect {
    pub code: ScDefectCode,
    pub detail: String,
}

impl ScDefect {
    fn new(code: ScDefectCode, detail: impl Into<String>) -> Self {
        ScDefect { code, detail: detail.into() }
    }
}

impl fmt::Display for ScDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

impl std::error::Error for ScDefect {}

/// Shapes that can carry disc configurations: an `f` root holds only `f`
/// inputs, an `h` root holds `f` and `h` inputs plus at most one marked
/// point (`f•` or `h•`, never both), and an `h•` root holds exactly one
/// `f•` input and nothing else.
pub fn legal_sc_shape(y: &YoungForest) -> Result<(), ScDefect> {
    if y.colors() != &sc_colors() {
        return Err(ScDefect::new(
            ScDefectCode::ColorRule,
            "shape must use the color set {f, h, f•, h•}",
        ));
    }
    y.validate().map_err(|e| ScDefect::new(ScDefectCode::ColorRule, e.to_string()))?;
    for j in y.outputs.ids() {
        let corolla = y.corolla(j).expect("root exists");
        let count = |color: &str| corolla.slots.iter().filter(|s| s.color == color).count();
        let (nf, nh, nfb, nhb) =
            (count(COLOR_F), count(COLOR_H), count(COLOR_FB), count(COLOR_HB));
        match corolla.root_color.as_str() {
            COLOR_F => {
                if nh + nfb + nhb > 0 {
                    return Err(ScDefect::new(
                        ScDefectCode::ColorRule,
                        format!("root {j:?} is f-colored and admits only f inputs"),
                    ));
                }
            }
            COLOR_H => {
                if nfb + nhb > 1 {
                    return Err(ScDefect::new(
                        ScDefectCode::ColorRule,
                        format!("root {j:?} takes at most one marked point"),
                    ));
                }
            }
            COLOR_HB => {
                if nfb != 1 || nf + nh + nhb > 0 {
                    return Err(ScDefect::new(
                        ScDefectCode::ColorRule,
                        format!("root {j:?} is h•-colored and takes exactly one f• input"),
                    ));
                }
            }
            other => {
                return Err(ScDefect::new(
                    ScDefectCode::ColorRule,
                    format!("root {j:?} has color {other:?}, which cannot be a root"),
                ));
            }
        }
    }
    Ok(())
}

/// All roots h-colored: the shapes whose configurations sit in half-discs.
pub fn all_roots_h(y: &YoungForest) -> bool {
    y.outputs.elements.iter().all(|e| e.color == COLOR_H)
}

/// At most one plain f-colored input per root.
pub fn at_most_one_f(y: &YoungForest) -> bool {
    y.outputs.ids().all(|j| y.fiber(j).iter().filter(|i| y.inputs.color_of(i) == Some(COLOR_F)).count() <= 1)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Distance from `z` to the closed upper half-ball with center `c` on the
/// hyperplane and radius `r`. For `z` above the hyperplane this is the
/// ordinary distance to the ball; below it the nearest point lies on the
/// flat face or its rim.
fn half_ball_distance(z: &[f64], c: &[f64], r: f64) -> f64 {
    let d = z.len();
    let u: Vec<f64> = z.iter().zip(c).map(|(a, b)| a - b).collect();
    let height = u[d - 1];
    if height >= 0.0 {
        return (norm(&u) - r).max(0.0);
    }
    let mut flat = u;
    flat[d - 1] = 0.0;
    let rho = norm(&flat);
    if rho <= r {
        -height
    } else {
        ((rho - r).powi(2) + height * height).sqrt()
    }
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Structural checks for one datum: variant matches the slot color, vector
/// lengths are `d`, radii are positive, plane constraints hold exactly.
fn check_datum_shape(
    d: usize,
    root_color: &str,
    slot_id: &str,
    slot_color: &str,
    datum: &DiscDatum,
) -> Result<(), ScDefect> {
    let bad = |msg: String| Err(ScDefect::new(ScDefectCode::ColorRule, msg));
    if datum.color() != slot_color {
        return bad(format!(
            "slot {slot_id:?} is {slot_color}-colored but its datum is {}-colored",
            datum.color()
        ));
    }
    match datum {
        DiscDatum::F { r, c } | DiscDatum::H { r, c } => {
            if !(r.is_finite() && *r > 0.0) {
                return bad(format!("slot {slot_id:?}: radius must be positive and finite"));
            }
            if c.len() != d || !finite(c) {
                return bad(format!("slot {slot_id:?}: center must be a finite vector of length {d}"));
            }
            if matches!(datum, DiscDatum::H { .. }) && c[d - 1] != 0.0 {
                return bad(format!("slot {slot_id:?}: half-disc center must lie on the hyperplane"));
            }
        }
        DiscDatum::FBullet { q } => match (root_color, q) {
            (COLOR_HB, None) => {}
            (COLOR_HB, Some(_)) => {
                return bad(format!(
                    "slot {slot_id:?}: a marked point under an h• root carries no location"
                ));
            }
            (_, None) => {
                return bad(format!("slot {slot_id:?}: marked point needs a location"));
            }
            (_, Some(q)) => {
                if q.len() != d || !finite(q) {
                    return bad(format!(
                        "slot {slot_id:?}: marked point must be a finite vector of length {d}"
                    ));
                }
            }
        },
        DiscDatum::HBullet { q } => {
            if q.len() != d || !finite(q) {
                return bad(format!(
                    "slot {slot_id:?}: marked point must be a finite vector of length {d}"
                ));
            }
            if q[d - 1] != 0.0 {
                return bad(format!("slot {slot_id:?}: h• marked point must lie on the hyperplane"));
            }
        }
    }
    Ok(())
}

/// Image of the input inside the root's ambient region, non-strictly:
/// touching the ambient boundary is allowed.
fn check_containment(
    root_color: &str,
    slot_id: &str,
    datum: &DiscDatum,
) -> Result<(), ScDefect> {
    let Some((r, c)) = datum.solid() else { return Ok(()) };
    let d = c.len();
    let err = |msg: String| Err(ScDefect::new(ScDefectCode::Containment, msg));
    if norm(c) + r > 1.0 {
        return err(format!("slot {slot_id:?}: image leaves the unit region"));
    }
    if root_color == COLOR_H && matches!(datum, DiscDatum::F { .. }) && c[d - 1] < r {
        return err(format!("slot {slot_id:?}: disc dips below the hyperplane"));
    }
    Ok(())
}

/// Strict disjointness of two input images; tangency is an overlap.
fn images_disjoint(a: &DiscDatum, b: &DiscDatum) -> bool {
    match (a, b) {
        (DiscDatum::F { r: ra, c: ca }, DiscDatum::F { r: rb, c: cb })
        | (DiscDatum::H { r: ra, c: ca }, DiscDatum::H { r: rb, c: cb }) => {
            dist(ca, cb) > ra + rb
        }
        (DiscDatum::F { r: rf, c: cf }, DiscDatum::H { r: rh, c: ch })
        | (DiscDatum::H { r: rh, c: ch }, DiscDatum::F { r: rf, c: cf }) => {
            half_ball_distance(cf, ch, *rh) > *rf
        }
        _ => true,
    }
}

/// Is `q` in the root's ambient region, outside every open input image?
/// Boundary points count as inside.
fn complement_contains(root_color: &str, solids: &[(&str, f64, &[f64])], q: &[f64]) -> bool {
    let d = q.len();
    if norm(q) > 1.0 {
        return false;
    }
    if root_color != COLOR_F && q[d - 1] < 0.0 {
        return false;
    }
    solids.iter().all(|(_, r, c)| dist(q, c) >= *r)
}

fn solids_of<'a>(slots: &[(&'a str, &'a DiscDatum)]) -> Vec<(&'a str, f64, &'a [f64])> {
    slots
        .iter()
        .filter_map(|(id, datum)| datum.solid().map(|(r, c)| (*id, r, c)))
        .collect()
}

/// Validate a configuration: legal shape, data keyed by exactly the roots
/// with one datum per slot, then per root the datum shapes, containment,
/// pairwise strict disjointness, and marked points in the complement.
pub fn validate_sc(e: &ScElement) -> Result<(), ScDefect> {
    if e.d == 0 {
        return Err(ScDefect::new(ScDefectCode::ColorRule, "dimension must be at least 1"));
    }
    legal_sc_shape(&e.shape)?;
    for k in e.data.keys() {
        if !e.shape.outputs.contains(k) {
            return Err(ScDefect::new(
                ScDefectCode::ColorRule,
                format!("data for unknown root {k:?}"),
            ));
        }
    }
    for j in e.shape.outputs.ids() {
        let root_color = e.shape.outputs.color_of(j).expect("root has a color");
        let fiber = e.shape.fiber(j);
        let data = e.data.get(j).ok_or_else(|| {
            ScDefect::new(ScDefectCode::ColorRule, format!("missing data for root {j:?}"))
        })?;
        if data.len() != fiber.len() {
            return Err(ScDefect::new(
                ScDefectCode::ColorRule,
                format!("root {j:?} has {} slots but {} data", fiber.len(), data.len()),
            ));
        }
        let slots: Vec<(&str, &DiscDatum)> = fiber.iter().copied().zip(data).collect();
        for (id, datum) in &slots {
            let slot_color = e.shape.inputs.color_of(id).expect("slot has a color");
            check_datum_shape(e.d, root_color, id, slot_color, datum)?;
        }
        for (id, datum) in &slots {
            check_containment(root_color, id, datum)?;
        }
        for (a, (ida, da)) in slots.iter().enumerate() {
            for (idb, db) in slots.iter().skip(a + 1) {
                if !images_disjoint(da, db) {
                    return Err(ScDefect::new(
                        ScDefectCode::Overlap,
                        format!("images of slots {ida:?} and {idb:?} meet"),
                    ));
                }
            }
        }
        let solids = solids_of(&slots);
        for (id, datum) in &slots {
            let q = match datum {
                DiscDatum::FBullet { q: Some(q) } => q,
                DiscDatum::HBullet { q } => q,
                _ => continue,
            };
            if !complement_contains(root_color, &solids, q) {
                return Err(ScDefect::new(
                    ScDefectCode::CollapsedOutside,
                    format!("marked point of slot {id:?} is not in the remaining region"),
                ));
            }
        }
    }
    Ok(())
}

fn single_h_root<'a>(e: &'a ScElement) -> Result<&'a str, ScDefect> {
    let roots: Vec<&str> = e.shape.outputs.ids().collect();
    match roots.as_slice() {
        [j] if e.shape.outputs.color_of(j) == Some(COLOR_H) => Ok(j),
        _ => Err(ScDefect::new(
            ScDefectCode::ColorRule,
            "the region is defined for a single h-colored root",
        )),
    }
}

/// Membership of `q` in the closed region left over once the open input
/// images are removed from the unit half-disc. Boundary points are in.
pub fn realization_contains(e: &ScElement, q: &[f64]) -> Result<bool, ScDefect> {
    validate_sc(e)?;
    let j = single_h_root(e)?;
    if q.len() != e.d || !finite(q) {
        return Err(ScDefect::new(
            ScDefectCode::ColorRule,
            format!("query point must be a finite vector of length {}", e.d),
        ));
    }
    let fiber = e.shape.fiber(j);
    let slots: Vec<(&str, &DiscDatum)> = fiber.iter().copied().zip(&e.data[j]).collect();
    Ok(complement_contains(COLOR_H, &solids_of(&slots), q))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoundaryTag {
    /// On the spherical part of the ambient boundary.
    RtBoundary,
    /// On the boundary of the half-disc minus its open half-disc holes:
    /// the hyperplane, the outer sphere, or a half-disc hole's hemisphere.
    /// Full-disc holes do not contribute.
    HBoundary,
    /// On the hemisphere of the named half-disc input.
    Input(String),
}

/// Which boundary pieces of the leftover region the point `q` sits on,
/// within `tol`. The point must belong to the region.
pub fn boundary_classify(
    e: &ScElement,
    q: &[f64],
    tol: f64,
) -> Result<BTreeSet<BoundaryTag>, ScDefect> {
    if !realization_contains(e, q)? {
        return Err(ScDefect::new(
            ScDefectCode::CollapsedOutside,
            "query point is not in the region",
        ));
    }
    let j = single_h_root(e)?;
    let mut tags = BTreeSet::new();
    if (norm(q) - 1.0).abs() <= tol {
        tags.insert(BoundaryTag::RtBoundary);
        tags.insert(BoundaryTag::HBoundary);
    }
    if q[e.d - 1].abs() <= tol {
        tags.insert(BoundaryTag::HBoundary);
    }
    let fiber = e.shape.fiber(j);
    for (id, datum) in fiber.iter().copied().zip(&e.data[j]) {
        if let DiscDatum::H { r, c } = datum {
            if (dist(q, c) - r).abs() <= tol {
                tags.insert(BoundaryTag::Input(id.to_string()));
                tags.insert(BoundaryTag::HBoundary);
            }
        }
    }
    Ok(tags)
}

fn slot_data<'a>(e: &'a ScElement) -> BTreeMap<&'a str, &'a DiscDatum> {
    let mut map = BTreeMap::new();
    for (j, data) in &e.data {
        for (id, datum) in e.shape.fiber(j).iter().copied().zip(data) {
            map.insert(id, datum);
        }
    }
    map
}

/// Chase one target input through the attaching bijection, multiplying the
/// affine pieces it passes through. A marked chase picks up its location at
/// the first slot that records one (a collapsed disc read through an `h•`
/// slot inherits the collapsed half-disc's point) and rides the remaining
/// affines.
fn chase_datum(
    f: &Forest,
    e: &ScElement,
    data: &BTreeMap<&str, &DiscDatum>,
    input: &str,
) -> Result<DiscDatum, ScDefect> {
    let color = f.target.inputs.color_of(input).expect("input has a color");
    let solid = color == COLOR_F || color == COLOR_H;
    let mut r_acc = 1.0;
    let mut c_acc = vec![0.0; e.d];
    let mut q_acc: Option<Vec<f64>> = None;
    let mut head = f.attach.get(&Tail::Input(input.to_string()));
    loop {
        let slot = match head {
            Some(Head::Root(_)) => break,
            Some(Head::Slot(s)) => s,
            None => {
                return Err(ScDefect::new(
                    ScDefectCode::ColorRule,
                    format!("input {input:?} is missing from the attaching map"),
                ));
            }
        };
        let datum = data[slot.as_str()];
        match (solid, datum) {
            (true, DiscDatum::F { r, c }) | (true, DiscDatum::H { r, c }) => {
                for (acc, x) in c_acc.iter_mut().zip(c) {
                    *acc = r * *acc + x;
                }
                r_acc *= r;
            }
            (false, DiscDatum::FBullet { q: None }) => {}
            (false, DiscDatum::FBullet { q: Some(q) }) | (false, DiscDatum::HBullet { q }) => {
                if q_acc.is_some() {
                    return Err(ScDefect::new(
                        ScDefectCode::ColorRule,
                        format!("chase from {input:?} found two marked locations"),
                    ));
                }
                q_acc = Some(q.clone());
            }
            (false, DiscDatum::F { r, c }) | (false, DiscDatum::H { r, c }) => {
                let q = q_acc.as_mut().ok_or_else(|| {
                    ScDefect::new(
                        ScDefectCode::ColorRule,
                        format!("chase from {input:?} scales a location it never picked up"),
                    )
                })?;
                for (acc, x) in q.iter_mut().zip(c) {
                    *acc = r * *acc + x;
                }
            }
            (true, _) => {
                return Err(ScDefect::new(
                    ScDefectCode::ColorRule,
                    format!("chase from {input:?} crossed a marked slot"),
                ));
            }
        }
        let vertex = e.shape.root_of_input(slot).expect("slot has a root");
        head = f.attach.get(&Tail::Vertex(vertex.to_string()));
    }
    Ok(match color {
        COLOR_F => DiscDatum::F { r: r_acc, c: c_acc },
        COLOR_H => DiscDatum::H { r: r_acc, c: c_acc },
        COLOR_FB => DiscDatum::FBullet { q: q_acc },
        COLOR_HB => DiscDatum::HBullet {
            q: q_acc.ok_or_else(|| {
                ScDefect::new(
                    ScDefectCode::ColorRule,
                    format!("collapsed half-disc {input:?} never found its location"),
                )
            })?,
        },
        other => {
            return Err(ScDefect::new(
                ScDefectCode::ColorRule,
                format!("input {input:?} has unusable color {other:?}"),
            ));
        }
    })
}

/// Push a configuration on `f.source` along `f`, producing one on
/// `f.target`. The result is validated before it is returned.
pub fn compose_sc(f: &Forest, e: &ScElement) -> Result<ScElement, ScDefect> {
    f.validate().map_err(|err| ScDefect::new(ScDefectCode::ColorRule, err.to_string()))?;
    if f.source != e.shape {
        return Err(ScDefect::new(
            ScDefectCode::ColorRule,
            "configuration shape differs from the source of the forest",
        ));
    }
    legal_sc_shape(&f.target)?;
    validate_sc(e)?;
    let data = slot_data(e);
    let mut out = BTreeMap::new();
    for j in f.target.outputs.ids() {
        let mut list = Vec::new();
        for i in f.target.fiber(j) {
            list.push(chase_datum(f, e, &data, i)?);
        }
        out.insert(j.to_string(), list);
    }
    let composite = ScElement { d: e.d, shape: f.target.clone(), data: out };
    validate_sc(&composite)?;
    Ok(composite)
}

/// The disc configurations as an operad over {f, h, f•, h•} in a fixed
/// dimension. A point on a corolla is its list of input data.
#[derive(Debug, Clone)]
pub struct ScOperad {
    pub d: usize,
    colors: ColorSet,
}

impl ScOperad {
    pub fn new(d: usize) -> Self {
        ScOperad { d, colors: sc_colors() }
    }

    fn corolla_element(&self, corolla: &Corolla, p: &[DiscDatum]) -> ScElement {
        let shape = YoungForest::corolla_shape(
            self.colors.clone(),
            &corolla.root_id,
            &corolla.root_color,
            corolla.slots.iter().map(|s| (s.id.clone(), s.color.clone())),
        );
        ScElement {
            d: self.d,
            shape,
            data: BTreeMap::from([(corolla.root_id.clone(), p.to_vec())]),
        }
    }
}

fn datum_close(a: &DiscDatum, b: &DiscDatum, tol: f64) -> bool {
    let close = |x: &[f64], y: &[f64]| {
        x.len() == y.len() && x.iter().zip(y).all(|(p, q)| (p - q).abs() <= tol)
    };
    match (a, b) {
        (DiscDatum::F { r: ra, c: ca }, DiscDatum::F { r: rb, c: cb })
        | (DiscDatum::H { r: ra, c: ca }, DiscDatum::H { r: rb, c: cb }) => {
            (ra - rb).abs() <= tol && close(ca, cb)
        }
        (DiscDatum::FBullet { q: None }, DiscDatum::FBullet { q: None }) => true,
        (DiscDatum::FBullet { q: Some(qa) }, DiscDatum::FBullet { q: Some(qb) })
        | (DiscDatum::HBullet { q: qa }, DiscDatum::HBullet { q: qb }) => close(qa, qb),
        _ => false,
    }
}

impl Operad for ScOperad {
    type Point = Vec<DiscDatum>;

    fn color_set(&self) -> &ColorSet {
        &self.colors
    }

    fn validate_point(&self, corolla: &Corolla, p: &Self::Point) -> Result<(), OperadError> {
        validate_sc(&self.corolla_element(corolla, p))
            .map_err(|e| OperadError::BadDecoration(e.to_string()))
    }

    fn act(
        &self,
        f: &Forest,
        dec: &Decoration<Self::Point>,
    ) -> Result<Decoration<Self::Point>, OperadError> {
        let e = ScElement { d: self.d, shape: f.source.clone(), data: dec.clone() };
        let out = compose_sc(f, &e).map_err(|e| OperadError::BadDecoration(e.to_string()))?;
        Ok(out.data)
    }

    fn identity(&self, color: &str) -> Result<Self::Point, OperadError> {
        match color {
            COLOR_F => Ok(vec![DiscDatum::F { r: 1.0, c: vec![0.0; self.d] }]),
            COLOR_H => Ok(vec![DiscDatum::H { r: 1.0, c: vec![0.0; self.d] }]),
            COLOR_FB | COLOR_HB => Err(OperadError::BadDecoration(format!(
                "no identity value at the collapsed color {color:?}"
            ))),
            other => Err(OperadError::UnknownColor(other.to_string())),
        }
    }

    fn is_identity(&self, corolla: &Corolla, p: &Self::Point, tol: f64) -> bool {
        if !corolla.is_unary_same_color() || p.len() != 1 {
            return false;
        }
        match p[0].solid() {
            Some((r, c)) => (r - 1.0).abs() <= tol && c.iter().all(|x| x.abs() <= tol),
            None => false,
        }
    }

    fn points_equal(&self, a: &Self::Point, b: &Self::Point, tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| datum_close(x, y, tol))
    }

    fn sample_point(&self, corolla: &Corolla, rng: &mut dyn RngCore) -> Self::Point {
        sample_configuration(self.d, corolla, rng)
    }
}

/// Deterministic layout with a little radius jitter: solid inputs spread
/// along the first axis, discs under an h root lifted just clear of the
/// hyperplane, marked points placed by scanning a short candidate list.
/// Panics when the corolla is illegal or has no valid configuration at all
/// (two half-discs of R^1 always share the origin).
fn sample_configuration(d: usize, corolla: &Corolla, rng: &mut dyn RngCore) -> Vec<DiscDatum> {
    let shape = YoungForest::corolla_shape(
        sc_colors(),
        &corolla.root_id,
        &corolla.root_color,
        corolla.slots.iter().map(|s| (s.id.clone(), s.color.clone())),
    );
    if let Err(e) = legal_sc_shape(&shape) {
        panic!("sample_configuration: {e}");
    }
    let root = corolla.root_color.as_str();
    if root == COLOR_HB {
        return vec![DiscDatum::FBullet { q: None }];
    }
    let mut jit = || 0.6 + 0.4 * rng.gen::<f64>();
    let axis = |x: f64, lift: f64| {
        let mut c = vec![0.0; d];
        c[0] = x;
        c[d - 1] += lift;
        c
    };
    let solid_ix: Vec<usize> = (0..corolla.slots.len())
        .filter(|&k| {
            corolla.slots[k].color == COLOR_F || corolla.slots[k].color == COLOR_H
        })
        .collect();
    let n = solid_ix.len();
    let mut out: Vec<Option<DiscDatum>> = vec![None; corolla.slots.len()];
    let h_count = corolla.slots.iter().filter(|s| s.color == COLOR_H).count();
    if root == COLOR_H && d == 1 {
        // On the line every half-disc is an interval [0, r], so at most one
        // fits, and discs stay in [0.25, 1] to keep the origin clear for a
        // possible marked boundary point.
        if h_count > 1 {
            panic!("sample_configuration: two half-discs of R^1 always share the origin");
        }
        let mut placed = 0;
        let nf = n - h_count;
        for &k in &solid_ix {
            if corolla.slots[k].color == COLOR_H {
                out[k] = Some(DiscDatum::H { r: 0.1 * jit(), c: vec![0.0] });
            } else {
                let w = 0.75 / nf as f64;
                let c = 0.25 + w * (placed as f64 + 0.5);
                out[k] = Some(DiscDatum::F { r: w / 4.0 * jit(), c: vec![c] });
                placed += 1;
            }
        }
    } else {
        for (pos, &k) in solid_ix.iter().enumerate() {
            let x = -1.0 + (2.0 * pos as f64 + 1.0) / n as f64;
            out[k] = Some(match (root, corolla.slots[k].color.as_str()) {
                (COLOR_F, _) => DiscDatum::F { r: 0.45 / n as f64 * jit(), c: axis(x, 0.0) },
                (_, COLOR_H) => DiscDatum::H { r: 0.45 / n as f64 * jit(), c: axis(x, 0.0) },
                _ => {
                    let r = 0.1 / n as f64 * jit();
                    DiscDatum::F { r, c: if d == 1 { vec![x.clamp(-1.0 + r, 1.0 - r).max(r)] } else { axis(x, 2.0 * r) } }
                }
            });
        }
    }
    let solids: Vec<(f64, Vec<f64>)> = out
        .iter()
        .flatten()
        .filter_map(|datum| datum.solid().map(|(r, c)| (r, c.to_vec())))
        .collect();
    let margin = 1e-3;
    let fits = |q: &[f64]| {
        norm(q) <= 1.0 - margin && solids.iter().all(|(r, c)| dist(q, c) >= r + margin)
    };
    for (k, slot) in corolla.slots.iter().enumerate() {
        if out[k].is_some() {
            continue;
        }
        let on_plane = slot.color == COLOR_HB;
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        if !on_plane && d >= 2 {
            for t in [0.9, 0.8, 0.7, 0.6, 0.5] {
                let mut q = vec![0.0; d];
                q[d - 1] = t;
                candidates.push(q);
            }
        }
        let mut flats = vec![0.97, -0.97, 0.0];
        for pos in 1..n {
            flats.push(-1.0 + 2.0 * pos as f64 / n as f64);
        }
        flats.extend([0.15, 0.05, 0.2, 0.95, 0.125, 0.175]);
        for t in flats {
            candidates.push(axis(t, 0.0));
        }
        let q = candidates
            .into_iter()
            .find(|q| q[d - 1] >= 0.0 && (!on_plane || q[d - 1] == 0.0) && fits(q))
            .unwrap_or_else(|| panic!("sample_configuration: no marked point fits"));
        out[k] = Some(if on_plane {
            DiscDatum::HBullet { q }
        } else {
            DiscDatum::FBullet { q: Some(q) }
        });
    }
    out.into_iter().map(|d| d.expect("every slot placed")).collect()
}
