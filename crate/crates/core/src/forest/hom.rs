//! Enumeration of forest morphisms over a fixed target.
//!
//! Given `f: a -> z` and `g: b -> z`, find every forest `mu: a -> b` with
//! `g . mu == f` on the nose. The search follows the composite chases: each
//! tail of the composite traces a path that alternates between known steps
//! of `g` and unknown attachments of `mu`, and the required endpoint is
//! dictated by `f`. Each unknown lies on exactly one path, so obligations
//! never conflict.
//!
//! Two facts keep the search from blowing up. Root compatibility of `mu`
//! forces a slot of b to attach to its own corolla's root, so once a path
//! enters b it can only descend the tree structure of g, one forced hop at
//! a time; the only true branch points are the vertices of a. And a
//! descent from a corolla w is fully determined by g, so whether it can
//! ever meet a requirement (reach the right root of z, or pass a slot of
//! the right color to stop in) is precomputed and used to discard hopeless
//! candidates before recursing. Survivors are still validated before being
//! returned.

use std::collections::{BTreeMap, BTreeSet};

use super::{compose, Forest, Head, Tail};

/// Where the forced descent from a corolla of b ends, and the slot colors
/// passed on the way down (the positions a path may stop in).
struct Descent {
    root: Option<String>,
    stop_colors: BTreeSet<String>,
}

struct Search<'a> {
    f: &'a Forest,
    g: &'a Forest,
    descents: BTreeMap<String, Descent>,
    assignment: BTreeMap<Tail, Head>,
    used: BTreeSet<Head>,
    // Landing roots owed by root compatibility: the chase through mu from
    // this a-vertex must end at this root of b.
    pending: BTreeMap<String, String>,
    found: Vec<Forest>,
}

impl Search<'_> {
    fn color_of_pos(&self, pos: &Tail) -> &str {
        match pos {
            // An input of b, i.e. of mu's target.
            Tail::Input(s) => self.g.source.inputs.color_of(s).expect("slot of b"),
            // A vertex of a, i.e. of mu's source.
            Tail::Vertex(v) => self.f.source.outputs.color_of(v).expect("vertex of a"),
        }
    }

    /// Can a path that just consumed corolla `w` still end at `req`? The
    /// rest of the descent is forced, so this is a table lookup. `used` is
    /// ignored, making the test necessary but not sufficient.
    fn descent_can_meet(&self, w: &str, req: &Head) -> bool {
        let Some(d) = self.descents.get(w) else { return false };
        match req {
            Head::Root(r) => d.root.as_deref() == Some(r),
            Head::Slot(s) => match self.f.source.inputs.color_of(s) {
                Some(c) => d.stop_colors.contains(c),
                None => false,
            },
        }
    }

    /// Record that the mu-chase from a-vertex `v` must land at root `rho`
    /// of b. Walks the already-assigned part of the chase; on hitting an
    /// unassigned vertex the debt is parked in `pending` (and noted in
    /// `added` for rollback). False means the debt is unpayable.
    fn impose(&mut self, v: &str, rho: &str, added: &mut Vec<String>) -> bool {
        let mut at = v.to_string();
        for _ in 0..=self.f.source.outputs.len() {
            match self.assignment.get(&Tail::Vertex(at.clone())) {
                Some(Head::Root(w)) => return w == rho,
                Some(Head::Slot(s)) => at = self.f.source.structure[s].clone(),
                None => {
                    return match self.pending.get(&at) {
                        Some(p) => p == rho,
                        None => {
                            self.pending.insert(at.clone(), rho.to_string());
                            added.push(at);
                            true
                        }
                    }
                }
            }
        }
        false
    }

    fn resolve(&mut self, mut obligations: Vec<(Tail, Head)>) {
        let Some((pos, req)) = obligations.pop() else {
            self.finish();
            return;
        };
        if self.assignment.contains_key(&pos) {
            return;
        }
        let pos_color = self.color_of_pos(&pos).to_string();

        // Land directly in the required slot of a. For a slot of b this
        // defers its root debt into a; for a vertex of a any debt it
        // already carries moves along the chase the same way.
        if let Head::Slot(s) = &req {
            let cand = Head::Slot(s.clone());
            if self.f.source.inputs.color_of(s) == Some(pos_color.as_str())
                && !self.used.contains(&cand)
            {
                self.assignment.insert(pos.clone(), cand.clone());
                self.used.insert(cand.clone());
                let mut added = Vec::new();
                let debt = match &pos {
                    Tail::Input(sb) => Some(self.g.source.structure[sb].clone()),
                    Tail::Vertex(v) => self.pending.get(v).cloned(),
                };
                let owner = self.f.source.structure[s].clone();
                if debt.map_or(true, |rho| self.impose(&owner, &rho, &mut added)) {
                    self.resolve(obligations.clone());
                }
                for v in added {
                    self.pending.remove(&v);
                }
                self.used.remove(&cand);
                self.assignment.remove(&pos);
            }
        }

        // Or route through a corolla of b and keep chasing. A slot of b
        // must route to its own corolla and a vertex of a must honor its
        // root debt (root compatibility of mu, both); a free vertex may
        // start a descent anywhere it can still meet req.
        let vertices: Vec<String> = match &pos {
            Tail::Input(s) => {
                self.g.source.structure.get(s).map(|w| w.clone()).into_iter().collect()
            }
            Tail::Vertex(v) => match self.pending.get(v) {
                Some(rho) => vec![rho.clone()],
                None => self
                    .g
                    .source
                    .outputs
                    .ids_of_color(&pos_color)
                    .map(str::to_string)
                    .collect(),
            },
        };
        for w in vertices {
            if self.g.source.outputs.color_of(&w) != Some(pos_color.as_str()) {
                continue;
            }
            let cand = Head::Root(w.clone());
            if self.used.contains(&cand) || !self.descent_can_meet(&w, &req) {
                continue;
            }
            let next = self.g.attach[&Tail::Vertex(w.clone())].clone();
            let continued = match next {
                Head::Root(r) => {
                    if req == Head::Root(r) {
                        Some(obligations.clone())
                    } else {
                        None
                    }
                }
                Head::Slot(s) => {
                    let mut obs = obligations.clone();
                    obs.push((Tail::Input(s), req.clone()));
                    Some(obs)
                }
            };
            if let Some(obs) = continued {
                self.assignment.insert(pos.clone(), cand.clone());
                self.used.insert(cand.clone());
                self.resolve(obs);
                self.used.remove(&cand);
                self.assignment.remove(&pos);
            }
        }
    }

    fn finish(&mut self) {
        let n = self.g.source.inputs.len() + self.f.source.outputs.len();
        if self.assignment.len() != n {
            return;
        }
        let mu = Forest {
            source: self.f.source.clone(),
            target: self.g.source.clone(),
            attach: self.assignment.clone(),
        };
        if mu.validate().is_ok() && compose(self.g, &mu).as_ref() == Ok(self.f) {
            self.found.push(mu);
        }
    }
}

/// The forced descent from each corolla of b: follow the corolla's output
/// through g into a slot of b, hop to that slot's own corolla, repeat. The
/// hop is forced because mu must send a slot of b to its own root.
fn descent_table(g: &Forest) -> BTreeMap<String, Descent> {
    let mut out = BTreeMap::new();
    for w in g.source.outputs.ids() {
        let mut stop_colors = BTreeSet::new();
        let mut at = w.to_string();
        let mut root = None;
        for _ in 0..=g.source.outputs.len() {
            match &g.attach[&Tail::Vertex(at.clone())] {
                Head::Root(r) => {
                    root = Some(r.clone());
                    break;
                }
                Head::Slot(s) => {
                    if let Some(c) = g.source.inputs.color_of(s) {
                        stop_colors.insert(c.to_string());
                    }
                    match g.source.structure.get(s) {
                        Some(next) => at = next.clone(),
                        None => break,
                    }
                }
            }
        }
        out.insert(w.to_string(), Descent { root, stop_colors });
    }
    out
}

/// All `mu` with `g . mu == f`, where `f` and `g` share their target
/// strictly. Empty when the targets differ or the equation is
/// unsatisfiable.
pub fn hom_over(f: &Forest, g: &Forest) -> Vec<Forest> {
    if f.target != g.target {
        return Vec::new();
    }
    // Vertices of a go to the bottom of the stack: paths seeded by an
    // input of z are near-deterministic (one forced corolla per hop) and
    // resolving them first builds up root debts that pin the vertices.
    let mut obligations = Vec::new();
    for v in f.source.outputs.ids() {
        let tail = Tail::Vertex(v.to_string());
        obligations.push((tail.clone(), f.attach[&tail].clone()));
    }
    for i in g.target.inputs.ids() {
        let tail = Tail::Input(i.to_string());
        match &g.attach[&tail] {
            Head::Root(r) => {
                // No unknown on this path; f must agree outright.
                if f.attach[&tail] != Head::Root(r.clone()) {
                    return Vec::new();
                }
            }
            Head::Slot(s) => {
                obligations.push((Tail::Input(s.clone()), f.attach[&tail].clone()));
            }
        }
    }
    let mut search = Search {
        f,
        g,
        descents: descent_table(g),
        assignment: BTreeMap::new(),
        used: BTreeSet::new(),
        pending: BTreeMap::new(),
        found: Vec::new(),
    };
    search.resolve(obligations);
    search.found
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::forest::{bijections, YoungForest};

    // Brute-force oracle: try every color-preserving bijection from tails
    // to heads and keep the ones that validate and satisfy the equation.
    fn hom_over_brute(f: &Forest, g: &Forest) -> Vec<Forest> {
        if f.target != g.target {
            return Vec::new();
        }
        let a = &f.source;
        let b = &g.source;
        let tails: Vec<String> = b
            .inputs
            .ids()
            .map(|i| Tail::Input(i.to_string()).encode())
            .chain(a.outputs.ids().map(|v| Tail::Vertex(v.to_string()).encode()))
            .collect();
        let heads: Vec<String> = b
            .outputs
            .ids()
            .map(|r| Head::Root(r.to_string()).encode())
            .chain(a.inputs.ids().map(|s| Head::Slot(s.to_string()).encode()))
            .collect();
        let color_of_tail = |t: &str| match Tail::decode(t).unwrap() {
            Tail::Input(i) => b.inputs.color_of(&i).unwrap().to_string(),
            Tail::Vertex(v) => a.outputs.color_of(&v).unwrap().to_string(),
        };
        let color_of_head = |h: &str| match Head::decode(h).unwrap() {
            Head::Root(r) => b.outputs.color_of(&r).unwrap().to_string(),
            Head::Slot(s) => a.inputs.color_of(&s).unwrap().to_string(),
        };
        let t_refs: Vec<&str> = tails.iter().map(String::as_str).collect();
        let h_refs: Vec<&str> = heads.iter().map(String::as_str).collect();
        let mut out = Vec::new();
        for table in bijections(&t_refs, &h_refs, |t, h| color_of_tail(t) == color_of_head(h)) {
            let attach = table
                .into_iter()
                .map(|(t, h)| (Tail::decode(&t).unwrap(), Head::decode(&h).unwrap()))
                .collect();
            let mu = Forest { source: a.clone(), target: b.clone(), attach };
            if mu.validate().is_ok() && compose(g, &mu).as_ref() == Ok(f) {
                out.push(mu);
            }
        }
        out
    }

    fn assert_same_homs(f: &Forest, g: &Forest) {
        let fast = hom_over(f, g);
        let brute = hom_over_brute(f, g);
        assert_eq!(fast.len(), brute.len());
        for mu in &fast {
            assert!(brute.contains(mu));
        }
    }

    #[test]
    fn endomorphisms_over_the_running_forest() {
        let f = forest_f();
        let homs = hom_over(&f, &f);
        assert!(homs.contains(&Forest::identity(&f.source)));
        assert_same_homs(&f, &f);
    }

    #[test]
    fn factoring_the_composite_through_g_recovers_f() {
        let f = forest_f();
        let g = forest_g();
        let gf = compose(&g, &f).unwrap();
        let homs = hom_over(&gf, &g);
        assert!(homs.contains(&f));
        assert_same_homs(&gf, &g);
    }

    #[test]
    fn identity_target_side_gives_the_forest_itself() {
        let f = forest_f();
        let id = Forest::identity(&f.target);
        let homs = hom_over(&f, &id);
        assert_eq!(homs, vec![f.clone()]);
        assert_same_homs(&f, &id);
    }

    #[test]
    fn mismatched_targets_have_no_morphisms() {
        assert!(hom_over(&forest_f(), &forest_g()).is_empty());
    }

    #[test]
    fn unsatisfiable_unit_edge_requirement_is_detected_early() {
        // g has a unit edge; f disagrees on that input, so Hom is empty
        // whatever mu does.
        let colors = one_color();
        let y = YoungForest::corolla_shape(colors.clone(), "r", "a", [("1", "a")]);
        let g = Forest::new(
            YoungForest::empty(colors.clone()),
            y.clone(),
            [(Tail::Input("1".into()), Head::Root("r".into()))],
        );
        let x = YoungForest::corolla_shape(colors, "v", "a", [("s", "a")]);
        let f = Forest::new(
            x,
            y,
            [
                (Tail::Input("1".into()), Head::Slot("s".into())),
                (Tail::Vertex("v".into()), Head::Root("r".into())),
            ],
        );
        assert!(f.validate().is_ok() && g.validate().is_ok());
        assert!(hom_over(&f, &g).is_empty());
        assert_same_homs(&f, &g);
    }
}
