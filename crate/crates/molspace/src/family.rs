//! Membership in a family generated from a base space by licensed point
//! deletions: the contractible family (base = one point) and the families
//! T(B) of basis transformations.
//!
//! A graph belongs when it is the base itself, or some vertex has a rim
//! in the family and deleting that vertex leaves a member. Graphs up to
//! `Budget::exact_size` are searched exhaustively over deletion orders;
//! larger ones delete greedily in id order.

use std::collections::HashMap;

use crate::budget::Budget;
use crate::graph::MolecularSpace;
use crate::local::{bit, bits, LocalGraph, Mask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }
}

pub trait Family {
    /// Volume of the base.
    fn base_size(&self) -> usize;
    /// `s` is (isomorphic to) the base.
    fn is_base(&self, g: &LocalGraph, s: Mask) -> bool;
    /// Invariant-based refutation; must be sound.
    fn refutes(&self, g: &LocalGraph, s: Mask) -> bool;
    /// Sound refutation used only once greedy deletion is stuck.
    fn refutes_stuck(&self, _g: &LocalGraph, _s: Mask) -> bool {
        false
    }
    /// Cones over nonempty spaces are members.
    fn cones_are_members(&self) -> bool {
        false
    }
}

/// The contractible family T.
pub struct Contractible;

impl Family for Contractible {
    fn base_size(&self) -> usize {
        1
    }

    fn is_base(&self, _g: &LocalGraph, s: Mask) -> bool {
        s.count_ones() == 1
    }

    fn refutes(&self, g: &LocalGraph, s: Mask) -> bool {
        !g.is_connected(s) || g.euler(s) != 1
    }

    fn refutes_stuck(&self, g: &LocalGraph, s: Mask) -> bool {
        match crate::homology::homology(&g.restrict(s).to_space(), None) {
            Ok(h) => !h.is_point(),
            Err(_) => false,
        }
    }

    fn cones_are_members(&self) -> bool {
        true
    }
}

pub struct Search<'a, F: Family> {
    pub g: &'a LocalGraph,
    fam: &'a F,
    budget: &'a Budget,
    memo: HashMap<Mask, Tri>,
    steps: u64,
    pub exhausted: bool,
}

impl<'a, F: Family> Search<'a, F> {
    pub fn new(g: &'a LocalGraph, fam: &'a F, budget: &'a Budget) -> Self {
        Search { g, fam, budget, memo: HashMap::new(), steps: 0, exhausted: false }
    }

    pub fn decide(&mut self, s: Mask) -> Tri {
        let k = s.count_ones() as usize;
        let base = self.fam.base_size();
        if k < base {
            return Tri::No;
        }
        if k == base {
            return if self.fam.is_base(self.g, s) { Tri::Yes } else { Tri::No };
        }
        if let Some(&t) = self.memo.get(&s) {
            return t;
        }
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            self.exhausted = true;
            return Tri::Unknown;
        }
        let t = if self.fam.refutes(self.g, s) {
            Tri::No
        } else if self.fam.cones_are_members() && self.g.apex(s).is_some() {
            Tri::Yes
        } else if k <= self.budget.exact_size {
            self.exhaustive(s)
        } else {
            self.greedy(s)
        };
        if t != Tri::Unknown || !self.exhausted {
            self.memo.insert(s, t);
        }
        t
    }

    fn exhaustive(&mut self, s: Mask) -> Tri {
        let mut unknown = false;
        for v in bits(s) {
            match self.decide(self.g.rim(v, s)) {
                Tri::Yes => match self.decide(s & !bit(v)) {
                    Tri::Yes => return Tri::Yes,
                    Tri::Unknown => unknown = true,
                    Tri::No => {}
                },
                Tri::Unknown => unknown = true,
                Tri::No => {}
            }
        }
        if unknown {
            Tri::Unknown
        } else {
            Tri::No
        }
    }

    fn greedy(&mut self, s: Mask) -> Tri {
        for v in bits(s) {
            if self.decide(self.g.rim(v, s)) == Tri::Yes {
                return self.decide(s & !bit(v));
            }
        }
        if self.fam.refutes_stuck(self.g, s) {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    /// Deletion order (local indices) from `s` down to the base; call only
    /// after `decide(s)` returned `Yes`.
    pub fn witness(&mut self, mut s: Mask) -> Vec<usize> {
        let mut out = Vec::new();
        while s.count_ones() as usize > self.fam.base_size() {
            let next = bits(s).find(|&v| self.decide(self.g.rim(v, s)) == Tri::Yes && self.decide(s & !bit(v)) == Tri::Yes);
            match next {
                Some(v) => {
                    out.push(v);
                    s &= !bit(v);
                }
                None => break,
            }
        }
        out
    }
}

/// Membership of a whole space of at most 64 vertices, with witness indices.
pub fn decide_local<F: Family>(g: &MolecularSpace, fam: &F, budget: &Budget) -> Option<(Tri, Vec<usize>)> {
    let lg = LocalGraph::from_space(g)?;
    let mut s = Search::new(&lg, fam, budget);
    let full = lg.full();
    let t = s.decide(full);
    let w = if t == Tri::Yes { s.witness(full) } else { Vec::new() };
    Some((t, w))
}
