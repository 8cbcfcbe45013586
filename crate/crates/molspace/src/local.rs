//! Word-sized adjacency for graphs of at most 64 vertices. Every search
//! routine (contractibility, normality, swaps) runs on these; subspaces of a
//! `LocalGraph` are plain `u64` masks over the same universe, so the rims of
//! an induced subgraph are `adj[v] & mask` and one memo table serves a whole
//! recursive search.

use crate::graph::MolecularSpace;

pub type Mask = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalGraph {
    pub adj: Vec<Mask>,
}

pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[inline]
pub fn bit(i: usize) -> Mask {
    1u64 << i
}

impl LocalGraph {
    pub const MAX: usize = 64;

    pub fn from_space(g: &MolecularSpace) -> Option<LocalGraph> {
        if g.volume() > Self::MAX {
            return None;
        }
        let adj = (0..g.volume()).map(|i| g.nbrs(i).iter().fold(0, |m, &j| m | bit(j))).collect();
        Some(LocalGraph { adj })
    }

    /// Induced subgraph of `g` on the given (sorted) indices, relabeled `0..k`.
    pub fn from_subset(g: &MolecularSpace, idx: &[usize]) -> Option<LocalGraph> {
        if idx.len() > Self::MAX {
            return None;
        }
        let adj = idx
            .iter()
            .map(|&i| {
                idx.iter().enumerate().filter(|&(_, &j)| g.adj(i, j)).fold(0, |m, (k, _)| m | bit(k))
            })
            .collect();
        Some(LocalGraph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn full(&self) -> Mask {
        if self.n() == 64 {
            u64::MAX
        } else {
            bit(self.n()) - 1
        }
    }

    #[inline]
    pub fn rim(&self, v: usize, s: Mask) -> Mask {
        self.adj[v] & s
    }

    pub fn is_connected(&self, s: Mask) -> bool {
        if s == 0 {
            return false;
        }
        let start = s & s.wrapping_neg();
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= s & !seen;
            seen |= next;
            frontier = next;
        }
        seen == s
    }

    pub fn components(&self, s: Mask) -> Vec<Mask> {
        let mut rest = s;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut seen = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                next &= rest & !seen;
                seen |= next;
                frontier = next;
            }
            out.push(seen);
            rest &= !seen;
        }
        out
    }

    /// Clique counts by size within `s`: entry k-1 is the number of K(k).
    pub fn clique_counts(&self, s: Mask) -> Vec<u64> {
        fn rec(g: &LocalGraph, cand: Mask, depth: usize, counts: &mut Vec<u64>) {
            for v in bits(cand) {
                if counts.len() <= depth {
                    counts.push(0);
                }
                counts[depth] += 1;
                let higher = if v == 63 { 0 } else { cand & !((bit(v) << 1) - 1) };
                let next = higher & g.adj[v];
                if next != 0 {
                    rec(g, next, depth + 1, counts);
                }
            }
        }
        let mut counts = Vec::new();
        rec(self, s, 0, &mut counts);
        counts
    }

    pub fn euler(&self, s: Mask) -> i64 {
        self.clique_counts(s)
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// A vertex of `s` adjacent to every other vertex of `s`.
    pub fn apex(&self, s: Mask) -> Option<usize> {
        bits(s).find(|&v| self.adj[v] & s == s & !bit(v))
    }

    pub fn is_clique(&self, s: Mask) -> bool {
        bits(s).all(|v| self.adj[v] & s == s & !bit(v))
    }

    /// Induced subgraph on `s`, relabeled to `0..popcount(s)`.
    pub fn restrict(&self, s: Mask) -> LocalGraph {
        let idx: Vec<usize> = bits(s).collect();
        let adj = idx
            .iter()
            .map(|&i| idx.iter().enumerate().filter(|&(_, &j)| self.adj[i] & bit(j) != 0).fold(0, |m, (k, _)| m | bit(k)))
            .collect();
        LocalGraph { adj }
    }

    pub fn to_space(&self) -> MolecularSpace {
        MolecularSpace::from_adjacency_fn(self.n(), |i, j| self.adj[i] & bit(j) != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_components() {
        let g = LocalGraph::from_space(&MolecularSpace::complete(4)).unwrap();
        assert_eq!(g.clique_counts(g.full()), vec![4, 6, 4, 1]);
        assert_eq!(g.euler(g.full()), 1);
        let h = LocalGraph::from_space(&MolecularSpace::from_edges(4, &[(0, 1), (2, 3)])).unwrap();
        assert_eq!(h.components(h.full()), vec![0b0011, 0b1100]);
        assert!(!h.is_connected(h.full()));
        assert!(h.is_connected(0b0011));
        assert_eq!(h.apex(0b0011), Some(0));
        assert_eq!(h.restrict(0b1100).adj, vec![0b10, 0b01]);
    }
}
