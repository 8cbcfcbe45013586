//! Canonical labeling by individualization-refinement.
//!
//! Colour refinement to an equitable ordered partition, then branching on
//! the first smallest non-trivial cell. Twins (vertices with equal open or
//! closed neighborhoods) in a cell are interchangeable by an automorphism
//! that fixes everything already individualized, so only one twin per class
//! is branched on. The lexicographically least adjacency string over all
//! leaves is the canonical form.

use crate::graph::MolecularSpace;

/// Isomorphism-invariant code of a graph: vertex count plus the packed upper
/// triangle of the adjacency matrix under the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub code: Vec<u64>,
}

/// Default cap on search-tree nodes.
pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000;

struct Canon<'a> {
    g: &'a MolecularSpace,
    best: Option<(Vec<u64>, Vec<usize>)>,
    nodes: u64,
    limit: u64,
}

type Partition = Vec<Vec<usize>>;

impl<'a> Canon<'a> {
    fn refine(&self, mut p: Partition) -> Partition {
        let n = self.g.volume();
        let mut cell_of = vec![0usize; n];
        loop {
            for (c, cell) in p.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = c;
                }
            }
            let k = p.len();
            let mut next: Partition = Vec::with_capacity(n);
            for cell in &p {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig = vec![0u32; k];
                        for &u in self.g.nbrs(v) {
                            sig[cell_of[u]] += 1;
                        }
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|x| x.1).collect());
                        start = i;
                    }
                }
            }
            let changed = next.len() != p.len();
            p = next;
            if !changed {
                return p;
            }
        }
    }

    fn leaf_code(&self, order: &[usize]) -> Vec<u64> {
        let n = order.len();
        let total = n * n.saturating_sub(1) / 2;
        let mut code = vec![0u64; total.div_ceil(64)];
        let mut pos = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.g.adj(order[a], order[b]) {
                    code[pos / 64] |= 1u64 << (63 - pos % 64);
                }
                pos += 1;
            }
        }
        code
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let mut a = self.g.nbr_bits(u).clone();
        let mut b = self.g.nbr_bits(v).clone();
        a.set(v, false);
        b.set(u, false);
        a == b
    }

    fn search(&mut self, p: Partition) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        let target = p
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(ti) = target else {
            let order: Vec<usize> = p.iter().map(|c| c[0]).collect();
            let code = self.leaf_code(&order);
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, order));
            }
            return true;
        };
        let cell = p[ti].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mut q: Partition = Vec::with_capacity(p.len() + 1);
            q.extend_from_slice(&p[..ti]);
            q.push(vec![v]);
            q.push(cell.iter().copied().filter(|&x| x != v).collect());
            q.extend_from_slice(&p[ti + 1..]);
            let q = self.refine(q);
            if !self.search(q) {
                return false;
            }
        }
        true
    }
}

/// Canonical form and the canonical vertex order (indices of `g`), or `None`
/// if the search exceeds `node_limit`.
pub fn canonical_labeling(g: &MolecularSpace, node_limit: u64) -> Option<(CanonicalForm, Vec<usize>)> {
    let n = g.volume();
    if n == 0 {
        return Some((CanonicalForm { n: 0, code: Vec::new() }, Vec::new()));
    }
    let mut c = Canon { g, best: None, nodes: 0, limit: node_limit };
    // initial partition by degree, ascending
    let mut by_deg: Vec<(usize, usize)> = (0..n).map(|v| (g.degree(v), v)).collect();
    by_deg.sort();
    let mut p: Partition = Vec::new();
    for (d, v) in by_deg {
        match p.last_mut() {
            Some(cell) if g.degree(cell[0]) == d => cell.push(v),
            _ => p.push(vec![v]),
        }
    }
    let p = c.refine(p);
    if !c.search(p) {
        return None;
    }
    let (code, order) = c.best.expect("at least one leaf");
    Some((CanonicalForm { n, code }, order))
}

pub fn canonical_form(g: &MolecularSpace) -> Option<CanonicalForm> {
    canonical_labeling(g, DEFAULT_NODE_LIMIT).map(|x| x.0)
}

/// Cheap isomorphism-invariant fingerprint used to reject early.
fn fingerprint(g: &MolecularSpace) -> (usize, usize, Vec<usize>) {
    let mut d: Vec<usize> = (0..g.volume()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    (g.volume(), g.weight(), d)
}

/// Isomorphism test; `None` when the canonical search hit its limit.
pub fn is_isomorphic(a: &MolecularSpace, b: &MolecularSpace) -> Option<bool> {
    if fingerprint(a) != fingerprint(b) {
        return Some(false);
    }
    match (canonical_form(a), canonical_form(b)) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    }
}

/// The canonically relabeled copy of `g` (ids `0..n`).
pub fn canonical_graph(g: &MolecularSpace) -> Option<MolecularSpace> {
    let (_, order) = canonical_labeling(g, DEFAULT_NODE_LIMIT)?;
    let n = order.len();
    Some(MolecularSpace::from_adjacency_fn(n, |i, j| g.adj(order[i], order[j])))
}
