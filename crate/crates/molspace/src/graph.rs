//! The molecular space type: a finite simple graph with ordered vertex ids,
//! plus the neighborhood primitives (rims, balls, distances, subspaces).

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

/// Finite simple graph. Vertices are kept sorted by id, so the internal
/// index order is the id order and every enumeration is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct MolecularSpace {
    ids: Vec<VertexId>,
    nbrs: Vec<Vec<usize>>,
    bits: Vec<FixedBitSet>,
}

impl fmt::Debug for MolecularSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MolecularSpace")
            .field("vertices", &self.ids.iter().map(|v| v.0).collect::<Vec<_>>())
            .field("edges", &self.edges().iter().map(|(a, b)| (a.0, b.0)).collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    vertices: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

impl Serialize for MolecularSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let w = Wire {
            vertices: self.ids.iter().map(|v| v.0).collect(),
            edges: self.edges().iter().map(|(a, b)| (a.0, b.0)).collect(),
        };
        w.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MolecularSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        MolecularSpace::new(w.vertices, w.edges).map_err(serde::de::Error::custom)
    }
}

impl MolecularSpace {
    pub fn empty() -> Self {
        MolecularSpace { ids: Vec::new(), nbrs: Vec::new(), bits: Vec::new() }
    }

    /// Builds a space from explicit vertices and edges. Duplicate edges are
    /// merged; loops and edges on undeclared vertices are rejected.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = u32>,
        E: IntoIterator<Item = (u32, u32)>,
    {
        let mut ids: Vec<VertexId> = vertices.into_iter().map(VertexId).collect();
        ids.sort_unstable();
        ids.dedup();
        let n = ids.len();
        let mut nbrs = vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at {a}")));
            }
            let i = ids.binary_search(&VertexId(a)).map_err(|_| Error::VertexNotFound(VertexId(a)))?;
            let j = ids.binary_search(&VertexId(b)).map_err(|_| Error::VertexNotFound(VertexId(b)))?;
            nbrs[i].push(j);
            nbrs[j].push(i);
        }
        Ok(Self::from_index_lists(ids, nbrs))
    }

    /// Vertices `0..n` with the given edges. Panics on malformed input; meant
    /// for constructors with known-good data.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let ids = (0..n as u32).map(VertexId).collect();
        let mut nbrs = vec![Vec::new(); n];
        for &(a, b) in edges {
            assert!(a != b && a < n && b < n, "bad edge {a}-{b}");
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        Self::from_index_lists(ids, nbrs)
    }

    /// Builds from index-based adjacency (`adj(i, j)` for `i < j`).
    pub fn from_adjacency_fn(n: usize, mut adj: impl FnMut(usize, usize) -> bool) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if adj(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    fn from_index_lists(ids: Vec<VertexId>, mut nbrs: Vec<Vec<usize>>) -> Self {
        let n = ids.len();
        let mut bits = Vec::with_capacity(n);
        for list in nbrs.iter_mut() {
            list.sort_unstable();
            list.dedup();
            let mut b = FixedBitSet::with_capacity(n);
            for &j in list.iter() {
                b.insert(j);
            }
            bits.push(b);
        }
        MolecularSpace { ids, nbrs, bits }
    }

    /// Complete graph K(n) on ids `0..n`.
    pub fn complete(n: usize) -> Self {
        Self::from_adjacency_fn(n, |_, _| true)
    }

    /// n isolated points H(n).
    pub fn isolated(n: usize) -> Self {
        Self::from_edges(n, &[])
    }

    pub fn volume(&self) -> usize {
        self.ids.len()
    }

    pub fn weight(&self) -> usize {
        self.nbrs.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    fn idx(&self, v: VertexId) -> Result<usize> {
        self.index_of(v).ok_or(Error::VertexNotFound(v))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    /// Sorted neighbor indices of vertex index `i`.
    pub fn nbrs(&self, i: usize) -> &[usize] {
        &self.nbrs[i]
    }

    /// Neighbor bitset of vertex index `i`.
    pub fn nbr_bits(&self, i: usize) -> &FixedBitSet {
        &self.bits[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.nbrs[i].len()
    }

    pub fn adj(&self, i: usize, j: usize) -> bool {
        self.bits[i].contains(j)
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adj(i, j),
            _ => false,
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        let i = self.idx(v)?;
        Ok(self.nbrs[i].iter().map(|&j| self.ids[j]).collect())
    }

    /// Edges as id pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.index_edges().into_iter().map(|(i, j)| (self.ids[i], self.ids[j])).collect()
    }

    pub fn index_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.weight());
        for (i, list) in self.nbrs.iter().enumerate() {
            for &j in list {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Smallest id not used by this space.
    pub fn fresh_id(&self) -> VertexId {
        VertexId(self.ids.last().map_or(0, |v| v.0 + 1))
    }

    pub fn all(&self) -> Subspace<'_> {
        let mut members = FixedBitSet::with_capacity(self.volume());
        members.insert_range(..);
        Subspace { parent: self, members }
    }

    pub fn subspace_from_bits(&self, members: FixedBitSet) -> Subspace<'_> {
        let mut m = members;
        m.grow(self.volume());
        Subspace { parent: self, members: m }
    }

    /// Induced subspace on the given ids.
    pub fn induced(&self, members: &[VertexId]) -> Result<Subspace<'_>> {
        let mut bits = FixedBitSet::with_capacity(self.volume());
        for &v in members {
            bits.insert(self.idx(v)?);
        }
        Ok(Subspace { parent: self, members: bits })
    }

    /// Induced subspace on vertex indices, materialized as a new space
    /// (ids preserved).
    pub fn induced_space_idx(&self, idx: &[usize]) -> MolecularSpace {
        let mut sorted: Vec<usize> = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut pos = vec![usize::MAX; self.volume()];
        for (k, &i) in sorted.iter().enumerate() {
            pos[i] = k;
        }
        let ids = sorted.iter().map(|&i| self.ids[i]).collect();
        let nbrs = sorted
            .iter()
            .map(|&i| self.nbrs[i].iter().filter(|&&j| pos[j] != usize::MAX).map(|&j| pos[j]).collect())
            .collect();
        Self::from_index_lists(ids, nbrs)
    }

    /// Rim O(v): the induced subspace on the neighbors of `v`.
    pub fn rim(&self, v: VertexId) -> Result<Subspace<'_>> {
        let i = self.idx(v)?;
        Ok(Subspace { parent: self, members: self.bits[i].clone() })
    }

    /// Ball U(v) = O(v) plus `v`.
    pub fn ball(&self, v: VertexId) -> Result<Subspace<'_>> {
        let i = self.idx(v)?;
        let mut m = self.bits[i].clone();
        m.insert(i);
        Ok(Subspace { parent: self, members: m })
    }

    /// Joint rim: the intersection of the rims of all listed vertices.
    pub fn joint_rim(&self, vs: &[VertexId]) -> Result<Subspace<'_>> {
        let (first, rest) = vs
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("joint rim of an empty vertex set".into()))?;
        let mut m = self.bits[self.idx(*first)?].clone();
        for &v in rest {
            m.intersect_with(&self.bits[self.idx(v)?]);
        }
        for &v in vs {
            m.set(self.idx(v)?, false);
        }
        Ok(Subspace { parent: self, members: m })
    }

    /// Common neighbors of two vertex indices, as a bitset.
    pub fn joint_rim_idx(&self, i: usize, j: usize) -> FixedBitSet {
        let mut m = self.bits[i].clone();
        m.intersect_with(&self.bits[j]);
        m.set(i, false);
        m.set(j, false);
        m
    }

    /// Full rim O(H): every vertex adjacent to a member of `h`, minus `h`.
    pub fn full_rim(&self, h: &Subspace<'_>) -> Subspace<'_> {
        let mut m = FixedBitSet::with_capacity(self.volume());
        for i in h.members.ones() {
            m.union_with(&self.bits[i]);
        }
        m.difference_with(&h.members);
        Subspace { parent: self, members: m }
    }

    /// n-ball U^n(H): vertices within distance `n` of `h`.
    pub fn n_ball(&self, h: &Subspace<'_>, n: usize) -> Subspace<'_> {
        let mut ball = h.members.clone();
        for _ in 0..n {
            let layer = self.full_rim(&Subspace { parent: self, members: ball.clone() });
            if layer.is_empty() {
                break;
            }
            ball.union_with(&layer.members);
        }
        Subspace { parent: self, members: ball }
    }

    /// n-rim O^n(H): the full rim of the (n-1)-ball.
    pub fn n_rim(&self, h: &Subspace<'_>, n: usize) -> Result<Subspace<'_>> {
        if n == 0 {
            return Err(Error::InvalidArgument("n-rim needs n >= 1".into()));
        }
        let inner = self.n_ball(h, n - 1);
        Ok(self.full_rim(&inner))
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<Distance> {
        let s = self.idx(u)?;
        let t = self.idx(v)?;
        Ok(match self.bfs(s)[t] {
            usize::MAX => Distance::Infinite,
            d => Distance::Finite(d),
        })
    }

    /// BFS distances from index `s` (`usize::MAX` for unreachable).
    pub fn bfs(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.volume()];
        let mut q = VecDeque::new();
        dist[s] = 0;
        q.push_back(s);
        while let Some(x) = q.pop_front() {
            for &y in &self.nbrs[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        dist
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn component_indices(&self) -> Vec<Vec<usize>> {
        let n = self.volume();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let x = comp[k];
                k += 1;
                for &y in &self.nbrs[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.component_indices()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.ids[i]).collect())
            .collect()
    }

    /// The empty space counts as disconnected.
    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.component_indices().len() == 1
    }

    pub fn delete_vertex(&self, v: VertexId) -> Result<MolecularSpace> {
        let i = self.idx(v)?;
        let keep: Vec<usize> = (0..self.volume()).filter(|&k| k != i).collect();
        Ok(self.induced_space_idx(&keep))
    }

    pub fn delete_edge(&self, u: VertexId, v: VertexId) -> Result<MolecularSpace> {
        let i = self.idx(u)?;
        let j = self.idx(v)?;
        if !self.adj(i, j) {
            return Err(Error::EdgeNotFound(u, v));
        }
        let mut g = self.clone();
        g.nbrs[i].retain(|&x| x != j);
        g.nbrs[j].retain(|&x| x != i);
        g.bits[i].set(j, false);
        g.bits[j].set(i, false);
        Ok(g)
    }

    /// Adds an edge between two distinct existing vertices (no-op if present).
    pub fn add_edge(&self, u: VertexId, v: VertexId) -> Result<MolecularSpace> {
        let i = self.idx(u)?;
        let j = self.idx(v)?;
        if i == j {
            return Err(Error::InvalidArgument(format!("self-loop at {u}")));
        }
        let mut g = self.clone();
        if !g.adj(i, j) {
            let p = g.nbrs[i].binary_search(&j).unwrap_err();
            g.nbrs[i].insert(p, j);
            let p = g.nbrs[j].binary_search(&i).unwrap_err();
            g.nbrs[j].insert(p, i);
            g.bits[i].insert(j);
            g.bits[j].insert(i);
        }
        Ok(g)
    }

    /// Adds a new vertex `v` adjacent to `nbrs`.
    pub fn add_vertex(&self, v: VertexId, nbrs: &[VertexId]) -> Result<MolecularSpace> {
        if self.contains(v) {
            return Err(Error::InvalidArgument(format!("vertex {v} already present")));
        }
        for &u in nbrs {
            self.idx(u)?;
        }
        let mut ids: Vec<u32> = self.ids.iter().map(|x| x.0).collect();
        ids.push(v.0);
        let mut edges: Vec<(u32, u32)> = self.edges().into_iter().map(|(a, b)| (a.0, b.0)).collect();
        edges.extend(nbrs.iter().map(|u| (v.0, u.0)));
        MolecularSpace::new(ids, edges)
    }

    /// Renames vertices to `0..n` in id order.
    pub fn normalized(&self) -> MolecularSpace {
        let ids = (0..self.volume() as u32).map(VertexId).collect();
        MolecularSpace { ids, nbrs: self.nbrs.clone(), bits: self.bits.clone() }
    }

    /// Applies an id map (must be injective).
    pub fn relabel(&self, f: impl Fn(VertexId) -> VertexId) -> Result<MolecularSpace> {
        let ids: Vec<u32> = self.ids.iter().map(|&v| f(v).0).collect();
        let edges: Vec<(u32, u32)> = self.edges().into_iter().map(|(a, b)| (f(a).0, f(b).0)).collect();
        let g = MolecularSpace::new(ids, edges)?;
        if g.volume() != self.volume() {
            return Err(Error::InvalidArgument("relabeling is not injective".into()));
        }
        Ok(g)
    }

    pub fn complement(&self) -> MolecularSpace {
        let n = self.volume();
        let mut g = MolecularSpace::from_adjacency_fn(n, |i, j| !self.adj(i, j));
        g.ids = self.ids.clone();
        g
    }
}

/// An induced subspace of a parent space, stored as a member bitset over the
/// parent's vertex indices.
#[derive(Clone, Debug)]
pub struct Subspace<'a> {
    parent: &'a MolecularSpace,
    members: FixedBitSet,
}

impl<'a> Subspace<'a> {
    pub fn parent(&self) -> &'a MolecularSpace {
        self.parent
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.parent.index_of(v).is_some_and(|i| self.members.contains(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn members(&self) -> Vec<VertexId> {
        self.members.ones().map(|i| self.parent.ids[i]).collect()
    }

    /// Edges of the induced subspace.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for i in self.members.ones() {
            for &j in &self.parent.nbrs[i] {
                if i < j && self.members.contains(j) {
                    out.push((self.parent.ids[i], self.parent.ids[j]));
                }
            }
        }
        out
    }

    pub fn to_space(&self) -> MolecularSpace {
        self.parent.induced_space_idx(&self.indices())
    }

    /// Induced subspace on the union of vertex sets; may contain edges that
    /// lie in neither operand.
    pub fn union(&self, other: &Subspace<'a>) -> Subspace<'a> {
        let mut m = self.members.clone();
        m.union_with(&other.members);
        Subspace { parent: self.parent, members: m }
    }

    pub fn intersection(&self, other: &Subspace<'a>) -> Subspace<'a> {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        Subspace { parent: self.parent, members: m }
    }
}
