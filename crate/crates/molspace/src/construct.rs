//! Constructions: join, cone, strong product and its normalization,
//! partite spaces, minimal spheres, block spaces and gluing along
//! isomorphic subspaces.
//!
//! Constructors renumber vertices: join and partite place the first factor
//! first, the product uses `i * |H| + j` for the pair of indices `(i, j)`.

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::Tri;
use crate::graph::{MolecularSpace, VertexId};
use crate::transform::{joint_rim_tri, Move, Step};

pub fn cycle(n: usize) -> MolecularSpace {
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    MolecularSpace::from_edges(n, &e)
}

pub fn path(n: usize) -> MolecularSpace {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    MolecularSpace::from_edges(n, &e)
}

/// Direct sum: disjoint union plus every edge between the two sides.
pub fn join(g: &MolecularSpace, h: &MolecularSpace) -> MolecularSpace {
    let (n, m) = (g.volume(), h.volume());
    MolecularSpace::from_adjacency_fn(n + m, |i, j| match (i < n, j < n) {
        (true, true) => g.adj(i, j),
        (false, false) => h.adj(i - n, j - n),
        _ => true,
    })
}

/// Cone over `g`; the apex takes the next free id.
pub fn cone(g: &MolecularSpace) -> MolecularSpace {
    let apex = g.fresh_id();
    g.add_vertex(apex, g.vertices()).expect("fresh id")
}

/// Suspension S0 + g.
pub fn suspension(g: &MolecularSpace) -> MolecularSpace {
    join(&MolecularSpace::isolated(2), g)
}

pub fn strong_product(g: &MolecularSpace, h: &MolecularSpace) -> MolecularSpace {
    let m = h.volume();
    MolecularSpace::from_adjacency_fn(g.volume() * m, |x, y| {
        let (i, j, k, l) = (x / m, x % m, y / m, y % m);
        (i == k || g.adj(i, k)) && (j == l || h.adj(j, l))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NobResult {
    pub space: MolecularSpace,
    pub deletions: Vec<Step>,
}

/// Strong product with one diagonal of every square removed. For factor
/// edges `a < b` and `c < d` (index order) the diagonal `(a,c)(b,d)` stays
/// and `(a,d)(b,c)` goes; every deletion is checked against its joint rim.
pub fn nob_normalize(g: &MolecularSpace, h: &MolecularSpace, budget: &Budget) -> Result<NobResult> {
    let m = h.volume();
    let mut p = strong_product(g, h);
    let mut deletions = Vec::new();
    for (a, b) in g.index_edges() {
        for (c, d) in h.index_edges() {
            let u = a * m + d;
            let v = b * m + c;
            let (uid, vid) = (VertexId(u as u32), VertexId(v as u32));
            let (ui, vi) = (p.index_of(uid).expect("present"), p.index_of(vid).expect("present"));
            match joint_rim_tri(&p, ui, vi, budget) {
                Tri::Yes => {}
                t => {
                    return Err(Error::InternalInvariantViolation(format!(
                        "diagonal {uid},{vid} has joint rim that is {}",
                        if t == Tri::No { "not contractible" } else { "undecided" }
                    )))
                }
            }
            let license = p.joint_rim(&[uid, vid])?.members();
            p = p.delete_edge(uid, vid)?;
            deletions.push(Step { mv: Move::DeleteEdge { u: uid, v: vid }, license });
        }
    }
    Ok(NobResult { space: p, deletions })
}

/// Complete multipartite space; part k occupies consecutive ids.
pub fn partite(sizes: &[usize]) -> MolecularSpace {
    let part: Vec<usize> = sizes.iter().enumerate().flat_map(|(k, &s)| std::iter::repeat_n(k, s)).collect();
    MolecularSpace::from_adjacency_fn(part.len(), |i, j| part[i] != part[j])
}

/// K(2,...,2) with n+1 parts; part k is {2k, 2k+1}.
pub fn minimal_sphere(n: usize) -> MolecularSpace {
    partite(&vec![2; n + 1])
}

/// Replaces vertex i by a clique of `sizes[i]` points; blocks of adjacent
/// vertices are joined completely.
pub fn block_space(g: &MolecularSpace, sizes: &[usize]) -> Result<MolecularSpace> {
    if sizes.len() != g.volume() || sizes.contains(&0) {
        return Err(Error::InvalidArgument("block sizes must be positive, one per vertex".into()));
    }
    let owner: Vec<usize> = sizes.iter().enumerate().flat_map(|(k, &s)| std::iter::repeat_n(k, s)).collect();
    Ok(MolecularSpace::from_adjacency_fn(owner.len(), |i, j| owner[i] == owner[j] || g.adj(owner[i], owner[j])))
}

/// Identifies the subspace of `h` listed on the right of `iso` with the
/// subspace of `g` on the left. Ids of `g` are kept; the remaining points of
/// `h` get fresh ids in id order.
pub fn glue_spaces(g: &MolecularSpace, h: &MolecularSpace, iso: &[(VertexId, VertexId)]) -> Result<MolecularSpace> {
    let mut to_g = std::collections::BTreeMap::new();
    let mut left = std::collections::BTreeSet::new();
    for &(a, b) in iso {
        if !g.contains(a) {
            return Err(Error::InvalidGluing(format!("{a} is not in the first space")));
        }
        if !h.contains(b) {
            return Err(Error::InvalidGluing(format!("{b} is not in the second space")));
        }
        if to_g.insert(b, a).is_some() || !left.insert(a) {
            return Err(Error::InvalidGluing("identification is not a bijection".into()));
        }
    }
    for &(a, b) in iso {
        for &(c, d) in iso {
            if a < c && g.adjacent(a, c) != h.adjacent(b, d) {
                return Err(Error::InvalidGluing(format!("pair {a},{c} and pair {b},{d} differ in adjacency")));
            }
        }
    }
    let mut next = g.fresh_id().0;
    for &v in h.vertices() {
        to_g.entry(v).or_insert_with(|| {
            next += 1;
            VertexId(next - 1)
        });
    }
    let mut vertices: Vec<u32> = g.vertices().iter().map(|v| v.0).collect();
    vertices.extend(h.vertices().iter().filter(|v| !iso.iter().any(|p| p.1 == **v)).map(|v| to_g[v].0));
    let mut edges: Vec<(u32, u32)> = g.edges().into_iter().map(|(a, b)| (a.0, b.0)).collect();
    edges.extend(h.edges().into_iter().map(|(a, b)| (to_g[&a].0, to_g[&b].0)));
    MolecularSpace::new(vertices, edges)
}
