//! Clique counts, the Euler characteristic and its identities, and the
//! combinatorial tiling solver for closed surfaces.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MolecularSpace;
use crate::local::LocalGraph;

/// Default cap on the total number of cliques counted.
pub const DEFAULT_CLIQUE_LIMIT: u64 = 50_000_000;

/// Clique counts: `counts[k-1]` is the number of K(k) subgraphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FVector {
    pub counts: Vec<u64>,
}

impl FVector {
    /// n_k with the convention n_0 = 1.
    pub fn n(&self, k: usize) -> u64 {
        if k == 0 {
            1
        } else {
            self.counts.get(k - 1).copied().unwrap_or(0)
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn euler(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

pub fn f_vector(g: &MolecularSpace) -> Result<FVector> {
    f_vector_limited(g, DEFAULT_CLIQUE_LIMIT)
}

pub fn f_vector_limited(g: &MolecularSpace, limit: u64) -> Result<FVector> {
    let mut counts = Vec::new();
    let mut total = 0u64;
    let mut cand = Vec::new();
    for v in 0..g.volume() {
        cand.clear();
        cand.extend(g.nbrs(v).iter().copied().filter(|&u| u > v));
        count_rec(g, &cand, 0, &mut counts, &mut total, limit)?;
    }
    Ok(FVector { counts })
}

fn count_rec(
    g: &MolecularSpace,
    cand: &[usize],
    depth: usize,
    counts: &mut Vec<u64>,
    total: &mut u64,
    limit: u64,
) -> Result<()> {
    if counts.len() <= depth {
        counts.push(0);
    }
    counts[depth] += 1;
    *total += 1;
    if *total > limit {
        return Err(Error::BudgetExceeded(format!("more than {limit} cliques")));
    }
    for (k, &u) in cand.iter().enumerate() {
        let next: Vec<usize> = cand[k + 1..].iter().copied().filter(|&w| g.adj(u, w)).collect();
        count_rec(g, &next, depth + 1, counts, total, limit)?;
    }
    Ok(())
}

/// All cliques of size `k` as ascending index lists, in lexicographic order.
pub fn cliques_of_size(g: &MolecularSpace, k: usize) -> Vec<Vec<usize>> {
    fn rec(g: &MolecularSpace, cur: &mut Vec<usize>, cand: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for (i, &u) in cand.iter().enumerate() {
            if cand.len() - i < k - cur.len() {
                break;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| g.adj(u, w)).collect();
            cur.push(u);
            rec(g, cur, &next, k, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let all: Vec<usize> = (0..g.volume()).collect();
    rec(g, &mut Vec::new(), &all, k, &mut out);
    out
}

/// Clique number (size of the largest clique).
pub fn clique_number(g: &MolecularSpace) -> usize {
    match LocalGraph::from_space(g) {
        Some(lg) => lg.clique_counts(lg.full()).len(),
        None => f_vector(g).map(|f| f.len()).unwrap_or(0),
    }
}

/// F(G) = sum of (-1)^(k+1) n_k.
pub fn euler(g: &MolecularSpace) -> Result<i64> {
    Ok(f_vector(g)?.euler())
}

/// L(H) = sum of (-1)^(k+1) m_k / (k+1) over the f-vector of H.
pub fn rim_weight(f: &FVector) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, &m) in f.counts.iter().enumerate() {
        let k = i + 1;
        let term = BigRational::new(BigInt::from(m), BigInt::from(k as u64 + 1));
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Euler characteristic from rim f-vectors: F = t - sum over v of L(O(v)).
pub fn euler_local(g: &MolecularSpace) -> Result<i64> {
    let mut total = BigRational::from_integer(BigInt::from(g.volume() as u64));
    for v in g.vertices() {
        let rim = g.rim(*v)?.to_space();
        total -= rim_weight(&f_vector(&rim)?);
    }
    if !total.is_integer() {
        return Err(Error::InternalInvariantViolation(format!("local Euler sum {total} is not an integer")));
    }
    total
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::InternalInvariantViolation("local Euler sum out of range".into()))
}

/// F(G+H) = F(G) + F(H) - F(G)F(H) for the join.
pub fn euler_join_identity(fg: i64, fh: i64) -> i64 {
    fg + fh - fg * fh
}

/// F of the complete partite space K(n_1, ..., n_p): 1 - prod(1 - n_k).
pub fn euler_partite(sizes: &[u64]) -> i64 {
    1 - sizes.iter().map(|&n| 1 - n as i64).product::<i64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TileCount {
    Exact(u64),
    /// Any count at least this large (the tile type contributes nothing).
    AtLeast(u64),
}

/// One homogeneous or two-type tiling: pairs (sides m, count t).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingSolution {
    pub tiles: Vec<(u32, TileCount)>,
}

#[derive(Clone, Debug)]
pub struct TilingQuery {
    pub chi: i64,
    pub min_volume: u64,
    pub max_types: usize,
    pub m_min: u32,
    pub m_max: u32,
    /// Bound on each tile count when the equation leaves counts unbounded.
    pub max_tiles: u64,
}

impl TilingQuery {
    pub fn new(chi: i64, min_volume: u64) -> Self {
        TilingQuery { chi, min_volume, max_types: 1, m_min: 4, m_max: 12, max_tiles: 200 }
    }
}

/// Integer solutions of sum t_i (1 - m_i/6) = chi with every tile touching
/// m_i others, m_i >= 4 and total count at least `min_volume`.
pub fn tiling_solutions(q: &TilingQuery) -> Result<Vec<TilingSolution>> {
    if q.m_min < 4 || q.m_max < q.m_min || !(1..=2).contains(&q.max_types) {
        return Err(Error::InvalidArgument("need 4 <= m_min <= m_max and 1 or 2 tile types".into()));
    }
    let rhs = 6 * q.chi;
    let mut out = Vec::new();
    for m in q.m_min..=q.m_max {
        let c = 6 - m as i64;
        if c == 0 {
            if rhs == 0 {
                out.push(TilingSolution { tiles: vec![(m, TileCount::AtLeast(q.min_volume.max(1)))] });
            }
            continue;
        }
        if rhs % c == 0 && rhs / c >= 1 && (rhs / c) as u64 >= q.min_volume {
            out.push(TilingSolution { tiles: vec![(m, TileCount::Exact((rhs / c) as u64))] });
        }
    }
    if q.max_types == 2 {
        for m1 in q.m_min..=q.m_max {
            for m2 in m1 + 1..=q.m_max {
                let (c1, c2) = (6 - m1 as i64, 6 - m2 as i64);
                for t1 in 1..=q.max_tiles as i64 {
                    if c2 == 0 {
                        if c1 * t1 == rhs {
                            let rest = (q.min_volume as i64 - t1).max(1) as u64;
                            out.push(TilingSolution {
                                tiles: vec![(m1, TileCount::Exact(t1 as u64)), (m2, TileCount::AtLeast(rest))],
                            });
                        }
                        continue;
                    }
                    let r = rhs - c1 * t1;
                    if r % c2 != 0 {
                        continue;
                    }
                    let t2 = r / c2;
                    if t2 >= 1 && t2 <= q.max_tiles as i64 && (t1 + t2) as u64 >= q.min_volume {
                        out.push(TilingSolution {
                            tiles: vec![(m1, TileCount::Exact(t1 as u64)), (m2, TileCount::Exact(t2 as u64))],
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}
