//! Integer homology of the clique complex. Index convention: H_d is built
//! from chains on (d+1)-cliques, so H_0 counts components.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{cliques_of_size, f_vector_limited, DEFAULT_CLIQUE_LIMIT};
use crate::graph::{MolecularSpace, VertexId};
use crate::snf::{smith_summary, torsion_u64, SparseMatrix};

/// An integer chain on k-cliques; keys are ascending vertex lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    pub k: usize,
    pub coeffs: BTreeMap<Vec<VertexId>, i64>,
}

impl Chain {
    pub fn new(k: usize) -> Self {
        Chain { k, coeffs: BTreeMap::new() }
    }

    /// Adds `c` times the oriented clique `vs` (any order; the sign follows
    /// the parity of the sorting permutation).
    pub fn add(&mut self, vs: &[VertexId], c: i64) -> Result<()> {
        if vs.len() != self.k {
            return Err(Error::InvalidChain(format!("expected {} vertices, got {}", self.k, vs.len())));
        }
        let mut v = vs.to_vec();
        let mut sign = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let e = self.coeffs.entry(v.clone()).or_insert(0);
        *e += sign * c;
        if *e == 0 {
            self.coeffs.remove(&v);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Boundary of a chain: alternating sum of faces. Chains on single points
/// have zero boundary.
pub fn boundary(g: &MolecularSpace, c: &Chain) -> Result<Chain> {
    let mut out = Chain::new(c.k.saturating_sub(1));
    for (vs, &coef) in &c.coeffs {
        for (a, &u) in vs.iter().enumerate() {
            if !g.contains(u) {
                return Err(Error::InvalidChain(format!("vertex {u} not in space")));
            }
            for &w in &vs[a + 1..] {
                if !g.adjacent(u, w) {
                    return Err(Error::InvalidChain(format!("{u} and {w} are not adjacent")));
                }
            }
        }
        if c.k <= 1 {
            continue;
        }
        for p in 0..vs.len() {
            let face: Vec<VertexId> = vs.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &v)| v).collect();
            out.add(&face, if p % 2 == 0 { coef } else { -coef })?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub betti: u64,
    pub torsion: Vec<u64>,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// H_0, H_1, ... up to the top nonzero chain group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroups {
    pub groups: Vec<Group>,
}

impl HomologyGroups {
    pub fn betti(&self) -> Vec<u64> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    /// Betti numbers with trailing zeros removed.
    pub fn betti_trimmed(&self) -> Vec<u64> {
        let mut b = self.betti();
        while b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    pub fn torsion(&self, d: usize) -> Vec<u64> {
        self.groups.get(d).map(|g| g.torsion.clone()).unwrap_or_default()
    }

    pub fn group(&self, d: usize) -> Group {
        self.groups.get(d).cloned().unwrap_or(Group { betti: 0, torsion: vec![] })
    }

    /// Compares groups, treating missing dimensions as trivial.
    pub fn same_as(&self, other: &HomologyGroups) -> bool {
        let n = self.groups.len().max(other.groups.len());
        (0..n).all(|d| self.group(d) == other.group(d))
    }

    /// Homology of a single point.
    pub fn is_point(&self) -> bool {
        self.group(0) == Group { betti: 1, torsion: vec![] } && (1..self.groups.len()).all(|d| self.group(d).betti == 0 && self.group(d).torsion.is_empty())
    }

    pub fn alternating_betti_sum(&self) -> i64 {
        self.groups.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum()
    }

    /// `Z^2 + Z/2`-style rendering, one line per dimension.
    pub fn render(&self) -> String {
        self.groups.iter().enumerate().map(|(d, g)| format!("H{d} = {g}")).collect::<Vec<_>>().join("\n")
    }
}

fn boundary_matrix(k: usize, lower: &HashMap<Vec<usize>, usize>, upper: &[Vec<usize>]) -> SparseMatrix {
    let mut entries = Vec::with_capacity(upper.len() * k);
    for (col, clique) in upper.iter().enumerate() {
        for p in 0..clique.len() {
            let face: Vec<usize> = clique.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &v)| v).collect();
            let row = lower[&face];
            entries.push((row, col, if p % 2 == 0 { 1 } else { -1 }));
        }
    }
    SparseMatrix { rows: lower.len(), cols: upper.len(), entries }
}

/// Integer homology up to H_{max_dim} (all dimensions when `None`).
pub fn homology(g: &MolecularSpace, max_dim: Option<usize>) -> Result<HomologyGroups> {
    homology_limited(g, max_dim, DEFAULT_CLIQUE_LIMIT)
}

pub fn homology_limited(g: &MolecularSpace, max_dim: Option<usize>, clique_limit: u64) -> Result<HomologyGroups> {
    let omega = f_vector_limited(g, clique_limit)?.len();
    let top = match max_dim {
        Some(d) => (d + 1).min(omega),
        None => omega,
    };
    if top == 0 {
        return Ok(HomologyGroups { groups: vec![Group { betti: 0, torsion: vec![] }] });
    }
    // cliques by size 1..=top+1
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for k in 1..=(top + 1).min(omega) {
        by_size.push(cliques_of_size(g, k));
    }
    while by_size.len() <= top + 1 {
        by_size.push(Vec::new());
    }
    let mut rank = vec![0usize; top + 2];
    let mut tors: Vec<Vec<u64>> = vec![Vec::new(); top + 2];
    for k in 2..=top + 1 {
        if by_size[k].is_empty() {
            continue;
        }
        let lower: HashMap<Vec<usize>, usize> = by_size[k - 1].iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let m = boundary_matrix(k, &lower, &by_size[k]);
        let s = smith_summary(&m);
        rank[k] = s.rank;
        tors[k] = torsion_u64(&s);
    }
    let groups = (0..top)
        .map(|d| {
            let c = by_size[d + 1].len();
            let betti = c - rank[d + 1] - rank[d + 2];
            Group { betti: betti as u64, torsion: tors[d + 2].clone() }
        })
        .collect();
    Ok(HomologyGroups { groups })
}

pub fn betti(g: &MolecularSpace) -> Result<Vec<u64>> {
    Ok(homology(g, None)?.betti())
}
