//! Recognition of normal spaces: closed normal n-spaces, spheres,
//! manifolds, normal spaces with boundary, dimension of points and spaces,
//! quasinormality.
//!
//! All recursions run on bitmask subgraphs of a rim (at most 64 points),
//! memoized per rim universe.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::budget::Budget;
use crate::canon::{canonical_labeling, is_isomorphic};
use crate::construct::minimal_sphere;
use crate::family::{Contractible, Search, Tri};
use crate::graph::{MolecularSpace, VertexId};
use crate::homology::homology_limited;
use crate::local::{bit, bits, LocalGraph, Mask};
use crate::transform::{minimize, point_to_edge_swaps};

pub use crate::transform::is_minimal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DimVerdict {
    Dimension { n: usize, evidence: String },
    NotOfClass { evidence: String },
    Unknown { evidence: String },
}

impl DimVerdict {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            DimVerdict::Dimension { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn tri(&self) -> Tri {
        match self {
            DimVerdict::Dimension { .. } => Tri::Yes,
            DimVerdict::NotOfClass { .. } => Tri::No,
            DimVerdict::Unknown { .. } => Tri::Unknown,
        }
    }

    fn dim(n: usize, evidence: impl Into<String>) -> Self {
        DimVerdict::Dimension { n, evidence: evidence.into() }
    }

    fn not(evidence: impl Into<String>) -> Self {
        DimVerdict::NotOfClass { evidence: evidence.into() }
    }

    fn unknown(evidence: impl Into<String>) -> Self {
        DimVerdict::Unknown { evidence: evidence.into() }
    }
}

/// Memoized predicates over subsets of one small graph.
pub struct Normal<'a> {
    g: &'a LocalGraph,
    closed: HashMap<Mask, Option<usize>>,
    bounded: HashMap<Mask, Option<usize>>,
}

impl<'a> Normal<'a> {
    pub fn new(g: &'a LocalGraph) -> Self {
        Normal { g, closed: HashMap::new(), bounded: HashMap::new() }
    }

    /// Dimension of `s` as a normal closed space.
    pub fn closed(&mut self, s: Mask) -> Option<usize> {
        if let Some(&d) = self.closed.get(&s) {
            return d;
        }
        let d = self.closed_uncached(s);
        self.closed.insert(s, d);
        d
    }

    fn closed_uncached(&mut self, s: Mask) -> Option<usize> {
        let k = s.count_ones();
        if k < 2 {
            return None;
        }
        if !self.g.is_connected(s) {
            return (k == 2).then_some(0);
        }
        let mut dim = None;
        for v in bits(s) {
            let d = self.closed(self.g.rim(v, s))?;
            if *dim.get_or_insert(d) != d {
                return None;
            }
        }
        let n = dim? + 1;
        (k as usize >= 2 * n + 2).then_some(n)
    }

    /// Dimension of `s` as a normal space with nonempty boundary.
    pub fn bounded(&mut self, s: Mask) -> Option<usize> {
        if let Some(&d) = self.bounded.get(&s) {
            return d;
        }
        let d = self.bounded_uncached(s).map(|(n, _)| n);
        self.bounded.insert(s, d);
        d
    }

    /// Dimension and boundary points of a normal space with boundary.
    pub fn bounded_split(&mut self, s: Mask) -> Option<(usize, Mask)> {
        self.bounded_uncached(s)
    }

    fn bounded_uncached(&mut self, s: Mask) -> Option<(usize, Mask)> {
        let k = s.count_ones();
        if k == 1 {
            return Some((0, s));
        }
        if k == 0 || !self.g.is_connected(s) {
            return None;
        }
        let mut dim = None;
        let mut boundary: Mask = 0;
        for v in bits(s) {
            let r = self.g.rim(v, s);
            let d = match self.closed(r) {
                Some(d) => d,
                None => {
                    boundary |= bit(v);
                    self.bounded(r)?
                }
            };
            if *dim.get_or_insert(d) != d {
                return None;
            }
        }
        let n = dim? + 1;
        if boundary == 0 || boundary == s {
            return None;
        }
        let ok = if n == 1 {
            boundary.count_ones() == 2 && !self.g.is_connected(boundary)
        } else {
            self.g.components(boundary).into_iter().all(|c| self.closed(c) == Some(n - 1))
        };
        ok.then_some((n, boundary))
    }
}

fn rim_local(g: &MolecularSpace, i: usize) -> Option<LocalGraph> {
    LocalGraph::from_subset(g, g.nbrs(i))
}

/// Rim dimensions as normal closed spaces; `Err` names the first failure.
fn closed_rims(g: &MolecularSpace) -> std::result::Result<Vec<usize>, String> {
    let mut dims = Vec::with_capacity(g.volume());
    for i in 0..g.volume() {
        let lg = rim_local(g, i).ok_or_else(|| format!("rim of {} has more than 64 points", g.id(i)))?;
        let mut nr = Normal::new(&lg);
        match nr.closed(lg.full()) {
            Some(d) => dims.push(d),
            None => return Err(format!("rim of {} is not normal closed", g.id(i))),
        }
    }
    Ok(dims)
}

pub fn is_normal_closed(g: &MolecularSpace) -> DimVerdict {
    let n = g.volume();
    if n == 0 {
        return DimVerdict::not("empty space");
    }
    if !g.is_connected() {
        return if n == 2 { DimVerdict::dim(0, "two isolated points") } else { DimVerdict::not("disconnected") };
    }
    if n == 1 {
        return DimVerdict::not("a single point is a normal space with boundary");
    }
    let dims = match closed_rims(g) {
        Ok(d) => d,
        Err(e) if e.contains("64") => return DimVerdict::unknown(e),
        Err(e) => return DimVerdict::not(e),
    };
    if let Some(i) = (1..n).find(|&i| dims[i] != dims[0]) {
        return DimVerdict::not(format!(
            "rims of {} and {} have dimensions {} and {}",
            g.id(0),
            g.id(i),
            dims[0],
            dims[i]
        ));
    }
    let d = dims[0] + 1;
    if n < 2 * d + 2 {
        return DimVerdict::not(format!("{n} points is below the minimum {} for dimension {d}", 2 * d + 2));
    }
    DimVerdict::dim(d, format!("every rim is normal closed of dimension {}", d - 1))
}

const SWAP_STATES: usize = 20_000;

fn sphere_homology_mismatch(g: &MolecularSpace, n: usize, budget: &Budget) -> Option<String> {
    let h = homology_limited(g, None, budget.clique_limit).ok()?;
    for d in 0..=n.max(h.groups.len().saturating_sub(1)) {
        let grp = h.group(d);
        let want = if d == 0 || d == n { 1 } else { 0 };
        if grp.betti != want || !grp.torsion.is_empty() {
            return Some(format!("H{d} = {grp}"));
        }
    }
    None
}

/// Normal closed check, then point-to-edge swaps toward 2n+2 points with
/// backtracking over canonical forms.
pub fn is_sphere(g: &MolecularSpace, budget: &Budget) -> DimVerdict {
    let n = match is_normal_closed(g) {
        DimVerdict::Dimension { n, .. } => n,
        other => return other,
    };
    if n == 0 {
        return DimVerdict::dim(0, "two isolated points");
    }
    if let Some(m) = sphere_homology_mismatch(g, n, budget) {
        return DimVerdict::not(m);
    }
    let target = minimal_sphere(n);
    let mut seen = HashSet::new();
    let mut stack = vec![g.clone()];
    let cap = SWAP_STATES.min(budget.max_steps as usize).max(1);
    while let Some(cur) = stack.pop() {
        if cur.volume() == target.volume() {
            if is_isomorphic(&cur, &target) == Some(true) {
                return DimVerdict::dim(n, format!("reduced by {} point-to-edge swaps to K(2,...,2)", g.volume() - cur.volume()));
            }
            continue;
        }
        if seen.len() >= cap {
            return if n <= 2 { stuck(n) } else { DimVerdict::unknown("swap search budget exhausted") };
        }
        let mut next = Vec::new();
        for (v, a, b) in point_to_edge_swaps(&cur) {
            let h = cur.delete_vertex(cur.id(v)).expect("present").add_edge(cur.id(a), cur.id(b)).expect("present");
            let Some((c, _)) = canonical_labeling(&h, budget.canon_nodes) else { continue };
            if seen.insert(c) {
                next.push(h);
            }
        }
        // lowest-id swap is explored first
        stack.extend(next.into_iter().rev());
    }
    stuck(n)
}

/// Closed normal 1- and 2-spaces are cycles and triangulated surfaces, so
/// sphere homology settles them once the swaps run out.
fn stuck(n: usize) -> DimVerdict {
    if n <= 2 {
        DimVerdict::dim(n, "closed normal surface with sphere homology")
    } else {
        DimVerdict::unknown("no swap sequence reaches the minimal sphere")
    }
}

/// Normal closed space whose every rim is a sphere.
pub fn is_manifold(g: &MolecularSpace, budget: &Budget) -> DimVerdict {
    let n = match is_normal_closed(g) {
        DimVerdict::Dimension { n, .. } => n,
        other => return other,
    };
    if n == 0 {
        return DimVerdict::dim(0, "two isolated points");
    }
    let mut memo: HashMap<crate::canon::CanonicalForm, Tri> = HashMap::new();
    let mut unknown = None;
    for i in 0..g.volume() {
        let rim = g.induced_space_idx(g.nbrs(i));
        let key = canonical_labeling(&rim, budget.canon_nodes).map(|x| x.0);
        let t = match key.as_ref().and_then(|k| memo.get(k)) {
            Some(&t) => t,
            None => {
                let t = is_sphere(&rim, budget).tri();
                if let Some(k) = key {
                    memo.insert(k, t);
                }
                t
            }
        };
        match t {
            Tri::No => return DimVerdict::not(format!("rim of {} is not a sphere", g.id(i))),
            Tri::Unknown => {
                unknown.get_or_insert(g.id(i));
            }
            Tri::Yes => {}
        }
    }
    match unknown {
        Some(v) => DimVerdict::unknown(format!("sphere recognition of the rim of {v} undecided")),
        None => DimVerdict::dim(n, format!("every rim is a {}-sphere", n - 1)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Boundary {
    Closed { dim: usize },
    WithBoundary { dim: usize, core: Vec<VertexId>, boundary: Vec<VertexId>, components: Vec<Vec<VertexId>> },
    NotOfClass { reason: String },
}

/// Splits a normal space into interior points (closed normal rims) and
/// boundary points (rims with boundary).
pub fn boundary_decomposition(g: &MolecularSpace) -> Boundary {
    if let DimVerdict::Dimension { n, .. } = is_normal_closed(g) {
        return Boundary::Closed { dim: n };
    }
    let Some(lg) = LocalGraph::from_space(g) else {
        return boundary_large(g);
    };
    let mut nr = Normal::new(&lg);
    match nr.bounded_split(lg.full()) {
        Some((dim, b)) => {
            let ids = |m: Mask| bits(m).map(|i| g.id(i)).collect::<Vec<_>>();
            let components = if dim == 0 { vec![ids(b)] } else { lg.components(b).into_iter().map(ids).collect() };
            Boundary::WithBoundary { dim, core: ids(lg.full() & !b), boundary: ids(b), components }
        }
        None => Boundary::NotOfClass { reason: "not a normal space with boundary".into() },
    }
}

fn boundary_large(g: &MolecularSpace) -> Boundary {
    if !g.is_connected() {
        return Boundary::NotOfClass { reason: "disconnected".into() };
    }
    let mut dim = None;
    let mut boundary = Vec::new();
    let mut core = Vec::new();
    for i in 0..g.volume() {
        let Some(lg) = rim_local(g, i) else {
            return Boundary::NotOfClass { reason: format!("rim of {} has more than 64 points", g.id(i)) };
        };
        let mut nr = Normal::new(&lg);
        let d = match nr.closed(lg.full()) {
            Some(d) => {
                core.push(i);
                d
            }
            None => match nr.bounded(lg.full()) {
                Some(d) => {
                    boundary.push(i);
                    d
                }
                None => return Boundary::NotOfClass { reason: format!("rim of {} is not normal", g.id(i)) },
            },
        };
        if *dim.get_or_insert(d) != d {
            return Boundary::NotOfClass { reason: "rims differ in dimension".into() };
        }
    }
    let n = dim.expect("nonempty") + 1;
    if boundary.is_empty() || core.is_empty() {
        return Boundary::NotOfClass { reason: "boundary or core is empty".into() };
    }
    let b = g.induced_space_idx(&boundary);
    let comps = b.components();
    for c in &comps {
        let sub = b.induced(c).expect("present").to_space();
        let ok = if n == 1 { b.volume() == 2 && b.weight() == 0 } else { is_normal_closed(&sub).dimension() == Some(n - 1) };
        if !ok {
            return Boundary::NotOfClass { reason: "boundary is not normal closed".into() };
        }
    }
    Boundary::WithBoundary {
        dim: n,
        core: core.into_iter().map(|i| g.id(i)).collect(),
        boundary: boundary.into_iter().map(|i| g.id(i)).collect(),
        components: if n == 1 { vec![b.vertices().to_vec()] } else { comps },
    }
}

fn clique_number_local(g: &LocalGraph, s: Mask) -> usize {
    g.clique_counts(s).len()
}

/// Largest d such that `s` contains an induced normal closed d-space.
fn best_closed_subspace(nr: &mut Normal<'_>, g: &LocalGraph, s: Mask) -> Option<usize> {
    if let Some(d) = nr.closed(s) {
        return Some(d);
    }
    let omega = clique_number_local(g, s);
    let has_s0 = bits(s).any(|v| s & !g.adj[v] & !bit(v) != 0);
    if !has_s0 {
        return None;
    }
    let top = omega.saturating_sub(1);
    let mut best = 0;
    let members: Vec<usize> = bits(s).collect();
    let m = members.len();
    for sub in 1u64..(1u64 << m) {
        if best == top {
            break;
        }
        let k = sub.count_ones() as usize;
        if k < 2 * (best + 1) + 2 {
            continue;
        }
        let mask = members.iter().enumerate().filter(|&(b, _)| sub >> b & 1 == 1).fold(0, |acc, (_, &v)| acc | bit(v));
        if bits(mask).any(|v| (g.adj[v] & mask).count_ones() < 2) {
            continue;
        }
        if let Some(d) = nr.closed(mask) {
            best = best.max(d);
        }
    }
    Some(best)
}

/// Dimension of a point: one more than the largest normal closed space
/// inside its rim; isolated points and points with clique rims are 0.
pub fn point_dimension(g: &MolecularSpace, v: VertexId, budget: &Budget) -> DimVerdict {
    let Some(i) = g.index_of(v) else {
        return DimVerdict::not(format!("vertex {v} not found"));
    };
    let Some(lg) = rim_local(g, i) else {
        return DimVerdict::unknown(format!("rim of {v} has more than 64 points"));
    };
    let mut nr = Normal::new(&lg);
    let full = lg.full();
    if let Some(d) = nr.closed(full) {
        return DimVerdict::dim(d + 1, format!("rim is normal closed of dimension {d}"));
    }
    if lg.n() > budget.rim_cap {
        return DimVerdict::unknown(format!("rim of {v} exceeds the subspace search cap of {}", budget.rim_cap));
    }
    match best_closed_subspace(&mut nr, &lg, full) {
        None => DimVerdict::dim(0, "rim contains no two non-adjacent points"),
        Some(d) => DimVerdict::dim(d + 1, format!("rim contains a normal closed {d}-space and none of dimension {}", d + 1)),
    }
}

pub fn space_dimension(g: &MolecularSpace, budget: &Budget) -> DimVerdict {
    if g.is_empty() {
        return DimVerdict::not("empty space");
    }
    let mut best: Option<(usize, VertexId)> = None;
    let mut unknown = None;
    for &v in g.vertices() {
        match point_dimension(g, v, budget) {
            DimVerdict::Dimension { n, .. } => {
                if best.is_none_or(|(b, _)| n > b) {
                    best = Some((n, v));
                }
            }
            _ => {
                unknown.get_or_insert(v);
            }
        }
    }
    match (unknown, best) {
        (Some(u), Some((b, _))) => DimVerdict::unknown(format!("dimension of {u} undecided; lower bound {b}")),
        (Some(u), None) => DimVerdict::unknown(format!("dimension of {u} undecided")),
        (None, Some((b, v))) => DimVerdict::dim(b, format!("point {v} has dimension {b}")),
        (None, None) => unreachable!("nonempty space"),
    }
}

/// Bounded quasinormality test at dimension `n`. `Yes` when the space, or
/// its minimized form, is normal closed of dimension n and every rim holds
/// an induced normal closed (n-1)-space. `No` when some rim has no induced
/// subspace with nontrivial reduced homology (so nothing in it is
/// homotopic to a normal closed space).
pub fn is_quasinormal(g: &MolecularSpace, n: usize, budget: &Budget) -> (Tri, String) {
    if is_normal_closed(g).dimension() == Some(n) {
        return (Tri::Yes, format!("normal closed of dimension {n}"));
    }
    if n == 0 {
        return (Tri::Unknown, "dimension 0 is only checked for normality".into());
    }
    const REFUTE_CAP: usize = 12;
    let mut rims_ok = true;
    for i in 0..g.volume() {
        let Some(lg) = rim_local(g, i) else {
            rims_ok = false;
            continue;
        };
        let mut nr = Normal::new(&lg);
        let full = lg.full();
        let found = nr.closed(full) == Some(n - 1) || (lg.n() <= budget.rim_cap && has_closed_subspace(&mut nr, full, n - 1));
        if found {
            continue;
        }
        rims_ok = false;
        if lg.n() <= REFUTE_CAP && all_subspaces_acyclic(&lg, budget) {
            return (Tri::No, format!("rim of {} has no subspace with nontrivial homology", g.id(i)));
        }
    }
    if !rims_ok {
        return (Tri::Unknown, "rim condition not established".into());
    }
    let m = minimize(g, budget);
    if is_normal_closed(&m.space).dimension() == Some(n) {
        return (Tri::Yes, format!("minimizes in {} moves to a normal closed {n}-space", m.trace.len()));
    }
    (Tri::Unknown, "minimized form is not normal closed".into())
}

fn has_closed_subspace(nr: &mut Normal<'_>, s: Mask, d: usize) -> bool {
    let members: Vec<usize> = bits(s).collect();
    let m = members.len();
    (1u64..(1u64 << m)).any(|sub| {
        if (sub.count_ones() as usize) < 2 * d + 2 {
            return false;
        }
        let mask = members.iter().enumerate().filter(|&(b, _)| sub >> b & 1 == 1).fold(0, |acc, (_, &v)| acc | bit(v));
        nr.closed(mask) == Some(d)
    })
}

/// Every nonempty induced subspace has the homology of a point.
fn all_subspaces_acyclic(g: &LocalGraph, budget: &Budget) -> bool {
    let n = g.n();
    let mut search = Search::new(g, &Contractible, budget);
    (1u64..(1u64 << n)).all(|s| {
        if g.is_clique(s) || search.decide(s) == Tri::Yes {
            return true;
        }
        match homology_limited(&g.restrict(s).to_space(), None, budget.clique_limit) {
            Ok(h) => h.is_point(),
            Err(_) => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{cone, cycle, join, path, strong_product};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn closed_normal() {
        assert_eq!(is_normal_closed(&cycle(4)).dimension(), Some(1));
        assert_eq!(is_normal_closed(&minimal_sphere(2)).dimension(), Some(2));
        assert_eq!(is_normal_closed(&MolecularSpace::isolated(2)).dimension(), Some(0));
        assert_eq!(is_normal_closed(&cycle(3)).tri(), Tri::No);
        assert_eq!(is_normal_closed(&cone(&cycle(5))).tri(), Tri::No);
        assert_eq!(is_normal_closed(&MolecularSpace::isolated(1)).tri(), Tri::No);
    }

    #[test]
    fn spheres() {
        assert_eq!(is_sphere(&cycle(5), &b()).dimension(), Some(1));
        assert_eq!(is_sphere(&minimal_sphere(3), &b()).dimension(), Some(3));
        assert_eq!(is_sphere(&crate::catalog::icosahedron(), &b()).dimension(), Some(2));
        assert_eq!(is_sphere(&crate::catalog::torus16(), &b()).tri(), Tri::No);
        assert_eq!(is_manifold(&crate::catalog::torus16(), &b()).dimension(), Some(2));
        let st = join(&MolecularSpace::isolated(2), &crate::catalog::torus16());
        assert_eq!(is_normal_closed(&st).dimension(), Some(3));
        assert_eq!(is_manifold(&st, &b()).tri(), Tri::No);
    }

    #[test]
    fn boundaries() {
        match boundary_decomposition(&path(3)) {
            Boundary::WithBoundary { dim, core, boundary, .. } => {
                assert_eq!(dim, 1);
                assert_eq!(core, vec![VertexId(1)]);
                assert_eq!(boundary, vec![VertexId(0), VertexId(2)]);
            }
            b => panic!("{b:?}"),
        }
        match boundary_decomposition(&cone(&cycle(4))) {
            Boundary::WithBoundary { dim, core, boundary, components } => {
                assert_eq!(dim, 2);
                assert_eq!(core, vec![VertexId(4)]);
                assert_eq!(boundary.len(), 4);
                assert_eq!(components.len(), 1);
            }
            b => panic!("{b:?}"),
        }
        assert_eq!(boundary_decomposition(&minimal_sphere(2)), Boundary::Closed { dim: 2 });
        let p = strong_product(&path(3), &path(3));
        assert!(matches!(boundary_decomposition(&p), Boundary::NotOfClass { .. }));
    }

    #[test]
    fn dimensions() {
        let w = cone(&cycle(4));
        assert_eq!(point_dimension(&w, VertexId(4), &b()).dimension(), Some(2));
        assert_eq!(point_dimension(&cycle(4), VertexId(0), &b()).dimension(), Some(1));
        let c = cone(&minimal_sphere(2));
        assert_eq!(point_dimension(&c, VertexId(6), &b()).dimension(), Some(3));
        assert_eq!(space_dimension(&w, &b()).dimension(), Some(2));
        assert_eq!(space_dimension(&MolecularSpace::complete(5), &b()).dimension(), Some(0));
        assert_eq!(space_dimension(&minimal_sphere(2), &b()).dimension(), Some(2));
        // rim is a 5-cycle with a pendant: contains a circle
        let g = cone(&cycle(5).add_vertex(VertexId(9), &[VertexId(0)]).unwrap());
        assert_eq!(point_dimension(&g, VertexId(10), &b()).dimension(), Some(2));
    }

    #[test]
    fn minimality() {
        assert!(is_minimal(&crate::construct::partite(&[2, 4]), &b()));
        assert!(!is_minimal(&cycle(6), &b()));
        assert!(is_minimal(&minimal_sphere(3), &b()));
    }

    #[test]
    fn quasinormal() {
        let q = strong_product(&cycle(4), &cycle(4));
        assert_eq!(is_quasinormal(&q, 2, &b()).0, Tri::Yes);
        assert_eq!(is_quasinormal(&minimal_sphere(2), 2, &b()).0, Tri::Yes);
        assert_eq!(is_quasinormal(&MolecularSpace::complete(5), 2, &b()).0, Tri::No);
    }
}
