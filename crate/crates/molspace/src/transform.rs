//! Contractible transformations: the contractibility decision, licensed
//! moves, minimization, homotopy checks, edge/point swaps and the one-step
//! tower.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::canon::is_isomorphic;
use crate::error::{Error, Result};
use crate::euler::f_vector_limited;
use crate::family::{decide_local, Contractible, Search, Tri};
use crate::graph::{MolecularSpace, VertexId};
use crate::homology::homology_limited;
use crate::local::LocalGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Contractibility {
    Contractible { witness: Vec<VertexId> },
    NotContractible { reason: String },
    Unknown { reason: String },
}

impl Contractibility {
    pub fn is_contractible(&self) -> bool {
        matches!(self, Contractibility::Contractible { .. })
    }

    pub fn tri(&self) -> Tri {
        match self {
            Contractibility::Contractible { .. } => Tri::Yes,
            Contractibility::NotContractible { .. } => Tri::No,
            Contractibility::Unknown { .. } => Tri::Unknown,
        }
    }
}

/// Decides membership in the contractible family. Exact up to
/// `budget.exact_size` vertices; above that, greedy lowest-id deletion of
/// points with contractible rims.
pub fn is_contractible(g: &MolecularSpace, budget: &Budget) -> Contractibility {
    if g.is_empty() {
        return Contractibility::NotContractible { reason: "empty space".into() };
    }
    if let Some((t, w)) = decide_local(g, &Contractible, budget) {
        return match t {
            Tri::Yes => Contractibility::Contractible { witness: w.into_iter().map(|i| g.id(i)).collect() },
            Tri::No => Contractibility::NotContractible { reason: refutation_reason(g, budget) },
            Tri::Unknown => Contractibility::Unknown { reason: "search budget exhausted".into() },
        };
    }
    large(g, budget)
}

fn refutation_reason(g: &MolecularSpace, budget: &Budget) -> String {
    if !g.is_connected() {
        return "disconnected".into();
    }
    match f_vector_limited(g, budget.clique_limit) {
        Ok(f) if f.euler() != 1 => format!("euler = {}", f.euler()),
        _ => "no contractible point remains after deletions".into(),
    }
}

fn large(g: &MolecularSpace, budget: &Budget) -> Contractibility {
    if !g.is_connected() {
        return Contractibility::NotContractible { reason: "disconnected".into() };
    }
    if let Ok(f) = f_vector_limited(g, budget.clique_limit) {
        if f.euler() != 1 {
            return Contractibility::NotContractible { reason: format!("euler = {}", f.euler()) };
        }
    }
    let n = g.volume();
    let mut alive = vec![true; n];
    let mut count = n;
    let mut cache: Vec<Option<Tri>> = vec![None; n];
    let mut witness = Vec::new();
    loop {
        if count <= LocalGraph::MAX {
            let idx: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
            let lg = LocalGraph::from_subset(g, &idx).expect("fits in a word");
            let mut s = Search::new(&lg, &Contractible, budget);
            let full = lg.full();
            return match s.decide(full) {
                Tri::Yes => {
                    witness.extend(s.witness(full).into_iter().map(|k| g.id(idx[k])));
                    Contractibility::Contractible { witness }
                }
                Tri::No => Contractibility::NotContractible { reason: format!("deletions stuck at {} points", count) },
                Tri::Unknown => Contractibility::Unknown { reason: "search budget exhausted".into() },
            };
        }
        let mut found = None;
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            let t = *cache[i].get_or_insert_with(|| {
                let rim: Vec<usize> = g.nbrs(i).iter().copied().filter(|&j| alive[j]).collect();
                idx_subset_tri(g, &rim, budget)
            });
            if t == Tri::Yes {
                found = Some(i);
                break;
            }
        }
        let Some(v) = found else {
            let idx: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
            let rest = g.induced_space_idx(&idx);
            return match homology_limited(&rest, None, budget.clique_limit) {
                Ok(h) if !h.is_point() => Contractibility::NotContractible { reason: "nontrivial homology".into() },
                _ => Contractibility::Unknown { reason: format!("greedy deletion stuck at {} points", count) },
            };
        };
        alive[v] = false;
        count -= 1;
        witness.push(g.id(v));
        for &j in g.nbrs(v) {
            cache[j] = None;
        }
    }
}

/// Contractibility of the induced subspace on the given indices.
pub fn idx_subset_tri(g: &MolecularSpace, idx: &[usize], budget: &Budget) -> Tri {
    if idx.is_empty() {
        return Tri::No;
    }
    match LocalGraph::from_subset(g, idx) {
        Some(lg) => Search::new(&lg, &Contractible, budget).decide(lg.full()),
        None => is_contractible(&g.induced_space_idx(idx), budget).tri(),
    }
}

pub fn rim_tri(g: &MolecularSpace, i: usize, budget: &Budget) -> Tri {
    idx_subset_tri(g, g.nbrs(i), budget)
}

pub fn joint_rim_tri(g: &MolecularSpace, i: usize, j: usize, budget: &Budget) -> Tri {
    let common: Vec<usize> = g.joint_rim_idx(i, j).ones().collect();
    idx_subset_tri(g, &common, budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Move {
    DeletePoint { v: VertexId },
    GluePoint { v: VertexId, target: Vec<VertexId> },
    DeleteEdge { u: VertexId, v: VertexId },
    GlueEdge { u: VertexId, v: VertexId },
    SwapEdgeToPoint { u: VertexId, v: VertexId, new: VertexId },
    SwapPointToEdge { v: VertexId, a: VertexId, b: VertexId },
}

/// A move with the subspace whose contractibility (or, for swaps, whose
/// structure) licensed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    #[serde(rename = "move")]
    pub mv: Move,
    pub license: Vec<VertexId>,
}

fn idx_of(g: &MolecularSpace, v: VertexId) -> Result<usize> {
    g.index_of(v).ok_or(Error::VertexNotFound(v))
}

/// License subspace of a move (vertex ids).
pub fn license(g: &MolecularSpace, m: &Move) -> Result<Vec<VertexId>> {
    Ok(match m {
        Move::DeletePoint { v } => g.rim(*v)?.members(),
        Move::GluePoint { target, .. } => g.induced(target)?.members(),
        Move::DeleteEdge { u, v } | Move::GlueEdge { u, v } | Move::SwapEdgeToPoint { u, v, .. } => {
            g.joint_rim(&[*u, *v])?.members()
        }
        Move::SwapPointToEdge { v, a, b } => g.joint_rim(&[*v, *a, *b])?.members(),
    })
}

fn require(t: Tri, what: &str) -> Result<()> {
    match t {
        Tri::Yes => Ok(()),
        Tri::No => Err(Error::IllegalMove(format!("{what} is not contractible"))),
        Tri::Unknown => Err(Error::IllegalMove(format!("contractibility of {what} undecided within budget"))),
    }
}

/// Checks the preconditions of replacing point `v` by the edge `ab`:
/// O(v) = S0(a, b) + O(vab) and O(ab) = v + O(vab).
pub fn point_to_edge_ok(g: &MolecularSpace, v: usize, a: usize, b: usize) -> bool {
    if a == b || v == a || v == b || !g.adj(v, a) || !g.adj(v, b) || g.adj(a, b) {
        return false;
    }
    let mut ab = g.nbr_bits(a).clone();
    ab.intersect_with(g.nbr_bits(b));
    let rest_ok = g.nbrs(v).iter().all(|&x| x == a || x == b || ab.contains(x));
    let joint_ok = ab.ones().all(|x| x == v || g.adj(v, x));
    rest_ok && joint_ok
}

/// All legal point-to-edge swaps `(v, a, b)` as indices, `a < b`, id order.
pub fn point_to_edge_swaps(g: &MolecularSpace) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for v in 0..g.volume() {
        let nb = g.nbrs(v);
        for (x, &a) in nb.iter().enumerate() {
            for &b in &nb[x + 1..] {
                if point_to_edge_ok(g, v, a, b) {
                    out.push((v, a, b));
                }
            }
        }
    }
    out
}

/// Applies a move after re-verifying its license.
pub fn apply(g: &MolecularSpace, m: &Move, budget: &Budget) -> Result<MolecularSpace> {
    match m {
        Move::DeletePoint { v } => {
            let i = idx_of(g, *v)?;
            require(rim_tri(g, i, budget), &format!("rim of {v}"))?;
            g.delete_vertex(*v)
        }
        Move::GluePoint { v, target } => {
            if g.contains(*v) {
                return Err(Error::IllegalMove(format!("vertex {v} already exists")));
            }
            let idx = target.iter().map(|&t| idx_of(g, t)).collect::<Result<Vec<_>>>()?;
            require(idx_subset_tri(g, &idx, budget), "glue target")?;
            g.add_vertex(*v, target)
        }
        Move::DeleteEdge { u, v } => {
            let (i, j) = (idx_of(g, *u)?, idx_of(g, *v)?);
            if !g.adj(i, j) {
                return Err(Error::EdgeNotFound(*u, *v));
            }
            require(joint_rim_tri(g, i, j, budget), &format!("joint rim of {u},{v}"))?;
            g.delete_edge(*u, *v)
        }
        Move::GlueEdge { u, v } => {
            let (i, j) = (idx_of(g, *u)?, idx_of(g, *v)?);
            if i == j || g.adj(i, j) {
                return Err(Error::IllegalMove(format!("{u},{v} is not a pair of distinct non-adjacent points")));
            }
            require(joint_rim_tri(g, i, j, budget), &format!("joint rim of {u},{v}"))?;
            g.add_edge(*u, *v)
        }
        Move::SwapEdgeToPoint { u, v, new } => {
            let (i, j) = (idx_of(g, *u)?, idx_of(g, *v)?);
            if !g.adj(i, j) {
                return Err(Error::EdgeNotFound(*u, *v));
            }
            if g.contains(*new) {
                return Err(Error::IllegalMove(format!("vertex {new} already exists")));
            }
            let mut nb = vec![*u, *v];
            nb.extend(g.joint_rim(&[*u, *v])?.members());
            g.delete_edge(*u, *v)?.add_vertex(*new, &nb)
        }
        Move::SwapPointToEdge { v, a, b } => {
            let (i, x, y) = (idx_of(g, *v)?, idx_of(g, *a)?, idx_of(g, *b)?);
            if !point_to_edge_ok(g, i, x, y) {
                return Err(Error::IllegalMove(format!("rims around {v} do not split as S0({a},{b}) plus a joint rim")));
            }
            g.delete_vertex(*v)?.add_edge(*a, *b)
        }
    }
}

/// Legal contractible moves plus the moves whose license was undecided.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LegalMoves {
    pub moves: Vec<Step>,
    pub undecided: Vec<Move>,
}

/// Point/edge deletions and edge gluings in id order; point gluings only
/// over the supplied candidate subspaces.
pub fn legal_moves(g: &MolecularSpace, glue_targets: &[Vec<VertexId>], budget: &Budget) -> Result<LegalMoves> {
    let mut out = LegalMoves::default();
    let push = |out: &mut LegalMoves, t: Tri, mv: Move| -> Result<()> {
        match t {
            Tri::Yes => {
                let lic = license(g, &mv)?;
                out.moves.push(Step { mv, license: lic });
            }
            Tri::Unknown => out.undecided.push(mv),
            Tri::No => {}
        }
        Ok(())
    };
    for i in 0..g.volume() {
        push(&mut out, rim_tri(g, i, budget), Move::DeletePoint { v: g.id(i) })?;
    }
    for i in 0..g.volume() {
        for j in i + 1..g.volume() {
            let t = joint_rim_tri(g, i, j, budget);
            let (u, v) = (g.id(i), g.id(j));
            let mv = if g.adj(i, j) { Move::DeleteEdge { u, v } } else { Move::GlueEdge { u, v } };
            push(&mut out, t, mv)?;
        }
    }
    let mut fresh = g.fresh_id();
    for target in glue_targets {
        let idx = target.iter().map(|&t| idx_of(g, t)).collect::<Result<Vec<_>>>()?;
        push(&mut out, idx_subset_tri(g, &idx, budget), Move::GluePoint { v: fresh, target: target.clone() })?;
        fresh = VertexId(fresh.0 + 1);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Minimized {
    pub space: MolecularSpace,
    pub trace: Vec<Step>,
    pub budget_exceeded: bool,
}

fn first_deletable(g: &MolecularSpace, cands: impl IntoIterator<Item = usize>, budget: &Budget) -> Option<usize> {
    let mut c: Vec<usize> = cands.into_iter().collect();
    c.sort_unstable();
    c.dedup();
    c.into_iter().find(|&i| rim_tri(g, i, budget) == Tri::Yes)
}

fn affected(g: &MolecularSpace, i: usize, j: usize) -> Vec<usize> {
    let mut v = vec![i, j];
    v.extend(g.joint_rim_idx(i, j).ones());
    v
}

fn delete_step(g: &MolecularSpace, i: usize) -> (Step, MolecularSpace) {
    let v = g.id(i);
    let step = Step { mv: Move::DeletePoint { v }, license: g.rim(v).expect("present").members() };
    (step, g.delete_vertex(v).expect("present"))
}

/// Sequential gluing of legal edges (id order, repeated to closure) until
/// some rim turns contractible; returns the gluings and that deletion.
fn glue_then_delete(g: &MolecularSpace, budget: &Budget) -> Option<(Vec<Step>, MolecularSpace)> {
    let mut h = g.clone();
    let mut steps = Vec::new();
    loop {
        let mut glued_any = false;
        let n = h.volume();
        for i in 0..n {
            for j in i + 1..n {
                if h.adj(i, j) || joint_rim_tri(&h, i, j, budget) != Tri::Yes {
                    continue;
                }
                let (u, v) = (h.id(i), h.id(j));
                steps.push(Step { mv: Move::GlueEdge { u, v }, license: h.joint_rim(&[u, v]).expect("present").members() });
                h = h.add_edge(u, v).expect("present");
                glued_any = true;
                if let Some(w) = first_deletable(&h, affected(&h, i, j), budget) {
                    let (s, next) = delete_step(&h, w);
                    steps.push(s);
                    return Some((steps, next));
                }
            }
        }
        if !glued_any {
            return None;
        }
    }
}

/// An edge deletion after which some rim becomes contractible.
fn edge_cut_then_delete(g: &MolecularSpace, budget: &Budget) -> Option<(Vec<Step>, MolecularSpace)> {
    for (i, j) in g.index_edges() {
        if joint_rim_tri(g, i, j, budget) != Tri::Yes {
            continue;
        }
        let (u, v) = (g.id(i), g.id(j));
        let h = g.delete_edge(u, v).expect("present");
        if let Some(w) = first_deletable(&h, affected(&h, i, j), budget) {
            let cut = Step { mv: Move::DeleteEdge { u, v }, license: g.joint_rim(&[u, v]).expect("present").members() };
            let (s, next) = delete_step(&h, w);
            return Some((vec![cut, s], next));
        }
    }
    None
}

/// Reduces a space by contractible moves until the three minimality
/// criteria hold: no contractible rim, no contractible joint rim of an
/// edge, and no contractible rim appears along the gluing closure.
/// Every committed round lowers (volume, weight) lexicographically.
pub fn minimize(g: &MolecularSpace, budget: &Budget) -> Minimized {
    let mut cur = g.clone();
    let mut trace = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > budget.max_rounds {
            return Minimized { space: cur, trace, budget_exceeded: true };
        }
        if let Some(i) = first_deletable(&cur, 0..cur.volume(), budget) {
            let (s, next) = delete_step(&cur, i);
            trace.push(s);
            cur = next;
            continue;
        }
        if let Some((steps, next)) = glue_then_delete(&cur, budget) {
            trace.extend(steps);
            cur = next;
            continue;
        }
        if let Some((steps, next)) = edge_cut_then_delete(&cur, budget) {
            trace.extend(steps);
            cur = next;
            continue;
        }
        if let Some((i, j)) = cur.index_edges().into_iter().find(|&(i, j)| joint_rim_tri(&cur, i, j, budget) == Tri::Yes) {
            let (u, v) = (cur.id(i), cur.id(j));
            trace.push(Step { mv: Move::DeleteEdge { u, v }, license: cur.joint_rim(&[u, v]).expect("present").members() });
            cur = cur.delete_edge(u, v).expect("present");
            continue;
        }
        return Minimized { space: cur, trace, budget_exceeded: false };
    }
}

/// The three minimality criteria.
pub fn is_minimal(g: &MolecularSpace, budget: &Budget) -> bool {
    if (0..g.volume()).any(|i| rim_tri(g, i, budget) == Tri::Yes) {
        return false;
    }
    if g.index_edges().into_iter().any(|(i, j)| joint_rim_tri(g, i, j, budget) == Tri::Yes) {
        return false;
    }
    glue_then_delete(g, budget).is_none()
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict")]
pub enum HomotopyVerdict {
    Equivalent { minimized: MinimizedPair },
    Distinguished { invariant: String, left: String, right: String },
    /// `exhausted` is set when a budget, not a completed comparison, left
    /// the question open.
    Unknown { reason: String, exhausted: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimizedPair {
    pub left_trace: Vec<Step>,
    pub right_trace: Vec<Step>,
    pub volume: usize,
}

/// Refutes by Euler characteristic and homology; otherwise minimizes both
/// sides and compares the results up to isomorphism.
pub fn homotopy_check(a: &MolecularSpace, b: &MolecularSpace, budget: &Budget) -> HomotopyVerdict {
    let ea = f_vector_limited(a, budget.clique_limit).map(|f| f.euler());
    let eb = f_vector_limited(b, budget.clique_limit).map(|f| f.euler());
    if let (Ok(x), Ok(y)) = (&ea, &eb) {
        if x != y {
            return HomotopyVerdict::Distinguished { invariant: "euler".into(), left: x.to_string(), right: y.to_string() };
        }
    }
    if let (Ok(ha), Ok(hb)) = (homology_limited(a, None, budget.clique_limit), homology_limited(b, None, budget.clique_limit)) {
        let n = ha.groups.len().max(hb.groups.len());
        for d in 0..n {
            if ha.group(d) != hb.group(d) {
                return HomotopyVerdict::Distinguished {
                    invariant: format!("H{d}"),
                    left: ha.group(d).to_string(),
                    right: hb.group(d).to_string(),
                };
            }
        }
    }
    let ma = minimize(a, budget);
    let mb = minimize(b, budget);
    match is_isomorphic(&ma.space, &mb.space) {
        Some(true) => HomotopyVerdict::Equivalent {
            minimized: MinimizedPair { left_trace: ma.trace, right_trace: mb.trace, volume: ma.space.volume() },
        },
        Some(false) => HomotopyVerdict::Unknown {
            reason: "minimized forms are not isomorphic".into(),
            exhausted: ma.budget_exceeded || mb.budget_exceeded,
        },
        None => HomotopyVerdict::Unknown { reason: "isomorphism search exceeded its budget".into(), exhausted: true },
    }
}

/// One-step tower over `g`: the strong product G x K(2) with the move
/// induced on the second layer. Vertex (v, layer) gets id 2*index(v)+layer;
/// a glued point gets id 2*volume+1.
pub fn one_step_tower(g: &MolecularSpace, m: &Move, budget: &Budget) -> Result<MolecularSpace> {
    // license on the base space first
    apply(g, m, budget)?;
    let tower = crate::construct::strong_product(g, &MolecularSpace::complete(2));
    let top = |v: VertexId| -> Result<VertexId> { Ok(VertexId(2 * idx_of(g, v)? as u32 + 1)) };
    let both = |vs: &[VertexId]| -> Result<Vec<VertexId>> {
        let mut out = Vec::new();
        for &v in vs {
            let i = idx_of(g, v)? as u32;
            out.push(VertexId(2 * i));
            out.push(VertexId(2 * i + 1));
        }
        Ok(out)
    };
    let new_top = VertexId(2 * g.volume() as u32 + 1);
    match m {
        Move::DeletePoint { v } => apply(&tower, &Move::DeletePoint { v: top(*v)? }, budget),
        Move::DeleteEdge { u, v } => apply(&tower, &Move::DeleteEdge { u: top(*u)?, v: top(*v)? }, budget),
        Move::GlueEdge { u, v } => apply(&tower, &Move::GlueEdge { u: top(*u)?, v: top(*v)? }, budget),
        Move::GluePoint { target, .. } => apply(&tower, &Move::GluePoint { v: new_top, target: both(target)? }, budget),
        Move::SwapEdgeToPoint { u, v, .. } => {
            let (tu, tv) = (top(*u)?, top(*v)?);
            let cut = apply(&tower, &Move::DeleteEdge { u: tu, v: tv }, budget)?;
            let mut target = both(&[*u, *v])?;
            target.extend(both(&g.joint_rim(&[*u, *v])?.members())?);
            target.retain(|&x| x != tu && x != tv);
            target.extend([tu, tv]);
            apply(&cut, &Move::GluePoint { v: new_top, target }, budget)
        }
        Move::SwapPointToEdge { v, a, b } => {
            let joined = apply(&tower, &Move::GlueEdge { u: top(*a)?, v: top(*b)? }, budget)?;
            apply(&joined, &Move::DeletePoint { v: top(*v)? }, budget)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::euler;

    fn cycle(n: usize) -> MolecularSpace {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MolecularSpace::from_edges(n, &e)
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn complete_and_cones_are_contractible() {
        for n in 1..=8 {
            assert!(is_contractible(&MolecularSpace::complete(n), &b()).is_contractible());
        }
        let cone = cycle(7).add_vertex(VertexId(7), &(0..7).map(VertexId).collect::<Vec<_>>()).unwrap();
        assert!(is_contractible(&cone, &b()).is_contractible());
        assert_eq!(
            is_contractible(&cycle(4), &b()),
            Contractibility::NotContractible { reason: "euler = 0".into() }
        );
    }

    #[test]
    fn large_graphs_use_greedy_path() {
        let path = MolecularSpace::from_edges(80, &(0..79).map(|i| (i, i + 1)).collect::<Vec<_>>());
        let c = is_contractible(&path, &b());
        let Contractibility::Contractible { witness } = c else { panic!("{c:?}") };
        assert_eq!(witness.len(), 79);
        assert!(!is_contractible(&cycle(70), &b()).is_contractible());
    }

    #[test]
    fn small_legal_moves() {
        let path = MolecularSpace::from_edges(3, &[(0, 1), (1, 2)]);
        let lm = legal_moves(&path, &[], &b()).unwrap();
        assert!(lm.moves.iter().any(|s| s.mv == Move::DeletePoint { v: VertexId(0) }));
        let c4 = legal_moves(&cycle(4), &[], &b()).unwrap();
        assert!(!c4.moves.iter().any(|s| matches!(s.mv, Move::DeletePoint { .. })));
        let c6 = legal_moves(&cycle(6), &[], &b()).unwrap();
        assert!(c6.moves.iter().any(|s| s.mv == Move::GlueEdge { u: VertexId(0), v: VertexId(2) }));
    }

    #[test]
    fn swaps_on_cycles() {
        let c5 = apply(&cycle(4), &Move::SwapEdgeToPoint { u: VertexId(0), v: VertexId(1), new: VertexId(9) }, &b()).unwrap();
        assert_eq!(is_isomorphic(&c5, &cycle(5)), Some(true));
        let shrunk = apply(&cycle(6), &Move::SwapPointToEdge { v: VertexId(0), a: VertexId(1), b: VertexId(5) }, &b()).unwrap();
        assert_eq!(is_isomorphic(&shrunk, &cycle(5)), Some(true));
        let bad = apply(&cycle(4), &Move::SwapPointToEdge { v: VertexId(0), a: VertexId(1), b: VertexId(3) }, &b());
        assert!(matches!(bad, Err(Error::IllegalMove(_))));
        assert!(point_to_edge_swaps(&cycle(4)).is_empty());
    }

    #[test]
    fn minimize_cycles() {
        let m = minimize(&cycle(6), &b());
        assert_eq!(is_isomorphic(&m.space, &cycle(4)), Some(true));
        assert!(is_minimal(&m.space, &b()));
        assert!(!is_minimal(&cycle(6), &b()));
        let again = minimize(&m.space, &b());
        assert!(again.trace.is_empty());
    }

    #[test]
    fn homotopy_verdicts() {
        assert!(matches!(homotopy_check(&cycle(4), &cycle(6), &b()), HomotopyVerdict::Equivalent { .. }));
        match homotopy_check(&cycle(4), &MolecularSpace::isolated(1), &b()) {
            HomotopyVerdict::Distinguished { invariant, left, right } => {
                assert_eq!((invariant.as_str(), left.as_str(), right.as_str()), ("euler", "0", "1"));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn towers() {
        let p = MolecularSpace::isolated(1);
        let t = one_step_tower(&p, &Move::GluePoint { v: VertexId(1), target: vec![VertexId(0)] }, &b()).unwrap();
        assert!(is_contractible(&t, &b()).is_contractible());
        let c4 = cycle(4);
        let t = one_step_tower(&c4, &Move::SwapEdgeToPoint { u: VertexId(0), v: VertexId(1), new: VertexId(4) }, &b()).unwrap();
        assert_eq!(t.volume(), 9);
        assert_eq!(euler(&t).unwrap(), 0);
        // deleting the top layer returns the bottom one
        let mut cur = t.clone();
        for v in t.vertices().iter().filter(|v| v.0 % 2 == 1) {
            cur = apply(&cur, &Move::DeletePoint { v: *v }, &b()).unwrap();
        }
        assert_eq!(is_isomorphic(&cur, &c4), Some(true));
    }
}
