//! Characteristic functions F = (a_1, a_2, ...) evaluated on f-vectors,
//! coefficients generated from a base space B, and the basic moves of type
//! B licensed by membership in the family T(B).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::budget::Budget;
use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::euler::f_vector_limited;
use crate::family::{Family, Search, Tri};
use crate::graph::{MolecularSpace, VertexId};
use crate::local::{bit, LocalGraph, Mask};
use crate::transform::{Move, Step};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Generator {
    /// Listed coefficients, 0 afterwards.
    Explicit(Vec<BigRational>),
    /// Seeds a_1 .. a_k and the base's clique counts n_1 .. n_k; later
    /// terms solve a_{s-1} + sum_j a_{s-1+j} n_j = 0.
    Base { seeds: Vec<BigRational>, counts: Vec<BigRational> },
}

/// A characteristic function; `offset` is the shift, so coefficient k of
/// the function is coefficient k + offset of its generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharFunction {
    generator: Generator,
    offset: usize,
}

impl CharFunction {
    pub fn explicit(coeffs: Vec<BigRational>) -> Self {
        CharFunction { generator: Generator::Explicit(coeffs), offset: 0 }
    }

    pub fn zero() -> Self {
        Self::explicit(Vec::new())
    }

    /// (1, -1, 1, -1, ...).
    pub fn euler() -> Self {
        coefficients_from_base(&MolecularSpace::isolated(1), &[q(1)]).expect("point base")
    }

    fn generator_prefix(&self, n: usize) -> Vec<BigRational> {
        match &self.generator {
            Generator::Explicit(c) => (0..n).map(|i| c.get(i).cloned().unwrap_or_else(BigRational::zero)).collect(),
            Generator::Base { seeds, counts } => {
                let k = counts.len();
                let mut a: Vec<BigRational> = seeds.clone();
                while a.len() < n {
                    // a has indices 1..=m (stored 0..m-1); next is a_{m+1} = a_{s-1+k} with s = m + 2 - k
                    let m = a.len();
                    let s = m + 2 - k;
                    let mut acc = a[s - 2].clone();
                    for j in 1..k {
                        acc += &a[s - 2 + j] * &counts[j - 1];
                    }
                    a.push(-acc / &counts[k - 1]);
                }
                a.truncate(n);
                a
            }
        }
    }

    /// a_1 .. a_n.
    pub fn coeffs(&self, n: usize) -> Vec<BigRational> {
        self.generator_prefix(n + self.offset).split_off(self.offset)
    }

    /// F^n = (a_n, a_{n+1}, ...); F^1 is F itself.
    pub fn shift(&self, n: usize) -> Self {
        assert!(n >= 1, "shifts are 1-based");
        CharFunction { generator: self.generator.clone(), offset: self.offset + n - 1 }
    }

    /// Sum of a_p n_p over the f-vector.
    pub fn evaluate_counts(&self, counts: &[u64]) -> BigRational {
        self.coeffs(counts.len()).iter().zip(counts).fold(BigRational::zero(), |s, (a, &n)| s + a * q(n as i64))
    }

    pub fn evaluate(&self, g: &MolecularSpace) -> Result<BigRational> {
        let f = f_vector_limited(g, crate::euler::DEFAULT_CLIQUE_LIMIT)?;
        Ok(self.evaluate_counts(&f.counts))
    }
}

/// Coefficients from the recurrence on the clique counts (n_1 .. n_k) of
/// `base`; the first k coefficients are the seeds.
pub fn coefficients_from_base(base: &MolecularSpace, seeds: &[BigRational]) -> Result<CharFunction> {
    if base.is_empty() {
        return Err(Error::InvalidBase("the base is empty".into()));
    }
    let f = f_vector_limited(base, crate::euler::DEFAULT_CLIQUE_LIMIT)?;
    let counts: Vec<BigRational> = f.counts.iter().map(|&n| q(n as i64)).collect();
    if counts.last().is_none_or(|n| n.is_zero()) {
        return Err(Error::InvalidBase("the top clique count vanishes".into()));
    }
    if seeds.len() != counts.len() {
        return Err(Error::InvalidArgument(format!("base with {} clique sizes needs {} seeds, got {}", counts.len(), counts.len(), seeds.len())));
    }
    Ok(CharFunction { generator: Generator::Base { seeds: seeds.to_vec(), counts }, offset: 0 })
}

/// F(G + H) expanded as F(G) + F(H) + sum_k F^{k+1}(H) n_k(G).
pub fn join_expansion(f: &CharFunction, g: &MolecularSpace, h: &MolecularSpace) -> Result<BigRational> {
    let fg = f_vector_limited(g, crate::euler::DEFAULT_CLIQUE_LIMIT)?;
    let mut total = f.evaluate(g)? + f.evaluate(h)?;
    for (k, &n) in fg.counts.iter().enumerate() {
        total += f.shift(k + 2).evaluate(h)? * q(n as i64);
    }
    Ok(total)
}

/// The family T(B): B itself, and spaces with a point whose rim is in T(B)
/// and whose deletion leaves a member.
pub struct BaseFamily {
    size: usize,
    form: CanonicalForm,
}

impl BaseFamily {
    pub fn new(base: &MolecularSpace) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::InvalidBase("the base is empty".into()));
        }
        let form = canonical_form(base).ok_or_else(|| Error::BudgetExceeded("canonical form of the base".into()))?;
        Ok(BaseFamily { size: base.volume(), form })
    }
}

impl Family for BaseFamily {
    fn base_size(&self) -> usize {
        self.size
    }

    fn is_base(&self, g: &LocalGraph, s: Mask) -> bool {
        canonical_form(&g.restrict(s).to_space()).is_some_and(|f| f == self.form)
    }

    fn refutes(&self, _g: &LocalGraph, _s: Mask) -> bool {
        false
    }

    fn cones_are_members(&self) -> bool {
        self.size == 1
    }
}

fn subset_tri(g: &MolecularSpace, idx: &[usize], fam: &BaseFamily, budget: &Budget) -> Tri {
    let Some(lg) = LocalGraph::from_subset(g, idx) else { return Tri::Unknown };
    Search::new(&lg, fam, budget).decide(lg.full())
}

/// Membership of `g` in T(B); spaces above 64 points are Unknown.
pub fn is_basic(g: &MolecularSpace, base: &MolecularSpace, budget: &Budget) -> Result<Tri> {
    let fam = BaseFamily::new(base)?;
    let idx: Vec<usize> = (0..g.volume()).collect();
    Ok(subset_tri(g, &idx, &fam, budget))
}

/// Basic moves of type B: point deletions, edge deletions and gluings
/// whose rim or joint rim is in T(B), and point gluings over the supplied
/// targets that are in T(B).
pub fn basic_moves(g: &MolecularSpace, base: &MolecularSpace, glue_targets: &[Vec<VertexId>], budget: &Budget) -> Result<Vec<Step>> {
    let fam = BaseFamily::new(base)?;
    let mut out = Vec::new();
    for i in 0..g.volume() {
        if subset_tri(g, g.nbrs(i), &fam, budget) == Tri::Yes {
            let v = g.id(i);
            out.push(Step { mv: Move::DeletePoint { v }, license: g.rim(v)?.members() });
        }
    }
    for i in 0..g.volume() {
        for j in i + 1..g.volume() {
            let common: Vec<usize> = g.joint_rim_idx(i, j).ones().collect();
            if subset_tri(g, &common, &fam, budget) == Tri::Yes {
                let (u, v) = (g.id(i), g.id(j));
                let mv = if g.adj(i, j) { Move::DeleteEdge { u, v } } else { Move::GlueEdge { u, v } };
                out.push(Step { mv, license: g.joint_rim(&[u, v])?.members() });
            }
        }
    }
    let mut fresh = g.fresh_id();
    for t in glue_targets {
        let idx = t.iter().map(|&v| g.index_of(v).ok_or(Error::VertexNotFound(v))).collect::<Result<Vec<_>>>()?;
        if subset_tri(g, &idx, &fam, budget) == Tri::Yes {
            out.push(Step { mv: Move::GluePoint { v: fresh, target: t.clone() }, license: t.clone() });
            fresh = VertexId(fresh.0 + 1);
        }
    }
    Ok(out)
}

/// Applies a basic move of type B after re-checking its license.
pub fn apply_basic(g: &MolecularSpace, base: &MolecularSpace, m: &Move, budget: &Budget) -> Result<MolecularSpace> {
    let fam = BaseFamily::new(base)?;
    let idx = |v: VertexId| g.index_of(v).ok_or(Error::VertexNotFound(v));
    let need = |idx: &[usize]| match subset_tri(g, idx, &fam, budget) {
        Tri::Yes => Ok(()),
        Tri::No => Err(Error::IllegalMove("license is not in the family of the base".into())),
        Tri::Unknown => Err(Error::IllegalMove("license membership undecided within budget".into())),
    };
    match m {
        Move::DeletePoint { v } => {
            need(g.nbrs(idx(*v)?))?;
            g.delete_vertex(*v)
        }
        Move::GluePoint { v, target } => {
            if g.contains(*v) {
                return Err(Error::IllegalMove(format!("vertex {v} already exists")));
            }
            let t = target.iter().map(|&x| idx(x)).collect::<Result<Vec<_>>>()?;
            need(&t)?;
            g.add_vertex(*v, target)
        }
        Move::DeleteEdge { u, v } | Move::GlueEdge { u, v } => {
            let (i, j) = (idx(*u)?, idx(*v)?);
            let adjacent = g.adj(i, j);
            if adjacent != matches!(m, Move::DeleteEdge { .. }) {
                return Err(Error::IllegalMove(format!("edge {u}-{v} is {}", if adjacent { "present" } else { "absent" })));
            }
            let common: Vec<usize> = g.joint_rim_idx(i, j).ones().collect();
            need(&common)?;
            if adjacent {
                g.delete_edge(*u, *v)
            } else {
                g.add_edge(*u, *v)
            }
        }
        _ => Err(Error::IllegalMove("swaps are not basic moves".into())),
    }
}

/// Subsets of `g` of the base's volume that are isomorphic to the base;
/// gluing a point over one of them is always basic.
pub fn base_copies(g: &MolecularSpace, base: &MolecularSpace, limit: usize) -> Result<Vec<Vec<VertexId>>> {
    let fam = BaseFamily::new(base)?;
    let Some(lg) = LocalGraph::from_space(g) else { return Ok(Vec::new()) };
    let k = base.volume();
    let mut out = Vec::new();
    fn rec(lg: &LocalGraph, fam: &BaseFamily, k: usize, start: usize, s: Mask, out: &mut Vec<Mask>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if s.count_ones() as usize == k {
            if fam.is_base(lg, s) {
                out.push(s);
            }
            return;
        }
        for v in start..lg.n() {
            rec(lg, fam, k, v + 1, s | bit(v), out, limit);
        }
    }
    let mut masks = Vec::new();
    rec(&lg, &fam, k, 0, 0, &mut masks, limit);
    for m in masks {
        out.push(crate::local::bits(m).map(|i| g.id(i)).collect());
    }
    Ok(out)
}

/// Rendered coefficients for reports.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientReport {
    pub coefficients: Vec<String>,
    pub value: Option<String>,
}

pub fn report(f: &CharFunction, n: usize, eval: Option<&MolecularSpace>) -> Result<CoefficientReport> {
    let coefficients = f.coeffs(n).iter().map(|c| c.to_string()).collect();
    let value = eval.map(|g| f.evaluate(g)).transpose()?.map(|v| v.to_string());
    Ok(CoefficientReport { coefficients, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{cycle, join, path};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn generated_coefficients() {
        assert_eq!(CharFunction::euler().coeffs(5), ints(&[1, -1, 1, -1, 1]));
        let halving = coefficients_from_base(&MolecularSpace::isolated(2), &[q(1)]).unwrap();
        assert_eq!(halving.coeffs(4), vec![q(1), r(-1, 2), r(1, 4), r(-1, 8)]);
        let k2 = MolecularSpace::complete(2);
        assert_eq!(coefficients_from_base(&k2, &ints(&[1, -2])).unwrap().coeffs(5), ints(&[1, -2, 3, -4, 5]));
        assert_eq!(coefficients_from_base(&k2, &ints(&[1, 1])).unwrap().coeffs(5), ints(&[1, 1, -3, 5, -7]));
        assert!(matches!(coefficients_from_base(&MolecularSpace::empty(), &[q(1)]), Err(Error::InvalidBase(_))));
        assert!(coefficients_from_base(&k2, &[q(1)]).is_err());
        assert_eq!(CharFunction::euler().shift(3).coeffs(2), ints(&[1, -1]));
    }

    #[test]
    fn evaluation() {
        let halving = coefficients_from_base(&MolecularSpace::isolated(2), &[q(1)]).unwrap();
        assert_eq!(halving.evaluate(&cycle(4)).unwrap(), q(2));
        assert_eq!(CharFunction::zero().evaluate(&cycle(5)).unwrap(), q(0));
        assert_eq!(CharFunction::euler().evaluate(&crate::construct::minimal_sphere(2)).unwrap(), q(2));
        let k2 = MolecularSpace::complete(2);
        assert_eq!(coefficients_from_base(&k2, &ints(&[1, 1])).unwrap().evaluate(&k2).unwrap(), q(3));
        assert_eq!(coefficients_from_base(&k2, &ints(&[1, -2])).unwrap().evaluate(&k2).unwrap(), q(0));
    }

    #[test]
    fn join_law() {
        let f = coefficients_from_base(&MolecularSpace::complete(2), &ints(&[2, -1])).unwrap();
        let (g, h) = (cycle(5), path(3));
        assert_eq!(f.evaluate(&join(&g, &h)).unwrap(), join_expansion(&f, &g, &h).unwrap());
    }

    #[test]
    fn families() {
        let b = Budget::default();
        let s0 = MolecularSpace::isolated(2);
        assert_eq!(is_basic(&cycle(4), &s0, &b).unwrap(), Tri::Yes);
        assert_eq!(is_basic(&MolecularSpace::isolated(1), &s0, &b).unwrap(), Tri::No);
        let pt = MolecularSpace::isolated(1);
        assert_eq!(is_basic(&MolecularSpace::complete(4), &pt, &b).unwrap(), Tri::Yes);
        assert_eq!(is_basic(&cycle(4), &pt, &b).unwrap(), Tri::No);
        let moves = basic_moves(&cycle(4), &s0, &[], &b).unwrap();
        let deletions = moves.iter().filter(|s| matches!(s.mv, Move::DeletePoint { .. })).count();
        assert_eq!(deletions, 4);
        let copies = base_copies(&cycle(4), &s0, 10).unwrap();
        assert_eq!(copies.len(), 2);
        let glued = apply_basic(&cycle(4), &s0, &Move::GluePoint { v: VertexId(9), target: copies[0].clone() }, &b).unwrap();
        let halving = coefficients_from_base(&s0, &[q(1)]).unwrap();
        assert_eq!(halving.evaluate(&glued).unwrap(), q(2));
    }
}
