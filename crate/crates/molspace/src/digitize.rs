//! Covers of molecular spaces (continuity, contractibility, regularity,
//! nerve, blow-up) and the cube-grid digitizer for subsets of R^n.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::euler::f_vector_limited;
use crate::family::Tri;
use crate::graph::{MolecularSpace, VertexId};
use crate::homology::homology_limited;
use crate::lattice::{space_from_coords, CoordinateMatrix};
use crate::transform::{homotopy_check, idx_subset_tri, HomotopyVerdict, Move, Step};

#[derive(Clone, Debug, Serialize)]
pub struct Cover {
    pub base: MolecularSpace,
    pub parts: Vec<Vec<VertexId>>,
    #[serde(skip)]
    masks: Vec<FixedBitSet>,
}

impl Cover {
    pub fn new(base: MolecularSpace, parts: Vec<Vec<VertexId>>) -> Result<Self> {
        let n = base.volume();
        let mut union = FixedBitSet::with_capacity(n);
        let mut masks = Vec::with_capacity(parts.len());
        for p in &parts {
            if p.is_empty() {
                return Err(Error::InvalidArgument("cover part is empty".into()));
            }
            let mut m = FixedBitSet::with_capacity(n);
            for &v in p {
                m.insert(base.index_of(v).ok_or(Error::VertexNotFound(v))?);
            }
            union.union_with(&m);
            masks.push(m);
        }
        if union.count_ones(..) != n {
            return Err(Error::InvalidArgument("parts do not cover every point".into()));
        }
        Ok(Cover { base, parts, masks })
    }

    /// Cover by index sets.
    pub fn from_indices(base: MolecularSpace, parts: &[Vec<usize>]) -> Result<Self> {
        let parts = parts.iter().map(|p| p.iter().map(|&i| base.id(i)).collect()).collect();
        Cover::new(base, parts)
    }

    /// The balls U(v) of every point.
    pub fn balls(base: &MolecularSpace) -> Self {
        let parts = base.vertices().iter().map(|&v| base.ball(v).expect("present").members()).collect();
        Cover::new(base.clone(), parts).expect("balls cover")
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    fn meets(&self, a: usize, b: usize) -> bool {
        !self.masks[a].is_disjoint(&self.masks[b])
    }

    /// Calls `f` on every family of pairwise intersecting parts (as part
    /// indices, at least one part) with its common intersection; stops when
    /// `f` returns false.
    fn each_clique(&self, f: &mut impl FnMut(&[usize], &FixedBitSet) -> bool) -> bool {
        fn rec(c: &Cover, chosen: &mut Vec<usize>, inter: &FixedBitSet, f: &mut impl FnMut(&[usize], &FixedBitSet) -> bool) -> bool {
            let start = chosen.last().map_or(0, |&l| l + 1);
            for k in start..c.len() {
                if !chosen.iter().all(|&j| c.meets(j, k)) {
                    continue;
                }
                let mut next = inter.clone();
                next.intersect_with(&c.masks[k]);
                chosen.push(k);
                let go = f(chosen, &next) && (next.is_clear() || rec(c, chosen, &next, f));
                chosen.pop();
                if !go {
                    return false;
                }
            }
            true
        }
        let mut all = FixedBitSet::with_capacity(self.base.volume());
        all.insert_range(..);
        rec(self, &mut Vec::new(), &all, f)
    }
}

/// Every family of pairwise intersecting parts has a common point.
pub fn cover_is_continuous(c: &Cover) -> bool {
    c.each_clique(&mut |_, inter| !inter.is_clear())
}

/// Every nonempty intersection of parts is contractible.
pub fn cover_is_contractible(c: &Cover, budget: &Budget) -> Tri {
    let mut seen: HashMap<Vec<usize>, Tri> = HashMap::new();
    let mut worst = Tri::Yes;
    c.each_clique(&mut |_, inter| {
        if inter.is_clear() {
            return true;
        }
        let idx: Vec<usize> = inter.ones().collect();
        let t = *seen.entry(idx.clone()).or_insert_with(|| idx_subset_tri(&c.base, &idx, budget));
        match t {
            Tri::No => {
                worst = Tri::No;
                false
            }
            Tri::Unknown => {
                worst = Tri::Unknown;
                true
            }
            Tri::Yes => true,
        }
    });
    worst
}

/// Every ball U(v) lies inside some part.
pub fn cover_is_regular(c: &Cover) -> bool {
    (0..c.base.volume()).all(|i| {
        let mut ball = c.base.nbr_bits(i).clone();
        ball.grow(c.base.volume());
        ball.insert(i);
        c.masks.iter().any(|m| ball.is_subset(m))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub continuous: bool,
    pub contractible: Tri,
    pub regular: bool,
    pub complete: Tri,
}

pub fn cover_is_complete(c: &Cover, budget: &Budget) -> CoverReport {
    let continuous = cover_is_continuous(c);
    let regular = cover_is_regular(c);
    let contractible = cover_is_contractible(c, budget);
    let complete = if !continuous || !regular { Tri::No } else { contractible };
    CoverReport { continuous, contractible, regular, complete }
}

/// Intersection graph of the parts; vertex k is part k.
pub fn nerve(c: &Cover) -> MolecularSpace {
    MolecularSpace::from_adjacency_fn(c.len(), |a, b| c.meets(a, b))
}

/// Base plus one point per part, joined to the part's points and to the
/// points of intersecting parts. Base ids are kept; part k gets id
/// `fresh + k` where `fresh` is the base's next free id.
pub fn blowup(c: &Cover) -> MolecularSpace {
    let fresh = c.base.fresh_id().0;
    let mut vertices: Vec<u32> = c.base.vertices().iter().map(|v| v.0).collect();
    vertices.extend((0..c.len() as u32).map(|k| fresh + k));
    let mut edges: Vec<(u32, u32)> = c.base.edges().into_iter().map(|(a, b)| (a.0, b.0)).collect();
    for (k, p) in c.parts.iter().enumerate() {
        edges.extend(p.iter().map(|v| (v.0, fresh + k as u32)));
        for j in k + 1..c.len() {
            if c.meets(k, j) {
                edges.push((fresh + k as u32, fresh + j as u32));
            }
        }
    }
    MolecularSpace::new(vertices, edges).expect("ids are distinct")
}

/// Deletes base points of the blow-up while some rim is contractible.
/// Returns the remaining space and the deletions; for a complete cover the
/// remainder is the nerve.
pub fn reduce_blowup(c: &Cover, budget: &Budget) -> (MolecularSpace, Vec<Step>) {
    let mut g = blowup(c);
    let mut base: Vec<VertexId> = c.base.vertices().to_vec();
    let mut steps = Vec::new();
    loop {
        let pick = base.iter().position(|&v| {
            let i = g.index_of(v).expect("present");
            crate::transform::rim_tri(&g, i, budget) == Tri::Yes
        });
        let Some(p) = pick else { break };
        let v = base.remove(p);
        steps.push(Step { mv: Move::DeletePoint { v }, license: g.rim(v).expect("present").members() });
        g = g.delete_vertex(v).expect("present");
    }
    (g, steps)
}

type Indicator = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
type BoxTest = Arc<dyn Fn(&[f64], &[f64]) -> bool + Send + Sync>;

/// A subset of R^n given by a membership test on a bounding box. Built-in
/// shapes also carry an exact cube test; without one a cube is tested at
/// `(sampling + 1)^n` grid points including its corners.
#[derive(Clone)]
pub struct ImplicitRegion {
    pub name: String,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub sampling: usize,
    indicator: Indicator,
    exact: Option<BoxTest>,
}

impl std::fmt::Debug for ImplicitRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImplicitRegion").field("name", &self.name).field("lo", &self.lo).field("hi", &self.hi).field("sampling", &self.sampling).finish()
    }
}

fn norm_range(lo: &[f64], hi: &[f64], c: &[f64]) -> (f64, f64) {
    let (mut near, mut far) = (0.0, 0.0);
    for k in 0..lo.len() {
        let d = if c[k] < lo[k] {
            lo[k] - c[k]
        } else if c[k] > hi[k] {
            c[k] - hi[k]
        } else {
            0.0
        };
        let f = (c[k] - lo[k]).abs().max((hi[k] - c[k]).abs());
        near += d * d;
        far += f * f;
    }
    (near.sqrt(), far.sqrt())
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|t| t * t).sum::<f64>().sqrt()
}

impl ImplicitRegion {
    pub fn new(name: &str, lo: Vec<f64>, hi: Vec<f64>, indicator: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| a.is_nan() || b.is_nan() || a > b) {
            return Err(Error::InvalidArgument("bounding box is malformed".into()));
        }
        Ok(ImplicitRegion { name: name.into(), lo, hi, sampling: 4, indicator: Arc::new(indicator), exact: None })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn with_sampling(mut self, s: usize) -> Self {
        self.sampling = s;
        self
    }

    /// Drops the exact cube test so that only sampling is used.
    pub fn sampled_only(mut self) -> Self {
        self.exact = None;
        self
    }

    fn with_exact(mut self, t: impl Fn(&[f64], &[f64]) -> bool + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(t));
        self
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (self.indicator)(x)
    }

    /// Solid ball of radius r about the origin.
    pub fn ball(dim: usize, r: f64) -> Self {
        let o = vec![0.0; dim];
        ImplicitRegion::new("ball", vec![-r; dim], vec![r; dim], move |x| norm(x) <= r)
            .expect("box")
            .with_exact(move |lo, hi| norm_range(lo, hi, &o).0 <= r)
    }

    /// The sphere |x| = r; a cube is selected when it meets the sphere.
    pub fn sphere(dim: usize, r: f64) -> Self {
        let o = vec![0.0; dim];
        let name = if dim == 2 { "circle" } else { "sphere" };
        ImplicitRegion::new(name, vec![-r; dim], vec![r; dim], move |x| (norm(x) - r).abs() <= 1e-12 * r.max(1.0))
            .expect("box")
            .with_exact(move |lo, hi| {
                let (near, far) = norm_range(lo, hi, &o);
                near <= r && r <= far
            })
    }

    pub fn circle(r: f64) -> Self {
        Self::sphere(2, r)
    }

    /// Closed ring r_in <= |x| <= r_out in the plane.
    pub fn annulus(r_in: f64, r_out: f64) -> Self {
        let o = vec![0.0; 2];
        ImplicitRegion::new("annulus", vec![-r_out; 2], vec![r_out; 2], move |x| (r_in..=r_out).contains(&norm(x)))
            .expect("box")
            .with_exact(move |lo, hi| {
                let (near, far) = norm_range(lo, hi, &o);
                near <= r_out && far >= r_in
            })
    }

    /// Axis-aligned closed box.
    pub fn block(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let (l, h) = (lo.clone(), hi.clone());
        let (l2, h2) = (lo.clone(), hi.clone());
        Ok(ImplicitRegion::new("box", lo, hi, move |x| x.iter().enumerate().all(|(k, &t)| l[k] <= t && t <= h[k]))?
            .with_exact(move |a, b| (0..a.len()).all(|k| a[k] <= h2[k] && l2[k] <= b[k])))
    }

    /// Boolean expression in `x`, `y`, `z` (or `x1`, `x2`, ...), e.g.
    /// `x^2 + y^2 <= 1 && x >= 0`.
    pub fn from_expr(expr: &str, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let tree = evalexpr::build_operator_tree(expr).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = lo.len();
        let names: Vec<String> = (0..dim).map(|k| ["x", "y", "z"].get(k).map_or(format!("x{}", k + 1), |s| s.to_string())).collect();
        let eval = move |x: &[f64]| -> std::result::Result<bool, evalexpr::EvalexprError> {
            use evalexpr::ContextWithMutableVariables;
            let mut ctx = evalexpr::HashMapContext::new();
            for (k, n) in names.iter().enumerate() {
                ctx.set_value(n.clone(), evalexpr::Value::Float(x[k]))?;
                ctx.set_value(format!("x{}", k + 1), evalexpr::Value::Float(x[k]))?;
            }
            tree.eval_boolean_with_context(&ctx)
        };
        let probe: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2.0).collect();
        eval(&probe).map_err(|e| Error::Parse(e.to_string()))?;
        ImplicitRegion::new("expr", lo, hi, move |x| eval(x).unwrap_or(false))
    }

    /// Whether the closed cube [lo, hi] is selected.
    pub fn meets(&self, lo: &[f64], hi: &[f64]) -> bool {
        if let Some(t) = &self.exact {
            return t(lo, hi);
        }
        let s = self.sampling.max(1);
        let n = lo.len();
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        loop {
            for k in 0..n {
                x[k] = lo[k] + (hi[k] - lo[k]) * idx[k] as f64 / s as f64;
            }
            if self.contains(&x) {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                idx[k] += 1;
                if idx[k] <= s {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Digitization {
    pub l0: f64,
    /// Grid index of every selected cube; row i is point i of `space`.
    pub coords: CoordinateMatrix,
    pub space: MolecularSpace,
}

/// Selects the grid cubes `[k l0, (k+1) l0]` that meet the region and joins
/// cubes whose indices are at Chebyshev distance 1.
pub fn digitize(region: &ImplicitRegion, l0: f64) -> Result<Digitization> {
    if !l0.is_finite() || l0 <= 0.0 {
        return Err(Error::InvalidArgument("cube side must be positive".into()));
    }
    if region.exact.is_none() && region.sampling < 2 {
        return Err(Error::InvalidArgument("sampling must be at least 2 per axis".into()));
    }
    let n = region.dim();
    let first: Vec<i64> = region.lo.iter().map(|&a| (a / l0).floor() as i64 - 1).collect();
    let last: Vec<i64> = region.hi.iter().map(|&b| (b / l0).floor() as i64).collect();
    let mut rows = Vec::new();
    let mut k = first.clone();
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    'grid: loop {
        for a in 0..n {
            lo[a] = k[a] as f64 * l0;
            hi[a] = (k[a] + 1) as f64 * l0;
        }
        if region.meets(&lo, &hi) {
            rows.push(k.clone());
        }
        let mut a = n;
        loop {
            if a == 0 {
                break 'grid;
            }
            a -= 1;
            k[a] += 1;
            if k[a] <= last[a] {
                break;
            }
            k[a] = first[a];
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyDigitization);
    }
    let coords = CoordinateMatrix::new(rows)?;
    let space = space_from_coords(&coords)?;
    Ok(Digitization { l0, coords, space })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    /// Equal invariants and isomorphic minimized forms.
    Strong,
    /// Equal invariants; minimization or isomorphism ran out of budget.
    Weak,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    /// 1 for the starting cube size, +1 per halving.
    pub level: usize,
    pub l0: f64,
    pub volume: usize,
    pub euler: Option<i64>,
    pub betti: Option<Vec<u64>>,
    /// Comparison with the previous level.
    pub equivalence: Option<Equivalence>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Multires {
    pub levels: Vec<LevelSummary>,
    /// First level of the final run of equivalent consecutive levels.
    pub stabilized_at: Option<usize>,
    pub weak_stabilization: bool,
    /// Digitization at the last level.
    pub last: Digitization,
}

/// Digitizes at l0, l0/2, ... (max_halvings + 1 levels). Stabilization is
/// the first level from which every consecutive pair is homotopy
/// equivalent, provided that run has at least two levels.
pub fn multires_digitize(region: &ImplicitRegion, l0_start: f64, max_halvings: usize, budget: &Budget) -> Result<Multires> {
    let mut levels: Vec<LevelSummary> = Vec::new();
    let mut prev: Option<Digitization> = None;
    for level in 1..=max_halvings + 1 {
        let l0 = l0_start / f64::powi(2.0, level as i32 - 1);
        let d = digitize(region, l0)?;
        let equivalence = prev.as_ref().map(|p| match homotopy_check(&p.space, &d.space, budget) {
            HomotopyVerdict::Equivalent { .. } => Equivalence::Strong,
            HomotopyVerdict::Distinguished { .. } => Equivalence::None,
            HomotopyVerdict::Unknown { exhausted: true, .. } => Equivalence::Weak,
            HomotopyVerdict::Unknown { exhausted: false, .. } => Equivalence::None,
        });
        let euler = f_vector_limited(&d.space, budget.clique_limit).ok().map(|f| f.euler());
        let betti = homology_limited(&d.space, None, budget.clique_limit).ok().map(|h| h.betti_trimmed());
        levels.push(LevelSummary { level, l0, volume: d.space.volume(), euler, betti, equivalence });
        prev = Some(d);
    }
    let mut start = levels.len();
    while start > 1 && levels[start - 1].equivalence.is_some_and(|e| e != Equivalence::None) {
        start -= 1;
    }
    let (stabilized_at, weak) = if start < levels.len() {
        let weak = levels[start..].iter().any(|l| l.equivalence == Some(Equivalence::Weak));
        (Some(levels[start - 1].level), weak)
    } else {
        (None, false)
    };
    Ok(Multires { levels, stabilized_at, weak_stabilization: weak, last: prev.expect("at least one level") })
}
