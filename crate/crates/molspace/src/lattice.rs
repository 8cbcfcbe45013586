//! Box coordinates: coordinate matrices decoded by Chebyshev distance 1,
//! embeddings of arbitrary spaces, adjacency surgery on matrices, the
//! structural block J(n) with its diagonal D(n), and finite windows of the
//! lattice models L, R and N.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MolecularSpace;
use crate::local::{bit, bits, LocalGraph, Mask};

/// One integer row per vertex; row i is vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl CoordinateMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let w = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != w) {
            return Err(Error::InvalidArgument("rows differ in length".into()));
        }
        Ok(CoordinateMatrix { rows })
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Chebyshev distance between two rows.
    pub fn distance(&self, a: usize, b: usize) -> i64 {
        cheb(&self.rows[a], &self.rows[b])
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.distance(a, b) == 1
    }

    fn push_column(&mut self, f: impl Fn(usize) -> i64) {
        for (i, r) in self.rows.iter_mut().enumerate() {
            r.push(f(i));
        }
    }

    /// Drops columns that are constant over all rows.
    pub fn compact(&mut self) {
        let w = self.width();
        let keep: Vec<usize> = (0..w).filter(|&k| self.rows.iter().any(|r| r[k] != self.rows[0][k])).collect();
        for r in self.rows.iter_mut() {
            *r = keep.iter().map(|&k| r[k]).collect();
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = (1..=self.width()).map(|k| format!("k{k}")).collect();
        w.write_record(&header).map_err(|e| Error::Parse(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r.iter().map(|x| x.to_string())).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
        let width = rd.headers().map_err(|e| Error::Parse(e.to_string()))?.len();
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let row = rec.iter().map(|x| x.parse::<i64>().map_err(|e| Error::Parse(format!("{x:?}: {e}")))).collect::<Result<Vec<_>>>()?;
            if row.len() != width {
                return Err(Error::Parse("row length differs from header".into()));
            }
            rows.push(row);
        }
        CoordinateMatrix::new(rows)
    }
}

fn cheb(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)
}

/// Vertices 0..n, adjacent iff rows are at Chebyshev distance 1.
pub fn space_from_coords(m: &CoordinateMatrix) -> Result<MolecularSpace> {
    let n = m.len();
    for i in 0..n {
        for j in i + 1..n {
            if m.distance(i, j) == 0 {
                return Err(Error::DuplicateKirpich(i, j));
            }
        }
    }
    Ok(MolecularSpace::from_adjacency_fn(n, |i, j| m.adjacent(i, j)))
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Largest clique of a space with at most 64 points (branch and bound);
/// greedy above that.
fn max_clique(g: &MolecularSpace) -> Vec<usize> {
    let Some(lg) = LocalGraph::from_space(g) else {
        let mut order: Vec<usize> = (0..g.volume()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        let mut c: Vec<usize> = Vec::new();
        for v in order {
            if c.iter().all(|&u| g.adj(u, v)) {
                c.push(v);
            }
        }
        c.sort_unstable();
        return c;
    };
    fn rec(g: &LocalGraph, cur: Mask, cand: Mask, best: &mut Mask) {
        if cand == 0 {
            if cur.count_ones() > best.count_ones() {
                *best = cur;
            }
            return;
        }
        if cur.count_ones() + cand.count_ones() <= best.count_ones() {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        rec(g, cur | bit(v), cand & g.adj[v], best);
        rec(g, cur, cand & !bit(v), best);
    }
    let mut best = 0;
    rec(&lg, 0, lg.full(), &mut best);
    bits(best).collect()
}

/// Places the largest prefix (in index order) of `g` into the 3x3 cube.
fn square_prefix(g: &MolecularSpace) -> Vec<[i64; 2]> {
    fn rec(g: &MolecularSpace, placed: &mut Vec<[i64; 2]>, best: &mut Vec<[i64; 2]>, nodes: &mut u32) {
        *nodes += 1;
        if placed.len() > best.len() {
            *best = placed.clone();
        }
        if placed.len() == g.volume() || *nodes > 50_000 {
            return;
        }
        let v = placed.len();
        for x in 0..3 {
            for y in 0..3 {
                let p = [x, y];
                let ok = placed.iter().enumerate().all(|(u, q)| {
                    let d = cheb(&p, q);
                    d != 0 && (d == 1) == g.adj(u, v)
                });
                if ok {
                    placed.push(p);
                    rec(g, placed, best, nodes);
                    placed.pop();
                    if best.len() == g.volume() {
                        return;
                    }
                }
            }
        }
    }
    let mut best = Vec::new();
    rec(g, &mut Vec::new(), &mut best, &mut 0);
    best
}

/// Appends the remaining vertices one column each: the new vertex sits at
/// 1 in every old column and 2 in its own, old rows get 1 in the new
/// column when adjacent to it and 0 otherwise.
fn extend(g: &MolecularSpace, seeded: &[usize], seed_rows: Vec<Vec<i64>>) -> CoordinateMatrix {
    let n = g.volume();
    let mut rows: Vec<Option<Vec<i64>>> = vec![None; n];
    for (&v, r) in seeded.iter().zip(seed_rows) {
        rows[v] = Some(r);
    }
    let mut width = rows.iter().flatten().next().map_or(0, |r| r.len());
    for b in 0..n {
        if rows[b].is_some() {
            continue;
        }
        for (a, r) in rows.iter_mut().enumerate() {
            if let Some(r) = r {
                r.push(if g.adj(a, b) { 1 } else { 0 });
            }
        }
        let mut r = vec![1; width];
        r.push(2);
        rows[b] = Some(r);
        width += 1;
    }
    let mut m = CoordinateMatrix { rows: rows.into_iter().map(|r| r.expect("placed")).collect() };
    if n > 1 {
        m.compact();
    }
    m
}

fn binary_rows(k: usize, scale: i64) -> Vec<Vec<i64>> {
    let w = ceil_log2(k);
    (0..k).map(|i| (0..w).map(|b| scale * ((i >> (w - 1 - b)) & 1) as i64).collect()).collect()
}

/// Coordinate matrix with entries in {0,1,2}. Three seeds are tried (a
/// maximum clique on binary rows, a maximum anticlique on doubled binary
/// rows, the longest prefix fitting the 3x3 cube) and the narrowest result
/// is kept; every candidate is decoded and compared against `g`.
pub fn coords_from_space(g: &MolecularSpace) -> CoordinateMatrix {
    let n = g.volume();
    if n == 0 {
        return CoordinateMatrix { rows: Vec::new() };
    }
    let mut cands = Vec::new();
    let clique = max_clique(g);
    cands.push(extend(g, &clique, binary_rows(clique.len(), 1)));
    let anti = max_clique(&g.complement());
    cands.push(extend(g, &anti, binary_rows(anti.len(), 2)));
    let sq = square_prefix(g);
    let idx: Vec<usize> = (0..sq.len()).collect();
    cands.push(extend(g, &idx, sq.iter().map(|p| p.to_vec()).collect()));
    cands.retain(|m| space_from_coords(m).is_ok_and(|h| h.index_edges() == g.index_edges()));
    cands.into_iter().min_by_key(|m| m.width()).expect("the cube seed always decodes")
}

pub fn kirpicity_of_clique(n: usize) -> usize {
    ceil_log2(n)
}

pub fn compactness_of_clique(n: usize) -> usize {
    ceil_log2(n)
}

/// Clique embedding on binary rows with the least width.
pub fn clique_coords(n: usize) -> CoordinateMatrix {
    CoordinateMatrix { rows: binary_rows(n, 1) }
}

/// Upper bound on compactness from the volume alone.
pub fn compactness_upper(g: &MolecularSpace) -> usize {
    match g.volume() {
        0 | 1 => 0,
        n if n >= 4 => n - 2,
        n => n - 1,
    }
}

fn adjacency_except(m: &CoordinateMatrix, skip: (usize, usize)) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if (i, j) != skip {
                out.push((i, j, m.adjacent(i, j)));
            }
        }
    }
    out
}

fn check_rows(m: &CoordinateMatrix, a: usize, b: usize) -> Result<(usize, usize)> {
    if a >= m.len() || b >= m.len() || a == b {
        return Err(Error::InvalidArgument("two distinct row indices required".into()));
    }
    Ok((a.min(b), a.max(b)))
}

/// Makes adjacent rows a, b non-adjacent with a fresh column (+1 for a,
/// -1 for b, 0 elsewhere).
pub fn split_pair(m: &CoordinateMatrix, a: usize, b: usize) -> Result<CoordinateMatrix> {
    let key = check_rows(m, a, b)?;
    if !m.adjacent(a, b) {
        return Err(Error::InvalidArgument(format!("rows {a} and {b} are not adjacent")));
    }
    let before = adjacency_except(m, key);
    let mut out = m.clone();
    out.push_column(|i| if i == a { 1 } else if i == b { -1 } else { 0 });
    if adjacency_except(&out, key) != before || out.adjacent(a, b) {
        return Err(Error::InternalInvariantViolation("split changed another pair".into()));
    }
    Ok(out)
}

/// Makes non-adjacent rows a, b adjacent. Every column in which they are
/// two or more apart is closed by shifting the rows at or below the lower
/// value up by one; pairs that thereby coincide get a separating column and
/// pairs that become adjacent are split again.
pub fn merge_pair(m: &CoordinateMatrix, a: usize, b: usize) -> Result<CoordinateMatrix> {
    let key = check_rows(m, a, b)?;
    if m.distance(a, b) <= 1 {
        return Err(Error::InvalidArgument(format!("rows {a} and {b} are already adjacent")));
    }
    let target: BTreeSet<(usize, usize)> =
        adjacency_except(m, key).into_iter().filter(|p| p.2).map(|p| (p.0, p.1)).collect();
    let mut out = m.clone();
    for k in 0..m.width() {
        loop {
            let (lo, hi) = (out.rows[a][k].min(out.rows[b][k]), out.rows[a][k].max(out.rows[b][k]));
            if hi - lo <= 1 {
                break;
            }
            for r in out.rows.iter_mut() {
                if r[k] <= lo {
                    r[k] += 1;
                }
            }
            repair(&mut out, &target, key);
        }
    }
    let after = adjacency_except(&out, key);
    if !out.adjacent(a, b) || after.iter().any(|&(i, j, adj)| adj != target.contains(&(i, j))) {
        return Err(Error::InternalInvariantViolation("merge changed another pair".into()));
    }
    Ok(out)
}

fn repair(m: &mut CoordinateMatrix, target: &BTreeSet<(usize, usize)>, skip: (usize, usize)) {
    let n = m.len();
    for i in 0..n {
        for j in i + 1..n {
            if m.distance(i, j) == 0 {
                m.push_column(|r| if r == i { 1 } else { 0 });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if (i, j) != skip && m.adjacent(i, j) && !target.contains(&(i, j)) {
                m.push_column(|r| if r == i { 1 } else if r == j { -1 } else { 0 });
            }
        }
    }
}

fn comparable(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) || a.iter().zip(b).all(|(x, y)| x >= y)
}

/// J(n): the 2^n binary vectors, adjacent when distinct and comparable.
/// Vertex i is the vector of the binary digits of i, most significant first.
pub fn structural_block(n: usize) -> MolecularSpace {
    let v = binary_rows(1 << n, 1);
    MolecularSpace::from_adjacency_fn(1 << n, |i, j| comparable(&v[i], &v[j]))
}

/// D(n): J(n) without the all-zero and all-one vectors; ids keep their
/// binary values.
pub fn diagonal(n: usize) -> MolecularSpace {
    let j = structural_block(n);
    let last = (1u32 << n) - 1;
    j.delete_vertex(crate::graph::VertexId(0)).and_then(|g| g.delete_vertex(crate::graph::VertexId(last))).expect("present")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    L,
    R,
    N,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeModel {
    pub kind: LatticeKind,
    pub extents: Vec<usize>,
    /// Coordinates of the window's first point.
    pub origin: Vec<i64>,
}

impl LatticeModel {
    pub fn new(kind: LatticeKind, extents: Vec<usize>) -> Self {
        let origin = vec![0; extents.len()];
        LatticeModel { kind, extents, origin }
    }

    /// Lattice coordinates of every window point, last axis fastest.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut pts = vec![Vec::new()];
        for (&e, &o) in self.extents.iter().zip(&self.origin) {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    (o..o + e as i64).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        pts
    }

    /// Index of a lattice point inside the window.
    pub fn index(&self, p: &[i64]) -> Option<usize> {
        let mut idx = 0;
        for (k, &e) in self.extents.iter().enumerate() {
            let x = p[k] - self.origin[k];
            if x < 0 || x >= e as i64 {
                return None;
            }
            idx = idx * e + x as usize;
        }
        Some(idx)
    }
}

/// Topological coordinates |s| mod 2.
fn topological(p: &[i64]) -> Vec<i64> {
    p.iter().map(|x| x.rem_euclid(2)).collect()
}

pub fn lattice_window(model: &LatticeModel) -> MolecularSpace {
    let pts = model.points();
    let tops: Vec<Vec<i64>> = pts.iter().map(|p| topological(p)).collect();
    MolecularSpace::from_adjacency_fn(pts.len(), |i, j| {
        cheb(&pts[i], &pts[j]) == 1
            && match model.kind {
                LatticeKind::L => true,
                LatticeKind::R => comparable(&pts[i], &pts[j]),
                LatticeKind::N => comparable(&tops[i], &tops[j]),
            }
    })
}
