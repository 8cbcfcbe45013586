//! Discrete dynamics on a molecular space: parabolic, hyperbolic and
//! elliptic equations with coefficients supported on closed balls, sources
//! and sinks, conservation monitors and the sign-block nondegeneracy test.
//!
//! `c[p][k]` is the weight carrying the value at k into p. Mass is conserved
//! when every column sums to 1. A source row is zero (the source receives
//! nothing from the stencil and is overwritten by its prescribed value); a
//! sink column is zero off the diagonal (the sink passes nothing on).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MolecularSpace, VertexId};

pub trait Scalar: Clone + Debug + PartialOrd + Signed {
    fn from_f64(x: f64) -> Result<Self>;
    fn to_f64(&self) -> f64;
    /// Equality up to rounding for floats, exact for rationals.
    fn close(&self, other: &Self) -> bool;
    /// CSV text: shortest float form, `n/d` for rationals.
    fn render(&self) -> String;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::InvalidArgument(format!("{x} is not finite")))
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn close(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-9
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for BigRational {
    /// Decimal value of the float's shortest representation, so 0.075 is
    /// read as 3/40.
    fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("{x} is not finite")));
        }
        parse_decimal(&format!("{x}"))
    }
    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
    fn close(&self, other: &Self) -> bool {
        self == other
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Parses `-1.25`, `3/40` or `1e-3` exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().map_err(|_| bad())? / BigInt::from(10);
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(digits);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Dense coefficient matrix over the points of a space (by index).
#[derive(Clone, Debug, PartialEq)]
pub struct Stencil<T = f64> {
    pub c: Vec<Vec<T>>,
}

impl<T: Scalar> Stencil<T> {
    pub fn zeros(n: usize) -> Self {
        Stencil { c: vec![vec![T::zero(); n]; n] }
    }

    /// `self_weight` on the diagonal, `neighbor` on every edge.
    pub fn uniform(g: &MolecularSpace, self_weight: T, neighbor: T) -> Self {
        let n = g.volume();
        let mut s = Self::zeros(n);
        for p in 0..n {
            s.c[p][p] = self_weight.clone();
            for &k in g.nbrs(p) {
                s.c[p][k] = neighbor.clone();
            }
        }
        s
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidStencil("matrix is not square".into()));
        }
        Ok(Stencil { c: rows })
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Stencil<U> {
        Stencil { c: self.c.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    /// Nonzero entries lie on closed balls.
    pub fn check_support(&self, g: &MolecularSpace) -> Result<()> {
        if self.len() != g.volume() {
            return Err(Error::InvalidStencil(format!("{} rows for {} points", self.len(), g.volume())));
        }
        for p in 0..self.len() {
            for k in 0..self.len() {
                if p != k && !g.adj(p, k) && !self.c[p][k].is_zero() {
                    return Err(Error::InvalidStencil(format!("c[{}][{}] lies outside the ball", g.id(p), g.id(k))));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, f: &[T]) -> Vec<T> {
        self.c
            .iter()
            .map(|row| row.iter().zip(f).filter(|(c, _)| !c.is_zero()).fold(T::zero(), |s, (c, x)| s + c.clone() * x.clone()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Parabolic,
    Hyperbolic,
    Elliptic,
}

/// A value prescribed per time step; the last entry repeats.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule<T>(pub Vec<T>);

impl<T: Scalar> Schedule<T> {
    pub fn constant(x: T) -> Self {
        Schedule(vec![x])
    }

    pub fn at(&self, t: usize) -> T {
        self.0.get(t).or(self.0.last()).cloned().unwrap_or_else(T::zero)
    }
}

#[derive(Clone, Debug)]
pub struct DynamicSystem<T = f64> {
    pub space: MolecularSpace,
    pub stencil: Stencil<T>,
    pub kind: Kind,
    /// Prescribed values by point index.
    pub sources: BTreeMap<usize, Schedule<T>>,
    pub sinks: BTreeSet<usize>,
    /// Inhomogeneous term h^t, one row per t (the last row repeats).
    pub h: Option<Vec<Vec<T>>>,
    /// f^t for the layers computed so far; the last entry is current.
    pub history: Vec<Vec<T>>,
}

/// Which sums equal 1 for an admissible stencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Balance {
    Columns,
    Rows,
}

impl<T: Scalar> DynamicSystem<T> {
    pub fn new(space: MolecularSpace, stencil: Stencil<T>, kind: Kind, initial: Vec<Vec<T>>) -> Result<Self> {
        stencil.check_support(&space)?;
        if initial.is_empty() || initial.iter().any(|l| l.len() != space.volume()) {
            return Err(Error::InvalidArgument("every initial layer needs one value per point".into()));
        }
        Ok(DynamicSystem { space, stencil, kind, sources: BTreeMap::new(), sinks: BTreeSet::new(), h: None, history: initial })
    }

    pub fn with_source(mut self, v: VertexId, value: Schedule<T>) -> Result<Self> {
        let i = self.space.index_of(v).ok_or(Error::VertexNotFound(v))?;
        self.sources.insert(i, value);
        Ok(self)
    }

    pub fn with_sink(mut self, v: VertexId) -> Result<Self> {
        let i = self.space.index_of(v).ok_or(Error::VertexNotFound(v))?;
        self.sinks.insert(i);
        Ok(self)
    }

    pub fn current(&self) -> &[T] {
        self.history.last().expect("nonempty")
    }

    /// Time index of the current layer, counting the first layer as 0.
    pub fn t(&self) -> usize {
        self.history.len() - 1
    }

    /// Nonnegative weights, zero source rows and sink columns, and unit
    /// column sums (or unit row sums) away from sources and sinks.
    pub fn admissibility(&self) -> Result<Balance> {
        let s = &self.stencil;
        let n = s.len();
        for p in 0..n {
            for k in 0..n {
                if s.c[p][k].is_negative() {
                    return Err(Error::InvalidStencil(format!("negative weight c[{}][{}]", self.space.id(p), self.space.id(k))));
                }
            }
        }
        for &p in self.sources.keys() {
            if s.c[p].iter().any(|x| !x.is_zero()) {
                return Err(Error::InvalidStencil(format!("source {} receives from the stencil", self.space.id(p))));
            }
        }
        for &k in &self.sinks {
            if (0..n).any(|p| p != k && !s.c[p][k].is_zero()) {
                return Err(Error::InvalidStencil(format!("sink {} feeds other points", self.space.id(k))));
            }
        }
        let free = |i: &usize| !self.sources.contains_key(i) && !self.sinks.contains(i);
        let one = T::one();
        let cols = (0..n).filter(free).all(|k| (0..n).fold(T::zero(), |a, p| a + s.c[p][k].clone()).close(&one));
        if cols {
            return Ok(Balance::Columns);
        }
        let rows = (0..n).filter(|p| !self.sources.contains_key(p)).all(|p| s.c[p].iter().fold(T::zero(), |a, x| a + x.clone()).close(&one));
        if rows {
            return Ok(Balance::Rows);
        }
        Err(Error::InvalidStencil("neither all column sums nor all row sums equal 1".into()))
    }

    fn h_at(&self, t: usize, p: usize) -> T {
        match &self.h {
            Some(rows) => rows.get(t).or(rows.last()).map_or_else(T::zero, |r| r[p].clone()),
            None => T::zero(),
        }
    }

    fn pin(&self, f: &mut [T], t: usize) {
        for (&p, s) in &self.sources {
            f[p] = s.at(t);
        }
    }

    /// f^{t+1} = C f^t + h^{t+1}, then sources take their prescribed values.
    pub fn step_parabolic(&mut self) -> Result<&[T]> {
        self.admissibility()?;
        let t1 = self.t() + 1;
        let mut next = self.stencil.apply(self.current());
        for (p, x) in next.iter_mut().enumerate() {
            *x = x.clone() + self.h_at(t1, p);
        }
        self.pin(&mut next, t1);
        self.history.push(next);
        Ok(self.current())
    }

    /// f^{t+1} = C f^t + f^t - f^{t-1} + h^{t+1}.
    pub fn step_hyperbolic(&mut self) -> Result<&[T]> {
        if self.history.len() < 2 {
            return Err(Error::NeedsTwoLayers);
        }
        self.admissibility()?;
        let t1 = self.t() + 1;
        let cur = self.current();
        let prev = &self.history[self.history.len() - 2];
        let mut next = self.stencil.apply(cur);
        for p in 0..next.len() {
            next[p] = next[p].clone() + cur[p].clone() - prev[p].clone() + self.h_at(t1, p);
        }
        self.pin(&mut next, t1);
        self.history.push(next);
        Ok(self.current())
    }

    pub fn step(&mut self) -> Result<&[T]> {
        match self.kind {
            Kind::Parabolic => self.step_parabolic(),
            Kind::Hyperbolic => self.step_hyperbolic(),
            Kind::Elliptic => Err(Error::InvalidArgument("elliptic systems are solved, not stepped".into())),
        }
    }

    /// Steps `steps` times and records S(f^t) = sum f and ||f^t|| = sum |f|
    /// for every layer, the initial ones included.
    pub fn run(&mut self, steps: usize) -> Result<Monitors> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(self.monitors())
    }

    pub fn monitors(&self) -> Monitors {
        Monitors {
            sum: self.history.iter().map(|f| f.iter().map(|x| x.to_f64()).sum()).collect(),
            norm: self.history.iter().map(|f| f.iter().map(|x| x.abs().to_f64()).sum()).collect(),
        }
    }

    /// Exact S(f^t) for every layer.
    pub fn sums(&self) -> Vec<T> {
        self.history.iter().map(|f| f.iter().fold(T::zero(), |a, x| a + x.clone())).collect()
    }

    /// History as CSV: `t`, one column per point id, `S`, `norm`. The first
    /// layer is labelled `t0`.
    pub fn to_csv(&self, t0: i64) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["t".to_string()];
        header.extend(self.space.vertices().iter().map(|v| format!("v{}", v.0)));
        header.extend(["S".to_string(), "norm".to_string()]);
        w.write_record(&header).map_err(|e| Error::Parse(e.to_string()))?;
        for (t, f) in self.history.iter().enumerate() {
            let mut rec = vec![(t as i64 + t0).to_string()];
            rec.extend(f.iter().map(|x| x.render()));
            let sum = f.iter().fold(T::zero(), |a, x| a + x.clone());
            let norm = f.iter().fold(T::zero(), |a, x| a + x.abs());
            rec.push(sum.render());
            rec.push(norm.render());
            w.write_record(&rec).map_err(|e| Error::Parse(e.to_string()))?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Monitors {
    pub sum: Vec<f64>,
    pub norm: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticSolution {
    pub state: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl DynamicSystem<f64> {
    fn residual(&self, f: &[f64]) -> f64 {
        let cf = self.stencil.apply(f);
        (0..f.len()).filter(|p| !self.sources.contains_key(p)).map(|p| (cf[p] + self.h_at(0, p) - f[p]).abs()).fold(0.0, f64::max)
    }

    /// Fixed-point iteration f <- C f + h from the current layer, sources
    /// pinned, until the max-norm residual is at most `tol`.
    pub fn solve_elliptic(&self, tol: f64, max_iter: usize) -> Result<EllipticSolution> {
        self.admissibility()?;
        let mut f = self.current().to_vec();
        self.pin(&mut f, 0);
        for it in 0..=max_iter {
            let r = self.residual(&f);
            if r <= tol {
                return Ok(EllipticSolution { state: f, residual: r, iterations: it });
            }
            let mut next = self.stencil.apply(&f);
            for (p, x) in next.iter_mut().enumerate() {
                *x += self.h_at(0, p);
            }
            self.pin(&mut next, 0);
            f = next;
        }
        Err(Error::NoConvergence { iterations: max_iter, residual: self.residual(&f) })
    }

    /// Dense solve of (I - C) f = h on the free points with sources moved
    /// to the right-hand side.
    pub fn solve_elliptic_direct(&self) -> Result<Vec<f64>> {
        let n = self.space.volume();
        if n > 500 {
            return Err(Error::InvalidArgument("direct solve is limited to 500 points".into()));
        }
        let mut f = vec![0.0; n];
        self.pin(&mut f, 0);
        let free: Vec<usize> = (0..n).filter(|p| !self.sources.contains_key(p)).collect();
        let m = free.len();
        let mut a = vec![vec![0.0; m + 1]; m];
        for (r, &p) in free.iter().enumerate() {
            for (c, &k) in free.iter().enumerate() {
                a[r][c] = if p == k { 1.0 } else { 0.0 } - self.stencil.c[p][k];
            }
            a[r][m] = self.h_at(0, p) + self.sources.keys().map(|&s| self.stencil.c[p][s] * f[s]).sum::<f64>();
        }
        for col in 0..m {
            let piv = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).expect("rows left");
            if a[piv][col].abs() < 1e-12 {
                return Err(Error::InvalidArgument("the elliptic system is singular".into()));
            }
            a.swap(col, piv);
            for r in 0..m {
                if r != col {
                    let q = a[r][col] / a[col][col];
                    if q != 0.0 {
                        for c in col..=m {
                            a[r][c] -= q * a[col][c];
                        }
                    }
                }
            }
        }
        for (r, &p) in free.iter().enumerate() {
            f[p] = a[r][m] / a[r][r];
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Nondegeneracy {
    /// Entries are nonnegative inside the parts and nonpositive across
    /// them, and absolute column (or row) sums are 1.
    Yes { positive: Vec<usize>, negative: Vec<usize>, balance: Balance },
    No { reason: String },
}

/// Looks for a sign vector s with s_p s_k c[p][k] >= 0 for all p, k by
/// two-colouring the graph of nonzero entries, then checks unit absolute
/// column sums (or row sums). Part indices are matrix indices.
pub fn is_nondegenerate<T: Scalar>(a: &Stencil<T>) -> Nondegeneracy {
    let n = a.len();
    let mut sign: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if sign[s].is_some() {
            continue;
        }
        sign[s] = Some(true);
        let mut stack = vec![s];
        while let Some(p) = stack.pop() {
            let sp = sign[p].expect("coloured");
            for k in 0..n {
                for x in [&a.c[p][k], &a.c[k][p]] {
                    if x.is_zero() {
                        continue;
                    }
                    if p == k {
                        if x.is_negative() {
                            return Nondegeneracy::No { reason: format!("negative diagonal entry at {p}") };
                        }
                        continue;
                    }
                    let want = if x.is_positive() { sp } else { !sp };
                    match sign[k] {
                        None => {
                            sign[k] = Some(want);
                            stack.push(k);
                        }
                        Some(have) if have != want => {
                            return Nondegeneracy::No { reason: format!("the signs around {p} and {k} admit no block split") };
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    let one = T::one();
    let balance = if (0..n).all(|k| (0..n).fold(T::zero(), |s, p| s + a.c[p][k].abs()).close(&one)) {
        Balance::Columns
    } else if (0..n).all(|p| a.c[p].iter().fold(T::zero(), |s, x| s + x.abs()).close(&one)) {
        Balance::Rows
    } else {
        return Nondegeneracy::No { reason: "absolute column sums are not all 1".into() };
    };
    let positive = (0..n).filter(|&i| sign[i] == Some(true)).collect();
    let negative = (0..n).filter(|&i| sign[i] == Some(false)).collect();
    Nondegeneracy::Yes { positive, negative, balance }
}

/// The octahedron with points 1..6 and opposite pairs {1,6}, {2,4}, {3,5}.
pub fn labelled_octahedron() -> MolecularSpace {
    let opposite = |a: u32, b: u32| matches!((a.min(b), a.max(b)), (1, 6) | (2, 4) | (3, 5));
    let mut e = Vec::new();
    for a in 1..=6u32 {
        for b in a + 1..=6 {
            if !opposite(a, b) {
                e.push((a, b));
            }
        }
    }
    MolecularSpace::new(1..=6, e).expect("valid")
}

/// Sign-block example on the labelled octahedron: 0.8 on the diagonal,
/// +0.05 inside {1,2,3,4} and inside {5,6}, -0.05 across.
pub fn octahedron_block_matrix() -> Stencil<f64> {
    const B: [[f64; 6]; 6] = [
        [0.8, 0.05, 0.05, 0.05, -0.05, 0.0],
        [0.05, 0.8, 0.05, 0.0, -0.05, -0.05],
        [0.05, 0.05, 0.8, 0.05, 0.0, -0.05],
        [0.05, 0.0, 0.05, 0.8, -0.05, -0.05],
        [-0.05, -0.05, 0.0, -0.05, 0.8, 0.05],
        [0.0, -0.05, -0.05, -0.05, 0.05, 0.8],
    ];
    Stencil { c: B.iter().map(|r| r.to_vec()).collect() }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficients {
    Uniform { default_self: f64, default_neighbor: f64 },
    /// `[p, k, c]` triplets over point ids; unlisted entries are 0.
    Explicit { triplets: Vec<(u32, u32, f64)> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Constant(f64),
    Table(Vec<f64>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SourceSpec {
    pub vertex: u32,
    pub value: ScheduleSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LayerSpec {
    Dense(Vec<f64>),
    /// Point id to value; the rest are 0.
    Sparse(BTreeMap<String, f64>),
}

/// JSON configuration of a run. `space` is resolved by the caller.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PdeConfig {
    pub space: String,
    pub kind: Kind,
    pub coefficients: Coefficients,
    /// One layer (two for hyperbolic: f^{-1} then f^0).
    pub initial: Vec<LayerSpec>,
    #[serde(default)]
    pub sources: Vec<SourceSpec>,
    #[serde(default)]
    pub sinks: Vec<u32>,
    /// Constant inhomogeneous term keyed by point id.
    #[serde(default)]
    pub h: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    pub steps: usize,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
}

impl PdeConfig {
    fn vector<T: Scalar>(g: &MolecularSpace, sparse: &BTreeMap<String, f64>) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); g.volume()];
        for (k, &x) in sparse {
            let id: u32 = k.trim().parse().map_err(|_| Error::Parse(format!("point id {k:?}")))?;
            let i = g.index_of(VertexId(id)).ok_or(Error::VertexNotFound(VertexId(id)))?;
            out[i] = T::from_f64(x)?;
        }
        Ok(out)
    }

    pub fn build<T: Scalar>(&self, g: &MolecularSpace) -> Result<DynamicSystem<T>> {
        let idx = |v: u32| g.index_of(VertexId(v)).ok_or(Error::VertexNotFound(VertexId(v)));
        let stencil = match &self.coefficients {
            Coefficients::Uniform { default_self, default_neighbor } => {
                Stencil::uniform(g, T::from_f64(*default_self)?, T::from_f64(*default_neighbor)?)
            }
            Coefficients::Explicit { triplets } => {
                let mut s = Stencil::zeros(g.volume());
                for &(p, k, c) in triplets {
                    s.c[idx(p)?][idx(k)?] = T::from_f64(c)?;
                }
                s
            }
        };
        let mut stencil = stencil;
        for src in &self.sources {
            let p = idx(src.vertex)?;
            stencil.c[p].iter_mut().for_each(|x| *x = T::zero());
        }
        for &v in &self.sinks {
            let k = idx(v)?;
            for p in 0..g.volume() {
                if p != k {
                    stencil.c[p][k] = T::zero();
                }
            }
        }
        let initial = self
            .initial
            .iter()
            .map(|l| match l {
                LayerSpec::Dense(v) => v.iter().map(|&x| T::from_f64(x)).collect::<Result<Vec<T>>>(),
                LayerSpec::Sparse(m) => Self::vector(g, m),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sys = DynamicSystem::new(g.clone(), stencil, self.kind, initial)?;
        for src in &self.sources {
            let sched = match &src.value {
                ScheduleSpec::Constant(x) => Schedule::constant(T::from_f64(*x)?),
                ScheduleSpec::Table(v) => Schedule(v.iter().map(|&x| T::from_f64(x)).collect::<Result<_>>()?),
            };
            sys = sys.with_source(VertexId(src.vertex), sched)?;
        }
        for &v in &self.sinks {
            sys = sys.with_sink(VertexId(v))?;
        }
        if let Some(h) = &self.h {
            sys.h = Some(vec![Self::vector(g, h)?]);
        }
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{cycle, path};
    use num_traits::One;

    fn heat() -> DynamicSystem<f64> {
        let g = labelled_octahedron();
        let s = Stencil::uniform(&g, 0.7, 0.075);
        DynamicSystem::new(g, s, Kind::Parabolic, vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]]).unwrap()
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("0.075").unwrap(), BigRational::new(3.into(), 40.into()));
        assert_eq!(parse_decimal("-1e-2").unwrap(), BigRational::new((-1).into(), 100.into()));
        assert_eq!(parse_decimal("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_decimal("x").is_err());
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn heat_on_octahedron() {
        let mut sys = heat();
        assert_eq!(sys.admissibility(), Ok(Balance::Columns));
        let m = sys.run(1000).unwrap();
        assert!(m.sum.iter().all(|s| (s - 1.0).abs() < 1e-12));
        assert!(sys.current().iter().all(|x| (x - 1.0 / 6.0).abs() < 1e-9));
    }

    #[test]
    fn identity_and_errors() {
        let g = cycle(5);
        let mut id = DynamicSystem::new(g.clone(), Stencil::uniform(&g, 1.0, 0.0), Kind::Parabolic, vec![vec![1.0, 2.0, 3.0, 4.0, 5.0]]).unwrap();
        id.run(3).unwrap();
        assert_eq!(id.current(), &[1.0, 2.0, 3.0, 4.0, 5.0]);
        let mut bad = DynamicSystem::new(g.clone(), Stencil::uniform(&g, 0.5, 0.5), Kind::Parabolic, vec![vec![0.0; 5]]).unwrap();
        assert!(matches!(bad.step(), Err(Error::InvalidStencil(_))));
        let mut s = Stencil::uniform(&g, 0.5, 0.25);
        s.c[0][2] = 0.1;
        assert!(matches!(DynamicSystem::new(g.clone(), s, Kind::Parabolic, vec![vec![0.0; 5]]), Err(Error::InvalidStencil(_))));
        let mut hyp = DynamicSystem::new(g.clone(), Stencil::uniform(&g, 0.5, 0.25), Kind::Hyperbolic, vec![vec![0.0; 5]]).unwrap();
        assert_eq!(hyp.step().unwrap_err(), Error::NeedsTwoLayers);
    }

    #[test]
    fn boundary_problem() {
        let g = labelled_octahedron();
        let mut s = Stencil::uniform(&g, 0.7, 0.075);
        s.c[0].iter_mut().for_each(|x| *x = 0.0);
        let mut sys = DynamicSystem::new(g, s, Kind::Parabolic, vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
            .unwrap()
            .with_source(VertexId(1), Schedule::constant(1.0))
            .unwrap();
        assert_eq!(sys.admissibility(), Ok(Balance::Rows));
        sys.run(2000).unwrap();
        let f6: Vec<f64> = sys.history.iter().map(|f| f[5]).collect();
        assert!(f6.windows(2).all(|w| w[1] >= w[0]));
        assert!((f6.last().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn wave_on_25_cycle() {
        let g = cycle(25);
        let mut f = vec![0.0; 25];
        f[0] = 1.0;
        let mut sys = DynamicSystem::new(g.clone(), Stencil::uniform(&g, 0.8, 0.1), Kind::Hyperbolic, vec![f.clone(), f]).unwrap();
        sys.run(20).unwrap();
        // layers are t = -1, 0, 1, ...
        let first = sys.history.iter().position(|f| f[11] != 0.0).unwrap() as i64 - 1;
        assert_eq!(first, 11);
        let s = sys.monitors().sum;
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn wave_sums_are_arithmetic_in_rationals() {
        let g = cycle(7);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let st = Stencil::uniform(&g, q(1, 2), q(1, 4));
        let f0: Vec<BigRational> = (0..7).map(|i| q(i, 3)).collect();
        let f1: Vec<BigRational> = (0..7).map(|i| q(i * i, 5)).collect();
        let mut sys = DynamicSystem::new(g, st, Kind::Hyperbolic, vec![f0, f1]).unwrap();
        sys.run(30).unwrap();
        let s = sys.sums();
        let d = s[1].clone() - s[0].clone();
        assert!(!d.is_zero());
        assert!(s.windows(2).all(|w| w[1].clone() - w[0].clone() == d));
    }

    #[test]
    fn elliptic() {
        let g = labelled_octahedron();
        let mut s = Stencil::uniform(&g, 0.7, 0.075);
        s.c[0].iter_mut().for_each(|x| *x = 0.0);
        let sys = DynamicSystem::new(g, s, Kind::Elliptic, vec![vec![0.0; 6]])
            .unwrap()
            .with_source(VertexId(1), Schedule::constant(1.0))
            .unwrap();
        let it = sys.solve_elliptic(1e-12, 10_000).unwrap();
        assert!(it.state.iter().all(|x| (x - 1.0).abs() < 1e-9));
        let d = sys.solve_elliptic_direct().unwrap();
        assert!(d.iter().all(|x| (x - 1.0).abs() < 1e-9));

        let p = path(5);
        let mut s = Stencil::uniform(&p, 0.5, 0.25);
        s.c[0].iter_mut().for_each(|x| *x = 0.0);
        s.c[4].iter_mut().for_each(|x| *x = 0.0);
        let ramp = DynamicSystem::new(p, s, Kind::Elliptic, vec![vec![0.0; 5]])
            .unwrap()
            .with_source(VertexId(0), Schedule::constant(0.0))
            .unwrap()
            .with_source(VertexId(4), Schedule::constant(1.0))
            .unwrap();
        let it = ramp.solve_elliptic(1e-12, 100_000).unwrap();
        for (x, want) in it.state.iter().zip([0.0, 0.25, 0.5, 0.75, 1.0]) {
            assert!((x - want).abs() < 1e-9);
        }
        let c = cycle(5);
        let flat = DynamicSystem::new(c.clone(), Stencil::uniform(&c, 0.6, 0.2), Kind::Elliptic, vec![vec![0.3; 5]]).unwrap();
        assert_eq!(flat.solve_elliptic(1e-12, 10).unwrap().state, vec![0.3; 5]);
    }

    #[test]
    fn nondegenerate_block_matrix() {
        let b = octahedron_block_matrix();
        match is_nondegenerate(&b) {
            Nondegeneracy::Yes { positive, negative, .. } => {
                assert_eq!(positive, vec![0, 1, 2, 3]);
                assert_eq!(negative, vec![4, 5]);
            }
            n => panic!("{n:?}"),
        }
        let g = labelled_octahedron();
        let mut sys = DynamicSystem::new(g, b, Kind::Parabolic, vec![vec![0.3, 0.1, 0.2, 0.05, -0.25, -0.1]]).unwrap();
        assert!(sys.admissibility().is_err());
        for _ in 0..200 {
            let next = sys.stencil.apply(sys.current());
            sys.history.push(next);
        }
        let n = sys.monitors().norm;
        assert!(n.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!(matches!(is_nondegenerate(&heat().stencil), Nondegeneracy::Yes { .. }));
    }

    /// Exhaustive search over all sign vectors.
    fn sign_split_exists(c: &[Vec<f64>]) -> bool {
        let n = c.len();
        (0..1u32 << n).any(|m| {
            let s = |i: usize| if m >> i & 1 == 1 { -1.0 } else { 1.0 };
            (0..n).all(|p| (0..n).all(|k| s(p) * s(k) * c[p][k] >= 0.0))
        })
    }

    proptest::proptest! {
        #[test]
        fn colouring_agrees_with_exhaustive_split(
            n in 2usize..7,
            signs in proptest::collection::vec(proptest::bool::ANY, 6),
            cells in proptest::collection::vec((0u8..4, 0.1f64..1.0), 36),
        ) {
            // entries follow a hidden sign vector, with occasional flips
            let mut c = vec![vec![0.0; n]; n];
            for p in 0..n {
                for k in 0..n {
                    let (kind, x) = cells[p * 6 + k];
                    let aligned = if signs[p] == signs[k] || p == k { x } else { -x };
                    c[p][k] = match kind { 0 => 0.0, 1 => -aligned, _ => aligned };
                }
            }
            for k in 0..n {
                let col: f64 = (0..n).map(|p| c[p][k].abs()).sum();
                if col == 0.0 {
                    c[k][k] = 1.0;
                } else {
                    (0..n).for_each(|p| c[p][k] /= col);
                }
            }
            let verdict = is_nondegenerate(&Stencil::from_rows(c.clone()).unwrap());
            proptest::prop_assert_eq!(matches!(verdict, Nondegeneracy::Yes { .. }), sign_split_exists(&c));
            if let Nondegeneracy::Yes { negative, .. } = verdict {
                let s = |i: usize| if negative.contains(&i) { -1.0 } else { 1.0 };
                proptest::prop_assert!((0..n).all(|p| (0..n).all(|k| s(p) * s(k) * c[p][k] >= 0.0)));
            }
        }
    }

    #[test]
    fn config_round_trip() {
        let cfg: PdeConfig = serde_json::from_str(
            r#"{"space":"octahedron","kind":"parabolic","coefficients":{"default_self":0.7,"default_neighbor":0.075},
                "initial":[{"1":1.0}],"steps":10}"#,
        )
        .unwrap();
        let mut sys: DynamicSystem<BigRational> = cfg.build(&labelled_octahedron()).unwrap();
        sys.run(cfg.steps).unwrap();
        assert!(sys.sums().iter().all(|s| s.is_one()));
        let csv = heat().to_csv(0).unwrap();
        assert!(csv.starts_with("t,v1,v2,v3,v4,v5,v6,S,norm"));
    }
}
