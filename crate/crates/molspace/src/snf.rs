//! Invariant factors of sparse integer matrices.
//!
//! Unit pivots are eliminated first on the sparse representation (boundary
//! matrices are mostly ±1 and this removes nearly everything). The remainder
//! goes through a dense Smith normal form over big integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

/// Sparse matrix as rows of (column, value) maps.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

/// Rank and the invariant factors greater than one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithSummary {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

trait Ring: Clone + Integer + Signed + CheckedMul + CheckedSub + std::fmt::Debug {}
impl<T: Clone + Integer + Signed + CheckedMul + CheckedSub + std::fmt::Debug> Ring for T {}

struct Work<T> {
    rows: Vec<BTreeMap<usize, T>>,
    col_rows: Vec<BTreeMap<usize, ()>>,
    alive_row: Vec<bool>,
}

fn eliminate_units<T: Ring>(m: &SparseMatrix, conv: impl Fn(i64) -> T) -> Option<(usize, Vec<BTreeMap<usize, T>>)> {
    let mut w = Work::<T> {
        rows: vec![BTreeMap::new(); m.rows],
        col_rows: vec![BTreeMap::new(); m.cols],
        alive_row: vec![true; m.rows],
    };
    for &(r, c, v) in &m.entries {
        if v == 0 {
            continue;
        }
        let e = w.rows[r].entry(c).or_insert_with(T::zero);
        *e = e.clone() + conv(v);
        if e.is_zero() {
            w.rows[r].remove(&c);
            w.col_rows[c].remove(&r);
        } else {
            w.col_rows[c].insert(r, ());
        }
    }
    let mut rank = 0;
    let mut progress = true;
    let mut alive_col = vec![true; m.cols];
    while progress {
        progress = false;
        for c in 0..m.cols {
            if !alive_col[c] {
                continue;
            }
            if w.col_rows[c].is_empty() {
                alive_col[c] = false;
                continue;
            }
            // unit entry in the shortest row
            let pivot = w.col_rows[c]
                .keys()
                .copied()
                .filter(|&r| w.rows[r][&c].abs().is_one())
                .min_by_key(|&r| (w.rows[r].len(), r));
            let Some(p) = pivot else { continue };
            let prow = std::mem::take(&mut w.rows[p]);
            let pv = prow[&c].clone();
            let others: Vec<usize> = w.col_rows[c].keys().copied().filter(|&r| r != p).collect();
            for r in others {
                // row_r -= (a / pv) * row_p, exact since pv = ±1
                let a = w.rows[r][&c].clone();
                let f = a * pv.clone();
                for (&cc, pval) in &prow {
                    let cur = w.rows[r].get(&cc).cloned().unwrap_or_else(T::zero);
                    let prod = f.checked_mul(pval)?;
                    let nv = cur.checked_sub(&prod)?;
                    if nv.is_zero() {
                        w.rows[r].remove(&cc);
                        w.col_rows[cc].remove(&r);
                    } else {
                        w.rows[r].insert(cc, nv);
                        w.col_rows[cc].insert(r, ());
                    }
                }
            }
            for &cc in prow.keys() {
                w.col_rows[cc].remove(&p);
            }
            w.alive_row[p] = false;
            alive_col[c] = false;
            rank += 1;
            progress = true;
        }
    }
    let alive = w.alive_row;
    let rest: Vec<BTreeMap<usize, T>> =
        w.rows.into_iter().enumerate().filter(|(r, row)| alive[*r] && !row.is_empty()).map(|(_, row)| row).collect();
    Some((rank, rest))
}

/// Dense Smith normal form diagonal (nonzero entries, positive).
pub fn dense_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            let p = a[t][t].clone();
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    for j in t..cols {
                        let v = &a[i][j] - &q * &a[t][j];
                        a[i][j] = v;
                    }
                    if !a[i][t].is_zero() {
                        done = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    for i in t..rows {
                        let v = &a[i][j] - &q * &a[i][t];
                        a[i][j] = v;
                    }
                    if !a[t][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                // divisibility of the trailing block
                let mut bad = None;
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[i][j] % &p).is_zero() {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let v = &a[t][j] + &a[i][j];
                            a[t][j] = v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

pub fn smith_summary(m: &SparseMatrix) -> SmithSummary {
    let (rank, rest) = match eliminate_units::<i64>(m, |v| v) {
        Some((r, rest)) => (r, rest.into_iter().map(|row| row.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect()).collect()),
        None => eliminate_units::<BigInt>(m, BigInt::from).expect("big integers never overflow"),
    };
    let rest: Vec<BTreeMap<usize, BigInt>> = rest;
    if rest.is_empty() {
        return SmithSummary { rank, torsion: Vec::new() };
    }
    let mut cols: Vec<usize> = rest.iter().flat_map(|r| r.keys().copied()).collect();
    cols.sort_unstable();
    cols.dedup();
    let dense: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|r| cols.iter().map(|c| r.get(c).cloned().unwrap_or_else(BigInt::zero)).collect())
        .collect();
    let diag = dense_invariant_factors(dense);
    let torsion: Vec<BigInt> = diag.iter().filter(|d| !d.is_one()).cloned().collect();
    SmithSummary { rank: rank + diag.len(), torsion }
}

/// Torsion coefficients as machine integers (saturating for display).
pub fn torsion_u64(s: &SmithSummary) -> Vec<u64> {
    let mut t: Vec<u64> = s.torsion.iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect();
    t.sort_unstable();
    t
}
