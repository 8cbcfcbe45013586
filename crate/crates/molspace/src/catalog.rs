//! Named model spaces with their expected invariants.
//!
//! Names take optional integer arguments: `circle(6)`, `circle:6`,
//! `tree(2,3)`.

use serde::Serialize;

use crate::budget::Budget;
use crate::construct::{cycle, glue_spaces, join, minimal_sphere, nob_normalize, partite, path};
use crate::error::{Error, Result};
use crate::graph::{MolecularSpace, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Minimality {
    Yes,
    No,
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub euler: i64,
    pub betti: Vec<u64>,
    /// Torsion coefficients of H_d, indexed by d; missing means none.
    pub torsion: Vec<Vec<u64>>,
    /// Space dimension.
    pub dimension: usize,
    /// Normal closed of this dimension.
    pub normal_closed: Option<usize>,
    pub minimal: Minimality,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub space: MolecularSpace,
    pub manifest: Manifest,
}

pub const NAMES: &[&str] = &[
    "point",
    "S0",
    "circle(k)",
    "path(k)",
    "sphere2_min",
    "sphere2_12",
    "sphere3_min",
    "sphere_min(n)",
    "torus16",
    "p2_11",
    "p2_alt",
    "klein16",
    "tree(r,depth)",
    "wheel(n)",
    "bouquet2",
    "bouquet3a",
    "bouquet3b",
];

/// Entries that take no arguments, plus small instances of the others.
pub fn fixtures() -> Vec<CatalogEntry> {
    [
        "point", "S0", "circle(4)", "circle(6)", "path(3)", "sphere2_min", "sphere2_12", "sphere3_min", "sphere_min(4)",
        "torus16", "p2_11", "p2_alt", "klein16", "tree(2,2)", "wheel(5)", "bouquet2", "bouquet3a", "bouquet3b",
    ]
    .iter()
    .map(|n| catalog(n).expect("fixture name"))
    .collect()
}

fn parse(name: &str) -> Result<(String, Vec<usize>)> {
    let bad = || Error::UnknownCatalog(name.to_string());
    let (base, args) = if let Some(open) = name.find('(') {
        let inner = name[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        (&name[..open], inner)
    } else if let Some((b, a)) = name.split_once(':') {
        (b, a)
    } else {
        (name, "")
    };
    let args = if args.trim().is_empty() {
        Vec::new()
    } else {
        args.split(',').map(|a| a.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
    };
    Ok((base.to_string(), args))
}

fn m(euler: i64, betti: &[u64], dimension: usize, normal_closed: Option<usize>, minimal: Minimality, provenance: &str) -> Manifest {
    Manifest { euler, betti: betti.to_vec(), torsion: Vec::new(), dimension, normal_closed, minimal, provenance: provenance.into() }
}

pub fn catalog(name: &str) -> Result<CatalogEntry> {
    use Minimality::*;
    let (base, args) = parse(name)?;
    let bad = || Error::UnknownCatalog(name.to_string());
    let arg = |i: usize| args.get(i).copied().ok_or_else(bad);
    let nargs = |n: usize| if args.len() == n { Ok(()) } else { Err(bad()) };
    let (space, manifest) = match base.as_str() {
        "point" => {
            nargs(0)?;
            (MolecularSpace::isolated(1), m(1, &[1], 0, None, Yes, "single vertex"))
        }
        "S0" => {
            nargs(0)?;
            (MolecularSpace::isolated(2), m(2, &[2], 0, Some(0), Yes, "two isolated vertices"))
        }
        "circle" => {
            nargs(1)?;
            let k = arg(0)?;
            if k < 4 {
                return Err(Error::InvalidArgument("a circle needs at least 4 points".into()));
            }
            (cycle(k), m(0, &[1, 1], 1, Some(1), if k == 4 { Yes } else { No }, "cycle graph"))
        }
        "path" => {
            nargs(1)?;
            let k = arg(0)?;
            if k == 0 {
                return Err(Error::InvalidArgument("a path needs at least one point".into()));
            }
            let dim = if k >= 3 { 1 } else { 0 };
            (path(k), m(1, &[1], dim, None, if k == 1 { Yes } else { No }, "path graph"))
        }
        "sphere2_min" => {
            nargs(0)?;
            (minimal_sphere(2), m(2, &[1, 0, 1], 2, Some(2), Yes, "octahedron K(2,2,2)"))
        }
        "sphere2_12" => {
            nargs(0)?;
            (icosahedron(), m(2, &[1, 0, 1], 2, Some(2), No, "icosahedron: 12 points, every rim a 5-cycle"))
        }
        "sphere3_min" => {
            nargs(0)?;
            (minimal_sphere(3), m(0, &[1, 0, 0, 1], 3, Some(3), Yes, "K(2,2,2,2)"))
        }
        "sphere_min" => {
            nargs(1)?;
            let n = arg(0)?;
            let mut betti = vec![0; n + 1];
            betti[0] += 1;
            betti[n] += 1;
            let e = if n % 2 == 0 { 2 } else { 0 };
            (minimal_sphere(n), m(e, &betti, n, Some(n), Yes, "K(2,...,2) with n+1 parts"))
        }
        "torus16" => {
            nargs(0)?;
            (torus16(), m(0, &[1, 2, 1], 2, Some(2), Yes, "strong product of two 4-cycles with ascending diagonals kept"))
        }
        "p2_11" => {
            nargs(0)?;
            let mut man = m(1, &[1, 0, 0], 2, Some(2), Yes, P2_11_PROVENANCE);
            man.torsion = vec![vec![], vec![2]];
            (p2_11(), man)
        }
        "p2_alt" => {
            nargs(0)?;
            let mut man = m(1, &[1, 0, 0], 2, Some(2), No, "barycentric subdivision of the 6-point projective plane (31 points)");
            man.torsion = vec![vec![], vec![2]];
            (p2_alt(), man)
        }
        "klein16" => {
            nargs(0)?;
            let mut man = m(
                0,
                &[1, 1, 0],
                2,
                Some(2),
                Unverified,
                "two 12-point annuli (4-cycle times 3-path, normalized) glued along both boundary circles, one of them reflected",
            );
            man.torsion = vec![vec![], vec![2]];
            (klein16(), man)
        }
        "tree" => {
            nargs(2)?;
            let (r, depth) = (arg(0)?, arg(1)?);
            let t = tree(r, depth);
            let dim = if t.volume() >= 3 { 1 } else { 0 };
            (t, m(1, &[1], dim, None, if depth == 0 || r == 0 { Yes } else { No }, "rooted tree, r children per node"))
        }
        "wheel" => {
            nargs(1)?;
            let n = arg(0)?;
            if n < 4 {
                return Err(Error::InvalidArgument("a wheel needs a rim of at least 4 points".into()));
            }
            (join(&MolecularSpace::isolated(1), &cycle(n)), m(1, &[1], 2, None, No, "cone over an n-cycle"))
        }
        "bouquet2" => {
            nargs(0)?;
            (partite(&[2, 3]), m(-1, &[1, 2], 1, None, Yes, "K(2,3)"))
        }
        "bouquet3a" => {
            nargs(0)?;
            (partite(&[2, 4]), m(-2, &[1, 3], 1, None, Yes, "K(2,4)"))
        }
        "bouquet3b" => {
            nargs(0)?;
            let g = partite(&[3, 3]).delete_edge(VertexId(0), VertexId(3))?;
            (g, m(-2, &[1, 3], 1, None, Yes, "K(3,3) minus one edge"))
        }
        _ => return Err(bad()),
    };
    Ok(CatalogEntry { name: name.to_string(), space, manifest })
}

pub fn icosahedron() -> MolecularSpace {
    let mut e = Vec::new();
    for i in 0..5 {
        let (u, un) = (1 + i, 1 + (i + 1) % 5);
        let (l, ln) = (6 + i, 6 + (i + 1) % 5);
        e.extend([(0, u), (u, un), (u, l), (u, ln), (l, ln), (l, 11)]);
    }
    MolecularSpace::from_edges(12, &e)
}

pub fn torus16() -> MolecularSpace {
    nob_normalize(&cycle(4), &cycle(4), &Budget::default()).expect("4-cycle squares normalize").space
}

/// Normalized annulus C4 x P3: ring r (0..3) occupies ids 3*j + r for
/// j in the cycle.
fn annulus() -> MolecularSpace {
    nob_normalize(&cycle(4), &path(3), &Budget::default()).expect("annulus normalizes").space
}

pub fn klein16() -> MolecularSpace {
    let a = annulus();
    let ring = |j: usize, r: usize| VertexId((3 * j + r) as u32);
    // outer ring 2 of `a` meets ring 0 of the copy straight; ring 0 of `a`
    // meets ring 2 of the copy through the reflection j -> -j.
    let mut iso = Vec::new();
    for j in 0..4 {
        iso.push((ring(j, 2), ring(j, 0)));
        iso.push((ring(j, 0), ring((4 - j) % 4, 2)));
    }
    glue_spaces(&a, &a, &iso).expect("boundary circles match").normalized()
}

pub fn tree(r: usize, depth: usize) -> MolecularSpace {
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut n = 1;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &p in &level {
            for _ in 0..r {
                edges.push((p, n));
                next.push(n);
                n += 1;
            }
        }
        level = next;
    }
    MolecularSpace::from_edges(n, &edges)
}

const P2_11_PROVENANCE: &str = "barycentric subdivision of the 6-point projective plane, reduced by point-to-edge swaps to 11 points";

/// Flag projective plane on 11 points.
pub fn p2_11() -> MolecularSpace {
    MolecularSpace::from_edges(11, P2_11_EDGES)
}

const P2_11_EDGES: &[(usize, usize)] = &[
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 5), (1, 6), (1, 8), (1, 10),
    (2, 3), (2, 6), (2, 7), (2, 9), (3, 4), (3, 7), (3, 8), (3, 10), (4, 5), (4, 6),
    (4, 8), (4, 9), (5, 7), (5, 9), (5, 10), (6, 8), (6, 9), (7, 9), (7, 10), (8, 10),
];

pub fn p2_alt() -> MolecularSpace {
    barycentric_p2()
}

/// Barycentric subdivision of the 6-point projective plane: one point per
/// face, adjacency by inclusion.
pub fn barycentric_p2() -> MolecularSpace {
    const TRI: [[usize; 3]; 10] =
        [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5], [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5]];
    let mut faces: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
    for t in TRI {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let e = vec![a.min(b), a.max(b)];
            if !faces.contains(&e) {
                faces.push(e);
            }
        }
    }
    faces.extend(TRI.iter().map(|t| t.to_vec()));
    let sub = |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|x| b.contains(x));
    MolecularSpace::from_adjacency_fn(faces.len(), |i, j| sub(&faces[i], &faces[j]) || sub(&faces[j], &faces[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dim::is_normal_closed;
    use crate::euler::euler;
    use crate::homology::homology;
    use crate::transform::is_minimal;

    fn trim(b: &[u64]) -> Vec<u64> {
        let mut b = b.to_vec();
        while b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    #[test]
    fn manifests_match_computed_invariants() {
        let budget = Budget::default();
        for e in fixtures() {
            let g = &e.space;
            let man = &e.manifest;
            assert_eq!(euler(g).unwrap(), man.euler, "{} euler", e.name);
            let h = homology(g, None).unwrap();
            assert_eq!(h.betti_trimmed(), trim(&man.betti), "{} betti", e.name);
            for (d, t) in man.torsion.iter().enumerate() {
                assert_eq!(&h.torsion(d), t, "{} torsion H{d}", e.name);
            }
            assert_eq!(is_normal_closed(g).dimension(), man.normal_closed, "{} normal", e.name);
            match man.minimal {
                Minimality::Yes => assert!(is_minimal(g, &budget), "{} should be minimal", e.name),
                Minimality::No => assert!(!is_minimal(g, &budget), "{} should not be minimal", e.name),
                Minimality::Unverified => {}
            }
        }
    }

    #[test]
    fn names() {
        assert_eq!(catalog("circle:7").unwrap().space.volume(), 7);
        assert_eq!(catalog("tree(2,3)").unwrap().space.volume(), 15);
        assert!(matches!(catalog("circle(3)"), Err(Error::InvalidArgument(_))));
        assert!(matches!(catalog("nope"), Err(Error::UnknownCatalog(_))));
        assert!(matches!(catalog("point(1)"), Err(Error::UnknownCatalog(_))));
    }
}
