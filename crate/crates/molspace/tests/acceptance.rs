//! One line per acceptance criterion. Exits non-zero when a criterion fails
//! that is not listed in KNOWN_RED, or when a listed one starts passing.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{glue_targets, random_graph, random_step, rng};
use molspace::budget::Budget;
use molspace::canon::is_isomorphic;
use molspace::catalog::{catalog, fixtures};
use molspace::charfn::{apply_basic, base_copies, basic_moves, coefficients_from_base, CharFunction};
use molspace::construct::{cycle, minimal_sphere, nob_normalize, partite, strong_product, suspension};
use molspace::digitize::{cover_is_complete, digitize, multires_digitize, nerve, reduce_blowup, Cover, ImplicitRegion};
use molspace::dim::{is_normal_closed, is_sphere};
use molspace::euler::{euler, euler_local, f_vector, tiling_solutions, TileCount, TilingQuery};
use molspace::family::Tri;
use molspace::homology::homology;
use molspace::lattice::{
    clique_coords, coords_from_space, diagonal, kirpicity_of_clique, lattice_window, space_from_coords, LatticeKind,
    LatticeModel,
};
use molspace::pde::{
    is_nondegenerate, labelled_octahedron, octahedron_block_matrix, parse_decimal, DynamicSystem, Kind, Nondegeneracy,
    Schedule, Stencil,
};
use molspace::transform::{apply, is_contractible, is_minimal, minimize, Move};
use molspace::{MolecularSpace, VertexId};
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;

/// Criteria expected to fail; see the project notes for the reason.
/// The K(2,3,3) fixture expects -3, while direct clique counting (8 - 21 + 18)
/// and the product formula both give 5.
const KNOWN_RED: &[u32] = &[1];

type Outcome = Result<String, String>;
type HomologyCase = (&'static str, MolecularSpace, Vec<u64>, Vec<Vec<u64>>);
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Triangle abc with the pendant edge cd.
fn fig_g() -> MolecularSpace {
    MolecularSpace::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)])
}

/// A tetrahedron 0123 with triangles 014 and 235 attached, plus the edge 46.
fn fig_h() -> MolecularSpace {
    let mut e = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    e.extend([(0, 4), (1, 4), (2, 5), (3, 5), (4, 6)]);
    MolecularSpace::from_edges(7, &e)
}

fn euler_fixtures() -> Outcome {
    let mut bad = Vec::new();
    let mut check = |name: &str, g: &MolecularSpace, want: i64| {
        let got = euler(g).unwrap();
        if got != want {
            bad.push(format!("{name}: got {got}, expected {want}"));
        }
    };
    let fg = f_vector(&fig_g()).unwrap().counts;
    let fh = f_vector(&fig_h()).unwrap().counts;
    check("G", &fig_g(), 1);
    check("H", &fig_h(), 1);
    check("K(2,3,3)", &partite(&[2, 3, 3]), -3);
    check("octahedron", &minimal_sphere(2), 2);
    for (name, want) in [("torus16", 0), ("p2_11", 1), ("klein16", 0)] {
        check(name, &catalog(name).unwrap().space, want);
    }
    for n in 0..=5 {
        check(&format!("S{n}_min"), &minimal_sphere(n), if n % 2 == 0 { 2 } else { 0 });
    }
    if fg != [4, 4, 1] || fh != [7, 11, 6, 1] {
        bad.push(format!("f-vectors {fg:?} {fh:?}"));
    }
    if bad.is_empty() {
        Ok("all fixtures exact".into())
    } else {
        Err(bad.join("; "))
    }
}

fn local_formula() -> Outcome {
    let mut r = rng(2);
    for k in 0..200 {
        let g = random_graph(&mut r, 15);
        let (a, b) = (euler_local(&g).unwrap(), euler(&g).unwrap());
        ensure(a == b, format!("random graph {k}: local {a}, global {b}"))?;
    }
    for e in fixtures() {
        ensure(euler_local(&e.space).unwrap() == euler(&e.space).unwrap(), e.name.clone())?;
    }
    Ok("200 random graphs and the catalog".into())
}

fn homology_fixtures() -> Outcome {
    let cases: Vec<HomologyCase> = vec![
        ("point", MolecularSpace::isolated(1), vec![1], vec![]),
        ("C4", cycle(4), vec![1, 1], vec![]),
        ("octahedron", minimal_sphere(2), vec![1, 0, 1], vec![]),
        ("K(2,2,2,2)", minimal_sphere(3), vec![1, 0, 0, 1], vec![]),
        ("torus16", catalog("torus16").unwrap().space, vec![1, 2, 1], vec![]),
        ("p2_11", catalog("p2_11").unwrap().space, vec![1], vec![vec![], vec![2]]),
        ("klein16", catalog("klein16").unwrap().space, vec![1, 1], vec![vec![], vec![2]]),
    ];
    for (name, g, betti, torsion) in cases {
        let h = homology(&g, None).unwrap();
        ensure(h.betti_trimmed() == betti, format!("{name}: betti {:?}", h.betti_trimmed()))?;
        for d in 0..h.betti().len() {
            let want = torsion.get(d).cloned().unwrap_or_default();
            ensure(h.torsion(d) == want, format!("{name}: torsion of H{d} is {:?}", h.torsion(d)))?;
        }
    }
    Ok("7 fixtures".into())
}

fn move_invariance() -> Outcome {
    let budget = Budget::default();
    let mut moves = 0;
    let mut seed = 0;
    while moves < 1000 {
        seed += 1;
        let mut r = rng(1000 + seed);
        let mut g = random_graph(&mut r, 12);
        let (e0, h0) = (euler(&g).unwrap(), homology(&g, None).unwrap());
        for _ in 0..12 {
            let Some((step, next)) = random_step(&mut r, &g, 12, &budget) else { break };
            ensure(euler(&next).unwrap() == e0, format!("euler changed by {:?}", step.mv))?;
            ensure(homology(&next, None).unwrap().same_as(&h0), format!("homology changed by {:?}", step.mv))?;
            g = next;
            moves += 1;
        }
    }
    Ok(format!("{moves} moves over {seed} graphs"))
}

fn minimization() -> Outcome {
    let budget = Budget::default();
    let wedge = {
        // two 6-cycles sharing vertex 0
        let mut e: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.extend([(0, 6), (6, 7), (7, 8), (8, 9), (9, 10), (10, 0)]);
        MolecularSpace::from_edges(11, &e)
    };
    let cases = [
        ("C6", cycle(6), cycle(4)),
        ("sphere2_12", catalog("sphere2_12").unwrap().space, minimal_sphere(2)),
        ("bouquet2", catalog("bouquet2").unwrap().space, partite(&[2, 3])),
        ("two 6-cycles on a point", wedge, partite(&[2, 3])),
    ];
    for (name, g, want) in cases {
        let m = minimize(&g, &budget);
        ensure(!m.budget_exceeded, format!("{name}: budget"))?;
        ensure(is_isomorphic(&m.space, &want) == Some(true), format!("{name}: minimized to {:?}", m.space))?;
        ensure(is_minimal(&m.space, &budget), format!("{name}: result not minimal"))?;
        let mut replay = g.clone();
        for s in &m.trace {
            replay = apply(&replay, &s.mv, &budget).map_err(|e| format!("{name}: replay {e}"))?;
        }
        ensure(replay == m.space, format!("{name}: trace does not replay"))?;
    }
    Ok("C6, 12-point sphere, bouquets".into())
}

fn spheres() -> Outcome {
    let budget = Budget::default();
    for n in 0..=4 {
        let s = minimal_sphere(n);
        ensure(s.volume() == 2 * n + 2, format!("|S{n}_min| = {}", s.volume()))?;
        ensure(is_normal_closed(&s).dimension() == Some(n), format!("S{n}_min not normal closed"))?;
        ensure(is_sphere(&s, &budget).dimension() == Some(n), format!("S{n}_min not recognized as a sphere"))?;
    }
    let mut generated: Vec<MolecularSpace> = fixtures().into_iter().map(|e| e.space).collect();
    generated.extend((4..12).map(cycle));
    generated.extend((4..8).map(|k| suspension(&cycle(k))));
    generated.extend((2..=5).map(diagonal));
    generated.push(nob_normalize(&cycle(4), &cycle(5), &budget).unwrap().space);
    let mut r = rng(6);
    generated.extend((0..100).map(|_| random_graph(&mut r, 12)));
    let mut normal = 0;
    for g in &generated {
        if let Some(n) = is_normal_closed(g).dimension() {
            normal += 1;
            ensure(g.volume() >= 2 * n + 2, format!("normal closed {n}-space with {} points", g.volume()))?;
        }
    }
    Ok(format!("S0..S4 recognized; {normal} normal closed spaces respect the bound"))
}

fn products() -> Outcome {
    let budget = Budget::default();
    let mut r = rng(7);
    for k in 0..20 {
        let (g, h) = (random_graph(&mut r, 6), random_graph(&mut r, 6));
        let p = strong_product(&g, &h);
        let m = h.volume();
        for x in 0..p.volume() {
            let bg = g.ball(g.id(x / m)).unwrap().indices();
            let bh = h.ball(h.id(x % m)).unwrap().indices();
            let mut want: Vec<usize> = bg.iter().flat_map(|&a| bh.iter().map(move |&b| a * m + b)).collect();
            want.sort_unstable();
            ensure(p.ball(p.id(x)).unwrap().indices() == want, format!("product {k}, vertex {x}"))?;
        }
    }
    let nob = nob_normalize(&cycle(4), &cycle(4), &budget).map_err(|e| e.to_string())?;
    ensure(is_normal_closed(&nob.space).dimension() == Some(2), "nob(C4xC4) is not normal 2-dimensional")?;
    ensure(homology(&nob.space, None).unwrap().betti_trimmed() == [1, 2, 1], "nob(C4xC4) homology")?;
    let mut replay = strong_product(&cycle(4), &cycle(4));
    for s in &nob.deletions {
        ensure(matches!(s.mv, Move::DeleteEdge { .. }), "nob step is not an edge deletion")?;
        let lic = replay.induced(&s.license).unwrap().to_space();
        ensure(is_contractible(&lic, &budget).is_contractible(), format!("license of {:?}", s.mv))?;
        replay = apply(&replay, &s.mv, &budget).map_err(|e| e.to_string())?;
    }
    ensure(replay == nob.space, "nob deletions do not replay")?;
    Ok(format!("20 products; {} verified nob deletions", nob.deletions.len()))
}

fn lattices() -> Outcome {
    let rim = |kind, ext: Vec<usize>, p: &[i64]| {
        let m = LatticeModel::new(kind, ext);
        lattice_window(&m).degree(m.index(p).unwrap())
    };
    ensure(rim(LatticeKind::L, vec![3, 3], &[1, 1]) == 8, "L2 rim")?;
    ensure(rim(LatticeKind::R, vec![3, 3], &[1, 1]) == 6, "R2 rim")?;
    ensure(rim(LatticeKind::R, vec![3, 3, 3], &[1, 1, 1]) == 14, "R3 rim")?;
    let mut n2 = LatticeModel::new(LatticeKind::N, vec![3, 3]);
    n2.origin = vec![-1, 0];
    let mixed = lattice_window(&n2).degree(n2.index(&[0, 1]).unwrap());
    ensure(mixed == 4, format!("N2 mixed rim {mixed}"))?;
    let budget = Budget::default();
    for n in 2..=5 {
        let d = diagonal(n);
        ensure(is_sphere(&d, &budget).dimension() == Some(n - 2), format!("D({n}) is not an {}-sphere", n - 2))?;
    }
    let mut r = rng(8);
    for k in 0..100 {
        let g = random_graph(&mut r, 12);
        let back = space_from_coords(&coords_from_space(&g)).map_err(|e| e.to_string())?;
        ensure(back == g, format!("round trip {k}"))?;
    }
    for n in 1..=64usize {
        let w = kirpicity_of_clique(n);
        let want = (n as f64).log2().ceil() as usize;
        ensure(w == want, format!("kir(K({n})) = {w}"))?;
        let m = clique_coords(n);
        ensure(m.width() == w, format!("K({n}) coordinates have width {}", m.width()))?;
        ensure(space_from_coords(&m).unwrap() == MolecularSpace::complete(n), format!("K({n}) coordinates"))?;
        // pairwise distance <= 1 leaves two values per column, so 2^(w-1) rows cannot hold K(n)
        if w > 0 {
            ensure(n > 1 << (w - 1), format!("K({n}) fits in width {}", w - 1))?;
        }
    }
    Ok("rims, D(2..5), 100 round trips, K(1..64)".into())
}

fn covers() -> Outcome {
    let budget = Budget::default();
    let arcs = [(0, 7), (4, 8), (9, 7), (13, 8)];
    let parts: Vec<Vec<usize>> = arcs.iter().map(|&(a, len)| (0..len).map(|k| (a + k) % 18).collect()).collect();
    let c = Cover::from_indices(cycle(18), &parts).map_err(|e| e.to_string())?;
    let rep = cover_is_complete(&c, &budget);
    ensure(rep.complete == Tri::Yes, format!("{rep:?}"))?;
    ensure(is_isomorphic(&nerve(&c), &cycle(4)) == Some(true), "nerve is not C4")?;
    let (rest, steps) = reduce_blowup(&c, &budget);
    ensure(steps.iter().all(|s| matches!(s.mv, Move::DeletePoint { .. })), "non-deletion step")?;
    ensure(is_isomorphic(&rest, &nerve(&c)) == Some(true), "reduced blow-up differs from the nerve")?;
    Ok(format!("complete; {} point deletions", steps.len()))
}

fn digitizer() -> Outcome {
    let budget = Budget::default();
    let t = Instant::now();
    let m = multires_digitize(&ImplicitRegion::circle(1.0), 2.0, 5, &budget).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let at = m.stabilized_at.ok_or("no stabilization")?;
    let last = m.levels.last().unwrap();
    ensure(last.euler == Some(0) && last.betti == Some(vec![1, 1]), format!("{last:?}"))?;
    ensure(secs < 10.0, format!("{secs:.1}s"))?;
    let blk = ImplicitRegion::block(vec![0.1, 0.2], vec![0.9, 0.7]).unwrap();
    for k in 0..5 {
        let d = digitize(&blk, 0.4 / f64::powi(2.0, k)).map_err(|e| e.to_string())?;
        ensure(is_contractible(&d.space, &budget).is_contractible(), format!("box level {} ({} cells)", k + 1, d.space.volume()))?;
    }
    Ok(format!("circle stable from level {at} in {secs:.2}s; box contractible at 5 levels"))
}

fn pde() -> Outcome {
    let g = labelled_octahedron();
    let mut heat = DynamicSystem::new(g.clone(), Stencil::uniform(&g, 0.7, 0.075), Kind::Parabolic, vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
        .map_err(|e| e.to_string())?;
    let mon = heat.run(10_000).map_err(|e| e.to_string())?;
    ensure(mon.sum.iter().all(|s| (s - 1.0).abs() < 1e-12), "heat sum drifts")?;
    ensure(heat.history[1000].iter().all(|x| (x - 1.0 / 6.0).abs() < 1e-9), "heat not uniform by t = 1000")?;

    let mut s = Stencil::uniform(&g, 0.7, 0.075);
    s.c[0].iter_mut().for_each(|x| *x = 0.0);
    let mut bnd = DynamicSystem::new(g.clone(), s, Kind::Parabolic, vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
        .and_then(|d| d.with_source(VertexId(1), Schedule::constant(1.0)))
        .map_err(|e| e.to_string())?;
    bnd.run(2000).map_err(|e| e.to_string())?;
    let f6: Vec<f64> = bnd.history.iter().map(|f| f[5]).collect();
    ensure(f6.windows(2).all(|w| w[1] >= w[0]), "f6 not monotone")?;
    ensure((f6.last().unwrap() - 1.0).abs() < 1e-6, "f6 does not approach 1")?;

    let c25 = cycle(25);
    let mut f = vec![0.0; 25];
    f[0] = 1.0;
    let mut wave = DynamicSystem::new(c25.clone(), Stencil::uniform(&c25, 0.8, 0.1), Kind::Hyperbolic, vec![f.clone(), f])
        .map_err(|e| e.to_string())?;
    wave.run(30).map_err(|e| e.to_string())?;
    // history starts at t = -1
    let first = wave.history.iter().position(|f| f[11].abs() > 0.0).ok_or("never reached")? as i64 - 1;
    ensure(first == 11, format!("first arrival at t = {first}"))?;

    let (a, b) = (parse_decimal("0.7").unwrap(), parse_decimal("0.075").unwrap());
    let st = Stencil::uniform(&g, a, b);
    let f0: Vec<BigRational> = (1..=6).map(|i| BigRational::new(i.into(), 7.into())).collect();
    let f1: Vec<BigRational> = (1..=6).map(|i| BigRational::new((i * i).into(), 3.into())).collect();
    let mut rat = DynamicSystem::new(g.clone(), st, Kind::Hyperbolic, vec![f0, f1]).map_err(|e| e.to_string())?;
    rat.run(40).map_err(|e| e.to_string())?;
    let sums = rat.sums();
    let d = sums[1].clone() - sums[0].clone();
    ensure(!d.is_zero(), "zero difference")?;
    ensure(sums.windows(2).all(|w| w[1].clone() - w[0].clone() == d), "sums are not an arithmetic progression")?;

    let bm = octahedron_block_matrix();
    match is_nondegenerate(&bm) {
        Nondegeneracy::Yes { positive, negative, .. } => {
            ensure(positive == [0, 1, 2, 3] && negative == [4, 5], format!("partition {positive:?} {negative:?}"))?
        }
        n => return Err(format!("B rejected: {n:?}")),
    }
    let mut x = vec![0.3, 0.1, 0.2, 0.05, -0.25, -0.1];
    for _ in 0..1000 {
        x = bm.apply(&x);
        let norm: f64 = x.iter().map(|v| v.abs()).sum();
        ensure((norm - 1.0).abs() < 1e-12, format!("norm {norm}"))?;
    }
    Ok("heat, boundary, wave, rational sums, matrix B".into())
}

fn characteristic() -> Outcome {
    let budget = Budget::default();
    let point = MolecularSpace::isolated(1);
    let from_point = coefficients_from_base(&point, &[q(1)]).map_err(|e| e.to_string())?;
    ensure(from_point.coeffs(12) == CharFunction::euler().coeffs(12), "point base does not give Euler coefficients")?;
    let k2 = MolecularSpace::complete(2);
    let s0 = MolecularSpace::isolated(2);
    let cases = [(s0, vec![q(1)], q(2)), (k2.clone(), vec![q(1), q(1)], q(3)), (k2, vec![q(1), q(-2)], q(0))];
    let mut r = rng(12);
    let mut total = 0;
    for (base, seeds, value) in cases {
        let f = coefficients_from_base(&base, &seeds).map_err(|e| e.to_string())?;
        for seq in 0..100 {
            let mut g = base.clone();
            for _ in 0..10 {
                let mut targets = Vec::new();
                if g.volume() < 10 {
                    targets = base_copies(&g, &base, 6).unwrap();
                    targets.extend(glue_targets(&mut r, &g));
                }
                let moves = basic_moves(&g, &base, &targets, &budget).map_err(|e| e.to_string())?;
                let Some(step) = moves.choose(&mut r) else { break };
                g = apply_basic(&g, &base, &step.mv, &budget).map_err(|e| e.to_string())?;
                total += 1;
                let v = f.evaluate(&g).unwrap();
                ensure(v == value, format!("sequence {seq}: value {v} after {:?}", step.mv))?;
            }
        }
    }
    // the Euler characteristic on H from the f-vector fixture above
    ensure(CharFunction::euler().evaluate(&fig_h()).unwrap() == q(1), "F(H)")?;
    Ok(format!("300 sequences, {total} basic moves"))
}

fn tilings() -> Outcome {
    let pairs = |chi, vol| -> Vec<(u32, TileCount)> {
        tiling_solutions(&TilingQuery::new(chi, vol)).unwrap().into_iter().flat_map(|s| s.tiles).collect()
    };
    let two = pairs(2, 1);
    ensure(two == [(4, TileCount::Exact(6)), (5, TileCount::Exact(12))], format!("chi=2: {two:?}"))?;
    let zero = tiling_solutions(&TilingQuery::new(0, 1)).unwrap();
    ensure(!zero.is_empty() && zero.iter().all(|s| s.tiles.iter().all(|t| t.0 == 6)), format!("chi=0: {zero:?}"))?;
    ensure(tiling_solutions(&TilingQuery::new(1, 11)).unwrap().is_empty(), "chi=1 has solutions")?;
    Ok("chi 2, 0, 1".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "euler fixtures", euler_fixtures),
        (2, "local formula", local_formula),
        (3, "homology fixtures", homology_fixtures),
        (4, "move invariance", move_invariance),
        (5, "minimization", minimization),
        (6, "normal spaces and spheres", spheres),
        (7, "products", products),
        (8, "lattices", lattices),
        (9, "covers and nerves", covers),
        (10, "digitizer", digitizer),
        (11, "dynamic systems", pde),
        (12, "characteristic functions", characteristic),
        (13, "tilings", tilings),
    ];
    let mut red = Vec::new();
    for (n, name, check) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS {name}: {detail} [{ms} ms]"),
            Err(detail) => {
                let tag = if KNOWN_RED.contains(&n) { " (known)" } else { "" };
                println!("criterion {n:>2} FAIL{tag} {name}: {detail} [{ms} ms]");
                red.push(n);
            }
        }
    }
    if red != KNOWN_RED {
        println!("unexpected result set: failing {red:?}, known {KNOWN_RED:?}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
