#![allow(dead_code)]

use molspace::budget::Budget;
use molspace::transform::{apply, legal_moves, Move, Step};
use molspace::{MolecularSpace, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with n in 1..=max_n and p drawn from [0.2, 0.8].
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> MolecularSpace {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.2..0.8);
    MolecularSpace::from_adjacency_fn(n, |_, _| rng.gen_bool(p))
}

/// Candidate point-gluing targets: a ball, an edge, a point and a random subset.
pub fn glue_targets(rng: &mut ChaCha8Rng, g: &MolecularSpace) -> Vec<Vec<VertexId>> {
    let n = g.volume();
    if n == 0 {
        return Vec::new();
    }
    let v = g.id(rng.gen_range(0..n));
    let mut out = vec![g.ball(v).unwrap().members(), vec![v]];
    let nb = g.neighbors(v).unwrap();
    if let Some(&u) = nb.choose(rng) {
        out.push(vec![v.min(u), v.max(u)]);
    }
    let subset: Vec<VertexId> = g.vertices().iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
    if !subset.is_empty() {
        out.push(subset);
    }
    out
}

/// One random legal contractible move, keeping the volume at most `max_n`.
pub fn random_step(rng: &mut ChaCha8Rng, g: &MolecularSpace, max_n: usize, budget: &Budget) -> Option<(Step, MolecularSpace)> {
    let targets = if g.volume() < max_n { glue_targets(rng, g) } else { Vec::new() };
    let mut moves = legal_moves(g, &targets, budget).unwrap().moves;
    // deleting the last point leaves the empty graph
    if g.volume() == 1 {
        moves.retain(|s| !matches!(s.mv, Move::DeletePoint { .. }));
    }
    let step = moves.choose(rng)?.clone();
    let next = apply(g, &step.mv, budget).unwrap();
    Some((step, next))
}
