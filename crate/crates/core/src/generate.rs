//! Random instances whose alignment graph has no overlapping cycles.
//!
//! The core messages form a cactus (cycles and bridges glued at single
//! nodes). Every alignment edge `(i, j)` is realised by a destination that
//! desires a helper message and sees exactly `{i, j}`, so interferer sets
//! never exceed two and no extra edges appear. Conflicts are added by
//! destinations desiring a core message with a single interferer: one at
//! alignment distance exactly `Δ`, the others at distance at least `Δ`.
//! Core messages nobody else desires get a destination with no interferers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{build_alignment_graph, build_conflict_graph, has_overlapping_cycles, internal_conflict_distance};
use crate::instance::{Destination, Instance};

pub const MAX_GENERATED_MESSAGES: usize = 10;
const ATTEMPTS: u64 = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("need 1 <= Δ and 2Δ + 2 <= N <= {MAX_GENERATED_MESSAGES}, got N = {n}, Δ = {delta}")]
    Parameters { n: usize, delta: usize },
    #[error("no instance with N = {n}, Δ = {delta} found in {ATTEMPTS} attempts")]
    Exhausted { n: usize, delta: usize },
}

fn bfs(adj: &[Vec<u32>], src: u32) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[src as usize] = Some(0);
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize].unwrap();
        for &y in &adj[x as usize] {
            if dist[y as usize].is_none() {
                dist[y as usize] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

fn attempt(n: usize, delta: usize, rng: &mut ChaCha8Rng) -> Option<Instance> {
    let helper = n as u32;
    let core = n - 1;
    // a second component takes a few of the core messages when room allows
    let second = if core >= delta + 3 && rng.gen_bool(0.3) { rng.gen_range(1..=2) } else { 0 };
    let main = core - second;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut next = 2u32;
    while (next as usize) <= main {
        let anchor = rng.gen_range(1..next);
        let room = main + 1 - next as usize;
        let cycle_len = rng.gen_range(3..=6);
        if rng.gen_bool(0.5) && room + 1 >= cycle_len {
            let mut prev = anchor;
            for _ in 1..cycle_len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, anchor));
        } else {
            edges.push((anchor, next));
            next += 1;
        }
    }
    for k in 1..second as u32 {
        edges.push((main as u32 + k, main as u32 + k + 1));
    }
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b) in &edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let dist: Vec<Vec<Option<usize>>> = (0..=n as u32).map(|s| if s == 0 { Vec::new() } else { bfs(&adj, s) }).collect();
    let mut at_delta = Vec::new();
    let mut far = Vec::new();
    for i in 1..=main as u32 {
        for j in 1..=main as u32 {
            match dist[i as usize][j as usize] {
                Some(d) if d == delta => at_delta.push((i, j)),
                Some(d) if d > delta => far.push((i, j)),
                _ => {}
            }
        }
    }
    let &(wi, wj) = at_delta.choose(rng)?;
    let mut dests: Vec<Destination> = edges.iter().map(|&(a, b)| Destination::unicast(helper, [a, b])).collect();
    dests.push(Destination::unicast(wi, [wj]));
    far.shuffle(rng);
    let extra = rng.gen_range(0..=2.min(far.len()));
    for &(i, j) in &far[..extra] {
        dests.push(Destination::unicast(i, [j]));
    }
    // a cross-component conflict never counts as internal
    if second > 0 && rng.gen_bool(0.5) {
        dests.push(Destination::unicast(main as u32 + 1, [rng.gen_range(1..=main as u32)]));
    }
    // every message is decoded somewhere, otherwise the LP may drop it
    for w in 1..helper {
        if !dests.iter().any(|d| d.desired.contains(w)) {
            dests.push(Destination::unicast(w, []));
        }
    }
    dests.shuffle(rng);
    Instance::new(n, dests, format!("random-n{n}-d{delta}")).ok()
}

/// A random instance with `n` messages (the last one a helper), alignment
/// sets free of overlapping cycles and minimum internal conflict distance
/// exactly `delta`. Deterministic per seed.
pub fn random_no_overlap_instance(n: usize, delta: usize, seed: u64) -> Result<Instance, GenerateError> {
    if delta == 0 || n < 2 * delta + 2 || n > MAX_GENERATED_MESSAGES {
        return Err(GenerateError::Parameters { n, delta });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let Some(inst) = attempt(n, delta, &mut rng) else { continue };
        let a = build_alignment_graph(&inst);
        let c = build_conflict_graph(&inst);
        let clean = has_overlapping_cycles(&a).iter().all(|(_, o)| !o);
        if clean && internal_conflict_distance(&a, &c) == Some(delta) {
            return Ok(inst);
        }
    }
    Err(GenerateError::Exhausted { n, delta })
}
