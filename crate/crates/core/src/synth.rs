//! Seeded synthetic graph generators for tests, benchmarks, and demos.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{MultiRelationGraph, Triple};
use crate::partition::Partition;

/// G(n, q, p): each of the n(n-1)/2 pairs appears in each relation
/// independently with probability `density`. Isolated nodes are kept.
pub fn random_graph(n: usize, q: usize, density: f64, seed: u64) -> MultiRelationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples: Vec<Triple> = Vec::new();
    for r in 0..q as u32 {
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.gen_bool(density) {
                    triples.push((u, v, r));
                }
            }
        }
    }
    MultiRelationGraph::from_indexed(
        (0..n).map(|i| format!("n{i}")).collect(),
        (0..q).map(|i| format!("r{i}")).collect(),
        &triples,
    )
}

/// A uniformly random partition with at most `max_k` blocks (empty block
/// ids are compacted away).
pub fn random_partition(n: usize, max_k: usize, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = max_k.clamp(1, n.max(1));
    let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k as u32)).collect();
    Partition::from_assignment(&raw)
}

/// Planted block structure: `blocks` groups of `block_size` nodes; within
/// each block every intra pair is present in every relation, plus sparse
/// random noise edges between blocks.
pub fn planted_blocks(
    blocks: usize,
    block_size: usize,
    q: usize,
    noise: f64,
    seed: u64,
) -> MultiRelationGraph {
    let n = blocks * block_size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples: Vec<Triple> = Vec::new();
    for r in 0..q as u32 {
        for b in 0..blocks {
            let base = (b * block_size) as u32;
            for i in 0..block_size as u32 {
                for j in (i + 1)..block_size as u32 {
                    triples.push((base + i, base + j, r));
                }
            }
        }
        if noise > 0.0 {
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if (u as usize / block_size) != (v as usize / block_size)
                        && rng.gen_bool(noise)
                    {
                        triples.push((u, v, r));
                    }
                }
            }
        }
    }
    MultiRelationGraph::from_indexed(
        (0..n).map(|i| format!("n{i}")).collect(),
        (0..q).map(|i| format!("r{i}")).collect(),
        &triples,
    )
}
