//! Fixed-seed workloads shared by the benchmarks in `benches/`.

use eqbundle_core::fuzz::{planted_bundle, planted_structure, PlantedBundle, PlantedStructure};
use eqbundle_core::GroupSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn bundles(seed: u64, count: usize, m: u32, rank: usize) -> Vec<PlantedBundle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| planted_bundle(&mut rng, m, rank, -5, 5))
        .collect()
}

pub fn structures(seed: u64, count: usize, group: GroupSpec, rank: usize) -> Vec<PlantedStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| planted_structure(&mut rng, group, rank, -3, 3).expect("planted structure"))
        .collect()
}
