//! Seeded inputs shared by the benchmarks under `benches/`.

use so1n_core::{sampling, AlgebraElement, BoundaryPoint, GroupElement};

pub const SEED: u64 = 7;

pub fn group_elements(n: usize, count: usize) -> Vec<GroupElement> {
    let mut rng = sampling::stream(SEED, "bench-group");
    (0..count).map(|_| sampling::group_element(&mut rng, n, 1.0)).collect()
}

pub fn algebra_elements(n: usize, count: usize) -> Vec<AlgebraElement> {
    let mut rng = sampling::stream(SEED, "bench-algebra");
    (0..count).map(|_| sampling::algebra_element(&mut rng, n, 1.0)).collect()
}

pub fn boundary_points(n: usize, count: usize) -> Vec<BoundaryPoint> {
    let mut rng = sampling::stream(SEED, "bench-boundary");
    (0..count).map(|_| sampling::boundary_point(&mut rng, n)).collect()
}
