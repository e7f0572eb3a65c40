//! Fixtures shared by the kernel benchmarks.

use polykernel::models::{self, Model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Star bipyramid refined `levels` times.
pub fn refined_star(levels: usize) -> Model {
    let mut m = models::star_bipyramid(0.6);
    for _ in 0..levels {
        m = models::midpoint_refine(&m);
    }
    m
}

pub fn random_hulls(count: usize, points: usize, seed: u64) -> Vec<Model> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| models::random_convex(&mut rng, points)).collect()
}
