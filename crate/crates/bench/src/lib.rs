//! Shared fixtures for the benchmark targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pushsweep_core::{generate_random_deep, Point2, Scene};

/// Seeded random points in the unit square with a small separation floor.
pub fn random_points(seed: u64, n: usize) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Point2> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        if pts.iter().all(|q| q.dist(&p) > 1e-6) {
            pts.push(p);
        }
    }
    pts
}

/// A small pool of solvable cluttered scenes.
pub fn deep_scenes(count: u64, n_obstacles: usize) -> Vec<Scene> {
    (0..count)
        .map(|s| generate_random_deep(s, n_obstacles).expect("scene generation"))
        .collect()
}
