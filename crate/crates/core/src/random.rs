//! Seeded generators of random finite measures for property tests,
//! acceptance checks and benchmarks.

use rand::seq::index;
use rand::Rng;

use crate::measures::FiniteMeasure;

fn random_weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    // Normalized exponentials are uniform on the simplex.
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Measure with `1..=max_atoms` atoms placed uniformly on `[0, upper]`.
pub fn random_measure<R: Rng + ?Sized>(rng: &mut R, upper: f64, max_atoms: usize) -> FiniteMeasure {
    let k = rng.gen_range(1..=max_atoms.max(1));
    let points = (0..k).map(|_| rng.gen_range(0.0..=upper)).collect();
    FiniteMeasure::new(points, random_weights(rng, k), upper).expect("valid by construction")
}

/// Measure whose atoms are distinct entries of `grid`.
pub fn random_grid_measure<R: Rng + ?Sized>(rng: &mut R, grid: &[f64], upper: f64, max_atoms: usize) -> FiniteMeasure {
    let k = rng.gen_range(1..=max_atoms.clamp(1, grid.len()));
    let points = index::sample(rng, grid.len(), k).into_iter().map(|i| grid[i]).collect();
    FiniteMeasure::new(points, random_weights(rng, k), upper).expect("valid by construction")
}
