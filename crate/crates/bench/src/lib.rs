//! Shared inputs for the benchmarks, so every run measures the same work.

use hetero_dro::regret::{adversarial_instance, AdversarialPair, Params};
use hetero_dro::random::random_measure;
use hetero_dro::{FiniteMeasure, GridConfig, ProblemSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `count` random measure pairs on `[0, upper]` with up to `atoms` atoms.
pub fn measure_pairs(seed: u64, count: usize, upper: f64, atoms: usize) -> Vec<(FiniteMeasure, FiniteMeasure)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (random_measure(&mut rng, upper, atoms), random_measure(&mut rng, upper, atoms)))
        .collect()
}

/// The newsvendor scan used by the rate experiments: three locations and
/// weights in steps of 1/100.
pub fn newsvendor_scan() -> (ProblemSpec, GridConfig) {
    let p = ProblemSpec::newsvendor(1.0, 1.0, 1.0).expect("valid problem");
    (p, GridConfig::uniform(1.0, 3, 2, 100))
}

/// The ski-rental Wasserstein failure instance with `b = 2`, `M = 10`.
pub fn ski_w_instance(eps: f64) -> AdversarialPair {
    let params: Params = [("b", 2.0), ("m", 10.0), ("eps", eps)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    adversarial_instance("ski_w_saa_fail", &params).expect("valid construction")
}
