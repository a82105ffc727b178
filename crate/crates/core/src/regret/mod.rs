//! Exact and Monte-Carlo regret, brute-force DRO scans, the named
//! adversarial constructions and the closed-form bound table.

mod bounds;
mod families;
mod scan;

pub use bounds::{analytic_bounds, matching_cell, Bounds};
pub use families::{adversarial_instance, ski_indifference_measure, AdversarialPair, Params, Target, TargetRelation, FAMILIES};
pub use scan::{dro_regret_scan, GridConfig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::FiniteMeasure;
use crate::policies::PolicySpec;
use crate::problems::ProblemSpec;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Result of one regret evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub estimate: f64,
    /// Half width of the 95% normal confidence interval; zero for exact values.
    pub ci_half_width: f64,
    pub analytic_lower: Option<f64>,
    pub analytic_upper: Option<f64>,
    pub witness: Option<AdversarialPair>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

impl RegretReport {
    pub fn exact(estimate: f64) -> Self {
        Self {
            estimate,
            ci_half_width: 0.0,
            analytic_lower: None,
            analytic_upper: None,
            witness: None,
            n: None,
            trials: None,
            seed: None,
        }
    }

    pub fn with_bounds(mut self, b: Option<Bounds>) -> Self {
        self.analytic_lower = b.map(|b| b.lower);
        self.analytic_upper = b.map(|b| b.upper);
        self
    }

    /// Whether the estimate respects the upper bound, allowing `tol` plus
    /// three half widths of noise.
    pub fn below_upper(&self, tol: f64) -> bool {
        self.analytic_upper
            .map_or(true, |u| self.estimate <= u + tol + 3.0 * self.ci_half_width)
    }
}

/// `|opt(μ) − G(π(ν)|μ)|`.
pub fn exact_regret(p: &ProblemSpec, pol: &PolicySpec, mu: &FiniteMeasure, nu: &FiniteMeasure) -> Result<f64> {
    let x = pol.apply(p, nu)?;
    Ok((p.opt_value(mu)? - p.expected_objective(x, mu)?).abs())
}

/// Exact expected regret for two heterogeneous samples `ξ₁ ~ ν₁`, `ξ₂ ~ ν₂`.
pub fn exhaustive_regret_n2(
    p: &ProblemSpec,
    pol: &PolicySpec,
    mu: &FiniteMeasure,
    nu1: &FiniteMeasure,
    nu2: &FiniteMeasure,
) -> Result<f64> {
    let opt = p.opt_value(mu)?;
    let mut total = 0.0;
    for (a, wa) in nu1.atoms() {
        for (b, wb) in nu2.atoms() {
            let hat = FiniteMeasure::empirical_from(&[a, b], p.upper())?;
            let x = pol.apply(p, &hat)?;
            total += wa * wb * (opt - p.expected_objective(x, mu)?).abs();
        }
    }
    Ok(total)
}

/// Monte-Carlo estimate of `E|G(π(μ̂ₙ)|μ) − opt(μ)|` with `ξᵢ ~ νᵢ`.
///
/// `nus` has length 1 (homogeneous) or `n`. Trial `t` draws from ChaCha8
/// stream `t` of `seed`, so the result does not depend on thread count.
pub fn monte_carlo_regret(
    p: &ProblemSpec,
    pol: &PolicySpec,
    mu: &FiniteMeasure,
    nus: &[FiniteMeasure],
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<RegretReport> {
    if nus.is_empty() || (nus.len() != 1 && nus.len() != n) {
        return Err(Error::BadParam(format!("nus: expected 1 or {n} measures, got {}", nus.len())));
    }
    if n == 0 || trials == 0 {
        return Err(Error::BadParam("n and trials must be positive".into()));
    }
    pol.validate(p)?;
    let opt = p.opt_value(mu)?;
    let upper = p.upper();
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let xs: Vec<f64> = (0..n).map(|i| nus[i % nus.len()].draw(&mut rng)).collect();
            let hat = FiniteMeasure::empirical_from(&xs, upper)?;
            let x = pol.act(p, p.oracle_unchecked(&hat));
            Ok((opt - p.expected_unchecked(x, mu)).abs())
        })
        .collect::<Result<_>>()?;

    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let ci = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
        Z95 * (var / k).sqrt()
    } else {
        0.0
    };
    Ok(RegretReport {
        estimate: mean,
        ci_half_width: ci,
        n: Some(n),
        trials: Some(trials),
        seed: Some(seed),
        ..RegretReport::exact(mean)
    })
}

/// Regret of the pair's policy on its own witness: the exact n = 2
/// expectation for two-sample constructions, otherwise the worse of the
/// candidate out-of-sample measures against `nus[0]`.
pub fn witness_regret(pair: &AdversarialPair) -> Result<f64> {
    let (p, pol) = (&pair.problem, &pair.policy);
    if let [nu1, nu2] = pair.nus.as_slice() {
        return exhaustive_regret_n2(p, pol, &pair.mu, nu1, nu2);
    }
    let nu = &pair.nus[0];
    let mut worst = exact_regret(p, pol, &pair.mu, nu)?;
    if let Some(alt) = &pair.mu_alt {
        worst = worst.max(exact_regret(p, pol, alt, nu)?);
    }
    Ok(worst)
}

/// Bayes value of a fixed action against the uniform prior over the pair's
/// two out-of-sample candidates, minimized over `actions`.
///
/// Any policy must face at least this regret on one of the two candidates,
/// so it certifies a minimax lower bound. Returns `(value, argmin)`.
pub fn two_point_minimax(pair: &AdversarialPair, actions: &[f64]) -> Result<(f64, f64)> {
    let p = &pair.problem;
    let alt = pair
        .mu_alt
        .as_ref()
        .ok_or_else(|| Error::BadParam(format!("{} has a single out-of-sample measure", pair.name)))?;
    let (opt_a, opt_b) = (p.opt_value(&pair.mu)?, p.opt_value(alt)?);
    let mut best = (f64::INFINITY, f64::NAN);
    for &x in actions {
        let ra = (opt_a - p.expected_objective(x, &pair.mu)?).abs();
        let rb = (opt_b - p.expected_objective(x, alt)?).abs();
        let v = 0.5 * (ra + rb);
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// `n` evenly spaced actions covering `[0, M]`, endpoints included.
pub fn action_grid(p: &ProblemSpec, n: usize) -> Vec<f64> {
    let m = p.upper();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| m * i as f64 / (n - 1) as f64).collect(),
    }
}
