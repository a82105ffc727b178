//! Brute-force search for a worst `(μ, ν)` pair over gridded measures.
//!
//! The search space is finite, so the maximum found is a lower bound on the
//! uniform DRO regret `sup_μ sup_{ν ∈ U_ε(μ)} |opt(μ) − G(π(ν)|μ)|`.

use rayon::prelude::*;

use super::bounds::{analytic_bounds, matching_cell};
use super::families::AdversarialPair;
use super::RegretReport;
use crate::error::{Error, Result};
use crate::measures::FiniteMeasure;
use crate::metrics::{in_ball, DistanceKind};
use crate::policies::PolicySpec;
use crate::problems::ProblemSpec;

/// Candidate measures: every choice of at most `max_atoms` locations with
/// weights on the simplex grid `{1/R, 2/R, …}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub locations: Vec<f64>,
    pub max_atoms: usize,
    pub resolution: usize,
    /// Refuse to enumerate more `(μ, ν)` pairs than this.
    pub cap: u128,
}

impl GridConfig {
    pub const DEFAULT_CAP: u128 = 10_000_000;

    /// `count` evenly spaced locations on `[0, upper]`, endpoints included.
    pub fn uniform(upper: f64, count: usize, max_atoms: usize, resolution: usize) -> Self {
        let locations = match count {
            0 => Vec::new(),
            1 => vec![0.0],
            _ => (0..count).map(|i| upper * i as f64 / (count - 1) as f64).collect(),
        };
        Self {
            locations,
            max_atoms,
            resolution,
            cap: Self::DEFAULT_CAP,
        }
    }

    /// Adds locations, keeping the list sorted and free of duplicates.
    pub fn with_locations(mut self, extra: &[f64]) -> Self {
        self.locations.extend_from_slice(extra);
        self.locations.sort_by(f64::total_cmp);
        self.locations.dedup();
        self
    }

    fn validate(&self, upper: f64) -> Result<()> {
        if self.locations.is_empty() {
            return Err(Error::InvalidGrid("no locations".into()));
        }
        if !(1..=4).contains(&self.max_atoms) {
            return Err(Error::InvalidGrid(format!("max_atoms = {} not in 1..=4", self.max_atoms)));
        }
        if self.resolution == 0 {
            return Err(Error::InvalidGrid("resolution must be positive".into()));
        }
        if let Some(&x) = self.locations.iter().find(|&&x| !(0.0..=upper).contains(&x)) {
            return Err(Error::PointOutOfRange { point: x, upper });
        }
        Ok(())
    }

    /// Number of candidate measures.
    pub fn measure_count(&self) -> u128 {
        let l = self.locations.len() as u128;
        let r = self.resolution as u128;
        (1..=self.max_atoms.min(self.locations.len()) as u128)
            .map(|j| binom(l, j) * binom(r.saturating_sub(1), j - 1))
            .sum()
    }

    /// All candidate measures, in a fixed order.
    pub fn measures(&self, upper: f64) -> Result<Vec<FiniteMeasure>> {
        self.validate(upper)?;
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        for j in 1..=self.max_atoms.min(self.locations.len()) {
            for_each_subset(self.locations.len(), j, 0, &mut chosen, &mut |idx| {
                let points: Vec<f64> = idx.iter().map(|&i| self.locations[i]).collect();
                let mut parts = Vec::with_capacity(j);
                for_each_composition(self.resolution, j, &mut parts, &mut |ks| {
                    let weights = ks.iter().map(|&k| k as f64 / self.resolution as f64).collect();
                    out.push(FiniteMeasure::new(points.clone(), weights, upper));
                });
            });
        }
        out.into_iter().collect()
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn for_each_subset(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..n {
        chosen.push(i);
        for_each_subset(n, k, i + 1, chosen, f);
        chosen.pop();
    }
}

// Ordered ways to write `total` as a sum of `parts` positive integers.
fn for_each_composition(total: usize, parts: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if parts == 1 {
        if total >= 1 {
            acc.push(total);
            f(acc);
            acc.pop();
        }
        return;
    }
    for first in 1..total {
        acc.push(first);
        for_each_composition(total - first, parts - 1, acc, f);
        acc.pop();
    }
}

/// Maximizes exact regret over all in-ball pairs on the grid.
///
/// The witness is the first maximizing pair in enumeration order. Bounds
/// are attached when `(p, kind, pol)` matches a cell of the bound table.
pub fn dro_regret_scan(
    p: &ProblemSpec,
    pol: &PolicySpec,
    kind: DistanceKind,
    eps: f64,
    grid: &GridConfig,
) -> Result<RegretReport> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::EpsNonPositive(eps));
    }
    pol.validate(p)?;
    let count = grid.measure_count();
    let pairs = count.saturating_mul(count);
    if pairs > grid.cap {
        return Err(Error::GridTooLarge { pairs, cap: grid.cap });
    }
    let ms = grid.measures(p.upper())?;
    let opts: Vec<f64> = ms.par_iter().map(|m| p.opt_value(m)).collect::<Result<_>>()?;
    let actions: Vec<f64> = ms.par_iter().map(|m| pol.act(p, p.oracle_unchecked(m))).collect();

    // (regret, mu index, nu index); ties keep the smallest indices.
    let better = |a: (f64, usize, usize), b: (f64, usize, usize)| {
        if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
            b
        } else {
            a
        }
    };
    let best = (0..ms.len())
        .into_par_iter()
        .map(|i| {
            let mu = &ms[i];
            let mut local = (f64::NEG_INFINITY, usize::MAX, usize::MAX);
            for (j, nu) in ms.iter().enumerate() {
                if in_ball(mu, nu, kind, eps)? {
                    let r = (opts[i] - p.expected_unchecked(actions[j], mu)).abs();
                    local = better(local, (r, i, j));
                }
            }
            Ok(local)
        })
        .try_reduce(|| (f64::NEG_INFINITY, usize::MAX, usize::MAX), |a, b| Ok(better(a, b)))?;

    let (value, i, j) = best;
    let witness = AdversarialPair {
        name: "dro_scan".into(),
        problem: *p,
        policy: *pol,
        mu: ms[i].clone(),
        mu_alt: None,
        nus: vec![ms[j].clone()],
        kind,
        eps,
        target: None,
    };
    let bounds = match matching_cell(p, kind, pol, eps) {
        Some(cell) if eps > 0.0 => analytic_bounds(p, kind, cell, eps).ok(),
        _ => None,
    };
    Ok(RegretReport {
        witness: Some(witness),
        ..RegretReport::exact(value).with_bounds(bounds)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_enumeration() {
        let g = GridConfig::uniform(1.0, 5, 3, 6);
        assert_eq!(g.measures(1.0).unwrap().len() as u128, g.measure_count());
        // 5 + C(5,2)·5 + C(5,3)·C(5,2)
        assert_eq!(g.measure_count(), 5 + 50 + 100);
    }

    #[test]
    fn measures_are_distinct() {
        let ms = GridConfig::uniform(2.0, 4, 2, 4).measures(2.0).unwrap();
        for (i, a) in ms.iter().enumerate() {
            for b in &ms[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn grid_cap() {
        let mut g = GridConfig::uniform(1.0, 11, 4, 50);
        g.cap = 1000;
        let pr = ProblemSpec::pricing(1.0).unwrap();
        assert!(matches!(
            dro_regret_scan(&pr, &PolicySpec::Saa, DistanceKind::Kolmogorov, 0.1, &g),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn zero_radius_means_no_regret_for_saa() {
        let g = GridConfig::uniform(1.0, 4, 2, 4);
        let nv = ProblemSpec::newsvendor(1.0, 3.0, 1.0).unwrap();
        for kind in DistanceKind::ALL {
            let r = dro_regret_scan(&nv, &PolicySpec::Saa, kind, 0.0, &g).unwrap();
            assert_eq!(r.estimate, 0.0);
        }
    }

    #[test]
    fn newsvendor_kolmogorov_sandwich() {
        let nv = ProblemSpec::newsvendor(1.0, 1.0, 1.0).unwrap();
        let g = GridConfig::uniform(1.0, 3, 2, 100);
        let r = dro_regret_scan(&nv, &PolicySpec::Saa, DistanceKind::Kolmogorov, 0.05, &g).unwrap();
        assert!(r.estimate >= 0.05 && r.estimate <= 0.1 + 1e-9, "{}", r.estimate);
        assert_eq!(r.analytic_lower, Some(0.05));
        assert_eq!(r.analytic_upper, Some(0.1));
    }

    #[test]
    fn pricing_wasserstein_overshoot() {
        let pr = ProblemSpec::pricing(1.0).unwrap();
        let g = GridConfig::uniform(1.0, 3, 1, 1).with_locations(&[0.99]);
        let r = dro_regret_scan(&pr, &PolicySpec::Saa, DistanceKind::Wasserstein, 0.01, &g).unwrap();
        assert!((r.estimate - 0.99).abs() < 1e-12, "{}", r.estimate);
    }
}
