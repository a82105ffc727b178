//! ε sweeps over one `(problem, distance, policy)` cell.

use std::fmt;
use std::str::FromStr;

use hetero_dro::regret::{
    analytic_bounds,
    adversarial_instance, dro_regret_scan, matching_cell, monte_carlo_regret, witness_regret, AdversarialPair,
    GridConfig, Params, RegretReport, TargetRelation,
};
use hetero_dro::{DistanceKind, PolicyKind, PolicySpec, ProblemSpec};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact regret on the named worst-case construction for each ε.
    AdversarialNamed,
    /// Brute-force lower bound on the uniform DRO regret.
    DroScan,
    /// Finite-sample regret on the named construction.
    MonteCarlo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::AdversarialNamed => "adversarial-named",
            Mode::DroScan => "dro-scan",
            Mode::MonteCarlo => "monte-carlo",
        })
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "adversarial-named" | "adversarial" => Ok(Mode::AdversarialNamed),
            "dro-scan" | "scan" => Ok(Mode::DroScan),
            "monte-carlo" | "mc" => Ok(Mode::MonteCarlo),
            other => Err(ConfigError::Invalid(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyChoice {
    Fixed(PolicySpec),
    /// The rate-optimal robustification for each ε.
    Recommended,
    /// Whatever policy the named construction targets.
    Cited,
}

impl PolicyChoice {
    pub fn resolve(&self, p: &ProblemSpec, kind: DistanceKind, eps: f64) -> hetero_dro::Result<Option<PolicySpec>> {
        Ok(match self {
            PolicyChoice::Fixed(pol) => Some(*pol),
            PolicyChoice::Recommended => Some(hetero_dro::recommended_parameter(p, kind, eps)?),
            PolicyChoice::Cited => None,
        })
    }
}

impl FromStr for PolicyChoice {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "recommended" | "best" => Ok(PolicyChoice::Recommended),
            "cited" => Ok(PolicyChoice::Cited),
            other => other
                .parse()
                .map(PolicyChoice::Fixed)
                .map_err(|e| ConfigError::Invalid(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub kind: DistanceKind,
    pub policy: PolicyChoice,
    /// Strictly positive and ascending.
    pub eps_grid: Vec<f64>,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Named construction; defaults to the one matching the cell.
    pub family: Option<String>,
    /// Extra construction parameters such as `eta` or `alpha`.
    pub params: Params,
    pub grid: GridConfig,
}

impl ExperimentConfig {
    pub fn new(problem: ProblemSpec, kind: DistanceKind, policy: PolicyChoice, eps_grid: Vec<f64>, mode: Mode) -> Self {
        Self {
            problem,
            kind,
            policy,
            eps_grid,
            n: 10_000,
            trials: 2_000,
            seed: 42,
            mode,
            family: None,
            params: Params::new(),
            grid: default_grid(&problem),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.eps_grid.is_empty() {
            return bad("empty eps grid".into());
        }
        if let Some(e) = self.eps_grid.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return bad(format!("eps = {e} must be positive"));
        }
        if self.eps_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("eps grid must be strictly ascending".into());
        }
        if self.mode == Mode::MonteCarlo && (self.n == 0 || self.trials == 0) {
            return bad("n and trials must be positive".into());
        }
        if self.mode == Mode::DroScan {
            let pairs = self.grid.measure_count().saturating_mul(self.grid.measure_count());
            if pairs > self.grid.cap {
                return bad(format!("scan would enumerate {pairs} pairs, cap is {}", self.grid.cap));
            }
            self.grid
                .measures(self.problem.upper())
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let PolicyChoice::Fixed(pol) = &self.policy {
            pol.validate(&self.problem).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(())
    }
}

/// Scan grid used when none is given: 11 locations, two atoms, weights in
/// steps of 1/20.
pub fn default_grid(p: &ProblemSpec) -> GridConfig {
    GridConfig::uniform(p.upper(), 11, 2, 20)
}

/// Construction that realizes the bound of `(p, kind, cell)`.
pub fn default_family(p: &ProblemSpec, kind: DistanceKind, cell: PolicyKind) -> Option<&'static str> {
    use DistanceKind::Wasserstein as W;
    Some(match (p, kind, cell) {
        (ProblemSpec::Newsvendor { .. }, W, _) => return None,
        (ProblemSpec::Newsvendor { .. }, _, _) => "nv_tv_pair",
        (ProblemSpec::Pricing { .. }, W, PolicyKind::Saa) => "pr_w_saa_fail",
        (ProblemSpec::Pricing { .. }, W, PolicyKind::Best) => "pr_w_lower",
        (ProblemSpec::Pricing { .. }, _, _) => "pr_k_pair",
        (ProblemSpec::SkiRental { .. }, W, PolicyKind::Saa) => "ski_w_saa_fail",
        (ProblemSpec::SkiRental { .. }, W, PolicyKind::Best) => "ski_w_lower",
        (ProblemSpec::SkiRental { .. }, _, PolicyKind::Saa) => "ski_k_saa_fail",
        (ProblemSpec::SkiRental { .. }, _, PolicyKind::Best) => "ski_k_lower",
        (ProblemSpec::Holder { .. }, _, _) => return None,
    })
}

/// Problem constants in the key names the constructions expect.
pub fn problem_params(p: &ProblemSpec) -> Params {
    let mut out = Params::new();
    out.insert("m".into(), p.upper());
    match *p {
        ProblemSpec::Newsvendor { underage, overage, .. } => {
            out.insert("cu".into(), underage);
            out.insert("co".into(), overage);
        }
        ProblemSpec::SkiRental { buy, .. } => {
            out.insert("b".into(), buy);
        }
        ProblemSpec::Holder { alpha, .. } => {
            out.insert("alpha".into(), alpha);
        }
        ProblemSpec::Pricing { .. } => {}
    }
    out
}

/// Outcome at one ε. Points whose construction is invalid carry the
/// reason instead of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsRun {
    pub eps: f64,
    pub policy: Option<PolicySpec>,
    pub outcome: Result<RegretReport, String>,
}

/// Runs every ε independently (possibly in parallel); results keep the
/// order of the grid.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<EpsRun>, ConfigError> {
    cfg.validate()?;
    Ok(cfg.eps_grid.par_iter().map(|&eps| run_one(cfg, eps)).collect())
}

fn run_one(cfg: &ExperimentConfig, eps: f64) -> EpsRun {
    let mut policy = None;
    let outcome = (|| -> hetero_dro::Result<RegretReport> {
        let p = &cfg.problem;
        policy = cfg.policy.resolve(p, cfg.kind, eps)?;
        match cfg.mode {
            Mode::DroScan => {
                let pol = policy.unwrap_or(PolicySpec::Saa);
                policy = Some(pol);
                dro_regret_scan(p, &pol, cfg.kind, eps, &cfg.grid)
            }
            Mode::AdversarialNamed | Mode::MonteCarlo => {
                let pair = build_pair(cfg, policy, eps)?;
                policy = Some(policy.unwrap_or(pair.policy));
                let mc = (cfg.mode == Mode::MonteCarlo).then_some(McSettings {
                    n: cfg.n,
                    trials: cfg.trials,
                    seed: cfg.seed,
                });
                evaluate_pair(pair, policy, mc)
            }
        }
    })();
    EpsRun {
        eps,
        policy,
        outcome: outcome.map_err(|e| e.to_string()),
    }
}

fn build_pair(cfg: &ExperimentConfig, policy: Option<PolicySpec>, eps: f64) -> hetero_dro::Result<AdversarialPair> {
    let p = &cfg.problem;
    let name = match &cfg.family {
        Some(name) => name.clone(),
        None => {
            let cell = policy
                .map(|pol| matching_cell(p, cfg.kind, &pol, eps).unwrap_or(PolicyKind::Saa))
                .unwrap_or(PolicyKind::Saa);
            default_family(p, cfg.kind, cell)
                .ok_or_else(|| hetero_dro::Error::NoBoundInPaper(format!("construction for {} / {}", p.tag(), cfg.kind)))?
                .to_string()
        }
    };
    let mut params = problem_params(p);
    if name == "pr_w_saa_fail" {
        params.insert("eta".into(), p.upper() * 1e-3);
    }
    params.extend(cfg.params.iter().map(|(k, v)| (k.clone(), *v)));
    params.insert("eps".into(), eps);
    let mut pair = adversarial_instance(&name, &params)?;
    if pair.problem != *p {
        return Err(hetero_dro::Error::BadParam(format!(
            "{name} builds {} but the experiment is on {p}",
            pair.problem
        )));
    }
    if pair.kind != cfg.kind {
        pair.kind = cfg.kind;
        if !pair.check_balls()? {
            return Err(hetero_dro::Error::EpsTooLarge {
                eps,
                reason: format!("{name} leaves the {} ball", cfg.kind),
            });
        }
    }
    Ok(pair)
}

/// Monte-Carlo settings; `None` where exact evaluation is wanted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Regret of `pol` (default: the cited policy) on a named construction,
/// exact or by simulation, with the analytic bounds of its cell attached.
pub fn evaluate_pair(mut pair: AdversarialPair, pol: Option<PolicySpec>, mc: Option<McSettings>) -> hetero_dro::Result<RegretReport> {
    let pol = pol.unwrap_or(pair.policy);
    pol.validate(&pair.problem)?;
    // Targets other than minimax bounds only speak about the cited policy.
    if pol != pair.policy && !matches!(pair.target.map(|t| t.relation), Some(TargetRelation::MinimaxAtLeast)) {
        pair.target = None;
    }
    pair.policy = pol;
    let p = pair.problem;
    let mut report = match mc {
        Some(mc) => {
            // Targets are population statements, not finite-sample ones.
            pair.target = None;
            monte_carlo_regret(&p, &pol, &pair.mu, &pair.nus, mc.n, mc.trials, mc.seed)?
        }
        None => RegretReport::exact(witness_regret(&pair)?),
    };
    let bounds = matching_cell(&p, pair.kind, &pol, pair.eps).and_then(|cell| analytic_bounds(&p, pair.kind, cell, pair.eps).ok());
    report = report.with_bounds(bounds);
    report.witness = Some(pair);
    Ok(report)
}

/// Describes how a report contradicts the theory, if it does: above the
/// analytic upper bound, or below the target of its construction.
pub fn sandwich_violation(report: &RegretReport) -> Option<String> {
    let slack = 1e-9 + 3.0 * report.ci_half_width;
    if let Some(u) = report.analytic_upper {
        if report.estimate > u + slack {
            return Some(format!("estimate {} above upper bound {u}", report.estimate));
        }
    }
    let target = report.witness.as_ref().and_then(|w| w.target)?;
    (report.estimate < target.value - slack)
        .then(|| format!("estimate {} below construction target {}", report.estimate, target.value))
}
