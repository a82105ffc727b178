//! Named worst-case constructions from the lower-bound and SAA-failure
//! arguments, as exact finite measures.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::measures::FiniteMeasure;
use crate::metrics::{in_ball, DistanceKind};
use crate::policies::{recommended_parameter, PolicySpec};
use crate::problems::ProblemSpec;

/// Family parameters by lowercase key (`eps`, `m`, `cu`, `co`, `b`, `eta`,
/// `alpha`, `k`).
pub type Params = BTreeMap<String, f64>;

/// Every name accepted by [`adversarial_instance`].
pub const FAMILIES: [&str; 9] = [
    "nv_tv_pair",
    "pr_k_pair",
    "pr_w_saa_fail",
    "pr_w_lower",
    "ski_k_saa_fail",
    "ski_k_lower",
    "ski_w_saa_fail",
    "ski_w_lower",
    "hetero_helps",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetRelation {
    /// The policy's regret on the witness equals the value.
    Exact,
    /// The policy's regret on the witness is at least the value.
    AtLeast,
    /// Every fixed action has average regret at least the value under the
    /// uniform prior over `mu` and `mu_alt`.
    MinimaxAtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub value: f64,
    pub relation: TargetRelation,
}

/// A `(μ, ν₁…νₙ)` instance together with the problem and policy it targets.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialPair {
    pub name: String,
    pub problem: ProblemSpec,
    pub policy: PolicySpec,
    /// Out-of-sample distribution.
    pub mu: FiniteMeasure,
    /// Second out-of-sample candidate for two-point lower-bound schemes.
    pub mu_alt: Option<FiniteMeasure>,
    /// Historical distributions; one entry means homogeneous data.
    pub nus: Vec<FiniteMeasure>,
    pub kind: DistanceKind,
    pub eps: f64,
    pub target: Option<Target>,
}

impl AdversarialPair {
    /// Checks that every historical measure lies in the ball of every
    /// out-of-sample candidate.
    pub fn check_balls(&self) -> Result<bool> {
        let mut ok = true;
        for mu in std::iter::once(&self.mu).chain(self.mu_alt.as_ref()) {
            for nu in &self.nus {
                ok &= in_ball(mu, nu, self.kind, self.eps)?;
            }
        }
        Ok(ok)
    }
}

impl fmt::Display for AdversarialPair {
    /// `name;mu=..;[mu_alt=..;]nu=..[;nu=..]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};mu={}", self.name, self.mu)?;
        if let Some(alt) = &self.mu_alt {
            write!(f, ";mu_alt={alt}")?;
        }
        for nu in &self.nus {
            write!(f, ";nu={nu}")?;
        }
        Ok(())
    }
}

fn get(params: &Params, key: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::BadParam(key.to_string()))
}

fn too_large(eps: f64, reason: impl Into<String>) -> Error {
    Error::EpsTooLarge {
        eps,
        reason: reason.into(),
    }
}

fn measure(atoms: &[(f64, f64)], upper: f64) -> Result<FiniteMeasure> {
    FiniteMeasure::new(atoms.iter().map(|a| a.0).collect(), atoms.iter().map(|a| a.1).collect(), upper)
}

fn as_int(v: f64, what: &str) -> Result<u32> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(Error::BadParam(format!("{what} must be a nonnegative integer, got {v}")))
    }
}

/// Builds the named construction. See [`FAMILIES`] for the names.
pub fn adversarial_instance(name: &str, params: &Params) -> Result<AdversarialPair> {
    if name == "hetero_helps" {
        return hetero_helps(params);
    }
    let eps = get(params, "eps")?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::EpsNonPositive(eps));
    }
    let pair = match name {
        "nv_tv_pair" => nv_tv_pair(params, eps),
        "pr_k_pair" => pr_k_pair(params, eps),
        "pr_w_saa_fail" => pr_w_saa_fail(params, eps),
        "pr_w_lower" => pr_w_lower(params, eps),
        "ski_k_saa_fail" => ski_k_saa_fail(params, eps),
        "ski_k_lower" => ski_k_lower(params, eps),
        "ski_w_saa_fail" => ski_w_saa_fail(params, eps),
        "ski_w_lower" => ski_w_lower(params, eps),
        other => Err(Error::UnknownName(other.to_string())),
    }?;
    debug_assert!(pair.check_balls().unwrap_or(false), "{} leaves its ball", pair.name);
    Ok(pair)
}

// Two-point masses at {0, M}; the fractile of the center sits exactly on the
// atom at 0, and moving ε mass to either end costs (c_u + c_o)·M·ε/2 on
// average for any action.
fn nv_tv_pair(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let (cu, co, m) = (get(params, "cu")?, get(params, "co")?, get(params, "m")?);
    let problem = ProblemSpec::newsvendor(cu, co, m)?;
    let q = cu / (cu + co);
    if eps > q.min(1.0 - q) {
        return Err(too_large(eps, format!("need eps <= min(q, 1 - q) = {}", q.min(1.0 - q))));
    }
    let b = |p_top: f64| measure(&[(0.0, 1.0 - p_top), (m, p_top)], m);
    Ok(AdversarialPair {
        name: "nv_tv_pair".into(),
        problem,
        policy: PolicySpec::Saa,
        mu: b(1.0 - q + eps)?,
        mu_alt: Some(b(1.0 - q - eps)?),
        nus: vec![b(1.0 - q)?],
        kind: DistanceKind::TotalVariation,
        eps,
        target: Some(Target {
            value: (cu + co) / 2.0 * m * eps,
            relation: TargetRelation::MinimaxAtLeast,
        }),
    })
}

fn pr_k_pair(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let m = get(params, "m")?;
    let problem = ProblemSpec::pricing(m)?;
    if eps > 0.5 {
        return Err(too_large(eps, "need eps <= 1/2"));
    }
    let two = |top: f64| measure(&[(m / 2.0, 1.0 - top), (m, top)], m);
    Ok(AdversarialPair {
        name: "pr_k_pair".into(),
        problem,
        policy: PolicySpec::Saa,
        mu: two(0.5 + eps)?,
        mu_alt: Some(two(0.5 - eps)?),
        nus: vec![two(0.5)?],
        kind: DistanceKind::Kolmogorov,
        eps,
        target: Some(Target {
            value: m * eps / 2.0,
            relation: TargetRelation::MinimaxAtLeast,
        }),
    })
}

// SAA posts the slightly higher price seen in the data and sells nothing.
fn pr_w_saa_fail(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let (m, eta) = (get(params, "m")?, get(params, "eta")?);
    let problem = ProblemSpec::pricing(m)?;
    if !(eta > 0.0 && eta <= m) {
        return Err(Error::BadParam(format!("eta must lie in (0, M], got {eta}")));
    }
    Ok(AdversarialPair {
        name: "pr_w_saa_fail".into(),
        problem,
        policy: PolicySpec::Saa,
        mu: FiniteMeasure::point_mass(m - eta, m)?,
        mu_alt: None,
        nus: vec![FiniteMeasure::point_mass(m.min(m - eta + eps), m)?],
        kind: DistanceKind::Wasserstein,
        eps,
        target: Some(Target {
            value: m - eta,
            relation: TargetRelation::Exact,
        }),
    })
}

fn pr_w_lower(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let m = get(params, "m")?;
    let problem = ProblemSpec::pricing(m)?;
    if eps > m / 4.0 {
        return Err(too_large(eps, format!("need eps <= M/4 = {}", m / 4.0)));
    }
    let low = 2.0 * (eps / m).sqrt();
    Ok(AdversarialPair {
        name: "pr_w_lower".into(),
        problem,
        policy: recommended_parameter(&problem, DistanceKind::Wasserstein, eps)?,
        mu: measure(&[(m / 2.0 - (m * eps).sqrt() / 2.0, low), (m / 2.0, 1.0 - low)], m)?,
        mu_alt: Some(FiniteMeasure::point_mass(m / 2.0, m)?),
        nus: vec![FiniteMeasure::point_mass(m / 2.0, m)?],
        kind: DistanceKind::Wasserstein,
        eps,
        target: Some(Target {
            value: (m * eps).sqrt() / 4.0,
            relation: TargetRelation::MinimaxAtLeast,
        }),
    })
}

// Start from the indifference measure, move α from M to 0 so that never
// buying is the unique empirical optimum, then move ε from day 1 to day M
// in the out-of-sample measure.
fn ski_k_saa_fail(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let m_int = as_int(get(params, "m")?, "m")?;
    let b_int = as_int(get(params, "b")?, "b")?;
    let alpha = params.get("alpha").copied().unwrap_or(0.0);
    let nu = ski_indifference_measure(m_int, b_int)?;
    let (m, b) = (m_int as f64, b_int as f64);
    let problem = ProblemSpec::ski_rental(b, m)?;
    let (nu1, num) = (nu.mass_at(1.0), nu.mass_at(m));
    if !(0.0..=num).contains(&alpha) {
        return Err(Error::BadParam(format!("alpha must lie in [0, nu(M)] = [0, {num}], got {alpha}")));
    }
    if eps > nu1 {
        return Err(too_large(eps, format!("need eps <= nu(1) = {nu1}")));
    }
    let shifted = |from_one: f64| {
        let mut atoms: Vec<(f64, f64)> = nu.atoms().collect();
        for a in &mut atoms {
            if a.0 == 1.0 {
                a.1 -= from_one;
            }
            if a.0 == m {
                a.1 += from_one - alpha;
            }
        }
        atoms.push((0.0, alpha));
        measure(&atoms, m)
    };
    Ok(AdversarialPair {
        name: "ski_k_saa_fail".into(),
        problem,
        policy: PolicySpec::Saa,
        mu: shifted(eps)?,
        mu_alt: None,
        nus: vec![shifted(0.0)?],
        kind: DistanceKind::Kolmogorov,
        eps,
        target: Some(Target {
            value: eps * (m - 1.0) - alpha * (m - b),
            relation: TargetRelation::AtLeast,
        }),
    })
}

fn ski_k_lower(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let (b, m) = (get(params, "b")?, get(params, "m")?);
    let problem = ProblemSpec::ski_rental(b, m)?;
    if eps > 0.5 {
        return Err(too_large(eps, "need eps <= 1/2"));
    }
    if 1.25 * b > m {
        return Err(Error::BadParam(format!("need 5b/4 <= M, got b = {b}, M = {m}")));
    }
    let two = |w_low: f64| measure(&[(0.75 * b, w_low), (1.25 * b, 1.0 - w_low)], m);
    let nu = two(0.5 + eps / 2.0)?;
    Ok(AdversarialPair {
        name: "ski_k_lower".into(),
        problem,
        policy: recommended_parameter(&problem, DistanceKind::Kolmogorov, eps)?,
        mu: two(0.5 - eps / 2.0)?,
        mu_alt: Some(nu.clone()),
        nus: vec![nu],
        kind: DistanceKind::Kolmogorov,
        eps,
        target: Some(Target {
            value: eps * b / 8.0,
            relation: TargetRelation::MinimaxAtLeast,
        }),
    })
}

// With ¾ of the data at b/2 SAA buys on day b/2; nudging those days past
// b/2 makes every skier pay for a purchase.
fn ski_w_saa_fail(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let (b, m) = (get(params, "b")?, get(params, "m")?);
    let problem = ProblemSpec::ski_rental(b, m)?;
    if m <= 2.0 * b {
        return Err(Error::BadParam(format!("need M > 2b, got b = {b}, M = {m}")));
    }
    if eps >= b / 2.0 {
        return Err(too_large(eps, format!("need eps < b/2 = {}", b / 2.0)));
    }
    Ok(AdversarialPair {
        name: "ski_w_saa_fail".into(),
        problem,
        policy: PolicySpec::Saa,
        mu: measure(&[(b / 2.0 + eps, 0.75), (m, 0.25)], m)?,
        mu_alt: None,
        nus: vec![measure(&[(b / 2.0, 0.75), (m, 0.25)], m)?],
        kind: DistanceKind::Wasserstein,
        eps,
        target: Some(Target {
            value: b / 2.0,
            relation: TargetRelation::AtLeast,
        }),
    })
}

fn ski_w_lower(params: &Params, eps: f64) -> Result<AdversarialPair> {
    let (b, m) = (get(params, "b")?, get(params, "m")?);
    let problem = ProblemSpec::ski_rental(b, m)?;
    if eps > b / 4.0 {
        return Err(too_large(eps, format!("need eps <= b/4 = {}", b / 4.0)));
    }
    if m < 2.0 * b {
        return Err(Error::BadParam(format!("need M >= 2b, got b = {b}, M = {m}")));
    }
    let half = (b * eps).sqrt() / 2.0;
    let s = (eps / b).sqrt();
    let nu = measure(&[(b / 2.0 - half, 0.5), (m, 0.5)], m)?;
    Ok(AdversarialPair {
        name: "ski_w_lower".into(),
        problem,
        policy: recommended_parameter(&problem, DistanceKind::Wasserstein, eps)?,
        mu: measure(&[(b / 2.0 - half, 0.5 - s), (b / 2.0 + half, s), (m, 0.5)], m)?,
        mu_alt: Some(nu.clone()),
        nus: vec![nu],
        kind: DistanceKind::Wasserstein,
        eps,
        target: Some(Target {
            value: (b * eps).sqrt() / 4.0,
            relation: TargetRelation::MinimaxAtLeast,
        }),
    })
}

// Two samples, one from each side of the truth, lure SAA into buying on day
// k while the skier actually stays k + 1 days.
fn hetero_helps(params: &Params) -> Result<AdversarialPair> {
    let k = as_int(get(params, "k")?, "k")?;
    if k == 0 {
        return Err(Error::BadParam("k must be at least 1".into()));
    }
    let k = k as f64;
    let m = 3.0 * k + 2.0;
    let problem = ProblemSpec::ski_rental(2.0 * k + 1.0, m)?;
    let d = |x: f64| FiniteMeasure::point_mass(x, m);
    Ok(AdversarialPair {
        name: "hetero_helps".into(),
        problem,
        policy: PolicySpec::Saa,
        mu: d(k + 1.0)?,
        mu_alt: None,
        nus: vec![d(k)?, d(m)?],
        kind: DistanceKind::TotalVariation,
        eps: 1.0,
        target: Some(Target {
            value: 2.0 * k,
            relation: TargetRelation::Exact,
        }),
    })
}

/// Integer-day measure under which buying on any day in `{0, …, M−b−1}`
/// and never buying all cost exactly `b`.
///
/// Survival probabilities shrink by the factor `(b−1)/b` per day up to day
/// `M−b`, and the remaining mass sits at `M`.
pub fn ski_indifference_measure(upper: u32, buy: u32) -> Result<FiniteMeasure> {
    if buy < 2 || buy + 1 > upper {
        return Err(Error::InvalidBRange {
            b: buy as f64,
            m: upper as f64,
        });
    }
    let (m, b) = (upper as usize, buy as f64);
    let r = (b - 1.0) / b;
    let last = m - buy as usize;
    // survival[k] = P(ξ ≥ k) for k = 1..=last
    let mut survival = vec![0.0; last + 1];
    survival[1] = 1.0;
    for k in 1..last {
        survival[k + 1] = survival[k] * r;
    }
    let top = survival[last] * r;
    let mut points = Vec::with_capacity(last + 1);
    let mut weights = Vec::with_capacity(last + 1);
    for k in 1..last {
        points.push(k as f64);
        weights.push(survival[k] - survival[k + 1]);
    }
    points.push(last as f64);
    weights.push(survival[last] - top);
    points.push(m as f64);
    weights.push(top);
    FiniteMeasure::new(points, weights, m as f64)
}
