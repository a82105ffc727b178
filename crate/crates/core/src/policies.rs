//! Sample-size-agnostic policies: maps from an (empirical) measure to an
//! action that never look at the number of samples.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::FiniteMeasure;
use crate::metrics::DistanceKind;
use crate::problems::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySpec {
    /// Play the oracle action of the empirical measure.
    Saa,
    /// Play `clamp(oracle + δ, 0, M)`.
    DeltaSaa(f64),
    /// Ski rental only: buy at `min(C, oracle)`.
    Capped(f64),
}

/// Which column of the bound table a policy belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Saa,
    Best,
}

impl PolicySpec {
    pub fn validate(&self, p: &ProblemSpec) -> Result<()> {
        match *self {
            PolicySpec::Saa => Ok(()),
            PolicySpec::DeltaSaa(d) if d.is_finite() => Ok(()),
            PolicySpec::DeltaSaa(d) => Err(Error::InvalidPolicy(format!("delta = {d}"))),
            PolicySpec::Capped(_) if !matches!(p, ProblemSpec::SkiRental { .. }) => Err(Error::CappedOnNonSki),
            PolicySpec::Capped(c) if c >= 0.0 && !c.is_nan() => Ok(()),
            PolicySpec::Capped(c) => Err(Error::InvalidPolicy(format!("cap = {c}"))),
        }
    }

    /// Action chosen when the data look like `m_hat`.
    pub fn apply(&self, p: &ProblemSpec, m_hat: &FiniteMeasure) -> Result<f64> {
        self.validate(p)?;
        let x = p.oracle(m_hat)?;
        Ok(self.act(p, x))
    }

    // Post-processing of an already computed oracle action.
    pub(crate) fn act(&self, p: &ProblemSpec, oracle: f64) -> f64 {
        match *self {
            PolicySpec::Saa => oracle,
            PolicySpec::DeltaSaa(d) => (oracle + d).clamp(0.0, p.upper()),
            PolicySpec::Capped(c) => oracle.min(c),
        }
    }
}

/// The robustified policy that attains the minimax rate for `(p, kind)`.
pub fn recommended_parameter(p: &ProblemSpec, kind: DistanceKind, eps: f64) -> Result<PolicySpec> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::EpsNonPositive(eps));
    }
    Ok(match (*p, kind) {
        (ProblemSpec::Pricing { upper }, DistanceKind::Wasserstein) => PolicySpec::DeltaSaa(-(upper * eps).sqrt()),
        (ProblemSpec::SkiRental { buy, .. }, DistanceKind::Wasserstein) => PolicySpec::DeltaSaa((buy * eps).sqrt()),
        (ProblemSpec::SkiRental { buy, .. }, _) => {
            if eps >= 1.0 {
                return Err(Error::EpsTooLarge {
                    eps,
                    reason: "the rental cap b ln(1/eps) needs eps < 1".into(),
                });
            }
            PolicySpec::Capped(buy * (1.0 / eps).ln())
        }
        _ => PolicySpec::Saa,
    })
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::Saa => f.write_str("saa"),
            PolicySpec::DeltaSaa(d) => write!(f, "dsaa:{d}"),
            PolicySpec::Capped(c) => write!(f, "cap:{c}"),
        }
    }
}

impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{v}` is not a number")))
        };
        match s.split_once(':') {
            None if s.eq_ignore_ascii_case("saa") => Ok(PolicySpec::Saa),
            Some(("dsaa", d)) => Ok(PolicySpec::DeltaSaa(num(d)?)),
            Some(("cap", c)) => Ok(PolicySpec::Capped(num(c)?)),
            _ => Err(Error::Parse(format!("unknown policy `{s}`"))),
        }
    }
}
