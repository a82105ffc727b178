//! Objective functions `g(x, ξ)`, exact expectations `G(x|μ)` and oracles.
//!
//! Actions and realizations both live in `[0, M]`. The oracle searches a
//! finite candidate set that provably contains a continuum optimum:
//!
//! * newsvendor: the critical-fractile quantile;
//! * pricing: the support points (revenue drops right after each atom);
//! * ski rental: `{0} ∪ support ∪ {M}` (`G` is nondecreasing between atoms);
//! * Hölder: `{0} ∪ support ∪ {M}` (`G` is concave between atoms for α ≤ 1).
//!
//! Ties are resolved toward the smallest action, except for ski rental
//! where they go to the largest one (rent as long as it is free to do so).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::{same_interval, FiniteMeasure, MERGE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSpec {
    /// `c_u (ξ − x)⁺ + c_o (x − ξ)⁺`.
    Newsvendor { underage: f64, overage: f64, upper: f64 },
    /// `x · 1{ξ ≥ x}`, maximized.
    Pricing { upper: f64 },
    /// `ξ · 1{ξ ≤ x} + (b + x) · 1{ξ > x}`: rent until day `x`, then buy.
    SkiRental { buy: f64, upper: f64 },
    /// `|ξ − x|^α` with `0 < α ≤ 1`, a cost that is Hölder but not
    /// Lipschitz in `ξ`.
    Holder { alpha: f64, upper: f64 },
}

impl ProblemSpec {
    pub fn newsvendor(underage: f64, overage: f64, upper: f64) -> Result<Self> {
        Self::Newsvendor { underage, overage, upper }.validated()
    }

    pub fn pricing(upper: f64) -> Result<Self> {
        Self::Pricing { upper }.validated()
    }

    pub fn ski_rental(buy: f64, upper: f64) -> Result<Self> {
        Self::SkiRental { buy, upper }.validated()
    }

    pub fn holder(alpha: f64, upper: f64) -> Result<Self> {
        Self::Holder { alpha, upper }.validated()
    }

    /// Checks the parameter invariants and returns `self`.
    pub fn validated(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidProblem(msg));
        let m = self.upper();
        if !(m.is_finite() && m > 0.0) {
            return bad(format!("M = {m} must be positive"));
        }
        match self {
            Self::Newsvendor { underage, overage, .. } => {
                if !(underage.is_finite() && overage.is_finite() && underage > 0.0 && overage > 0.0) {
                    return bad(format!("c_u = {underage}, c_o = {overage} must be positive"));
                }
            }
            Self::SkiRental { buy, .. } => {
                if !(buy > 0.0 && buy < m) {
                    return bad(format!("need 0 < b < M, got b = {buy}, M = {m}"));
                }
            }
            Self::Holder { alpha, .. } => {
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return bad(format!("need 0 < alpha <= 1, got {alpha}"));
                }
            }
            Self::Pricing { .. } => {}
        }
        Ok(self)
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Self::Newsvendor { upper, .. }
            | Self::Pricing { upper }
            | Self::SkiRental { upper, .. }
            | Self::Holder { upper, .. } => upper,
        }
    }

    pub fn sense(&self) -> Sense {
        match self {
            Self::Pricing { .. } => Sense::Maximize,
            _ => Sense::Minimize,
        }
    }

    /// Short tag used in CSV output.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Newsvendor { .. } => "newsvendor",
            Self::Pricing { .. } => "pricing",
            Self::SkiRental { .. } => "ski",
            Self::Holder { .. } => "holder",
        }
    }

    /// Problem constants besides `M`, in the order they appear in the text form.
    pub fn params(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Self::Newsvendor { underage, overage, .. } => (Some(underage), Some(overage)),
            Self::SkiRental { buy, .. } => (Some(buy), None),
            Self::Holder { alpha, .. } => (Some(alpha), None),
            Self::Pricing { .. } => (None, None),
        }
    }

    /// `sup_{x, ξ} |g(x, ξ)|`.
    pub fn objective_sup(&self) -> f64 {
        match *self {
            Self::Newsvendor { underage, overage, upper } => underage.max(overage) * upper,
            Self::Pricing { upper } => upper,
            Self::SkiRental { buy, upper } => upper + buy,
            Self::Holder { alpha, upper } => upper.powf(alpha),
        }
    }

    fn check_point(&self, what: &'static str, value: f64) -> Result<f64> {
        let upper = self.upper();
        if !(value >= -MERGE_TOL && value <= upper + MERGE_TOL) {
            return Err(Error::OutOfRange { what, value, upper });
        }
        Ok(value.clamp(0.0, upper))
    }

    fn check_measure(&self, m: &FiniteMeasure) -> Result<()> {
        same_interval(self.upper(), m.upper())
    }

    // g without range checks.
    fn g(&self, x: f64, xi: f64) -> f64 {
        match *self {
            Self::Newsvendor { underage, overage, .. } => {
                underage * (xi - x).max(0.0) + overage * (x - xi).max(0.0)
            }
            Self::Pricing { .. } => {
                if xi >= x {
                    x
                } else {
                    0.0
                }
            }
            Self::SkiRental { buy, .. } => {
                if xi <= x {
                    xi
                } else {
                    buy + x
                }
            }
            Self::Holder { alpha, .. } => (xi - x).abs().powf(alpha),
        }
    }

    /// Pointwise objective `g(x, ξ)`.
    pub fn objective(&self, x: f64, xi: f64) -> Result<f64> {
        let x = self.check_point("action", x)?;
        let xi = self.check_point("realization", xi)?;
        Ok(self.g(x, xi))
    }

    /// Exact `G(x|m) = E_m[g(x, ξ)]`.
    pub fn expected_objective(&self, x: f64, m: &FiniteMeasure) -> Result<f64> {
        self.check_measure(m)?;
        let x = self.check_point("action", x)?;
        Ok(self.expected_unchecked(x, m))
    }

    pub(crate) fn expected_unchecked(&self, x: f64, m: &FiniteMeasure) -> f64 {
        m.atoms().map(|(xi, w)| w * self.g(x, xi)).sum()
    }

    /// Optimal action for `m`.
    pub fn oracle(&self, m: &FiniteMeasure) -> Result<f64> {
        self.check_measure(m)?;
        Ok(self.oracle_unchecked(m))
    }

    pub(crate) fn oracle_unchecked(&self, m: &FiniteMeasure) -> f64 {
        match *self {
            Self::Newsvendor { underage, overage, .. } => m
                .quantile(underage / (underage + overage))
                .expect("critical fractile lies in (0, 1)"),
            Self::Pricing { .. } => {
                let mut tail = 1.0;
                let scored: Vec<(f64, f64)> = m
                    .atoms()
                    .map(|(s, w)| {
                        let v = s * tail;
                        tail = (tail - w).max(0.0);
                        (s, v)
                    })
                    .collect();
                pick(&scored, Sense::Maximize, Tie::Smallest)
            }
            Self::SkiRental { buy, upper } => pick(&ski_candidates(buy, upper, m), Sense::Minimize, Tie::Largest),
            Self::Holder { upper, .. } => {
                let mut xs = Vec::with_capacity(m.len() + 2);
                xs.push(0.0);
                xs.extend_from_slice(m.support());
                xs.push(upper);
                xs.dedup();
                let scored: Vec<(f64, f64)> = xs.into_iter().map(|x| (x, self.expected_unchecked(x, m))).collect();
                pick(&scored, Sense::Minimize, Tie::Smallest)
            }
        }
    }

    /// `opt(m) = G(oracle(m) | m)`.
    pub fn opt_value(&self, m: &FiniteMeasure) -> Result<f64> {
        let x = self.oracle(m)?;
        Ok(self.expected_unchecked(x, m))
    }
}

#[derive(Clone, Copy)]
enum Tie {
    Smallest,
    Largest,
}

// `scored` is sorted by action. Values within a relative 1e-12 of the best
// count as ties.
fn pick(scored: &[(f64, f64)], sense: Sense, tie: Tie) -> f64 {
    let better = |a: f64, b: f64| match sense {
        Sense::Minimize => a < b,
        Sense::Maximize => a > b,
    };
    let best = scored
        .iter()
        .map(|&(_, v)| v)
        .reduce(|a, b| if better(b, a) { b } else { a })
        .expect("candidate set is nonempty");
    let tol = 1e-12 * best.abs().max(1.0);
    let near = |&&(_, v): &&(f64, f64)| (v - best).abs() <= tol;
    let chosen = match tie {
        Tie::Smallest => scored.iter().find(near),
        Tie::Largest => scored.iter().rev().find(near),
    };
    chosen.expect("best is attained").0
}

// Ski-rental costs at {0} ∪ support ∪ {M} in O(n).
fn ski_candidates(buy: f64, upper: f64, m: &FiniteMeasure) -> Vec<(f64, f64)> {
    let n = m.len();
    let mut tails = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        tails[i] = acc;
        acc += m.weights()[i];
    }
    let mut out = Vec::with_capacity(n + 2);
    if m.support()[0] > 0.0 {
        out.push((0.0, buy));
    }
    let mut rented = 0.0;
    for (i, (s, w)) in m.atoms().enumerate() {
        rented += w * s;
        out.push((s, rented + (buy + s) * tails[i]));
    }
    if m.support()[n - 1] < upper {
        out.push((upper, rented));
    }
    out
}

/// Closed form `b(1 − F(x)) + x − ∫₀ˣ F` of the ski-rental cost.
pub fn ski_closed_form(buy: f64, x: f64, m: &FiniteMeasure) -> f64 {
    buy * (1.0 - m.cdf(x)) + x - m.cdf_integral(x)
}

/// Integer-day ski-rental cost `Σ_{i=1}^{k} P(ξ ≥ i) + b · P(ξ ≥ k + 1)`.
pub fn ski_discrete_cost(k: u64, m: &FiniteMeasure, buy: f64) -> Result<f64> {
    if let Some(&s) = m.support().iter().find(|s| (*s - s.round()).abs() > 1e-9) {
        return Err(Error::NonIntegerSupport(s));
    }
    let rent: f64 = (1..=k).map(|i| m.survival(i as f64 - 0.5)).sum();
    Ok(rent + buy * m.survival(k as f64 + 0.5))
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Newsvendor { underage, overage, upper } => {
                write!(f, "newsvendor:cu={underage},co={overage},m={upper}")
            }
            Self::Pricing { upper } => write!(f, "pricing:m={upper}"),
            Self::SkiRental { buy, upper } => write!(f, "ski:b={buy},m={upper}"),
            Self::Holder { alpha, upper } => write!(f, "holder:alpha={alpha},m={upper}"),
        }
    }
}

impl FromStr for ProblemSpec {
    type Err = Error;

    /// Parses `newsvendor:cu=..,co=..,m=..`, `pricing:m=..`, `ski:b=..,m=..`
    /// or `holder:alpha=..,m=..`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (tag, rest) = s.split_once(':').unwrap_or((s, ""));
        let kv = parse_kv(rest)?;
        let get = |key: &str| -> Result<f64> {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::BadParam(key.to_string()))
        };
        match tag.to_ascii_lowercase().as_str() {
            "newsvendor" | "nv" => Self::newsvendor(get("cu")?, get("co")?, get("m")?),
            "pricing" => Self::pricing(get("m")?),
            "ski" | "ski_rental" | "ski-rental" => Self::ski_rental(get("b")?, get("m")?),
            "holder" => Self::holder(get("alpha")?, get("m")?),
            other => Err(Error::Parse(format!("unknown problem `{other}`"))),
        }
    }
}

/// Parses `k1=v1,k2=v2` with numeric values; keys are lowercased.
pub fn parse_kv(s: &str) -> Result<Vec<(String, f64)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("`{p}`: expected key=value")))?;
            let v = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`{v}` is not a number")))?;
            Ok((k.trim().to_ascii_lowercase(), v))
        })
        .collect()
}
