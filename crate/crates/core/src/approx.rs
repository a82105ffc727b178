//! How well `g(x, ·)` is controlled by each distance: total variation,
//! Lipschitz constant and span of the objective in `ξ`, the resulting SAA
//! diagnostic, and Bernstein polynomials for the Hölder boundary case.

use std::fmt;

use crate::error::{Error, Result};
use crate::metrics::DistanceKind;
use crate::problems::ProblemSpec;

/// Regularity of `ξ ↦ g(x, ξ)` on `[0, M]`. Infinite values are
/// `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveStats {
    pub total_variation: f64,
    pub lipschitz: f64,
    pub span: f64,
}

/// Closed-form stats of `g(x, ·)`.
pub fn objective_stats(p: &ProblemSpec, x: f64) -> Result<ObjectiveStats> {
    let m = p.upper();
    if !(0.0..=m).contains(&x) {
        return Err(Error::OutOfRange {
            what: "action",
            value: x,
            upper: m,
        });
    }
    let stats = |total_variation, lipschitz, span| ObjectiveStats {
        total_variation,
        lipschitz,
        span,
    };
    Ok(match *p {
        ProblemSpec::Newsvendor { underage, overage, .. } => {
            // Slope −c_o on [0, x], +c_u on [x, M].
            let lip = match (x > 0.0, x < m) {
                (true, true) => underage.max(overage),
                (true, false) => overage,
                _ => underage,
            };
            stats(overage * x + underage * (m - x), lip, (overage * x).max(underage * (m - x)))
        }
        ProblemSpec::Pricing { .. } => {
            if x > 0.0 {
                stats(x, f64::INFINITY, x)
            } else {
                stats(0.0, 0.0, 0.0)
            }
        }
        ProblemSpec::SkiRental { buy, .. } => {
            // Rises with slope 1 up to x, then jumps by b; no jump at x = M.
            if x < m {
                stats(x + buy, f64::INFINITY, x + buy)
            } else {
                stats(m, 1.0, m)
            }
        }
        ProblemSpec::Holder { alpha, .. } => {
            let lip = if alpha == 1.0 { 1.0 } else { f64::INFINITY };
            stats(x.powf(alpha) + (m - x).powf(alpha), lip, x.max(m - x).powf(alpha))
        }
    })
}

/// Stats of `g(x, ·)` sampled on `grid_n` evenly spaced points. They never
/// exceed the closed forms and converge to them as `grid_n` grows.
pub fn objective_stats_numeric(p: &ProblemSpec, x: f64, grid_n: usize) -> Result<ObjectiveStats> {
    if grid_n < 2 {
        return Err(Error::BadParam("grid_n must be at least 2".into()));
    }
    let m = p.upper();
    let h = m / (grid_n - 1) as f64;
    let f: Vec<f64> = (0..grid_n)
        .map(|i| p.objective(x, (i as f64 * h).min(m)))
        .collect::<Result<_>>()?;
    let mut tv = 0.0;
    let mut lip: f64 = 0.0;
    for w in f.windows(2) {
        let d = (w[1] - w[0]).abs();
        tv += d;
        lip = lip.max(d / h);
    }
    let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ObjectiveStats {
        total_variation: tv,
        lipschitz: lip,
        span: hi - lo,
    })
}

/// `sup_x` of each stat.
pub fn sup_stats(p: &ProblemSpec) -> ObjectiveStats {
    let m = p.upper();
    match *p {
        ProblemSpec::Newsvendor { underage, overage, .. } => {
            let c = underage.max(overage);
            ObjectiveStats {
                total_variation: c * m,
                lipschitz: c,
                span: c * m,
            }
        }
        ProblemSpec::Pricing { .. } => ObjectiveStats {
            total_variation: m,
            lipschitz: f64::INFINITY,
            span: m,
        },
        ProblemSpec::SkiRental { buy, .. } => ObjectiveStats {
            total_variation: m + buy,
            lipschitz: f64::INFINITY,
            span: m + buy,
        },
        ProblemSpec::Holder { alpha, .. } => ObjectiveStats {
            total_variation: 2.0 * (m / 2.0).powf(alpha),
            lipschitz: if alpha == 1.0 { 1.0 } else { f64::INFINITY },
            span: m.powf(alpha),
        },
    }
}

/// Whether SAA's uniform DRO regret vanishes linearly in `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SaaDiagnostic {
    /// Regret is at most `coefficient · ε`.
    Finite(f64),
    Infinite,
}

impl fmt::Display for SaaDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SaaDiagnostic::Finite(c) => write!(f, "finite {c}"),
            SaaDiagnostic::Infinite => f.write_str("infinite"),
        }
    }
}

/// Twice the sup of the stat generating `kind`: total variation for
/// Kolmogorov, Lipschitz constant for Wasserstein, span for TV.
pub fn saa_diagnostic(p: &ProblemSpec, kind: DistanceKind) -> SaaDiagnostic {
    let s = sup_stats(p);
    let c = match kind {
        DistanceKind::Kolmogorov => s.total_variation,
        DistanceKind::Wasserstein => s.lipschitz,
        DistanceKind::TotalVariation => s.span,
    };
    if c.is_finite() {
        SaaDiagnostic::Finite(2.0 * c)
    } else {
        SaaDiagnostic::Infinite
    }
}

fn ln_factorials(q: usize) -> Vec<f64> {
    let mut out = vec![0.0; q + 1];
    for i in 1..=q {
        out[i] = out[i - 1] + (i as f64).ln();
    }
    out
}

fn bernstein_with(f: &dyn Fn(f64) -> f64, q: usize, y: f64, ln_fact: &[f64], fvals: &[f64]) -> f64 {
    if y <= 0.0 {
        return f(0.0);
    }
    if y >= 1.0 {
        return f(1.0);
    }
    let (ly, l1y) = (y.ln(), (1.0 - y).ln());
    (0..=q)
        .map(|p| {
            let ln_b = ln_fact[q] - ln_fact[p] - ln_fact[q - p] + p as f64 * ly + (q - p) as f64 * l1y;
            fvals[p] * ln_b.exp()
        })
        .sum()
}

/// `B_q(f)(y) = Σ_p f(p/q) · C(q, p) · yᵖ (1−y)^{q−p}`, evaluated in log
/// space so large degrees do not overflow.
pub fn bernstein_eval(f: &dyn Fn(f64) -> f64, q: usize, y: f64) -> Result<f64> {
    if q == 0 {
        return Err(Error::DegreeZero);
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::OutOfRange {
            what: "y",
            value: y,
            upper: 1.0,
        });
    }
    let fvals: Vec<f64> = (0..=q).map(|p| f(p as f64 / q as f64)).collect();
    Ok(bernstein_with(f, q, y, &ln_factorials(q), &fvals))
}

/// `max |B_q(f) − f|` over `grid_n` evenly spaced points of `[0, 1]`.
pub fn bernstein_max_error(f: &dyn Fn(f64) -> f64, q: usize, grid_n: usize) -> Result<f64> {
    if q == 0 {
        return Err(Error::DegreeZero);
    }
    let ln_fact = ln_factorials(q);
    let fvals: Vec<f64> = (0..=q).map(|p| f(p as f64 / q as f64)).collect();
    let n = grid_n.max(2);
    Ok((0..n)
        .map(|i| {
            let y = i as f64 / (n - 1) as f64;
            (bernstein_with(f, q, y, &ln_fact, &fvals) - f(y)).abs()
        })
        .fold(0.0, f64::max))
}

/// Popoviciu's estimate `‖B_q f − f‖∞ ≤ (5/4) ω(q^{−1/2})` on a 10⁴-point
/// grid.
pub fn bernstein_error_check(f: &dyn Fn(f64) -> f64, omega: &dyn Fn(f64) -> f64, q: usize) -> Result<bool> {
    let err = bernstein_max_error(f, q, 10_000)?;
    Ok(err <= 1.25 * omega(1.0 / (q as f64).sqrt()) + 1e-9)
}
