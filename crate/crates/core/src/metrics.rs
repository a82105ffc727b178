//! Exact Kolmogorov, total-variation and Wasserstein-1 distances between
//! finite measures on a common interval.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::{same_interval, FiniteMeasure, MERGE_TOL};

/// Additive slack for ball membership; adversarial constructions sit exactly
/// on the boundary.
pub const BALL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceKind {
    Kolmogorov,
    TotalVariation,
    Wasserstein,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 3] = [
        DistanceKind::Kolmogorov,
        DistanceKind::TotalVariation,
        DistanceKind::Wasserstein,
    ];

    pub fn distance(self, a: &FiniteMeasure, b: &FiniteMeasure) -> Result<f64> {
        match self {
            DistanceKind::Kolmogorov => kolmogorov(a, b),
            DistanceKind::TotalVariation => total_variation(a, b),
            DistanceKind::Wasserstein => wasserstein1(a, b),
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceKind::Kolmogorov => "kolmogorov",
            DistanceKind::TotalVariation => "tv",
            DistanceKind::Wasserstein => "wasserstein",
        })
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kolmogorov" | "k" => Ok(DistanceKind::Kolmogorov),
            "tv" | "total_variation" | "total-variation" => Ok(DistanceKind::TotalVariation),
            "wasserstein" | "w" | "w1" => Ok(DistanceKind::Wasserstein),
            other => Err(Error::Parse(format!("unknown distance `{other}`"))),
        }
    }
}

/// One merged breakpoint: position, both atom weights and both CDF values
/// just after it.
struct Break {
    x: f64,
    wa: f64,
    wb: f64,
    fa: f64,
    fb: f64,
}

fn merged(a: &FiniteMeasure, b: &FiniteMeasure) -> Result<Vec<Break>> {
    same_interval(a.upper(), b.upper())?;
    let (sa, sb) = (a.support(), b.support());
    let (wa, wb) = (a.weights(), b.weights());
    let mut out = Vec::with_capacity(sa.len() + sb.len());
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0, 0.0);
    while i < sa.len() || j < sb.len() {
        let take_a = j == sb.len() || (i < sa.len() && sa[i] <= sb[j] + MERGE_TOL);
        let take_b = i == sa.len() || (j < sb.len() && sb[j] <= sa[i] + MERGE_TOL);
        let mut br = Break {
            x: f64::INFINITY,
            wa: 0.0,
            wb: 0.0,
            fa,
            fb,
        };
        if take_a {
            br.x = sa[i];
            br.wa = wa[i];
            fa = a.cumulative[i];
            i += 1;
        }
        if take_b {
            br.x = br.x.min(sb[j]);
            br.wb = wb[j];
            fb = b.cumulative[j];
            j += 1;
        }
        br.fa = fa;
        br.fb = fb;
        out.push(br);
    }
    Ok(out)
}

/// `sup_t |F(t) − H(t)|`.
pub fn kolmogorov(a: &FiniteMeasure, b: &FiniteMeasure) -> Result<f64> {
    Ok(merged(a, b)?
        .iter()
        .map(|br| (br.fa - br.fb).abs())
        .fold(0.0, f64::max))
}

/// `sup_A |a(A) − b(A)| = ½ Σ |a(s) − b(s)|`.
pub fn total_variation(a: &FiniteMeasure, b: &FiniteMeasure) -> Result<f64> {
    let half_l1: f64 = merged(a, b)?.iter().map(|br| (br.wa - br.wb).abs()).sum::<f64>() / 2.0;
    Ok(half_l1.min(1.0))
}

/// `∫₀ᴹ |F(t) − H(t)| dt`.
pub fn wasserstein1(a: &FiniteMeasure, b: &FiniteMeasure) -> Result<f64> {
    let br = merged(a, b)?;
    Ok(br
        .windows(2)
        .map(|w| (w[0].fa - w[0].fb).abs() * (w[1].x - w[0].x))
        .sum())
}

/// Whether `m` lies in the `eps`-ball around `center`.
pub fn in_ball(center: &FiniteMeasure, m: &FiniteMeasure, kind: DistanceKind, eps: f64) -> Result<bool> {
    Ok(kind.distance(center, m)? <= eps + BALL_SLACK)
}
