//! Finite-support probability measures on a closed interval `[0, M]`.
//!
//! Every distribution in the crate (true, historical, empirical, adversarial)
//! is a [`FiniteMeasure`]. Construction canonicalizes the input so that two
//! measures describing the same distribution compare equal.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Points closer than this are treated as the same atom.
pub const MERGE_TOL: f64 = 1e-12;
/// Accepted deviation of the input weight sum from 1.
pub const NORM_TOL: f64 = 1e-9;
/// Slack used when comparing cumulative probabilities against a level.
const LEVEL_TOL: f64 = 1e-12;

/// Probability measure with finitely many atoms in `[0, upper]`.
///
/// The support is strictly increasing, every weight is positive and the
/// weights sum to one up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure {
    support: Vec<f64>,
    weights: Vec<f64>,
    pub(crate) cumulative: Vec<f64>,
    upper: f64,
}

impl FiniteMeasure {
    /// Validates and canonicalizes `(points, weights)`.
    ///
    /// Atoms within [`MERGE_TOL`] of each other are merged (the smallest
    /// position is kept), zero weights are dropped and the weights are
    /// renormalized to sum to one.
    pub fn new(points: Vec<f64>, weights: Vec<f64>, upper: f64) -> Result<Self> {
        check_upper(upper)?;
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        if points.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        let mut atoms = Vec::with_capacity(points.len());
        let mut total = 0.0;
        for (&p, &w) in points.iter().zip(&weights) {
            if !p.is_finite() {
                return Err(Error::NonFinite(p));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite(w));
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight(w));
            }
            let p = clamp_point(p, upper)?;
            total += w;
            if w > 0.0 {
                atoms.push((p, w));
            }
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::WeightsNotNormalized(total));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut support: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut merged: Vec<f64> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            match support.last() {
                Some(&first) if p - first <= MERGE_TOL => *merged.last_mut().unwrap() += w,
                _ => {
                    support.push(p);
                    merged.push(w);
                }
            }
        }
        Ok(Self::finish(support, merged, upper))
    }

    /// Dirac mass at `x`.
    pub fn point_mass(x: f64, upper: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0], upper)
    }

    /// Empirical measure of `samples`: one atom per distinct value with
    /// weight `count / n`.
    pub fn empirical_from(samples: &[f64], upper: f64) -> Result<Self> {
        check_upper(upper)?;
        if samples.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        let mut xs = Vec::with_capacity(samples.len());
        for &s in samples {
            if !s.is_finite() {
                return Err(Error::NonFinite(s));
            }
            xs.push(clamp_point(s, upper)?);
        }
        xs.sort_by(f64::total_cmp);

        let n = xs.len() as f64;
        let mut support = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for x in xs {
            match support.last() {
                Some(&first) if x - first <= MERGE_TOL => *counts.last_mut().unwrap() += 1,
                _ => {
                    support.push(x);
                    counts.push(1);
                }
            }
        }
        let weights = counts.into_iter().map(|c| c as f64 / n).collect();
        Ok(Self::finish(support, weights, upper))
    }

    /// Convex combination `Σ λᵢ mᵢ` of measures sharing one interval.
    pub fn mixture(components: &[(f64, &FiniteMeasure)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::EmptyMeasure);
        };
        let upper = first.upper;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for &(lambda, m) in components {
            same_interval(upper, m.upper)?;
            for (x, w) in m.atoms() {
                points.push(x);
                weights.push(lambda * w);
            }
        }
        Self::new(points, weights, upper)
    }

    // Inputs here are sorted, merged and strictly positive.
    fn finish(support: Vec<f64>, mut weights: Vec<f64>, upper: f64) -> Self {
        let total: f64 = weights.iter().sum();
        // Renormalizing an already normalized vector would perturb the last
        // bits and break idempotence, so only fix sums that are visibly off.
        if (total - 1.0).abs() > 4.0 * weights.len() as f64 * f64::EPSILON {
            for w in &mut weights {
                *w /= total;
            }
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc.min(1.0));
        }
        *cumulative.last_mut().expect("nonempty") = 1.0;
        Self {
            support,
            weights,
            cumulative,
            upper,
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Right endpoint `M` of the interval.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `(point, weight)` pairs in increasing point order.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.weights.iter().copied())
    }

    /// `P(ξ ≤ t)`.
    pub fn cdf(&self, t: f64) -> f64 {
        let k = self.support.partition_point(|&s| s <= t);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// `P(ξ < t)`, the left limit of the CDF.
    pub fn cdf_left(&self, t: f64) -> f64 {
        let k = self.support.partition_point(|&s| s < t);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// `P(ξ ≥ t)`.
    pub fn survival(&self, t: f64) -> f64 {
        1.0 - self.cdf_left(t)
    }

    /// Weight of the atom at `x`, zero if `x` is not (within tolerance) a
    /// support point.
    pub fn mass_at(&self, x: f64) -> f64 {
        let k = self.support.partition_point(|&s| s < x - MERGE_TOL);
        match self.support.get(k) {
            Some(&s) if (s - x).abs() <= MERGE_TOL => self.weights[k],
            _ => 0.0,
        }
    }

    /// `∫₀ˣ F(t) dt`.
    pub fn cdf_integral(&self, x: f64) -> f64 {
        self.atoms()
            .take_while(|&(s, _)| s <= x)
            .map(|(s, w)| w * (x - s))
            .sum()
    }

    /// Generalized inverse `inf{x : F(x) ≥ q}`; `q = 0` gives the smallest
    /// support point.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::QOutOfRange(q));
        }
        let k = self.cumulative.partition_point(|&c| c < q - LEVEL_TOL);
        Ok(self.support[k.min(self.len() - 1)])
    }

    pub fn mean(&self) -> f64 {
        self.atoms().map(|(x, w)| x * w).sum()
    }

    /// One inverse-CDF draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.support[k.min(self.len() - 1)]
    }

    /// `n` i.i.d. draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }
}

fn check_upper(upper: f64) -> Result<()> {
    if upper.is_finite() && upper > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidUpper(upper))
    }
}

// Points a hair outside the interval come from float noise in the
// constructions and are pulled back in.
fn clamp_point(p: f64, upper: f64) -> Result<f64> {
    if p < -MERGE_TOL || p > upper + MERGE_TOL {
        return Err(Error::PointOutOfRange { point: p, upper });
    }
    Ok(p.clamp(0.0, upper))
}

pub(crate) fn same_interval(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() <= MERGE_TOL {
        Ok(())
    } else {
        Err(Error::MismatchedInterval(a, b))
    }
}

impl fmt::Display for FiniteMeasure {
    /// `p1:w1,p2:w2,...@upper`, with shortest round-trip float formatting.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, w)) in self.atoms().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}:{w}")?;
        }
        write!(f, "@{}", self.upper)
    }
}

impl FromStr for FiniteMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (atoms, upper) = s
            .trim()
            .rsplit_once('@')
            .ok_or_else(|| Error::Parse(format!("`{s}`: missing `@upper`")))?;
        let upper = parse_f64(upper)?;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for atom in atoms.split(',') {
            let (p, w) = atom
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("`{atom}`: expected point:weight")))?;
            points.push(parse_f64(p)?);
            weights.push(parse_f64(w)?);
        }
        Self::new(points, weights, upper)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a number")))
}
