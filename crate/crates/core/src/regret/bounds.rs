//! Closed-form lower and upper bounds on uniform DRO regret.
//!
//! The `Saa` column bounds the regret of SAA itself. The `Best` column
//! pairs the minimax lower bound (valid for every policy) with the upper
//! bound of the recommended robustified policy.

use crate::error::{Error, Result};
use crate::metrics::DistanceKind;
use crate::policies::{recommended_parameter, PolicyKind, PolicySpec};
use crate::problems::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

fn pair(lower: f64, upper: f64) -> Bounds {
    Bounds { lower, upper }
}

pub fn analytic_bounds(p: &ProblemSpec, kind: DistanceKind, pol: PolicyKind, eps: f64) -> Result<Bounds> {
    use DistanceKind::{Kolmogorov as K, TotalVariation as TV, Wasserstein as W};
    use PolicyKind::{Best, Saa};

    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::EpsNonPositive(eps));
    }
    Ok(match (*p, kind, pol) {
        (ProblemSpec::Newsvendor { underage, overage, upper }, K | TV, _) => {
            pair((underage + overage) / 2.0 * upper * eps, 2.0 * underage.max(overage) * upper * eps)
        }
        (ProblemSpec::Newsvendor { underage, overage, .. }, W, _) => {
            pair((underage + overage) / 2.0 * eps, 2.0 * underage.max(overage) * eps)
        }

        (ProblemSpec::Pricing { upper }, K | TV, _) => pair(upper * eps / 2.0, 2.0 * upper * eps),
        (ProblemSpec::Pricing { upper }, W, Saa) => pair(upper, upper),
        (ProblemSpec::Pricing { upper }, W, Best) => {
            let r = (upper * eps).sqrt();
            pair(r / 4.0, 4.0 * r)
        }

        (ProblemSpec::SkiRental { buy, upper }, K | TV, Saa) => pair(upper * eps, 2.0 * (upper + buy) * eps),
        (ProblemSpec::SkiRental { buy, .. }, K | TV, Best) => {
            if eps >= 1.0 {
                return Err(Error::EpsTooLarge {
                    eps,
                    reason: "the capped-policy bound needs eps < 1".into(),
                });
            }
            pair(eps * buy / 8.0, buy * ((1.0 / eps).ln() + 2.0) * eps)
        }
        (ProblemSpec::SkiRental { buy, .. }, W, Saa) => pair(buy / 2.0, 2.0 * (buy + eps)),
        (ProblemSpec::SkiRental { buy, .. }, W, Best) => {
            let r = (buy * eps).sqrt();
            pair(r / 4.0, 4.0 * r + 2.0 * eps)
        }

        // Only the SAA upper bound through Bernstein approximation exists;
        // regret is nonnegative, so zero is the trivial lower bound.
        (ProblemSpec::Holder { alpha, upper }, K, Saa) => {
            let g = upper.powf(alpha);
            pair(0.0, 5.0 * (g * eps).powf(alpha / (alpha + 2.0)) + 4.0 * g * eps)
        }
        (ProblemSpec::Holder { .. }, _, _) => {
            return Err(Error::NoBoundInPaper(format!("{} / {kind} / {pol:?}", p.tag())))
        }
    })
}

/// The bound-table column a concrete policy belongs to, if any.
pub fn matching_cell(p: &ProblemSpec, kind: DistanceKind, pol: &PolicySpec, eps: f64) -> Option<PolicyKind> {
    if *pol == PolicySpec::Saa {
        return Some(PolicyKind::Saa);
    }
    match recommended_parameter(p, kind, eps) {
        Ok(rec) if same_policy(&rec, pol) => Some(PolicyKind::Best),
        _ => None,
    }
}

fn same_policy(a: &PolicySpec, b: &PolicySpec) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(1.0);
    match (a, b) {
        (PolicySpec::Saa, PolicySpec::Saa) => true,
        (PolicySpec::DeltaSaa(x), PolicySpec::DeltaSaa(y)) | (PolicySpec::Capped(x), PolicySpec::Capped(y)) => close(*x, *y),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let k = DistanceKind::Kolmogorov;
        let w = DistanceKind::Wasserstein;
        let nv = ProblemSpec::newsvendor(1.0, 1.0, 1.0).unwrap();
        assert_eq!(analytic_bounds(&nv, k, PolicyKind::Saa, 0.05).unwrap(), pair(0.05, 0.1));

        let pr = ProblemSpec::pricing(1.0).unwrap();
        let b = analytic_bounds(&pr, w, PolicyKind::Best, 0.04).unwrap();
        assert!((b.lower - 0.05).abs() < 1e-15 && (b.upper - 0.8).abs() < 1e-15);
        assert_eq!(analytic_bounds(&pr, w, PolicyKind::Saa, 0.04).unwrap(), pair(1.0, 1.0));

        let ski = ProblemSpec::ski_rental(1.0, 10.0).unwrap();
        let b = analytic_bounds(&ski, k, PolicyKind::Best, 0.01).unwrap();
        assert!((b.lower - 0.00125).abs() < 1e-15);
        assert!((b.upper - 0.0661).abs() < 1e-4);

        let ski2 = ProblemSpec::ski_rental(2.0, 10.0).unwrap();
        assert_eq!(analytic_bounds(&ski2, w, PolicyKind::Saa, 0.1).unwrap(), pair(1.0, 4.2));
    }

    #[test]
    fn lower_never_exceeds_upper() {
        let problems = [
            ProblemSpec::newsvendor(2.0, 0.5, 3.0).unwrap(),
            ProblemSpec::pricing(2.0).unwrap(),
            ProblemSpec::ski_rental(1.5, 10.0).unwrap(),
        ];
        for p in problems {
            for kind in DistanceKind::ALL {
                for pol in [PolicyKind::Saa, PolicyKind::Best] {
                    for eps in [1e-4, 0.01, 0.2] {
                        let b = analytic_bounds(&p, kind, pol, eps).unwrap();
                        assert!(b.lower <= b.upper, "{p} {kind} {pol:?} {eps}");
                    }
                }
            }
        }
    }

    #[test]
    fn holder_has_only_the_saa_kolmogorov_cell() {
        let h = ProblemSpec::holder(0.5, 1.0).unwrap();
        assert!(analytic_bounds(&h, DistanceKind::Kolmogorov, PolicyKind::Saa, 0.1).is_ok());
        assert!(matches!(
            analytic_bounds(&h, DistanceKind::Wasserstein, PolicyKind::Saa, 0.1),
            Err(Error::NoBoundInPaper(_))
        ));
    }

    #[test]
    fn cells() {
        let pr = ProblemSpec::pricing(1.0).unwrap();
        let w = DistanceKind::Wasserstein;
        assert_eq!(matching_cell(&pr, w, &PolicySpec::Saa, 0.04), Some(PolicyKind::Saa));
        assert_eq!(matching_cell(&pr, w, &PolicySpec::DeltaSaa(-0.2), 0.04), Some(PolicyKind::Best));
        assert_eq!(matching_cell(&pr, w, &PolicySpec::DeltaSaa(-0.3), 0.04), None);
    }
}
