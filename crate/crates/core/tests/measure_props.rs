mod common;

use common::measure;
use hetero_dro::{kolmogorov, total_variation, wasserstein1, DistanceKind, FiniteMeasure};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn metric_axioms(a in measure(2.0, 6), b in measure(2.0, 6), c in measure(2.0, 6)) {
        for kind in DistanceKind::ALL {
            let d = |x: &FiniteMeasure, y: &FiniteMeasure| kind.distance(x, y).unwrap();
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &b) >= 0.0);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + TOL);
        }
    }

    #[test]
    fn domination_chain(a in measure(3.0, 6), b in measure(3.0, 6)) {
        let (w, k, tv) = (wasserstein1(&a, &b).unwrap(), kolmogorov(&a, &b).unwrap(), total_variation(&a, &b).unwrap());
        prop_assert!(w <= 3.0 * k + TOL, "W = {w}, K = {k}");
        prop_assert!(k <= tv + TOL, "K = {k}, TV = {tv}");
        prop_assert!(tv <= 1.0 && k <= 1.0 && w <= 3.0 + TOL);
    }

    #[test]
    fn convex_in_first_argument(a in measure(1.0, 5), a2 in measure(1.0, 5), b in measure(1.0, 5), lam in 0.0..=1.0f64) {
        let mix = FiniteMeasure::mixture(&[(lam, &a), (1.0 - lam, &a2)]).unwrap();
        for kind in DistanceKind::ALL {
            let d = |x: &FiniteMeasure| kind.distance(x, &b).unwrap();
            prop_assert!(d(&mix) <= lam * d(&a) + (1.0 - lam) * d(&a2) + TOL, "{kind}");
        }
    }

    #[test]
    fn quantile_inverts_cdf(m in measure(1.0, 6), q in 1e-9..=1.0f64) {
        let x = m.quantile(q).unwrap();
        prop_assert!(m.cdf(x) >= q - 1e-12);
        // Left inverse: nothing smaller reaches level q.
        prop_assert!(m.cdf_left(x) < q + 1e-12);
    }

    #[test]
    fn canonicalization_is_idempotent(m in measure(5.0, 8)) {
        let again = FiniteMeasure::new(m.support().to_vec(), m.weights().to_vec(), m.upper()).unwrap();
        prop_assert_eq!(&again, &m);
        let text: FiniteMeasure = m.to_string().parse().unwrap();
        prop_assert_eq!(text, m);
    }

    #[test]
    fn cdf_integral_matches_mean(m in measure(2.0, 6)) {
        // E ξ = ∫₀ᴹ (1 − F).
        prop_assert!((2.0 - m.cdf_integral(2.0) - m.mean()).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_bounded_by_wasserstein(a in measure(1.0, 6), b in measure(1.0, 6), x1 in 0.0..1.0f64, gap in 1e-3..1.0f64) {
        let x2 = (x1 + gap).min(1.0);
        prop_assume!(x2 > x1);
        let w = wasserstein1(&a, &b).unwrap();
        prop_assert!(a.cdf(x1) <= b.cdf(x2) + w / (x2 - x1) + TOL);
    }
}

#[test]
fn distances_reject_mismatched_intervals() {
    let a = FiniteMeasure::point_mass(0.5, 1.0).unwrap();
    let b = FiniteMeasure::point_mass(0.5, 2.0).unwrap();
    for kind in DistanceKind::ALL {
        assert!(kind.distance(&a, &b).is_err());
    }
}
