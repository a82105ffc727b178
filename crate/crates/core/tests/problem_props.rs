mod common;

use common::{any_problem, measure, newsvendor, pricing, problem_and_pair, ski};
use hetero_dro::approx::{objective_stats, objective_stats_numeric, saa_diagnostic, SaaDiagnostic};
use hetero_dro::problems::ski_closed_form;
use hetero_dro::{wasserstein1, DistanceKind, FiniteMeasure, PolicySpec, ProblemSpec, Sense};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn grid_best(p: &ProblemSpec, m: &FiniteMeasure, n: usize) -> f64 {
    let vals = (0..n).map(|i| p.expected_objective(p.upper() * i as f64 / (n - 1) as f64, m).unwrap());
    match p.sense() {
        Sense::Minimize => vals.fold(f64::INFINITY, f64::min),
        Sense::Maximize => vals.fold(f64::NEG_INFINITY, f64::max),
    }
}

fn sorted_pair(a: f64, b: f64) -> Option<(f64, f64)> {
    let (x1, x2) = (a.min(b), a.max(b));
    (x2 - x1 > 1e-6).then_some((x1, x2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn oracle_beats_action_grid((p, m, _) in problem_and_pair()) {
        let x = p.oracle(&m).unwrap();
        prop_assert!((0.0..=p.upper()).contains(&x));
        let v = p.expected_objective(x, &m).unwrap();
        prop_assert_eq!(v, p.opt_value(&m).unwrap());
        let best = grid_best(&p, &m, 10_001);
        match p.sense() {
            Sense::Minimize => prop_assert!(v <= best + TOL, "{p}: {v} > {best}"),
            Sense::Maximize => prop_assert!(v >= best - TOL, "{p}: {v} < {best}"),
        }
    }

    #[test]
    fn objective_is_bounded(p in any_problem(), x in 0.0..=1.0f64, xi in 0.0..=1.0f64) {
        let g = p.objective(x * p.upper(), xi * p.upper()).unwrap();
        prop_assert!(g >= 0.0 && g <= p.objective_sup() + TOL);
    }

    #[test]
    fn ski_closed_form_and_partial_lipschitz(
        (p, m) in ski().prop_flat_map(|p| (Just(p), measure(p.upper(), 6))),
        a in 0.0..=1.0f64,
        b in 0.0..=1.0f64,
    ) {
        let ProblemSpec::SkiRental { buy, upper } = p else { unreachable!() };
        for x in [a * upper, b * upper] {
            prop_assert!((ski_closed_form(buy, x, &m) - p.expected_objective(x, &m).unwrap()).abs() < TOL);
        }
        if let Some((x1, x2)) = sorted_pair(a * upper, b * upper) {
            let (g1, g2) = (p.expected_objective(x1, &m).unwrap(), p.expected_objective(x2, &m).unwrap());
            prop_assert!(g2 - g1 <= x2 - x1 + TOL);
        }
    }

    #[test]
    fn revenue_shift((p, mu, nu) in pricing().prop_flat_map(|p| (Just(p), measure(p.upper(), 6), measure(p.upper(), 6))),
                     a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let m = p.upper();
        let Some((x1, x2)) = sorted_pair(a * m, b * m) else { return Ok(()) };
        let w = wasserstein1(&mu, &nu).unwrap();
        let lhs = p.expected_objective(x2, &nu).unwrap() - p.expected_objective(x1, &mu).unwrap();
        prop_assert!(lhs <= (x2 - x1) + m * w / (x2 - x1) + TOL);
    }

    #[test]
    fn ski_cost_shift((p, mu, nu) in ski().prop_flat_map(|p| (Just(p), measure(p.upper(), 6), measure(p.upper(), 6))),
                      a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let ProblemSpec::SkiRental { buy, upper } = p else { unreachable!() };
        let Some((x1, x2)) = sorted_pair(a * upper, b * upper) else { return Ok(()) };
        let w = wasserstein1(&mu, &nu).unwrap();
        let lhs = p.expected_objective(x2, &mu).unwrap() - p.expected_objective(x1, &nu).unwrap();
        prop_assert!(lhs <= buy * w / (x2 - x1) + w + (x2 - x1) + TOL);
    }

    #[test]
    fn capped_tail_bound((p, nu) in ski().prop_flat_map(|p| (Just(p), measure(p.upper(), 6))), c in 0.0..1.0f64) {
        // If buying is best only after C ≥ b, the survival at C is at most
        // e^{1 − C/b}, and so is the loss from buying at C instead.
        let ProblemSpec::SkiRental { buy, upper } = p else { unreachable!() };
        let c = buy + c * (upper - buy);
        if p.oracle(&nu).unwrap() > c {
            let bound = (1.0 - c / buy).exp();
            prop_assert!(1.0 - nu.cdf(c) <= bound + TOL);
            let loss = p.expected_objective(c, &nu).unwrap() - p.opt_value(&nu).unwrap();
            prop_assert!(loss <= buy * bound + TOL);
        }
    }

    #[test]
    fn policies_only_see_the_empirical_measure(
        (p, m) in any_problem().prop_flat_map(|p| (Just(p), measure(p.upper(), 5))),
        seed in any::<u64>(),
        d in -1.0..1.0f64,
        c in 0.0..1.0f64,
    ) {
        let upper = p.upper();
        let xs = m.sample(seed, 30);
        let mut shuffled: Vec<f64> = xs.iter().rev().copied().collect();
        shuffled.rotate_left(7);
        let doubled: Vec<f64> = xs.iter().chain(&xs).copied().collect();
        let hats = [&xs, &shuffled, &doubled].map(|s| FiniteMeasure::empirical_from(s, upper).unwrap());
        let mut policies = vec![PolicySpec::Saa, PolicySpec::DeltaSaa(d * upper), PolicySpec::DeltaSaa(0.0)];
        if matches!(p, ProblemSpec::SkiRental { .. }) {
            policies.push(PolicySpec::Capped(c * upper));
        }
        for pol in policies {
            let x = pol.apply(&p, &hats[0]).unwrap();
            prop_assert!((0.0..=upper).contains(&x));
            prop_assert_eq!(x, pol.apply(&p, &hats[1]).unwrap());
            prop_assert_eq!(x, pol.apply(&p, &hats[2]).unwrap());
        }
        prop_assert_eq!(PolicySpec::DeltaSaa(0.0).apply(&p, &hats[0]).unwrap(), PolicySpec::Saa.apply(&p, &hats[0]).unwrap());
    }

    #[test]
    fn numeric_stats_converge_for_newsvendor(p in newsvendor(), x in 0.0..=1.0f64) {
        let ProblemSpec::Newsvendor { underage, overage, upper } = p else { unreachable!() };
        let x = x * upper;
        let n = 2_001;
        let exact = objective_stats(&p, x).unwrap();
        let approx = objective_stats_numeric(&p, x, n).unwrap();
        let slack = 2.0 * underage.max(overage) * upper / (n - 1) as f64 + TOL;
        prop_assert!((exact.total_variation - approx.total_variation).abs() <= slack);
        prop_assert!((exact.span - approx.span).abs() <= slack);
        prop_assert!(approx.lipschitz <= exact.lipschitz + TOL);
    }

    #[test]
    fn numeric_stats_never_exceed_closed_forms(p in any_problem(), x in 0.0..=1.0f64) {
        let x = x * p.upper();
        let exact = objective_stats(&p, x).unwrap();
        let approx = objective_stats_numeric(&p, x, 1_001).unwrap();
        prop_assert!(approx.total_variation <= exact.total_variation + TOL);
        prop_assert!(approx.span <= exact.span + TOL);
        prop_assert!(exact.span <= exact.total_variation + TOL);
    }
}

#[test]
fn tail_bound_without_the_factor_e_is_false() {
    // Buying is best only after C = b, yet a fraction 0.399 > e^{−1}
    // survives past C.
    let p = ProblemSpec::ski_rental(0.782962, 1.0).unwrap();
    let nu = FiniteMeasure::new(vec![0.107278, 0.478865, 0.960887], vec![0.39297, 0.208125, 0.398905], 1.0).unwrap();
    let c = 0.782962;
    assert!(p.oracle(&nu).unwrap() > c);
    assert!(1.0 - nu.cdf(c) > (-1.0f64).exp());
    // Below b it fails outright: a point mass in (C, b) is never bought.
    let p = ProblemSpec::ski_rental(0.5, 1.0).unwrap();
    let nu = FiniteMeasure::point_mass(0.3, 1.0).unwrap();
    assert!(p.oracle(&nu).unwrap() > 0.2);
    assert_eq!(1.0 - nu.cdf(0.2), 1.0);
}

#[test]
fn saa_diagnostic_flags_exactly_the_failing_cells() {
    let problems = [
        ProblemSpec::newsvendor(1.0, 2.0, 3.0).unwrap(),
        ProblemSpec::pricing(2.0).unwrap(),
        ProblemSpec::ski_rental(2.0, 7.0).unwrap(),
    ];
    for p in problems {
        for kind in DistanceKind::ALL {
            let infinite = saa_diagnostic(&p, kind) == SaaDiagnostic::Infinite;
            let fails = kind == DistanceKind::Wasserstein && !matches!(p, ProblemSpec::Newsvendor { .. });
            assert_eq!(infinite, fails, "{p} / {kind}");
        }
    }
}
