mod common;

use common::{newsvendor, pricing, ski};
use hetero_dro::approx::bernstein_error_check;
use hetero_dro::regret::{
    action_grid, adversarial_instance, analytic_bounds, dro_regret_scan, exhaustive_regret_n2, matching_cell,
    two_point_minimax, witness_regret, AdversarialPair, Params, TargetRelation,
};
use hetero_dro::{recommended_parameter, DistanceKind, GridConfig, PolicySpec, ProblemSpec};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn params(kv: &[(&str, f64)]) -> Params {
    kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Checks a construction against its own target and the analytic upper
/// bound of its cell.
fn check_sandwich(pair: &AdversarialPair) -> Result<(), TestCaseError> {
    prop_assert!(pair.check_balls().unwrap(), "{} leaves its ball", pair.name);
    let regret = witness_regret(pair).unwrap();
    if let Some(target) = pair.target {
        match target.relation {
            TargetRelation::Exact => prop_assert!((regret - target.value).abs() <= TOL, "{regret} vs {target:?}"),
            TargetRelation::AtLeast => prop_assert!(regret >= target.value - TOL, "{regret} vs {target:?}"),
            TargetRelation::MinimaxAtLeast => {
                let mut actions = action_grid(&pair.problem, 1001);
                actions.extend(pair.mu.support());
                actions.extend(pair.nus[0].support());
                let (value, _) = two_point_minimax(pair, &actions).unwrap();
                prop_assert!(value >= target.value - TOL, "minimax {value} vs {target:?}");
                prop_assert!(regret >= target.value - TOL);
            }
        }
    }
    let cell = matching_cell(&pair.problem, pair.kind, &pair.policy, pair.eps);
    if let Some(b) = cell.and_then(|c| analytic_bounds(&pair.problem, pair.kind, c, pair.eps).ok()) {
        prop_assert!(regret <= b.upper + TOL, "{}: {regret} above {}", pair.name, b.upper);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nv_tv_pair(cu in 0.2..3.0f64, co in 0.2..3.0f64, m in 0.5..5.0f64, f in 0.01..=1.0f64) {
        let q = cu / (cu + co);
        let eps = f * q.min(1.0 - q);
        check_sandwich(&adversarial_instance("nv_tv_pair", &params(&[("cu", cu), ("co", co), ("m", m), ("eps", eps)])).unwrap())?;
    }

    #[test]
    fn pricing_families(m in 0.5..5.0f64, f in 0.01..=1.0f64, eta in 0.001..0.5f64) {
        check_sandwich(&adversarial_instance("pr_k_pair", &params(&[("m", m), ("eps", f / 2.0)])).unwrap())?;
        check_sandwich(&adversarial_instance("pr_w_lower", &params(&[("m", m), ("eps", f * m / 4.0)])).unwrap())?;
        let fail = adversarial_instance("pr_w_saa_fail", &params(&[("m", m), ("eps", f), ("eta", eta * m)])).unwrap();
        check_sandwich(&fail)?;
    }

    #[test]
    fn ski_families(b in 0.2..3.0f64, extra in 1.0..4.0f64, f in 0.01..=1.0f64) {
        let m = 2.0 * b * extra;
        check_sandwich(&adversarial_instance("ski_k_lower", &params(&[("b", b), ("m", m), ("eps", f / 2.0)])).unwrap())?;
        check_sandwich(&adversarial_instance("ski_w_lower", &params(&[("b", b), ("m", m), ("eps", f * b / 4.0)])).unwrap())?;
        let eps = 0.999 * f * b / 2.0;
        check_sandwich(&adversarial_instance("ski_w_saa_fail", &params(&[("b", b), ("m", m + 1e-6), ("eps", eps)])).unwrap())?;
    }

    #[test]
    fn ski_k_saa_fail(b in 2u32..6, extra in 1u32..8, f in 0.01..=1.0f64, a in 0.0..=1.0f64) {
        let m = b + extra;
        let nu = hetero_dro::regret::ski_indifference_measure(m, b).unwrap();
        let eps = f * nu.mass_at(1.0);
        let alpha = a * nu.mass_at(m as f64);
        let kv = [("b", b as f64), ("m", m as f64), ("eps", eps), ("alpha", alpha)];
        check_sandwich(&adversarial_instance("ski_k_saa_fail", &params(&kv)).unwrap())?;
    }
}

#[test]
fn hetero_helps_is_exact() {
    for k in 1..=6 {
        let pair = adversarial_instance("hetero_helps", &params(&[("k", k as f64)])).unwrap();
        let r = exhaustive_regret_n2(&pair.problem, &pair.policy, &pair.mu, &pair.nus[0], &pair.nus[1]).unwrap();
        assert_eq!(r, 2.0 * k as f64);
        // The homogeneous pair built from either sample does no better.
        for nu in &pair.nus {
            let homo = exhaustive_regret_n2(&pair.problem, &pair.policy, &pair.mu, nu, nu).unwrap();
            assert!(homo < r, "k = {k}: {homo}");
        }
    }
}

fn small_grid(p: &ProblemSpec) -> GridConfig {
    GridConfig::uniform(p.upper(), 5, 2, 10)
}

fn scan_problem() -> impl Strategy<Value = ProblemSpec> {
    prop_oneof![newsvendor(), pricing(), ski()]
}

fn kind() -> impl Strategy<Value = DistanceKind> {
    prop_oneof![
        Just(DistanceKind::Kolmogorov),
        Just(DistanceKind::TotalVariation),
        Just(DistanceKind::Wasserstein)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scan_is_monotone_in_eps(p in scan_problem(), kind in kind(), e1 in 0.01..0.3f64, e2 in 0.01..0.3f64) {
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        let g = small_grid(&p);
        let a = dro_regret_scan(&p, &PolicySpec::Saa, kind, lo, &g).unwrap().estimate;
        let b = dro_regret_scan(&p, &PolicySpec::Saa, kind, hi, &g).unwrap().estimate;
        prop_assert!(a <= b, "{a} > {b}");
    }

    #[test]
    fn scan_stays_below_upper_bound(p in scan_problem(), kind in kind(), eps in 0.01..0.3f64, robust in any::<bool>()) {
        let pol = if robust { recommended_parameter(&p, kind, eps).unwrap() } else { PolicySpec::Saa };
        let rep = dro_regret_scan(&p, &pol, kind, eps, &small_grid(&p)).unwrap();
        prop_assert!(rep.analytic_upper.is_some());
        prop_assert!(rep.below_upper(TOL), "{p} {kind} {pol}: {:?}", rep);
    }

    #[test]
    fn holder_scan_stays_below_bernstein_bound(alpha in 0.2..=1.0f64, eps in 0.01..0.3f64) {
        let p = ProblemSpec::holder(alpha, 1.0).unwrap();
        let rep = dro_regret_scan(&p, &PolicySpec::Saa, DistanceKind::Kolmogorov, eps, &small_grid(&p)).unwrap();
        prop_assert!(rep.below_upper(TOL), "{:?}", rep);
    }

    #[test]
    fn popoviciu_on_holder_functions(alpha in 0.1..=1.0f64, c in 0.0..=1.0f64, q in 1usize..300) {
        let f = move |y: f64| (y - c).abs().powf(alpha);
        let omega = move |t: f64| t.powf(alpha);
        prop_assert!(bernstein_error_check(&f, &omega, q).unwrap());
    }
}
