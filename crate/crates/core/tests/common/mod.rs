#![allow(dead_code)]

use hetero_dro::{FiniteMeasure, ProblemSpec};
use proptest::prelude::*;

/// Measures on `[0, upper]`; about half the atoms snap to tenths of the
/// interval so that ties and shared atoms show up often.
pub fn measure(upper: f64, max_atoms: usize) -> impl Strategy<Value = FiniteMeasure> {
    prop::collection::vec((0.0..=1.0f64, any::<bool>(), 0.01..1.0f64), 1..=max_atoms).prop_map(move |atoms| {
        let points = atoms
            .iter()
            .map(|&(u, snap, _)| if snap { (u * 10.0).round() / 10.0 * upper } else { u * upper })
            .collect();
        let total: f64 = atoms.iter().map(|a| a.2).sum();
        let weights = atoms.iter().map(|a| a.2 / total).collect();
        FiniteMeasure::new(points, weights, upper).unwrap()
    })
}

pub fn newsvendor() -> impl Strategy<Value = ProblemSpec> {
    (0.1..3.0f64, 0.1..3.0f64, 0.5..5.0f64).prop_map(|(cu, co, m)| ProblemSpec::newsvendor(cu, co, m).unwrap())
}

pub fn pricing() -> impl Strategy<Value = ProblemSpec> {
    (0.5..5.0f64).prop_map(|m| ProblemSpec::pricing(m).unwrap())
}

pub fn ski() -> impl Strategy<Value = ProblemSpec> {
    (1.0..10.0f64, 0.05..0.95f64).prop_map(|(m, f)| ProblemSpec::ski_rental(f * m, m).unwrap())
}

pub fn holder() -> impl Strategy<Value = ProblemSpec> {
    (0.1..=1.0f64, 0.5..3.0f64).prop_map(|(a, m)| ProblemSpec::holder(a, m).unwrap())
}

pub fn any_problem() -> impl Strategy<Value = ProblemSpec> {
    prop_oneof![newsvendor(), pricing(), ski(), holder()]
}

/// A problem together with two measures on its interval.
pub fn problem_and_pair() -> impl Strategy<Value = (ProblemSpec, FiniteMeasure, FiniteMeasure)> {
    any_problem().prop_flat_map(|p| (Just(p), measure(p.upper(), 6), measure(p.upper(), 6)))
}
