//! Structural properties of the exact relative subdifferentials, over the reference corpus
//! and over randomly generated smooth and piecewise-affine functions.

use proptest::prelude::*;
use relsub::calculus::{inclusion_chain_check, lipschitz_bound_check, scalar_rule_check, Conclusion};
use relsub::corpus::{self, interval};
use relsub::funcdsl::lip::{default_radii, lip_estimate};
use relsub::funcdsl::PiecewiseFunc;
use relsub::subdiff::{eps_regular_relative, limiting_relative};

const EPS_CHAIN: [f64; 4] = [0.0, 0.1, 0.5, 1.0];

fn corpus_points() -> Vec<(corpus::Entry, f64)> {
    corpus::oracle_triples()
}

#[test]
fn inclusion_chain_on_corpus() {
    for (e, p) in corpus_points() {
        let r = inclusion_chain_check(&e.func, &e.omega, p).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds, "{} at {p}: {:?}", e.name, r.witnesses);
    }
}

#[test]
fn eps_monotone_on_corpus() {
    for (e, p) in corpus_points() {
        let sets: Vec<_> = EPS_CHAIN.iter().map(|&eps| eps_regular_relative(&e.func, &e.omega, p, eps).unwrap().set).collect();
        for w in sets.windows(2) {
            assert!(w[0].is_subset(&w[1]), "{} at {p}: {} vs {}", e.name, w[0], w[1]);
        }
    }
}

#[test]
fn shift_invariance_on_corpus() {
    for (e, p) in corpus_points() {
        for c in [-1.0, 1.0, 10.0] {
            let shifted = e.func.shift(c);
            for eps in [0.0, 0.1, 1.0] {
                let a = eps_regular_relative(&e.func, &e.omega, p, eps).unwrap().set;
                let b = eps_regular_relative(&shifted, &e.omega, p, eps).unwrap().set;
                assert!(a.approx_eq(&b, 1e-9), "{} at {p}, c = {c}, eps = {eps}: {a} vs {b}", e.name);
            }
            let a = limiting_relative(&e.func, &e.omega, p).unwrap().set;
            let b = limiting_relative(&shifted, &e.omega, p).unwrap().set;
            assert!(a.approx_eq(&b, 1e-9), "{} at {p}, c = {c}: {a} vs {b}", e.name);
        }
    }
}

#[test]
fn scalar_rules_on_corpus() {
    for (e, p) in corpus_points() {
        for lambda in [0.5, 1.0, 2.0, 10.0] {
            for eps in [0.0, 0.1, 1.0] {
                let r = scalar_rule_check(&e.func, &e.omega, p, lambda, eps).unwrap();
                assert_eq!(r.conclusion, Conclusion::Holds, "{} at {p}, lambda {lambda}, eps {eps}: {:?}", e.name, r.witnesses);
            }
        }
    }
}

#[test]
fn lipschitz_bound_on_corpus() {
    for (e, p) in corpus_points().into_iter().filter(|(e, _)| e.lipschitz) {
        for eps in [0.0, 0.1, 1.0] {
            let r = lipschitz_bound_check(&e.func, &e.omega, p, eps, 0.25, 1e-6).unwrap();
            assert_eq!(r.conclusion, Conclusion::Holds, "{} at {p}, eps {eps}: {:?}", e.name, r.witnesses);
        }
    }
}

#[test]
fn nonempty_when_lipschitz() {
    let mut checked = 0;
    for (e, p) in corpus_points() {
        let lip = lip_estimate(&e.func, &e.omega, &[p], &default_radii()).unwrap();
        if lip.modulus().is_some() {
            checked += 1;
            assert!(!limiting_relative(&e.func, &e.omega, p).unwrap().set.is_empty(), "{} at {p}", e.name);
        }
    }
    assert!(checked >= 20, "only {checked} Lipschitz points");
}

fn cubic(c: [f64; 4]) -> PiecewiseFunc {
    PiecewiseFunc::formula(1, &format!("{} + {}*x + {}*x^2 + {}*x^3", c[0], c[1], c[2], c[3])).unwrap()
}

/// Piecewise affine on three pieces with arbitrary values at the two breakpoints.
fn pw_affine(k: [f64; 3], b: [f64; 3]) -> PiecewiseFunc {
    let pieces = [
        ("x < -0.5", format!("{}*x + {}", k[0], b[0])),
        ("-0.5 <= x <= 0.5", format!("{}*x + {}", k[1], b[1])),
        ("x > 0.5", format!("{}*x + {}", k[2], b[2])),
    ];
    let refs: Vec<(&str, &str)> = pieces.iter().map(|(g, e)| (*g, e.as_str())).collect();
    PiecewiseFunc::from_source(1, &refs, "inf", &Default::default()).unwrap()
}

fn coef() -> impl Strategy<Value = f64> {
    (-20i32..=20).prop_map(|k| k as f64 / 4.0)
}

fn point_set() -> impl Strategy<Value = (f64, &'static str)> {
    prop_oneof![
        (-8i32..=8).prop_map(|k| (k as f64 / 8.0, "[-1, 1]")),
        (-8i32..=0).prop_map(|k| (k as f64 / 8.0, "(-inf, 0]")),
        Just((0.5, "[-1, 0] u [0.5, 2]")),
        Just((-0.5, "(-inf, inf)")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cubic_properties(c in prop::array::uniform4(coef()), (x, set) in point_set(), lambda in 0.25f64..8.0, shift in -10.0f64..10.0) {
        let f = cubic(c);
        let omega = interval(set);
        prop_assert_eq!(inclusion_chain_check(&f, &omega, x).unwrap().conclusion, Conclusion::Holds);
        let sets: Vec<_> = EPS_CHAIN.iter().map(|&e| eps_regular_relative(&f, &omega, x, e).unwrap().set).collect();
        for w in sets.windows(2) {
            prop_assert!(w[0].is_subset(&w[1]));
        }
        let shifted = eps_regular_relative(&f.shift(shift), &omega, x, 0.1).unwrap().set;
        prop_assert!(shifted.approx_eq(&sets[1], 1e-9));
        for eps in [0.0, 0.3] {
            prop_assert_eq!(scalar_rule_check(&f, &omega, x, lambda, eps).unwrap().conclusion, Conclusion::Holds);
        }
        prop_assert!(!limiting_relative(&f, &omega, x).unwrap().set.is_empty());
    }

    #[test]
    fn piecewise_affine_properties(k in prop::array::uniform3(coef()), b in prop::array::uniform3(coef()), x in prop_oneof![Just(-0.5), Just(0.5), Just(0.0), Just(0.75)], lambda in 0.25f64..8.0) {
        let f = pw_affine(k, b);
        let omega = interval("(-inf, inf)");
        prop_assert_eq!(inclusion_chain_check(&f, &omega, x).unwrap().conclusion, Conclusion::Holds);
        let sets: Vec<_> = EPS_CHAIN.iter().map(|&e| eps_regular_relative(&f, &omega, x, e).unwrap().set).collect();
        for w in sets.windows(2) {
            prop_assert!(w[0].is_subset(&w[1]), "{} vs {}", w[0], w[1]);
        }
        for eps in [0.0, 0.3] {
            let r = scalar_rule_check(&f, &omega, x, lambda, eps).unwrap();
            prop_assert_eq!(r.conclusion, Conclusion::Holds, "{:?}", r.witnesses);
        }
    }
}
