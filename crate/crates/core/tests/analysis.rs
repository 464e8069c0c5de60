//! Optimality, mean-value and equivalence analyses over the reference corpus.

use relsub::analysis::{
    approx_optimality_search, equivalence_report, fermat_check, local_min_scan, mean_value_witness, sum_optimality_check, Status,
};
use relsub::calculus::{fuzzy_sum_sweep, sum_rule_check, Conclusion};
use relsub::corpus;
use relsub::funcdsl::lip::{default_radii, lip_estimate};
use relsub::subdiff::eps_regular_relative;

#[test]
fn fermat_holds_at_scanned_minimizers() {
    let mut count = 0;
    for e in corpus::entries() {
        for m in local_min_scan(&e.func, &e.omega, 400).unwrap() {
            let v = fermat_check(&e.func, &e.omega, m.x, &[0.0, 0.1, 1.0]).unwrap();
            assert!(v.holds(), "{} at {}: {:?}", e.name, m.x, v);
            count += 1;
        }
    }
    assert!(count >= 10, "{count}");
}

#[test]
fn sum_optimality_holds_at_minimizers_with_hypotheses() {
    let mut verified = 0;
    for p in corpus::sum_pairs() {
        let sum = p.f1.sum(&p.f2).unwrap();
        for m in local_min_scan(&sum, &p.omega, 400).unwrap() {
            let v = sum_optimality_check(&p.f1, &p.f2, &p.omega, m.x).unwrap();
            if v.hypotheses.iter().all(|h| h.holds) {
                verified += 1;
                assert_eq!(v.verdict, Status::NecessaryConditionHolds, "{} at {}: {v:?}", p.name, m.x);
            }
        }
    }
    assert!(verified >= 6, "{verified}");
}

#[test]
fn approximate_certificates_shrink_with_eta() {
    for p in corpus::sum_pairs() {
        let sum = p.f1.sum(&p.f2).unwrap();
        for m in local_min_scan(&sum, &p.omega, 400).unwrap() {
            let Some(ell) = lip_estimate(&p.f1, &p.omega, &[m.x], &default_radii()).unwrap().modulus() else { continue };
            let mut last = f64::INFINITY;
            for eta in [1e-1, 1e-2, 1e-3] {
                let c = approx_optimality_search(&p.f1, &p.f2, &p.omega, m.x, eta, 1e-6).unwrap();
                assert!(c.gamma <= 1e-6 && c.gamma <= last + 1e-12, "{} at {}: {c:?}", p.name, m.x);
                assert!(c.eta1 > 0.0 && c.eta1 < 4.0 * eta * (ell + 1.0));
                assert!((c.x1 - m.x).abs() <= eta && (c.x2 - m.x).abs() <= eta);
                last = c.gamma;
            }
        }
    }
}

#[test]
fn sum_rule_on_pairs() {
    let mut held = 0;
    for p in corpus::sum_pairs() {
        let r = sum_rule_check(&p.f1, &p.f2, &p.omega, p.point).unwrap();
        assert_ne!(r.conclusion, Conclusion::Fails, "{}: {:?}", p.name, r.witnesses);
        if r.conclusion == Conclusion::Holds {
            held += 1;
        }
    }
    assert!(held >= 6, "{held}");
}

#[test]
fn fuzzy_residuals_shrink_on_smooth_pairs() {
    for p in corpus::sum_pairs().into_iter().filter(|p| p.smooth) {
        let sum = p.f1.sum(&p.f2).unwrap();
        let own = eps_regular_relative(&sum, &p.omega, p.point, 0.0).unwrap().set;
        let xstar = own.nearest(0.0).unwrap();
        let certs = fuzzy_sum_sweep(&p.f1, &p.f2, &p.omega, p.point, xstar, 0.0, 0.1, 5).unwrap();
        let gammas: Vec<f64> = certs.iter().map(|c| c.as_ref().unwrap().gamma).collect();
        assert!(gammas.windows(2).all(|w| w[1] <= w[0] + 1e-6), "{}: {gammas:?}", p.name);
    }
}

#[test]
fn mean_value_on_lipschitz_segments() {
    for s in corpus::lipschitz_segments() {
        let w = mean_value_witness(&s.func, &s.a, &s.b).unwrap_or_else(|e| panic!("{}: {e}", s.name));
        assert!(w.residuals_ok(1e-6), "{}: {w:?}", s.name);
        assert!(w.c_param < (0..s.a.len()).map(|i| (s.b[i] - s.a[i]).powi(2)).sum::<f64>().sqrt());
    }
}

#[test]
fn equivalence_on_segments() {
    for s in corpus::segment_cases() {
        let r = equivalence_report(&s.func, &s.a, &s.b).unwrap();
        assert_eq!(r.conclusion, Conclusion::Holds, "{}: {:?}", s.name, r.witnesses);
        assert_eq!(r.witnesses["verdict"], if s.convex { "in" } else { "out" }, "{}", s.name);
    }
}
