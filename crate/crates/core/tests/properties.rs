use proptest::prelude::*;

use reflpos::catalog::{self, Flag, LkData};
use reflpos::diffcalc::completely_monotone_check;
use reflpos::grid::logspace;
use reflpos::kernelcheck::{default_tol, gram_plus, psd_check};
use reflpos::levykhin::{synth_bernstein, BernsteinRep, LKIntervalRep};
use reflpos::reflection::{reflection_positive_check, GridOptions, ReflectionReport};
use reflpos::{GridKind, Measure};

#[test]
fn completely_monotone_entries_are_positive_definite() {
    let grid = logspace(0.05, 10.0, 12);
    let pts = GridKind::Cheb.points(0.05, 10.0, 12).unwrap();
    for e in catalog::all().into_iter().filter(|e| e.has_flag(&Flag::CompletelyMonotone)) {
        assert!(completely_monotone_check(&e.func, &grid, 6, &[], None).unwrap().passed(), "{}", e.name);
        assert!(psd_check(&gram_plus(&e.func, &pts).unwrap(), default_tol(12)).unwrap().passed(), "{}", e.name);
    }
}

#[test]
fn lk_data_json_round_trips() {
    for e in catalog::all() {
        if let Some(lk) = &e.lk_data {
            let s = reflpos::json::to_string(lk).unwrap();
            let back: LkData = serde_json::from_str(&s).unwrap();
            assert_eq!(&back, lk);
            assert_eq!(reflpos::json::to_string(&back).unwrap(), s);
        }
    }
}

#[test]
fn report_json_is_byte_stable() {
    let phi = catalog::get("green", &catalog::Params::default()).unwrap().func;
    let r = reflection_positive_check(&phi, 1.0, &GridOptions::default()).unwrap();
    let s = r.to_json().unwrap();
    let back: ReflectionReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back.to_json().unwrap(), s);
}

#[test]
fn interval_rep_from_json() {
    // -t log t around t0 = 1 with Lebesgue measure
    let s = r#"{"t0": 1, "c": 0, "d": -1, "mu": {"density": {"coef": 1, "power": 0, "rate": 0}}, "interval": [0, null]}"#;
    let rep: LKIntervalRep = serde_json::from_str(s).unwrap();
    let v = reflpos::levykhin::synth_interval(&rep, 2.0, 1e-10).unwrap();
    assert!((v + 2.0 * 2f64.ln()).abs() < 1e-9, "{v}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bernstein_synthesis_is_monotone_and_concave(
        a in 0.0f64..2.0, b in 0.0f64..2.0,
        atoms in proptest::collection::vec((0.01f64..5.0, 0.01f64..2.0), 0..4),
    ) {
        let rep = BernsteinRep { a, b, sigma: Measure::from_atoms(atoms) };
        let ts = [0.0, 0.3, 0.6, 0.9, 1.2];
        let v: Vec<f64> = ts.iter().map(|&t| synth_bernstein(&rep, t, 1e-12).unwrap()).collect();
        prop_assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        prop_assert!(v.windows(3).all(|w| w[0] + w[2] <= 2.0 * w[1] + 1e-12));
    }
}
