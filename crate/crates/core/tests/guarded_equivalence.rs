//! The squared form of the intertwined test agrees with the direct test
//! whenever the squaring is sign-safe.

use proptest::prelude::*;

use lvstab::constant_case::ConstantSystem;
use lvstab::criteria;
use lvstab::jfunc::{self, Exponent};
use lvstab::region::{CurveLabel, RegionSpec};

fn system() -> impl Strategy<Value = (ConstantSystem, f64)> {
    (
        0.5..3.0f64,
        0.3..3.0f64,
        0.05..2.0f64,
        -0.3..3.0f64,
        0.05..2.0f64,
        0.3..3.0f64,
        prop_oneof![Just(1.5), Just(2.0), Just(3.0), Just(5.0)],
        0.3..1.2f64,
    )
        .prop_filter_map("needs a positive equilibrium", |(a, b, c, d, e, f, p, s)| {
            let probe = ConstantSystem::new(1.0, a, b, c, d, e, f).ok()?;
            let (x, y) = probe.equilibrium().ok()?;
            if x <= 1e-3 || y <= 1e-3 {
                return None;
            }
            // pick T so that scriptF(p)/T - k is positive for s < 1
            let period = s * jfunc::script_f(Exponent::Finite(p)) / probe.k().ok()?;
            Some((ConstantSystem { period, ..probe }, p))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn squared_test_matches_direct((sys, p) in system()) {
        let h = sys.h_of_p(p).unwrap();
        prop_assume!(h.sign_ok);
        let spec = sys.to_spec().unwrap();
        let direct = criteria::intertwined_test(&spec, Exponent::Finite(p)).unwrap();
        prop_assume!(direct.margin.abs() > 1e-6);
        let Some(route) = sys.quadratic_route(p).unwrap() else {
            return Err(TestCaseError::reject("first boundary misses the region"));
        };
        let region = RegionSpec::from_system(&spec, Exponent::Finite(p)).unwrap();
        let sup = region.sup_xy();
        let (x, y) = sup.argmax.unwrap();
        let on_first = region.curve_residual(CurveLabel::PowerA, x, y).abs() <= 1e-9;
        if on_first {
            prop_assert_eq!(direct.passed, route.max_q <= 0.0, "margin {} max Q {}", direct.margin, route.max_q);
            let sup_from_route = (route.max_q + h.h).powf(1.0 / p);
            prop_assert!((sup_from_route - sup.value).abs() <= 1e-6 * sup.value, "{} vs {}", sup_from_route, sup.value);
        } else if direct.passed {
            // the boundary covers part of C_p only
            prop_assert!(route.max_q <= 0.0);
        }
    }
}
