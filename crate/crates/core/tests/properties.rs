use proptest::prelude::*;

use varextropy::uniformity::{format_tables, parse_tables, statistic, CriticalValueTable, StatKind};
use varextropy::{estimate, EstimatorId, EstimatorOptions, Sample};

/// Distinct values on a dyadic lattice, so shifts and power-of-two scalings
/// are exact in floating point.
fn dyadic_sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(0u32..8192, 8..40)
        .prop_map(|s| s.into_iter().map(|k| f64::from(k) / 8192.0).collect())
}

fn value(id: EstimatorId, v: &[f64]) -> f64 {
    estimate(id, &Sample::new(v.to_vec()).unwrap(), &EstimatorOptions::default())
        .unwrap()
        .value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimators_ignore_input_order(v in dyadic_sample(), rot in 0usize..40) {
        let mut w = v.clone();
        w.reverse();
        let r = rot % w.len();
        w.rotate_left(r);
        for id in EstimatorId::ALL {
            prop_assert_eq!(value(id, &v), value(id, &w));
        }
    }

    #[test]
    fn spacing_estimators_shift_and_scale_exactly(v in dyadic_sample(), shift in -64i32..64, p in -3i32..4) {
        let a = 2f64.powi(p);
        let moved: Vec<f64> = v.iter().map(|x| x * a + f64::from(shift)).collect();
        for id in [EstimatorId::Vjv, EstimatorId::Vjq] {
            prop_assert_eq!(value(id, &moved) * a * a, value(id, &v));
        }
    }

    #[test]
    fn variance_form_estimates_are_nonnegative(v in dyadic_sample()) {
        for id in [EstimatorId::Vjv, EstimatorId::Vjb, EstimatorId::Vjq, EstimatorId::Vjs] {
            prop_assert!(value(id, &v) >= 0.0);
        }
    }

    #[test]
    fn statistics_on_unit_samples_are_finite(v in dyadic_sample()) {
        let s = Sample::new(v).unwrap();
        for kind in StatKind::ALL {
            let t = statistic(kind, &s).unwrap();
            prop_assert!(t.is_finite() && t >= 0.0, "{} = {}", kind, t);
        }
    }

    #[test]
    fn critical_tables_round_trip(values in prop::collection::vec(1e-9f64..10.0, 1..6)) {
        let mut t = CriticalValueTable::new(StatKind::Tc, 0.01, 5000, 42);
        for (i, v) in values.iter().enumerate() {
            t.insert(10 * (i + 1), *v);
        }
        let back = parse_tables(&format_tables(std::slice::from_ref(&t))).unwrap();
        prop_assert_eq!(back, vec![t]);
    }
}

#[test]
fn samples_outside_unit_interval_are_refused() {
    let s = Sample::new(vec![0.1, 0.5, 1.2]).unwrap();
    for kind in StatKind::ALL {
        assert!(statistic(kind, &s).is_err(), "{kind}");
    }
}
