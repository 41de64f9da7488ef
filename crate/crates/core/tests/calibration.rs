use varextropy::simulation::{rejection_rates, PowerSource};
use varextropy::uniformity::{calibrate_critical_value, calibrate_tables, StatKind};

#[test]
fn ks_critical_value_matches_exact_distribution() {
    // Exact two-sided Kolmogorov 5% points.
    for (n, exact) in [(10, 0.409_25), (20, 0.294_08)] {
        let c = calibrate_critical_value(StatKind::Ks, n, 0.05, 40_000, 11).unwrap();
        assert!((c.critical_value - exact).abs() < 0.006, "n={n}: {}", c.critical_value);
    }
}

#[test]
fn calibration_is_reproducible_and_seed_sensitive() {
    let a = calibrate_tables(&[StatKind::Gv, StatKind::Tv], &[15], 0.1, 2000, 3).unwrap();
    let b = calibrate_tables(&[StatKind::Gv, StatKind::Tv], &[15], 0.1, 2000, 3).unwrap();
    let c = calibrate_tables(&[StatKind::Gv, StatKind::Tv], &[15], 0.1, 2000, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a[0].get(15), c[0].get(15));
}

#[test]
fn lower_level_gives_larger_critical_value() {
    let c10 = calibrate_critical_value(StatKind::Gq, 12, 0.10, 5000, 2).unwrap().critical_value;
    let c05 = calibrate_critical_value(StatKind::Gq, 12, 0.05, 5000, 2).unwrap().critical_value;
    let c01 = calibrate_critical_value(StatKind::Gq, 12, 0.01, 5000, 2).unwrap().critical_value;
    assert!(c10 < c05 && c05 < c01);
}

#[test]
fn fresh_null_samples_reject_at_nominal_rate() {
    let kinds = [StatKind::Gv, StatKind::Ks, StatKind::Te];
    let tables = calibrate_tables(&kinds, &[15], 0.1, 20_000, 8).unwrap();
    let crit: Vec<f64> = tables.iter().map(|t| t.get(15).unwrap()).collect();
    let (rates, _) = rejection_rates(&kinds, &crit, PowerSource::Uniform, 15, 5000, 8).unwrap();
    for (k, r) in kinds.iter().zip(rates) {
        // 4 standard errors of a 5000-replicate proportion at 0.1, plus
        // calibration noise.
        assert!((r - 0.1).abs() < 0.02, "{k}: {r}");
    }
}
