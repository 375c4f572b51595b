use super::*;

const LP: f64 = 0.136;

fn models() -> [MaterialModel; 3] {
    [
        MaterialModel::PerfectReflector,
        MaterialModel::plasma(LP).unwrap(),
        MaterialModel::drude(LP, 250.0 * LP).unwrap(),
    ]
}

#[test]
fn thermal_wavelength_at_room_temperature() {
    let s = ThermalState::new(300.0).unwrap();
    assert!((s.thermal_wavelength() / 7.6 - 1.0).abs() < 1e-2);
    assert!(ThermalState::new(-1.0).is_err());
}

#[test]
fn analytic_force_matches_finite_difference() {
    let settings = SolverSettings::default().with_tol(1e-10);
    let thermal = ThermalState::new(300.0).unwrap();
    let g = Geometry::new(0.5, 1.0).unwrap();
    for model in models() {
        let centre = evaluate(&g, &model, &thermal, &settings, true).unwrap();
        let fixed = FixedTruncation {
            n_max: Some(centre.report.n_max),
            m_max: Some(centre.report.m_max),
        };
        let settings = settings.with_l_max(centre.report.l_max);
        let h = 1e-4 * g.separation;
        let e = |l: f64| {
            evaluate_with_truncation(
                &g.with_separation(l),
                &model,
                &thermal,
                &settings,
                false,
                fixed,
            )
            .unwrap()
            .free_energy
        };
        let fd = (e(g.separation + h) - e(g.separation - h)) / (2.0 * h);
        let analytic = centre.force.unwrap();
        assert!(
            (fd / analytic - 1.0).abs() < 1e-6,
            "{}: {fd} vs {analytic}",
            model.label()
        );
        assert!(analytic > 0.0 && centre.free_energy < 0.0);
    }
}

#[test]
fn free_energy_is_negative_and_weakens_with_distance() {
    let settings = SolverSettings::default();
    let thermal = ThermalState::new(300.0).unwrap();
    for model in models() {
        let mut prev = f64::NEG_INFINITY;
        for l in [0.5, 1.0, 2.0, 4.0] {
            let (f, _) =
                free_energy(&Geometry::new(0.5, l).unwrap(), &model, &thermal, &settings).unwrap();
            assert!(f < 0.0 && f > prev, "{} at L = {l}", model.label());
            prev = f;
        }
    }
}

#[test]
fn low_temperature_sum_approaches_frequency_integral() {
    let settings = SolverSettings::default().with_tol(1e-8);
    let g = Geometry::new(0.1, 1.0).unwrap();
    let model = MaterialModel::PerfectReflector;
    let (sum, report) =
        free_energy(&g, &model, &ThermalState::new(1.0).unwrap(), &settings).unwrap();
    let (integral, _) = zero_temperature_energy(&g, &model, &settings).unwrap();
    assert!(report.n_max > 1000);
    assert!((sum / integral - 1.0).abs() < 1e-4, "{sum} vs {integral}");
}

#[test]
fn zero_temperature_dipole_limit() {
    let g = Geometry::new(0.01, 2.0).unwrap();
    let (e, _) = zero_temperature_energy(
        &g,
        &MaterialModel::PerfectReflector,
        &SolverSettings::default(),
    )
    .unwrap();
    let big_l = g.center_distance();
    let expected = -9.0 * g.radius.powi(3) / (16.0 * std::f64::consts::PI * big_l.powi(4));
    assert!((e / expected - 1.0).abs() < 2e-2, "{e} vs {expected}");
}

#[test]
fn zero_temperature_tolerance_is_self_consistent() {
    let g = Geometry::new(1.0, 1.0).unwrap();
    let model = MaterialModel::plasma(LP).unwrap();
    let loose =
        zero_temperature(&g, &model, &SolverSettings::default().with_tol(1e-4), false).unwrap();
    let tight =
        zero_temperature(&g, &model, &SolverSettings::default().with_tol(1e-8), false).unwrap();
    let change = (loose.free_energy / tight.free_energy - 1.0).abs();
    assert!(change <= loose.report.error_estimate.max(1e-4), "{change}");
}

#[test]
fn theta_tends_to_one_at_short_distance() {
    let g = Geometry::new(0.01, 0.01).unwrap();
    let (theta, _) = theta_ratio(
        &g,
        &MaterialModel::PerfectReflector,
        &ThermalState::new(300.0).unwrap(),
        &SolverSettings::default(),
    )
    .unwrap();
    assert!((theta - 1.0).abs() < 1e-3, "{theta}");
}

#[test]
fn matsubara_remainder_is_within_estimate() {
    let g = Geometry::new(0.5, 1.0).unwrap();
    let thermal = ThermalState::new(300.0).unwrap();
    let settings = SolverSettings::default();
    let model = MaterialModel::PerfectReflector;
    let base = evaluate(&g, &model, &thermal, &settings, false).unwrap();
    let longer = evaluate_with_truncation(
        &g,
        &model,
        &thermal,
        &settings,
        false,
        FixedTruncation {
            n_max: Some(base.report.n_max * 3 / 2),
            m_max: None,
        },
    )
    .unwrap();
    let change = (longer.free_energy / base.free_energy - 1.0).abs();
    assert!(
        change <= base.report.error_estimate,
        "{change} > {}",
        base.report.error_estimate
    );
}
