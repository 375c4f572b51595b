//! Property checks on the public API over randomly drawn inputs.

use casimir_core::asymptotics::{free_energy_perfect_dipole, phi};
use casimir_core::materials::fresnel;
use casimir_core::mie::mie_ab;
use casimir_core::roundtrip::{assemble_block, log_det_one_minus, QuadratureSpec};
use casimir_core::thermodynamics::{free_energy, SolverSettings, ThermalState};
use casimir_core::{Geometry, MaterialModel};
use proptest::prelude::*;

fn model(kind: u8) -> MaterialModel {
    match kind {
        0 => MaterialModel::PerfectReflector,
        1 => MaterialModel::plasma(0.136).unwrap(),
        _ => MaterialModel::drude(0.136, 34.0).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fresnel_amplitudes_are_bounded(kind in 0u8..3, q in 1e-4f64..1e3, extra in 0.0f64..1e3) {
        let (te, tm) = fresnel(&model(kind), q, extra).unwrap();
        prop_assert!((-1.0..=0.0).contains(&te), "r_TE = {te}");
        prop_assert!((0.0..=1.0).contains(&tm), "r_TM = {tm}");
    }

    #[test]
    fn mie_coefficients_are_finite(kind in 0u8..3, l in 1usize..30, q in 1e-3f64..1e2, r in 0.05f64..3.0) {
        let (a, b) = mie_ab(&model(kind), l, q, r).unwrap();
        prop_assert!(a.is_finite() && b.is_finite());
    }

    #[test]
    fn round_trip_blocks_are_passive(kind in 0u8..3, r in 0.1f64..2.0, l in 0.2f64..5.0, q in 0.0f64..5.0, m in 0usize..4) {
        let g = Geometry::new(r, l).unwrap();
        let block = assemble_block(&model(kind), &g, q, m, 6.max(m), false, &QuadratureSpec::default()).unwrap();
        let ld = log_det_one_minus(&block).unwrap();
        prop_assert!(ld.is_finite() && ld <= 1e-14, "ln det = {ld}");
    }

    #[test]
    fn dipole_shape_function_is_bounded(nu in 1e-4f64..50.0) {
        let p = phi(nu);
        prop_assert!(p.is_finite() && p > 0.0);
        prop_assert!(free_energy_perfect_dipole(nu, 0.01, 300.0).unwrap() < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn free_energy_weakens_with_distance(kind in 0u8..3, r in 0.05f64..0.5, l in 0.5f64..4.0) {
        let thermal = ThermalState::new(300.0).unwrap();
        let s = SolverSettings::default().with_tol(1e-5);
        let near = free_energy(&Geometry::new(r, l).unwrap(), &model(kind), &thermal, &s).unwrap().0;
        let far = free_energy(&Geometry::new(r, 1.5 * l).unwrap(), &model(kind), &thermal, &s).unwrap().0;
        prop_assert!(near < far && far < 0.0, "{near} {far}");
    }
}
