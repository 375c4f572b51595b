use super::*;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LP: f64 = 0.136;

fn kernel(model: &MaterialModel, g: &Geometry, q: f64, l_max: usize) -> FrequencyKernel {
    FrequencyKernel::new(model, g, q, l_max, 200, 40.0).unwrap()
}

fn weight(m: usize) -> f64 {
    if m == 0 {
        1.0
    } else {
        2.0
    }
}

#[test]
fn axisymmetric_block_does_not_mix_polarizations() {
    let g = Geometry::new(1.0, 0.5).unwrap();
    let plasma = MaterialModel::plasma(LP).unwrap();
    let b = kernel(&plasma, &g, 0.7, 8).block(0, false).unwrap();
    let n = 8;
    let scale = b.matrix.amax();
    for i in 0..n {
        for j in 0..n {
            assert!(b.matrix[(i, n + j)].abs() <= 1e-15 * scale);
            assert!(b.matrix[(n + i, j)].abs() <= 1e-15 * scale);
        }
    }
    assert!(b.matrix[(0, 0)] > 0.0 && b.matrix[(n, n)] > 0.0);
}

#[test]
fn dipole_truncation_reproduces_casimir_polder_energy() {
    // T = 0 energy with ℓ_max = 1 at 𝓛 ≫ R against −9R³/(16π𝓛⁴)
    let g = Geometry::new(1e-3, 1.0 - 1e-3).unwrap();
    let big_l = g.center_distance();
    let model = MaterialModel::PerfectReflector;
    let rule = gauss_legendre_unit(120);
    let mut energy = 0.0;
    for &(x, w) in rule.iter() {
        // q = x/(1 − x)/𝓛
        let q = x / (1.0 - x) / big_l;
        let jac = 1.0 / ((1.0 - x) * (1.0 - x) * big_l);
        let k = kernel(&model, &g, q, 1);
        let mut sum = 0.0;
        for m in 0..=1 {
            sum += weight(m) * log_det_one_minus(&k.block(m, false).unwrap()).unwrap();
        }
        energy += w * jac * sum;
    }
    energy /= 2.0 * std::f64::consts::PI;
    let expected = -9.0 * g.radius.powi(3) / (16.0 * std::f64::consts::PI * big_l.powi(4));
    assert!(
        (energy / expected - 1.0).abs() < 1e-2,
        "{energy} vs {expected}"
    );
}

#[test]
fn quadrature_doubling_converges() {
    let g = Geometry::new(1.0, 0.2).unwrap();
    let quad = QuadratureSpec::default();
    for model in [
        MaterialModel::PerfectReflector,
        MaterialModel::drude(LP, 250.0 * LP).unwrap(),
    ] {
        for &q in &[0.0, 0.05, 2.0, 30.0] {
            for m in [0, 3, 20] {
                let b = assemble_block(&model, &g, q, m, 30, true, &quad).unwrap();
                assert!(b.quadrature_order >= 200);
                // the default order is already converged at this size
                let k = kernel(&model, &g, q, 30).block(m, false).unwrap();
                let diff = block_difference(&k, &b);
                assert!(diff < 1e-10, "q = {q}, m = {m}: {diff}");
            }
        }
    }
}

#[test]
fn static_block_is_the_low_frequency_limit() {
    let g = Geometry::new(0.8, 0.6).unwrap();
    let q = 1e-7;
    for model in [
        MaterialModel::PerfectReflector,
        MaterialModel::plasma(LP).unwrap(),
        MaterialModel::drude(LP, 250.0 * LP).unwrap(),
    ] {
        for m in [0, 1, 4] {
            let dynamic = kernel(&model, &g, q, 10).block(m, false).unwrap();
            let stat = kernel(&model, &g, 0.0, 10).block(m, false).unwrap();
            let diff = block_difference(&dynamic, &stat);
            assert!(diff < 1e-6, "{} m = {m}: {diff}", model.label());
        }
    }
}

#[test]
fn drude_static_magnetic_rows_vanish() {
    let g = Geometry::new(1.0, 1.0).unwrap();
    let drude = MaterialModel::drude(LP, 250.0 * LP).unwrap();
    let b = kernel(&drude, &g, 0.0, 6).block(2, false).unwrap();
    let nl = 6 + 1 - 2;
    for i in nl..2 * nl {
        assert!(b.matrix.row(i).iter().all(|&v| v == 0.0));
        assert!(b.matrix.column(i).iter().all(|&v| v == 0.0));
    }
    assert!(b.matrix[(0, 0)] > 0.0);
}

#[test]
fn derivative_matches_finite_difference() {
    let model = MaterialModel::plasma(LP).unwrap();
    let g = Geometry::new(1.0, 0.5).unwrap();
    let h = 1e-5;
    for &q in &[0.0, 0.8] {
        let b = kernel(&model, &g, q, 8).block(1, true).unwrap();
        let plus = kernel(&model, &g.with_separation(0.5 + h), q, 8)
            .block(1, false)
            .unwrap();
        let minus = kernel(&model, &g.with_separation(0.5 - h), q, 8)
            .block(1, false)
            .unwrap();
        let fd = -(&plus.matrix - &minus.matrix) / (2.0 * h);
        let n = b.derivative.unwrap();
        let err = (&fd - &n).amax() / n.amax();
        assert!(err < 1e-7, "q = {q}: {err}");
    }
}

#[test]
fn blocks_are_passive_and_attractive() {
    let g = Geometry::new(2.0, 0.3).unwrap();
    for model in [
        MaterialModel::PerfectReflector,
        MaterialModel::plasma(LP).unwrap(),
        MaterialModel::drude(LP, 250.0 * LP).unwrap(),
    ] {
        for &q in &[0.0, 0.3, 3.0] {
            let k = kernel(&model, &g, q, 40);
            for m in [0, 1, 10] {
                let (ld, tr) = log_det_and_trace(&k.block(m, true).unwrap()).unwrap();
                assert!(ld < 0.0 && tr > 0.0, "{} q = {q} m = {m}", model.label());
            }
        }
    }
}

#[test]
fn log_det_matches_eigenvalues_on_random_contractions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let a = DMatrix::<f64>::from_fn(70, 70, |_, _| rng.random_range(-1.0..1.0));
        let norm = a.norm(); // Frobenius bounds the spectral norm
        let a = a * (0.95 / norm);
        let eig = a.complex_eigenvalues();
        let expected: f64 = eig
            .iter()
            .map(|l| (nalgebra::Complex::new(1.0, 0.0) - l).ln().re)
            .sum();
        let got = log_det_one_minus_matrix(&a).unwrap();
        assert!((got - expected).abs() < 1e-10, "{got} vs {expected}");
    }
}

#[test]
fn rejects_non_passive_and_non_finite() {
    let a = DMatrix::<f64>::from_diagonal_element(3, 3, 2.0);
    assert!(matches!(
        log_det_one_minus_matrix(&a),
        Err(CasimirError::NotPassive { .. })
    ));
    let mut b = DMatrix::<f64>::zeros(2, 2);
    b[(0, 1)] = f64::NAN;
    assert!(matches!(
        log_det_one_minus_matrix(&b),
        Err(CasimirError::NonFinite { .. })
    ));
}

#[test]
fn index_layout() {
    let g = Geometry::new(1.0, 1.0).unwrap();
    let b = kernel(&MaterialModel::PerfectReflector, &g, 1.0, 5)
        .block(2, false)
        .unwrap();
    assert_eq!(b.dimension(), 8);
    assert_eq!(b.index(2, Polarization::Electric), 0);
    assert_eq!(b.index(5, Polarization::Magnetic), 7);
}
