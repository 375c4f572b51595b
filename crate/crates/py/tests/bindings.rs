use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let m = PyModule::new(py, "casimir").unwrap();
        casimir::register(&m).unwrap();
        let globals = pyo3::types::PyDict::new(py);
        globals.set_item("casimir", m).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn free_energy_and_force_from_python() {
    with_module(
        c"
g = casimir.Geometry(0.1, 2.0)
s = casimir.Settings(tol=1e-6)
f, report = casimir.free_energy(g, casimir.Material.perfect(), 300.0, s)
assert f < 0, f
assert report.l_max >= 1 and report.error_estimate < 1e-5
force, _ = casimir.force(g, casimir.Material.gold_drude(), 300.0)
assert force > 0
dipole = casimir.dipole_free_energy(2.0 + 0.1, 0.1, 300.0)
assert abs(f / dipole - 1) < 5e-2, (f, dipole)
",
    );
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(
        c"
try:
    casimir.Geometry(-1.0, 1.0)
    raise AssertionError('negative radius accepted')
except ValueError:
    pass
try:
    casimir.theta(casimir.Geometry(1.0, 1.0), casimir.Material.perfect(), 0.0)
    raise AssertionError('theta at T = 0 accepted')
except ValueError:
    pass
try:
    casimir.Settings(tol=2.0)
    raise AssertionError('tol = 2 accepted')
except ValueError:
    pass
",
    );
}

#[test]
fn pfa_and_constants() {
    with_module(
        c"
import math
e, err = casimir.plane_plane_energy(1.0, casimir.Material.perfect(), 0.0, 1e-9)
assert abs(e / (-math.pi**2 / 720) - 1) < 1e-8 and err < 1e-9
assert abs(casimir.thermal_wavelength(300.0) - 7.6329) < 1e-3
assert casimir.Material.gold_plasma().label == 'plasma'
assert 0 < casimir.pfa_theta(casimir.Geometry(1.0, 1.0), casimir.Material.gold_drude(), 300.0) < 1
",
    );
}
