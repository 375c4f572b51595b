//! Python module `casimir`.
//!
//! Lengths in µm, temperatures in K; energies in ħc/µm, forces in ħc/µm²
//! (attraction positive), entropies in k_B. Heavy calls release the GIL.

use casimir_core::pfa::{self, PlanePlaneInput};
use casimir_core::thermodynamics::{self, ConvergenceReport, SolverSettings, ThermalState};
use casimir_core::{asymptotics, units, validation, CasimirError, MaterialModel};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: CasimirError) -> PyErr {
    match e {
        CasimirError::InvalidParameter(_)
        | CasimirError::ZeroFrequency
        | CasimirError::PerfectReflectorPermittivity => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Geometry", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyGeometry(casimir_core::Geometry);

#[pymethods]
impl PyGeometry {
    #[new]
    fn new(radius: f64, separation: f64) -> PyResult<Self> {
        casimir_core::Geometry::new(radius, separation)
            .map(PyGeometry)
            .map_err(to_py)
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.0.radius
    }

    #[getter]
    fn separation(&self) -> f64 {
        self.0.separation
    }

    fn center_distance(&self) -> f64 {
        self.0.center_distance()
    }

    fn aspect_ratio(&self) -> f64 {
        self.0.aspect_ratio()
    }

    fn __repr__(&self) -> String {
        format!(
            "Geometry(radius={}, separation={})",
            self.0.radius, self.0.separation
        )
    }
}

#[pyclass(name = "Material", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyMaterial(MaterialModel);

#[pymethods]
impl PyMaterial {
    #[staticmethod]
    fn perfect() -> Self {
        PyMaterial(MaterialModel::PerfectReflector)
    }

    /// Plasma model with plasma wavelength `λ_P` in µm.
    #[staticmethod]
    fn plasma(plasma_wavelength: f64) -> PyResult<Self> {
        MaterialModel::plasma(plasma_wavelength)
            .map(PyMaterial)
            .map_err(to_py)
    }

    /// Drude model with plasma and relaxation wavelengths in µm.
    #[staticmethod]
    fn drude(plasma_wavelength: f64, relaxation_wavelength: f64) -> PyResult<Self> {
        MaterialModel::drude(plasma_wavelength, relaxation_wavelength)
            .map(PyMaterial)
            .map_err(to_py)
    }

    /// Drude gold: `λ_P = 136 nm`, `λ_γ = 250 λ_P`.
    #[staticmethod]
    fn gold_drude() -> Self {
        PyMaterial(validation::gold_drude())
    }

    #[staticmethod]
    fn gold_plasma() -> Self {
        PyMaterial(validation::gold_plasma())
    }

    #[getter]
    fn label(&self) -> &'static str {
        self.0.label()
    }

    fn __repr__(&self) -> String {
        format!("Material.{}", self.0.label())
    }
}

#[pyclass(name = "Settings", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PySettings(SolverSettings);

#[pymethods]
impl PySettings {
    #[new]
    #[pyo3(signature = (tol = 1e-6, lmax = None))]
    fn new(tol: f64, lmax: Option<usize>) -> PyResult<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(PyValueError::new_err(format!(
                "tol must lie in (0, 1), got {tol}"
            )));
        }
        let mut s = SolverSettings::default().with_tol(tol);
        if let Some(l) = lmax {
            if l == 0 {
                return Err(PyValueError::new_err("lmax must be >= 1"));
            }
            s = s.with_l_max(l);
        }
        Ok(PySettings(s))
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.0.tol
    }

    #[getter]
    fn lmax(&self) -> Option<usize> {
        self.0.l_max
    }
}

#[pyclass(name = "ConvergenceReport", frozen, get_all, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyReport {
    l_max: usize,
    m_max: usize,
    n_max: usize,
    quadrature_order: usize,
    error_estimate: f64,
}

impl From<ConvergenceReport> for PyReport {
    fn from(r: ConvergenceReport) -> Self {
        PyReport {
            l_max: r.l_max,
            m_max: r.m_max,
            n_max: r.n_max,
            quadrature_order: r.quadrature_order,
            error_estimate: r.error_estimate,
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "ConvergenceReport(l_max={}, m_max={}, n_max={}, quadrature_order={}, error_estimate={:e})",
            self.l_max, self.m_max, self.n_max, self.quadrature_order, self.error_estimate
        )
    }
}

fn settings_or_default(settings: Option<PySettings>) -> SolverSettings {
    settings.map(|s| s.0).unwrap_or_default()
}

fn thermal(temperature: f64) -> PyResult<ThermalState> {
    ThermalState::new(temperature).map_err(to_py)
}

/// Free energy `𝓕(L, T)`; `T = 0` gives the interaction energy.
#[pyfunction]
#[pyo3(signature = (geometry, material, temperature, settings = None))]
fn free_energy(
    py: Python<'_>,
    geometry: PyGeometry,
    material: PyMaterial,
    temperature: f64,
    settings: Option<PySettings>,
) -> PyResult<(f64, PyReport)> {
    let t = thermal(temperature)?;
    let s = settings_or_default(settings);
    py.detach(|| thermodynamics::free_energy(&geometry.0, &material.0, &t, &s))
        .map(|(v, r)| (v, r.into()))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (geometry, material, temperature, settings = None))]
fn force(
    py: Python<'_>,
    geometry: PyGeometry,
    material: PyMaterial,
    temperature: f64,
    settings: Option<PySettings>,
) -> PyResult<(f64, PyReport)> {
    let t = thermal(temperature)?;
    let s = settings_or_default(settings);
    py.detach(|| thermodynamics::force(&geometry.0, &material.0, &t, &s))
        .map(|(v, r)| (v, r.into()))
        .map_err(to_py)
}

/// `θ = F(L, T)/F(L, 0)`.
#[pyfunction]
#[pyo3(signature = (geometry, material, temperature, settings = None))]
fn theta(
    py: Python<'_>,
    geometry: PyGeometry,
    material: PyMaterial,
    temperature: f64,
    settings: Option<PySettings>,
) -> PyResult<(f64, PyReport)> {
    let t = thermal(temperature)?;
    let s = settings_or_default(settings);
    py.detach(|| thermodynamics::theta_ratio(&geometry.0, &material.0, &t, &s))
        .map(|(v, r)| (v, r.into()))
        .map_err(to_py)
}

/// Entropy in k_B with its error estimate.
#[pyfunction]
#[pyo3(signature = (geometry, material, temperature, settings = None))]
fn entropy(
    py: Python<'_>,
    geometry: PyGeometry,
    material: PyMaterial,
    temperature: f64,
    settings: Option<PySettings>,
) -> PyResult<(f64, f64, PyReport)> {
    let t = thermal(temperature)?;
    let s = settings_or_default(settings);
    py.detach(|| thermodynamics::entropy(&geometry.0, &material.0, &t, &s))
        .map(|(v, e, r)| (v, e, r.into()))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (geometry, material, temperature, tol = 1e-8))]
fn pfa_force(
    py: Python<'_>,
    geometry: PyGeometry,
    material: PyMaterial,
    temperature: f64,
    tol: f64,
) -> PyResult<f64> {
    let t = thermal(temperature)?;
    py.detach(|| pfa::pfa_force(&geometry.0, &material.0, &t, tol))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (geometry, material, temperature, tol = 1e-8))]
fn pfa_theta(
    py: Python<'_>,
    geometry: PyGeometry,
    material: PyMaterial,
    temperature: f64,
    tol: f64,
) -> PyResult<f64> {
    let t = thermal(temperature)?;
    py.detach(|| pfa::pfa_theta(&geometry.0, &material.0, &t, tol))
        .map_err(to_py)
}

/// Plane-plane free energy per area in ħc/µm³ and its relative error estimate.
#[pyfunction]
#[pyo3(signature = (separation, material, temperature, tol = 1e-8))]
fn plane_plane_energy(
    py: Python<'_>,
    separation: f64,
    material: PyMaterial,
    temperature: f64,
    tol: f64,
) -> PyResult<(f64, f64)> {
    let input = PlanePlaneInput::new(separation, temperature, material.0).map_err(to_py)?;
    py.detach(|| pfa::lifshitz_energy_per_area(&input, tol))
        .map_err(to_py)
}

/// Dipole-limit free energy of a perfectly reflecting sphere.
#[pyfunction]
fn dipole_free_energy(separation: f64, radius: f64, temperature: f64) -> PyResult<f64> {
    asymptotics::free_energy_perfect_dipole(separation, radius, temperature).map_err(to_py)
}

#[pyfunction]
fn dipole_force(separation: f64, radius: f64, temperature: f64) -> PyResult<f64> {
    asymptotics::force_perfect_dipole(separation, radius, temperature).map_err(to_py)
}

#[pyfunction]
fn dipole_entropy(separation: f64, radius: f64, temperature: f64) -> PyResult<f64> {
    asymptotics::entropy_perfect_dipole(separation, radius, temperature).map_err(to_py)
}

/// `λ_T = ħc/(k_B T)` in µm.
#[pyfunction]
fn thermal_wavelength(temperature: f64) -> PyResult<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(PyValueError::new_err("temperature must be positive"));
    }
    Ok(units::thermal_wavelength(temperature))
}

/// Run acceptance criteria; returns `(id, passed, report line)` per criterion.
#[pyfunction]
#[pyo3(signature = (criteria = Vec::new()))]
fn validate(py: Python<'_>, criteria: Vec<u8>) -> Vec<(u8, bool, String)> {
    py.detach(|| {
        validation::CRITERIA
            .iter()
            .filter(|(id, _)| criteria.is_empty() || criteria.contains(id))
            .map(|(id, run)| {
                let report = run();
                (*id, report.passed(), report.to_string())
            })
            .collect()
    })
}

/// Registers classes and functions on `m`; the `#[pymodule]` entry point calls this.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGeometry>()?;
    m.add_class::<PyMaterial>()?;
    m.add_class::<PySettings>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(force, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(pfa_force, m)?)?;
    m.add_function(wrap_pyfunction!(pfa_theta, m)?)?;
    m.add_function(wrap_pyfunction!(plane_plane_energy, m)?)?;
    m.add_function(wrap_pyfunction!(dipole_free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(dipole_force, m)?)?;
    m.add_function(wrap_pyfunction!(dipole_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_wavelength, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("HBAR_C_OVER_KB", units::HBAR_C_OVER_KB)?;
    Ok(())
}

#[pymodule]
fn casimir(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
