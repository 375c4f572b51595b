//! Grid evaluation. Points run on the rayon pool; rows come back in grid order
//! (model, temperature, radius, separation) whatever the scheduling.

use casimir_core::pfa::pfa_theta;
use casimir_core::thermodynamics::{
    entropy, evaluate, theta_ratio, ConvergenceReport, SolverSettings, ThermalState,
};
use casimir_core::{Geometry, Result};
use rayon::prelude::*;

use crate::config::{ModelKind, Quantity, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub model: ModelKind,
    pub temperature: f64,
    pub radius: f64,
    pub separation: f64,
}

/// Values in ħc/µm (energy), ħc/µm² (force, attraction positive) and k_B (entropy).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Row {
    pub free_energy: Option<f64>,
    pub force: Option<f64>,
    pub entropy: Option<f64>,
    pub theta: Option<f64>,
    pub theta_pfa: Option<f64>,
    pub ratio: Option<f64>,
    pub report: ConvergenceReport,
    /// `None` when every requested quantity was computed.
    pub failure: Option<String>,
}

impl Row {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn grid(spec: &SweepSpec) -> Vec<GridPoint> {
    let mut points = Vec::with_capacity(spec.points());
    for &model in &spec.models {
        for &temperature in &spec.temperatures {
            for &radius in &spec.radii {
                for &separation in &spec.separations {
                    points.push(GridPoint {
                        model,
                        temperature,
                        radius,
                        separation,
                    });
                }
            }
        }
    }
    points
}

fn merge(into: &mut ConvergenceReport, other: ConvergenceReport) {
    into.l_max = into.l_max.max(other.l_max);
    into.m_max = into.m_max.max(other.m_max);
    into.n_max = into.n_max.max(other.n_max);
    into.quadrature_order = into.quadrature_order.max(other.quadrature_order);
    into.error_estimate = into.error_estimate.max(other.error_estimate);
}

fn compute(spec: &SweepSpec, point: &GridPoint, row: &mut Row) -> Result<()> {
    let geometry = Geometry::new(point.radius, point.separation)?;
    let model = spec.material(point.model)?;
    let thermal = ThermalState::new(point.temperature)?;
    let mut settings = SolverSettings::default().with_tol(spec.tol);
    if let Some(l) = spec.l_max {
        settings = settings.with_l_max(l);
    }
    let wants = |q: Quantity| spec.quantities.contains(&q);

    if wants(Quantity::FreeEnergy) || wants(Quantity::Force) {
        let e = evaluate(
            &geometry,
            &model,
            &thermal,
            &settings,
            wants(Quantity::Force),
        )?;
        if wants(Quantity::FreeEnergy) {
            row.free_energy = Some(e.free_energy);
        }
        row.force = e.force;
        merge(&mut row.report, e.report);
    }
    if wants(Quantity::Entropy) {
        let (s, _, report) = entropy(&geometry, &model, &thermal, &settings)?;
        row.entropy = Some(s);
        merge(&mut row.report, report);
    }
    if wants(Quantity::Theta) {
        let (theta, report) = theta_ratio(&geometry, &model, &thermal, &settings)?;
        row.theta = Some(theta);
        merge(&mut row.report, report);
    }
    if wants(Quantity::ThetaPfa) {
        row.theta_pfa = Some(pfa_theta(&geometry, &model, &thermal, spec.tol)?);
    }
    if wants(Quantity::Ratio) {
        // both models at one ℓ_max so the ratio sees a common truncation
        let settings = settings.with_l_max(settings.l_max_for(&geometry));
        let plasma = spec.material(ModelKind::Plasma)?;
        let drude = spec.material(ModelKind::Drude)?;
        let p = evaluate(&geometry, &plasma, &thermal, &settings, true)?;
        let d = evaluate(&geometry, &drude, &thermal, &settings, true)?;
        row.ratio = Some(p.force.unwrap() / d.force.unwrap());
        merge(&mut row.report, p.report);
        merge(&mut row.report, d.report);
    }
    Ok(())
}

pub fn evaluate_point(spec: &SweepSpec, point: &GridPoint) -> Row {
    let mut row = Row::default();
    if let Err(e) = compute(spec, point, &mut row) {
        row.failure = Some(e.to_string());
    }
    row
}

/// Every grid point, in grid order. Call inside a rayon pool to bound the workers.
pub fn run(spec: &SweepSpec) -> Vec<(GridPoint, Row)> {
    grid(spec)
        .into_par_iter()
        .map(|p| (p, evaluate_point(spec, &p)))
        .collect()
}
