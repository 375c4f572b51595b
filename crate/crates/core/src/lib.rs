//! Thermal Casimir interaction between a plate and a sphere.
//!
//! The free energy is evaluated from the scattering formula
//! `𝓕 = k_BT Σ'_n Σ_m ln det(1 − M_m(ξ_n))` with the round-trip operator built from
//! Mie coefficients of the sphere and Fresnel coefficients of the plate. Perfect
//! reflectors, plasma and Drude metals are supported, together with the
//! proximity-force approximation and closed-form large-distance asymptotics.
//!
//! Lengths are in micrometres. Energies are in `ħc/µm`, forces in `ħc/µm²` and
//! entropies in units of `k_B`; [`units`] converts to SI.

pub mod asymptotics;
pub mod error;
pub mod geometry;
pub mod materials;
pub mod math;
pub mod mie;
pub mod pfa;
pub mod roundtrip;
pub mod thermodynamics;
pub mod units;
pub mod validation;

pub use error::{CasimirError, Result};
pub use geometry::Geometry;
pub use materials::MaterialModel;
