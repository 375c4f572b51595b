//! Plane-sphere configuration.

use crate::error::{ensure, Result};

/// Sphere of radius `radius` whose surface sits `separation` above the plate (both µm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub radius: f64,
    pub separation: f64,
}

impl Geometry {
    pub fn new(radius: f64, separation: f64) -> Result<Self> {
        let g = Geometry { radius, separation };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.radius > 0.0 && self.radius.is_finite(), || {
            format!(
                "sphere radius must be positive and finite, got {}",
                self.radius
            )
        })?;
        ensure(self.separation > 0.0 && self.separation.is_finite(), || {
            format!(
                "separation must be positive and finite, got {}",
                self.separation
            )
        })
    }

    /// Distance from the sphere centre to the plate, `𝓛 = L + R`.
    pub fn center_distance(&self) -> f64 {
        self.separation + self.radius
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.radius / self.separation
    }

    pub fn with_separation(&self, separation: f64) -> Self {
        Geometry {
            separation,
            ..*self
        }
    }
}
