//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// Thresholds used throughout the crate.
///
/// `alg` bounds algebraic identities (determinants, reconstructions), `cls`
/// the trace thresholds used for classification, `geo` incidence tests such as
/// perpendicularity, and `vertex` the snapping radius for coincident vertices
/// and ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub alg: f64,
    pub cls: f64,
    pub geo: f64,
    pub vertex: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            alg: 1e-9,
            cls: 1e-9,
            geo: 1e-8,
            vertex: 1e-7,
        }
    }
}

impl Tolerances {
    /// Multiplies every threshold by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            alg: self.alg * factor,
            cls: self.cls * factor,
            geo: self.geo * factor,
            vertex: self.vertex * factor,
        }
    }

    /// Band inside which an incidence decision is reported as borderline.
    pub fn borderline(&self) -> f64 {
        10.0 * self.vertex
    }
}
