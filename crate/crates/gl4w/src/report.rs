//! Shared report and configuration types.

use crate::gamma::C64;
use serde::{Deserialize, Serialize};

/// Result of checking one identity (or one batch of residuals) at sampled
/// points. `pass` holds exactly when `max_rel_err <= tol`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub samples: usize,
    pub max_rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub failures: Vec<FailureRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureRecord {
    pub point: Vec<(String, C64)>,
    pub lhs: C64,
    pub rhs: C64,
    pub rel_err: f64,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, tol: f64) -> Self {
        IdentityReport {
            name: name.into(),
            samples: 0,
            max_rel_err: 0.0,
            tol,
            pass: true,
            failures: Vec::new(),
        }
    }

    /// Record one sample; keeps `pass` in sync with `max_rel_err <= tol`.
    pub fn record(&mut self, point: Vec<(String, C64)>, lhs: C64, rhs: C64, rel_err: f64) {
        self.samples += 1;
        if rel_err > self.max_rel_err {
            self.max_rel_err = rel_err;
        }
        if rel_err > self.tol {
            self.failures.push(FailureRecord { point, lhs, rhs, rel_err });
        }
        self.pass = self.max_rel_err <= self.tol;
    }

    pub fn merge(&mut self, other: &IdentityReport) {
        self.samples += other.samples;
        self.max_rel_err = self.max_rel_err.max(other.max_rel_err);
        self.failures.extend(other.failures.iter().cloned());
        self.pass = self.max_rel_err <= self.tol;
    }
}

/// Relative difference of two values against the larger of the two (or an
/// explicit external scale, e.g. the largest single term of a sum).
pub fn rel_err_scaled(lhs: C64, rhs: C64, extra_scale: f64) -> f64 {
    let scale = lhs.norm().max(rhs.norm()).max(extra_scale).max(1e-300);
    (lhs - rhs).norm() / scale
}

/// Quadrature defaults and tolerances shared by the library and the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub step: f64,
    pub height: f64,
    pub max_refinements: u32,
    /// relative tolerance for single-contour quadrature
    pub tol_single: f64,
    /// relative tolerance for double contours
    pub tol_double: f64,
    /// relative tolerance for triple contours
    pub tol_triple: f64,
    /// extra margin from pole lines when validating contours
    pub margin: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            step: crate::quadrature::DEFAULT_STEP,
            height: crate::quadrature::DEFAULT_HEIGHT,
            max_refinements: crate::quadrature::DEFAULT_MAX_REFINEMENTS,
            tol_single: 1e-8,
            tol_double: 1e-6,
            tol_triple: 1e-4,
            margin: 0.1,
            seed: 1,
        }
    }
}

impl RunConfig {
    pub fn contour_at(&self, re_part: f64) -> crate::quadrature::ContourSpec {
        crate::quadrature::ContourSpec {
            re_part,
            truncation_height: self.height,
            step: self.step,
            max_refinements: self.max_refinements,
        }
    }
}
