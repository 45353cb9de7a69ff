//! Numerical tolerances shared by the computational modules.

use serde::{Deserialize, Serialize};

/// Environment variable overriding [`Tolerances::general`].
pub const TOLERANCE_ENV: &str = "KNOT_TORSION_TOL";

/// Every threshold used by the pipeline, echoed into CLI reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relator residuals, root checks and acyclicity rank cutoffs.
    pub general: f64,
    /// Relative cutoff below which float Laurent end coefficients are dropped.
    pub trim: f64,
    /// Relative residual allowed when verifying an interpolated determinant.
    pub interpolation: f64,
    /// Relative remainder allowed when dividing by `(t-1)^2`.
    pub division: f64,
    /// `|Δ'(r)| > simplicity * ‖Δ'‖` marks a root as simple.
    pub simplicity: f64,
    /// Agreement required between the closed-form and finite-difference limit.
    pub derivative: f64,
    /// Newton stopping criterion on the scaled residual.
    pub newton: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            general: 1e-8,
            trim: crate::laurent::DEFAULT_TRIM,
            interpolation: 1e-8,
            division: 1e-8,
            simplicity: 1e-6,
            derivative: 1e-6,
            newton: 1e-12,
        }
    }
}

impl Tolerances {
    /// Defaults, with `general` replaced by `KNOT_TORSION_TOL` when it parses
    /// as a positive float.
    pub fn from_env() -> Self {
        let mut tol = Tolerances::default();
        if let Some(v) = std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| *v > 0.0 && v.is_finite())
        {
            tol.general = v;
        }
        tol
    }

    pub fn interpolation_options(&self) -> crate::laurent::InterpolationOptions {
        crate::laurent::InterpolationOptions {
            tolerance: self.interpolation,
            trim: self.trim,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("general", self.general),
            ("trim", self.trim),
            ("interpolation", self.interpolation),
            ("division", self.division),
            ("simplicity", self.simplicity),
            ("derivative", self.derivative),
            ("newton", self.newton),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance `{name}` must be positive, got {v}"));
            }
        }
        Ok(())
    }
}
