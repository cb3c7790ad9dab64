use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every floating-point check in the crate.
///
/// `rank_cutoff` is relative to the largest singular value of the matrix
/// whose rank is being decided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eig_offdiag: f64,
    pub psd_slack: f64,
    pub residual: f64,
    pub rank_cutoff: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eig_offdiag: 1e-13,
            psd_slack: 1e-9,
            residual: 1e-8,
            rank_cutoff: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eig_offdiag", self.eig_offdiag),
            ("psd_slack", self.psd_slack),
            ("residual", self.residual),
            ("rank_cutoff", self.rank_cutoff),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        if self.psd_slack > self.residual {
            return Err(Error::InvalidTolerance(format!(
                "psd_slack ({}) must not exceed residual ({})",
                self.psd_slack, self.residual
            )));
        }
        Ok(())
    }

    /// Returns a copy with `residual` replaced, lowering `psd_slack` if needed
    /// so the configuration stays valid.
    pub fn with_residual(mut self, residual: f64) -> Result<Self> {
        self.residual = residual;
        if self.psd_slack > residual {
            self.psd_slack = residual;
        }
        self.validate()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive_and_misordered() {
        let t = ToleranceConfig {
            residual: 0.0,
            ..ToleranceConfig::default()
        };
        assert!(t.validate().is_err());

        let t = ToleranceConfig {
            psd_slack: 1e-6,
            ..ToleranceConfig::default()
        };
        assert!(t.validate().is_err());

        let t = ToleranceConfig {
            eig_offdiag: f64::NAN,
            ..ToleranceConfig::default()
        };
        assert!(t.validate().is_err());
    }

    #[test]
    fn residual_override_clamps_slack() {
        let t = ToleranceConfig::default().with_residual(1e-10).unwrap();
        assert_eq!(t.residual, 1e-10);
        assert_eq!(t.psd_slack, 1e-10);
    }
}
