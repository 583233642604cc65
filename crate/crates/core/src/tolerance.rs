use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named numerical thresholds shared by every operation.
///
/// All values are relative: `eps_rank` to the largest singular value,
/// `eps_gram` to the largest Gram entry (floored at 1), `eps_align` to the
/// perimeter, `eps_root` to the width of the bisection bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eps_rank: f64,
    pub eps_gram: f64,
    pub eps_align: f64,
    pub eps_root: f64,
    pub cond_floor: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_rank: 1e-8,
            eps_gram: 1e-7,
            eps_align: 1e-6,
            eps_root: 1e-12,
            cond_floor: 1e-3,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("eps_rank", self.eps_rank),
            ("eps_gram", self.eps_gram),
            ("eps_align", self.eps_align),
            ("eps_root", self.eps_root),
            ("cond_floor", self.cond_floor),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        if self.eps_root >= self.eps_rank {
            return Err(Error::InvalidTolerance(format!(
                "eps_root ({}) must be smaller than eps_rank ({})",
                self.eps_root, self.eps_rank
            )));
        }
        Ok(())
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
    fn rejects_nonpositive_and_inverted() {
        let base = ToleranceConfig::default();
        for tol in [
            ToleranceConfig { eps_gram: 0.0, ..base },
            ToleranceConfig { eps_root: 1e-6, ..base },
            ToleranceConfig { cond_floor: f64::NAN, ..base },
        ] {
            assert!(tol.validate().is_err());
        }
    }
}
