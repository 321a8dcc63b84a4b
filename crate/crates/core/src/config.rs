//! Numeric tolerances shared by the classifier and the Fourier checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable holding tolerance overrides.
pub const TOL_ENV: &str = "SMOOTHSPACE_TOL";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance on annihilation and final-equation residuals.
    pub residual: f64,
    /// Relative tolerance of adaptive quadrature.
    pub quadrature: f64,
    /// Relative imaginary-part tolerance when deciding a numeric root is real.
    pub root_imag: f64,
    /// Relative pivot tolerance for floating elimination.
    pub rank: f64,
    /// Relative tolerance for floating zero tests of a symbol.
    pub zero_set: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-9,
            quadrature: 1e-6,
            root_imag: 1e-9,
            rank: 1e-10,
            zero_set: 1e-9,
        }
    }
}

impl Tolerances {
    /// Apply overrides of the form `key=value,key=value`, or a bare number
    /// that replaces every tolerance.
    pub fn with_overrides(mut self, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(self);
        }
        if let Ok(v) = text.parse::<f64>() {
            check_positive("all", v)?;
            return Ok(Tolerances {
                residual: v,
                quadrature: v,
                root_imag: v,
                rank: v,
                zero_set: v,
            });
        }
        for item in text.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("tolerance override '{item}' is not key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("tolerance value '{v}' is not a number")))?;
            check_positive(k, v)?;
            let slot = match k.trim() {
                "residual" => &mut self.residual,
                "quadrature" => &mut self.quadrature,
                "root_imag" => &mut self.root_imag,
                "rank" => &mut self.rank,
                "zero_set" => &mut self.zero_set,
                other => return Err(Error::InvalidArgument(format!("unknown tolerance '{other}'"))),
            };
            *slot = v;
        }
        Ok(self)
    }

    /// Defaults with overrides from [`TOL_ENV`] if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV) {
            Ok(s) => Self::default().with_overrides(&s),
            Err(_) => Ok(Self::default()),
        }
    }
}

fn check_positive(k: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance {k} must be positive and finite")))
    }
}
