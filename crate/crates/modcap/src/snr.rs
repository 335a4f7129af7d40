//! Signal-to-noise ratio carried in both linear and dB form.

use crate::error::{Error, Result};

/// A strictly positive signal-to-noise ratio γ.
///
/// Signals are normalized to unit average power per dimension, so the noise
/// variance seen by the integrators is `1/γ`. The value is stored in linear
/// form; the dB view is derived, which keeps the two representations
/// consistent by construction.
///
/// γ = 0 is rejected rather than mapped to a zero rate; callers that want
/// the zero-SNR limit can pass something like `1e-30`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snr {
    linear: f64,
}

impl Snr {
    /// Build from a linear SNR. Fails unless `linear` is finite and > 0.
    pub fn from_linear(linear: f64) -> Result<Self> {
        if !linear.is_finite() || linear <= 0.0 {
            return Err(Error::domain(format!(
                "SNR must be finite and strictly positive, got {linear}"
            )));
        }
        Ok(Snr { linear })
    }

    /// Build from a dB value: γ = 10^(db/10).
    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() {
            return Err(Error::domain(format!("SNR in dB must be finite, got {db}")));
        }
        Self::from_linear(10f64.powf(db / 10.0))
    }

    /// Linear SNR γ.
    pub fn linear(&self) -> f64 {
        self.linear
    }

    /// SNR in dB, 10·log10(γ).
    pub fn db(&self) -> f64 {
        10.0 * self.linear.log10()
    }

    /// Noise variance under unit signal power, σ0² = 1/γ.
    pub fn noise_variance(&self) -> f64 {
        1.0 / self.linear
    }
}
