//! Closed-form rates: AWGN capacity, the sphere-packing approximations for
//! PAM/QAM with their derivatives and limits, the asymptotic 2-PAM/4-QAM
//! form, the min(capacity, entropy) upper bound, and the minimum
//! cardinality needed to approach capacity.
//!
//! All rates are in bits/symbol/dimension; derivatives are with respect to
//! the *linear* SNR γ, not dB.

use std::f64::consts::LOG2_E;

use crate::constellation::ModulationKind;
use crate::error::{Error, Result};
use crate::rate::{RateMethod, RateResult};
use crate::snr::Snr;

/// log2(e)/2, the slope unit shared by the capacity and approximation
/// formulas.
const HALF_LOG2_E: f64 = LOG2_E / 2.0;

fn check_cardinality(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::cardinality(format!(
            "closed forms need M >= 2, got {m}"
        )));
    }
    Ok(())
}

/// Unconstrained AWGN capacity C = ½·log2(1+γ) in bits/symbol/dimension.
pub fn capacity_awgn(snr: Snr) -> RateResult {
    let value = HALF_LOG2_E * snr.linear().ln_1p();
    RateResult::new(value, 1, RateMethod::Capacity)
}

/// Sphere-packing approximation for M-PAM:
/// C_a = ½·log2((1+γ)/(1+γ/M²)).
pub fn approx_pam(m: usize, snr: Snr) -> Result<RateResult> {
    check_cardinality(m)?;
    let gamma = snr.linear();
    let m2 = (m as f64) * (m as f64);
    let value = HALF_LOG2_E * (gamma.ln_1p() - (gamma / m2).ln_1p());
    Ok(RateResult::new(value, 1, RateMethod::ApproxSphere))
}

/// Sphere-packing approximation for square M-QAM. Per dimension it equals
/// the √M-PAM value; per symbol, log2((1+γ)/(1+γ/M)).
pub fn approx_qam(m: usize, snr: Snr) -> Result<RateResult> {
    let side = (m as f64).sqrt().round() as usize;
    if side < 2 || side * side != m {
        return Err(Error::cardinality(format!(
            "QAM closed forms need integer sqrt(M) >= 2, got M = {m}"
        )));
    }
    let per_dim = approx_pam(side, snr)?.per_dimension();
    Ok(RateResult::new(per_dim, 2, RateMethod::ApproxSphere))
}

/// Laplace-method asymptotic rate of 2-PAM: C = 1 − log2(1 + e^{−γ}).
pub fn approx_asymptotic_bpsk(snr: Snr) -> RateResult {
    let value = 1.0 - LOG2_E * (-snr.linear()).exp().ln_1p();
    RateResult::new(value, 1, RateMethod::ApproxAsymptotic)
}

/// 4-QAM view of the asymptotic form: same value per dimension, twice the
/// 2-PAM rate per symbol.
pub fn approx_asymptotic_qpsk(snr: Snr) -> RateResult {
    let value = approx_asymptotic_bpsk(snr).per_dimension();
    RateResult::new(value, 2, RateMethod::ApproxAsymptotic)
}

/// min(capacity, constellation entropy) in bits/symbol/dimension.
pub fn rate_upper_bound(m: usize, dimension: usize, snr: Snr) -> Result<RateResult> {
    check_cardinality(m)?;
    if dimension == 0 {
        return Err(Error::domain("dimension must be at least 1".to_string()));
    }
    let entropy = (m as f64).log2() / dimension as f64;
    let value = capacity_awgn(snr).per_dimension().min(entropy);
    Ok(RateResult::new(value, dimension, RateMethod::UpperBound))
}

/// ∂C_a/∂γ = (log2e/2)·(M²−1)/((1+γ)(M²+γ)), strictly positive.
pub fn approx_pam_derivative(m: usize, snr: Snr) -> Result<f64> {
    check_cardinality(m)?;
    let gamma = snr.linear();
    let m2 = (m as f64) * (m as f64);
    Ok(HALF_LOG2_E * (m2 - 1.0) / ((1.0 + gamma) * (m2 + gamma)))
}

/// ∂²C_a/∂γ² = (log2e/2)·(1−M²)(1+M²+2γ)/((1+γ)²(M²+γ)²), strictly
/// negative: the approximation is strictly concave in the SNR.
pub fn approx_pam_second_derivative(m: usize, snr: Snr) -> Result<f64> {
    check_cardinality(m)?;
    let gamma = snr.linear();
    let m2 = (m as f64) * (m as f64);
    let numerator = (1.0 - m2) * (1.0 + m2 + 2.0 * gamma);
    let denominator = (1.0 + gamma).powi(2) * (m2 + gamma).powi(2);
    Ok(HALF_LOG2_E * numerator / denominator)
}

/// Low-SNR expansion of the sphere approximation:
/// C_a ≈ (1 − 1/M²)·(log2e/2)·γ. The slope deficit relative to capacity is
/// 1/M², at most 25% (attained by 2-PAM).
pub fn low_snr_approx_pam(m: usize, snr: Snr) -> Result<RateResult> {
    check_cardinality(m)?;
    let m2 = (m as f64) * (m as f64);
    let value = (1.0 - 1.0 / m2) * HALF_LOG2_E * snr.linear();
    Ok(RateResult::new(value, 1, RateMethod::ApproxSphere))
}

/// Minimum constellation cardinality needed to approach capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MminResult {
    /// Raw formula value: 2·max{1, √γ} for PAM, 4·max{1, γ} for QAM.
    pub exact_value: f64,
    /// Smallest usable power of two ≥ the formula value. For QAM the
    /// exponent is kept even so √M stays an integer.
    pub rounded_pow2: u64,
    /// Ozarow-style upper bound 2·√(1+γ); PAM rule only.
    pub upper_bound: Option<f64>,
}

/// Evaluate the minimum-cardinality rule for the given modulation.
pub fn mmin(snr: Snr, kind: ModulationKind) -> Result<MminResult> {
    let gamma = snr.linear();
    let (exact_value, base, upper_bound) = match kind {
        ModulationKind::Pam => (2.0 * gamma.sqrt().max(1.0), 2u64, Some(2.0 * (1.0 + gamma).sqrt())),
        ModulationKind::Qam => (4.0 * gamma.max(1.0), 4u64, None),
    };
    // rounding walks powers of `base`; past 2^62 the integer form overflows
    if exact_value > (1u64 << 62) as f64 {
        return Err(Error::domain(format!(
            "M_min formula value {exact_value} exceeds the integer rounding range"
        )));
    }
    let mut rounded_pow2 = base;
    while (rounded_pow2 as f64) < exact_value {
        rounded_pow2 *= base;
    }
    Ok(MminResult {
        exact_value,
        rounded_pow2,
        upper_bound,
    })
}
