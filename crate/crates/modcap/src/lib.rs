//! Achievable information rates of M-PAM and M-QAM constellations over the
//! AWGN channel.
//!
//! Three ways to get a rate, all in bits/symbol/dimension:
//!
//! - **Exact**: the mutual information of the modulation-constrained
//!   channel, evaluated by Gauss–Hermite quadrature
//!   ([`exact_mi::mi_pam_quadrature`], [`exact_mi::mi_qam`]) with an
//!   independent Monte-Carlo estimator ([`exact_mi::mi_pam_montecarlo`]) as
//!   a cross-check.
//! - **Closed form**: the sphere-packing approximation
//!   C_a = ½·log2((1+γ)/(1+γ/M²)) and friends ([`closed_form`]), including
//!   derivatives, low/high-SNR limits, the min(capacity, entropy) bound and
//!   the minimum cardinality needed to approach capacity.
//! - **Allocated**: optimal multi-stream power allocation under the
//!   closed-form rate ([`allocation`]), a water-filling-style dual
//!   bisection that exploits strict concavity in the SNR.
//!
//! Constellations are equispaced, equiprobable and normalized to unit
//! average power per dimension, so γ = 1/σ0² throughout. Square M-QAM
//! factors into two independent √M-PAM axes; per dimension, its rate equals
//! the per-axis PAM rate.
//!
//! The `modcap` binary exposes everything as CLI subcommands emitting CSV
//! (see the [`cli`] module).
//!
//! ```
//! use modcap::{closed_form, exact_mi, Constellation, QuadratureSpec, Snr};
//!
//! let snr = Snr::from_db(10.0).unwrap();
//! let pam8 = Constellation::pam(8).unwrap();
//! let exact = exact_mi::mi_pam_quadrature(&pam8, snr, &QuadratureSpec::default()).unwrap();
//! let approx = closed_form::approx_pam(8, snr).unwrap();
//! assert!((exact.per_dimension() - approx.per_dimension()).abs() < 0.25);
//! ```

pub mod allocation;
pub mod cli;
pub mod closed_form;
pub mod constellation;
mod error;
pub mod exact_mi;
pub mod gauss_hermite;
mod rate;
mod snr;

pub use constellation::{Constellation, ModulationKind};
pub use error::{Error, Result};
pub use exact_mi::{McSpec, QuadratureSpec};
pub use rate::{RateMethod, RateResult};
pub use snr::Snr;
