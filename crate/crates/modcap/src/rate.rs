//! Rate values tagged with the method that produced them.

/// How a rate value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateMethod {
    /// Exact mutual information via Gauss–Hermite quadrature.
    ExactGaussHermite,
    /// Exact mutual information estimated by Monte-Carlo sampling.
    ExactMonteCarlo,
    /// Closed-form sphere-packing approximation.
    ApproxSphere,
    /// Closed-form asymptotic (Laplace-method) approximation for 2-PAM/4-QAM.
    ApproxAsymptotic,
    /// Unconstrained AWGN channel capacity.
    Capacity,
    /// min(capacity, constellation entropy) upper bound.
    UpperBound,
}

impl RateMethod {
    /// Stable machine-readable name, used in CSV output and sorting.
    pub fn name(&self) -> &'static str {
        match self {
            RateMethod::ExactGaussHermite => "exact-gh",
            RateMethod::ExactMonteCarlo => "exact-mc",
            RateMethod::ApproxSphere => "approx",
            RateMethod::ApproxAsymptotic => "asymptotic",
            RateMethod::Capacity => "capacity",
            RateMethod::UpperBound => "bound",
        }
    }
}

/// A rate in bits/symbol/dimension plus provenance.
///
/// The canonical unit is per dimension so PAM (1-D) and QAM (2-D) values are
/// directly comparable; [`RateResult::per_symbol`] rescales by the
/// constellation dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    value: f64,
    dimension: usize,
    method: RateMethod,
    std_error: Option<f64>,
}

impl RateResult {
    pub(crate) fn new(value: f64, dimension: usize, method: RateMethod) -> Self {
        RateResult {
            value,
            dimension,
            method,
            std_error: None,
        }
    }

    pub(crate) fn with_std_error(mut self, std_error: f64) -> Self {
        self.std_error = Some(std_error);
        self
    }

    /// Rate in bits/symbol/dimension.
    pub fn per_dimension(&self) -> f64 {
        self.value
    }

    /// Rate in bits per (multidimensional) symbol.
    pub fn per_symbol(&self) -> f64 {
        self.value * self.dimension as f64
    }

    /// Number of real dimensions the rate refers to (1 for PAM, 2 for QAM).
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn method(&self) -> RateMethod {
        self.method
    }

    /// Standard error of the mean, per dimension. Only Monte-Carlo estimates
    /// carry one.
    pub fn std_error(&self) -> Option<f64> {
        self.std_error
    }
}
