//! Multi-stream power allocation under the sphere-packing rate.
//!
//! Maximizes Σ_k C_a(p_k·g_k; M_k) subject to Σ p_k = P, p_k ≥ 0. Strict
//! concavity of C_a in the SNR makes this a convex problem with a
//! water-filling structure: at the optimum every active stream has marginal
//! rate equal to a common level λ, and the per-stream power at a given λ is
//! the root of a quadratic, in closed form. The outer solve is a plain
//! bisection on λ.
//!
//! Streams use PAM rate semantics; model a QAM stream as two PAM streams
//! with equal gain.

use crate::closed_form::approx_pam;
use crate::error::{Error, Result};
use crate::snr::Snr;

const MAX_ITERATIONS: usize = 200;

/// A multi-stream allocation instance.
#[derive(Debug, Clone)]
pub struct AllocationProblem {
    gains: Vec<f64>,
    cardinalities: Vec<usize>,
    budget: f64,
    tolerance: f64,
}

impl AllocationProblem {
    /// Gains are linear SNR per unit power; cardinalities follow PAM
    /// semantics (M ≥ 2); the budget is the total power to distribute.
    /// Power-balance tolerance defaults to 1e-10 (relative).
    pub fn new(gains: Vec<f64>, cardinalities: Vec<usize>, budget: f64) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::spec("allocation needs at least one stream"));
        }
        if gains.len() != cardinalities.len() {
            return Err(Error::spec(format!(
                "{} gains vs {} cardinalities",
                gains.len(),
                cardinalities.len()
            )));
        }
        for (k, &g) in gains.iter().enumerate() {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::spec(format!("stream {k}: gain must be positive, got {g}")));
            }
        }
        for (k, &m) in cardinalities.iter().enumerate() {
            if m < 2 {
                return Err(Error::spec(format!("stream {k}: M must be >= 2, got {m}")));
            }
        }
        if !budget.is_finite() || budget <= 0.0 {
            return Err(Error::spec(format!("budget must be positive, got {budget}")));
        }
        Ok(AllocationProblem {
            gains,
            cardinalities,
            budget,
            tolerance: 1e-10,
        })
    }

    /// Override the relative power-balance tolerance. Zero is allowed but
    /// will usually make the bisection report non-convergence.
    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !tolerance.is_finite() || tolerance < 0.0 {
            return Err(Error::spec(format!(
                "tolerance must be finite and non-negative, got {tolerance}"
            )));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn num_streams(&self) -> usize {
        self.gains.len()
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// Optimal powers with KKT diagnostics.
#[derive(Debug, Clone)]
pub struct AllocationSolution {
    /// Per-stream powers, summing to the budget within tolerance.
    pub powers: Vec<f64>,
    /// Per-stream rates C_a(p_k·g_k; M_k) in bits/symbol/dimension.
    pub rates: Vec<f64>,
    /// Total rate Σ rates.
    pub objective: f64,
    /// Water-level multiplier λ: the common marginal rate of active streams.
    pub dual: f64,
    /// max over active streams of |∂C_a/∂p_k − λ|.
    pub kkt_residual: f64,
}

/// Marginal rate ∂C_a/∂p of a stream at power `p`:
/// g·(log2e/2)·(M²−1)/((1+p·g)(M²+p·g)). Strictly positive and strictly
/// decreasing in p. Unlike the SNR-domain derivative this is also defined
/// at p = 0.
pub fn marginal_rate(m: usize, gain: f64, power: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::cardinality(format!(
            "allocation needs M >= 2, got {m}"
        )));
    }
    if !gain.is_finite() || gain <= 0.0 {
        return Err(Error::domain(format!("gain must be positive, got {gain}")));
    }
    if !power.is_finite() || power < 0.0 {
        return Err(Error::domain(format!(
            "power must be non-negative, got {power}"
        )));
    }
    let x = power * gain;
    let m2 = (m as f64) * (m as f64);
    Ok(gain * (std::f64::consts::LOG2_E / 2.0) * (m2 - 1.0) / ((1.0 + x) * (m2 + x)))
}

/// Power that brings a stream's marginal rate down to `level`: the unique
/// non-negative root of (1+x)(M²+x) = g·(log2e/2)·(M²−1)/level in x = p·g.
/// Returns 0 when the stream's marginal at zero power is already at or
/// below `level`.
pub fn stream_power_at_level(m: usize, gain: f64, level: f64) -> Result<f64> {
    if !level.is_finite() || level <= 0.0 {
        return Err(Error::domain(format!(
            "water level must be positive, got {level}"
        )));
    }
    if !gain.is_finite() || gain <= 0.0 {
        return Err(Error::domain(format!("gain must be positive, got {gain}")));
    }
    if m < 2 {
        return Err(Error::cardinality(format!(
            "allocation needs M >= 2, got {m}"
        )));
    }
    let m2 = (m as f64) * (m as f64);
    let c = gain * (std::f64::consts::LOG2_E / 2.0) * (m2 - 1.0) / level;
    // (1+x)(M²+x) = c  =>  x² + (M²+1)x + (M²−c) = 0; rationalized positive
    // root, stable when c ≈ M²
    let discriminant = (m2 - 1.0) * (m2 - 1.0) + 4.0 * c;
    let x = 2.0 * (c - m2) / ((m2 + 1.0) + discriminant.sqrt());
    Ok(x.max(0.0) / gain)
}

/// Solve the allocation by dual bisection. The marginal rates are strictly
/// positive, so the optimum spends the whole budget.
pub fn allocate(problem: &AllocationProblem) -> Result<AllocationSolution> {
    let k = problem.num_streams();
    let budget = problem.budget;
    let tolerance = problem.tolerance;

    let demand = |level: f64| -> Result<f64> {
        let mut total = 0.0;
        for i in 0..k {
            total += stream_power_at_level(problem.cardinalities[i], problem.gains[i], level)?;
        }
        Ok(total)
    };

    // At level_hi every stream demands zero power; demand grows without
    // bound as the level drops toward zero.
    let mut level_hi = 0.0f64;
    for i in 0..k {
        level_hi = level_hi.max(marginal_rate(problem.cardinalities[i], problem.gains[i], 0.0)?);
    }

    let mut iterations = 0usize;
    let mut level_lo = level_hi / 2.0;
    while demand(level_lo)? < budget {
        level_lo /= 2.0;
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::Convergence(format!(
                "failed to bracket the water level within {MAX_ITERATIONS} iterations"
            )));
        }
    }

    let mut level = level_hi;
    let mut converged = (demand(level)? - budget).abs() <= tolerance * budget;
    while !converged && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (level_lo + level_hi);
        let d = demand(mid)?;
        level = mid;
        if (d - budget).abs() <= tolerance * budget {
            converged = true;
            break;
        }
        if d > budget {
            level_lo = mid;
        } else {
            level_hi = mid;
        }
        iterations += 1;
    }
    if !converged {
        return Err(Error::Convergence(format!(
            "power mismatch still above {tolerance:e} after {MAX_ITERATIONS} iterations"
        )));
    }

    let mut powers = Vec::with_capacity(k);
    let mut rates = Vec::with_capacity(k);
    let mut kkt_residual = 0.0f64;
    for i in 0..k {
        let (m, g) = (problem.cardinalities[i], problem.gains[i]);
        let p = stream_power_at_level(m, g, level)?;
        if p > 0.0 {
            rates.push(approx_pam(m, Snr::from_linear(p * g)?)?.per_dimension());
            kkt_residual = kkt_residual.max((marginal_rate(m, g, p)? - level).abs());
        } else {
            rates.push(0.0);
        }
        powers.push(p);
    }
    let objective = rates.iter().sum();

    Ok(AllocationSolution {
        powers,
        rates,
        objective,
        dual: level,
        kkt_residual,
    })
}
