//! Gauss–Hermite quadrature rules for ∫ f(t)·e^{−t²} dt over the real line.
//!
//! Nodes are the roots of the orthonormal Hermite polynomial of the
//! requested degree, found by bracketing sign changes and polishing with a
//! safeguarded Newton iteration on the three-term recurrence; weights come
//! from the Christoffel identity w_i = 1/Σ_{k<n} p_k(x_i)². Every rule is
//! checked against Σ w_k = √π before use.

use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772453850905516; // sqrt(pi)

/// A fixed-degree Gauss–Hermite rule (weight function e^{−t²}).
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Scaled orthonormal Hermite recurrence at `x`: returns
/// (q_n, q_{n−1}, Σ_{k<n} q_k²) for q_k(x) = p_k(x)·e^{−x²/2}.
///
/// p_0 = π^{−1/4}, p_{k+1} = (x·p_k − b_k·p_{k−1})/b_{k+1} with b_k = √(k/2);
/// the e^{−x²/2} factor rides along unchanged because the recurrence is
/// linear. Scaling keeps every value representable where the raw
/// polynomials overflow (beyond ~250 nodes), while roots and the Newton
/// ratio q_n/q_{n−1} = p_n/p_{n−1} are untouched.
fn hermite_recurrence(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    let mut sum_sq = 0.0f64;
    for k in 0..n {
        sum_sq += cur * cur;
        let b_k = (k as f64 / 2.0).sqrt();
        let b_k1 = ((k + 1) as f64 / 2.0).sqrt();
        let next = (x * cur - b_k * prev) / b_k1;
        prev = cur;
        cur = next;
    }
    (cur, prev, sum_sq)
}

/// Polish a bracketed simple root of p_n with Newton steps, falling back to
/// bisection whenever a step would leave the bracket.
fn refine_root(n: usize, mut lo: f64, mut hi: f64, lo_sign_negative: bool) -> f64 {
    let sqrt_2n = (2.0 * n as f64).sqrt();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (pn, pn_m1, _) = hermite_recurrence(n, x);
        if pn == 0.0 {
            return x;
        }
        if (pn < 0.0) == lo_sign_negative {
            lo = x;
        } else {
            hi = x;
        }
        let step = pn / (sqrt_2n * pn_m1);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= f64::EPSILON * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

impl GaussHermite {
    /// Build an `n`-point rule. Degrees large enough to overflow the
    /// recurrence (roughly n > 550) are reported as numerical failures.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::spec("quadrature needs at least one node"));
        }

        // All roots lie inside ±sqrt(2n+1); the central root gap is about
        // pi/sqrt(2n+1), so 8n scan points oversample it by ~10x.
        let x_max = (2.0 * n as f64 + 1.0).sqrt() + 0.5;
        let samples = 8 * n;
        let h = x_max / samples as f64;

        let mut positive_roots = Vec::with_capacity(n / 2);
        let start = if n % 2 == 1 { 0.5 * h } else { 0.0 };
        let mut x_prev = start;
        let (mut p_prev, _, _) = hermite_recurrence(n, x_prev);
        let mut i = 1usize;
        while x_prev < x_max {
            let x_cur = start + i as f64 * h;
            let (p_cur, _, _) = hermite_recurrence(n, x_cur);
            if !p_prev.is_finite() || !p_cur.is_finite() {
                return Err(Error::numerical(format!(
                    "Hermite recurrence overflowed for {n} nodes"
                )));
            }
            if p_prev == 0.0 {
                positive_roots.push(x_prev);
            } else if p_prev.signum() != p_cur.signum() && p_cur != 0.0 {
                positive_roots.push(refine_root(n, x_prev, x_cur, p_prev < 0.0));
            }
            x_prev = x_cur;
            p_prev = p_cur;
            i += 1;
        }
        if positive_roots.len() != n / 2 {
            return Err(Error::numerical(format!(
                "expected {} positive Hermite roots for n = {n}, found {}",
                n / 2,
                positive_roots.len()
            )));
        }

        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        // Christoffel weight 1/Σ p_k² = e^{−x²}/Σ q_k². Far-edge weights of
        // very large rules underflow to zero; their true values sit below
        // the smallest subnormal.
        let weight_at = |x: f64| -> f64 {
            let (_, _, sum_sq) = hermite_recurrence(n, x);
            (-x * x).exp() / sum_sq
        };
        for &r in positive_roots.iter().rev() {
            nodes.push(-r);
            weights.push(weight_at(r));
        }
        if n % 2 == 1 {
            nodes.push(0.0);
            weights.push(weight_at(0.0));
        }
        for &r in positive_roots.iter() {
            nodes.push(r);
            weights.push(weight_at(r));
        }

        let rule = GaussHermite { nodes, weights };
        rule.validate()?;
        Ok(rule)
    }

    fn validate(&self) -> Result<()> {
        for (&x, &w) in self.nodes.iter().zip(self.weights.iter()) {
            if !x.is_finite() || !w.is_finite() || w < 0.0 {
                return Err(Error::numerical(format!(
                    "non-finite or negative quadrature data: node {x}, weight {w}"
                )));
            }
        }
        let sum: f64 = self.weights.iter().sum();
        if ((sum - SQRT_PI) / SQRT_PI).abs() > 1e-12 {
            return Err(Error::numerical(format!(
                "quadrature weights sum to {sum}, expected sqrt(pi)"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Σ w_i · f(x_i), i.e. ∫ f(t)·e^{−t²} dt for smooth f.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
