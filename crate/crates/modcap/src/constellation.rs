//! Normalized M-PAM and M-QAM signal sets.
//!
//! Constellations are equispaced, equiprobable and normalized to unit
//! average symbol power per dimension, so the SNR fully determines the noise
//! variance downstream. Square M-QAM is represented by its per-axis √M-PAM
//! levels: the in-phase and quadrature channels are independent copies of
//! the same PAM constellation.

use crate::error::{Error, Result};

/// Largest supported cardinality. Keeps the O(M²) pairwise-difference
/// matrix and the O(M²·nodes) quadrature loops bounded.
pub const MAX_CARDINALITY: usize = 1 << 20;

/// Whether a constellation is one-dimensional (PAM) or two-dimensional (QAM).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModulationKind {
    Pam,
    Qam,
}

impl ModulationKind {
    /// Lowercase name used by the CLI and CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            ModulationKind::Pam => "pam",
            ModulationKind::Qam => "qam",
        }
    }

    /// Number of real dimensions.
    pub fn dimension(&self) -> usize {
        match self {
            ModulationKind::Pam => 1,
            ModulationKind::Qam => 2,
        }
    }
}

/// An M-point constellation with unit average power per dimension.
///
/// `levels` holds the per-axis amplitudes: all M of them for PAM, the √M
/// per-axis values for QAM. Levels are strictly increasing, symmetric about
/// zero and uniformly spaced. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ModulationKind,
    m: usize,
    levels: Vec<f64>,
}

impl Constellation {
    /// Equispaced M-PAM with levels (2k−1−M)·s for k = 1..M and
    /// s = √(3/(M²−1)), which gives mean squared level exactly 1.
    pub fn pam(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::cardinality(format!("PAM needs M >= 2, got {m}")));
        }
        if m > MAX_CARDINALITY {
            return Err(Error::cardinality(format!(
                "PAM cardinality {m} exceeds the supported maximum {MAX_CARDINALITY}"
            )));
        }
        let mf = m as f64;
        let scale = (3.0 / (mf * mf - 1.0)).sqrt();
        let levels = (1..=m)
            .map(|k| (2.0 * k as f64 - 1.0 - mf) * scale)
            .collect();
        Ok(Constellation {
            kind: ModulationKind::Pam,
            m,
            levels,
        })
    }

    /// Square M-QAM, i.e. two independent √M-PAM axes. Fails unless √M is an
    /// integer ≥ 2.
    pub fn qam(m: usize) -> Result<Self> {
        let side = (m as f64).sqrt().round() as usize;
        if side < 2 || side * side != m {
            return Err(Error::cardinality(format!(
                "QAM needs integer sqrt(M) >= 2, got M = {m}"
            )));
        }
        if m > MAX_CARDINALITY {
            return Err(Error::cardinality(format!(
                "QAM cardinality {m} exceeds the supported maximum {MAX_CARDINALITY}"
            )));
        }
        let pam = Constellation::pam(side)?;
        Ok(Constellation {
            kind: ModulationKind::Qam,
            m,
            levels: pam.levels,
        })
    }

    pub fn kind(&self) -> ModulationKind {
        self.kind
    }

    /// Number of constellation points M.
    pub fn cardinality(&self) -> usize {
        self.m
    }

    /// Number of real dimensions (1 for PAM, 2 for QAM).
    pub fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    /// Per-axis amplitude levels, strictly increasing.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Entropy of equiprobable signalling in bits/symbol/dimension:
    /// log2(M)/dimension.
    pub fn entropy(&self) -> f64 {
        (self.m as f64).log2() / self.dimension() as f64
    }

    /// Full signed pairwise-difference matrix `d[i][j] = a_i − a_j` over
    /// the per-axis levels.
    pub fn level_differences(&self) -> Vec<Vec<f64>> {
        self.levels
            .iter()
            .map(|ai| self.levels.iter().map(|aj| ai - aj).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pam2_is_antipodal_unit_pair() {
        let c = Constellation::pam(2).unwrap();
        assert_eq!(c.levels(), &[-1.0, 1.0]);
        assert_eq!(c.dimension(), 1);
        assert_eq!(c.cardinality(), 2);
    }

    #[test]
    fn pam4_levels_are_normalized_quarter_grid() {
        let c = Constellation::pam(4).unwrap();
        let s = 1.0 / 5f64.sqrt();
        let expected = [-3.0 * s, -s, s, 3.0 * s];
        for (got, want) in c.levels().iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn degenerate_cardinalities_are_rejected() {
        assert!(matches!(Constellation::pam(1), Err(Error::Cardinality(_))));
        assert!(matches!(Constellation::pam(0), Err(Error::Cardinality(_))));
        assert!(matches!(Constellation::qam(8), Err(Error::Cardinality(_))));
        assert!(matches!(Constellation::qam(2), Err(Error::Cardinality(_))));
        assert!(matches!(
            Constellation::pam(MAX_CARDINALITY + 1),
            Err(Error::Cardinality(_))
        ));
    }

    #[test]
    fn qam_axes_match_pam() {
        let q = Constellation::qam(4).unwrap();
        assert_eq!(q.levels(), &[-1.0, 1.0]);
        assert_eq!(q.dimension(), 2);

        let q16 = Constellation::qam(16).unwrap();
        let p4 = Constellation::pam(4).unwrap();
        assert_eq!(q16.levels(), p4.levels());

        for &m in &[4usize, 16, 64, 256, 1024] {
            let side = (m as f64).sqrt().round() as usize;
            assert_eq!(
                Constellation::qam(m).unwrap().levels(),
                Constellation::pam(side).unwrap().levels()
            );
        }
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(Constellation::pam(8).unwrap().entropy(), 3.0);
        assert_eq!(Constellation::qam(16).unwrap().entropy(), 2.0);
        assert_eq!(Constellation::pam(2).unwrap().entropy(), 1.0);
    }

    #[test]
    fn unit_power_across_cardinalities() {
        for exp in 1..=10 {
            let m = 1usize << exp;
            let c = Constellation::pam(m).unwrap();
            let mean_sq: f64 =
                c.levels().iter().map(|a| a * a).sum::<f64>() / c.levels().len() as f64;
            assert!(
                (mean_sq - 1.0).abs() <= 1e-12,
                "M={m}: mean squared level {mean_sq}"
            );
        }
    }

    #[test]
    fn level_differences_examples() {
        let c = Constellation::pam(2).unwrap();
        assert_eq!(c.level_differences(), vec![vec![0.0, -2.0], vec![2.0, 0.0]]);

        let c4 = Constellation::pam(4).unwrap();
        let d = c4.level_differences();
        // d_12 in 1-indexed notation
        assert!((d[0][1] - (-2.0 / 5f64.sqrt())).abs() < 1e-15);
        for (i, row) in d.iter().enumerate() {
            assert_eq!(row[i], 0.0);
        }
    }

    #[test]
    fn level_differences_are_antisymmetric() {
        for &m in &[2usize, 3, 4, 8, 16] {
            let c = Constellation::pam(m).unwrap();
            let d = c.level_differences();
            for (i, row) in d.iter().enumerate() {
                for (j, &value) in row.iter().enumerate() {
                    assert_eq!(value, -d[j][i], "M={m} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn levels_are_strictly_increasing_and_symmetric() {
        for &m in &[2usize, 5, 8, 64] {
            let c = Constellation::pam(m).unwrap();
            let lv = c.levels();
            for w in lv.windows(2) {
                assert!(w[0] < w[1]);
            }
            for k in 0..m {
                assert!(
                    (lv[k] + lv[m - 1 - k]).abs() < 1e-15,
                    "M={m}: levels not symmetric about 0"
                );
            }
        }
    }
}
