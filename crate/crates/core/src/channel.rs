//! End-of-run measurement channel and its classical information quantities.
//!
//! Measuring every conditional final state in the computational basis gives
//! the classical channel `P(Y = y | X = x) = |<y|psi_x>|^2`. The target prior
//! is uniform, so `P_e = 1 - (1/n) sum_x P(x|x)` and `I(X;Y)` is evaluated in
//! bits under that prior.

use crate::error::{Error, Result};
use crate::state::ConditionalState;

/// Row-stochastic matrix `probs[x][y] = P(Y=y | X=x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    n: usize,
    probs: Vec<f64>, // row-major
}

const ROW_SUM_TOL: f64 = 1e-10;

impl ChannelMatrix {
    pub fn from_rows(n: usize, probs: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n });
        }
        if probs.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: probs.len(),
            });
        }
        for x in 0..n {
            let row = &probs[x * n..(x + 1) * n];
            if let Some(&bad) = row.iter().find(|&&p| !(0.0..=1.0 + 1e-12).contains(&p)) {
                return Err(Error::ProbabilityOutOfRange { value: bad });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::NotNormalized {
                    deviation: (sum - 1.0).abs(),
                });
            }
        }
        Ok(Self { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.probs[x * self.n..(x + 1) * self.n]
    }
}

/// Computational-basis measurement of each conditional final state.
pub fn measurement_channel(final_states: &[ConditionalState]) -> Result<ChannelMatrix> {
    let n = final_states.len();
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    let mut probs = vec![0.0f64; n * n];
    for (x, state) in final_states.iter().enumerate() {
        if state.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: state.n(),
            });
        }
        for (y, a) in state.amplitudes().iter().enumerate() {
            probs[x * n + y] = a.norm_sqr();
        }
    }
    ChannelMatrix::from_rows(n, probs)
}

/// `P_e = P(Y != X)` under the uniform prior.
pub fn error_probability(channel: &ChannelMatrix) -> f64 {
    let n = channel.n();
    let correct: f64 = (0..n).map(|x| channel.prob(x, x)).sum();
    (1.0 - correct / n as f64).clamp(0.0, 1.0)
}

fn shannon_entropy_bits(dist: &[f64]) -> f64 {
    dist.iter()
        .map(|&p| if p > 0.0 { -p * p.log2() } else { 0.0 })
        .sum()
}

/// `I(X;Y) = H(Y) - H(Y|X)` in bits, for uniform `X`.
pub fn mutual_information(channel: &ChannelMatrix) -> f64 {
    let n = channel.n();
    let inv_n = 1.0 / n as f64;
    let mut output_dist = vec![0.0f64; n];
    for x in 0..n {
        for (y, p) in channel.row(x).iter().enumerate() {
            output_dist[y] += p * inv_n;
        }
    }
    let h_y = shannon_entropy_bits(&output_dist);
    let h_y_given_x: f64 = (0..n)
        .map(|x| shannon_entropy_bits(channel.row(x)))
        .sum::<f64>()
        * inv_n;
    (h_y - h_y_given_x).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ConditionalEnsemble;
    use approx::assert_abs_diff_eq;

    fn identity_channel(n: usize) -> ChannelMatrix {
        let mut probs = vec![0.0; n * n];
        for x in 0..n {
            probs[x * n + x] = 1.0;
        }
        ChannelMatrix::from_rows(n, probs).unwrap()
    }

    fn uniform_channel(n: usize) -> ChannelMatrix {
        ChannelMatrix::from_rows(n, vec![1.0 / n as f64; n * n]).unwrap()
    }

    #[test]
    fn identity_channel_perfect() {
        let ch = identity_channel(8);
        assert_eq!(error_probability(&ch), 0.0);
        assert_abs_diff_eq!(mutual_information(&ch), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_channel_useless() {
        let ch = uniform_channel(4);
        assert_abs_diff_eq!(error_probability(&ch), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(mutual_information(&ch), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn channel_from_aligned_states_is_identity() {
        let states: Vec<_> = (0..5)
            .map(|x| crate::state::ConditionalState::basis(5, x, x).unwrap())
            .collect();
        let ch = measurement_channel(&states).unwrap();
        assert_eq!(error_probability(&ch), 0.0);
    }

    #[test]
    fn channel_from_uniform_states() {
        let states: Vec<_> = (0..4)
            .map(|x| crate::state::ConditionalState::uniform_superposition(4, x).unwrap())
            .collect();
        let ch = measurement_channel(&states).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_abs_diff_eq!(ch.prob(x, y), 0.25, epsilon = 1e-14);
            }
        }
        assert_abs_diff_eq!(error_probability(&ch), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn grover_n16_k3_error_probability() {
        let mut ensemble = ConditionalEnsemble::initial(16).unwrap();
        ensemble.advance_to(3).unwrap();
        let ch = measurement_channel(ensemble.states()).unwrap();
        let p_e = error_probability(&ch);
        // 1 - sin^2(7 theta / 2); dyadic-exact for n = 16.
        assert_abs_diff_eq!(p_e, 0.0386810302734375, epsilon = 1e-12);
        // internal consistency with the per-state success probability
        let mean_success: f64 = ensemble
            .states()
            .iter()
            .map(|s| s.success_probability())
            .sum::<f64>()
            / 16.0;
        assert_abs_diff_eq!(p_e, 1.0 - mean_success, epsilon = 1e-12);
    }

    #[test]
    fn grover_n4_k1_is_noiseless() {
        let mut ensemble = ConditionalEnsemble::initial(4).unwrap();
        ensemble.advance();
        let ch = measurement_channel(ensemble.states()).unwrap();
        assert_eq!(error_probability(&ch), 0.0);
        assert_abs_diff_eq!(mutual_information(&ch), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            ChannelMatrix::from_rows(2, vec![0.5, 0.4, 0.5, 0.5]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            ChannelMatrix::from_rows(2, vec![1.5, -0.5, 0.5, 0.5]),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
    }
}
