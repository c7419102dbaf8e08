//! Conditional pure states and the two Grover operators.
//!
//! A [`ConditionalState`] is the computer state given that the search target
//! is a fixed basis index `x`. Starting from the uniform superposition every
//! state in a run stays pure, so a length-`n` complex vector is the whole
//! representation. The oracle `O_x = I - 2|x><x|` flips the amplitude at the
//! target; `U_s = 2|s><s| - I` reflects amplitudes about their mean. One
//! Grover iteration is `U_s O_x`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parallel;

/// Tolerance on `|norm^2 - 1|` for accepting a vector as a pure state.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized pure state conditioned on a target index.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    amplitudes: Vec<Complex64>,
    target: usize,
}

impl ConditionalState {
    /// The uniform superposition `|s>`, every amplitude exactly `1/sqrt(n)`.
    pub fn uniform_superposition(n: usize, target: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n });
        }
        if target >= n {
            return Err(Error::TargetOutOfRange { target, n });
        }
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![amp; n],
            target,
        })
    }

    /// The basis state `|y>`.
    pub fn basis(n: usize, y: usize, target: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n });
        }
        if target >= n || y >= n {
            return Err(Error::TargetOutOfRange {
                target: target.max(y),
                n,
            });
        }
        let mut amplitudes = vec![Complex64::ZERO; n];
        amplitudes[y] = Complex64::ONE;
        Ok(Self { amplitudes, target })
    }

    /// Wraps an amplitude vector, checking normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, target: usize) -> Result<Self> {
        let n = amplitudes.len();
        if n < 2 {
            return Err(Error::InvalidDimension { n });
        }
        if target >= n {
            return Err(Error::TargetOutOfRange { target, n });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes, target })
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability that a computational-basis measurement returns the target.
    pub fn success_probability(&self) -> f64 {
        self.amplitudes[self.target].norm_sqr()
    }

    /// Global-phase-insensitive equality: `|<self|other>| = 1` within `tol`.
    pub fn coincides_with(&self, other: &Self, tol: f64) -> bool {
        self.n() == other.n() && (self.overlap(other).norm() - 1.0).abs() <= tol
    }

    /// True when every imaginary part is below `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.amplitudes.iter().all(|a| a.im.abs() <= tol)
    }

    /// Oracle reflection `O_x`: negates the amplitude at the target index.
    pub fn oracle_reflect(&mut self) {
        self.amplitudes[self.target] = -self.amplitudes[self.target];
    }

    /// Inversion about the mean `U_s`: maps each amplitude `a` to `2m - a`
    /// where `m` is the mean amplitude.
    pub fn invert_about_mean(&mut self) {
        let n = self.amplitudes.len() as f64;
        let mean = self.amplitudes.iter().sum::<Complex64>() / n;
        let twice_mean = 2.0 * mean;
        for a in &mut self.amplitudes {
            *a = twice_mean - *a;
        }
    }

    /// One Grover iteration `G_x = U_s O_x`.
    pub fn grover_iterate(&mut self) {
        self.oracle_reflect();
        self.invert_about_mean();
    }

    /// Fractional oracle `O_x(tau) = exp(-i tau H_x)` with `H_x = -pi |x><x|`:
    /// multiplies the target amplitude by `exp(i pi tau)`. `tau = 1` is the
    /// full oracle and reproduces [`Self::oracle_reflect`] bit-exactly.
    pub fn fractional_oracle(&mut self, tau: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::TauOutOfRange { tau });
        }
        if tau == 0.0 {
            return Ok(());
        }
        if tau == 1.0 {
            self.oracle_reflect();
            return Ok(());
        }
        let phase = Complex64::from_polar(1.0, std::f64::consts::PI * tau);
        self.amplitudes[self.target] *= phase;
        Ok(())
    }

    /// Applies a target-independent map to the amplitude vector. Callers are
    /// responsible for the map being unitary; normalization is re-checked.
    pub fn apply_non_oracle<F>(&mut self, op: F) -> Result<()>
    where
        F: FnOnce(&mut [Complex64]),
    {
        op(&mut self.amplitudes);
        let norm_sq: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(())
    }
}

/// Runs `steps` Grover iterations from `|s>` for one target, returning all
/// `steps + 1` intermediate states (element 0 is `|s>` itself).
pub fn run_schedule(n: usize, target: usize, steps: usize) -> Result<Vec<ConditionalState>> {
    let mut state = ConditionalState::uniform_superposition(n, target)?;
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(state.clone());
    for _ in 0..steps {
        state.grover_iterate();
        trajectory.push(state.clone());
    }
    Ok(trajectory)
}

/// The full conditional ensemble: one state per possible target, all evolved
/// in lock step. This is the implicit block-diagonal joint state; together
/// with the uniform prior it determines the computer density matrix.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    states: Vec<ConditionalState>,
    step: usize,
}

impl ConditionalEnsemble {
    /// All `n` conditional states at time 0, each equal to `|s>`.
    pub fn initial(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n });
        }
        let states = (0..n)
            .map(|x| ConditionalState::uniform_superposition(n, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { states, step: 0 })
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    /// Number of Grover iterations applied so far.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn states(&self) -> &[ConditionalState] {
        &self.states
    }

    /// Advances every conditional state by one Grover iteration.
    pub fn advance(&mut self) {
        // an iteration is O(n) per state; below this the pool costs more
        // than the work
        const PARALLEL_MIN_DIM: usize = 512;
        if self.states.len() >= PARALLEL_MIN_DIM {
            parallel::for_each_mut(&mut self.states, |_, state| state.grover_iterate());
        } else {
            for state in &mut self.states {
                state.grover_iterate();
            }
        }
        self.step += 1;
    }

    /// Advances until `step() == k`. Errors if already past `k`.
    pub fn advance_to(&mut self, k: usize) -> Result<()> {
        if k < self.step {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: self.step,
            });
        }
        while self.step < k {
            self.advance();
        }
        Ok(())
    }

    /// Applies the same non-oracle map to every conditional state.
    pub fn apply_non_oracle<F>(&mut self, op: F) -> Result<()>
    where
        F: Fn(&mut [Complex64]) + Sync,
    {
        for state in &mut self.states {
            state.apply_non_oracle(&op)?;
        }
        Ok(())
    }

    /// Snapshot of every state with the fractional oracle applied at `tau`.
    pub fn fractional_snapshot(&self, tau: f64) -> Result<Vec<ConditionalState>> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::TauOutOfRange { tau });
        }
        Ok(self
            .states
            .iter()
            .map(|s| {
                let mut state = s.clone();
                state.fractional_oracle(tau).expect("tau validated above");
                state
            })
            .collect())
    }
}
