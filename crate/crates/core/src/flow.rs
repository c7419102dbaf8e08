//! Continuous-time oracle flow and eigenvalue drift of the computer state.
//!
//! The oracle is broken into infinitesimal steps through the Hamiltonian
//! `H_x = -pi |x><x|`, giving `O_x(tau) = I + (e^{i pi tau} - 1)|x><x|` with
//! `O_x(1)` the full oracle. Along the flow the mixture's eigenvalues move at
//! rate `<u| d rho_C/dt |u>`, and every such rate is bounded by
//! `2 pi / sqrt(n)` (and by the sharper `2 pi sqrt(lambda) / sqrt(n)`).
//! [`drift_audit`] samples a whole Grover run on a tau grid and verifies the
//! bound numerically, including the implied cap on per-step sup-norm changes.
//!
//! Non-oracle operators act uniformly on the conditionals and leave the
//! spectrum alone, so the grid only ever interpolates the oracle half of an
//! iteration; the inversion about the mean is applied in full at each step
//! boundary.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::{
    eigen_full, hermitian_deviation, mix_conditionals, DensityMatrix, Spectrum, DESK_SCALE_LIMIT,
    HERMITIAN_TOL,
};
use crate::error::{Error, Result};
use crate::parallel;
use crate::state::{ConditionalEnsemble, ConditionalState};

/// Eigenvalues closer than this are treated as one degenerate cluster when
/// resolving branch derivatives.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Default number of flow samples per oracle call.
pub const DEFAULT_GRID: usize = 64;

/// Functional form of [`ConditionalState::fractional_oracle`].
pub fn fractional_oracle(state: &ConditionalState, tau: f64) -> Result<ConditionalState> {
    let mut out = state.clone();
    out.fractional_oracle(tau)?;
    Ok(out)
}

/// Mixture of the conditionals after evolving each under its own fractional
/// oracle: `rho_C(k0 + tau)`.
pub fn flow_rho(states_at_k0: &[ConditionalState], tau: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::TauOutOfRange { tau });
    }
    let snapshot: Vec<ConditionalState> = states_at_k0
        .iter()
        .map(|s| fractional_oracle(s, tau))
        .collect::<Result<_>>()?;
    mix_conditionals(&snapshot)
}

/// `d rho_C / dt = -(i/N) sum_x [H_x, rho_x]` evaluated at the given states.
///
/// With `H_x = -pi |x><x|` and pure `rho_x = |psi_x><psi_x|` the commutator
/// collapses entrywise to
/// `(i pi / N) (psi_a[a] conj(psi_a[b]) - conj(psi_b[b]) psi_b[a])`,
/// which is Hermitian and exactly traceless.
pub fn rho_time_derivative(states: &[ConditionalState]) -> Result<DMatrix<Complex64>> {
    let n = states.len();
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    for state in states {
        if state.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: state.n(),
            });
        }
    }
    let scale = Complex64::new(0.0, std::f64::consts::PI / n as f64);
    let mut data = vec![Complex64::ZERO; n * n];
    for (b, col) in data.chunks_mut(n).enumerate() {
        let psi_b = states[b].amplitudes();
        let diag_b = psi_b[b];
        for (a, slot) in col.iter_mut().enumerate() {
            let psi_a = states[a].amplitudes();
            let term = psi_a[a] * psi_a[b].conj() - diag_b.conj() * psi_b[a];
            *slot = scale * term;
        }
    }
    Ok(DMatrix::from_vec(n, n, data))
}

/// Branch data at one flow sample: eigenvalues in descending order with the
/// analytic derivative of each branch, plus the resolving eigenbasis.
pub(crate) struct ResolvedBranches {
    pub eigenvalues: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub basis: DMatrix<Complex64>,
}

fn check_derivative_operand(rho: &DensityMatrix, rho_dot: &DMatrix<Complex64>) -> Result<()> {
    let n = rho.n();
    if rho_dot.nrows() != n || rho_dot.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: rho_dot.nrows(),
        });
    }
    let deviation = hermitian_deviation(rho_dot);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(())
}

/// Walks the sorted eigenvalues, handing each degeneracy cluster (grouped by
/// [`DEGENERACY_TOL`]) to `resolve`.
fn for_each_cluster<F>(values: &[f64], mut resolve: F)
where
    F: FnMut(usize, usize),
{
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end - 1] - values[end] <= DEGENERACY_TOL {
            end += 1;
        }
        resolve(start, end - start);
        start = end;
    }
}

/// Branch derivatives without the resolving basis; cheaper than
/// [`resolve_branches`] because degenerate blocks only need eigenvalues.
pub(crate) fn resolve_rates(
    rho: &DensityMatrix,
    rho_dot: &DMatrix<Complex64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_derivative_operand(rho, rho_dot)?;
    let n = rho.n();
    let (values, vectors) = eigen_full(rho);
    let mut derivatives = vec![0.0f64; n];
    for_each_cluster(&values, |start, m| {
        if m == 1 {
            let u = vectors.column(start);
            let rate = (u.adjoint() * rho_dot * u)[(0, 0)];
            debug_assert!(rate.im.abs() < 1e-10);
            derivatives[start] = rate.re;
        } else {
            let cluster = vectors.columns(start, m).clone_owned();
            let block = hermitian_projection(rho_dot, &cluster);
            let mut rates: Vec<f64> = block.symmetric_eigenvalues().iter().cloned().collect();
            rates.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            derivatives[start..start + m].copy_from_slice(&rates);
        }
    });
    Ok((values, derivatives))
}

/// First-order perturbation through possibly degenerate spectra: within each
/// eigenvalue cluster the derivative operator is re-diagonalized, so the
/// returned rates are the true branch derivatives even where plain
/// eigenvectors are not unique.
pub(crate) fn resolve_branches(
    rho: &DensityMatrix,
    rho_dot: &DMatrix<Complex64>,
) -> Result<ResolvedBranches> {
    check_derivative_operand(rho, rho_dot)?;
    let (values, mut vectors) = eigen_full(rho);
    let n = rho.n();
    let mut derivatives = vec![0.0f64; n];
    for_each_cluster(&values.clone(), |start, m| {
        if m == 1 {
            let u = vectors.column(start);
            let rate = (u.adjoint() * rho_dot * u)[(0, 0)];
            debug_assert!(rate.im.abs() < 1e-10);
            derivatives[start] = rate.re;
        } else {
            let cluster = vectors.columns(start, m).clone_owned();
            let block = hermitian_projection(rho_dot, &cluster);
            let se = block.symmetric_eigen();
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| {
                se.eigenvalues[b]
                    .partial_cmp(&se.eigenvalues[a])
                    .expect("finite")
            });
            for (offset, &idx) in order.iter().enumerate() {
                derivatives[start + offset] = se.eigenvalues[idx];
                let rotated = &cluster * se.eigenvectors.column(idx);
                vectors.set_column(start + offset, &rotated);
            }
        }
    });
    Ok(ResolvedBranches {
        eigenvalues: values,
        derivatives,
        basis: vectors,
    })
}

/// `U^H A U`, symmetrized to scrub rounding off the Hermitian structure.
fn hermitian_projection(a: &DMatrix<Complex64>, u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let block = u.adjoint() * a * u;
    let block_adj = block.adjoint();
    (block + block_adj) * Complex64::new(0.5, 0.0)
}

/// Analytic `d lambda / dt` for every eigenvalue branch of `rho`, ordered by
/// descending eigenvalue (ties ordered by descending derivative).
pub fn eigenvalue_derivative(
    rho: &DensityMatrix,
    rho_dot: &DMatrix<Complex64>,
) -> Result<Vec<f64>> {
    Ok(resolve_rates(rho, rho_dot)?.1)
}

/// One sampled point of the flow: branch eigenvalues and their derivatives,
/// both indexed by descending-eigenvalue position.
#[derive(Debug, Clone)]
pub struct FlowSample {
    pub t: f64,
    pub lambda: Vec<f64>,
    pub d_lambda_dt: Vec<f64>,
}

impl FlowSample {
    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_sorted(self.lambda.clone())
    }
}

/// Summary of a full-run drift audit.
#[derive(Debug, Clone)]
pub struct DriftReport {
    pub n: usize,
    pub steps: usize,
    pub grid: usize,
    /// `2 pi / sqrt(n)`.
    pub bound: f64,
    /// Largest observed `|mu_{k+1} - mu_k|` over integer steps.
    pub empirical_delta: f64,
    /// Largest observed `|d lambda / dt|` over all samples and branches.
    pub max_abs_dlambda_dt: f64,
    /// Sup norm `mu_k` at each integer step `k = 0..=steps`.
    pub sup_norms: Vec<f64>,
    /// All sampled flow points, `steps * grid + 1` of them.
    pub samples: Vec<FlowSample>,
    pub delta_within_bound: bool,
    pub derivatives_within_bound: bool,
    /// Whether `|d lambda/dt| <= bound * sqrt(lambda) + 1e-8` held everywhere.
    pub sharpened_within_bound: bool,
}

impl DriftReport {
    /// Margin between the bound and the observed per-step drift.
    pub fn margin(&self) -> f64 {
        self.bound - self.empirical_delta
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.delta_within_bound && self.derivatives_within_bound && self.sharpened_within_bound
    }
}

const DERIVATIVE_SLACK: f64 = 1e-8;
const DELTA_SLACK: f64 = 1e-10;

/// Runs a full Grover schedule, sampling `grid` flow points per oracle call,
/// and checks every sampled rate and every integer-step sup-norm change
/// against `2 pi / sqrt(n)`.
pub fn drift_audit(n: usize, steps: usize, grid: usize) -> Result<DriftReport> {
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    if n > DESK_SCALE_LIMIT {
        return Err(Error::DeskScaleExceeded {
            n,
            limit: DESK_SCALE_LIMIT,
        });
    }
    if grid < 2 {
        return Err(Error::InvalidStep { value: grid as f64 });
    }

    let bound = 2.0 * std::f64::consts::PI / (n as f64).sqrt();
    let mut ensemble = ConditionalEnsemble::initial(n)?;
    let mut samples: Vec<FlowSample> = Vec::with_capacity(steps * grid + 1);

    for k in 0..=steps {
        assert_purity(ensemble.states())?;
        let states = ensemble.states().to_vec();
        let taus: usize = if k == steps { 1 } else { grid };
        let mut step_samples = parallel::map_indexed(taus, |j| {
            let tau = j as f64 / grid as f64;
            sample_flow(&states, k as f64 + tau, tau)
        });
        for sample in step_samples.drain(..) {
            samples.push(sample?);
        }
        if k < steps {
            ensemble.advance();
        }
    }

    let sup_norms: Vec<f64> = (0..=steps).map(|k| samples[k * grid].lambda[0]).collect();
    let empirical_delta = sup_norms
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0f64, f64::max);
    let max_abs_dlambda_dt = samples
        .iter()
        .flat_map(|s| s.d_lambda_dt.iter())
        .fold(0.0f64, |acc, &d| acc.max(d.abs()));
    let sharpened_within_bound = samples.iter().all(|s| {
        s.lambda
            .iter()
            .zip(&s.d_lambda_dt)
            .all(|(&l, &d)| d.abs() <= bound * l.max(0.0).sqrt() + DERIVATIVE_SLACK)
    });

    Ok(DriftReport {
        n,
        steps,
        grid,
        bound,
        empirical_delta,
        max_abs_dlambda_dt,
        sup_norms,
        samples,
        delta_within_bound: empirical_delta <= bound + DELTA_SLACK,
        derivatives_within_bound: max_abs_dlambda_dt <= bound + DERIVATIVE_SLACK,
        sharpened_within_bound,
    })
}

fn assert_purity(states: &[ConditionalState]) -> Result<()> {
    for state in states {
        let deviation = (state.norm() - 1.0).abs();
        if deviation > 1e-10 {
            return Err(Error::NotNormalized { deviation });
        }
    }
    Ok(())
}

fn sample_flow(states_at_k: &[ConditionalState], t: f64, tau: f64) -> Result<FlowSample> {
    let snapshot: Vec<ConditionalState> = states_at_k
        .iter()
        .map(|s| fractional_oracle(s, tau))
        .collect::<Result<_>>()?;
    let rho = mix_conditionals(&snapshot)?;
    let rho_dot = rho_time_derivative(&snapshot)?;
    let (lambda, d_lambda_dt) = resolve_rates(&rho, &rho_dot)?;
    Ok(FlowSample {
        t,
        lambda,
        d_lambda_dt,
    })
}

/// Result of validating analytic branch derivatives against central finite
/// differences of the tracked branches.
#[derive(Debug, Clone)]
pub struct DerivativeCheck {
    pub n: usize,
    pub h: f64,
    /// Largest `|fd - analytic|` over all unflagged samples and branches.
    pub max_abs_error: f64,
    pub samples_checked: usize,
    /// Sample times excluded because an eigenvalue crossing sat within the
    /// finite-difference stencil, where branch identity cannot be resolved.
    pub flagged: Vec<f64>,
}

/// Central-difference validation of the derivative identity along a run.
///
/// Interior grid points of each step are checked (the stencil must stay
/// inside one oracle segment). The branch at `tau +/- h` is identified by
/// maximal overlap with the resolved eigenvector at `tau`; degenerate
/// clusters share their value, so any in-cluster match reads off the right
/// eigenvalue.
pub fn finite_difference_check(
    n: usize,
    steps: usize,
    grid: usize,
    h: f64,
) -> Result<DerivativeCheck> {
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    if grid < 2 {
        return Err(Error::InvalidStep { value: grid as f64 });
    }
    if !(h > 0.0) || h >= 1.0 / grid as f64 {
        return Err(Error::InvalidStep { value: h });
    }

    let bound = 2.0 * std::f64::consts::PI / (n as f64).sqrt();
    // A crossing closer than this to a sample makes the +/- h branches
    // ambiguous; such samples are flagged, not checked.
    let ambiguous_gap = 8.0 * h * bound;

    let mut ensemble = ConditionalEnsemble::initial(n)?;
    let mut max_abs_error = 0.0f64;
    let mut samples_checked = 0usize;
    let mut flagged = Vec::new();

    for k in 0..steps {
        let states = ensemble.states().to_vec();
        let results = parallel::map_indexed(grid - 1, |idx| {
            let tau = (idx + 1) as f64 / grid as f64;
            check_one_sample(&states, tau, h, ambiguous_gap)
        });
        for (idx, result) in results.into_iter().enumerate() {
            let tau = (idx + 1) as f64 / grid as f64;
            match result? {
                Some(err) => {
                    max_abs_error = max_abs_error.max(err);
                    samples_checked += 1;
                }
                None => flagged.push(k as f64 + tau),
            }
        }
        ensemble.advance();
    }

    Ok(DerivativeCheck {
        n,
        h,
        max_abs_error,
        samples_checked,
        flagged,
    })
}

/// Returns `Some(max branch error)` or `None` when the sample is ambiguous.
fn check_one_sample(
    states: &[ConditionalState],
    tau: f64,
    h: f64,
    ambiguous_gap: f64,
) -> Result<Option<f64>> {
    let snapshot: Vec<ConditionalState> = states
        .iter()
        .map(|s| fractional_oracle(s, tau))
        .collect::<Result<_>>()?;
    let rho = mix_conditionals(&snapshot)?;
    let rho_dot = rho_time_derivative(&snapshot)?;
    let resolved = resolve_branches(&rho, &rho_dot)?;

    // distinct-but-close eigenvalues anywhere near the stencil scale
    let ambiguous = resolved.eigenvalues.windows(2).any(|w| {
        let gap = w[0] - w[1];
        gap > DEGENERACY_TOL && gap < ambiguous_gap
    });
    if ambiguous {
        return Ok(None);
    }

    let plus = eigen_full(&flow_rho(states, tau + h)?);
    let minus = eigen_full(&flow_rho(states, tau - h)?);

    let n = states.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        let u = resolved.basis.column(i);
        let lambda_plus = match_branch(&plus, &u.clone_owned())?;
        let lambda_minus = match_branch(&minus, &u.clone_owned())?;
        let fd = (lambda_plus - lambda_minus) / (2.0 * h);
        worst = worst.max((fd - resolved.derivatives[i]).abs());
    }
    Ok(Some(worst))
}

/// Eigenvalue at the branch with maximal overlap against `u`. The overlap
/// must concentrate (summed over the matched value's cluster) above 1/2,
/// otherwise the branch is considered unresolvable.
fn match_branch(
    eigen: &(Vec<f64>, DMatrix<Complex64>),
    u: &nalgebra::DVector<Complex64>,
) -> Result<f64> {
    let (values, vectors) = eigen;
    let n = values.len();
    let overlaps: Vec<f64> = (0..n)
        .map(|j| (vectors.column(j).adjoint() * u)[(0, 0)].norm_sqr())
        .collect();
    let best = (0..n)
        .max_by(|&a, &b| overlaps[a].partial_cmp(&overlaps[b]).expect("finite"))
        .expect("nonempty");
    // accumulate overlap over the cluster the best match belongs to
    let cluster_value = values[best];
    let cluster_overlap: f64 = (0..n)
        .filter(|&j| (values[j] - cluster_value).abs() <= DEGENERACY_TOL)
        .map(|j| overlaps[j])
        .sum();
    if cluster_overlap < 0.5 {
        return Err(Error::BranchResolutionFailed { t: f64::NAN });
    }
    Ok(cluster_value)
}
