//! Computer density matrix, exact spectra, and von Neumann entropy.
//!
//! The computer state is the uniform mixture of the conditional pure states,
//! `rho_C = (1/N) sum_x |psi_x><psi_x|`. Its spectrum is obtained two ways:
//! directly from the assembled matrix, and from the Gram matrix
//! `(1/N) <psi_x|psi_y>`, which shares the nonzero eigenvalues. The two
//! routes must agree; tests hold them to 1e-8.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parallel;
use crate::state::ConditionalState;

/// Largest dimension the dense `O(n^3)` paths accept.
pub const DESK_SCALE_LIMIT: usize = 2048;

/// Tolerance on `|entry(i,j) - conj(entry(j,i))|` for Hermitian checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance on `|trace - 1|` for density matrices.
pub const TRACE_TOL: f64 = 1e-10;

/// Tolerance on `|sum(eigenvalues) - trace|` after an eigensolve.
pub const SPECTRUM_SUM_TOL: f64 = 1e-9;

/// Entries with imaginary parts below this route to the real symmetric
/// eigensolver, which is several times faster than the complex one.
const REAL_ROUTE_TOL: f64 = 0.0;

/// An `n x n` Hermitian, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermitian symmetry and unit trace, then wraps the matrix.
    /// Positive semidefiniteness is checked when the spectrum is taken.
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        let n = mat.nrows();
        if n < 2 || mat.ncols() != n {
            return Err(Error::InvalidDimension { n });
        }
        let deviation = hermitian_deviation(&mat);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let trace: Complex64 = mat.diagonal().iter().sum();
        let trace_dev = (trace - Complex64::ONE).norm();
        if trace_dev > TRACE_TOL {
            return Err(Error::TraceNotOne {
                deviation: trace_dev,
            });
        }
        Ok(Self { mat })
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diagonal().iter().sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// True when every entry's imaginary part is exactly representable as 0.
    fn is_real(&self) -> bool {
        self.mat.iter().all(|z| z.im.abs() <= REAL_ROUTE_TOL)
    }
}

pub(crate) fn hermitian_deviation(mat: &DMatrix<Complex64>) -> f64 {
    let n = mat.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            let dev = (mat[(i, j)] - mat[(j, i)].conj()).norm();
            worst = worst.max(dev);
        }
    }
    worst
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Wraps a list of eigenvalues, sorting it into descending order.
    pub fn new(eigenvalues: Vec<f64>) -> Self {
        Self::from_sorted(sort_descending(eigenvalues))
    }

    pub(crate) fn from_sorted(eigenvalues: Vec<f64>) -> Self {
        debug_assert!(eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest eigenvalue.
    pub fn sup_norm(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Groups eigenvalues whose neighbors differ by at most `tol`.
    /// Returns `(cluster mean, multiplicity)` pairs, largest first.
    pub fn cluster(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut clusters = Vec::new();
        let mut start = 0;
        for i in 1..=self.eigenvalues.len() {
            let split =
                i == self.eigenvalues.len() || self.eigenvalues[i - 1] - self.eigenvalues[i] > tol;
            if split {
                let members = &self.eigenvalues[start..i];
                let mean = members.iter().sum::<f64>() / members.len() as f64;
                clusters.push((mean, members.len()));
                start = i;
            }
        }
        clusters
    }
}

fn sort_descending(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    values
}

/// Below this dimension the assembly runs serially even with the `parallel`
/// feature on; the work is too small to amortize pool dispatch.
const PARALLEL_MIN_DIM: usize = 128;

/// `(1/N) sum_x |psi_x><psi_x|` over one state per target.
///
/// Requires exactly `n` states of dimension `n`, ordered by target. Columns
/// are filled independently (in parallel when the feature is on) with a fixed
/// per-entry summation order, so the result is bit-reproducible.
pub fn mix_conditionals(states: &[ConditionalState]) -> Result<DensityMatrix> {
    let n = states.len();
    let data = assemble_mix(states, n >= PARALLEL_MIN_DIM)?;
    DensityMatrix::from_matrix(DMatrix::from_vec(n, n, data))
}

/// Sequential reference path for [`mix_conditionals`]; the parallel path must
/// reproduce it bit for bit.
pub fn mix_conditionals_serial(states: &[ConditionalState]) -> Result<DensityMatrix> {
    let data = assemble_mix(states, false)?;
    let n = states.len();
    DensityMatrix::from_matrix(DMatrix::from_vec(n, n, data))
}

fn check_ensemble(states: &[ConditionalState]) -> Result<usize> {
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
    Ok(n)
}

/// Runs `fill(j, column_j)` for every column, either sequentially or over
/// multi-column chunks on the rayon pool. Chunks are whole columns and the
/// per-column work is identical either way, so results are bit-identical.
fn fill_columns<F>(data: &mut [Complex64], n: usize, parallel: bool, fill: F)
where
    F: Fn(usize, &mut [Complex64]) + Sync + Send,
{
    if parallel {
        // coarse chunks; per-column tasks are too small to amortize rayon
        let cols_per_chunk = (n / 8).max(8);
        let chunk = n * cols_per_chunk;
        parallel::for_each_chunk_mut(data, chunk, |start, slice| {
            let first_col = start / n;
            for (offset, col) in slice.chunks_mut(n).enumerate() {
                fill(first_col + offset, col);
            }
        });
    } else {
        for (j, col) in data.chunks_mut(n).enumerate() {
            fill(j, col);
        }
    }
}

/// Column-major assembly of the mixture. Only the upper triangle is computed
/// by dot products; the lower triangle is mirrored afterwards.
fn assemble_mix(states: &[ConditionalState], parallel: bool) -> Result<Vec<Complex64>> {
    let n = check_ensemble(states)?;
    let all_real = states.iter().all(|s| s.is_real(0.0));
    let inv_n = 1.0 / n as f64;

    let mut data = vec![Complex64::ZERO; n * n];
    if all_real {
        // rows[y] holds the real amplitude at index y of every state.
        let mut rows = vec![0.0f64; n * n];
        for (x, state) in states.iter().enumerate() {
            for (y, a) in state.amplitudes().iter().enumerate() {
                rows[y * n + x] = a.re;
            }
        }
        fill_columns(&mut data, n, parallel, |j, col| {
            let row_j = &rows[j * n..(j + 1) * n];
            for (i, slot) in col.iter_mut().enumerate().take(j + 1) {
                let row_i = &rows[i * n..(i + 1) * n];
                let dot: f64 = row_i.iter().zip(row_j).map(|(a, b)| a * b).sum();
                *slot = Complex64::new(dot * inv_n, 0.0);
            }
        });
    } else {
        let mut rows = vec![Complex64::ZERO; n * n];
        for (x, state) in states.iter().enumerate() {
            for (y, a) in state.amplitudes().iter().enumerate() {
                rows[y * n + x] = *a;
            }
        }
        fill_columns(&mut data, n, parallel, |j, col| {
            let row_j = &rows[j * n..(j + 1) * n];
            for (i, slot) in col.iter_mut().enumerate().take(j + 1) {
                let row_i = &rows[i * n..(i + 1) * n];
                let dot: Complex64 = row_i.iter().zip(row_j).map(|(a, b)| a * b.conj()).sum();
                *slot = dot * inv_n;
            }
        });
    }

    // Mirror the strict lower triangle: entry (i, j) with i > j.
    for j in 0..n {
        for i in (j + 1)..n {
            data[j * n + i] = data[i * n + j].conj();
        }
    }
    Ok(data)
}

/// All eigenvalues of a density matrix, sorted descending. The sum is checked
/// against the trace to [`SPECTRUM_SUM_TOL`].
pub fn spectrum_of(rho: &DensityMatrix) -> Result<Spectrum> {
    let deviation = hermitian_deviation(&rho.mat);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    let values = if rho.is_real() {
        let real = rho.mat.map(|z| z.re);
        sort_descending(real.symmetric_eigenvalues().iter().cloned().collect())
    } else {
        sort_descending(
            rho.mat
                .clone()
                .symmetric_eigenvalues()
                .iter()
                .cloned()
                .collect(),
        )
    };
    let sum: f64 = values.iter().sum();
    let trace = rho.trace().re;
    let sum_dev = (sum - trace).abs();
    if sum_dev > SPECTRUM_SUM_TOL {
        return Err(Error::AuditFailed {
            inequality: "spectrum reconstruction sum(lambda) = trace",
            slack: -sum_dev,
        });
    }
    Ok(Spectrum::from_sorted(values))
}

/// Eigendecomposition with eigenvectors, sorted by descending eigenvalue.
/// Column `i` of the returned matrix is the eigenvector for eigenvalue `i`.
pub(crate) fn eigen_full(rho: &DensityMatrix) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = rho.n();
    let (values, vectors) = if rho.is_real() {
        let real = rho.mat.map(|z| z.re);
        let se = real.symmetric_eigen();
        (
            se.eigenvalues.iter().cloned().collect::<Vec<_>>(),
            se.eigenvectors.map(|v| Complex64::new(v, 0.0)),
        )
    } else {
        let se = rho.mat.clone().symmetric_eigen();
        (
            se.eigenvalues.iter().cloned().collect::<Vec<_>>(),
            se.eigenvectors,
        )
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite"));
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    (sorted_values, sorted_vectors)
}

/// Spectrum of the mixture via the Gram route: the nonzero eigenvalues of
/// `(1/N) sum |psi_x><psi_x|` equal those of the matrix
/// `(1/N) <psi_x|psi_y>`.
pub fn gram_spectrum(states: &[ConditionalState]) -> Result<Spectrum> {
    let n = check_ensemble(states)?;
    let inv_n = 1.0 / n as f64;
    let mut data = vec![Complex64::ZERO; n * n];
    fill_columns(&mut data, n, n >= PARALLEL_MIN_DIM, |y, col| {
        let psi_y = states[y].amplitudes();
        for (x, slot) in col.iter_mut().enumerate().take(y + 1) {
            let dot: Complex64 = states[x]
                .amplitudes()
                .iter()
                .zip(psi_y)
                .map(|(a, b)| a.conj() * b)
                .sum();
            *slot = dot * inv_n;
        }
    });
    for j in 0..n {
        for i in (j + 1)..n {
            data[j * n + i] = data[i * n + j].conj();
        }
    }
    let gram = DMatrix::from_vec(n, n, data);
    let values = sort_descending(gram.symmetric_eigenvalues().iter().cloned().collect());
    Ok(Spectrum::from_sorted(values))
}

/// Von Neumann entropy `-sum lambda log2 lambda` in bits, with the
/// `0 log 0 = 0` convention. Negative eigenvalues within numerical slack of
/// zero are clamped to zero.
pub fn von_neumann_entropy(spectrum: &Spectrum) -> f64 {
    spectrum
        .eigenvalues()
        .iter()
        .map(|&l| {
            let l = l.max(0.0);
            if l > 0.0 {
                -l * l.log2()
            } else {
                0.0
            }
        })
        .sum()
}

/// Entropy of the joint target-computer state, in bits.
///
/// The joint state is block diagonal with blocks `(1/N) rho_x`, so its
/// spectrum is the union of the scaled block spectra and the entropy reduces
/// to `log2 N + (1/N) sum_x S(rho_x)`. Each block here is rank one with
/// eigenvalue `<psi_x|psi_x>`, which makes the block entropies exactly
/// `-nu log2 nu` with `nu` the squared norm.
pub fn joint_entropy_bits(states: &[ConditionalState]) -> Result<f64> {
    let n = check_ensemble(states)?;
    let mean_block_entropy: f64 = states
        .iter()
        .map(|s| {
            let nu: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            if nu > 0.0 {
                -nu * nu.log2()
            } else {
                0.0
            }
        })
        .sum::<f64>()
        / n as f64;
    Ok((n as f64).log2() + mean_block_entropy)
}
