//! Numerical laboratory for Grover search in the density-matrix picture.
//!
//! The library tracks the quantum computer's state conditioned on each
//! possible search target, mixes the conditionals into the computer density
//! matrix, and cross-validates everything the closed-form analysis predicts
//! about that matrix: its two-value spectrum, its entropy curve, the drift
//! of its largest eigenvalue under fractional oracle calls, and the chain of
//! information inequalities that turns the drift bound into a `sqrt(n)`
//! lower bound on oracle queries.
//!
//! Modules
//! - [`state`]: conditional pure states and the Grover operators.
//! - [`density`]: mixtures, exact spectra, von Neumann entropy.
//! - [`channel`]: end-of-run measurement statistics.
//! - [`analytic`]: closed forms valid at any dimension.
//! - [`flow`]: continuous-time oracle flow and eigenvalue drift audits.
//! - [`bounds`]: information inequalities and the query lower bound.
//!
//! Dense paths are `O(n^3)` and accept `n` up to
//! [`density::DESK_SCALE_LIMIT`]; the closed forms have no such limit. With
//! the default `parallel` feature, independent trajectories, eigensolves,
//! and matrix columns fan out over rayon with fixed reduction orders, so
//! results are identical with the feature on or off.

pub mod analytic;
pub mod bounds;
pub mod channel;
pub mod density;
pub mod error;
pub mod flow;
mod parallel;
pub mod state;

pub use analytic::{
    closed_form_point, entropy_curve, entropy_period, grover_angle, optimal_iterations,
    ClosedFormPoint,
};
pub use bounds::{
    audit_run, audit_sweep, binary_entropy, entropy_cap, fano_rhs, query_lower_bound,
    supnorm_requirement, BoundReport, EntropyCap, QueryLowerBound,
};
pub use channel::{error_probability, measurement_channel, mutual_information, ChannelMatrix};
pub use density::{
    gram_spectrum, joint_entropy_bits, mix_conditionals, mix_conditionals_serial, spectrum_of,
    von_neumann_entropy, DensityMatrix, Spectrum, DESK_SCALE_LIMIT,
};
pub use error::{Error, Result};
pub use flow::{
    drift_audit, eigenvalue_derivative, finite_difference_check, flow_rho, fractional_oracle,
    rho_time_derivative, DerivativeCheck, DriftReport, FlowSample, DEFAULT_GRID,
};
pub use state::{run_schedule, ConditionalEnsemble, ConditionalState};
