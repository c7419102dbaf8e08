//! Classical and quantum information inequalities behind the query lower
//! bound, evaluated both as formulas and against simulator runs.
//!
//! The chain audited here, all in bits: Holevo caps the extractable mutual
//! information by the mixture entropy, Fano caps the conditional entropy by
//! the error probability, the spectrum cap bounds the entropy for a fixed
//! sup norm, and combining the three caps the sup norm itself. Together with
//! the drift bound this yields a step-count lower bound of order `sqrt(n)`.
//!
//! Two closed forms of that lower bound are reported. They differ in the
//! sign of the `1/(pi log2 n)` correction: the audited inequality chain
//! only supports subtracting it, while the bound is usually printed with it
//! added. The printed form is reported for comparison but never asserted;
//! it can exceed the true step count at small `n` and small error.

use crate::channel::{error_probability, measurement_channel, mutual_information};
use crate::density::{
    mix_conditionals, spectrum_of, von_neumann_entropy, Spectrum, DESK_SCALE_LIMIT,
};
use crate::error::{Error, Result};
use crate::parallel;
use crate::state::ConditionalEnsemble;

/// Numerical slack allowed on every audited inequality.
pub const SLACK_TOL: f64 = 1e-9;

/// Binary entropy `-u log2 u - (1-u) log2(1-u)` with the endpoint
/// convention `H(0) = H(1) = 0`.
pub fn binary_entropy(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::ProbabilityOutOfRange { value: u });
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(u) + term(1.0 - u))
}

/// Fano right-hand side `H(p_e) + p_e log2 n`, the cap on `H(X|Y)`.
pub fn fano_rhs(p_e: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    Ok(binary_entropy(p_e)? + p_e * (n as f64).log2())
}

/// Both forms of the entropy cap for a given sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyCap {
    /// `-mu log2 mu - (1-mu) log2((1-mu)/(n-1))`: entropy of the maximizing
    /// spectrum with the remaining `n-1` eigenvalues equal.
    pub exact_bits: f64,
    /// The relaxation `H(mu) + (1-mu) log2 n`.
    pub relaxed_bits: f64,
}

/// Largest possible entropy of an `n`-dimensional density matrix whose top
/// eigenvalue is `mu`. Inputs within `1e-9` of the valid range are clamped.
pub fn entropy_cap(mu: f64, n: usize) -> Result<EntropyCap> {
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    let lo = 1.0 / n as f64;
    if mu < lo - 1e-9 || mu > 1.0 + 1e-9 {
        return Err(Error::SupNormOutOfRange { value: mu, n });
    }
    let mu = mu.clamp(lo, 1.0);
    let rest = 1.0 - mu;
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    let exact_bits = term(mu)
        + if rest > 0.0 {
            -rest * (rest / (n as f64 - 1.0)).log2()
        } else {
            0.0
        };
    let relaxed_bits = binary_entropy(mu)? + rest * (n as f64).log2();
    Ok(EntropyCap {
        exact_bits,
        relaxed_bits,
    })
}

/// The cap `p_e + 2/log2 n` on the final sup norm implied by combining the
/// Holevo/Fano chain with the entropy cap. Needs `log2 n >= 2` to say
/// anything nontrivial.
pub fn supnorm_requirement(p_e: f64, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::InvalidDimension { n });
    }
    if !(0.0..=1.0).contains(&p_e) {
        return Err(Error::ProbabilityOutOfRange { value: p_e });
    }
    Ok(p_e + 2.0 / (n as f64).log2())
}

/// The two closed forms of the oracle-call lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryLowerBound {
    /// `((1 - p_e)/(2 pi) + 1/(pi log2 n)) sqrt(n)`: the bound as usually
    /// printed. Reported for reference, never asserted.
    pub printed_form: f64,
    /// `((1 - p_e)/(2 pi) - 1/(pi log2 n)) sqrt(n)`, clamped at zero: the
    /// form the audited inequality chain actually implies.
    pub derived_form: f64,
}

/// Minimum number of oracle calls needed to reach error probability `p_e`
/// on `n` items, in both printed and derivation-consistent forms.
pub fn query_lower_bound(p_e: f64, n: usize) -> Result<QueryLowerBound> {
    if n < 4 {
        return Err(Error::InvalidDimension { n });
    }
    if !(0.0..=1.0).contains(&p_e) {
        return Err(Error::ProbabilityOutOfRange { value: p_e });
    }
    let sqrt_n = (n as f64).sqrt();
    let log_n = (n as f64).log2();
    let base = (1.0 - p_e) / (2.0 * std::f64::consts::PI);
    let correction = 1.0 / (std::f64::consts::PI * log_n);
    Ok(QueryLowerBound {
        printed_form: (base + correction) * sqrt_n,
        derived_form: ((base - correction) * sqrt_n).max(0.0),
    })
}

/// Every quantity of the audited inequality chain for one truncated run.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: usize,
    /// Oracle calls executed before measuring.
    pub steps: usize,
    pub p_e: f64,
    pub entropy_final_bits: f64,
    pub mutual_info_bits: f64,
    pub sup_norm_final: f64,
    /// Largest observed per-step sup-norm change up to this truncation.
    pub delta_observed: f64,
    pub lower_bounds: QueryLowerBound,
    /// `S(rho_C(K)) - I(X;Y)`.
    pub holevo_slack: f64,
    /// `fano_rhs(p_e) - H(X|Y)`.
    pub fano_slack: f64,
    /// `entropy_cap(mu_K) - S(rho_C(K))`.
    pub entropy_cap_slack: f64,
    /// `p_e log2 n + H(p_e) + H(mu_K) - mu_K log2 n`.
    pub supbound_slack: f64,
}

impl BoundReport {
    pub fn min_slack(&self) -> f64 {
        self.holevo_slack
            .min(self.fano_slack)
            .min(self.entropy_cap_slack)
            .min(self.supbound_slack)
    }

    /// Errors with the first violated inequality, if any.
    pub fn check(&self) -> Result<()> {
        let checks = [
            ("Holevo: I(X;Y) <= S(rho_C(K))", self.holevo_slack),
            ("Fano: H(X|Y) <= H(p_e) + p_e log2 n", self.fano_slack),
            ("entropy cap: S <= cap(mu_K)", self.entropy_cap_slack),
            (
                "sup-norm bound: mu_K log2 n <= p_e log2 n + H(p_e) + H(mu_K)",
                self.supbound_slack,
            ),
        ];
        for (name, slack) in checks {
            if slack < -SLACK_TOL {
                return Err(Error::AuditFailed {
                    inequality: name,
                    slack,
                });
            }
        }
        Ok(())
    }
}

/// Runs the dense schedule out to `steps` oracle calls and fills the full
/// inequality chain, erroring if any inequality is violated beyond
/// [`SLACK_TOL`].
pub fn audit_run(n: usize, steps: usize) -> Result<BoundReport> {
    let mut sweep = audit_sweep(n, steps)?;
    let report = sweep.pop().expect("sweep is never empty");
    Ok(report)
}

/// [`audit_run`] for every truncation `K = 0..=k_max` of a single run.
/// Shares one trajectory, so it costs the same as the longest audit alone.
pub fn audit_sweep(n: usize, k_max: usize) -> Result<Vec<BoundReport>> {
    if n < 4 {
        return Err(Error::InvalidDimension { n });
    }
    if n > DESK_SCALE_LIMIT {
        return Err(Error::DeskScaleExceeded {
            n,
            limit: DESK_SCALE_LIMIT,
        });
    }

    let mut ensemble = ConditionalEnsemble::initial(n)?;
    let mut snapshots = Vec::with_capacity(k_max + 1);
    snapshots.push(ensemble.states().to_vec());
    for _ in 0..k_max {
        ensemble.advance();
        snapshots.push(ensemble.states().to_vec());
    }

    let spectra: Vec<Spectrum> = parallel::map_indexed(k_max + 1, |k| {
        spectrum_of(&mix_conditionals(&snapshots[k]).expect("valid ensemble"))
            .expect("mixture is Hermitian")
    });

    let log_n = (n as f64).log2();
    let mut reports = Vec::with_capacity(k_max + 1);
    let mut delta_observed = 0.0f64;
    for (k, spectrum) in spectra.iter().enumerate() {
        if k > 0 {
            delta_observed =
                delta_observed.max((spectrum.sup_norm() - spectra[k - 1].sup_norm()).abs());
        }
        let entropy_final_bits = von_neumann_entropy(spectrum);
        let sup_norm_final = spectrum.sup_norm().clamp(1.0 / n as f64, 1.0);

        let channel = measurement_channel(&snapshots[k])?;
        let p_e = error_probability(&channel);
        let mutual_info_bits = mutual_information(&channel);
        let h_x_given_y = (log_n - mutual_info_bits).max(0.0);

        let cap = entropy_cap(sup_norm_final, n)?;
        let report = BoundReport {
            n,
            steps: k,
            p_e,
            entropy_final_bits,
            mutual_info_bits,
            sup_norm_final,
            delta_observed,
            lower_bounds: query_lower_bound(p_e, n)?,
            holevo_slack: entropy_final_bits - mutual_info_bits,
            fano_slack: fano_rhs(p_e, n)? - h_x_given_y,
            entropy_cap_slack: cap.exact_bits - entropy_final_bits,
            supbound_slack: p_e * log_n + binary_entropy(p_e)? + binary_entropy(sup_norm_final)?
                - sup_norm_final * log_n,
        };
        report.check()?;
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::optimal_iterations;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_entropy_endpoints_and_peak() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        // near-half sanity value
        assert_abs_diff_eq!(
            binary_entropy(0.11).unwrap(),
            0.499915958164528,
            epsilon = 1e-12
        );
    }

    #[test]
    fn binary_entropy_symmetric() {
        for u in [0.01, 0.2, 0.37, 0.44] {
            assert_abs_diff_eq!(
                binary_entropy(u).unwrap(),
                binary_entropy(1.0 - u).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn binary_entropy_rejects_out_of_range() {
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn fano_rhs_values() {
        assert_eq!(fano_rhs(0.0, 16).unwrap(), 0.0);
        assert_abs_diff_eq!(fano_rhs(1.0, 16).unwrap(), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fano_rhs(0.5, 1 << 20).unwrap(), 11.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_cap_extremes() {
        let at_one = entropy_cap(1.0, 16).unwrap();
        assert_eq!(at_one.exact_bits, 0.0);
        let at_mixed = entropy_cap(1.0 / 16.0, 16).unwrap();
        assert_abs_diff_eq!(at_mixed.exact_bits, 4.0, epsilon = 1e-12);
        // the relaxed form is never below the exact one
        for mu in [0.0625, 0.1, 0.4, 0.9, 1.0] {
            let cap = entropy_cap(mu, 16).unwrap();
            assert!(cap.relaxed_bits >= cap.exact_bits - 1e-12);
        }
    }

    #[test]
    fn entropy_cap_rejects_bad_mu() {
        assert!(entropy_cap(0.01, 16).is_err());
        assert!(entropy_cap(1.5, 16).is_err());
    }

    #[test]
    fn supnorm_requirement_values() {
        assert_abs_diff_eq!(
            supnorm_requirement(0.0, 1 << 20).unwrap(),
            0.1,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            supnorm_requirement(0.5, 1 << 10).unwrap(),
            0.7,
            epsilon = 1e-14
        );
    }

    #[test]
    fn lower_bound_headline_values() {
        let b = query_lower_bound(0.0, 1 << 20).unwrap();
        assert_abs_diff_eq!(b.printed_form, 179.27212789871091, epsilon = 1e-9);
        assert_abs_diff_eq!(b.derived_form, 146.67719555349074, epsilon = 1e-9);
        let grover_k = optimal_iterations(1 << 20).unwrap();
        assert_eq!(grover_k, 804);
        assert!(b.printed_form < grover_k as f64);
        assert!(b.derived_form < grover_k as f64);
    }

    #[test]
    fn lower_bound_clamps_at_total_error() {
        let b = query_lower_bound(1.0, 16).unwrap();
        assert_eq!(b.derived_form, 0.0);
    }

    #[test]
    fn derived_form_monotone_in_error() {
        let mut last = f64::INFINITY;
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let b = query_lower_bound(p, 256).unwrap();
            assert!(b.derived_form <= last + 1e-12);
            last = b.derived_form;
        }
    }

    #[test]
    fn audit_n4_exact_case() {
        let report = audit_run(4, 1).unwrap();
        assert_eq!(report.p_e, 0.0);
        assert_abs_diff_eq!(report.entropy_final_bits, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(report.mutual_info_bits, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(report.holevo_slack, 0.0, epsilon = 1e-9);
        report.check().unwrap();
    }

    #[test]
    fn audit_n16_no_calls() {
        let report = audit_run(16, 0).unwrap();
        assert_abs_diff_eq!(report.p_e, 15.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.mutual_info_bits, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(report.entropy_final_bits, 0.0, epsilon = 1e-9);
        assert_eq!(report.delta_observed, 0.0);
    }

    #[test]
    fn audit_sweep_n16_sound_and_consistent() {
        let reports = audit_sweep(16, 3).unwrap();
        assert_eq!(reports.len(), 4);
        for (k, report) in reports.iter().enumerate() {
            assert_eq!(report.steps, k);
            assert!(report.min_slack() >= -SLACK_TOL);
            assert!(k as f64 >= report.lower_bounds.derived_form - 1e-9);
        }
        // binary entropies never sum past 2 bits
        for report in &reports {
            let sum = binary_entropy(report.p_e).unwrap()
                + binary_entropy(report.sup_norm_final).unwrap();
            assert!(sum <= 2.0 + 1e-12);
        }
        assert_abs_diff_eq!(reports[3].p_e, 0.0386810302734375, epsilon = 1e-12);
    }

    #[test]
    fn audit_rejects_oversize() {
        assert!(matches!(
            audit_run(4096, 1),
            Err(Error::DeskScaleExceeded { .. })
        ));
    }
}
