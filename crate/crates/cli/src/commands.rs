use std::path::Path;

use groverlab::{
    audit_sweep, closed_form_point, drift_audit, entropy_period, error_probability,
    measurement_channel, mix_conditionals, optimal_iterations, query_lower_bound, spectrum_of,
    von_neumann_entropy, ConditionalEnsemble, Spectrum, DESK_SCALE_LIMIT,
};

use crate::output::{fmt17, Sink};
use crate::{CliError, Engine};

/// Dense spectra of a Grover run carry one simple and one (n-1)-fold
/// eigenvalue; values closer than this are treated as coincident.
const CLUSTER_TOL: f64 = 1e-8;

/// Cross-validation tolerance for `verify`.
const VERIFY_TOL: f64 = 1e-8;

fn check_desk_scale(n: usize) -> Result<(), CliError> {
    if n > DESK_SCALE_LIMIT {
        return Err(CliError::Config(format!(
            "n = {n} exceeds the dense engine limit of {DESK_SCALE_LIMIT}; \
             use --engine analytic"
        )));
    }
    Ok(())
}

fn default_steps(n: usize, k: Option<usize>) -> Result<usize, CliError> {
    match k {
        Some(v) => Ok(v),
        None => Ok(optimal_iterations(n)?),
    }
}

const STEP_TABLE_HEADER: &str = "k,success_prob,p_e,entropy_bits,sup_norm";

pub fn simulate(n: usize, k: Option<usize>, out: Option<&Path>) -> Result<(), CliError> {
    check_desk_scale(n)?;
    let k_max = default_steps(n, k)?;
    let mut sink = Sink::open(out)?;
    sink.write_line(STEP_TABLE_HEADER)?;
    let mut ensemble = ConditionalEnsemble::initial(n)?;
    for step in 0..=k_max {
        if step > 0 {
            ensemble.advance();
        }
        let success = ensemble
            .states()
            .iter()
            .map(|s| s.success_probability())
            .sum::<f64>()
            / n as f64;
        let p_e = error_probability(&measurement_channel(ensemble.states())?);
        let spectrum = spectrum_of(&mix_conditionals(ensemble.states())?)?;
        sink.write_line(&format!(
            "{step},{},{},{},{}",
            fmt17(success),
            fmt17(p_e),
            fmt17(von_neumann_entropy(&spectrum)),
            fmt17(spectrum.sup_norm())
        ))?;
    }
    sink.finish()
}

pub fn analytic(n: usize, k: Option<usize>, out: Option<&Path>) -> Result<(), CliError> {
    let k_max = default_steps(n, k)?;
    let mut sink = Sink::open(out)?;
    sink.write_line(STEP_TABLE_HEADER)?;
    for step in 0..=k_max {
        let point = closed_form_point(n, step as f64)?;
        sink.write_line(&format!(
            "{step},{},{},{},{}",
            fmt17(point.success_prob),
            fmt17(1.0 - point.success_prob),
            fmt17(point.entropy_bits),
            fmt17(point.sup_norm)
        ))?;
    }
    sink.finish()
}

const CURVE_HEADER: &str = "t,lambda1,lambda2,entropy_bits,sup_norm,success_prob";

pub fn curve(
    n: usize,
    t_max: f64,
    dt: f64,
    engine: Engine,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match engine {
        Engine::Analytic => {
            let points = groverlab::entropy_curve(n, t_max, dt)?;
            let mut sink = Sink::open(out)?;
            sink.write_line(CURVE_HEADER)?;
            for p in &points {
                sink.write_line(&format!(
                    "{},{},{},{},{},{}",
                    fmt17(p.t),
                    fmt17(p.lambda1),
                    fmt17(p.lambda2),
                    fmt17(p.entropy_bits),
                    fmt17(p.sup_norm),
                    fmt17(p.success_prob)
                ))?;
            }
            sink.finish()
        }
        Engine::Dense => dense_curve(n, t_max, dt, out),
    }
}

fn dense_curve(n: usize, t_max: f64, dt: f64, out: Option<&Path>) -> Result<(), CliError> {
    check_desk_scale(n)?;
    if !(dt > 0.0) {
        return Err(CliError::Config(format!("--dt must be positive, got {dt}")));
    }
    if !(t_max > 0.0) {
        return Err(CliError::Config(format!(
            "--t-max must be positive, got {t_max}"
        )));
    }
    let samples = (t_max / dt).floor() as usize + 1;
    let mut sink = Sink::open(out)?;
    sink.write_line(CURVE_HEADER)?;
    let mut ensemble = ConditionalEnsemble::initial(n)?;
    for i in 0..samples {
        let t = i as f64 * dt;
        let step = t.floor() as usize;
        let tau = t - step as f64;
        while ensemble.step() < step {
            ensemble.advance();
        }
        let snapshot = ensemble.fractional_snapshot(tau)?;
        let spectrum = spectrum_of(&mix_conditionals(&snapshot)?)?;
        let (lambda1, lambda2) = split_two_level(&spectrum, n)?;
        let success = snapshot
            .iter()
            .map(|s| s.success_probability())
            .sum::<f64>()
            / n as f64;
        sink.write_line(&format!(
            "{},{},{},{},{},{}",
            fmt17(t),
            fmt17(lambda1),
            fmt17(lambda2),
            fmt17(von_neumann_entropy(&spectrum)),
            fmt17(spectrum.sup_norm()),
            fmt17(success)
        ))?;
    }
    sink.finish()
}

/// Identifies the simple eigenvalue and the (n-1)-fold eigenvalue in a dense
/// spectrum. Fully degenerate spectra report the common value twice.
fn split_two_level(spectrum: &Spectrum, n: usize) -> Result<(f64, f64), CliError> {
    let clusters = spectrum.cluster(CLUSTER_TOL);
    match clusters.as_slice() {
        [(value, _)] => Ok((*value, *value)),
        [(a, ma), (b, mb)] => {
            if *ma == 1 && *mb == n - 1 {
                Ok((*a, *b))
            } else if *mb == 1 && *ma == n - 1 {
                Ok((*b, *a))
            } else {
                Err(CliError::Violation(format!(
                    "spectrum clusters have multiplicities {ma} and {mb}; \
                     expected 1 and {}",
                    n - 1
                )))
            }
        }
        other => Err(CliError::Violation(format!(
            "spectrum has {} distinct values; a Grover run admits at most two",
            other.len()
        ))),
    }
}

pub fn verify(n: usize) -> Result<(), CliError> {
    check_desk_scale(n)?;
    let steps = entropy_period(n)?.ceil() as usize;
    println!("verifying n={n}: dense vs closed-form over k=0..={steps}");

    let mut ensemble = ConditionalEnsemble::initial(n)?;
    let mut max_eigen_dev = 0.0f64;
    let mut max_entropy_dev = 0.0f64;
    for k in 0..=steps {
        if k > 0 {
            ensemble.advance();
        }
        let spectrum = spectrum_of(&mix_conditionals(ensemble.states())?)?;
        let point = closed_form_point(n, k as f64)?;
        let mut expected = vec![point.lambda2; n];
        expected[0] = point.lambda1;
        expected.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        for (got, want) in spectrum.eigenvalues().iter().zip(&expected) {
            max_eigen_dev = max_eigen_dev.max((got - want).abs());
        }
        max_entropy_dev =
            max_entropy_dev.max((von_neumann_entropy(&spectrum) - point.entropy_bits).abs());
    }

    println!("max eigenvalue deviation {max_eigen_dev:.3e}");
    println!("max entropy deviation    {max_entropy_dev:.3e}");
    if max_eigen_dev > VERIFY_TOL || max_entropy_dev > VERIFY_TOL {
        println!("FAIL (tolerance {VERIFY_TOL:.0e})");
        return Err(CliError::Violation(format!(
            "dense/closed-form deviation exceeds {VERIFY_TOL:.0e}"
        )));
    }
    println!("PASS (tolerance {VERIFY_TOL:.0e})");
    Ok(())
}

pub fn drift(n: usize, k: Option<usize>, grid: usize, out: Option<&Path>) -> Result<(), CliError> {
    let steps = default_steps(n, k)?;
    let report = drift_audit(n, steps, grid)?;

    if let Some(path) = out {
        let mut sink = Sink::open(Some(path))?;
        sink.write_line("t,branch,lambda,dlambda_dt")?;
        for sample in &report.samples {
            for branch in 0..n {
                sink.write_line(&format!(
                    "{},{branch},{},{}",
                    fmt17(sample.t),
                    fmt17(sample.lambda[branch]),
                    fmt17(sample.d_lambda_dt[branch])
                ))?;
            }
        }
        sink.finish()?;
    }

    println!(
        "drift audit n={n}, k={steps}, grid={grid}: {} samples",
        report.samples.len()
    );
    println!("bound 2*pi/sqrt(n)      {:.6}", report.bound);
    println!("empirical delta         {:.6}", report.empirical_delta);
    println!("margin                  {:.6}", report.margin());
    println!("max |dlambda/dt|        {:.6}", report.max_abs_dlambda_dt);
    println!(
        "sharpened bound held    {}",
        if report.sharpened_within_bound {
            "yes"
        } else {
            "no"
        }
    );
    if !report.all_bounds_hold() {
        return Err(CliError::Violation(
            "drift bound violated; see summary above".to_string(),
        ));
    }
    Ok(())
}

pub fn bounds(
    n: usize,
    k: Option<usize>,
    pe: Option<f64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match pe {
        Some(p_e) => bounds_formula(n, p_e, out),
        None => bounds_sweep(n, k, out),
    }
}

/// Formula-only mode: no simulation, any dimension.
fn bounds_formula(n: usize, p_e: f64, out: Option<&Path>) -> Result<(), CliError> {
    let lower = query_lower_bound(p_e, n)?;
    let grover_k = optimal_iterations(n)?;
    println!("query lower bounds for n={n} at p_e={p_e}");
    println!("printed form  {:.6}", lower.printed_form);
    println!("derived form  {:.6}", lower.derived_form);
    println!("grover steps  {grover_k}");
    if let Some(path) = out {
        let mut sink = Sink::open(Some(path))?;
        sink.write_line("p_e,k_lower_printed_form,k_lower_derived_form,grover_k")?;
        sink.write_line(&format!(
            "{},{},{},{grover_k}",
            fmt17(p_e),
            fmt17(lower.printed_form),
            fmt17(lower.derived_form)
        ))?;
        sink.finish()?;
    }
    Ok(())
}

const BOUNDS_HEADER: &str = "K,p_e,entropy_final_bits,mutual_info_bits,sup_norm_final,\
delta_observed,holevo_slack,fano_slack,entropy_cap_slack,supbound_slack,\
k_lower_printed_form,k_lower_derived_form";

fn bounds_sweep(n: usize, k: Option<usize>, out: Option<&Path>) -> Result<(), CliError> {
    let k_max = default_steps(n, k)?;
    let reports = audit_sweep(n, k_max)?;

    println!(
        "{:>4} {:>12} {:>10} {:>10} {:>10} {:>12} {:>12} {:>12}",
        "K", "p_e", "S(K)", "I(X;Y)", "mu_K", "min slack", "printed", "derived"
    );
    let mut sound = true;
    for report in &reports {
        println!(
            "{:>4} {:>12.6e} {:>10.6} {:>10.6} {:>10.6} {:>12.3e} {:>12.4} {:>12.4}",
            report.steps,
            report.p_e,
            report.entropy_final_bits,
            report.mutual_info_bits,
            report.sup_norm_final,
            report.min_slack(),
            report.lower_bounds.printed_form,
            report.lower_bounds.derived_form
        );
        if (report.steps as f64) < report.lower_bounds.derived_form - 1e-9 {
            sound = false;
        }
    }

    if let Some(path) = out {
        let mut sink = Sink::open(Some(path))?;
        sink.write_line(BOUNDS_HEADER)?;
        for r in &reports {
            sink.write_line(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.steps,
                fmt17(r.p_e),
                fmt17(r.entropy_final_bits),
                fmt17(r.mutual_info_bits),
                fmt17(r.sup_norm_final),
                fmt17(r.delta_observed),
                fmt17(r.holevo_slack),
                fmt17(r.fano_slack),
                fmt17(r.entropy_cap_slack),
                fmt17(r.supbound_slack),
                fmt17(r.lower_bounds.printed_form),
                fmt17(r.lower_bounds.derived_form)
            ))?;
        }
        sink.finish()?;
    }

    if !sound {
        return Err(CliError::Violation(
            "a truncated run fell below the derived-form lower bound".to_string(),
        ));
    }
    Ok(())
}
