//! Closed-form Grover dynamics at any dimension, no eigensolver involved.
//!
//! One iteration rotates the target-mean plane by `theta = arccos(1 - 2/n)`,
//! so after `k` iterations the computer mixture has one simple eigenvalue
//! `cos^2(theta k)` and an `(n-1)`-fold eigenvalue `sin^2(theta k)/(n-1)`.
//! The integer step count extends to real time for smooth curves; integer
//! samples are the ones cross-validated against the dense engine.

use crate::error::{Error, Result};
use crate::parallel;

/// Analytic snapshot of a Grover run at (possibly fractional) time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormPoint {
    pub n: usize,
    /// Time in oracle-call units; integer values are algorithm steps.
    pub t: f64,
    /// Simple eigenvalue `cos^2(theta t)`.
    pub lambda1: f64,
    /// `(n-1)`-fold eigenvalue `sin^2(theta t) / (n-1)`.
    pub lambda2: f64,
    pub entropy_bits: f64,
    pub sup_norm: f64,
    /// `sin^2((2t+1) theta / 2)`: probability that a computational-basis
    /// measurement at time `t` returns the target.
    pub success_prob: f64,
}

/// Rotation angle per Grover iteration, `arccos(1 - 2/n)`.
pub fn grover_angle(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    Ok((1.0 - 2.0 / n as f64).acos())
}

fn entropy_term(l: f64) -> f64 {
    if l > 0.0 {
        -l * l.log2()
    } else {
        0.0
    }
}

/// Evaluates the closed forms at time `t >= 0`.
pub fn closed_form_point(n: usize, t: f64) -> Result<ClosedFormPoint> {
    let theta = grover_angle(n)?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidTime { value: t });
    }
    let c = (theta * t).cos();
    let s = (theta * t).sin();
    let lambda1 = c * c;
    let lambda2 = s * s / (n as f64 - 1.0);
    let entropy_bits = entropy_term(lambda1) + (n as f64 - 1.0) * entropy_term(lambda2);
    let half_angle = (2.0 * t + 1.0) * theta / 2.0;
    let success_prob = half_angle.sin().powi(2);
    Ok(ClosedFormPoint {
        n,
        t,
        lambda1,
        lambda2,
        entropy_bits,
        sup_norm: lambda1.max(lambda2),
        success_prob,
    })
}

/// `floor((pi/4) sqrt(n))`, the step count Grover's algorithm runs for.
pub fn optimal_iterations(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    Ok((std::f64::consts::FRAC_PI_4 * (n as f64).sqrt()).floor() as usize)
}

/// Entropy period in oracle-call units, `pi / theta`.
pub fn entropy_period(n: usize) -> Result<f64> {
    Ok(std::f64::consts::PI / grover_angle(n)?)
}

/// Samples the closed forms at `t = 0, dt, 2 dt, ... <= t_max`.
pub fn entropy_curve(n: usize, t_max: f64, dt: f64) -> Result<Vec<ClosedFormPoint>> {
    if n < 2 {
        return Err(Error::InvalidDimension { n });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidStep { value: dt });
    }
    if !(t_max > 0.0) {
        return Err(Error::InvalidTime { value: t_max });
    }
    let count = (t_max / dt).floor() as usize + 1;
    let points = parallel::map_indexed(count, |i| {
        closed_form_point(n, i as f64 * dt).expect("inputs validated")
    });
    Ok(points)
}
