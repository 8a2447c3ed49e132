//! Trivial and semi-trivial states, their stability, and the existence test
//! for coexistence states.

use crate::coeffs::SystemSpec;
use crate::logistic::{self, PeriodicOrbit1D};

/// Margins within this distance of zero are reported as borderline.
pub const BORDERLINE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct BoundaryClassification {
    /// Mean of `a`.
    pub lambda: f64,
    /// Mean of `d`.
    pub mu: f64,
    /// Prey-only state `(theta_lambda, 0)`, present iff `lambda > 0`.
    pub theta_lambda: Option<PeriodicOrbit1D>,
    /// Predator-only state `(0, theta_mu)`, present iff `mu > 0`.
    pub theta_mu: Option<PeriodicOrbit1D>,
    pub trivial_stable: bool,
    pub prey_only_stable: Option<bool>,
    pub predator_only_stable: Option<bool>,
    pub coexistence_exists: bool,
    /// Slack of `mu > -(1/T) int e theta_lambda` and of
    /// `lambda > (1/T) int c theta_mu` (the latter is `lambda` when `mu <= 0`).
    pub margins: (f64, f64),
    pub diagnostics: Vec<String>,
}

pub fn classify_boundary(spec: &SystemSpec) -> BoundaryClassification {
    let tp = spec.period;
    let lambda = spec.a.mean();
    let mu = spec.d.mean();
    let mut diagnostics = Vec::new();

    // b and f are validated positive, so the only failure mode is a non-positive mean
    let theta_lambda =
        if lambda > 0.0 { logistic::periodic_logistic(&spec.a, &spec.b, tp).ok() } else { None };
    let theta_mu = if mu > 0.0 { logistic::periodic_logistic(&spec.d, &spec.f, tp).ok() } else { None };

    let e_theta = theta_lambda.as_ref().map(|th| logistic::weighted_average(&spec.e, th));
    let c_theta = theta_mu.as_ref().map(|th| logistic::weighted_average(&spec.c, th));

    let trivial_stable = lambda <= 0.0 && mu <= 0.0;
    let prey_only_stable = e_theta.map(|avg| mu <= -avg);
    let predator_only_stable = c_theta.map(|avg| lambda <= avg);

    let first = match e_theta {
        Some(avg) => mu + avg,
        None => {
            diagnostics.push(format!("prey-only state absent (lambda = {lambda:e} <= 0)"));
            lambda
        }
    };
    let second = match c_theta {
        Some(avg) => lambda - avg,
        None => {
            diagnostics.push(
                "predator-only state absent (mu <= 0): second existence inequality replaced by lambda > 0".into(),
            );
            lambda
        }
    };
    for (name, m) in [("first", first), ("second", second)] {
        if m.abs() <= BORDERLINE {
            diagnostics.push(format!("borderline: {name} existence margin {m:e}"));
        }
    }
    let coexistence_exists = lambda > 0.0 && first > 0.0 && second > 0.0;

    BoundaryClassification {
        lambda,
        mu,
        theta_lambda,
        theta_mu,
        trivial_stable,
        prey_only_stable,
        predator_only_stable,
        coexistence_exists,
        margins: (first, second),
        diagnostics,
    }
}

/// Whether at least one coexistence state exists, with the two slacks.
pub fn coexistence_exists(spec: &SystemSpec) -> (bool, (f64, f64)) {
    let c = classify_boundary(spec);
    (c.coexistence_exists, c.margins)
}
