//! Positive T-periodic solution of the periodic logistic equation
//! `u' = u (g(t) - h(t) u)`.
//!
//! With `w = 1/u` the equation becomes linear, `w' = -g w + h`, and the
//! periodic solution is obtained by propagating `w` exactly over each grid
//! interval. The per-interval propagator only involves `exp` of local
//! integrals, so nothing overflows when `T * |g|` is large.

use crate::coeffs::PeriodicCoefficient;
use crate::error::{Error, Result};
use crate::interp::HermiteSeries;
use crate::quad;

pub const DEFAULT_GRID: usize = 2048;
pub const TOL_ODE: f64 = 1e-8;
pub const TOL_PERIODIC: f64 = 1e-9;

/// Sampled positive periodic solution with cubic Hermite interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit1D {
    series: HermiteSeries,
}

impl PeriodicOrbit1D {
    pub fn period(&self) -> f64 {
        self.series.time(self.series.intervals())
    }

    /// `(t, value)` pairs on the uniform grid, both endpoints included.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.series
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.series.time(i), v))
            .collect()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.series.eval(t)
    }

    pub fn min(&self) -> f64 {
        self.series.min()
    }

    pub fn max(&self) -> f64 {
        self.series.max()
    }

    /// Relative mismatch between the first and last sample.
    pub fn periodicity_residual(&self) -> f64 {
        let v = self.series.values();
        (v[0] - v[v.len() - 1]).abs() / self.max()
    }

    /// Largest `|theta' - theta (g - h theta)|` at interval midpoints,
    /// using the derivative of the interpolant.
    pub fn ode_residual(&self, growth: &PeriodicCoefficient, damping: &PeriodicCoefficient) -> f64 {
        let tp = self.period();
        let h = self.series.step();
        (0..self.series.intervals())
            .map(|i| {
                let t = h * (i as f64 + 0.5);
                let th = self.series.eval(t);
                let rhs = th * (growth.eval(tp, t) - damping.eval(tp, t) * th);
                (self.series.derivative(t) - rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Solve for the unique positive periodic solution on the default grid.
pub fn periodic_logistic(
    growth: &PeriodicCoefficient,
    damping: &PeriodicCoefficient,
    period: f64,
) -> Result<PeriodicOrbit1D> {
    periodic_logistic_on_grid(growth, damping, period, DEFAULT_GRID)
}

pub fn periodic_logistic_on_grid(
    growth: &PeriodicCoefficient,
    damping: &PeriodicCoefficient,
    period: f64,
    intervals: usize,
) -> Result<PeriodicOrbit1D> {
    let mean = growth.mean();
    if mean <= 0.0 {
        return Err(Error::NoPositiveSolution { mean });
    }
    let damping_min = damping.stats(period).min;
    if damping_min <= 0.0 {
        return Err(Error::Validation(format!(
            "logistic damping must be strictly positive, minimum is {damping_min}"
        )));
    }
    let n = intervals.max(2);
    let h = period / n as f64;
    let time = |i: usize| if i == n { period } else { h * i as f64 };

    let values: Vec<f64> = if growth.is_constant() && damping.is_constant() {
        vec![mean / damping.mean(); n + 1]
    } else {
        // w(t_{i+1}) = decay_i * w(t_i) + forcing_i
        let mut decay = Vec::with_capacity(n);
        let mut forcing = Vec::with_capacity(n);
        for i in 0..n {
            let (t0, t1) = (time(i), time(i + 1));
            decay.push((-growth.integral(period, t0, t1)).exp());
            let integrand = |s: f64| damping.eval(period, s) * (-growth.integral(period, s, t1)).exp();
            forcing.push(quad::gauss8(integrand, t0, t1));
        }
        let from_zero = decay.iter().zip(&forcing).fold(0.0, |w, (dk, fk)| dk * w + fk);
        let w0 = from_zero / -(-mean * period).exp_m1();
        let mut w = Vec::with_capacity(n + 1);
        w.push(w0);
        for i in 0..n {
            let next = decay[i] * w[i] + forcing[i];
            w.push(next);
        }
        w.into_iter().map(|wi| 1.0 / wi).collect()
    };

    let slopes = values
        .iter()
        .enumerate()
        .map(|(i, &th)| {
            let t = time(i);
            th * (growth.eval(period, t) - damping.eval(period, t) * th)
        })
        .collect();
    Ok(PeriodicOrbit1D { series: HermiteSeries::new(period, values, slopes) })
}

/// `(1/T) int_0^T weight(t) theta(t) dt`.
pub fn weighted_average(weight: &PeriodicCoefficient, orbit: &PeriodicOrbit1D) -> f64 {
    let tp = orbit.period();
    if let PeriodicCoefficient::Constant(w) = weight {
        if *w == 0.0 {
            return 0.0;
        }
    }
    orbit.series.integrate(|t| weight.eval(tp, t) * orbit.series.eval(t)) / tp
}
