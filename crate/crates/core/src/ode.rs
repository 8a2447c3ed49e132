//! Dormand-Prince 5(4) integrator with cubic Hermite dense output.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Steps below `min_step_factor * (t1 - t0)` count as a failure.
    pub min_step_factor: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-13, min_step_factor: 1e-14, max_steps: 1_000_000 }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Accepted steps with states and derivatives.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub slopes: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> [f64; N] {
        *self.states.last().expect("trajectory is never empty")
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Hermite interpolation between accepted steps; clamps outside the span.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.states[0];
        }
        if t >= self.times[n - 1] {
            return self.states[n - 1];
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let (y0, y1) = (&self.states[i], &self.states[i + 1]);
        let (f0, f1) = (&self.slopes[i], &self.slopes[i + 1]);
        std::array::from_fn(|k| h00 * y0[k] + h10 * h * f0[k] + h01 * y1[k] + h11 * h * f1[k])
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, ks: &[[f64; N]], weights: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| {
        let mut acc = 0.0;
        for (k, &w) in ks.iter().zip(weights) {
            acc += w * k[i];
        }
        y[i] + h * acc
    })
}

/// Integrate `y' = f(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<const N: usize, F>(f: F, y0: [f64; N], t0: f64, t1: f64, opts: &OdeOptions) -> Result<Trajectory<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(t1 > t0) {
        return Err(Error::InvalidArgument(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    let span = t1 - t0;
    let min_step = opts.min_step_factor * span;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut traj = Trajectory { times: vec![t], states: vec![y], slopes: vec![k1] };

    let norm0 = y.iter().zip(&k1).fold(0.0f64, |m, (yi, fi)| {
        let sc = opts.atol + opts.rtol * yi.abs();
        m.max((fi / sc).abs())
    });
    let mut h = if norm0 > 0.0 { (0.01 / norm0).min(span) } else { span };
    h = h.max(min_step);

    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(traj);
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let mut ks = [[0.0; N]; 7];
        ks[0] = k1;
        for s in 1..7 {
            let ys = axpy(&y, h, &ks[..s], &A[s][..s]);
            ks[s] = f(t + C[s] * h, &ys);
        }
        let y_new = axpy(&y, h, &ks[..6], &A[6][..6]);
        let err_vec = axpy(&[0.0; N], h, &ks, &E);
        let mut err = 0.0f64;
        for i in 0..N {
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((err_vec[i] / sc).abs());
        }
        // f64::max drops NaN, so check the raw values
        if !err.is_finite() || y_new.iter().chain(&err_vec).any(|v| !v.is_finite()) {
            err = f64::INFINITY;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = ks[6];
            traj.times.push(t);
            traj.states.push(y);
            traj.slopes.push(k1);
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < min_step {
                return Err(Error::StepFailure { t, h });
            }
        }
    }
    Err(Error::StepFailure { t, h })
}
