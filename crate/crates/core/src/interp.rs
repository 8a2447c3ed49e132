//! Cubic Hermite interpolation of a sampled T-periodic scalar function on a
//! uniform grid `t_i = i T / n`, `i = 0..=n`.

use crate::optimize;
use crate::quad;

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSeries {
    period: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl HermiteSeries {
    /// `values` and `slopes` hold `n + 1` entries including both endpoints.
    pub fn new(period: f64, values: Vec<f64>, slopes: Vec<f64>) -> Self {
        assert!(values.len() >= 2 && values.len() == slopes.len());
        Self { period, values, slopes }
    }

    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.period / self.intervals() as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i == self.intervals() {
            self.period
        } else {
            self.step() * i as f64
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.intervals();
        let tt = t.rem_euclid(self.period);
        let h = self.step();
        let i = ((tt / h) as usize).min(n - 1);
        let s = (tt - h * i as f64) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1
    }

    /// Derivative of the interpolant.
    pub fn derivative(&self, t: f64) -> f64 {
        let n = self.intervals();
        let tt = t.rem_euclid(self.period);
        let h = self.step();
        let i = ((tt / h) as usize).min(n - 1);
        let s = (tt - h * i as f64) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * m0 + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h
    }

    /// `int_0^T g(t)` with Gauss panels aligned to the sample grid.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        (0..self.intervals())
            .map(|i| quad::gauss8(&g, self.time(i), self.time(i + 1)))
            .sum()
    }

    /// Maximum of the interpolant over one period.
    pub fn max(&self) -> f64 {
        let (imax, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let n = self.intervals();
        let lo = self.time(imax.saturating_sub(1));
        let hi = self.time((imax + 1).min(n));
        let (_, refined) = optimize::golden_max(&|t| self.eval(t), lo, hi, 200);
        refined.max(self.values[imax])
    }

    pub fn min(&self) -> f64 {
        let neg = HermiteSeries {
            period: self.period,
            values: self.values.iter().map(|v| -v).collect(),
            slopes: self.slopes.iter().map(|v| -v).collect(),
        };
        -neg.max()
    }
}
