//! T-periodic coefficient functions and the system they define.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jfunc::Exponent;
use crate::optimize;
use crate::quad;

/// Extrema are located to this absolute accuracy.
pub const TOL_EXTREMUM: f64 = 1e-10;
/// Absolute accuracy target of the L^p-average quadrature.
pub const TOL_QUAD: f64 = 1e-10;
/// Dense samples per period used to bracket extrema.
pub const EXTREMUM_SAMPLES: usize = 4096;

/// One term `cos_coeff * cos(2 pi k t / T) + sin_coeff * sin(2 pi k t / T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub k: u32,
    pub cos_coeff: f64,
    pub sin_coeff: f64,
}

impl Harmonic {
    pub fn new(k: u32, cos_coeff: f64, sin_coeff: f64) -> Self {
        Self { k, cos_coeff, sin_coeff }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PeriodicCoefficient {
    Constant(f64),
    Trigonometric { c0: f64, harmonics: Vec<Harmonic> },
}

impl PeriodicCoefficient {
    pub fn constant(value: f64) -> Self {
        PeriodicCoefficient::Constant(value)
    }

    /// Build a trigonometric polynomial. Harmonic orders must be positive and
    /// distinct and every coefficient finite.
    pub fn trig(c0: f64, harmonics: Vec<Harmonic>) -> Result<Self> {
        if !c0.is_finite() {
            return Err(Error::Validation("non-finite mean term c0".into()));
        }
        let mut seen = Vec::with_capacity(harmonics.len());
        for h in &harmonics {
            if h.k == 0 {
                return Err(Error::Validation("harmonic order must be positive".into()));
            }
            if !h.cos_coeff.is_finite() || !h.sin_coeff.is_finite() {
                return Err(Error::Validation(format!("non-finite coefficient in harmonic {}", h.k)));
            }
            if seen.contains(&h.k) {
                return Err(Error::Validation(format!("duplicate harmonic order {}", h.k)));
            }
            seen.push(h.k);
        }
        Ok(PeriodicCoefficient::Trigonometric { c0, harmonics })
    }

    pub fn is_constant(&self) -> bool {
        match self {
            PeriodicCoefficient::Constant(_) => true,
            PeriodicCoefficient::Trigonometric { harmonics, .. } => {
                harmonics.iter().all(|h| h.cos_coeff == 0.0 && h.sin_coeff == 0.0)
            }
        }
    }

    /// Exact mean over one period.
    pub fn mean(&self) -> f64 {
        match self {
            PeriodicCoefficient::Constant(v) => *v,
            PeriodicCoefficient::Trigonometric { c0, .. } => *c0,
        }
    }

    pub fn eval(&self, period: f64, t: f64) -> f64 {
        match self {
            PeriodicCoefficient::Constant(v) => *v,
            PeriodicCoefficient::Trigonometric { c0, harmonics } => {
                // reduce to one period first so that eval(t) == eval(t + T)
                let phase = 2.0 * PI * t.rem_euclid(period) / period;
                harmonics.iter().fold(*c0, |acc, h| {
                    let arg = phase * h.k as f64;
                    acc + h.cos_coeff * arg.cos() + h.sin_coeff * arg.sin()
                })
            }
        }
    }

    /// Exact integral over `[t0, t1]`.
    pub fn integral(&self, period: f64, t0: f64, t1: f64) -> f64 {
        match self {
            PeriodicCoefficient::Constant(v) => v * (t1 - t0),
            PeriodicCoefficient::Trigonometric { c0, harmonics } => {
                let w = 2.0 * PI / period;
                harmonics.iter().fold(c0 * (t1 - t0), |acc, h| {
                    let wk = w * h.k as f64;
                    let (s1, c1) = (wk * t1).sin_cos();
                    let (s0, c0) = (wk * t0).sin_cos();
                    acc + h.cos_coeff * (s1 - s0) / wk - h.sin_coeff * (c1 - c0) / wk
                })
            }
        }
    }

    /// Minimum, maximum and mean over one period.
    pub fn stats(&self, period: f64) -> CoeffStats {
        match self {
            PeriodicCoefficient::Constant(v) => CoeffStats { min: *v, max: *v, mean: *v },
            PeriodicCoefficient::Trigonometric { c0, .. } => {
                let (min, max) =
                    optimize::extrema(&|t| self.eval(period, t), 0.0, period, EXTREMUM_SAMPLES);
                CoeffStats { min: min.min(*c0), max: max.max(*c0), mean: *c0 }
            }
        }
    }

    /// L^p-average `(1/T int_0^T phi^p)^(1/p)`, or the maximum for `p = inf`.
    /// The coefficient must be non-negative.
    pub fn lp_average(&self, period: f64, p: Exponent) -> Result<f64> {
        let stats = self.stats(period);
        if stats.min < -TOL_EXTREMUM {
            return Err(Error::NegativeIntegrand { min: stats.min });
        }
        Ok(self.abs_lp_average(period, p, &stats))
    }

    /// L^p norm of |phi|, `(int_0^T |phi|^p)^(1/p)`, or its maximum for `p = inf`.
    pub fn lp_norm(&self, period: f64, p: Exponent) -> f64 {
        let stats = self.stats(period);
        let avg = self.abs_lp_average(period, p, &stats);
        match p {
            Exponent::Infinity => avg,
            Exponent::Finite(p) => avg * period.powf(1.0 / p),
        }
    }

    fn abs_lp_average(&self, period: f64, p: Exponent, stats: &CoeffStats) -> f64 {
        if let PeriodicCoefficient::Constant(v) = self {
            return v.abs();
        }
        match p {
            Exponent::Infinity => stats.max.abs().max(stats.min.abs()),
            Exponent::Finite(p) if p == 1.0 && stats.min >= 0.0 => stats.mean,
            Exponent::Finite(p) => {
                let f = |t: f64| self.eval(period, t).abs().powf(p);
                let (integral, _) = quad::gauss_with_estimate(&f, 0.0, period, quad::DEFAULT_PANELS);
                (integral / period).powf(1.0 / p)
            }
        }
    }
}

/// Minimum, maximum and mean of a coefficient over one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// `(min, max)` of `num(t) / den(t)` over one period.
pub fn ratio_extrema(num: &PeriodicCoefficient, den: &PeriodicCoefficient, period: f64) -> Result<(f64, f64)> {
    let den_min = den.stats(period).min;
    if den_min <= 0.0 {
        return Err(Error::ZeroDenominator { min: den_min });
    }
    if num.is_constant() && den.is_constant() {
        let r = num.mean() / den.mean();
        return Ok((r, r));
    }
    Ok(optimize::extrema(
        &|t| num.eval(period, t) / den.eval(period, t),
        0.0,
        period,
        EXTREMUM_SAMPLES,
    ))
}

/// Period and the six coefficients of
/// `u' = u (a - b u - c v)`, `v' = v (d + e u - f v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub period: f64,
    pub a: PeriodicCoefficient,
    pub b: PeriodicCoefficient,
    pub c: PeriodicCoefficient,
    pub d: PeriodicCoefficient,
    pub e: PeriodicCoefficient,
    pub f: PeriodicCoefficient,
}

impl SystemSpec {
    /// Validates `T > 0` and strict positivity of `b`, `c`, `e`, `f`.
    pub fn new(
        period: f64,
        a: PeriodicCoefficient,
        b: PeriodicCoefficient,
        c: PeriodicCoefficient,
        d: PeriodicCoefficient,
        e: PeriodicCoefficient,
        f: PeriodicCoefficient,
    ) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Validation(format!("period T must be positive, got {period}")));
        }
        for (name, coef) in [("a", &a), ("b", &b), ("c", &c), ("d", &d), ("e", &e), ("f", &f)] {
            if let PeriodicCoefficient::Constant(v) = coef {
                if !v.is_finite() {
                    return Err(Error::Validation(format!("coefficient {name} is not finite")));
                }
            }
        }
        for (name, coef) in [("b", &b), ("c", &c), ("e", &e), ("f", &f)] {
            let min = coef.stats(period).min;
            if min <= 0.0 {
                return Err(Error::Validation(format!(
                    "{name}_L > 0 violated: minimum of {name} is {min}"
                )));
            }
        }
        Ok(Self { period, a, b, c, d, e, f })
    }

    /// All-constant system.
    pub fn constant(period: f64, a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        use PeriodicCoefficient::Constant as K;
        Self::new(period, K(a), K(b), K(c), K(d), K(e), K(f))
    }

    /// The constant system used as the worked example throughout the crate:
    /// `a = 2.0102, b = 1, c = 0.0051, d = 2.0203, e = 0.9898, f = 2`.
    pub fn worked_example(period: f64) -> Self {
        Self::constant(period, 2.0102, 1.0, 0.0051, 2.0203, 0.9898, 2.0)
            .expect("worked example is valid")
    }

    pub fn coefficients(&self) -> [(&'static str, &PeriodicCoefficient); 6] {
        [
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("e", &self.e),
            ("f", &self.f),
        ]
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients().iter().all(|(_, c)| c.is_constant())
    }

    /// Right-hand side of the system at `(t, u, v)`.
    pub fn rhs(&self, t: f64, u: f64, v: f64) -> [f64; 2] {
        let tp = self.period;
        [
            u * (self.a.eval(tp, t) - self.b.eval(tp, t) * u - self.c.eval(tp, t) * v),
            v * (self.d.eval(tp, t) + self.e.eval(tp, t) * u - self.f.eval(tp, t) * v),
        ]
    }

    /// Jacobian of the right-hand side with respect to `(u, v)`.
    pub fn jacobian(&self, t: f64, u: f64, v: f64) -> [[f64; 2]; 2] {
        let tp = self.period;
        let (a, b, c) = (self.a.eval(tp, t), self.b.eval(tp, t), self.c.eval(tp, t));
        let (d, e, f) = (self.d.eval(tp, t), self.e.eval(tp, t), self.f.eval(tp, t));
        [
            [a - 2.0 * b * u - c * v, -c * u],
            [e * v, d + e * u - 2.0 * f * v],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sine_offset() -> PeriodicCoefficient {
        PeriodicCoefficient::trig(1.0, vec![Harmonic::new(1, 0.0, 0.5)]).unwrap()
    }

    fn cos_offset() -> PeriodicCoefficient {
        PeriodicCoefficient::trig(2.0, vec![Harmonic::new(1, 1.0, 0.0)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(PeriodicCoefficient::constant(2.0102).eval(1.0, 0.3), 2.0102);
        assert!((sine_offset().eval(1.0, 0.25) - 1.5).abs() < 1e-15);
        assert_eq!(sine_offset().eval(1.0, 0.0), 1.0);
    }

    #[test]
    fn stats_examples() {
        let s = PeriodicCoefficient::constant(2.0).stats(1.0);
        assert_eq!((s.min, s.max, s.mean), (2.0, 2.0, 2.0));
        let s = sine_offset().stats(1.0);
        assert!((s.min - 0.5).abs() < TOL_EXTREMUM);
        assert!((s.max - 1.5).abs() < TOL_EXTREMUM);
        assert_eq!(s.mean, 1.0);
        let s = cos_offset().stats(1.0);
        assert!((s.min - 1.0).abs() < TOL_EXTREMUM);
        assert!((s.max - 3.0).abs() < TOL_EXTREMUM);
        assert_eq!(s.mean, 2.0);
    }

    #[test]
    fn lp_average_examples() {
        let c = PeriodicCoefficient::constant(0.7);
        for p in [Exponent::Finite(1.0), Exponent::Finite(3.5), Exponent::Infinity] {
            assert_eq!(c.lp_average(2.0, p).unwrap(), 0.7);
        }
        // int_0^1 (1 + 0.5 sin)^2 = 1 + 0.25 / 2
        let v = sine_offset().lp_average(1.0, Exponent::Finite(2.0)).unwrap();
        assert!((v - 1.125f64.sqrt()).abs() < TOL_QUAD);
        let v = sine_offset().lp_average(1.0, Exponent::Infinity).unwrap();
        assert!((v - 1.5).abs() < TOL_EXTREMUM);
    }

    #[test]
    fn lp_average_rejects_negative_integrand() {
        let g = PeriodicCoefficient::trig(0.1, vec![Harmonic::new(1, 1.0, 0.0)]).unwrap();
        assert!(matches!(g.lp_average(1.0, Exponent::Finite(2.0)), Err(Error::NegativeIntegrand { .. })));
    }

    #[test]
    fn lp_norm_scales_with_period() {
        let c = PeriodicCoefficient::constant(-2.0);
        assert!((c.lp_norm(4.0, Exponent::Finite(2.0)) - 4.0).abs() < 1e-15);
        assert_eq!(c.lp_norm(4.0, Exponent::Infinity), 2.0);
    }

    #[test]
    fn ratio_extrema_examples() {
        let k = PeriodicCoefficient::constant;
        assert_eq!(ratio_extrema(&k(2.0102), &k(1.0), 1.0).unwrap(), (2.0102, 2.0102));
        let (lo, hi) = ratio_extrema(&sine_offset(), &k(1.0), 1.0).unwrap();
        assert!((lo - 0.5).abs() < TOL_EXTREMUM && (hi - 1.5).abs() < TOL_EXTREMUM);
        let (lo, hi) = ratio_extrema(&k(1.0), &cos_offset(), 1.0).unwrap();
        assert!((lo - 1.0 / 3.0).abs() < TOL_EXTREMUM && (hi - 1.0).abs() < TOL_EXTREMUM);
        assert!(matches!(ratio_extrema(&k(1.0), &k(0.0), 1.0), Err(Error::ZeroDenominator { .. })));
    }

    #[test]
    fn integral_matches_quadrature() {
        let g = PeriodicCoefficient::trig(0.3, vec![Harmonic::new(1, 0.4, -0.2), Harmonic::new(3, 0.1, 0.7)])
            .unwrap();
        let exact = g.integral(2.5, 0.2, 1.9);
        let numeric = quad::composite_gauss(&|t| g.eval(2.5, t), 0.2, 1.9, 64);
        assert!((exact - numeric).abs() < 1e-13);
        assert!((g.integral(2.5, 0.0, 2.5) - 0.3 * 2.5).abs() < 1e-14);
    }

    #[test]
    fn system_validation() {
        assert!(SystemSpec::constant(1.0, 1.0, 1.0, -0.1, 1.0, 1.0, 1.0).is_err());
        assert!(SystemSpec::constant(0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        // a and d may take any sign
        assert!(SystemSpec::constant(1.0, -1.0, 1.0, 1.0, -3.0, 1.0, 1.0).is_ok());
        assert!(PeriodicCoefficient::trig(1.0, vec![Harmonic::new(2, 1.0, 0.0), Harmonic::new(2, 0.0, 1.0)]).is_err());
    }

    fn arb_nonnegative_trig() -> impl Strategy<Value = PeriodicCoefficient> {
        (0.5f64..3.0, prop::collection::vec((1u32..5, -0.3f64..0.3, -0.3f64..0.3), 0..3)).prop_map(
            |(c0, hs)| {
                let mut seen = Vec::new();
                let harmonics = hs
                    .into_iter()
                    .filter(|(k, _, _)| {
                        let fresh = !seen.contains(k);
                        seen.push(*k);
                        fresh
                    })
                    .map(|(k, c, s)| Harmonic::new(k, c, s))
                    .collect();
                // each harmonic has amplitude below 0.43, so c0 >= 1.5 keeps g positive
                PeriodicCoefficient::trig(c0 + 1.0, harmonics).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lp_average_is_monotone_in_p(g in arb_nonnegative_trig(), period in 0.2f64..5.0) {
            let ps = [1.0, 1.5, 2.0, 3.0, 7.0, 20.0];
            let mut prev = g.lp_average(period, Exponent::Finite(1.0)).unwrap();
            prop_assert!((prev - g.mean()).abs() <= TOL_QUAD);
            for &p in &ps[1..] {
                let cur = g.lp_average(period, Exponent::Finite(p)).unwrap();
                prop_assert!(prev <= cur + TOL_QUAD);
                prev = cur;
            }
            prop_assert!(prev <= g.lp_average(period, Exponent::Infinity).unwrap() + TOL_QUAD);
        }

        #[test]
        fn stats_bracket_samples(g in arb_nonnegative_trig(), period in 0.2f64..5.0) {
            let s = g.stats(period);
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
            for i in 0..=1000 {
                let v = g.eval(period, period * i as f64 / 1000.0);
                prop_assert!(s.min - TOL_EXTREMUM <= v && v <= s.max + TOL_EXTREMUM);
            }
        }

        #[test]
        fn eval_is_periodic(g in arb_nonnegative_trig(), period in 0.2f64..5.0, t in -10.0f64..10.0) {
            prop_assert!((g.eval(period, t) - g.eval(period, t + period)).abs() < 1e-12);
        }
    }
}
