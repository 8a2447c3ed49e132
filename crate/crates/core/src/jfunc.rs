//! Conjugate exponents and the special functions that form the right-hand
//! side of every stability test:
//!
//! ```text
//! J(q) = int_0^{2 pi} (|cos t|^{2q} + |sin t|^{2q})^{-1/q} dt,   J(inf) = 8
//! F(q) = J(q) / 2^{2 - 1/q}
//! scriptF(p) = F(p / (p - 1))
//! ```

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quad;

/// Target absolute accuracy of `J`.
pub const TOL_J: f64 = 1e-9;
/// Finite exponents above this are evaluated as `q = inf`.
pub const LARGE_Q: f64 = 1e6;
const SIMPSON_DEPTH: u32 = 30;

/// An exponent in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::InvalidArgument(format!("exponent must be >= 1, got {value}")));
        }
        if value.is_infinite() {
            return Ok(Exponent::Infinity);
        }
        Ok(Exponent::Finite(value))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Reciprocal `1/p`, zero for infinity.
    pub fn recip(&self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// The `q` with `1/p + 1/q = 1`.
    pub fn conjugate(&self) -> Exponent {
        match *self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" | "Inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("not an exponent: {s:?}")))?;
                Exponent::finite(v)
            }
        }
    }
}

pub fn conjugate(p: Exponent) -> Exponent {
    p.conjugate()
}

/// Value of `J` and whether the large-`q` shortcut was taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JValue {
    pub value: f64,
    pub shortcut: bool,
}

/// `J(q)` with its diagnostic flag.
pub fn j_detailed(q: Exponent) -> JValue {
    match q {
        Exponent::Infinity => JValue { value: 8.0, shortcut: false },
        Exponent::Finite(q) if q > LARGE_Q => JValue { value: 8.0, shortcut: true },
        Exponent::Finite(q) if q == 1.0 => JValue { value: 2.0 * PI, shortcut: false },
        Exponent::Finite(q) => {
            // 8-fold symmetry: on [0, pi/4] cos >= sin, so with r = tan t
            // the integrand is cos^-2 (1 + r^{2q})^{-1/q}.
            let integrand = |t: f64| {
                let (s, c) = t.sin_cos();
                let r = s / c;
                (-(r.powf(2.0 * q)).ln_1p() / q).exp() / (c * c)
            };
            let value = 8.0 * quad::adaptive_simpson(&integrand, 0.0, FRAC_PI_4, TOL_J / 8.0, SIMPSON_DEPTH);
            JValue { value, shortcut: false }
        }
    }
}

pub fn j(q: Exponent) -> f64 {
    j_detailed(q).value
}

/// `F(q) = J(q) / 2^{2 - 1/q}`.
pub fn f_of_q(q: Exponent) -> f64 {
    j(q) / 2f64.powf(2.0 - q.recip())
}

/// `scriptF(p) = F(conjugate(p))`; ranges over `[2, pi]`.
pub fn script_f(p: Exponent) -> f64 {
    f_of_q(p.conjugate())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Complete elliptic integral K(m) through the arithmetic-geometric mean.
    fn elliptic_k(m: f64) -> f64 {
        let (mut a, mut g) = (1.0f64, (1.0 - m).sqrt());
        for _ in 0..64 {
            if (a - g).abs() <= 4.0 * f64::EPSILON * a {
                break;
            }
            let next = 0.5 * (a + g);
            g = (a * g).sqrt();
            a = next;
        }
        PI / (2.0 * a)
    }

    /// Plain midpoint rule over the full circle with the integrand as written.
    fn j_full_circle(q: f64, n: usize) -> f64 {
        let h = 2.0 * PI / n as f64;
        (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) * h;
                (t.cos().abs().powf(2.0 * q) + t.sin().abs().powf(2.0 * q)).powf(-1.0 / q)
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(Exponent::Finite(2.0)), Exponent::Finite(2.0));
        assert_eq!(conjugate(Exponent::Finite(1.0)), Exponent::Infinity);
        assert_eq!(conjugate(Exponent::Infinity), Exponent::Finite(1.0));
        match conjugate(Exponent::Finite(4.0)) {
            Exponent::Finite(q) => assert!((q - 4.0 / 3.0).abs() < 1e-15),
            Exponent::Infinity => panic!(),
        }
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!(" 1.5".parse::<Exponent>().unwrap(), Exponent::Finite(1.5));
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }

    #[test]
    fn j_examples() {
        assert!((j(Exponent::Finite(1.0)) - 2.0 * PI).abs() < TOL_J);
        assert_eq!(j(Exponent::Infinity), 8.0);
        let oracle = 4.0 * elliptic_k(0.5);
        assert!((oracle - 7.416_298_7).abs() < 1e-7);
        assert!((j(Exponent::Finite(2.0)) - oracle).abs() < TOL_J);
    }

    #[test]
    fn symmetry_reduction_matches_full_circle() {
        for q in [1.3, 2.0, 3.7] {
            let full = j_full_circle(q, 200_000);
            assert!((j(Exponent::Finite(q)) - full).abs() < 1e-8, "q = {q}");
        }
    }

    #[test]
    fn f_examples() {
        assert!((f_of_q(Exponent::Finite(1.0)) - PI).abs() < 1e-12);
        assert_eq!(f_of_q(Exponent::Infinity), 2.0);
        let oracle = 4.0 * elliptic_k(0.5) / 2f64.powf(1.5);
        assert!((f_of_q(Exponent::Finite(2.0)) - oracle).abs() < 1e-9);
        assert!((oracle - 2.622_057_6).abs() < 1e-7);
    }

    #[test]
    fn script_f_examples() {
        assert_eq!(script_f(Exponent::Finite(1.0)), 2.0);
        assert!((script_f(Exponent::Infinity) - PI).abs() < 1e-12);
        assert_eq!(script_f(Exponent::Finite(2.0)), f_of_q(Exponent::Finite(2.0)));
    }

    #[test]
    fn large_q_short_circuits() {
        let v = j_detailed(Exponent::Finite(2e6));
        assert!(v.shortcut);
        assert_eq!(v.value, 8.0);
        assert!(!j_detailed(Exponent::Finite(1e5)).shortcut);
    }

    #[test]
    fn monotone_on_grid() {
        let mut qs: Vec<Exponent> = (0..=196).map(|i| Exponent::Finite(1.0 + 0.25 * i as f64)).collect();
        qs.push(Exponent::Infinity);
        let js: Vec<f64> = qs.iter().map(|&q| j(q)).collect();
        let fs: Vec<f64> = qs.iter().map(|&q| f_of_q(q)).collect();
        for w in js.windows(2) {
            assert!(w[1] - w[0] > 10.0 * TOL_J, "{w:?}");
        }
        for w in fs.windows(2) {
            assert!(w[0] - w[1] > 10.0 * TOL_J, "{w:?}");
        }
        for &q in &qs {
            let sf = script_f(q.conjugate());
            assert!((2.0 - TOL_J..=PI + TOL_J).contains(&sf));
        }
    }
}
