//! Closed-form analysis for constant coefficients.
//!
//! With constant coefficients `C_1` collapses to the equilibrium
//! `(x1, y1)`, the linear term of the intertwined test becomes `2k` with
//! `k = (b x1 + f y1) / 2`, and along the first power boundary
//! `(xy)^p` is a quadratic in `w = x^p`:
//!
//! ```text
//! Q(w)  = (a/c) V^{p-1} w - (b/c) (V/U)^{p-1} w^2 - h(p)
//! h(p)  = [ (scriptF(p)/T - k) / sqrt(c e) ]^{2p}
//! G(p)  = (a^2/c^2) V^{p-1} - 4 (b/c) U^{1-p} h(p)
//! D(p)  = V^{p-1} G(p)          (discriminant of Q)
//! ```
//!
//! `h` comes from squaring `sqrt(c e x y) <= scriptF(p)/T - k`, which only
//! preserves the inequality when the right side is non-negative. That sign
//! is reported as `sign_ok` alongside every value derived from `h`.

use std::f64::consts::PI;

use crate::coeffs::SystemSpec;
use crate::criteria::{self, TestResult};
use crate::error::{Error, Result};
use crate::jfunc::{self, Exponent};
use crate::region::{RegionBounds, RegionSpec};

/// Stand-in for the limit `p -> inf` of `G`.
pub const P_LARGE: f64 = 200.0;
const CURVE_SCAN: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSystem {
    pub period: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HValue {
    pub h: f64,
    /// `scriptF(p)/T - k`.
    pub base: f64,
    pub sign_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleOneCurve {
    pub k: f64,
    pub h_values: Vec<(f64, f64)>,
    pub g_values: Vec<(f64, f64)>,
    pub sign_ok: Vec<(f64, bool)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCheck {
    pub v: f64,
    /// `r^2 / U` with `r = |pi/T - k| / sqrt(c e)`.
    pub r_squared_over_u: f64,
    pub limit_positive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check25 {
    pub p_star: f64,
    pub p_large: f64,
    pub g_one: f64,
    pub g_star: f64,
    pub g_large: f64,
    /// `(G(1) > 0, G(p*) < 0, G(p_large) > 0)`.
    pub pattern: (bool, bool, bool),
    pub asymptotic: AsymptoticCheck,
    pub sign_ok_one: bool,
    pub sign_ok_star: bool,
    pub diagnostics: Vec<String>,
}

impl Check25 {
    pub fn holds(&self) -> bool {
        self.pattern == (true, true, true)
    }
}

/// Concave quadratic in `w = x^p` over the part of the first power
/// boundary that lies in `C_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticRoute {
    pub w_range: (f64, f64),
    pub max_q: f64,
}

/// Direct test next to the `G` value for one exponent.
#[derive(Debug, Clone)]
pub struct Diagnosis {
    pub p: Exponent,
    pub g: Option<f64>,
    pub h: Option<HValue>,
    pub direct: TestResult,
    pub note: Option<String>,
}

/// Error-free sum `a + b = s + err`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Neumaier-compensated sum.
pub fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &t in terms {
        let (s, err) = two_sum(sum, t);
        sum = s;
        comp += err;
    }
    sum + comp
}

impl ConstantSystem {
    pub fn new(period: f64, a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::Validation(format!("period must be positive, got {period}")));
        }
        for (name, v) in [("b", b), ("c", c), ("e", e), ("f", f)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        if !a.is_finite() || !d.is_finite() {
            return Err(Error::Validation("a and d must be finite".into()));
        }
        Ok(Self { period, a, b, c, d, e, f })
    }

    pub fn worked_example(period: f64) -> Self {
        Self { period, a: 2.0102, b: 1.0, c: 0.0051, d: 2.0203, e: 0.9898, f: 2.0 }
    }

    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        if !spec.is_constant() {
            return Err(Error::InvalidArgument("coefficients are not constant".into()));
        }
        Self::new(
            spec.period,
            spec.a.mean(),
            spec.b.mean(),
            spec.c.mean(),
            spec.d.mean(),
            spec.e.mean(),
            spec.f.mean(),
        )
    }

    pub fn to_spec(&self) -> Result<SystemSpec> {
        SystemSpec::constant(self.period, self.a, self.b, self.c, self.d, self.e, self.f)
    }

    /// Solution of `b x + c y = a`, `-e x + f y = d`; the `C_1` point.
    pub fn equilibrium(&self) -> Result<(f64, f64)> {
        let det = self.b * self.f + self.c * self.e;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularSystem { det });
        }
        let x = (self.a * self.f - self.c * self.d) / det;
        let y = (self.a * self.e + self.b * self.d) / det;
        Ok((x, y))
    }

    pub fn bounds(&self) -> RegionBounds {
        let u = self.a / self.b;
        RegionBounds { u, v: self.d / self.f + self.e / self.f * u }
    }

    pub fn k(&self) -> Result<f64> {
        let (x, y) = self.equilibrium()?;
        Ok(0.5 * (self.b * x + self.f * y))
    }

    pub fn h_of_p(&self, p: f64) -> Result<HValue> {
        let p = finite_exponent(p)?;
        let base = jfunc::script_f(Exponent::Finite(p)) / self.period - self.k()?;
        // |base|^{2p}: the square is taken before the power
        let h = (base * base / (self.c * self.e)).powf(p);
        Ok(HValue { h, base, sign_ok: base >= 0.0 })
    }

    pub fn g_of_p(&self, p: f64) -> Result<f64> {
        let h = self.h_of_p(p)?.h;
        Ok(self.g_with_h(p, h))
    }

    fn g_with_h(&self, p: f64, h: f64) -> f64 {
        let RegionBounds { u, v } = self.bounds();
        let ratio = self.a / self.c;
        let first = ratio * ratio * v.powf(p - 1.0);
        let second = 4.0 * (self.b / self.c) * u.powf(1.0 - p) * h;
        compensated_sum(&[first, -second])
    }

    pub fn discriminant(&self, p: f64) -> Result<f64> {
        let v = self.bounds().v;
        Ok(v.powf(p - 1.0) * self.g_of_p(p)?)
    }

    pub fn check25(&self, p_star: f64) -> Result<Check25> {
        self.check25_with(p_star, P_LARGE)
    }

    pub fn check25_with(&self, p_star: f64, p_large: f64) -> Result<Check25> {
        if !(p_star > 1.0) || !p_star.is_finite() {
            return Err(Error::InvalidArgument(format!("p* must lie in (1, inf), got {p_star}")));
        }
        let h_one = self.h_of_p(1.0)?;
        let h_star = self.h_of_p(p_star)?;
        let g_one = self.g_with_h(1.0, h_one.h);
        let g_star = self.g_with_h(p_star, h_star.h);
        let g_large = self.g_of_p(p_large)?;
        let asymptotic = self.asymptotic()?;

        let mut diagnostics = Vec::new();
        if !h_one.sign_ok {
            diagnostics.push(format!("sign_ok false at p = 1 (scriptF/T - k = {:e})", h_one.base));
        }
        if !h_star.sign_ok {
            diagnostics.push(format!("sign_ok false at p = {p_star} (scriptF/T - k = {:e})", h_star.base));
        }
        if (g_large > 0.0) != asymptotic.limit_positive {
            diagnostics.push(format!("G({p_large}) sign disagrees with the limit comparison"));
        }
        Ok(Check25 {
            p_star,
            p_large,
            g_one,
            g_star,
            g_large,
            pattern: (g_one > 0.0, g_star < 0.0, g_large > 0.0),
            asymptotic,
            sign_ok_one: h_one.sign_ok,
            sign_ok_star: h_star.sign_ok,
            diagnostics,
        })
    }

    /// Sign of `lim G(p)`. For large `p`, `G ~ (a/c)^2 V^{p-1} - 4 (b/c) r^2 (r^2/U)^{p-1}`,
    /// so the geometric rates `V` and `r^2/U` decide, with the constants as
    /// tie-break.
    pub fn asymptotic(&self) -> Result<AsymptoticCheck> {
        let RegionBounds { u, v } = self.bounds();
        let r = (PI / self.period - self.k()?).abs() / (self.c * self.e).sqrt();
        let rate = r * r / u;
        let limit_positive = if v != rate {
            v > rate
        } else {
            (self.a / self.c).powi(2) > 4.0 * self.b / self.c * r * r
        };
        Ok(AsymptoticCheck { v, r_squared_over_u: rate, limit_positive })
    }

    pub fn example_one_curve(&self, ps: &[f64]) -> Result<ExampleOneCurve> {
        let k = self.k()?;
        let mut curve = ExampleOneCurve { k, h_values: vec![], g_values: vec![], sign_ok: vec![] };
        for &p in ps {
            let h = self.h_of_p(p)?;
            curve.h_values.push((p, h.h));
            curve.g_values.push((p, self.g_with_h(p, h.h)));
            curve.sign_ok.push((p, h.sign_ok));
        }
        Ok(curve)
    }

    /// `y` on the first power boundary: `y^p = V^{p-1} (a - b U^{1-p} x^p) / c`.
    pub fn curve_point(&self, x: f64, p: f64) -> Option<f64> {
        let RegionBounds { u, v } = self.bounds();
        let rest = self.a - self.b * u * (x / u).powf(p);
        if rest < 0.0 {
            return None;
        }
        Some(v * (rest / (self.c * v)).powf(1.0 / p))
    }

    /// Maximum of `Q` over the `w = x^p` whose boundary point lies in `C_p`.
    /// `None` if that set is empty or only touched at a point the scan misses.
    pub fn quadratic_route(&self, p: f64) -> Result<Option<QuadraticRoute>> {
        let p = finite_exponent(p)?;
        let region = RegionSpec::from_system(&self.to_spec()?, Exponent::Finite(p))?;
        let RegionBounds { u, v } = self.bounds();
        if self.a <= 0.0 || u <= 0.0 || v <= 0.0 {
            return Ok(None);
        }
        let x_end = u * (self.a / (self.b * u)).powf(1.0 / p);
        let inside = |x: f64| self.curve_point(x, p).is_some_and(|y| region.contains(x, y));
        let xs: Vec<f64> = (1..=CURVE_SCAN).map(|i| x_end * i as f64 / CURVE_SCAN as f64).collect();
        let Some(first) = xs.iter().position(|&x| inside(x)) else {
            return Ok(None);
        };
        let last = xs.iter().rposition(|&x| inside(x)).unwrap_or(first);
        let lo = if first == 0 { 0.0 } else { bisect(&inside, xs[first - 1], xs[first]) };
        let hi = if last + 1 == xs.len() { xs[last] } else { bisect(&inside, xs[last + 1], xs[last]) };

        let h = self.h_of_p(p)?.h;
        let lin = self.a / self.c * v.powf(p - 1.0);
        let quad = self.b / self.c * (v / u).powf(p - 1.0);
        let q = |w: f64| lin * w - quad * w * w - h;
        let (w_lo, w_hi) = (lo.powf(p), hi.powf(p));
        let w = (lin / (2.0 * quad)).clamp(w_lo, w_hi);
        Ok(Some(QuadraticRoute { w_range: (w_lo, w_hi), max_q: q(w) }))
    }

    /// Direct intertwined test with the `G` value and the sign caveat.
    pub fn diagnose(&self, p: Exponent) -> Result<Diagnosis> {
        let direct = criteria::intertwined_test(&self.to_spec()?, p)?;
        let (g, h) = match p {
            Exponent::Finite(pv) => {
                let h = self.h_of_p(pv)?;
                (Some(self.g_with_h(pv, h.h)), Some(h))
            }
            Exponent::Infinity => (None, None),
        };
        let note = match (g, h) {
            (Some(g), Some(h)) if g < 0.0 && !h.sign_ok && !direct.passed => Some(format!(
                "G({p}) < 0 but the direct test fails: scriptF/T - k = {:e} < 0, so squaring does not preserve the inequality",
                h.base
            )),
            (Some(_), Some(h)) if !h.sign_ok => {
                Some(format!("sign_ok false: scriptF/T - k = {:e}; G does not decide the test", h.base))
            }
            _ => None,
        };
        Ok(Diagnosis { p, g, h, direct, note })
    }
}

fn finite_exponent(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::InvalidArgument(format!("expected a finite exponent >= 1, got {p}")));
    }
    Ok(p)
}

/// Boundary between `outside` (false) and `inside` (true).
fn bisect<F: Fn(f64) -> bool>(pred: &F, mut outside: f64, mut inside: f64) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (outside + inside);
        if mid == outside || mid == inside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}
