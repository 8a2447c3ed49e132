//! The a-priori bounds `U`, `V` and the planar region `C_p` that contains the
//! L^p-averages of every coexistence state.
//!
//! For finite `p`, `C_p` is the set of `x, y > 0` with
//!
//! ```text
//! b_L U^{1-p} x^p + c_L V^{1-p} y^p <= abar <= b_M x + c_M y
//! -e_M x + f_L V^{1-p} y^p         <= dbar <= -e_L U^{1-p} x^p + f_M y
//! ```
//!
//! and `C_inf` is the box `0 < x <= U, 0 < y <= V`.
//!
//! Every constraint is monotone in `y`, so at fixed `x` the admissible `y`
//! form an interval whose ends are known in closed form. The interval
//! length is concave in `x` and the objectives used here are unimodal along
//! the upper end, so all maximizations reduce to one-dimensional scans with
//! golden-section refinement.

use std::fmt;

use crate::coeffs::{ratio_extrema, SystemSpec};
use crate::error::Result;
use crate::jfunc::Exponent;
use crate::optimize;

/// Membership tolerance on constraint slack.
pub const TOL_MEMBER: f64 = 1e-12;
/// Boundary samples satisfy their defining equality to this accuracy.
pub const TOL_BOUNDARY: f64 = 1e-9;
const SCAN_POINTS: usize = 512;
const BISECTIONS: usize = 200;

/// `U = max(a/b)`, `V = max(d/f) + max(e/f) U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    pub u: f64,
    pub v: f64,
}

pub fn compute_uv(spec: &SystemSpec) -> Result<RegionBounds> {
    let tp = spec.period;
    let (_, u) = ratio_extrema(&spec.a, &spec.b, tp)?;
    let (_, d_over_f) = ratio_extrema(&spec.d, &spec.f, tp)?;
    let (_, e_over_f) = ratio_extrema(&spec.e, &spec.f, tp)?;
    Ok(RegionBounds { u, v: d_over_f + e_over_f * u })
}

/// Everything needed to describe `C_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    pub p: Exponent,
    pub abar: f64,
    pub dbar: f64,
    pub b_l: f64,
    pub b_m: f64,
    pub c_l: f64,
    pub c_m: f64,
    pub e_l: f64,
    pub e_m: f64,
    pub f_l: f64,
    pub f_m: f64,
    pub bounds: RegionBounds,
}

/// Result of a maximization over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSup {
    /// Supremum, or 0 for an empty region.
    pub value: f64,
    pub argmax: Option<(f64, f64)>,
}

impl RegionSup {
    const EMPTY: RegionSup = RegionSup { value: 0.0, argmax: None };

    pub fn is_empty(&self) -> bool {
        self.argmax.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveLabel {
    /// `b_L U^{1-p} x^p + c_L V^{1-p} y^p = abar`
    PowerA,
    /// `b_M x + c_M y = abar`
    LinearA,
    /// `-e_M x + f_L V^{1-p} y^p = dbar`
    PowerD,
    /// `-e_L U^{1-p} x^p + f_M y = dbar`
    LinearD,
    /// `x = U`
    BoxX,
    /// `y = V`
    BoxY,
}

impl CurveLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveLabel::PowerA => "power_a",
            CurveLabel::LinearA => "linear_a",
            CurveLabel::PowerD => "power_d",
            CurveLabel::LinearD => "linear_d",
            CurveLabel::BoxX => "box_x",
            CurveLabel::BoxY => "box_y",
        }
    }
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPoint {
    pub label: CurveLabel,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySamples {
    pub points: Vec<LabeledPoint>,
    pub region_empty: bool,
}

impl RegionSpec {
    pub fn from_system(spec: &SystemSpec, p: Exponent) -> Result<Self> {
        let tp = spec.period;
        let b = spec.b.stats(tp);
        let c = spec.c.stats(tp);
        let e = spec.e.stats(tp);
        let f = spec.f.stats(tp);
        Ok(Self {
            p,
            abar: spec.a.mean(),
            dbar: spec.d.mean(),
            b_l: b.min,
            b_m: b.max,
            c_l: c.min,
            c_m: c.max,
            e_l: e.min,
            e_m: e.max,
            f_l: f.min,
            f_m: f.max,
            bounds: compute_uv(spec)?,
        })
    }

    /// Same coefficient data, different exponent.
    pub fn at(&self, p: Exponent) -> Self {
        Self { p, ..self.clone() }
    }

    /// `scale^{1-p} x^p`, written to stay finite for large `p`.
    fn scaled_pow(&self, x: f64, scale: f64) -> f64 {
        match self.p {
            Exponent::Finite(p) if p == 1.0 => x,
            Exponent::Finite(p) => scale * (x / scale).powf(p),
            Exponent::Infinity => unreachable!("box region has no power terms"),
        }
    }

    /// Inverse of `scaled_pow` in its argument.
    fn scaled_root(&self, value: f64, scale: f64) -> f64 {
        match self.p {
            Exponent::Finite(p) if p == 1.0 => value,
            Exponent::Finite(p) => scale * (value / scale).powf(1.0 / p),
            Exponent::Infinity => unreachable!("box region has no power terms"),
        }
    }

    fn degenerate(&self) -> bool {
        let RegionBounds { u, v } = self.bounds;
        match self.p {
            Exponent::Infinity => u <= 0.0 || v <= 0.0,
            Exponent::Finite(p) if p == 1.0 => self.abar <= 0.0,
            Exponent::Finite(_) => self.abar <= 0.0 || u <= 0.0 || v <= 0.0,
        }
    }

    fn member_tol(&self) -> f64 {
        TOL_MEMBER * 1f64.max(self.abar.abs()).max(self.dbar.abs())
    }

    /// Smallest slack over the defining inequalities at `(x, y)`; negative
    /// outside. Positivity of `x` and `y` is not part of the slack.
    pub fn slack(&self, x: f64, y: f64) -> f64 {
        let RegionBounds { u, v } = self.bounds;
        if self.p.is_infinite() {
            return (u - x).min(v - y);
        }
        let pu = self.scaled_pow(x, u);
        let pv = self.scaled_pow(y, v);
        let s1 = self.abar - (self.b_l * pu + self.c_l * pv);
        let s2 = self.b_m * x + self.c_m * y - self.abar;
        let s3 = self.dbar - (-self.e_m * x + self.f_l * pv);
        let s4 = (-self.e_l * pu + self.f_m * y) - self.dbar;
        s1.min(s2).min(s3).min(s4)
    }

    /// Membership in `C_p`; points on the boundary count as inside.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        if !(x > 0.0 && y > 0.0) {
            return false;
        }
        if self.degenerate() {
            return false;
        }
        self.slack(x, y) >= -self.member_tol()
    }

    /// Largest `x` allowed by the first power constraint at `y = 0`.
    pub fn x_envelope(&self) -> f64 {
        match self.p {
            Exponent::Infinity => self.bounds.u,
            _ => self.scaled_root(self.abar / self.b_l, self.bounds.u),
        }
    }

    /// Largest `y` allowed over the region, from the two upper constraints.
    pub fn y_envelope(&self) -> f64 {
        match self.p {
            Exponent::Infinity => self.bounds.v,
            _ => {
                let from_a = self.scaled_root(self.abar / self.c_l, self.bounds.v);
                let from_d = self.upper_d(self.x_envelope()).unwrap_or(0.0);
                from_a.min(from_d).max(0.0)
            }
        }
    }

    fn upper_a(&self, x: f64) -> Option<f64> {
        let rem = self.abar - self.b_l * self.scaled_pow(x, self.bounds.u);
        (rem >= 0.0).then(|| self.scaled_root(rem / self.c_l, self.bounds.v))
    }

    fn upper_d(&self, x: f64) -> Option<f64> {
        let rem = self.dbar + self.e_m * x;
        (rem >= 0.0).then(|| self.scaled_root(rem / self.f_l, self.bounds.v))
    }

    fn lower_a(&self, x: f64) -> f64 {
        (self.abar - self.b_m * x) / self.c_m
    }

    fn lower_d(&self, x: f64) -> f64 {
        (self.dbar + self.e_l * self.scaled_pow(x, self.bounds.u)) / self.f_m
    }

    /// Admissible `(y_lo, y_hi)` at `x` for finite `p`; `y_hi < y_lo`
    /// means the slice is empty.
    fn slice(&self, x: f64) -> Option<(f64, f64)> {
        let hi = self.upper_a(x)?.min(self.upper_d(x)?);
        let lo = self.lower_a(x).max(self.lower_d(x)).max(0.0);
        Some((lo, hi))
    }

    fn slice_width(&self, x: f64) -> f64 {
        self.slice(x).map_or(f64::NEG_INFINITY, |(lo, hi)| hi - lo)
    }

    /// The interval of `x` with a nonempty slice, or `None` when `C_p` is
    /// empty. A region that has collapsed to a single point (constant
    /// coefficients at `p = 1`) yields a zero-length interval.
    pub fn feasible_x(&self) -> Option<(f64, f64)> {
        if self.degenerate() {
            return None;
        }
        if self.p.is_infinite() {
            return Some((0.0, self.bounds.u));
        }
        let lo = (-self.dbar / self.e_m).max(0.0);
        let hi = self.x_envelope();
        if !(lo <= hi) {
            return None;
        }
        let width = |x: f64| self.slice_width(x);
        let (x_star, w_star) = optimize::scan_max(&width, lo, hi, SCAN_POINTS);
        if w_star < -self.member_tol() {
            return None;
        }
        if w_star <= 0.0 {
            return Some((x_star, x_star));
        }
        let left = if width(lo) >= 0.0 { lo } else { bisect_edge(&width, lo, x_star) };
        let right = if width(hi) >= 0.0 { hi } else { bisect_edge(&width, hi, x_star) };
        Some((left, right))
    }

    /// Maximize `objective(x, y)`, nondecreasing in `y`, over the region.
    /// The objective must be unimodal along the upper boundary.
    pub fn sup_along_top<G: Fn(f64, f64) -> f64>(&self, objective: G) -> RegionSup {
        let Some((lo, hi)) = self.feasible_x() else {
            return RegionSup::EMPTY;
        };
        if self.p.is_infinite() {
            let (u, v) = (self.bounds.u, self.bounds.v);
            return RegionSup { value: objective(u, v), argmax: Some((u, v)) };
        }
        let top = |x: f64| self.slice(x).map(|(_, y_hi)| y_hi);
        let value_at = |x: f64| top(x).map_or(f64::NEG_INFINITY, |y| objective(x, y));
        let (x, value) = if hi > lo {
            optimize::scan_max(&value_at, lo, hi, SCAN_POINTS)
        } else {
            (lo, value_at(lo))
        };
        match top(x) {
            Some(y) if value.is_finite() => RegionSup { value, argmax: Some((x, y)) },
            _ => RegionSup::EMPTY,
        }
    }

    /// `sup { x y : (x, y) in C_p }`; exactly `U V` for `p = inf`.
    pub fn sup_xy(&self) -> RegionSup {
        self.sup_along_top(|x, y| x * y)
    }

    /// `sup { wx x + wy y : (x, y) in C_p }` for non-negative weights.
    pub fn sup_linear(&self, wx: f64, wy: f64) -> RegionSup {
        self.sup_along_top(|x, y| wx * x + wy * y)
    }

    /// Residual of the defining equality of `label` at `(x, y)`.
    pub fn curve_residual(&self, label: CurveLabel, x: f64, y: f64) -> f64 {
        let RegionBounds { u, v } = self.bounds;
        match label {
            CurveLabel::BoxX => x - u,
            CurveLabel::BoxY => y - v,
            CurveLabel::PowerA => self.b_l * self.scaled_pow(x, u) + self.c_l * self.scaled_pow(y, v) - self.abar,
            CurveLabel::LinearA => self.b_m * x + self.c_m * y - self.abar,
            CurveLabel::PowerD => -self.e_m * x + self.f_l * self.scaled_pow(y, v) - self.dbar,
            CurveLabel::LinearD => -self.e_l * self.scaled_pow(x, u) + self.f_m * y - self.dbar,
        }
    }

    /// `n` samples along each boundary curve, restricted to the closed
    /// quadrant and to `x` below the envelope.
    pub fn boundary_points(&self, n: usize) -> BoundarySamples {
        let n = n.max(2);
        let region_empty = self.feasible_x().is_none();
        let mut points = Vec::with_capacity(4 * n);
        let RegionBounds { u, v } = self.bounds;
        if self.p.is_infinite() {
            if u > 0.0 && v > 0.0 {
                for i in 0..n {
                    let s = i as f64 / (n - 1) as f64;
                    points.push(LabeledPoint { label: CurveLabel::BoxX, x: u, y: v * s });
                }
                for i in 0..n {
                    let s = i as f64 / (n - 1) as f64;
                    points.push(LabeledPoint { label: CurveLabel::BoxY, x: u * s, y: v });
                }
            }
            return BoundarySamples { points, region_empty };
        }
        if self.degenerate() {
            return BoundarySamples { points, region_empty };
        }
        let x_env = self.x_envelope();
        let linear_d_start = if self.dbar >= 0.0 {
            0.0
        } else {
            self.scaled_root(-self.dbar / self.e_l, u)
        };
        let curves: [(CurveLabel, f64, f64, &dyn Fn(f64) -> Option<f64>); 4] = [
            (CurveLabel::PowerA, 0.0, x_env, &|x| self.upper_a(x)),
            (CurveLabel::LinearA, 0.0, x_env.min(self.abar / self.b_m), &|x| Some(self.lower_a(x))),
            (CurveLabel::PowerD, (-self.dbar / self.e_m).max(0.0), x_env, &|x| self.upper_d(x)),
            (CurveLabel::LinearD, linear_d_start, x_env, &|x| Some(self.lower_d(x))),
        ];
        for (label, lo, hi, curve) in curves {
            if !(lo <= hi) {
                continue;
            }
            for i in 0..n {
                let x = if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                if let Some(y) = curve(x) {
                    if y >= 0.0 && self.curve_residual(label, x, y).abs() <= TOL_BOUNDARY {
                        points.push(LabeledPoint { label, x, y });
                    }
                }
            }
        }
        BoundarySamples { points, region_empty }
    }
}

/// Bisection for the boundary of `{ width >= 0 }` between an infeasible
/// `outside` and a feasible `inside`; returns the feasible end.
fn bisect_edge<F: Fn(f64) -> f64>(width: &F, mut outside: f64, mut inside: f64) -> f64 {
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (outside + inside);
        if mid == outside || mid == inside {
            break;
        }
        if width(mid) >= 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}
