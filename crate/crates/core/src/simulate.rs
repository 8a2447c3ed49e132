//! Numerical verification: integrate the system, locate coexistence states
//! as fixed points of the period map, and compute Floquet multipliers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::SystemSpec;
use crate::error::{Error, Result};
use crate::interp::HermiteSeries;
use crate::jfunc::Exponent;
use crate::ode::{self, OdeOptions, Trajectory};
use crate::region::{compute_uv, RegionSpec};

/// Fixed-point residual accepted by Newton.
pub const TOL_NEWTON: f64 = 1e-10;
pub const TOL_PERIODIC: f64 = 1e-9;
/// Margin from the unit circle for strict stability.
pub const TOL_FLOQUET: f64 = 1e-8;
/// Slack allowed by the a-priori bound checks.
pub const TOL_PREDICTION: f64 = 1e-6;
/// Starting points closer than this are one orbit.
pub const TOL_DEDUP: f64 = 1e-6;
pub const MAX_NEWTON: usize = 50;
pub const ORBIT_SAMPLES: usize = 256;
pub const CHECK_EXPONENTS: [Exponent; 6] = [
    Exponent::Finite(1.0),
    Exponent::Finite(1.5),
    Exponent::Finite(2.0),
    Exponent::Finite(4.0),
    Exponent::Finite(10.0),
    Exponent::Infinity,
];

/// A T-periodic planar vector field.
pub trait PlanarField: Sync {
    fn period(&self) -> f64;
    fn rhs(&self, t: f64, x: [f64; 2]) -> [f64; 2];
    fn jacobian(&self, t: f64, x: [f64; 2]) -> [[f64; 2]; 2];
}

impl PlanarField for SystemSpec {
    fn period(&self) -> f64 {
        self.period
    }

    fn rhs(&self, t: f64, x: [f64; 2]) -> [f64; 2] {
        SystemSpec::rhs(self, t, x[0], x[1])
    }

    fn jacobian(&self, t: f64, x: [f64; 2]) -> [[f64; 2]; 2] {
        SystemSpec::jacobian(self, t, x[0], x[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub ode: OdeOptions,
    pub newton_tol: f64,
    pub max_newton: usize,
    pub samples: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { ode: OdeOptions::default(), newton_tol: TOL_NEWTON, max_newton: MAX_NEWTON, samples: ORBIT_SAMPLES }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit2D {
    pub period: f64,
    pub start: [f64; 2],
    pub u: HermiteSeries,
    pub v: HermiteSeries,
    pub periodicity_residual: f64,
    pub newton_residual: f64,
    pub newton_iterations: usize,
}

impl PeriodicOrbit2D {
    pub fn samples(&self) -> Vec<(f64, f64, f64)> {
        let (u, v) = (self.u.values(), self.v.values());
        (0..u.len()).map(|i| (self.u.time(i), u[i], v[i])).collect()
    }

    pub fn eval(&self, t: f64) -> [f64; 2] {
        [self.u.eval(t), self.v.eval(t)]
    }

    pub fn max(&self) -> (f64, f64) {
        (self.u.max(), self.v.max())
    }

    pub fn min(&self) -> (f64, f64) {
        (self.u.min(), self.v.min())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloquetClass {
    AsymptoticallyStable,
    LinearlyStableNonstrict,
    Unstable,
}

impl FloquetClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            FloquetClass::AsymptoticallyStable => "asymptotically_stable",
            FloquetClass::LinearlyStableNonstrict => "linearly_stable_nonstrict",
            FloquetClass::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetData {
    pub monodromy: [[f64; 2]; 2],
    pub multipliers: [Complex64; 2],
    pub classification: FloquetClass,
    /// `exp(int_0^T tr J)` along the orbit.
    pub liouville: f64,
}

impl FloquetData {
    pub fn determinant(&self) -> f64 {
        let m = &self.monodromy;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn liouville_error(&self) -> f64 {
        (self.determinant() - self.liouville).abs() / self.liouville.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub slack: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct MultiStart {
    pub guesses: Vec<[f64; 2]>,
    /// Distinct orbits in lexicographic order of their starting points.
    pub orbits: Vec<PeriodicOrbit2D>,
    pub converged: usize,
    pub failures: Vec<String>,
}

fn check_positive(x: [f64; 2]) -> Result<()> {
    if x[0] > 0.0 && x[1] > 0.0 && x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonPositive { u: x[0], v: x[1] })
    }
}

fn norm_inf(x: [f64; 2]) -> f64 {
    x[0].abs().max(x[1].abs())
}

/// Residual relative to the state for components below one, so that
/// iterates sliding towards an axis do not pass as fixed points.
fn scaled_residual(x: [f64; 2], r: [f64; 2]) -> f64 {
    (r[0] / x[0].min(1.0)).abs().max((r[1] / x[1].min(1.0)).abs())
}

/// Solve from `state0` at `t0` to `t1` for a positive initial state.
pub fn integrate<F: PlanarField>(field: &F, state0: [f64; 2], t0: f64, t1: f64, opts: &OdeOptions) -> Result<Trajectory<2>> {
    check_positive(state0)?;
    let mut o = *opts;
    o.min_step_factor = opts.min_step_factor * field.period() / (t1 - t0).max(f64::MIN_POSITIVE);
    ode::integrate(|t, x: &[f64; 2]| field.rhs(t, *x), state0, t0, t1, &o)
}

/// Solution at `T` from `state0` at time zero.
pub fn poincare_map<F: PlanarField>(field: &F, state0: [f64; 2], opts: &OdeOptions) -> Result<[f64; 2]> {
    Ok(integrate(field, state0, 0.0, field.period(), opts)?.last())
}

/// Newton iteration on `P(x) - x` with a forward-difference Jacobian,
/// carried out in `z = ln x`; returns the fixed point, residual and
/// iteration count.
///
/// In log coordinates the states on the axes sit at minus infinity, so
/// iterates are not drawn towards them, and positivity is automatic.
pub fn newton_fixed_point<F: PlanarField>(field: &F, guess: [f64; 2], opts: &SimOptions) -> Result<([f64; 2], f64, usize)> {
    check_positive(guess)?;
    // log residual ln P(e^z) - z
    let eval = |z: [f64; 2]| -> Result<([f64; 2], [f64; 2])> {
        let x = [z[0].exp(), z[1].exp()];
        check_positive(x)?;
        let px = poincare_map(field, x, &opts.ode)?;
        check_positive(px)?;
        Ok((x, [px[0].ln() - z[0], px[1].ln() - z[1]]))
    };
    let converged = |x: [f64; 2], g: [f64; 2]| {
        // P(x) - x recovered from the log residual
        let r = [x[0] * g[0].exp_m1(), x[1] * g[1].exp_m1()];
        scaled_residual(x, r)
    };
    let mut z = [guess[0].ln(), guess[1].ln()];
    let (mut x, mut g) = eval(z)?;
    let mut res = converged(x, g);
    for it in 0..opts.max_newton {
        if res <= opts.newton_tol {
            return Ok((x, res, it));
        }
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let h = 1e-7 * (1.0 + z[j].abs());
            let mut zh = z;
            zh[j] += h;
            let (_, gh) = eval(zh)?;
            for i in 0..2 {
                jac[i][j] = (gh[i] - g[i]) / h;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularSystem { det });
        }
        let dz = [
            -(jac[1][1] * g[0] - jac[0][1] * g[1]) / det,
            -(-jac[1][0] * g[0] + jac[0][0] * g[1]) / det,
        ];
        let merit = norm_inf(g);
        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda >= 1.0 / 64.0 {
            let zn = [z[0] + lambda * dz[0], z[1] + lambda * dz[1]];
            if let Ok((xn, gn)) = eval(zn) {
                if norm_inf(gn) < merit {
                    accepted = Some((zn, xn, gn));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let (zn, xn, gn) = match accepted {
            Some(step) => step,
            None => {
                // one period of the flow
                let zn = [z[0] + g[0], z[1] + g[1]];
                let (xn, gn) = eval(zn)?;
                (zn, xn, gn)
            }
        };
        z = zn;
        x = xn;
        g = gn;
        res = converged(x, g);
    }
    if res <= opts.newton_tol {
        return Ok((x, res, opts.max_newton));
    }
    Err(Error::NoConvergence { iterations: opts.max_newton, residual: res })
}

/// Sample the orbit through `start` on a uniform grid, integrating between
/// consecutive grid points.
pub fn sample_orbit<F: PlanarField>(field: &F, start: [f64; 2], opts: &SimOptions) -> Result<(HermiteSeries, HermiteSeries, f64)> {
    let tp = field.period();
    let n = opts.samples.max(2);
    let mut us = Vec::with_capacity(n + 1);
    let mut vs = Vec::with_capacity(n + 1);
    let mut dus = Vec::with_capacity(n + 1);
    let mut dvs = Vec::with_capacity(n + 1);
    let mut x = start;
    for i in 0..=n {
        let t = tp * i as f64 / n as f64;
        if i > 0 {
            let t_prev = tp * (i - 1) as f64 / n as f64;
            x = integrate(field, x, t_prev, t, &opts.ode)?.last();
            check_positive(x)?;
        }
        let d = field.rhs(t, x);
        us.push(x[0]);
        vs.push(x[1]);
        dus.push(d[0]);
        dvs.push(d[1]);
    }
    let residual = norm_inf([x[0] - start[0], x[1] - start[1]]);
    Ok((HermiteSeries::new(tp, us, dus), HermiteSeries::new(tp, vs, dvs), residual))
}

/// Locate a periodic orbit of a general planar field from `guess`.
pub fn find_periodic_orbit<F: PlanarField>(field: &F, guess: [f64; 2], opts: &SimOptions) -> Result<PeriodicOrbit2D> {
    let (start, newton_residual, newton_iterations) = newton_fixed_point(field, guess, opts)?;
    let (u, v, periodicity_residual) = sample_orbit(field, start, opts)?;
    Ok(PeriodicOrbit2D { period: field.period(), start, u, v, periodicity_residual, newton_residual, newton_iterations })
}

/// Coexistence state of the system reached by Newton from `guess`.
pub fn find_coexistence(spec: &SystemSpec, guess: [f64; 2]) -> Result<PeriodicOrbit2D> {
    find_periodic_orbit(spec, guess, &SimOptions::default())
}

/// Monodromy matrix and multipliers along the orbit.
pub fn floquet<F: PlanarField>(field: &F, orbit: &PeriodicOrbit2D, opts: &OdeOptions) -> Result<FloquetData> {
    let tp = field.period();
    let y0 = [orbit.start[0], orbit.start[1], 1.0, 0.0, 0.0, 1.0];
    let rhs = |t: f64, y: &[f64; 6]| {
        let x = [y[0], y[1]];
        let f = field.rhs(t, x);
        let j = field.jacobian(t, x);
        // Phi = [[y2, y3], [y4, y5]], Phi' = J Phi
        [
            f[0],
            f[1],
            j[0][0] * y[2] + j[0][1] * y[4],
            j[0][0] * y[3] + j[0][1] * y[5],
            j[1][0] * y[2] + j[1][1] * y[4],
            j[1][0] * y[3] + j[1][1] * y[5],
        ]
    };
    let end = ode::integrate(rhs, y0, 0.0, tp, opts)?.last();
    let monodromy = [[end[2], end[3]], [end[4], end[5]]];
    let multipliers = eigenvalues(&monodromy);
    let modulus = multipliers[0].norm().max(multipliers[1].norm());
    let classification = if modulus < 1.0 - TOL_FLOQUET {
        FloquetClass::AsymptoticallyStable
    } else if modulus <= 1.0 + TOL_FLOQUET {
        FloquetClass::LinearlyStableNonstrict
    } else {
        FloquetClass::Unstable
    };
    let trace = orbit.u.integrate(|t| {
        let j = field.jacobian(t, orbit.eval(t));
        j[0][0] + j[1][1]
    });
    Ok(FloquetData { monodromy, multipliers, classification, liouville: trace.exp() })
}

fn eigenvalues(m: &[[f64; 2]; 2]) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let half = 0.5 * tr;
    let disc = half * half - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // avoid cancellation in the smaller root
        let big = if half >= 0.0 { half + s } else { half - s };
        let small = if big != 0.0 { det / big } else { 0.0 };
        [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    } else {
        let s = (-disc).sqrt();
        [Complex64::new(half, s), Complex64::new(half, -s)]
    }
}

/// `(ubar_p, vbar_p)`; the maximum for `p = inf`.
pub fn orbit_averages(orbit: &PeriodicOrbit2D, p: Exponent) -> (f64, f64) {
    match p {
        Exponent::Infinity => orbit.max(),
        Exponent::Finite(p) => {
            let tp = orbit.period;
            let avg = |s: &HermiteSeries| (s.integrate(|t| s.eval(t).abs().powf(p)) / tp).powf(1.0 / p);
            (avg(&orbit.u), avg(&orbit.v))
        }
    }
}

/// Check the a-priori bounds `max u <= U`, `max v <= V` and membership of
/// the averages in `C_p`.
pub fn verify_predictions(spec: &SystemSpec, orbit: &PeriodicOrbit2D) -> Result<VerificationReport> {
    let bounds = compute_uv(spec)?;
    let (umax, vmax) = orbit.max();
    let mut checks = vec![
        Check { name: "max_u_le_U".into(), slack: bounds.u - umax, passed: bounds.u - umax >= -TOL_PREDICTION },
        Check { name: "max_v_le_V".into(), slack: bounds.v - vmax, passed: bounds.v - vmax >= -TOL_PREDICTION },
    ];
    let base = RegionSpec::from_system(spec, Exponent::Finite(1.0))?;
    for p in CHECK_EXPONENTS {
        let (x, y) = orbit_averages(orbit, p);
        let slack = base.at(p).slack(x, y);
        checks.push(Check {
            name: format!("averages_in_C_{p}"),
            slack,
            passed: x > 0.0 && y > 0.0 && slack >= -TOL_PREDICTION,
        });
    }
    Ok(VerificationReport { checks })
}

/// Newton from `count` seeded guesses in `(0, U] x (0, V]`.
pub fn multistart(spec: &SystemSpec, count: usize, seed: u64) -> Result<MultiStart> {
    let bounds = compute_uv(spec)?;
    if !(bounds.u > 0.0 && bounds.v > 0.0) {
        return Err(Error::InvalidArgument(format!("empty search box U = {}, V = {}", bounds.u, bounds.v)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let guesses: Vec<[f64; 2]> = (0..count)
        .map(|_| [bounds.u * (1.0 - rng.gen::<f64>()), bounds.v * (1.0 - rng.gen::<f64>())])
        .collect();

    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(count.max(1));
    let chunk = count.div_ceil(threads).max(1);
    let results: Vec<Result<PeriodicOrbit2D>> = std::thread::scope(|scope| {
        let handles: Vec<_> = guesses
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&g| find_coexistence(spec, g)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("multistart worker panicked")).collect()
    });

    let mut orbits: Vec<PeriodicOrbit2D> = Vec::new();
    let mut failures = Vec::new();
    let mut converged = 0;
    for (g, r) in guesses.iter().zip(results) {
        match r {
            Ok(orbit) => {
                converged += 1;
                if !orbits.iter().any(|o| norm_inf([o.start[0] - orbit.start[0], o.start[1] - orbit.start[1]]) < TOL_DEDUP) {
                    orbits.push(orbit);
                }
            }
            Err(e) => failures.push(format!("guess ({:.6}, {:.6}): {e}", g[0], g[1])),
        }
    }
    orbits.sort_by(|a, b| a.start[0].total_cmp(&b.start[0]).then(a.start[1].total_cmp(&b.start[1])));
    Ok(MultiStart { guesses, orbits, converged, failures })
}
