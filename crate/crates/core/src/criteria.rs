//! Uniqueness and stability criteria for coexistence states.
//!
//! Every test compares a left-hand side built from coefficient extrema, the
//! a-priori region `C_p` or coefficient norms against the right-hand side
//! `scriptF(p) = J(q) / 2^{2 - 1/q}`.

use std::f64::consts::PI;
use std::fmt;

use crate::coeffs::{ratio_extrema, SystemSpec};
use crate::error::Result;
use crate::existence::{self, BoundaryClassification, BORDERLINE};
use crate::jfunc::{self, Exponent};
use crate::region::RegionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestName {
    /// `abar > 0` and `-(e/b)_L < dbar/abar < (f/c)_L`.
    Condition18,
    /// `(b/e)_L > (c/f)_M`.
    Condition19,
    /// Norm-envelope test with independent bounds on both components.
    UnifiedLp,
    /// Maximizer over `C_p` coupled with the maximizer over `C_1`.
    Intertwined,
    /// Both terms maximized over `C_p`.
    WeakIntertwined,
    /// Joint maximization over `C_1` against 2.
    L1Condition,
    /// Box corner `(U, V)` against pi.
    LInfCondition,
}

impl TestName {
    pub fn as_str(&self) -> &'static str {
        match self {
            TestName::Condition18 => "condition18",
            TestName::Condition19 => "condition19",
            TestName::UnifiedLp => "unified_lp",
            TestName::Intertwined => "intertwined",
            TestName::WeakIntertwined => "weak_intertwined",
            TestName::L1Condition => "l1_condition",
            TestName::LInfCondition => "linf_condition",
        }
    }
}

impl fmt::Display for TestName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One criterion evaluation. `passed` is `margin >= 0` for non-strict
/// tests and `margin > 0` for strict ones.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub name: TestName,
    pub p: Exponent,
    pub q: Exponent,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub strict: bool,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

impl TestResult {
    fn new(name: TestName, p: Exponent, lhs: f64, rhs: f64, margin: f64, strict: bool) -> Self {
        let passed = if strict { margin > 0.0 } else { margin >= 0.0 };
        let mut diagnostics = Vec::new();
        if margin.abs() <= BORDERLINE * 1f64.max(rhs.abs()) {
            diagnostics.push("borderline".to_string());
        }
        Self { name, p, q: p.conjugate(), lhs, rhs, margin, strict, passed, diagnostics }
    }

    fn compare(name: TestName, p: Exponent, lhs: f64, rhs: f64) -> Self {
        Self::new(name, p, lhs, rhs, rhs - lhs, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    UniqueAsymptoticallyStable,
    GloballyStableVia1819,
    Inconclusive,
    NoCoexistence,
}

impl Conclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Conclusion::UniqueAsymptoticallyStable => "unique_asymptotically_stable",
            Conclusion::GloballyStableVia1819 => "globally_stable_via_18_19",
            Conclusion::Inconclusive => "inconclusive",
            Conclusion::NoCoexistence => "no_coexistence",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub classification: BoundaryClassification,
    /// Whether the mean-ratio and the coefficient-ratio conditions hold.
    pub uniqueness_1819: (bool, bool),
    /// Exponent-free tests: both ratio conditions, the L1 and the L-infinity conditions.
    pub conditions: Vec<TestResult>,
    /// Per-exponent tests in grid order.
    pub results: Vec<TestResult>,
    /// Exponent of the largest per-exponent margin.
    pub best_p: Option<Exponent>,
    pub conclusion: Conclusion,
}

/// Coefficient data shared by all tests of one system.
struct Context<'a> {
    spec: &'a SystemSpec,
    base: RegionSpec,
    coexists: bool,
}

impl<'a> Context<'a> {
    fn new(spec: &'a SystemSpec) -> Result<Self> {
        let coexists = existence::coexistence_exists(spec).0;
        Self::with_existence(spec, coexists)
    }

    fn with_existence(spec: &'a SystemSpec, coexists: bool) -> Result<Self> {
        let base = RegionSpec::from_system(spec, Exponent::Finite(1.0))?;
        Ok(Self { spec, base, coexists })
    }

    fn flag_vacuous(&self, result: &mut TestResult) {
        if !self.coexists {
            result.diagnostics.push("vacuous: no coexistence state".into());
        }
    }

    fn unified(&self, p: Exponent) -> TestResult {
        let spec = self.spec;
        let r = &self.base;
        let tp = spec.period;
        let q = p.conjugate();
        let alpha = |p: Exponent| spec.a.lp_norm(tp, p) / r.b_l;
        let beta = |p: Exponent| spec.d.lp_norm(tp, p) / r.f_l + r.e_m / r.f_l * alpha(p);
        let one = Exponent::Finite(1.0);
        let t_factor = tp.powf(q.recip());
        let lhs = t_factor * (r.c_m * r.e_m * alpha(p) * beta(p)).sqrt()
            + 0.5 * (r.b_m * alpha(one) + r.f_m * beta(one));
        let mut res = TestResult::compare(TestName::UnifiedLp, p, lhs, jfunc::script_f(p));
        self.flag_vacuous(&mut res);
        res
    }

    fn intertwined(&self, p: Exponent) -> TestResult {
        let r = &self.base;
        let region = r.at(p);
        let sup_xy = region.sup_xy();
        let sup_lin = r.sup_linear(r.b_m, r.f_m);
        let lhs = self.spec.period * ((r.c_m * r.e_m * sup_xy.value).sqrt() + 0.5 * sup_lin.value);
        let mut res = TestResult::compare(TestName::Intertwined, p, lhs, jfunc::script_f(p));
        if sup_xy.is_empty() || sup_lin.is_empty() {
            res.diagnostics.push("empty region".into());
        }
        self.flag_shortcut(&mut res);
        self.flag_vacuous(&mut res);
        res
    }

    fn weak(&self, p: Exponent) -> TestResult {
        let r = &self.base;
        let region = r.at(p);
        let sup_xy = region.sup_xy();
        let sup_lin = region.sup_linear(r.b_m, r.f_m);
        let lhs = self.spec.period * ((r.c_m * r.e_m * sup_xy.value).sqrt() + 0.5 * sup_lin.value);
        let mut res = TestResult::compare(TestName::WeakIntertwined, p, lhs, jfunc::script_f(p));
        if sup_xy.is_empty() {
            res.diagnostics.push("empty region".into());
        }
        self.flag_shortcut(&mut res);
        self.flag_vacuous(&mut res);
        res
    }

    fn l1(&self) -> TestResult {
        let r = &self.base;
        let (cm, em, bm, fm) = (r.c_m, r.e_m, r.b_m, r.f_m);
        let sup = r.sup_along_top(|x, y| (cm * em * x * y).sqrt() + 0.5 * (bm * x + fm * y));
        let lhs = self.spec.period * sup.value;
        let mut res = TestResult::compare(TestName::L1Condition, Exponent::Finite(1.0), lhs, 2.0);
        if sup.is_empty() {
            res.diagnostics.push("empty region".into());
        }
        self.flag_vacuous(&mut res);
        res
    }

    fn linf(&self) -> TestResult {
        let r = &self.base;
        let (u, v) = (r.bounds.u, r.bounds.v);
        let lhs = self.spec.period * ((r.c_m * r.e_m * u * v).sqrt() + 0.5 * (r.b_m * u + r.f_m * v));
        let mut res = TestResult::compare(TestName::LInfCondition, Exponent::Infinity, lhs, PI);
        self.flag_vacuous(&mut res);
        res
    }

    fn flag_shortcut(&self, res: &mut TestResult) {
        if jfunc::j_detailed(res.q).shortcut {
            res.diagnostics.push("large q evaluated as q = inf".into());
        }
    }
}

pub fn test_condition18(spec: &SystemSpec) -> Result<TestResult> {
    let tp = spec.period;
    let abar = spec.a.mean();
    let dbar = spec.d.mean();
    let p = Exponent::Finite(1.0);
    let (e_over_b, _) = ratio_extrema(&spec.e, &spec.b, tp)?;
    let (f_over_c, _) = ratio_extrema(&spec.f, &spec.c, tp)?;
    if abar <= 0.0 {
        let mut res = TestResult::new(TestName::Condition18, p, f64::NAN, f_over_c, abar, true);
        res.diagnostics.push(format!("requires abar > 0, got {abar}"));
        return Ok(res);
    }
    let ratio = dbar / abar;
    let margin = (ratio + e_over_b).min(f_over_c - ratio);
    let mut res = TestResult::new(TestName::Condition18, p, ratio, f_over_c, margin, true);
    res.diagnostics.push(format!("lower bound -(e/b)_L = {}", -e_over_b));
    Ok(res)
}

pub fn test_condition19(spec: &SystemSpec) -> Result<TestResult> {
    let tp = spec.period;
    let (b_over_e, _) = ratio_extrema(&spec.b, &spec.e, tp)?;
    let (_, c_over_f) = ratio_extrema(&spec.c, &spec.f, tp)?;
    Ok(TestResult::new(
        TestName::Condition19,
        Exponent::Finite(1.0),
        c_over_f,
        b_over_e,
        b_over_e - c_over_f,
        true,
    ))
}

/// `T^{1/q} sqrt(c_M e_M alpha_p beta_p) + (b_M alpha_1 + f_M beta_1) / 2 <= scriptF(p)`
/// with `alpha_p = |a|_p / b_L` and `beta_p = |d|_p / f_L + (e_M / f_L) alpha_p`.
pub fn unified_lp_test(spec: &SystemSpec, p: Exponent) -> Result<TestResult> {
    Ok(Context::new(spec)?.unified(p))
}

/// `T (sqrt(c_M e_M sup_{C_p} xy) + sup_{C_1} (b_M x + f_M y) / 2) <= scriptF(p)`.
pub fn intertwined_test(spec: &SystemSpec, p: Exponent) -> Result<TestResult> {
    Ok(Context::new(spec)?.intertwined(p))
}

/// As [`intertwined_test`] with the linear term also maximized over `C_p`.
pub fn weak_intertwined_test(spec: &SystemSpec, p: Exponent) -> Result<TestResult> {
    Ok(Context::new(spec)?.weak(p))
}

/// `T sup_{C_1} (sqrt(c_M e_M x y) + (b_M x + f_M y) / 2) <= 2`.
pub fn l1_condition(spec: &SystemSpec) -> Result<TestResult> {
    Ok(Context::new(spec)?.l1())
}

/// `T (sqrt(c_M e_M U V) + (b_M U + f_M V) / 2) <= pi`.
pub fn linf_condition(spec: &SystemSpec) -> Result<TestResult> {
    Ok(Context::new(spec)?.linf())
}

/// Run every test over the exponent grid and draw a conclusion.
pub fn scan_p(spec: &SystemSpec, grid: &[Exponent]) -> Result<StabilityReport> {
    let classification = existence::classify_boundary(spec);
    let ctx = Context::with_existence(spec, classification.coexistence_exists)?;

    let c18 = test_condition18(spec)?;
    let c19 = test_condition19(spec)?;
    let uniqueness_1819 = (c18.passed, c19.passed);
    let conditions = vec![c18, c19, ctx.l1(), ctx.linf()];

    let mut results = Vec::with_capacity(3 * grid.len());
    for &p in grid {
        results.push(ctx.unified(p));
        results.push(ctx.intertwined(p));
        results.push(ctx.weak(p));
    }

    let best_p = results
        .iter()
        .fold(None::<&TestResult>, |best, r| match best {
            Some(b) if b.margin >= r.margin => Some(b),
            _ => Some(r),
        })
        .map(|r| r.p);

    let any_pass = results.iter().chain(&conditions[2..]).any(|r| r.passed);
    let conclusion = if !classification.coexistence_exists {
        Conclusion::NoCoexistence
    } else if uniqueness_1819.0 && uniqueness_1819.1 {
        Conclusion::GloballyStableVia1819
    } else if any_pass {
        Conclusion::UniqueAsymptoticallyStable
    } else {
        Conclusion::Inconclusive
    };

    Ok(StabilityReport { classification, uniqueness_1819, conditions, results, best_p, conclusion })
}
