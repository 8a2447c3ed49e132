//! Command dispatch, plain-text reports and CSV output.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::coeffs::SystemSpec;
use crate::config;
use crate::constant_case::ConstantSystem;
use crate::criteria::{self, Conclusion, TestResult};
use crate::error::{Error, Result};
use crate::existence;
use crate::jfunc::{self, Exponent};
use crate::region::{compute_uv, RegionSpec};
use crate::simulate::{self, FloquetClass};

pub const EXIT_STABLE: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_NO_COEXISTENCE: i32 = 3;

pub const BOUNDARY_SAMPLES: usize = 200;
pub const JFUNC_GRID: usize = 40;
pub const P_STAR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Analyze,
    Region,
    Jfunc,
    Scan,
    Simulate,
    Example1,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "lvstab", about = "Stability analysis for periodic predator-prey systems")]
pub struct RunConfig {
    /// System description file.
    #[arg(long = "config")]
    pub system_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "analyze")]
    pub command: Command,
    /// Comma-separated exponents, `inf` allowed.
    #[arg(long = "p", value_parser = parse_p_list)]
    pub p_list: Option<PList>,
    /// Directory for CSV files.
    #[arg(long = "out", default_value = ".")]
    pub output_dir: PathBuf,
    /// Write CSV files.
    #[arg(long = "csv")]
    pub emit_csv: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PList(pub Vec<Exponent>);

pub fn parse_p_list(s: &str) -> Result<PList> {
    let ps = s.split(',').map(|t| t.parse::<Exponent>()).collect::<Result<Vec<_>>>()?;
    if ps.is_empty() {
        return Err(Error::InvalidArgument("empty exponent list".into()));
    }
    Ok(PList(ps))
}

pub fn default_grid() -> Vec<Exponent> {
    [1.0, 1.5, 2.0, 3.0, 4.0, 10.0]
        .into_iter()
        .map(Exponent::Finite)
        .chain([Exponent::Infinity])
        .collect()
}

/// `p = 1 / (1 - s)` for `s` evenly spaced in `[0, 1)`, then `inf`.
pub fn jfunc_grid(n: usize) -> Vec<Exponent> {
    (0..n)
        .map(|i| Exponent::Finite(1.0 / (1.0 - i as f64 / n as f64)))
        .chain([Exponent::Infinity])
        .collect()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl RunConfig {
    fn grid(&self) -> Vec<Exponent> {
        self.p_list.as_ref().map_or_else(default_grid, |l| l.0.clone())
    }

    fn system(&self) -> Result<SystemSpec> {
        let path = self
            .system_file
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("--config is required for this command".into()))?;
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
        config::parse_config(&text)
    }

    fn write_csv(&self, name: &str, body: &str) -> Result<PathBuf> {
        let dir = &self.output_dir;
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
        let path = dir.join(name);
        fs::write(&path, body).map_err(|source| Error::Io { path: path.clone(), source })?;
        Ok(path)
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io { path: PathBuf::from("<stdout>"), source: e }
}

/// Execute the configured command and return the process exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    match cfg.command {
        Command::Analyze => analyze(cfg, out, true),
        Command::Scan => analyze(cfg, out, false),
        Command::Region => region(cfg, out),
        Command::Jfunc => jfunc_table(cfg, out),
        Command::Simulate => simulate_cmd(cfg, out),
        Command::Example1 => example1(cfg, out),
    }
}

fn exit_code(c: Conclusion) -> i32 {
    match c {
        Conclusion::GloballyStableVia1819 | Conclusion::UniqueAsymptoticallyStable => EXIT_STABLE,
        Conclusion::Inconclusive => EXIT_INCONCLUSIVE,
        Conclusion::NoCoexistence => EXIT_NO_COEXISTENCE,
    }
}

fn write_result(out: &mut dyn Write, r: &TestResult) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<17} p={:<5} lhs={} rhs={} margin={} {}{}",
        r.name.as_str(),
        r.p.to_string(),
        num(r.lhs),
        num(r.rhs),
        num(r.margin),
        if r.passed { "pass" } else { "fail" },
        if r.diagnostics.is_empty() { String::new() } else { format!(" [{}]", r.diagnostics.join("; ")) },
    )
}

fn analyze(cfg: &RunConfig, out: &mut dyn Write, full: bool) -> Result<i32> {
    let spec = cfg.system()?;
    let grid = cfg.grid();
    let report = criteria::scan_p(&spec, &grid)?;
    let c = &report.classification;
    if full {
        let bounds = compute_uv(&spec)?;
        writeln!(out, "period T = {}", num(spec.period)).map_err(io)?;
        writeln!(out, "lambda = {}  mu = {}", num(c.lambda), num(c.mu)).map_err(io)?;
        writeln!(out, "U = {}  V = {}", num(bounds.u), num(bounds.v)).map_err(io)?;
        writeln!(out, "trivial state stable: {}", c.trivial_stable).map_err(io)?;
        let opt = |b: Option<bool>| b.map_or("absent".to_string(), |b| format!("stable={b}"));
        writeln!(out, "prey-only state: {}", opt(c.prey_only_stable)).map_err(io)?;
        writeln!(out, "predator-only state: {}", opt(c.predator_only_stable)).map_err(io)?;
        writeln!(
            out,
            "coexistence exists: {} (margins {}, {})",
            c.coexistence_exists,
            num(c.margins.0),
            num(c.margins.1)
        )
        .map_err(io)?;
        for d in &c.diagnostics {
            writeln!(out, "note: {d}").map_err(io)?;
        }
        for r in &report.conditions {
            write_result(out, r).map_err(io)?;
        }
    }
    for r in &report.results {
        write_result(out, r).map_err(io)?;
    }
    if let Some(p) = report.best_p {
        writeln!(out, "best p: {p}").map_err(io)?;
    }
    writeln!(out, "conclusion: {}", report.conclusion.as_str()).map_err(io)?;

    if cfg.emit_csv {
        let mut body = String::from("test,p,lhs,rhs,margin,passed\n");
        for r in report.conditions.iter().chain(&report.results) {
            body += &format!("{},{},{},{},{},{}\n", r.name, r.p, num(r.lhs), num(r.rhs), num(r.margin), r.passed);
        }
        let path = cfg.write_csv(if full { "analyze.csv" } else { "scan.csv" }, &body)?;
        writeln!(out, "wrote {}", path.display()).map_err(io)?;
    }
    Ok(exit_code(report.conclusion))
}

fn region(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let spec = cfg.system()?;
    let base = RegionSpec::from_system(&spec, Exponent::Finite(1.0))?;
    writeln!(out, "U = {}  V = {}", num(base.bounds.u), num(base.bounds.v)).map_err(io)?;
    for p in cfg.grid() {
        let r = base.at(p);
        let sup = r.sup_xy();
        let lin = r.sup_linear(r.b_m, r.f_m);
        match r.feasible_x() {
            None => writeln!(out, "p={p}: empty region").map_err(io)?,
            Some((lo, hi)) => writeln!(
                out,
                "p={p}: x in [{}, {}]  sup xy = {}  sup (b_M x + f_M y) = {}",
                num(lo),
                num(hi),
                num(sup.value),
                num(lin.value)
            )
            .map_err(io)?,
        }
        if cfg.emit_csv {
            let samples = r.boundary_points(BOUNDARY_SAMPLES);
            let mut body = String::from("curve_label,x,y\n");
            for pt in &samples.points {
                body += &format!("{},{},{}\n", pt.label, num(pt.x), num(pt.y));
            }
            let path = cfg.write_csv(&format!("region_p{p}.csv"), &body)?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
        }
    }
    Ok(EXIT_STABLE)
}

fn jfunc_table(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let grid = cfg.p_list.as_ref().map_or_else(|| jfunc_grid(JFUNC_GRID), |l| l.0.clone());
    let mut body = String::from("p,scriptF\n");
    for p in grid {
        let line = format!("{},{}", p, num(jfunc::script_f(p)));
        writeln!(out, "{line}").map_err(io)?;
        body += &line;
        body.push('\n');
    }
    if cfg.emit_csv {
        let path = cfg.write_csv("jfunc.csv", &body)?;
        writeln!(out, "wrote {}", path.display()).map_err(io)?;
    }
    Ok(EXIT_STABLE)
}

/// Mean-coefficient equilibrium when positive, else the centre of the box.
fn initial_guess(spec: &SystemSpec) -> Result<[f64; 2]> {
    let (a, b, c) = (spec.a.mean(), spec.b.mean(), spec.c.mean());
    let (d, e, f) = (spec.d.mean(), spec.e.mean(), spec.f.mean());
    let det = b * f + c * e;
    let x = (a * f - c * d) / det;
    let y = (a * e + b * d) / det;
    if x > 0.0 && y > 0.0 {
        return Ok([x, y]);
    }
    let bounds = compute_uv(spec)?;
    Ok([0.5 * bounds.u, 0.5 * bounds.v])
}

fn simulate_cmd(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let spec = cfg.system()?;
    let (exists, _) = existence::coexistence_exists(&spec);
    if !exists {
        writeln!(out, "no coexistence state").map_err(io)?;
        return Ok(EXIT_NO_COEXISTENCE);
    }
    let orbit = simulate::find_coexistence(&spec, initial_guess(&spec)?)?;
    writeln!(out, "orbit start: ({}, {})", num(orbit.start[0]), num(orbit.start[1])).map_err(io)?;
    writeln!(
        out,
        "newton iterations: {}  residual: {}  periodicity residual: {}",
        orbit.newton_iterations,
        num(orbit.newton_residual),
        num(orbit.periodicity_residual)
    )
    .map_err(io)?;
    let fl = simulate::floquet(&spec, &orbit, &simulate::SimOptions::default().ode)?;
    for (i, m) in fl.multipliers.iter().enumerate() {
        writeln!(out, "multiplier {}: {} {:+e}i  |m| = {}", i + 1, num(m.re), m.im, num(m.norm())).map_err(io)?;
    }
    writeln!(out, "det monodromy = {}  liouville = {}", num(fl.determinant()), num(fl.liouville)).map_err(io)?;
    writeln!(out, "floquet: {}", fl.classification.as_str()).map_err(io)?;
    let report = simulate::verify_predictions(&spec, &orbit)?;
    for c in &report.checks {
        writeln!(out, "{:<22} slack={} {}", c.name, num(c.slack), if c.passed { "pass" } else { "fail" }).map_err(io)?;
    }
    if cfg.emit_csv {
        let mut body = String::from("t,u,v\n");
        for (t, u, v) in orbit.samples() {
            body += &format!("{},{},{}\n", num(t), num(u), num(v));
        }
        let path = cfg.write_csv("orbit.csv", &body)?;
        writeln!(out, "wrote {}", path.display()).map_err(io)?;
    }
    Ok(if fl.classification == FloquetClass::AsymptoticallyStable {
        EXIT_STABLE
    } else {
        EXIT_INCONCLUSIVE
    })
}

fn example1(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let sys = match &cfg.system_file {
        Some(_) => ConstantSystem::from_spec(&cfg.system()?)?,
        None => ConstantSystem::worked_example(1.0),
    };
    let (x1, y1) = sys.equilibrium()?;
    let bounds = sys.bounds();
    writeln!(out, "C_1 point: ({}, {})", num(x1), num(y1)).map_err(io)?;
    writeln!(out, "k = {}", num(sys.k()?)).map_err(io)?;
    writeln!(out, "U = {}  V = {}", num(bounds.u), num(bounds.v)).map_err(io)?;

    let ps: Vec<f64> = match &cfg.p_list {
        Some(l) => l.0.iter().filter_map(|p| match p {
            Exponent::Finite(p) => Some(*p),
            Exponent::Infinity => None,
        }).collect(),
        None => vec![1.0, 1.5, 2.0, 3.0, 4.0, 10.0, 200.0],
    };
    let curve = sys.example_one_curve(&ps)?;
    writeln!(out, "{:<6} {:<24} {:<24} sign_ok", "p", "h(p)", "G(p)").map_err(io)?;
    let mut body = String::from("p,h,G,sign_ok\n");
    for ((&(p, h), &(_, g)), &(_, ok)) in curve.h_values.iter().zip(&curve.g_values).zip(&curve.sign_ok) {
        writeln!(out, "{:<6} {:<24} {:<24} {ok}", p, num(h), num(g)).map_err(io)?;
        body += &format!("{p},{},{},{ok}\n", num(h), num(g));
    }

    let check = sys.check25(P_STAR)?;
    writeln!(
        out,
        "G(1) > 0: {}  G({}) < 0: {}  G({}) > 0: {}",
        check.pattern.0, check.p_star, check.pattern.1, check.p_large, check.pattern.2
    )
    .map_err(io)?;
    writeln!(
        out,
        "limit check: V = {}  r^2/U = {}  limit positive: {}",
        num(check.asymptotic.v),
        num(check.asymptotic.r_squared_over_u),
        check.asymptotic.limit_positive
    )
    .map_err(io)?;
    for d in &check.diagnostics {
        writeln!(out, "note: {d}").map_err(io)?;
    }
    for p in [Exponent::Finite(1.0), Exponent::Finite(P_STAR), Exponent::Infinity] {
        let diag = sys.diagnose(p)?;
        write_result(out, &diag.direct).map_err(io)?;
        if let Some(note) = &diag.note {
            writeln!(out, "note: {note}").map_err(io)?;
        }
    }
    if cfg.emit_csv {
        let path = cfg.write_csv("example1.csv", &body)?;
        writeln!(out, "wrote {}", path.display()).map_err(io)?;
    }
    Ok(EXIT_STABLE)
}

/// Parse arguments, run, and report errors on standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_STABLE };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cfg, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
