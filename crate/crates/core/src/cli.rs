//! Command-line front end: `eval`, `table`, `verify` and `kernel`.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 failed verification, 2 usage error, 3 numerical failure.

use std::f64::consts::PI;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::boundary::{
    boundary_constant, circular_limit_constant, degeneration_report, hyperbolic_limit_constant,
};
use crate::clausen::{circular_cl, elliptic_cl, elliptic_cl_weighted, Family};
use crate::kernel::{
    circular_kernel, k_ell, kernel_coeffs_lambert_reduced, kernel_coeffs_taylor,
    KernelCoefficients, MAX_COEFFS,
};
use crate::numerics::{zeta, Precision};
use crate::recursion::{verify_recursion, FD_BOUND, QUAD_BOUND};
use crate::theta::{s_transform_residual, theta1, theta1_normalized, theta1_product, Modulus};
use crate::{Complex64, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "clausen",
    version,
    about = "Circular, elliptic and hyperbolic Clausen functions"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Absolute tolerance for series truncation.
    #[arg(long, global = true, default_value_t = Precision::DEFAULT_ABS_TOL)]
    tol: f64,
    /// Term budget for series and quadrature.
    #[arg(long, global = true, default_value_t = Precision::DEFAULT_MAX_TERMS)]
    max_terms: usize,
    /// Reserved for complex moduli; rejected.
    #[arg(long, global = true, hide = true)]
    tau: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one function value as JSON.
    Eval(EvalArgs),
    /// Tabulate a function on a uniform grid as CSV.
    Table(TableArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Kernel Taylor coefficients by both routes.
    Kernel(KernelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Circular,
    Elliptic,
    Hyperbolic,
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::Circular => "circular",
            FamilyArg::Elliptic => "elliptic",
            FamilyArg::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Debug, Args)]
struct FunctionArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Level n >= 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Imaginary part t of τ = it; elliptic family only.
    #[arg(long)]
    tau_im: Option<f64>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    x_max: f64,
    /// Number of grid points, at least 2.
    #[arg(long)]
    steps: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Recursion,
    Degeneration,
    Kernel,
    Boundary,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Recursion => "recursion",
            Suite::Degeneration => "degeneration",
            Suite::Kernel => "kernel",
            Suite::Boundary => "boundary",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Modulus for the elliptic checks; the degeneration suite defaults to t ∈ {2, 3, 5}.
    #[arg(long)]
    tau_im: Option<f64>,
    /// Restrict the recursion suite to one family.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..))]
    n_max: u32,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    m_max: u32,
    /// Comma-separated grid for the recursion checks.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    grid: Vec<f64>,
}

#[derive(Debug, Args)]
struct KernelArgs {
    /// Number of coefficients c2, c4, ..., at most 8.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_COEFFS as u64))]
    coeffs: u64,
    #[arg(long, default_value_t = 1.0)]
    tau_im: f64,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numerical(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(e)) => {
            let _ = writeln!(err, "numerical failure: {e}");
            EXIT_NUMERICAL
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "I/O failure: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    if cli.tau.is_some() {
        return Err(Failure::Usage(
            "--tau is reserved for complex moduli and not supported; pass the imaginary part with --tau-im".into(),
        ));
    }
    let prec = Precision::new(cli.tol, cli.max_terms, Precision::DEFAULT_QUAD_TOL)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, &prec, out),
        Command::Table(a) => cmd_table(a, &prec, out),
        Command::Verify(a) => cmd_verify(a, &prec, out),
        Command::Kernel(a) => cmd_kernel(a, &prec, out),
    }
}

fn modulus_arg(t: f64) -> CliResult<Modulus> {
    Modulus::new(t).map_err(|e| Failure::Usage(format!("--tau-im: {e}")))
}

fn family_from(args: &FunctionArgs) -> CliResult<Family> {
    match (args.family, args.tau_im) {
        (FamilyArg::Elliptic, Some(t)) => Ok(Family::Elliptic(modulus_arg(t)?)),
        (FamilyArg::Elliptic, None) => Err(Failure::Usage(
            "the elliptic family requires --tau-im".into(),
        )),
        (_, Some(_)) => Err(Failure::Usage(
            "--tau-im only applies to the elliptic family".into(),
        )),
        (FamilyArg::Circular, None) => Ok(Family::Circular),
        (FamilyArg::Hyperbolic, None) => Ok(Family::Hyperbolic),
    }
}

/// 17 significant digits; non-finite values have no JSON form.
fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(fmt_num(x)).expect("formatted float is valid JSON")
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct EvalRecord {
    family: &'static str,
    n: u32,
    x: Box<RawValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_im: Option<Box<RawValue>>,
    value: Box<RawValue>,
    err_bound: Box<RawValue>,
    terms_used: usize,
}

fn cmd_eval(args: &EvalArgs, prec: &Precision, out: &mut dyn Write) -> CliResult<i32> {
    let family = family_from(&args.function)?;
    if !args.x.is_finite() {
        return Err(Failure::Usage("--x must be finite".into()));
    }
    let r = family.eval(args.function.order, args.x, prec)?;
    write_json(
        out,
        &EvalRecord {
            family: args.function.family.name(),
            n: args.function.order,
            x: raw(args.x),
            tau_im: args.function.tau_im.map(raw),
            value: raw(r.value),
            err_bound: raw(r.err_bound),
            terms_used: r.terms_used,
        },
    )?;
    Ok(EXIT_OK)
}

fn cmd_table(args: &TableArgs, prec: &Precision, out: &mut dyn Write) -> CliResult<i32> {
    let family = family_from(&args.function)?;
    if args.steps < 2 {
        return Err(Failure::Usage("--steps must be at least 2".into()));
    }
    if !(args.x_min.is_finite() && args.x_max.is_finite() && args.x_min < args.x_max) {
        return Err(Failure::Usage("need finite --x-min < --x-max".into()));
    }
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::Io(e.to_string());
    wtr.write_record(["x", "value", "err_bound", "diagnostic"])
        .map_err(csv_err)?;
    let last = (args.steps - 1) as f64;
    for i in 0..args.steps {
        let x = if i + 1 == args.steps {
            args.x_max
        } else {
            args.x_min + (args.x_max - args.x_min) * (i as f64 / last)
        };
        match family.eval(args.function.order, x, prec) {
            Ok(r) => wtr.write_record([
                fmt_num(x),
                fmt_num(r.value),
                fmt_num(r.err_bound),
                String::new(),
            ]),
            Err(e @ (Error::Singular(_) | Error::Domain(_))) => {
                wtr.write_record([fmt_num(x), String::new(), String::new(), e.to_string()])
            }
            Err(e) => return Err(e.into()),
        }
        .map_err(csv_err)?;
    }
    let bytes = wtr.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    match &args.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => out.write_all(&bytes)?,
    }
    Ok(EXIT_OK)
}

/// `{c2: .., c4: .., ...}` in index order.
struct CoeffMap(Vec<(String, f64)>);

impl Serialize for CoeffMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &raw(*v))?;
        }
        map.end()
    }
}

fn coeff_map<F: Fn(usize) -> f64>(count: usize, f: F) -> CoeffMap {
    CoeffMap((1..=count).map(|m| (format!("c{}", 2 * m), f(m))).collect())
}

#[derive(Serialize)]
struct RouteRecord {
    t: Box<RawValue>,
    route: &'static str,
    coeffs: CoeffMap,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_residual: Option<Box<RawValue>>,
}

impl RouteRecord {
    fn from(k: &KernelCoefficients) -> Self {
        Self {
            t: raw(k.t),
            route: k.route.as_str(),
            coeffs: coeff_map(k.coeffs.len(), |m| k.coeffs[m - 1]),
            fit_residual: k.fit_residual.map(raw),
        }
    }
}

#[derive(Serialize)]
struct KernelRecord {
    t: Box<RawValue>,
    s_reduced: bool,
    taylor: RouteRecord,
    lambert: RouteRecord,
    deltas: CoeffMap,
}

fn cmd_kernel(args: &KernelArgs, prec: &Precision, out: &mut dyn Write) -> CliResult<i32> {
    let modulus = modulus_arg(args.tau_im)?;
    let count = args.coeffs as usize;
    let taylor = kernel_coeffs_taylor(&modulus, count, prec)?;
    let lambert = kernel_coeffs_lambert_reduced(&modulus, count, prec)?;
    write_json(
        out,
        &KernelRecord {
            t: raw(modulus.t()),
            s_reduced: modulus.t() < crate::theta::S_TRANSFORM_THRESHOLD,
            taylor: RouteRecord::from(&taylor),
            lambert: RouteRecord::from(&lambert),
            deltas: coeff_map(count, |m| taylor.coeffs[m - 1] - lambert.coeffs[m - 1]),
        },
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckRecord {
    name: String,
    max_residual: Box<RawValue>,
    bound: Box<RawValue>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyRecord {
    suite: &'static str,
    checks: Vec<CheckRecord>,
    notes: Vec<String>,
}

/// Accumulates named checks `max_residual <= bound`.
#[derive(Default)]
struct Checks {
    checks: Vec<CheckRecord>,
    notes: Vec<String>,
}

impl Checks {
    fn push(&mut self, name: impl Display, max_residual: f64, bound: f64) {
        self.checks.push(CheckRecord {
            name: name.to_string(),
            max_residual: raw(max_residual),
            bound: raw(bound),
            pass: max_residual <= bound,
        });
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn max_abs<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |a, b| {
        if b.is_nan() {
            f64::INFINITY
        } else {
            a.max(b.abs())
        }
    })
}

fn cmd_verify(args: &VerifyArgs, prec: &Precision, out: &mut dyn Write) -> CliResult<i32> {
    let tau = args.tau_im.map(modulus_arg).transpose()?;
    if args.grid.is_empty() || args.grid.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Failure::Usage("--grid needs positive finite points".into()));
    }
    let mut checks = Checks::default();
    let run_all = args.suite == Suite::All;
    if run_all || args.suite == Suite::Recursion {
        suite_recursion(args, tau.unwrap_or(modulus_arg(1.0)?), prec, &mut checks)?;
    }
    if run_all || args.suite == Suite::Degeneration {
        let t_list = match tau {
            Some(m) => vec![m],
            None => [2.0, 3.0, 5.0]
                .iter()
                .map(|&t| modulus_arg(t))
                .collect::<CliResult<_>>()?,
        };
        suite_degeneration(args.m_max, &t_list, prec, &mut checks)?;
    }
    if run_all || args.suite == Suite::Kernel {
        suite_kernel(tau.unwrap_or(modulus_arg(1.0)?), prec, &mut checks)?;
    }
    if run_all || args.suite == Suite::Boundary {
        suite_boundary(
            args.m_max,
            tau.unwrap_or(modulus_arg(1.0)?),
            prec,
            &mut checks,
        )?;
    }
    let pass = checks.pass();
    write_json(
        out,
        &VerifyRecord {
            suite: args.suite.name(),
            checks: checks.checks,
            notes: checks.notes,
        },
    )?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn suite_recursion(
    args: &VerifyArgs,
    modulus: Modulus,
    prec: &Precision,
    checks: &mut Checks,
) -> CliResult<()> {
    let families: Vec<Family> = match args.family {
        Some(FamilyArg::Circular) => vec![Family::Circular],
        Some(FamilyArg::Elliptic) => vec![Family::Elliptic(modulus)],
        Some(FamilyArg::Hyperbolic) => vec![Family::Hyperbolic],
        None => vec![
            Family::Circular,
            Family::Elliptic(modulus),
            Family::Hyperbolic,
        ],
    };
    for family in &families {
        let report = verify_recursion(family, args.n_max, &args.grid, prec)?;
        if let Some(first) = report.failures.first() {
            return Err(Failure::Numerical(Error::Domain(first.clone())));
        }
        let name = family.name();
        checks.push(
            format!("recursion/{name}/finite-difference"),
            report.max_fd_residual(),
            FD_BOUND,
        );
        checks.push(
            format!("recursion/{name}/quadrature-lift"),
            report.max_quad_residual(),
            QUAD_BOUND,
        );
        let signs: Vec<String> = report
            .levels
            .iter()
            .map(|l| format!("{:+}", l.sign))
            .collect();
        checks.note(format!(
            "recursion {name}: derivative signs for levels 2..={} are [{}]",
            args.n_max + 1,
            signs.join(", ")
        ));
    }
    Ok(())
}

fn suite_degeneration(
    m_max: u32,
    t_list: &[Modulus],
    prec: &Precision,
    checks: &mut Checks,
) -> CliResult<()> {
    let ts: Vec<f64> = t_list.iter().map(|m| m.t()).collect();
    let report = degeneration_report(m_max, &ts, prec)?;
    for m in t_list {
        let t = m.t();
        let q2 = m.q2();
        let rows = report.rows.iter().filter(|r| r.t == t);
        let env = 2.0 * q2 / (1.0 - q2);
        checks.push(
            format!("degeneration/boundary-constants/t={t}"),
            max_abs(rows.map(|r| r.residual)),
            3.0 * env + prec.abs_tol(),
        );
        let mut diffs = Vec::new();
        for n in 2..=4 {
            for x in [0.5, 1.0, PI, 5.0] {
                diffs.push(elliptic_cl(n, x, m, prec)?.value - circular_cl(n, x, prec)?.value);
            }
        }
        checks.push(
            format!("degeneration/functions/t={t}"),
            max_abs(diffs),
            4.0 * q2 / (1.0 - q2) + 1e-10,
        );
        if t >= 2.0 {
            let mut theta_diffs = Vec::new();
            for i in 0..=200 {
                let v = i as f64 / 200.0;
                theta_diffs.push(theta1_normalized(v, m, prec)?.value - 2.0 * (PI * v).sin());
            }
            checks.push(
                format!("degeneration/theta-limit/t={t}"),
                max_abs(theta_diffs),
                8.0 * q2 / (1.0 - q2).powi(4) + 1e-13,
            );
            let mut kernel_diffs = Vec::new();
            for i in 1..=40 {
                let v = i as f64 / 100.0;
                kernel_diffs.push(k_ell(v, m, prec)?.value - circular_kernel(v)?);
            }
            checks.push(
                format!("degeneration/kernel-limit/t={t}"),
                max_abs(kernel_diffs),
                20.0 * q2,
            );
        } else {
            checks.note(format!(
                "theta and kernel limit checks need t >= 2; skipped at t = {t}"
            ));
        }
    }
    let mut ratio_err: f64 = 0.0;
    for m in 1..=m_max {
        let expected = 2f64.powi(1 - 2 * m as i32);
        let ratio = hyperbolic_limit_constant(m)? / circular_limit_constant(m)?;
        ratio_err = ratio_err.max((ratio - expected).abs() / expected);
    }
    checks.push("degeneration/hyperbolic-ratio", ratio_err, 1e-15);
    checks.note(report.note);
    for row in &report.hyperbolic {
        checks.note(format!(
            "m={}: stated hyperbolic limit {}, HCl_{}(0) = {}, difference {}",
            row.m,
            fmt_num(row.stated),
            2 * row.m + 1,
            fmt_num(row.family_value),
            fmt_num(row.discrepancy)
        ));
    }
    Ok(())
}

fn suite_kernel(modulus: Modulus, prec: &Precision, checks: &mut Checks) -> CliResult<()> {
    let t = modulus.t();
    let taylor = kernel_coeffs_taylor(&modulus, 4, prec)?;
    let lambert = kernel_coeffs_lambert_reduced(&modulus, 4, prec)?;
    let deltas = taylor
        .coeffs
        .iter()
        .zip(&lambert.coeffs)
        .map(|(a, b)| a - b);
    checks.push(format!("kernel/dual-route/t={t}"), max_abs(deltas), 1e-7);
    let mut even = Vec::new();
    for i in 1..=9 {
        let v = i as f64 / 10.0;
        even.push(k_ell(v, &modulus, prec)?.value - k_ell(-v, &modulus, prec)?.value);
    }
    checks.push(format!("kernel/evenness/t={t}"), max_abs(even), 1e-13);

    let mut grid: Vec<Modulus> = [0.5, 1.0, 2.0, 5.0]
        .iter()
        .map(|&t| modulus_arg(t))
        .collect::<CliResult<_>>()?;
    if !grid.iter().any(|m| m.t() == t) {
        grid.push(modulus);
    }
    let (mut sp, mut odd, mut per, mut st) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for m in &grid {
        for i in 1..=9 {
            let v = i as f64 / 10.0;
            let z = Complex64::new(v, 0.0);
            let a = theta1(z, m, prec)?.value;
            sp.push((a - theta1_product(z, m, prec)?.value).norm());
            odd.push((theta1(-z, m, prec)?.value + a).norm());
            per.push((theta1(z + 1.0, m, prec)?.value + a).norm());
            st.push(s_transform_residual(v, m, prec)?);
        }
    }
    checks.push("theta/series-product", max_abs(sp), 1e-12);
    checks.push("theta/oddness", max_abs(odd), 1e-13);
    checks.push("theta/quasi-periodicity", max_abs(per), 1e-13);
    checks.push("theta/s-transform", max_abs(st), 1e-11);
    if t < crate::theta::S_TRANSFORM_THRESHOLD {
        checks.note(format!(
            "kernel: Lambert route at t = {t} used the S-transform reduction"
        ));
    }
    Ok(())
}

fn suite_boundary(
    m_max: u32,
    modulus: Modulus,
    prec: &Precision,
    checks: &mut Checks,
) -> CliResult<()> {
    let t = modulus.t();
    let mut consistency = Vec::new();
    let mut below_zeta: f64 = 0.0;
    let mut increase: f64 = 0.0;
    let mut prev = f64::INFINITY;
    for m in 1..=m_max {
        let b = boundary_constant(m, &modulus, prec)?.value;
        consistency.push(b - elliptic_cl(2 * m + 1, 0.0, &modulus, prec)?.value);
        below_zeta = below_zeta.max(zeta(2 * m + 1) - b);
        increase = increase.max(b - prev);
        prev = b;
    }
    checks.push(
        format!("boundary/series-consistency/t={t}"),
        max_abs(consistency),
        1e-12,
    );
    checks.push(
        format!("boundary/above-zeta/t={t}"),
        below_zeta.max(0.0),
        0.0,
    );
    checks.push(
        format!("boundary/decreasing-in-m/t={t}"),
        increase.max(0.0),
        0.0,
    );
    let mut dual = Vec::new();
    for x in [0.5, 1.0, PI, 5.0] {
        dual.push(
            elliptic_cl_weighted(1, x, &modulus, prec)?.value
                - elliptic_cl(1, x, &modulus, prec)?.value,
        );
    }
    checks.push(
        format!("boundary/level-one-dual-route/t={t}"),
        max_abs(dual),
        1e-9,
    );
    Ok(())
}
