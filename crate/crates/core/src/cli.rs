//! Command-line driver.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::check::CheckResult;
use crate::contact::{self, E16Basis, Fault};
use crate::error::{Error, Result};
use crate::exactnum::Gr;
use crate::gmodule::{self, ModuleSpec};
use crate::singular;

pub const SCHEMA_VERSION: u32 = 1;
pub const WORKERS_ENV: &str = "E16_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "e16", version, about = "Exact checks for E(1,6) and singular vectors of its finite Verma modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Jacobi, closure, grading, depth and root-system checks
    CheckAlgebra(Common),
    /// Kernel of the singular-vector conditions and the Θ-degree bound
    VerifyBound(Common),
    /// Highest-weight singular vectors, printed in both coordinate systems
    FindSingular(Common),
    /// Re-derive the equations used to bound the Θ-degree
    ReproduceProof(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in module (trivial, vector, adjoint) or path to a module file
    #[arg(long, default_value = "vector")]
    pub module: String,
    /// t-eigenvalues: comma-separated scalars and integer ranges a..b
    #[arg(long, default_value = "-10..10", allow_hyphen_values = true)]
    pub t_scan: String,
    /// Highest Θ-power of the unknowns
    #[arg(long, default_value_t = singular::DEFAULT_K_MAX)]
    pub kmax: u32,
    /// Highest basis degree for the Jacobi check
    #[arg(long, default_value_t = 4)]
    pub max_degree: i32,
    /// verify-bound: also impose annihilation by the positive root vectors
    /// of so(6) (always on for find-singular)
    #[arg(long)]
    pub with_s0: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// List every check, not only the summary
    #[arg(long, short)]
    pub verbose: bool,
    /// Corrupt one bracket (self-test of the algebra suite)
    #[arg(long, hide = true)]
    pub fault: bool,
}

/// Parses `-3,1/2,0..4`; ranges are inclusive.
pub fn parse_t_scan(s: &str) -> Result<Vec<Gr>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let bound = |x: &str| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Usage(format!("range bounds must be integers: {part:?}")))
            };
            let (a, b) = (bound(a)?, bound(b)?);
            if a > b {
                return Err(Error::Usage(format!("empty range {part:?}")));
            }
            out.extend((a..=b).map(Gr::from));
        } else {
            out.push(part.parse::<Gr>().map_err(|e| Error::Usage(e.to_string()))?);
        }
    }
    if out.is_empty() {
        return Err(Error::Usage("--t-scan is empty".into()));
    }
    Ok(out)
}

pub fn load_module(source: &str) -> Result<ModuleSpec> {
    match gmodule::builtin(source, Gr::ZERO) {
        Err(Error::UnknownModule(_)) if Path::new(source).exists() => ModuleSpec::read(Path::new(source)),
        other => other,
    }
}

/// Collects report lines in either output format.
struct Report {
    format: Format,
    lines: Vec<String>,
}

impl Report {
    fn new(format: Format, command: &str, c: &Common) -> Self {
        let mut r = Report { format, lines: vec![] };
        let with_s0 = c.with_s0 || command == "find-singular";
        match format {
            Format::Text => r.lines.push(format!(
                "# e16 {command}: module={} t-scan={} kmax={} max-degree={} with-s0={}",
                c.module, c.t_scan, c.kmax, c.max_degree, with_s0
            )),
            Format::JsonLines => r.record(json!({
                "type": "header",
                "command": command,
                "module": c.module,
                "t_scan": c.t_scan,
                "kmax": c.kmax,
                "max_degree": c.max_degree,
                "with_s0": with_s0,
            })),
        }
        r
    }

    fn record(&mut self, mut v: Value) {
        if let Value::Object(m) = &mut v {
            m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        }
        self.lines.push(v.to_string());
    }

    fn text(&mut self, s: impl Into<String>) {
        if self.format == Format::Text {
            self.lines.push(s.into());
        }
    }

    fn check(&mut self, c: &CheckResult, context: Value, verbose: bool) {
        match self.format {
            Format::Text => {
                if verbose || !c.passed() {
                    self.lines.push(format!("  {c}"));
                    for f in &c.failures {
                        self.lines.push(format!("    {f}"));
                    }
                }
            }
            Format::JsonLines => self.record(json!({
                "type": "check",
                "context": context,
                "name": c.name,
                "passed": c.passed(),
                "checked": c.checked,
                "failed": c.failed,
                "failures": c.failures,
            })),
        }
    }

    fn summary(&mut self, ok: bool, checked: u64) {
        match self.format {
            Format::Text => self
                .lines
                .push(format!("{} ({checked} checks)", if ok { "PASS" } else { "FAIL" })),
            Format::JsonLines => self.record(json!({"type": "summary", "passed": ok, "checked": checked})),
        }
    }
}

fn check_algebra(c: &Common) -> Result<Vec<CheckResult>> {
    if c.max_degree < 0 {
        return Err(Error::Usage("--max-degree must be non-negative".into()));
    }
    let fault = c.fault.then(Fault::standard);
    let fault = fault.as_ref();
    let closure = c.max_degree + 2;
    let basis = E16Basis::new(closure + 2)?;
    let mut checks = contact::jacobi_suite(&basis, c.max_degree, fault);
    checks.push(contact::closure_suite(&basis, closure, fault));
    checks.push(contact::grading_suite(&basis, fault));
    checks.push(contact::depth_suite(&basis, closure, fault));
    checks.extend(contact::root_suite(fault));
    Ok(checks)
}

fn emit_checks(c: &Common, rep: &mut Report, checks: &[CheckResult], context: Value) -> bool {
    for ch in checks {
        rep.check(ch, context.clone(), c.verbose);
    }
    checks.iter().all(CheckResult::passed)
}

fn verify_bound(c: &Common, base: &ModuleSpec, scan: &[Gr], rep: &mut Report) -> Result<(bool, u64)> {
    let report = singular::verify_bound(base, c.kmax, scan, c.with_s0)?;
    let mut checked = 0;
    rep.text(format!("module {} (dim {}), kmax {}", base.name, base.dim(), c.kmax));
    rep.text("t       rows    kernel dimension by degree 0..8");
    for e in &report.entries {
        let dims: Vec<usize> = (0..=8).map(|d| e.kernel_by_degree.get(&d).copied().unwrap_or(0)).collect();
        let extra: usize = e.kernel_by_degree.range(9..).map(|(_, n)| n).sum();
        let flag = if e.passed() { "ok" } else { "FAIL" };
        rep.text(format!(
            "{:<7} {:<7} {}{} {flag}",
            e.t_scalar.to_string(),
            e.rows,
            dims.iter().map(|n| format!("{n:>3}")).collect::<String>(),
            if extra > 0 { format!(" (+{extra} above 8)") } else { String::new() }
        ));
        if rep.format == Format::JsonLines {
            rep.record(json!({
                "type": "kernel",
                "t": e.t_scalar,
                "rows": e.rows,
                "by_degree": e.kernel_by_degree,
                "passed": e.passed(),
            }));
        }
        for ch in &e.checks {
            checked += ch.checked;
            rep.check(ch, json!({"t": e.t_scalar}), c.verbose);
        }
    }
    Ok((report.passed(), checked))
}

fn find_singular(c: &Common, base: &ModuleSpec, scan: &[Gr], rep: &mut Report) -> Result<(bool, u64)> {
    let reports = singular::find_singular(base, c.kmax, scan)?;
    let mut ok = true;
    let mut checked = 0;
    for r in &reports {
        rep.text(format!("t = {}: {} vector(s)", r.t_scalar, r.vectors.len()));
        for v in &r.vectors {
            let w = &v.weight;
            let weight = format!("({}, {}, {})", w[0], w[1], w[2]);
            rep.text(format!("  degree {} weight {weight}", v.degree));
            rep.text(format!("    dual:     {}", v.dual_coordinates));
            rep.text(format!("    original: {}", v.original_coordinates));
            if rep.format == Format::JsonLines {
                rep.record(json!({"type": "vector", "t": r.t_scalar, "vector": v}));
            }
        }
        for ch in &r.checks {
            ok &= ch.passed();
            checked += ch.checked;
            rep.check(ch, json!({"t": r.t_scalar}), c.verbose);
        }
    }
    Ok((ok, checked))
}

fn dispatch(cmd: &Command, rep: &mut Report) -> Result<bool> {
    let (_, c) = command_parts(cmd);
    match cmd {
        Command::CheckAlgebra(_) | Command::ReproduceProof(_) => {
            let checks = if matches!(cmd, Command::CheckAlgebra(_)) {
                check_algebra(c)?
            } else {
                singular::reproduce_proof_steps()
            };
            let ok = emit_checks(c, rep, &checks, json!({}));
            rep.summary(ok, checks.iter().map(|x| x.checked).sum());
            Ok(ok)
        }
        Command::VerifyBound(_) | Command::FindSingular(_) => {
            let scan = parse_t_scan(&c.t_scan)?;
            let base = load_module(&c.module)?;
            gmodule::validate(&base).into_result()?;
            let (ok, n) = if matches!(cmd, Command::VerifyBound(_)) {
                verify_bound(c, &base, &scan, rep)?
            } else {
                find_singular(c, &base, &scan, rep)?
            };
            rep.summary(ok, n);
            Ok(ok)
        }
    }
}

fn command_parts(cmd: &Command) -> (&'static str, &Common) {
    match cmd {
        Command::CheckAlgebra(c) => ("check-algebra", c),
        Command::VerifyBound(c) => ("verify-bound", c),
        Command::FindSingular(c) => ("find-singular", c),
        Command::ReproduceProof(c) => ("reproduce-proof", c),
    }
}

/// Runs one invocation; returns the report text and the exit status.
pub fn execute(cli: &Cli) -> (String, i32) {
    let (name, c) = command_parts(&cli.command);
    let mut rep = Report::new(c.format, name, c);
    let status = match dispatch(&cli.command, &mut rep) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            match rep.format {
                Format::Text => rep.lines.push(format!("error: {e}")),
                Format::JsonLines => rep.record(json!({"type": "error", "message": e.to_string()})),
            }
            EXIT_USAGE
        }
    };
    let mut text = rep.lines.join("\n");
    text.push('\n');
    (text, status)
}

fn configure_workers() -> Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
        // a second call fails harmlessly when a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(e) = configure_workers() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let (text, status) = execute(&cli);
    let (_, c) = command_parts(&cli.command);
    let written = match &c.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    status
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (String, i32) {
        let cli = Cli::try_parse_from(std::iter::once("e16").chain(args.iter().copied())).unwrap();
        execute(&cli)
    }

    #[test]
    fn t_scan_parsing() {
        assert_eq!(parse_t_scan("-2..1").unwrap().len(), 4);
        assert_eq!(parse_t_scan("1/2, 3, 0..0").unwrap(), vec![Gr::from_ratio(1, 2), Gr::from(3), Gr::ZERO]);
        assert!(matches!(parse_t_scan(""), Err(Error::Usage(_))));
        assert!(matches!(parse_t_scan(" , "), Err(Error::Usage(_))));
        assert!(matches!(parse_t_scan("3..1"), Err(Error::Usage(_))));
    }

    #[test]
    fn empty_scan_is_a_usage_error() {
        let (out, status) = run(&["find-singular", "--module", "trivial", "--t-scan", ""]);
        assert_eq!(status, EXIT_USAGE, "{out}");
    }

    #[test]
    fn unknown_module_is_a_usage_error() {
        let (_, status) = run(&["verify-bound", "--module", "no-such-module", "--t-scan", "0"]);
        assert_eq!(status, EXIT_USAGE);
    }

    #[test]
    fn trivial_bound_passes_with_header() {
        let (out, status) = run(&["verify-bound", "--module", "trivial", "--t-scan", "0,4", "--kmax", "3"]);
        assert_eq!(status, EXIT_OK, "{out}");
        assert!(out.starts_with("# e16 verify-bound: module=trivial t-scan=0,4 kmax=3 max-degree=4"));
    }

    #[test]
    fn json_lines_carry_schema_version() {
        let (out, status) = run(&[
            "find-singular",
            "--module",
            "trivial",
            "--t-scan",
            "0",
            "--kmax",
            "1",
            "--with-s0",
            "--format",
            "json-lines",
        ]);
        assert_eq!(status, EXIT_OK, "{out}");
        let records: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert!(records.iter().all(|r| r["schema_version"] == SCHEMA_VERSION));
        assert_eq!(records[0]["type"], "header");
        assert!(records.iter().any(|r| r["type"] == "vector" && r["vector"]["degree"] == 0));
    }
}
