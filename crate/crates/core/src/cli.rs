//! Command-line front end.
//!
//! Exit codes: 0 when every check passed, 1 when a mathematical check failed,
//! 2 on bad input or a violated precondition. Errors are reported on stderr
//! as `{"error": {"kind", "message"}}`. Reports are deterministic: the same
//! arguments give the same bytes. When `REGROUP_REPORT_DIR` is set, each
//! report is also written to `<dir>/<subcommand>.json`.
//!
//! Inputs (`--group`, `--map`, `--window`) are file paths, inline JSON, or
//! `corpus:<name>` for a bundled file such as `corpus:maps/dyadic_fold.json`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus;
use crate::dynamics::{
    bijection_check, example_map, monotone_to_shift, orbit_decomposition, periodic_point_scan, shift_obstruction, Verdict,
};
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Window};
use crate::involution::{normalize, partition_check, unique_fixed_point, HPolicy};
use crate::maps::random::random_homeo;
use crate::maps::{Homeo, Monotonicity, PartitionScheme};
use crate::numbers::Rational;
use crate::report::{CheckReport, Status, SuiteReport};
use crate::transport::{round_trip, RoundTripReport, Role, TransportedGroup};

pub const REPORT_DIR_ENV: &str = "REGROUP_REPORT_DIR";

#[derive(Debug, Parser)]
#[command(name = "regroup", version, about = "Exact checks of transported group laws, involutions and shifts")]
pub struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Group descriptor; must match the map's group.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub window: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransportCheck {
    Axioms,
    Iso,
    Inversion,
    Shift,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Canonical,
    BackAndForth,
}

const DEFAULT_WINDOWS: &str = "16,64,256,1024,4096";

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a map is an involution with exactly one fixed point.
    VerifyInvolution(Input),
    /// Present an involution as the inversion of a transported group.
    NormalizeInvolution {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = PolicyArg::Canonical)]
        policy: PolicyArg,
    },
    /// Check the group transported along a homeomorphism.
    Transport {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        check: TransportCheck,
        /// Native shift constant for `--check shift`; defaults to the group generator.
        #[arg(long)]
        shift: Option<String>,
    },
    /// Orbit components of a lattice bijection on a window.
    Orbits(Input),
    /// The within-class successor map and its orbit growth.
    Counterexample {
        #[arg(long, default_value = "madic:2")]
        scheme: String,
        /// Half-widths `N` of the windows `[-N, N]`.
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_WINDOWS)]
        windows: Vec<u64>,
        /// Half-width of the window scanned for periodic points.
        #[arg(long, default_value_t = 1024)]
        periodic_window: u64,
        #[arg(long, default_value_t = 256)]
        max_iterate: u64,
    },
    /// Conjugate an increasing fixed-point-free map to a shift, or report the
    /// orbit obstruction for a non-monotone lattice map.
    ConjugateShift {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_WINDOWS)]
        windows: Vec<u64>,
    },
    /// Run the bundled corpus and seeded random suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random maps per group.
        #[arg(long, default_value_t = 3)]
        instances: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyInvolution(_) => "verify-involution",
            Command::NormalizeInvolution { .. } => "normalize-involution",
            Command::Transport { .. } => "transport",
            Command::Orbits(_) => "orbits",
            Command::Counterexample { .. } => "counterexample",
            Command::ConjugateShift { .. } => "conjugate-shift",
            Command::Selftest { .. } => "selftest",
        }
    }
}

struct Outcome {
    report: Value,
    passed: bool,
}

impl Outcome {
    fn new(command: &str, passed: bool, mut report: Value) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        report["command"] = json!(command);
        report["status"] = json!(status);
        Outcome { report, passed }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_inner(args, out, err, true)
}

fn run_inner<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, save: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            diagnose(err, "usage", &e.to_string());
            return 2;
        }
    };
    match execute(&cli) {
        Ok(outcome) => match emit(&cli, &outcome, out, save) {
            Ok(()) => i32::from(!outcome.passed),
            Err(e) => {
                diagnose(err, e.kind(), &e.to_string());
                2
            }
        },
        Err(e) => {
            diagnose(err, e.kind(), &e.to_string());
            2
        }
    }
}

fn diagnose(err: &mut dyn Write, kind: &str, message: &str) {
    let v = json!({ "error": { "kind": kind, "message": message.trim_end() } });
    let _ = writeln!(err, "{v}");
}

fn emit(cli: &Cli, outcome: &Outcome, out: &mut dyn Write, save: bool) -> Result<()> {
    let pretty = serde_json::to_string_pretty(&outcome.report)?;
    if let Some(dir) = std::env::var_os(REPORT_DIR_ENV).filter(|_| save) {
        let path = PathBuf::from(dir).join(format!("{}.json", cli.command.name()));
        std::fs::write(&path, format!("{pretty}\n")).map_err(|e| with_path(e, &path.display().to_string()))?;
    }
    match cli.format {
        Format::Json => writeln!(out, "{pretty}")?,
        Format::Text => write!(out, "{}", render_text(&outcome.report))?,
    }
    Ok(())
}

fn with_path(e: std::io::Error, path: &str) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{path}: {e}")))
}

/// Top-level scalars as `key: value`, and one line per named check.
fn render_text(report: &Value) -> String {
    let mut lines = Vec::new();
    let Value::Object(map) = report else {
        return format!("{report}\n");
    };
    for (key, value) in map {
        match value {
            Value::String(s) => lines.push(format!("{key}: {s}")),
            Value::Number(_) | Value::Bool(_) => lines.push(format!("{key}: {value}")),
            Value::Object(_) if key == "window" => lines.push(format!("{key}: {value}")),
            Value::Object(inner) if inner.contains_key("status") => {
                lines.push(format!("{key}: {}", inner["status"].as_str().unwrap_or("?")))
            }
            Value::Array(items) if items.iter().all(|i| i.get("law").is_some()) && !items.is_empty() => {
                lines.push(format!("{key}:"));
                for item in items {
                    lines.push(format!(
                        "  {} {} ({} checked)",
                        item["status"].as_str().unwrap_or("?"),
                        item["law"].as_str().unwrap_or("?"),
                        item["checked"]
                    ));
                }
            }
            _ => {}
        }
    }
    lines.push(String::new());
    lines.join("\n")
}

fn source(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    if let Some(name) = arg.strip_prefix("corpus:") {
        return corpus::get(name).map(str::to_string).ok_or_else(|| {
            Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("no corpus file {name}")))
        });
    }
    std::fs::read_to_string(arg).map_err(|e| with_path(e, arg))
}

fn load<T: DeserializeOwned>(arg: &str) -> Result<T> {
    Ok(serde_json::from_str(&source(arg)?)?)
}

fn resolve(input: &Input) -> Result<(Homeo, Window)> {
    let map: Homeo = load(&input.map)?;
    if let Some(g) = &input.group {
        let group: GroupDescriptor = load(g)?;
        group.same_as(map.group())?;
    }
    Ok((map, load(&input.window)?))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let name = cli.command.name();
    match &cli.command {
        Command::VerifyInvolution(input) => verify_involution(name, input),
        Command::NormalizeInvolution { input, policy } => normalize_involution(name, input, *policy),
        Command::Transport { input, check, shift } => transport(name, input, *check, shift.as_deref()),
        Command::Orbits(input) => orbits(name, input),
        Command::Counterexample { scheme, windows, periodic_window, max_iterate } => {
            counterexample(name, scheme, windows, *periodic_window, *max_iterate)
        }
        Command::ConjugateShift { input, windows } => conjugate_shift(name, input, windows),
        Command::Selftest { seed, instances } => selftest(name, *seed, *instances),
    }
}

fn error_value(e: &Error) -> Value {
    json!({ "kind": e.kind(), "message": e.to_string() })
}

fn verify_involution(name: &str, input: &Input) -> Result<Outcome> {
    let (f, w) = resolve(input)?;
    let involution = f.is_involution();
    let fixed = unique_fixed_point(&f);
    let xs = f.group().enumerate_window(&w)?;
    let partition = partition_check(&f, &xs)?;
    let passed = involution && fixed.is_ok() && partition.passed();
    let mut report = json!({
        "group": f.group().to_string(),
        "map_kind": f.kind_name(),
        "window": w,
        "is_involution": involution,
        "partition": partition,
    });
    match fixed {
        Ok(e) => report["fixed_point"] = json!(e),
        Err(e) => report["fixed_point_error"] = error_value(&e),
    }
    Ok(Outcome::new(name, passed, report))
}

fn normalize_involution(name: &str, input: &Input, policy: PolicyArg) -> Result<Outcome> {
    let (f, w) = resolve(input)?;
    let policy = match policy {
        PolicyArg::Canonical => HPolicy::Canonical,
        PolicyArg::BackAndForth => HPolicy::BackAndForth,
    };
    let nf = normalize(&f, &w, policy)?;
    let [claim3, claim5, claim6] = [0, 1, 2].map(|i| nf.checks.checks[i].status);
    let report = json!({
        "group": f.group().to_string(),
        "window": w,
        "fixed_point": nf.e,
        "A_sample": nf.a_sample,
        "h_form": nf.h.form(),
        "h_tilde": nf.h_tilde.as_homeo(),
        "transported_neutral": nf.transported.neutral(),
        "claim3": claim3,
        "claim5": claim5,
        "claim6": claim6,
        "checks": nf.checks.checks,
    });
    Ok(Outcome::new(name, nf.passed(), report))
}

fn round_trip_checks(rt: RoundTripReport) -> Vec<CheckReport> {
    let mut checks = rt.forward.checks;
    checks.extend(rt.backward.checks);
    checks.push(rt.operation);
    checks
}

fn transport(name: &str, input: &Input, check: TransportCheck, shift: Option<&str>) -> Result<Outcome> {
    let (h, w) = resolve(input)?;
    let t = TransportedGroup::new(h)?;
    let mut report = json!({ "group": t.base().to_string(), "window": w, "neutral": t.neutral() });
    let suite = match check {
        TransportCheck::Axioms => {
            report["check"] = json!("axioms");
            t.verify_axioms(&w)?
        }
        TransportCheck::Iso => {
            report["check"] = json!("iso");
            t.verify_isomorphism(&w)?
        }
        TransportCheck::Inversion => {
            report["check"] = json!("inversion");
            SuiteReport::new(round_trip_checks(round_trip(&t, &Role::Inversion, &w)?))
        }
        TransportCheck::Shift => {
            let c: Rational = match shift {
                Some(s) => s.parse()?,
                None => t.base().generator(),
            };
            if c.is_zero() {
                return Err(Error::NeutralShift);
            }
            let d = t.shift_constant(&c)?;
            report["check"] = json!("shift");
            report["native_shift"] = json!(c);
            report["transported_shift"] = json!(d);
            report["shift_map"] = json!(t.shift(&c)?);
            SuiteReport::new(round_trip_checks(round_trip(&t, &Role::Shift(d), &w)?))
        }
    };
    report["checked"] = json!(suite.checked());
    if let Some((law, cx)) = suite.first_counterexample() {
        report["counterexample"] = json!({ "law": law, "at": cx.at, "expected": cx.expected, "found": cx.found });
    }
    let passed = suite.passed();
    report["checks"] = json!(suite.checks);
    Ok(Outcome::new(name, passed, report))
}

fn orbits(name: &str, input: &Input) -> Result<Outcome> {
    let (f, w) = resolve(input)?;
    let report = orbit_decomposition(&f, &w)?;
    Ok(Outcome::new(name, true, serde_json::to_value(report)?))
}

fn counterexample(name: &str, scheme: &str, windows: &[u64], periodic_window: u64, max_iterate: u64) -> Result<Outcome> {
    let scheme: PartitionScheme = scheme.parse()?;
    let f = example_map(scheme);
    let n = i64::try_from(periodic_window).map_err(|_| Error::InvalidWindow("periodic window too large".into()))?;
    let w = Window::symmetric(n);
    let bijection = bijection_check(&f, &w)?;
    let periodic = periodic_point_scan(&f, &w, max_iterate)?;
    let obstruction = shift_obstruction(&f, windows)?;
    let sample: Vec<[Rational; 2]> = (-4..=4).map(Rational::from).map(|x| [x.clone(), f.apply(&x)]).collect();
    let passed = bijection.passed() && periodic.passed() && obstruction.verdict == Verdict::UnboundedEvidence;
    let report = json!({
        "scheme": scheme,
        "sample": sample,
        "window": w,
        "max_iterate": max_iterate,
        "checks": [bijection, periodic],
        "verdict": obstruction.label(),
        "obstruction": obstruction,
    });
    Ok(Outcome::new(name, passed, report))
}

fn conjugate_shift(name: &str, input: &Input, windows: &[u64]) -> Result<Outcome> {
    let (f, w) = resolve(input)?;
    if f.monotonicity() == Monotonicity::NonMonotone && !f.group().is_dense() {
        let witness = f.non_monotone_witness(&w)?;
        let obstruction = shift_obstruction(&f, windows)?;
        let report = json!({
            "group": f.group().to_string(),
            "window": w,
            "outcome": "OBSTRUCTED",
            "non_monotone_witness": witness,
            "verdict": obstruction.label(),
            "obstruction": obstruction,
        });
        return Ok(Outcome::new(name, false, report));
    }
    let attempt = monotone_to_shift(&f, &w)?;
    let passed = attempt.succeeded();
    let mut report = serde_json::to_value(&attempt)?;
    report["group"] = json!(f.group().to_string());
    Ok(Outcome::new(name, passed, report))
}

#[derive(Debug, Deserialize)]
struct Manifest {
    cases: Vec<ManifestCase>,
}

#[derive(Debug, Deserialize)]
struct ManifestCase {
    name: String,
    expect_exit: i32,
    args: Vec<String>,
}

#[derive(Debug, Serialize)]
struct CaseResult {
    name: String,
    expect_exit: i32,
    exit: i32,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    checked: Option<u64>,
}

fn run_case(case: &ManifestCase) -> CaseResult {
    let args = ["regroup", "--format", "json"].into_iter().map(String::from).chain(case.args.iter().cloned());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    // Manifest cases must not overwrite the report files of real invocations.
    let exit = run_inner(args, &mut out, &mut err, false);
    let checked = serde_json::from_slice::<Value>(&out).ok().and_then(|v| v.get("checked").and_then(Value::as_u64));
    CaseResult { name: case.name.clone(), expect_exit: case.expect_exit, exit, ok: exit == case.expect_exit, checked }
}

fn random_suite_groups() -> Result<Vec<(GroupDescriptor, Window)>> {
    Ok(vec![
        (GroupDescriptor::integers(), Window::symmetric(6)),
        (GroupDescriptor::cyclic(Rational::from(2))?, Window::symmetric(12)),
        (GroupDescriptor::dyadic(), Window::with_exponent(-Rational::one(), Rational::one(), 2)?),
        (GroupDescriptor::Rationals, Window::with_max_denominator(-Rational::one(), Rational::one(), 3)?),
    ])
}

fn random_case(group: &GroupDescriptor, w: &Window, rng: &mut ChaCha8Rng) -> Result<Value> {
    let h = random_homeo(group, rng)?;
    let t = TransportedGroup::new(h.clone())?;
    let d = t.shift_constant(&group.generator())?;
    let involution = h.invert().compose(&h.negation_like().compose(&h)?)?;
    let checks = [
        ("axioms", t.verify_axioms(w)?.status),
        ("isomorphism", t.verify_isomorphism(w)?.status),
        ("inversion_round_trip", round_trip(&t, &Role::Inversion, w)?.status),
        ("shift_round_trip", round_trip(&t, &Role::Shift(d), w)?.status),
        ("normal_form", normalize(&involution, w, HPolicy::Canonical)?.checks.status),
    ];
    let passed = checks.iter().all(|(_, s)| s.passed());
    let checks: serde_json::Map<String, Value> = checks.into_iter().map(|(k, s)| (k.to_string(), json!(s))).collect();
    Ok(json!({ "group": group.to_string(), "window": w, "h": h, "checks": checks, "ok": passed }))
}

fn selftest(name: &str, seed: u64, instances: usize) -> Result<Outcome> {
    let manifest: Manifest = corpus::parse("selftest.json")?;
    let cases: Vec<CaseResult> = manifest.cases.iter().map(run_case).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = Vec::new();
    for (group, w) in random_suite_groups()? {
        for _ in 0..instances {
            random.push(random_case(&group, &w, &mut rng)?);
        }
    }
    let passed = cases.iter().all(|c| c.ok) && random.iter().all(|r| r["ok"] == json!(true));
    let report = json!({ "seed": seed, "instances": instances, "corpus": cases, "random": random });
    Ok(Outcome::new(name, passed, report))
}
