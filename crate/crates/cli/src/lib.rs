//! `flexkin` command line: analyses over the core toolkit, reported as versioned JSON.

pub mod svg;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use flexkin_core::averaging::{average, classify_pair};
use flexkin_core::families::catalog::verify_example;
use flexkin_core::families::{
    build_pair, eval_line_f64, line_average, solve_orientations, verify_theorem, FamilyOutcome, FamilySpec, FamilyTag,
    Orientation, OrientationStatus,
};
use flexkin_core::flexion::classify_configuration;
use flexkin_core::geometry::{ManipulatorDesign, SixConfig};
use flexkin_core::kinematics::{build_constraints, solve_direct_kinematics, DkOutcome};
use flexkin_core::ratpoly::{format_rational, Rational};
use flexkin_core::stachel::stachel_check;
use flexkin_core::Error;

pub const SCHEMA: &str = "flexkin.report/v1";

#[derive(Parser, Debug)]
#[command(name = "flexkin", version, about = "Flexion order of averaged 3-RPR configurations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// JSON input file.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Write an SVG figure of the (averaged) configuration here.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    /// Numeric tolerance for floating-point checks.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the direct kinematics of a design (base, platform, legs).
    Dk(Common),
    /// Flexion order of the identity pose of a six-point configuration.
    Classify(Common),
    /// Average two realisations `{"first": .., "second": ..}` and classify the result.
    Average(Common),
    /// Orientations raising the flexion order of a family with free `f0, f1`.
    Synthesize(Common),
    /// Rebuild a worked example end to end and compare every printed value.
    VerifyExample {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
        n: u8,
        #[command(flatten)]
        common: Common,
    },
    /// Randomised property checks for one family tag.
    VerifyTheorem {
        tag: String,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a configuration, or a family with fixed orientation, as SVG.
    Render(Common),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dk(_) => "dk",
            Command::Classify(_) => "classify",
            Command::Average(_) => "average",
            Command::Synthesize(_) => "synthesize",
            Command::VerifyExample { .. } => "verify-example",
            Command::VerifyTheorem { .. } => "verify-theorem",
            Command::Render(_) => "render",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Dk(c) | Command::Classify(c) | Command::Average(c) | Command::Synthesize(c) | Command::Render(c) => c,
            Command::VerifyExample { common, .. } | Command::VerifyTheorem { common, .. } => common,
        }
    }

    /// Only the arguments the command reads, as given.
    fn echo(&self) -> BTreeMap<String, String> {
        let c = self.common();
        let mut m = BTreeMap::new();
        if let Some(p) = &c.input {
            m.insert("input".into(), p.display().to_string());
        }
        if let Some(p) = &c.svg {
            m.insert("svg".into(), p.display().to_string());
        }
        match self {
            Command::VerifyExample { n, .. } => {
                m.insert("n".into(), n.to_string());
            }
            Command::VerifyTheorem { tag, .. } => {
                m.insert("tag".into(), tag.clone());
                m.insert("trials".into(), c.trials.to_string());
                m.insert("seed".into(), c.seed.to_string());
            }
            Command::Dk(_) | Command::Classify(_) | Command::Average(_) => {
                m.insert("tol".into(), format!("{:e}", c.tol));
            }
            _ => {}
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitStatus {
    Ok,
    AssertionFailure,
    BadInput,
    SelfMotion,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::AssertionFailure => 1,
            ExitStatus::BadInput => 2,
            ExitStatus::SelfMotion => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: CommandEcho,
    /// `sha256:` of the input file, or of the echoed arguments when there is none.
    pub input_digest: String,
    pub status: ExitStatus,
    pub exit_code: i32,
    pub result: Value,
    /// Human-readable lines; the JSON form carries the same facts.
    #[serde(skip)]
    pub summary: Vec<String>,
}

/// A finished command: its report and, if one was drawn, the SVG text.
#[derive(Debug)]
pub struct Execution {
    pub report: RunReport,
    pub svg: Option<String>,
}

struct Outcome {
    status: ExitStatus,
    result: Value,
    summary: Vec<String>,
    svg: Option<String>,
}

impl Outcome {
    fn new(status: ExitStatus, result: Value, summary: Vec<String>) -> Self {
        Outcome { status, result, summary, svg: None }
    }
}

fn bad_input(msg: impl Into<String>) -> Outcome {
    let msg = msg.into();
    Outcome::new(ExitStatus::BadInput, json!({ "error": msg }), vec![format!("error: {msg}")])
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Runs a parsed command without touching stdout or the SVG path.
pub fn execute(cli: &Cli) -> Execution {
    let cmd = &cli.command;
    let args = cmd.echo();
    let input = cmd.common().input.as_ref().map(|p| std::fs::read(p).map_err(|e| format!("{}: {e}", p.display())));
    let input_digest = match &input {
        Some(Ok(bytes)) => digest(bytes),
        _ => {
            let canon: Vec<String> = args.iter().map(|(k, v)| format!("{k}={v}")).collect();
            digest(format!("{} {}", cmd.name(), canon.join(" ")).as_bytes())
        }
    };
    let out = match (cmd, input) {
        (_, Some(Err(e))) => bad_input(e),
        (Command::VerifyExample { n, common }, _) => cmd_verify_example(*n, common),
        (Command::VerifyTheorem { tag, common }, _) => cmd_verify_theorem(tag, common),
        (_, None) => bad_input(format!("`{}` needs --input FILE", cmd.name())),
        (c, Some(Ok(bytes))) => match std::str::from_utf8(&bytes) {
            Err(_) => bad_input("input is not UTF-8"),
            Ok(text) => match c {
                Command::Dk(common) => cmd_dk(text, common),
                Command::Classify(common) => cmd_classify(text, common),
                Command::Average(common) => cmd_average(text, common),
                Command::Synthesize(_) => cmd_synthesize(text),
                Command::Render(_) => cmd_render(text),
                _ => unreachable!("handled above"),
            },
        },
    };
    let Outcome { status, result, summary, svg } = out;
    let svg = svg.filter(|_| cmd.common().svg.is_some() || matches!(cmd, Command::Render(_)));
    Execution {
        report: RunReport {
            schema: SCHEMA,
            command: CommandEcho { name: cmd.name().into(), args },
            input_digest,
            status,
            exit_code: status.code(),
            result,
            summary,
        },
        svg,
    }
}

/// Executes, writes the SVG if asked, prints the report and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let Execution { mut report, svg } = execute(cli);
    let svg_path = cli.command.common().svg.clone();
    match (&svg, &svg_path) {
        (Some(text), Some(path)) => {
            if let Err(e) = std::fs::write(path, text) {
                report.status = ExitStatus::BadInput;
                report.exit_code = report.status.code();
                report.summary.push(format!("error: cannot write {}: {e}", path.display()));
            }
        }
        (Some(text), None) => print!("{text}"),
        _ => {}
    }
    let to_stderr = svg.is_some() && svg_path.is_none();
    if cli.json {
        let s = serde_json::to_string_pretty(&report).expect("report serializes");
        if to_stderr {
            eprintln!("{s}");
        } else {
            println!("{s}");
        }
    } else {
        for line in &report.summary {
            if to_stderr || report.status != ExitStatus::Ok && line.starts_with("error") {
                eprintln!("{line}");
            } else {
                println!("{line}");
            }
        }
        let status = format!("status: {}", to_value(&report.status).as_str().unwrap_or("?"));
        if to_stderr {
            eprintln!("{status}");
        } else {
            println!("{status}");
        }
    }
    report.exit_code
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, Outcome> {
    serde_json::from_str(text).map_err(|e| bad_input(format!("malformed {what}: {e}")))
}

fn cmd_dk(text: &str, c: &Common) -> Outcome {
    let design: ManipulatorDesign = match parse(text, "design") {
        Ok(d) => d,
        Err(o) => return o,
    };
    let outcome = match solve_direct_kinematics(&build_constraints(&design)) {
        Ok(o) => o,
        Err(e) => return bad_input(e.to_string()),
    };
    match outcome {
        DkOutcome::SelfMotion { reason } => Outcome::new(
            ExitStatus::SelfMotion,
            json!({ "status": "self-motion", "reason": reason }),
            vec![format!("self-motion: {reason}")],
        ),
        DkOutcome::Solutions { solutions, eliminant_degree } => {
            // an exact pose is the stronger identity test; the numeric one covers irrational fibers
            let is_id = |s: &flexkin_core::kinematics::DkSolution| match &s.exact {
                Some(p) => p.is_identity(),
                None => s.is_identity(c.tol.max(1e-9).sqrt()),
            };
            let identity_multiplicity: usize = solutions.iter().filter(|s| is_id(s)).map(|s| s.multiplicity).sum();
            let real: usize = solutions.iter().filter(|s| s.is_real).map(|s| s.multiplicity).sum();
            let max_residual = solutions.iter().filter(|s| s.is_real).map(|s| s.residual).fold(0.0, f64::max);
            let rows: Vec<Value> = solutions
                .iter()
                .map(|s| {
                    let mut v = to_value(s);
                    v["identity"] = json!(is_id(s));
                    if let Some(p) = &s.exact {
                        v["exact_q"] = json!(p.q().iter().map(format_rational).collect::<Vec<_>>());
                    }
                    v
                })
                .collect();
            let mut summary = vec![format!(
                "{} solutions with multiplicity ({} real), {} distinct",
                eliminant_degree,
                real,
                solutions.len()
            )];
            for s in &solutions {
                let q: Vec<String> = s.q.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
                summary.push(format!(
                    "  q = ({})  mult {}  {}  residual {:.1e}{}",
                    q.join(", "),
                    s.multiplicity,
                    if s.is_real { "real" } else { "complex" },
                    s.residual,
                    if is_id(s) { "  [identity]" } else { "" }
                ));
            }
            if identity_multiplicity > 0 {
                summary.push(format!("identity multiplicity {identity_multiplicity}"));
            }
            Outcome::new(
                ExitStatus::Ok,
                json!({
                    "status": "solutions",
                    "eliminant_degree": eliminant_degree,
                    "real_count": real,
                    "identity_multiplicity": identity_multiplicity,
                    "max_real_residual": max_residual,
                    "solutions": rows,
                }),
                summary,
            )
        }
    }
}

fn classify_value(config: &SixConfig, tol: f64) -> Result<(Value, Vec<String>), Error> {
    let r = classify_configuration(config)?;
    let st = stachel_check(config, tol);
    let summary = vec![
        format!("class {:?}", r.classification),
        format!("s = {}", format_rational(&r.s_at_pose)),
        format!(
            "stachel {:?}: {}{}",
            st.mode,
            if st.passes { "pass" } else { "fail" },
            st.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
        ),
    ];
    Ok((json!({ "flexion": to_value(&r), "stachel": to_value(&st) }), summary))
}

fn cmd_classify(text: &str, c: &Common) -> Outcome {
    let config: SixConfig = match parse(text, "configuration") {
        Ok(v) => v,
        Err(o) => return o,
    };
    let mut out = match classify_value(&config, c.tol) {
        Ok((v, s)) => Outcome::new(ExitStatus::Ok, v, s),
        Err(e) => return bad_input(e.to_string()),
    };
    out.svg = Some(svg::render(&config.to_f64(), "configuration"));
    out
}

#[derive(Deserialize)]
struct PairInput {
    first: SixConfig,
    second: SixConfig,
}

fn cmd_average(text: &str, c: &Common) -> Outcome {
    let pair: PairInput = match parse(text, "pair") {
        Ok(v) => v,
        Err(o) => return o,
    };
    let avg = match average(&pair.first, &pair.second) {
        Ok(a) => a,
        Err(e) => return bad_input(e.to_string()),
    };
    let class = classify_pair(&pair.first, &pair.second).ok();
    let mut summary = vec![];
    if let Some(p) = &class {
        summary.push(format!("pair set {:?}, motion {:?}", p.set, p.motion));
    }
    let mut result = json!({ "pair": to_value(&class), "average": to_value(&avg) });
    let status = if avg.is_valid() {
        match classify_value(&avg.config, c.tol) {
            Ok((v, s)) => {
                result["classification"] = v;
                summary.extend(s);
                ExitStatus::Ok
            }
            Err(e) => return bad_input(e.to_string()),
        }
    } else {
        summary.push(format!(
            "degenerate average: zero-length legs {:?}, coincident legs {:?}",
            avg.zero_length_legs.iter().map(|i| i + 1).collect::<Vec<_>>(),
            avg.coincident_legs.iter().map(|(i, j)| (i + 1, j + 1)).collect::<Vec<_>>()
        ));
        ExitStatus::SelfMotion
    };
    let mut out = Outcome::new(status, result, summary);
    out.svg = Some(svg::render(&avg.config.to_f64(), "averaged configuration"));
    out
}

/// Averaged configuration at one orientation, exactly when the orientation is rational.
fn orientation_points(spec: &FamilySpec, o: Option<&Orientation>) -> Result<[[f64; 2]; 6], Error> {
    let exact = |f0: Rational, f1: Rational| -> Result<[[f64; 2]; 6], Error> {
        let (a, b) = build_pair(&spec.with_orientation(f0, f1)?)?;
        Ok(flexkin_core::averaging::midpoints(&a, &b).to_f64())
    };
    match o {
        None => exact(Rational::from_integer(1.into()), Rational::from_integer(0.into())),
        Some(o) if o.f0 == 0 => exact(Rational::from_integer(0.into()), Rational::from_integer(1.into())),
        Some(o) => match o.f1_rational() {
            Some(f) => exact(Rational::from_integer(1.into()), f),
            None => Ok(eval_line_f64(&line_average(spec)?, o.f1)),
        },
    }
}

fn orientation_line(o: &Orientation) -> String {
    let f1 = o.f1_exact.clone().unwrap_or_else(|| format!("{:.15}", o.f1));
    let mut s = format!("(f0 : f1) = ({} : {})  {:?}", o.f0, f1, o.status);
    if let Some(c) = o.class {
        s.push_str(&format!("  class {c:?}"));
    }
    if let Some(m) = o.identity_multiplicity {
        s.push_str(&format!("  identity multiplicity {m}"));
    }
    if let Some(st) = &o.stachel {
        s.push_str(&format!("  stachel {}", if st.passes { "pass" } else { "fail" }));
    }
    for n in &o.notes {
        s.push_str(&format!("\n    note: {n}"));
    }
    s
}

fn cmd_synthesize(text: &str) -> Outcome {
    let spec: FamilySpec = match parse(text, "family spec") {
        Ok(v) => v,
        Err(o) => return o,
    };
    if spec.orientation().is_some() {
        return bad_input("synthesize solves for the orientation; leave f0 and f1 out");
    }
    let report = match solve_orientations(&spec) {
        Ok(r) => r,
        Err(e) => return bad_input(e.to_string()),
    };
    let cond = to_value(&report.theorem.condition);
    let mut summary = vec![format!("{}: condition {}", spec.tag(), cond.as_str().map(str::to_string).unwrap_or(cond.to_string()))];
    summary.extend(report.parameter_notes.iter().map(|n| format!("note: {n}")));
    let status = match &report.outcome {
        FamilyOutcome::SelfMotion { reason } => {
            summary.push(format!("self-motion: {reason}"));
            ExitStatus::SelfMotion
        }
        FamilyOutcome::NoCondition => {
            summary.push("no orientation raises the flexion order".into());
            ExitStatus::Ok
        }
        FamilyOutcome::EveryOrientation { class } => {
            summary.push(format!("every orientation raises the order ({class:?})"));
            ExitStatus::Ok
        }
        FamilyOutcome::Orientations => {
            summary.push(format!("{} real orientation(s)", report.orientations.len()));
            summary.extend(report.orientations.iter().map(orientation_line));
            ExitStatus::Ok
        }
    };
    let mut out = Outcome::new(status, to_value(&report), summary);
    if status == ExitStatus::Ok {
        let pick = report
            .orientations
            .iter()
            .find(|o| o.status == OrientationStatus::OrderRaising)
            .or(report.orientations.first());
        match orientation_points(&report.spec, pick) {
            Ok(p) => out.svg = Some(svg::render(&p, &format!("{} averaged configuration", spec.tag()))),
            Err(e) => out.summary.push(format!("no figure: {e}")),
        }
    }
    out
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Drawable {
    Config(SixConfig),
    Family(FamilySpec),
}

fn cmd_render(text: &str) -> Outcome {
    let d: Drawable = match parse(text, "configuration or family spec") {
        Ok(v) => v,
        Err(o) => return o,
    };
    let (points, title) = match d {
        Drawable::Config(c) => (c.to_f64(), "configuration".to_string()),
        Drawable::Family(spec) => {
            let Some((f0, f1)) = spec.orientation() else {
                return bad_input("a family spec needs f0 and f1 to be drawn");
            };
            match build_pair(&spec) {
                Ok((a, b)) => (
                    flexkin_core::averaging::midpoints(&a, &b).to_f64(),
                    format!("{} at ({} : {})", spec.tag(), format_rational(&f0), format_rational(&f1)),
                ),
                Err(e) => return bad_input(e.to_string()),
            }
        }
    };
    let rows: Vec<Value> = points.iter().map(|p| json!(p)).collect();
    let mut out = Outcome::new(ExitStatus::Ok, json!({ "title": title, "points": rows }), vec![format!("rendered {title}")]);
    out.svg = Some(svg::render(&points, &title));
    out
}

fn cmd_verify_example(n: u8, c: &Common) -> Outcome {
    let report = match verify_example(n) {
        Ok(r) => r,
        Err(e) => return bad_input(e.to_string()),
    };
    let mut summary = vec![format!("example {n}: {}", report.spec.tag())];
    for ch in &report.checks {
        if ch.passes {
            summary.push(format!("  ok    {}: {}", ch.name, ch.found));
        } else {
            summary.push(format!("  FAIL  {}\n    - expected {}\n    + found    {}", ch.name, ch.expected, ch.found));
        }
    }
    summary.extend(report.notes.iter().map(|n| format!("  note: {n}")));
    let status = if report.passes { ExitStatus::Ok } else { ExitStatus::AssertionFailure };
    let mut out = Outcome::new(status, to_value(&report), summary);
    if c.svg.is_some() {
        let pick = report.orientations.orientations.iter().find(|o| o.status == OrientationStatus::OrderRaising);
        if let Ok(p) = orientation_points(&report.orientations.spec, pick) {
            out.svg = Some(svg::render(&p, &format!("example {n}")));
        }
    }
    out
}

fn cmd_verify_theorem(tag: &str, c: &Common) -> Outcome {
    let tag: FamilyTag = match tag.parse() {
        Ok(t) => t,
        Err(e) => return bad_input(format!("{e}; known tags: {}", FamilyTag::ALL.map(|t| t.as_str()).join(", "))),
    };
    let report = verify_theorem(tag, c.trials, c.seed);
    let mut summary = vec![format!(
        "{tag}: {}/{} trials passed (seed {}, {} rejected draws)",
        report.passed_trials, report.trials, report.seed, report.rejected_draws
    )];
    summary.extend(report.checks.iter().map(|(k, v)| format!("  {k}: {v}")));
    for ce in &report.counterexamples {
        summary.push(format!("  counterexample trial {}: {:?} {}: {}", ce.trial, ce.spec, ce.check, ce.detail));
    }
    let status = if report.passes() { ExitStatus::Ok } else { ExitStatus::AssertionFailure };
    Outcome::new(status, to_value(&report), summary)
}

/// Shorthand for tests: `flexkin` followed by `args`.
pub fn parse_args<I, S>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(std::iter::once("flexkin".into()).chain(args.into_iter().map(Into::into)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let codes = [ExitStatus::Ok, ExitStatus::AssertionFailure, ExitStatus::BadInput, ExitStatus::SelfMotion].map(|s| s.code());
        assert_eq!(codes, [0, 1, 2, 3]);
    }

    #[test]
    fn missing_input_is_bad_input() {
        let cli = parse_args(["dk"]).unwrap();
        assert_eq!(execute(&cli).report.exit_code, 2);
    }

    #[test]
    fn unknown_tag_is_bad_input() {
        let cli = parse_args(["verify-theorem", "Z-nothing", "--trials", "1"]).unwrap();
        assert_eq!(execute(&cli).report.status, ExitStatus::BadInput);
    }

    #[test]
    fn example_number_is_range_checked() {
        assert!(parse_args(["verify-example", "8"]).is_err());
    }

    #[test]
    fn digest_without_input_depends_on_arguments() {
        let a = execute(&parse_args(["verify-theorem", "nope", "--seed", "1"]).unwrap()).report.input_digest;
        let b = execute(&parse_args(["verify-theorem", "nope", "--seed", "2"]).unwrap()).report.input_digest;
        assert_ne!(a, b);
        assert!(a.starts_with("sha256:") && a.len() == 7 + 64);
    }
}
