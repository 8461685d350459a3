//! Command-line front end.
//!
//! Exit codes: 0 when every requested check passes, 1 when any fails, 2 on
//! usage, input or engine errors.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{builtin, builtin_names, ScenarioSpec};
use crate::par::Execution;
use crate::ring::BaseGeometry;
use crate::verify::{dimension_cap, run_batch, Check, Job, VerificationReport, MAX_DIM_ENV};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "verdier",
    version,
    about = "Check specialization identities of elliptic fibrations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in families.
    List,
    /// Formal identity check (formal base) or tadpole ledger (projective base).
    Check(RunArgs),
    /// Compare the formal and numeric pipelines on a projective base.
    CrossCheck(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Built-in family name, or `all`.
    #[arg(long, conflicts_with = "scenario")]
    pub family: Option<String>,
    /// Scenario file in the catalog JSON format.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// `formal` or `P<n>`.
    #[arg(long)]
    pub base: String,
    /// Dimension of a formal base.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Degree of L on a projective base.
    #[arg(long = "L")]
    pub l: Option<i64>,
    /// Degree of S on a projective base.
    #[arg(long = "S")]
    pub s: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the reports here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run checks one after another.
    #[arg(long)]
    pub sequential: bool,
}

/// Where a check runs.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseSpec {
    Formal { dim: u32 },
    Projective(BaseGeometry),
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub cross_check: bool,
    pub families: Vec<Arc<ScenarioSpec>>,
    pub base: BaseSpec,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub exec: Execution,
}

fn parse_projective(s: &str) -> Option<u32> {
    let n = s.strip_prefix(['P', 'p'])?;
    n.parse().ok().filter(|n| *n >= 1)
}

impl CliConfig {
    pub fn from_args(args: &RunArgs, cross_check: bool) -> anyhow::Result<Self> {
        let all = args.family.as_deref() == Some("all");
        let families: Vec<Arc<ScenarioSpec>> = match (&args.family, &args.scenario) {
            (_, Some(path)) => {
                let src = std::fs::read_to_string(path)
                    .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
                vec![Arc::new(ScenarioSpec::from_json(&src)?)]
            }
            (Some(_), None) if all => builtin_names()
                .iter()
                .map(|n| builtin(n).map(Arc::new))
                .collect::<Result<_, _>>()?,
            (Some(name), None) => vec![Arc::new(builtin(name)?)],
            (None, None) => anyhow::bail!("one of --family or --scenario is required"),
        };

        let base = if args.base == "formal" {
            let dim = args
                .dim
                .ok_or_else(|| anyhow::anyhow!("--dim is required with --base formal"))?;
            if args.l.is_some() || args.s.is_some() {
                anyhow::bail!("--L and --S only apply to a projective base");
            }
            if cross_check {
                anyhow::bail!("cross-check needs a projective base, not a formal one");
            }
            let cap = dimension_cap();
            if dim == 0 || dim > cap {
                anyhow::bail!("--dim {dim} outside 1..={cap} (raise the cap with {MAX_DIM_ENV})");
            }
            BaseSpec::Formal { dim }
        } else {
            let n = parse_projective(&args.base)
                .ok_or_else(|| anyhow::anyhow!("malformed base `{}`; expected `formal` or `P<n>`", args.base))?;
            if args.dim.is_some() {
                anyhow::bail!("--dim only applies to a formal base");
            }
            let l = args
                .l
                .ok_or_else(|| anyhow::anyhow!("--L is required with a projective base"))?;
            let mut base = BaseGeometry::projective(n).with_assignment("L", l);
            match args.s {
                Some(s) => base = base.with_assignment("S", s),
                // a batch over every family still covers the S-twisted one
                None if all => base = base.with_assignment("S", 0),
                None => {}
            }
            BaseSpec::Projective(base)
        };

        Ok(CliConfig {
            cross_check,
            families,
            base,
            format: args.format,
            out: args.out.clone(),
            exec: if args.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
        })
    }

    pub fn jobs(&self) -> Vec<Job> {
        let check = match (&self.base, self.cross_check) {
            (BaseSpec::Formal { dim }, _) => Check::Formal { dim: *dim },
            (BaseSpec::Projective(b), false) => Check::Numeric(b.clone()),
            (BaseSpec::Projective(b), true) => Check::CrossCheck(b.clone()),
        };
        self.families
            .iter()
            .map(|spec| Job {
                spec: spec.clone(),
                check: check.clone(),
            })
            .collect()
    }
}

pub fn render(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Markdown => reports.iter().map(VerificationReport::to_markdown).collect(),
    }
}

/// Runs a validated configuration, writing reports to `--out` or `stdout`.
pub fn execute(config: &CliConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let results = run_batch(&config.jobs(), config.exec);
    let mut reports = Vec::with_capacity(results.len());
    for (r, spec) in results.into_iter().zip(&config.families) {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", spec.name);
                return EXIT_ERROR;
            }
        }
    }
    let text = render(&reports, config.format);
    let written = match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_ERROR;
    }
    if reports.iter().all(VerificationReport::passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (args, cross_check) = match &cli.command {
        Command::List => {
            for name in builtin_names() {
                let spec = builtin(name).expect("built-in family");
                let _ = writeln!(stdout, "{name}\t{}", spec.description);
            }
            return EXIT_PASS;
        }
        Command::Check(a) => (a, false),
        Command::CrossCheck(a) => (a, true),
    };
    match CliConfig::from_args(args, cross_check) {
        Ok(config) => execute(&config, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("verdier").chain(args.iter().copied())).unwrap()
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(parse(args), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn projective_names() {
        assert_eq!(parse_projective("P2"), Some(2));
        assert_eq!(parse_projective("p3"), Some(3));
        assert_eq!(parse_projective("P0"), None);
        assert_eq!(parse_projective("Q2"), None);
        assert_eq!(parse_projective("P"), None);
    }

    #[test]
    fn formal_check_passes() {
        let (code, out, _) = run_args(&["check", "--family", "weierstrass", "--base", "formal", "--dim", "2"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("\"verdict\": \"pass\""));
    }

    #[test]
    fn config_errors_exit_2() {
        for args in [
            &["check", "--family", "weierstrass", "--base", "formal"][..],
            &["check", "--family", "weierstrass", "--base", "P2"],
            &["check", "--family", "weierstrass", "--base", "X2", "--L", "3"],
            &["check", "--family", "nope", "--base", "P1", "--L", "2"],
            &["check", "--family", "q7", "--base", "P2", "--L", "3"],
            &[
                "check",
                "--family",
                "weierstrass",
                "--base",
                "formal",
                "--dim",
                "2",
                "--L",
                "3",
            ],
            &[
                "cross-check",
                "--family",
                "weierstrass",
                "--base",
                "formal",
                "--dim",
                "2",
            ],
        ] {
            let (code, _, err) = run_args(args);
            assert_eq!(code, EXIT_ERROR, "{args:?}");
            assert!(err.starts_with("error:"), "{args:?}");
        }
    }

    #[test]
    fn list_names_every_family() {
        let (code, out, _) = run_args(&["list"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.lines().count(), builtin_names().len());
    }
}
