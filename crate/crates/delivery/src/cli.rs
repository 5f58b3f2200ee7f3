//! Command-line driver. Exit codes: 0 feasible or valid, 1 infeasible or
//! invalid, 2 on any error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use delivery_core::gadget::{build_augmented_gadget, build_basic_gadget, schedule_from_assignment};
use delivery_core::{validate, ExactLimits, Rational, Variant};

use crate::bench::{run_suite, thread_count};
use crate::dimacs::parse_dimacs;
use crate::doc::{emit_instance, emit_report, emit_result, emit_roles, emit_schedule, parse_instance, parse_schedule};
use crate::generate::{random_graph, random_tree, GenParams};
use crate::solve::{solve, Algorithm, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "delivery", version, about = "Budgeted message delivery by mobile agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Returning,
    NonReturning,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Returning => Variant::Returning,
            VariantArg::NonReturning => Variant::NonReturning,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print a result document.
    Solve {
        #[arg(long)]
        algo: Algorithm,
        /// Agent order for fixed-order, e.g. `2,0,1`.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Override the instance's variant.
        #[arg(long)]
        variant: Option<VariantArg>,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Agent limit for the exact solver.
        #[arg(long, default_value_t = ExactLimits::default().max_agents)]
        max_agents: usize,
        /// Include solver timings in the diagnostics.
        #[arg(long)]
        timings: bool,
    },
    /// Check a schedule against an instance with budgets scaled by gamma.
    Validate {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(short = 's', long = "schedule")]
        schedule: PathBuf,
        #[arg(long, default_value = "1")]
        gamma: Rational,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve every instance in a directory.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "aug2,balanced,exact")]
        algo: Vec<Algorithm>,
        #[arg(long, default_value_t = ExactLimits::default().max_agents)]
        max_agents: usize,
        #[arg(long)]
        timings: bool,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RandomArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    vertices: usize,
    #[arg(long, default_value_t = 3)]
    agents: usize,
    #[arg(long, default_value_t = 4)]
    max_weight: i64,
    #[arg(long, default_value_t = 8)]
    max_budget: i64,
    #[arg(long, value_enum, default_value = "returning")]
    variant: VariantArg,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

impl RandomArgs {
    fn params(&self, extra_edges: usize) -> GenParams {
        GenParams {
            vertices: self.vertices,
            agents: self.agents,
            extra_edges,
            max_weight: self.max_weight,
            max_budget: self.max_budget,
            variant: self.variant.into(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    RandomTree {
        #[command(flatten)]
        common: RandomArgs,
    },
    RandomGraph {
        #[command(flatten)]
        common: RandomArgs,
        #[arg(long, default_value_t = 3)]
        extra_edges: usize,
    },
    /// Compile a DIMACS CNF into a gadget instance.
    Gadget {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, requires = "epsilon")]
        augmented: bool,
        #[arg(long, requires = "augmented")]
        epsilon: Option<Rational>,
        #[arg(long, value_enum, default_value = "returning")]
        variant: VariantArg,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Role map path; defaults to `<output>.roles.json` when writing to a file.
        #[arg(long)]
        roles: Option<PathBuf>,
        /// Variable values as a 0/1 string, e.g. `101`.
        #[arg(long, requires = "witness")]
        assignment: Option<String>,
        /// Where to write the schedule built from `--assignment`.
        #[arg(long, requires = "assignment")]
        witness: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn deliver(output: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(p) => write_file(p, text),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn parse_assignment(s: &str) -> Result<Vec<bool>, Failure> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Failure(format!("assignment must be a string of 0 and 1, got `{s}`"))),
        })
        .collect()
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Solve { algo, order, variant, input, output, max_agents, timings } => {
            let mut inst = parse_instance(&read(&input)?)?;
            if let Some(v) = variant {
                inst = inst.with_variant(v.into());
            }
            let opts = SolveOptions { order, limits: ExactLimits { max_agents }, timings };
            let result = solve(&inst, algo, &opts)?;
            deliver(&output, &emit_result(&result), stdout)?;
            Ok(if result.decision.is_positive() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Validate { input, schedule, gamma, output } => {
            let inst = parse_instance(&read(&input)?)?;
            let sched = parse_schedule(&read(&schedule)?, inst.graph())?;
            let report = validate(&inst, &sched, &gamma)?;
            deliver(&output, &emit_report(&report, &gamma), stdout)?;
            Ok(if report.ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Gen(GenCommand::RandomTree { common }) => {
            deliver(&common.output, &emit_instance(&random_tree(common.seed, &common.params(0))), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Gen(GenCommand::RandomGraph { common, extra_edges }) => {
            deliver(&common.output, &emit_instance(&random_graph(common.seed, &common.params(extra_edges))), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Gen(GenCommand::Gadget { cnf, augmented, epsilon, variant, output, roles, assignment, witness }) => {
            let cnf = parse_dimacs(&read(&cnf)?)?;
            let variant = variant.into();
            let gadget = match (augmented, epsilon) {
                (true, Some(eps)) => build_augmented_gadget(&cnf, &eps, variant)?,
                _ => build_basic_gadget(&cnf, variant)?,
            };
            deliver(&output, &emit_instance(&gadget.instance), stdout)?;
            let roles = roles.or_else(|| output.as_ref().map(|o| o.with_extension("roles.json")));
            if let Some(path) = roles {
                write_file(&path, &emit_roles(&gadget))?;
            }
            if let (Some(a), Some(path)) = (assignment, witness) {
                let sched = schedule_from_assignment(&gadget, &parse_assignment(&a)?)?;
                write_file(&path, &emit_schedule(&sched))?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { suite, algo, max_agents, timings, output } => {
            let opts = SolveOptions { order: None, limits: ExactLimits { max_agents }, timings };
            let report = run_suite(&suite, &algo, &opts, thread_count())?;
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            deliver(&output, &text, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_ERROR
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_command(std::iter::once("delivery").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, out, err) = run(&["solve", "--algo", "greedy", "-i", "x.json"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(out.is_empty());
        assert!(err.contains("greedy"));
        assert_eq!(run(&[]).0, EXIT_ERROR);
        assert_eq!(run(&["validate", "-i", "a", "-s", "b", "--gamma", "1/0"]).0, EXIT_ERROR);
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("solve"));
    }

    #[test]
    fn missing_file_is_an_error() {
        let (code, _, err) = run(&["solve", "--algo", "tree", "-i", "/nonexistent/instance.json"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn assignments() {
        assert_eq!(parse_assignment("101").unwrap(), vec![true, false, true]);
        assert!(parse_assignment("1x").is_err());
    }
}
