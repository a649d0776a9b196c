//! `boxprune` command-line driver.

mod bench;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use boxprune::bmc::{compare_runs, verify_incremental, ComparisonStatus, NondetPolicy, VerdictClass, DEFAULT_NONDET_CAP};
use boxprune::contractor::{partition, DEFAULT_EPS};
use boxprune::expr::{parse_constraint, SymbolTable};
use boxprune::pipeline::{analyze, instrument_program};
use boxprune::program::{emit_source, parse_program, ProgramIR};
use boxprune::sidecar::Sidecar;
use boxprune::{IntBox, Interval};

use report::Report;

#[derive(Parser)]
#[command(name = "boxprune", version, about = "Interval contractors for pruning bounded model checking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Contractor fixpoint tolerance.
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
}

#[derive(Args)]
struct Checker {
    /// Largest loop bound tried.
    #[arg(long, default_value_t = 1000)]
    k_max: usize,
    /// Largest number of values enumerated for one nondet variable.
    #[arg(long, default_value_t = DEFAULT_NONDET_CAP)]
    nondet_cap: u64,
    /// Restricts a nondet variable, as `var=lo..hi`. Repeatable.
    #[arg(long = "range", value_name = "VAR=LO..HI", value_parser = parse_range)]
    ranges: Vec<(String, i64, i64)>,
}

impl Checker {
    fn policy(&self, sidecar: Option<&Sidecar>) -> NondetPolicy {
        let mut p = NondetPolicy {
            cap: self.nondet_cap,
            ..NondetPolicy::default()
        };
        if let Some(s) = sidecar {
            p = s.policy(&p);
        }
        for (v, lo, hi) in &self.ranges {
            p = p.with_range(v, *lo, *hi);
        }
        p
    }
}

#[derive(Subcommand)]
enum Command {
    /// Contract a box against constraints, or the assertions of a program.
    Contract {
        /// Program whose assertions and domains are used.
        file: Option<PathBuf>,
        /// Variable domain as `var=lo..hi`; bounds may be `inf`/`-inf`.
        #[arg(long = "var", value_name = "VAR=LO..HI", value_parser = parse_domain)]
        vars: Vec<(String, Interval)>,
        /// Constraint over the `--var` variables. Repeatable.
        #[arg(long = "constraint", short = 'c')]
        constraints: Vec<String>,
        /// Treat every `--var` as integer valued.
        #[arg(long)]
        integral: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Insert pruning assumptions into a program.
    Instrument {
        file: PathBuf,
        /// Where to write the instrumented program (default: stdout).
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Model-check a program. Exit status: 0 safe, 1 unsafe, 2 unknown, 3 error.
    Verify {
        file: PathBuf,
        /// Also verify the instrumented program and compare.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        checker: Checker,
        #[command(flatten)]
        common: Common,
    },
    /// Run a directory of programs with `.expected` files.
    Bench {
        dir: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        checker: Checker,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_bound(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse::<f64>().map_err(|_| format!("bad bound `{t}`")),
    }
}

fn split_spec(s: &str) -> Result<(&str, &str, &str), String> {
    let (var, rest) = s.split_once('=').ok_or_else(|| format!("expected VAR=LO..HI, got `{s}`"))?;
    let (lo, hi) = rest.split_once("..").ok_or_else(|| format!("expected LO..HI, got `{rest}`"))?;
    Ok((var.trim(), lo, hi))
}

fn parse_domain(s: &str) -> Result<(String, Interval), String> {
    let (var, lo, hi) = split_spec(s)?;
    let (lo, hi) = (parse_bound(lo)?, parse_bound(hi)?);
    if lo > hi {
        return Err(format!("empty domain for `{var}`"));
    }
    Ok((var.to_string(), Interval::new(lo, hi)))
}

fn parse_range(s: &str) -> Result<(String, i64, i64), String> {
    let (var, lo, hi) = split_spec(s)?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad bound `{lo}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range for `{var}`"));
    }
    Ok((var.to_string(), lo, hi))
}

fn load(path: &Path) -> Result<ProgramIR> {
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_program(&src).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn sidecar_for(path: &Path) -> Result<Option<Sidecar>> {
    let side = path.with_extension("expected");
    if !side.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&side)?;
    Ok(Some(Sidecar::parse(&text).map_err(|e| anyhow!("{}: {e}", side.display()))?))
}

fn exit_for(class: VerdictClass) -> u8 {
    match class {
        VerdictClass::Safe => 0,
        VerdictClass::Unsafe => 1,
        VerdictClass::Unknown => 2,
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Contract {
            file,
            vars,
            constraints,
            integral,
            common,
        } => {
            let report = match file {
                Some(path) => {
                    if !vars.is_empty() || !constraints.is_empty() {
                        bail!("give either a program or --var/--constraint, not both");
                    }
                    let p = load(&path)?;
                    let a = analyze(&p, common.eps)?;
                    report::analysis(&path.display().to_string(), &a)
                }
                None => {
                    if vars.is_empty() || constraints.is_empty() {
                        bail!("need a program, or at least one --var and one --constraint");
                    }
                    let b = IntBox::new(vars.iter().map(|(n, iv)| (n.clone(), *iv)));
                    let symbols = SymbolTable::new(vars.iter().map(|(n, _)| n.clone()));
                    let cs = constraints
                        .iter()
                        .map(|c| parse_constraint(c, &symbols).map_err(|e| anyhow!("`{c}`: {e}")))
                        .collect::<Result<Vec<_>>>()?;
                    let mask = vec![integral; vars.len()];
                    let part = partition(&b, &cs, &mask, common.eps)?;
                    report::contraction(&constraints, &part)
                }
            };
            report.print(common.format);
            Ok(0)
        }
        Command::Instrument { file, out, common } => {
            let p = load(&file)?;
            let (q, a) = instrument_program(&p, common.eps)?;
            let source = emit_source(&q);
            let mut report = report::analysis(&file.display().to_string(), &a);
            match &out {
                Some(path) => {
                    std::fs::write(path, &source).with_context(|| format!("writing {}", path.display()))?;
                    report.field("output", path.display().to_string());
                    report.print(common.format);
                }
                None if common.format == Format::Machine => {
                    report.field("source", source);
                    report.print(common.format);
                }
                None => {
                    print!("{source}");
                    report.eprint();
                }
            }
            Ok(0)
        }
        Command::Verify {
            file,
            compare,
            checker,
            common,
        } => {
            let p = load(&file)?;
            let policy = checker.policy(sidecar_for(&file)?.as_ref());
            let name = file.display().to_string();
            if compare {
                let (q, a) = instrument_program(&p, common.eps)?;
                let cmp = compare_runs(&p, &q, checker.k_max, &policy)?;
                let mut report = Report::new("comparison");
                report.field("program", name);
                report.line(format!("plan: {}", report::plan_text(&a.plan)));
                report.value("plan", serde_json::to_value(&a.plan)?);
                report::add_comparison(&mut report, &cmp);
                report.print(common.format);
                if cmp.status == ComparisonStatus::VerdictDivergence {
                    return Ok(3);
                }
                Ok(exit_for(cmp.original.class))
            } else {
                let v = verify_incremental(&p, checker.k_max, &policy)?;
                let mut report = Report::new("verification");
                report.field("program", name);
                report::add_verdict(&mut report, &v);
                report.print(common.format);
                Ok(exit_for(v.class))
            }
        }
        Command::Bench {
            dir,
            out,
            checker,
            common,
        } => {
            let report = bench::run(&dir, &checker, common.eps)?;
            match out {
                Some(path) => std::fs::write(&path, report.render(common.format))
                    .with_context(|| format!("writing {}", path.display()))?,
                None => report.print(common.format),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
