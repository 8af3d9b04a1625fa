//! `mrv`: verify, run and monitor stream programs.
//!
//! Exit status: 0 on success, 1 when a program is rejected, fails
//! verification, traps at run time or violates its annotation under the
//! monitor, 2 on usage and I/O errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use mrv::ast::Program;
use mrv::checks::check_program;
use mrv::corpus;
use mrv::devices::DeviceTable;
use mrv::smt::model::Replay;
use mrv::smt::Solver;
use mrv::temporal::Verdict;
use mrv::trace::{self, Monitor, PropertyVerdict, Trace};
use mrv::typing::{verify_program, Outcome, Report, VerifyOptions};

#[derive(Parser)]
#[command(name = "mrv", version, about = "Verify, run and monitor synchronous stream programs")]
struct Cli {
    /// Solver command line, e.g. `z3` or `cvc5 --lang=smt2 --incremental`.
    /// Defaults to $MRV_SOLVER, then `z3`.
    #[arg(long, global = true, value_name = "CMD")]
    solver: Option<String>,
    /// Write one SMT-LIB script per obligation into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    smt_dump: Option<PathBuf>,
    /// Per-obligation solver timeout in seconds.
    #[arg(long, global = true, value_name = "S", default_value_t = 10.0)]
    timeout: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a program's refinement annotations with the SMT solver.
    Verify {
        /// Program file, or the name of a bundled example.
        file: String,
        /// Also write the report as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Execute a program and write its trace.
    Run {
        /// Program file, or the name of a bundled example.
        file: String,
        /// Number of instants to execute.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Read sensors from the device table and log actuator writes.
        #[arg(long, requires = "devices")]
        robot_mode: bool,
        /// JSON object mapping device keys to arrays of readings.
        #[arg(long, value_name = "PATH")]
        devices: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Check annotations on the trace and fail on a violation.
        #[arg(long)]
        monitor: bool,
        /// Run without verifying first.
        #[arg(long)]
        unchecked: bool,
        /// Trace destination; standard output by default.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Check a program's annotations against a recorded trace.
    Monitor {
        /// Program file, or the name of a bundled example.
        file: String,
        /// Trace written by `run`; the format follows the extension.
        #[arg(long, value_name = "PATH")]
        trace: PathBuf,
    },
    /// Bundled example programs.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List examples with their kind and summary.
    List,
    /// Print an example's source.
    Show { name: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

/// Failure carrying its exit status.
struct Fail(u8, String);

impl Fail {
    fn usage(msg: impl std::fmt::Display) -> Fail {
        Fail(2, msg.to_string())
    }

    fn rejected(msg: impl std::fmt::Display) -> Fail {
        Fail(1, msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("mrv: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Fail> {
    match &cli.command {
        Command::Verify { file, json } => cmd_verify(cli, file, json.as_deref()),
        Command::Run { file, steps, robot_mode, devices, format, monitor, unchecked, output } => {
            let devices = match (robot_mode, devices) {
                (true, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
                    Some(DeviceTable::from_json(&text).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?)
                }
                _ => None,
            };
            let opts = RunOpts { steps: *steps, devices, format: *format, monitor: *monitor, unchecked: *unchecked };
            cmd_run(cli, file, &opts, output.as_deref())
        }
        Command::Monitor { file, trace } => cmd_monitor(file, trace),
        Command::Corpus { command: CorpusCommand::List } => {
            for e in corpus::EXAMPLES {
                let kind = match e.kind {
                    corpus::Kind::Good => "good".to_string(),
                    corpus::Kind::Mutation { of } => format!("mutation of {of}"),
                };
                println!("{:<28} {:<34} {}", e.name, kind, e.summary());
            }
            Ok(0)
        }
        Command::Corpus { command: CorpusCommand::Show { name } } => {
            let e = corpus::get(name).ok_or_else(|| Fail::usage(format!("no bundled example `{name}`")))?;
            print!("{}", e.source);
            Ok(0)
        }
    }
}

/// Reads `file`, falling back to the bundled example of that name.
fn load(file: &str) -> Result<(String, Program), Fail> {
    let path = Path::new(file);
    let (name, src) = match std::fs::read_to_string(path) {
        Ok(src) => (file.to_string(), src),
        Err(e) => match corpus::get(file) {
            Some(ex) if !path.exists() => (ex.name.to_string(), ex.source.to_string()),
            _ => return Err(Fail::usage(format!("{file}: {e}"))),
        },
    };
    let p = mrv::syntax::parse_program(&src).map_err(|e| Fail::rejected(format!("{name}:{e}")))?;
    check_program(&p).map_err(|e| Fail::rejected(format!("{name}: {e}")))?;
    Ok((name, p))
}

fn solver(cli: &Cli) -> Result<Solver, Fail> {
    if !(cli.timeout.is_finite() && cli.timeout > 0.0) {
        return Err(Fail::usage("--timeout must be a positive number of seconds"));
    }
    let s = Solver::resolve(cli.solver.as_deref()).with_timeout(Duration::from_secs_f64(cli.timeout));
    if !s.available() {
        return Err(Fail::usage(format!("cannot run solver `{}`", s.program.display())));
    }
    Ok(s)
}

fn verify(cli: &Cli, name: &str, p: &Program) -> Result<Report, Fail> {
    let opts = VerifyOptions { solver: solver(cli)?, smt_dump: cli.smt_dump.clone(), ..VerifyOptions::default() };
    verify_program(p, &opts).map_err(|e| match e {
        mrv::typing::VerifyError::Dump(e) => Fail::usage(e),
        e => Fail::rejected(format!("{name}: {e}")),
    })
}

fn cmd_verify(cli: &Cli, file: &str, json: Option<&Path>) -> Result<u8, Fail> {
    let (name, p) = load(file)?;
    let start = Instant::now();
    let report = verify(cli, &name, &p)?;
    let elapsed = start.elapsed();
    let mut out = io::stdout().lock();
    print_report(&mut out, &report).map_err(Fail::usage)?;
    let valid = report.obligations.iter().filter(|o| o.outcome.is_valid()).count();
    let verdict = if report.verified { "verified" } else { "NOT verified" };
    let _ = writeln!(
        out,
        "{name}: {verdict}, {valid}/{} obligations valid in {:.2} s",
        report.obligations.len(),
        elapsed.as_secs_f64()
    );
    if let Some(path) = json {
        let f = File::create(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
        serde_json::to_writer_pretty(BufWriter::new(f), &report).map_err(|e| Fail::usage(e))?;
    }
    Ok(if report.verified { 0 } else { 1 })
}

fn print_report(out: &mut impl Write, report: &Report) -> io::Result<()> {
    for o in &report.obligations {
        let tag = match &o.outcome {
            Outcome::Valid => "ok",
            _ => "FAIL",
        };
        writeln!(out, "[{tag}] #{} {} at {} ({})", o.id, o.rule, o.location, o.instants)?;
        if o.outcome.is_valid() {
            continue;
        }
        for a in &o.assumptions {
            writeln!(out, "      assume {a}")?;
        }
        writeln!(out, "      prove  {}", o.goal)?;
        match &o.outcome {
            Outcome::Valid => {}
            Outcome::Invalid { model, replay } => {
                let note = match replay {
                    Replay::Confirmed => "confirmed by replay".to_string(),
                    Replay::Rejected(why) => format!("replay disagrees: {why}"),
                    Replay::Undetermined(why) => format!("replay inconclusive: {why}"),
                };
                writeln!(out, "      counterexample ({note}):")?;
                for (k, v) in model {
                    writeln!(out, "        {k} = {v}")?;
                }
            }
            Outcome::Unknown { reason } => writeln!(out, "      solver returned unknown: {reason}")?,
            Outcome::Timeout => writeln!(out, "      solver timed out")?,
            Outcome::Error { message } => writeln!(out, "      solver error: {message}")?,
        }
    }
    Ok(())
}

struct RunOpts {
    steps: usize,
    devices: Option<DeviceTable>,
    format: Format,
    monitor: bool,
    unchecked: bool,
}

fn cmd_run(cli: &Cli, file: &str, opts: &RunOpts, output: Option<&Path>) -> Result<u8, Fail> {
    let (name, p) = load(file)?;
    if !opts.unchecked {
        let report = verify(cli, &name, &p)?;
        if !report.verified {
            let failed = report.failures().count();
            return Err(Fail::rejected(format!(
                "{name}: {failed} obligation(s) not valid; run `mrv verify` for details or pass --unchecked"
            )));
        }
    }
    let (trace, error) = match trace::run(&p, opts.steps, opts.devices.as_ref()) {
        Ok(t) => (t, None),
        Err((t, i, e)) => (t, Some(format!("{name}: runtime error at instant {i}: {e}"))),
    };
    write_trace(&trace, opts.format, output)?;
    let mut code = 0;
    if let Some(msg) = error {
        eprintln!("mrv: {msg}");
        code = 1;
    }
    if opts.monitor {
        let verdicts = Monitor::new(&p).check(&trace).map_err(Fail::rejected)?;
        if report_verdicts(&verdicts) {
            code = 1;
        }
    }
    Ok(code)
}

fn write_trace(t: &Trace, format: Format, output: Option<&Path>) -> Result<(), Fail> {
    let sink: Box<dyn Write> = match output {
        Some(path) => {
            Box::new(File::create(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let sink = BufWriter::new(sink);
    match format {
        Format::Csv => t.write_csv(sink),
        Format::Jsonl => t.write_jsonl(sink),
    }
    .map_err(Fail::usage)
}

/// Prints one line per property to stderr; true if any was violated.
fn report_verdicts(verdicts: &[PropertyVerdict]) -> bool {
    let mut violated = false;
    for v in verdicts {
        match &v.verdict {
            Verdict::Violation { instant, pred } => {
                violated = true;
                eprintln!("monitor: {}: violation at instant {instant}: {pred}", v.label);
            }
            other => eprintln!("monitor: {}: {}", v.label, other.kind()),
        }
    }
    violated
}

fn cmd_monitor(file: &str, path: &Path) -> Result<u8, Fail> {
    let (_, p) = load(file)?;
    let f = File::open(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    let jsonl = path.extension().is_some_and(|e| e == "jsonl" || e == "json");
    let t = if jsonl { Trace::read_jsonl(BufReader::new(f)) } else { Trace::read_csv(f) }
        .map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    let verdicts = Monitor::new(&p).check(&t).map_err(Fail::rejected)?;
    Ok(if report_verdicts(&verdicts) { 1 } else { 0 })
}
