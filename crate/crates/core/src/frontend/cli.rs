//! The `stratal` command line.
//!
//! Exit codes: 0 on success, 1 when a check, simulation, or corpus
//! expectation fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::corpus::{run_dir, CorpusConfig};
use super::parse::ParseOptions;
use super::print::TermPrinter;
use super::source::SourceFile;
use super::trace::to_json_lines;
use crate::eval::{run, Outcome, RunConfig, RunReport, SchedulerConfig};
use crate::surface::{check_simulation, Discipline, SurfaceProgram};
use crate::syntax::Program;
use crate::transform::translate;
use crate::typing::SystemMode;

#[derive(Parser, Debug)]
#[command(name = "stratal", version, about = "Type checker and interpreter for a λ-calculus with regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type-check a file and print its type and effect.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        typing: Typing,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Type-check, then run a file.
    Run(RunArgs),
    /// Like `run`, and also write JSON-lines trace records.
    Trace {
        #[command(flatten)]
        run: RunArgs,
        /// Write records here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the file with every `elsenext` branch removed.
    Translate {
        #[command(flatten)]
        input: Input,
    },
    /// Print the file with macros expanded and definitions inlined.
    Expand {
        #[command(flatten)]
        input: Input,
    },
    /// Check that region stores simulate a concrete store discipline.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        discipline: DisciplineArg,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Run every `.str` file in a directory against its expectations.
    Corpus {
        dir: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, value_enum)]
        prelude: Option<Prelude>,
    },
}

#[derive(Args, Debug)]
struct Input {
    file: PathBuf,
    /// Enable integers, arithmetic, and `ifz`.
    #[arg(long, value_enum)]
    prelude: Option<Prelude>,
}

#[derive(Args, Debug)]
struct Typing {
    #[arg(long, value_enum, default_value_t = System::Stratified)]
    system: System,
    /// Require exact types wherever subtyping would apply.
    #[arg(long)]
    no_subsumption: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    typing: Typing,
    /// Maximum number of reduction steps.
    #[arg(long, default_value_t = 10_000)]
    fuel: u64,
    /// Maximum number of ticks.
    #[arg(long, default_value_t = 0)]
    instants: u32,
    #[arg(long, env = "STRATAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Explore every schedule instead of one seeded schedule.
    #[arg(long)]
    all_schedules: bool,
    /// State budget for --all-schedules.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Prelude {
    Int,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum System {
    Stratified,
    Unstratified,
    EffectFree,
}

impl From<System> for SystemMode {
    fn from(s: System) -> Self {
        match s {
            System::Stratified => SystemMode::Stratified,
            System::Unstratified => SystemMode::Unstratified,
            System::EffectFree => SystemMode::EffectFree,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DisciplineArg {
    Ref,
    Chan,
    Sig,
}

impl From<DisciplineArg> for Discipline {
    fn from(d: DisciplineArg) -> Self {
        match d {
            DisciplineArg::Ref => Discipline::Reference,
            DisciplineArg::Chan => Discipline::Channel,
            DisciplineArg::Sig => Discipline::Signal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A failure that ends the command with the given exit code.
struct Exit(i32, String);

type CmdResult = Result<i32, Exit>;

fn usage(msg: impl Into<String>) -> Exit {
    Exit(2, msg.into())
}

fn load(input: &Input) -> Result<SourceFile, Exit> {
    let src = fs::read_to_string(&input.file).map_err(|e| usage(format!("{}: {e}", input.file.display())))?;
    let opts = ParseOptions { prelude_int: input.prelude.is_some() };
    SourceFile::parse(&src, opts).map_err(|e| usage(format!("{}:{e}", input.file.display())))
}

fn display_name(p: &Path) -> String {
    p.display().to_string()
}

/// Run the CLI on `args`, writing to `out` and `err`; returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}

fn io(e: std::io::Error) -> Exit {
    usage(format!("write failed: {e}"))
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Check { input, typing, format } => {
            let file = load(&input)?;
            let name = display_name(&input.file);
            match (file.check(typing.system.into(), !typing.no_subsumption), format) {
                (Ok(te), Format::Text) => writeln!(out, "{}", te).map_err(io).map(|_| 0),
                (Ok(te), Format::Json) => {
                    let effect: Vec<String> = te.effect.iter().map(ToString::to_string).collect();
                    let v = json!({"ok": true, "type": te.ty.to_string(), "effect": effect});
                    writeln!(out, "{v}").map_err(io).map(|_| 0)
                }
                (Err(e), Format::Text) => Err(Exit(1, e.render(Some(&name)))),
                (Err(e), Format::Json) => {
                    let v = json!({"ok": false, "file": name, "error": e, "kind": e.kind.name()});
                    writeln!(out, "{v}").map_err(io)?;
                    Ok(1)
                }
            }
        }
        Command::Run(args) => {
            let (file, report) = execute(&args)?;
            write_report(out, &file, &report, args.format)?;
            Ok(0)
        }
        Command::Trace { run: args, out: path } => {
            let (file, report) = execute(&args)?;
            let lines = to_json_lines(&report.trace);
            match path {
                Some(path) => {
                    fs::write(&path, lines).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    write_report(out, &file, &report, args.format)?;
                }
                None => out.write_all(lines.as_bytes()).map_err(io)?,
            }
            Ok(0)
        }
        Command::Translate { input } => {
            let file = load(&input)?.map_terms(translate);
            out.write_all(file.render().as_bytes()).map_err(io)?;
            Ok(0)
        }
        Command::Expand { input } => {
            out.write_all(load(&input)?.render().as_bytes()).map_err(io)?;
            Ok(0)
        }
        Command::Simulate { input, discipline, budget } => {
            let file = load(&input)?;
            let sp = SurfaceProgram::from_program(&file.program(), discipline.into()).map_err(|e| usage(e.to_string()))?;
            match check_simulation(&sp, budget) {
                Ok(report) => {
                    writeln!(
                        out,
                        "simulation holds for {} discipline: {} surface states, {} steps, each matched within k <= {} core steps{}",
                        report.discipline.name(),
                        report.surface_states,
                        report.surface_steps,
                        report.max_core_steps,
                        if report.truncated { " (budget reached)" } else { "" }
                    )
                    .map_err(io)?;
                    Ok(0)
                }
                Err(e) => Err(Exit(1, e.to_string())),
            }
        }
        Command::Corpus { dir, budget, prelude } => {
            let cfg = CorpusConfig { state_budget: budget, prelude_int: prelude.is_some() };
            let results = run_dir(&dir, &cfg).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            let mut failed = 0;
            for r in &results {
                let name = r.path.file_name().map_or_else(|| display_name(&r.path), |n| n.to_string_lossy().into_owned());
                if let Some(e) = &r.error {
                    writeln!(out, "FAIL {name}: {e}").map_err(io)?;
                    failed += 1;
                    continue;
                }
                for x in &r.results {
                    let tag = if x.passed { "PASS" } else { "FAIL" };
                    writeln!(out, "{tag} {name}: {} ({})", x.expectation, x.detail.lines().next().unwrap_or("")).map_err(io)?;
                }
                if !r.passed() {
                    failed += 1;
                }
            }
            writeln!(out, "{} files, {} failed", results.len(), failed).map_err(io)?;
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn execute(args: &RunArgs) -> Result<(SourceFile, RunReport), Exit> {
    let file = load(&args.input)?;
    if let Err(e) = file.check(args.typing.system.into(), !args.typing.no_subsumption) {
        return Err(Exit(1, e.render(Some(&display_name(&args.input.file)))));
    }
    let scheduler = if args.all_schedules {
        SchedulerConfig::Exhaustive { state_budget: args.budget }
    } else {
        SchedulerConfig::Seeded(args.seed)
    };
    let cfg = RunConfig { fuel: args.fuel, instants: args.instants, scheduler };
    let report = run(&file.program(), &cfg).map_err(|e| usage(e.to_string()))?;
    Ok((file, report))
}

fn render_program(file: &SourceFile, p: &Program) -> (Vec<String>, Vec<String>) {
    let printer = TermPrinter::new(Some(&file.regions));
    let threads = p.terms().map(|t| printer.render(t)).collect();
    let store = printer.render_store(&p.store).lines().map(str::to_string).collect();
    (threads, store)
}

fn write_report(out: &mut dyn Write, file: &SourceFile, report: &RunReport, format: Format) -> Result<(), Exit> {
    let (summary, states): (String, Vec<&Program>) = match &report.outcome {
        Outcome::Terminated { finals, steps, instants } => {
            (format!("Terminated after {steps} steps and {instants} ticks"), finals.iter().collect())
        }
        Outcome::FuelExhausted { steps, instants } => {
            let last = report.trace.states().last().expect("trace has an initial state");
            (format!("FuelExhausted after {steps} steps and {instants} ticks"), vec![last])
        }
        Outcome::StateBudgetExhausted { states } => (format!("StateBudgetExhausted after {states} states"), vec![]),
        Outcome::CycleDetected { state, instant } => (format!("CycleDetected in instant {instant}"), vec![state]),
        Outcome::TickUndefined { thread, term, instant } => {
            (format!("TickUndefined for thread {} in instant {instant}: {term}", thread.0), vec![])
        }
    };
    if format == Format::Json {
        let states: Vec<_> = states
            .iter()
            .map(|p| {
                let (threads, store) = render_program(file, p);
                json!({"threads": threads, "store": store})
            })
            .collect();
        let v = json!({"outcome": report.outcome.name(), "summary": summary, "states": states});
        return writeln!(out, "{v}").map_err(io);
    }
    writeln!(out, "{summary}").map_err(io)?;
    for (i, p) in states.iter().enumerate() {
        let (threads, store) = render_program(file, p);
        let label = if states.len() > 1 { format!("state {}", i + 1) } else { "state".to_string() };
        writeln!(out, "{label}:").map_err(io)?;
        for t in threads {
            writeln!(out, "  thread: {t}").map_err(io)?;
        }
        for s in store {
            writeln!(out, "  store:  {s}").map_err(io)?;
        }
    }
    Ok(())
}
