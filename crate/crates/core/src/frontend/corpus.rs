//! Runs `.str` files against their `//! expect:` headers.
//!
//! Header forms, one per line:
//!
//! ```text
//! //! expect: check-ok SYSTEM [no-subsumption]
//! //! expect: check-fail SYSTEM [no-subsumption] [ErrorKind]
//! //! expect: diverges
//! //! expect: terminates [instants<=K]
//! ```
//!
//! `diverges` means exhaustive exploration finds a cycle; `terminates` means
//! every schedule ends within `K` ticks (default 0) and the state budget.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::parse::ParseOptions;
use super::source::SourceFile;
use crate::eval::{run, Outcome, RunConfig};
use crate::typing::SystemMode;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expectation {
    CheckOk { system: SystemMode, subsumption: bool },
    CheckFail { system: SystemMode, subsumption: bool, kind: Option<String> },
    Diverges,
    Terminates { instants: u32 },
}

pub fn parse_system(s: &str) -> Option<SystemMode> {
    match s {
        "stratified" => Some(SystemMode::Stratified),
        "unstratified" => Some(SystemMode::Unstratified),
        "effect-free" => Some(SystemMode::EffectFree),
        _ => None,
    }
}

impl Expectation {
    pub fn parse(spec: &str) -> Result<Expectation, String> {
        let words: Vec<&str> = spec.split_whitespace().collect();
        match words.as_slice() {
            [verb @ ("check-ok" | "check-fail"), system, rest @ ..] => {
                let system = parse_system(system).ok_or_else(|| format!("unknown system `{system}`"))?;
                let subsumption = !rest.contains(&"no-subsumption");
                let kind = rest.iter().find(|w| **w != "no-subsumption").map(|k| k.to_string());
                if *verb == "check-ok" {
                    if let Some(k) = kind {
                        return Err(format!("unexpected `{k}` after check-ok"));
                    }
                    Ok(Expectation::CheckOk { system, subsumption })
                } else {
                    Ok(Expectation::CheckFail { system, subsumption, kind })
                }
            }
            ["diverges"] => Ok(Expectation::Diverges),
            ["terminates"] => Ok(Expectation::Terminates { instants: 0 }),
            ["terminates", bound] => {
                let k = bound
                    .strip_prefix("instants<=")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| format!("expected `instants<=K`, found `{bound}`"))?;
                Ok(Expectation::Terminates { instants: k })
            }
            _ => Err(format!("unrecognized expectation `{spec}`")),
        }
    }

    pub fn all_in(headers: &[String]) -> Result<Vec<Expectation>, String> {
        headers.iter().filter_map(|h| h.strip_prefix("expect:")).map(|s| Expectation::parse(s.trim())).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusConfig {
    pub state_budget: usize,
    pub prelude_int: bool,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { state_budget: 100_000, prelude_int: false }
    }
}

#[derive(Clone, Debug)]
pub struct ExpectationResult {
    pub expectation: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FileResult {
    pub path: PathBuf,
    /// Set when the file itself could not be loaded.
    pub error: Option<String>,
    pub results: Vec<ExpectationResult>,
}

impl FileResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.results.iter().all(|r| r.passed)
    }
}

/// Check `expectation` against an already parsed file.
pub fn evaluate(file: &SourceFile, expectation: &Expectation, cfg: &CorpusConfig) -> (bool, String) {
    match expectation {
        Expectation::CheckOk { system, subsumption } => match file.check(*system, *subsumption) {
            Ok(te) => (true, te.to_string()),
            Err(e) => (false, e.render(None)),
        },
        Expectation::CheckFail { system, subsumption, kind } => match file.check(*system, *subsumption) {
            Ok(te) => (false, format!("unexpectedly typed at {te}")),
            Err(e) => {
                let matches = kind.as_deref().map_or(true, |k| k == e.kind.name());
                (matches, e.render(None))
            }
        },
        Expectation::Diverges => {
            let report = run(&file.program(), &RunConfig::exhaustive(cfg.state_budget, 0)).expect("valid config");
            (matches!(report.outcome, Outcome::CycleDetected { .. }), report.outcome.name().to_string())
        }
        Expectation::Terminates { instants } => {
            let report = run(&file.program(), &RunConfig::exhaustive(cfg.state_budget, *instants)).expect("valid config");
            (report.outcome.is_terminated(), report.outcome.name().to_string())
        }
    }
}

pub fn run_source(path: &Path, src: &str, cfg: &CorpusConfig) -> FileResult {
    let mut result = FileResult { path: path.to_path_buf(), error: None, results: Vec::new() };
    let file = match SourceFile::parse(src, ParseOptions { prelude_int: cfg.prelude_int }) {
        Ok(f) => f,
        Err(e) => {
            result.error = Some(e.to_string());
            return result;
        }
    };
    let expectations = match Expectation::all_in(&file.headers) {
        Ok(ex) if ex.is_empty() => {
            result.error = Some("no `//! expect:` header".into());
            return result;
        }
        Ok(ex) => ex,
        Err(e) => {
            result.error = Some(e);
            return result;
        }
    };
    let specs = file.headers.iter().filter_map(|h| h.strip_prefix("expect:")).map(str::trim);
    for (ex, spec) in expectations.iter().zip(specs) {
        let (passed, detail) = evaluate(&file, ex, cfg);
        result.results.push(ExpectationResult { expectation: spec.to_string(), passed, detail });
    }
    result
}

/// Every `.str` file directly under `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "str"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn run_dir(dir: &Path, cfg: &CorpusConfig) -> io::Result<Vec<FileResult>> {
    corpus_files(dir)?.into_iter().map(|p| Ok(run_source(&p, &fs::read_to_string(&p)?, cfg))).collect()
}
