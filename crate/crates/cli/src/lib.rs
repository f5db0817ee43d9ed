//! Command-line experiments over `building-ramsey`.
//!
//! Every subcommand is an [`Experiment`] registered by name in
//! [`Registry::standard`]. Reports are JSON with sorted keys (or CSV) and
//! depend only on the arguments and `--seed`, never on `--threads`.
//!
//! Exit codes: `0` success, `1` a verified property failed, `2` bad input.

use std::ffi::OsString;
use std::fmt;

use clap::{Arg, ArgMatches, Command};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub mod experiments;

pub const THREADS_ENV: &str = "BUILDING_RAMSEY_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input { field: String, reason: String },
    Failed(String),
}

impl CliError {
    pub fn input(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Input {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { field, reason } => write!(f, "invalid {field}: {reason}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<building_ramsey::Error> for CliError {
    fn from(e: building_ramsey::Error) -> Self {
        use building_ramsey::Error as E;
        match e {
            E::InvalidInput { field, reason } => CliError::Input { field, reason },
            E::Unsupported(m) => CliError::input("type", m),
            E::HypothesisFails(m) => CliError::input("set", m),
            E::Consistency(m) => CliError::Failed(m),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// What an experiment produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    /// Header and rows for `--format csv`; a key/value dump of the JSON is
    /// used when absent.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    /// A verified property did not hold.
    pub failed: bool,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json,
            table: None,
            failed: false,
        }
    }

    pub fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }
}

/// Shared run settings.
pub struct Context {
    pub seed: u64,
}

impl Context {
    /// ChaCha8 seeded with `seed_from_u64(seed)`.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn args(&self, cmd: Command) -> Command;
    fn run(&self, m: &ArgMatches, ctx: &Context) -> CliResult<Report>;
}

pub struct Registry {
    experiments: Vec<Box<dyn Experiment>>,
}

impl Registry {
    pub fn new() -> Self {
        Registry {
            experiments: Vec::new(),
        }
    }

    pub fn register(&mut self, e: Box<dyn Experiment>) {
        assert!(self.get(e.name()).is_none(), "duplicate experiment {}", e.name());
        self.experiments.push(e);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.experiments
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.experiments.iter().map(|e| e.name()).collect()
    }

    pub fn standard() -> Self {
        let mut r = Registry::new();
        experiments::register_all(&mut r);
        r
    }

    pub fn command(&self) -> Command {
        let mut cmd = Command::new("building-ramsey")
            .about("Density Ramsey experiments on trees and affine buildings")
            .subcommand_required(true)
            .arg(
                Arg::new("out")
                    .long("out")
                    .global(true)
                    .help("Write the report to this file instead of stdout"),
            )
            .arg(
                Arg::new("format")
                    .long("format")
                    .global(true)
                    .value_parser(["json", "csv"])
                    .default_value("json"),
            )
            .arg(
                Arg::new("seed")
                    .long("seed")
                    .global(true)
                    .value_parser(clap::value_parser!(u64))
                    .default_value("0"),
            )
            .arg(
                Arg::new("threads")
                    .long("threads")
                    .global(true)
                    .value_parser(clap::value_parser!(usize))
                    .help("Worker threads (default: $BUILDING_RAMSEY_THREADS, else all cores)"),
            );
        for e in &self.experiments {
            cmd = cmd.subcommand(e.args(Command::new(e.name()).about(e.about())));
        }
        cmd
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn render(report: &Report, format: &str) -> CliResult<String> {
    if format == "csv" {
        let (header, rows) = match &report.table {
            Some(t) => t.clone(),
            None => key_values(&report.json),
        };
        let mut w = csv::Writer::from_writer(vec![]);
        let fail = |e: csv::Error| CliError::Failed(format!("csv: {e}"));
        w.write_record(&header).map_err(fail)?;
        for row in rows {
            w.write_record(&row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Failed(format!("csv: {e}")))?;
        return Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"));
    }
    let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
    s.push('\n');
    Ok(s)
}

fn key_values(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let rows = match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| {
                let cell = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                vec![k.clone(), cell]
            })
            .collect(),
        other => vec![vec!["value".into(), other.to_string()]],
    };
    (vec!["key".into(), "value".into()], rows)
}

fn thread_count(m: &ArgMatches) -> CliResult<Option<usize>> {
    if let Some(&n) = m.get_one::<usize>("threads") {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::input("threads", format!("{THREADS_ENV}={s:?} is not a count"))),
        Err(_) => Ok(None),
    }
}

fn execute(registry: &Registry, m: &ArgMatches) -> CliResult<(Report, String)> {
    let (name, sub) = m.subcommand().expect("subcommand required");
    let exp = registry.get(name).expect("registered subcommand");
    let ctx = Context {
        seed: *sub.get_one::<u64>("seed").expect("defaulted"),
    };
    let threads = thread_count(sub)?;
    if threads == Some(0) {
        return Err(CliError::input("threads", "need at least one thread"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Failed(format!("thread pool: {e}")))?;
    let report = pool.install(|| exp.run(sub, &ctx))?;
    let format = sub.get_one::<String>("format").expect("defaulted").clone();
    Ok((report, format))
}

/// Parses `args` (including the program name) and runs one experiment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let registry = Registry::standard();
    let matches = match registry.command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = execute(&registry, &matches).and_then(|(report, format)| {
        let text = render(&report, &format)?;
        Ok((report, text))
    });
    match result {
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Ok((report, text)) => {
            let code = if report.failed { 1 } else { 0 };
            let sub = matches.subcommand().expect("subcommand required").1;
            let mut stderr = String::new();
            if report.failed {
                stderr.push_str("property FAILED\n");
            }
            match sub.get_one::<String>("out") {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr },
                    Err(e) => Outcome {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: invalid out: cannot write {path}: {e}\n"),
                    },
                },
                None => Outcome { code, stdout: text, stderr },
            }
        }
    }
}
