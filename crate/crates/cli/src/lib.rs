//! The `sculpt` command line: argument parsing and dispatch, kept in a
//! library so tests can drive it without spawning processes.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use sculpt::bulk::{make_bulk, sculpture_to_st, st_to_sculpture, Sculpture, SculptureJson, DEFAULT_BULK_BOUND};
use sculpt::corpus::{fixtures, verdict_summary};
use sculpt::decide::{decide_with, Engine, SearchConfig};
use sculpt::euclid::{complex_to_hda, grid_to_bulk, make_grid, ComplexJson, EuclideanComplex};
use sculpt::export::{error_json, to_dot, to_tikz, verdict_json};
use sculpt::hintost::hintost;
use sculpt::precubical::Hda;
use sculpt::pv::{parse_pv, pv_to_complex, PvError};
use sculpt::random::{random_hdas, RandomHdaConfig};
use sculpt::st::{chu_to_st, st_to_chu, ChuJson, ChuSpace, StJson, StStructure};

#[derive(Debug, Parser)]
#[command(name = "sculpt", version, about = "Decide whether higher dimensional automata can be sculpted")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; `json` is the stable interface.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Decide with the exhaustive partition search instead of the repair search.
    #[arg(long, global = true)]
    pub oracle: bool,
    #[arg(long, global = true)]
    pub max_events: Option<usize>,
    #[arg(long, global = true)]
    pub node_budget: Option<u64>,
    /// Seed for `random`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Tikz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    St,
    Chu,
    ChuText,
    Sculpture,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide sculptability; exit 0 if sculptable, 1 if not.
    Check { input: PathBuf },
    /// Decide with the exhaustive search.
    Oracle { input: PathBuf },
    /// The ST-structure covering an HDA.
    Cover { input: PathBuf },
    /// Translate between ST-structures, Chu spaces and sculptures.
    Convert {
        #[arg(long, value_enum)]
        from: Kind,
        #[arg(long, value_enum)]
        to: Kind,
        input: PathBuf,
    },
    /// The bulk `B^d`.
    Bulk { d: usize },
    /// The grid with the given axis sizes.
    Grid {
        #[arg(required = true)]
        sizes: Vec<usize>,
        /// Emit the embedding into the bulk instead of the bare HDA.
        #[arg(long)]
        sculpture: bool,
    },
    /// PV programs.
    Pv {
        #[command(subcommand)]
        action: PvCommand,
    },
    /// A Euclidean complex as an HDA together with its sculpture.
    Complex { input: PathBuf },
    /// Built-in fixtures.
    Corpus {
        #[command(subcommand)]
        action: CorpusCommand,
    },
    /// Render an HDA; use `--format dot` or `--format tikz`.
    Export { input: PathBuf },
    /// Random connected acyclic HDA without repeating events.
    Random {
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        events: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum PvCommand {
    /// Safe complex and reachable HDA of a program.
    Build { input: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Decide every fixture and compare with its expectation.
    Run,
    /// Write every fixture as HDA JSON plus `expectations.json`.
    Export { dir: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sculpt::Error),
    #[error(transparent)]
    Pv(#[from] PvError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn to_json(&self) -> Value {
        match self {
            CliError::Core(e) => error_json(e),
            CliError::Pv(e) => json!({ "error": "Pv", "message": e.to_string() }),
            CliError::Io { .. } => json!({ "error": "Io", "message": self.to_string() }),
            CliError::Json(_) => json!({ "error": "Parse", "message": self.to_string() }),
            CliError::Usage(m) => json!({ "error": "Usage", "message": m }),
        }
    }
}

/// Exit code and the text for standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: 0, stdout }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io)
    }
}

fn read_hda(path: &Path) -> Result<Hda, CliError> {
    Ok(Hda::from_json(&read_input(path)?)?)
}

fn render_hda(hda: &Hda, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => {
            let mut s = hda.to_json();
            s.push('\n');
            s
        }
        Format::Dot => to_dot(hda),
        Format::Tikz => to_tikz(hda)?,
    })
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(e.to_string()),
                _ => Outcome { code: 2, stdout: pretty(&CliError::Usage(e.to_string()).to_json()) },
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome { code: 2, stdout: pretty(&e.to_json()) },
    }
}

fn search_config(cli: &Cli) -> SearchConfig {
    let mut cfg = SearchConfig::default();
    if let Some(m) = cli.max_events {
        cfg.max_events = m;
    }
    if let Some(b) = cli.node_budget {
        cfg.node_budget = b;
    }
    cfg
}

fn validate_flags(cli: &Cli) -> Result<(), CliError> {
    let renders = matches!(cli.command, Command::Export { .. } | Command::Bulk { .. } | Command::Grid { sculpture: false, .. });
    if cli.format != Format::Json && !renders {
        return Err(CliError::Usage("--format dot|tikz only applies to export, bulk and grid".into()));
    }
    if matches!(cli.command, Command::Export { .. }) && cli.format == Format::Json {
        return Err(CliError::Usage("export needs --format dot or --format tikz".into()));
    }
    if cli.node_budget == Some(0) {
        return Err(CliError::Usage("--node-budget must be positive".into()));
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    validate_flags(cli)?;
    let cfg = search_config(cli);
    match &cli.command {
        Command::Check { input } | Command::Oracle { input } => {
            let hda = read_hda(input)?;
            let oracle = cli.oracle || matches!(cli.command, Command::Oracle { .. });
            let engine = if oracle { Engine::BruteForce } else { Engine::Repair };
            let d = decide_with(&hda, &cfg, engine)?;
            let code = if d.verdict.is_sculptable() { 0 } else { 1 };
            Ok(Outcome { code, stdout: pretty(&verdict_json(&hda, &d)) })
        }
        Command::Cover { input } => {
            let lab = hintost(&read_hda(input)?)?;
            Ok(Outcome::ok(pretty(&lab.to_st().to_json())))
        }
        Command::Convert { from, to, input } => convert(*from, *to, &read_input(input)?).map(Outcome::ok),
        Command::Bulk { d } => render_hda(&make_bulk(*d, DEFAULT_BULK_BOUND)?, cli.format).map(Outcome::ok),
        Command::Grid { sizes, sculpture } => {
            let grid = make_grid(sizes)?;
            if *sculpture {
                Ok(Outcome::ok(pretty(&grid_to_bulk(&grid)?.to_json())))
            } else {
                render_hda(&grid.hda, cli.format).map(Outcome::ok)
            }
        }
        Command::Pv { action: PvCommand::Build { input } } => {
            let prog = parse_pv(&read_input(input)?)?;
            let model = pv_to_complex(&prog)?;
            let origin = vec![0; model.complex.dim];
            Ok(Outcome::ok(pretty(&json!({
                "complex": model.complex.to_json(&origin),
                "hda": model.hda.to_raw(),
            }))))
        }
        Command::Complex { input } => {
            let j: ComplexJson = serde_json::from_str(&read_input(input)?)?;
            let complex = EuclideanComplex::new(j.dim, j.cubes)?;
            let ch = complex_to_hda(&complex, &j.initial)?;
            Ok(Outcome::ok(pretty(&json!({
                "added": ch.added,
                "sculpture": ch.to_sculpture()?.to_json(),
            }))))
        }
        Command::Corpus { action: CorpusCommand::Run } => corpus_run(&cfg),
        Command::Corpus { action: CorpusCommand::Export { dir } } => corpus_export(dir),
        Command::Export { input } => render_hda(&read_hda(input)?, cli.format).map(Outcome::ok),
        Command::Random { count, events } => {
            let rcfg = RandomHdaConfig { max_events: *events, ..RandomHdaConfig::default() };
            let hdas = random_hdas(cli.seed, *count, &rcfg)?;
            let raws: Vec<_> = hdas.iter().map(Hda::to_raw).collect();
            Ok(Outcome::ok(if *count == 1 { pretty(&raws[0]) } else { pretty(&raws) }))
        }
    }
}

fn convert(from: Kind, to: Kind, text: &str) -> Result<String, CliError> {
    let st: StStructure = match from {
        Kind::St => StStructure::from_json(&serde_json::from_str::<StJson>(text)?)?,
        Kind::Chu => chu_to_st(&ChuSpace::from_json(&serde_json::from_str::<ChuJson>(text)?)?)?,
        Kind::ChuText => chu_to_st(&ChuSpace::from_text(text)?)?,
        Kind::Sculpture => sculpture_to_st(&Sculpture::from_json(&serde_json::from_str::<SculptureJson>(text)?)?),
    };
    Ok(match to {
        Kind::St => pretty(&st.to_json()),
        Kind::Chu => pretty(&st_to_chu(&st).to_json()),
        Kind::ChuText => st_to_chu(&st).to_text(),
        Kind::Sculpture => pretty(&st_to_sculpture(&st)?.to_json()),
    })
}

fn corpus_run(cfg: &SearchConfig) -> Result<Outcome, CliError> {
    let mut lines = Vec::new();
    let mut failed = 0;
    for f in fixtures() {
        let line = match decide_with(&f.hda, cfg, Engine::Repair) {
            Ok(d) => match f.check(&d.verdict) {
                Ok(()) => json!({ "name": f.name, "ok": true, "verdict": verdict_summary(&d.verdict) }),
                Err(e) => json!({ "name": f.name, "ok": false, "message": e }),
            },
            Err(e) => json!({ "name": f.name, "ok": false, "message": e.to_string() }),
        };
        if line["ok"] == false {
            failed += 1;
        }
        lines.push(line);
    }
    let code = if failed == 0 { 0 } else { 1 };
    Ok(Outcome { code, stdout: pretty(&json!({ "failed": failed, "fixtures": lines })) })
}

fn corpus_export(dir: &Path) -> Result<Outcome, CliError> {
    let io = |source| CliError::Io { path: dir.display().to_string(), source };
    fs::create_dir_all(dir).map_err(io)?;
    let mut expectations = Vec::new();
    for f in fixtures() {
        let path = dir.join(format!("{}.json", f.name));
        let mut text = f.hda.to_json();
        text.push('\n');
        fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        expectations.push(f.expectation());
    }
    let path = dir.join("expectations.json");
    fs::write(&path, pretty(&expectations)).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(Outcome::ok(pretty(&json!({ "written": expectations.len() + 1 }))))
}
