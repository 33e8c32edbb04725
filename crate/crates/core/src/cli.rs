//! The `archloom` command line. [`run`] is a pure function of arguments,
//! environment and files, returning what to print and the exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::diagnostic::{Code, Diagnostic};
use crate::docgen::{self, Format, ReportKind, ReportSpec};
use crate::model::{export_canonical, ArchitectureModel, Direction};
use crate::parser::{parse, SourceFile};
use crate::trace::{self, TraceOptions, TraceResult};
use crate::validate::{exit_status, validate, RuleConfig};

pub const CONFIG_ENV: &str = "ARCHLOOM_CONFIG";

const EXIT_FINDINGS: i32 = 1;
const EXIT_ERRORS: i32 = 2;
const EXIT_USAGE: i32 = 3;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            stderr: msg.into(),
            code: EXIT_USAGE,
            ..Outcome::default()
        }
    }

    fn diag(&mut self, d: &Diagnostic) {
        let _ = writeln!(self.stderr, "{d}");
    }

    fn diags(&mut self, ds: &[Diagnostic]) {
        for d in ds {
            self.diag(d);
        }
    }

    fn failed(ds: &[Diagnostic]) -> Self {
        let mut out = Outcome {
            code: EXIT_ERRORS,
            ..Outcome::default()
        };
        out.diags(ds);
        out
    }
}

#[derive(Debug, Parser)]
#[command(name = "archloom", version, about = "Layered architecture models: check, trace, document")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dir {
    Up,
    Down,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate; diagnostics go to stderr.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Rule configuration file (overrides $ARCHLOOM_CONFIG).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Treat these codes as errors.
        #[arg(long, num_args = 1..)]
        deny: Vec<String>,
    },
    /// Closure from one element.
    Trace {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        id: String,
        #[arg(long, value_enum, default_value = "down")]
        dir: Dir,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        include_flows: bool,
        #[arg(long)]
        json: bool,
    },
    /// Elements to re-verify when the given ones change.
    Impact {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long = "id", required = true)]
        ids: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Per-layer gap and orphan counts.
    Coverage {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare two versions of a model.
    Diff {
        #[arg(required = true)]
        old: Vec<PathBuf>,
        #[arg(long, required = true, num_args = 1..)]
        against: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Render a report.
    Docgen {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        subject: Option<String>,
        #[arg(long, default_value = "markdown")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the canonical JSON form.
    Export {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print canonical source; exit 1 if any file differs from it.
    Fmt {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Rewrite files in place.
        #[arg(long)]
        write: bool,
    },
}

/// Runs with `$ARCHLOOM_CONFIG` taken from the process environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var_os(CONFIG_ENV).map(PathBuf::from))
}

pub fn run_with_env<I, T>(args: I, env_config: Option<PathBuf>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome {
                    stdout: text,
                    ..Outcome::default()
                }
            };
        }
    };
    match dispatch(cli.command, env_config) {
        Ok(out) | Err(out) => out,
    }
}

type Step<T> = Result<T, Outcome>;

fn read_all(paths: &[PathBuf]) -> Step<Vec<SourceFile>> {
    let mut files = Vec::with_capacity(paths.len());
    let mut err = String::new();
    for p in paths {
        match SourceFile::read(p) {
            Ok(f) => files.push(f),
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", p.display());
            }
        }
    }
    if err.is_empty() {
        Ok(files)
    } else {
        Err(Outcome::usage(err))
    }
}

fn load(paths: &[PathBuf]) -> Step<ArchitectureModel> {
    let files = read_all(paths)?;
    let result = parse(&files);
    result.model.ok_or_else(|| Outcome::failed(&result.diagnostics))
}

fn write_out(path: &Path, text: &str) -> Step<()> {
    std::fs::write(path, text)
        .map_err(|e| Outcome::usage(format!("error: cannot write {}: {e}\n", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report types serialize");
    s.push('\n');
    s
}

fn dispatch(command: Command, env_config: Option<PathBuf>) -> Step<Outcome> {
    let mut out = Outcome::default();
    match command {
        Command::Check { files, config, deny } => {
            let config_path = config.or(env_config);
            let mut denied = Vec::new();
            for c in &deny {
                match c.parse::<Code>() {
                    Ok(code) => denied.push(code),
                    Err(()) => return Err(Outcome::usage(format!("error: unknown diagnostic code {c:?}\n"))),
                }
            }
            let sources = read_all(&files)?;
            let config_text = match &config_path {
                Some(p) => Some((
                    p.display().to_string(),
                    std::fs::read_to_string(p).map_err(|e| {
                        Outcome::usage(format!("error: cannot read {}: {e}\n", p.display()))
                    })?,
                )),
                None => None,
            };
            let mut config = match config_text {
                Some((name, text)) => RuleConfig::parse(&text, &name).map_err(|d| Outcome::failed(&d))?,
                None => RuleConfig::default(),
            };
            for note in config.deny(denied) {
                let _ = writeln!(out.stderr, "{note}");
            }
            let result = parse(&sources);
            let Some(model) = result.model else {
                out.diags(&result.diagnostics);
                out.code = EXIT_ERRORS;
                return Ok(out);
            };
            let diags = validate(&model, &config);
            out.diags(&diags);
            out.code = exit_status(&diags, &config).code();
        }
        Command::Trace {
            files,
            id,
            dir,
            depth,
            include_flows,
            json: as_json,
        } => {
            let model = load(&files)?;
            let direction = match dir {
                Dir::Up => Direction::Up,
                Dir::Down => Direction::Down,
            };
            let options = TraceOptions {
                direction,
                max_depth: depth,
                include_flows,
            };
            let t = trace::trace(&model, &id, options).map_err(|d| Outcome::failed(&[d]))?;
            if as_json {
                out.stdout = json(&t);
            } else {
                out.stdout = render_tree(&t);
                if t.truncated {
                    let _ = writeln!(out.stderr, "note: trace truncated at depth {}", depth.unwrap_or(0));
                }
            }
        }
        Command::Impact { files, ids, json: as_json } => {
            let model = load(&files)?;
            let hit = trace::impact(&model, &ids).map_err(|d| Outcome::failed(&[d]))?;
            out.stdout = if as_json {
                json(&hit)
            } else {
                hit.iter().map(|id| format!("{id}\n")).collect()
            };
        }
        Command::Coverage { files, json: as_json } => {
            let model = load(&files)?;
            let report = trace::coverage(&model);
            out.stdout = if as_json { json(&report) } else { report.render_table() };
        }
        Command::Diff { old, against, json: as_json } => {
            let (a, b) = (load(&old)?, load(&against)?);
            let d = trace::diff(&a, &b);
            out.stdout = if as_json { json(&d) } else { d.render() };
        }
        Command::Docgen {
            files,
            kind,
            subject,
            format,
            out: path,
        } => {
            let kind: ReportKind = kind.parse().map_err(|e: String| Outcome::usage(format!("error: {e}\n")))?;
            let format: Format = format.parse().map_err(|e: String| Outcome::usage(format!("error: {e}\n")))?;
            let model = load(&files)?;
            let spec = ReportSpec {
                kind,
                subject,
                format,
            };
            let text = docgen::render(&model, &spec).map_err(|d| Outcome::failed(&[d]))?;
            match path {
                Some(p) => write_out(&p, &text)?,
                None => out.stdout = text,
            }
        }
        Command::Export { files, out: path } => {
            let model = load(&files)?;
            let mut text = String::from_utf8(export_canonical(&model)).expect("json is utf-8");
            text.push('\n');
            match path {
                Some(p) => write_out(&p, &text)?,
                None => out.stdout = text,
            }
        }
        Command::Fmt { files, write } => {
            let sources = read_all(&files)?;
            let result = parse(&sources);
            let Some(model) = result.model else {
                return Err(Outcome::failed(&result.diagnostics));
            };
            let mut changed = false;
            for (src, path) in sources.iter().zip(&files) {
                let canonical = docgen::emit_dsl_file(&model, &src.name).map_err(|d| Outcome::failed(&d))?;
                if canonical == src.text {
                    if !write {
                        out.stdout.push_str(&canonical);
                    }
                    continue;
                }
                if write {
                    write_out(path, &canonical)?;
                    let _ = writeln!(out.stderr, "reformatted {}", path.display());
                } else {
                    changed = true;
                    out.stdout.push_str(&canonical);
                    let _ = writeln!(out.stderr, "not canonical: {}", path.display());
                }
            }
            if changed {
                out.code = EXIT_FINDINGS;
            }
        }
    }
    Ok(out)
}

/// Non-root nodes as an indented tree. Each node hangs under its smallest
/// parent one level nearer the root.
fn render_tree(t: &TraceResult) -> String {
    let depth: BTreeMap<&str, usize> = t.nodes.iter().map(|n| (n.id.as_str(), n.depth)).collect();
    let mut kids: BTreeMap<&str, Vec<(&str, &str)>> = BTreeMap::new();
    let mut placed = std::collections::BTreeSet::new();
    for e in &t.edges {
        let (Some(&df), Some(&dt)) = (depth.get(e.from.as_str()), depth.get(e.to.as_str())) else {
            continue;
        };
        if dt == df + 1 && placed.insert(e.to.as_str()) {
            kids.entry(e.from.as_str()).or_default().push((e.to.as_str(), e.kind.name()));
        }
    }
    for v in kids.values_mut() {
        v.sort();
    }
    let mut out = String::new();
    let mut stack: Vec<(&str, &str, usize)> = kids
        .get(t.root.as_str())
        .map(|v| v.iter().rev().map(|&(id, k)| (id, k, 0)).collect())
        .unwrap_or_default();
    while let Some((id, kind, indent)) = stack.pop() {
        let _ = writeln!(out, "{}{id} ({kind})", "  ".repeat(indent));
        if let Some(v) = kids.get(id) {
            stack.extend(v.iter().rev().map(|&(c, k)| (c, k, indent + 1)));
        }
    }
    out
}
