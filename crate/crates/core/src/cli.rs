//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 parse error, 2 semantic or constraint failure,
//! 64 usage error (bad flags, unreadable input, bad config). The config file
//! is taken from `--config` or else the `EEA_CONFIG` environment variable;
//! see [`crate::config`] for its keys.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::abstraction::{abstract_function, assess_relocatability};
use crate::analysis::{
    check_constraints, classify, compare, compute_metrics, fleet_summary, spof_analysis, ComparisonReport,
};
use crate::config::{Settings, CONFIG_ENV};
use crate::corpus;
use crate::dsl::{self, emit_dot, ParsedDocument};
use crate::engine::{centralize_all, centralize_function, EngineError, StageTrace};
use crate::model::Architecture;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_SEMANTIC: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "eea", version, about = "Analyze and centralize E/E architecture models")]
struct Cli {
    /// Config file; defaults to the path in EEA_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override a config key, e.g. limits.max_analog_length.B=0.1 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and check structural integrity.
    Validate { file: PathBuf },
    /// List the elementary classes and relocatability of one function.
    Abstract {
        file: PathBuf,
        #[arg(long)]
        function: String,
    },
    /// Run stepwise centralization and write every stage.
    Centralize(CentralizeArgs),
    /// Print metrics, single points of failure, constraint checks and style.
    Metrics {
        file: PathBuf,
        /// Exit 2 when a constraint is violated.
        #[arg(long)]
        strict: bool,
    },
    /// Tabulate metrics of several variants side by side.
    Compare {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// ECU and network counts per vehicle; the bundled fleet when no file is given.
    FleetSummary {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Render Graphviz DOT.
    Dot {
        file: PathBuf,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "scope")]
struct Scope {
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct CentralizeArgs {
    file: PathBuf,
    #[command(flatten)]
    scope: Scope,
    /// Stage files go to <out>/<input stem>/.
    #[arg(long, default_value = "eea-out")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Markdown,
    Csv,
}

/// Early exit carrying the process status; the message is already printed.
struct Exit(i32);

type CmdResult = Result<(), Exit>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, code: i32, msg: impl std::fmt::Display) -> Exit {
        let _ = writeln!(self.err, "eea: {msg}");
        Exit(code)
    }

    fn print(&mut self, text: &str) -> CmdResult {
        self.out.write_all(text.as_bytes()).map_err(|e| self.fail(EXIT_USAGE, e))
    }
}

/// Runs the CLI with `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli, &mut io) {
        Ok(()) => EXIT_OK,
        Err(Exit(code)) => code,
    }
}

fn dispatch(cli: Cli, io: &mut Io) -> CmdResult {
    let config_path = cli.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let settings = Settings::load(config_path.as_deref(), &cli.overrides).map_err(|e| io.fail(EXIT_USAGE, e))?;

    match cli.command {
        Command::Validate { file } => cmd_validate(&file, io),
        Command::Abstract { file, function } => cmd_abstract(&file, &function, io),
        Command::Centralize(args) => cmd_centralize(&args, &settings, io),
        Command::Metrics { file, strict } => cmd_metrics(&file, strict, &settings, io),
        Command::Compare { files, format, output } => cmd_compare(&files, format, output.as_deref(), &settings, io),
        Command::FleetSummary { files, format } => cmd_fleet_summary(&files, format, io),
        Command::Dot { file, output } => {
            let arch = load_valid(&file, io)?;
            let dot = emit_dot(&arch, &settings.render);
            match output {
                Some(path) => write_file(&path, &dot, io),
                None => io.print(&dot),
            }
        }
    }
}

fn read_document(path: &Path, io: &mut Io) -> Result<ParsedDocument, Exit> {
    let bytes = fs::read(path).map_err(|e| {
        io.fail(EXIT_USAGE, format!("cannot read {}: {e}\nusage: eea <command> <file.eea> [options]", path.display()))
    })?;
    dsl::parse_bytes(&bytes, &path.display().to_string()).map_err(|e| io.fail(EXIT_PARSE, e))
}

/// Prints violations with their block positions; returns the count.
fn report_violations(doc: &ParsedDocument, io: &mut Io) -> usize {
    let violations = doc.violations();
    for (span, v) in &violations {
        let at = span.map_or_else(|| doc_file(doc), |s| s.to_string());
        let _ = writeln!(io.out, "{at}: {v}");
    }
    violations.len()
}

fn doc_file(doc: &ParsedDocument) -> String {
    doc.spans.values().next().map_or_else(|| "<input>".to_string(), |s| s.file.clone())
}

fn load_valid(path: &Path, io: &mut Io) -> Result<Architecture, Exit> {
    let doc = read_document(path, io)?;
    if report_violations(&doc, io) > 0 {
        return Err(Exit(EXIT_SEMANTIC));
    }
    Ok(doc.architecture)
}

fn write_file(path: &Path, text: &str, io: &mut Io) -> CmdResult {
    fs::write(path, text).map_err(|e| io.fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
}

fn cmd_validate(file: &Path, io: &mut Io) -> CmdResult {
    let doc = read_document(file, io)?;
    let n = report_violations(&doc, io);
    if n > 0 {
        return Err(io.fail(EXIT_SEMANTIC, format!("{n} violation(s)")));
    }
    let a = &doc.architecture;
    io.print(&format!(
        "ok: {} ({} ECUs, {} buses, {} functions, {} SWCs)\n",
        a.name,
        a.ecus.len(),
        a.buses.len(),
        a.functions.len(),
        a.swcs.len()
    ))
}

fn cmd_abstract(file: &Path, function: &str, io: &mut Io) -> CmdResult {
    let arch = load_valid(file, io)?;
    let fa = abstract_function(&arch, function).map_err(|e| io.fail(EXIT_SEMANTIC, e))?;
    let mut text = format!("function {}\n", fa.function);
    for e in &fa.elements {
        text.push_str(&format!("{:<15} {:<30} {}\n", e.class.to_string(), e.id, e.location));
    }
    for swc in arch.swcs_of(function) {
        let r = assess_relocatability(&arch, &swc.id).map_err(|e| io.fail(EXIT_SEMANTIC, e))?;
        if r.is_relocatable() {
            text.push_str(&format!("relocatable {}\n", r.swc));
        } else {
            let reasons: Vec<&str> = r.reasons.iter().map(|r| r.as_str()).collect();
            text.push_str(&format!("anchored {} [{}]\n", r.swc, reasons.join(", ")));
        }
    }
    io.print(&text)
}

fn cmd_centralize(args: &CentralizeArgs, settings: &Settings, io: &mut Io) -> CmdResult {
    let arch = load_valid(&args.file, io)?;
    let result = match &args.scope.function {
        Some(f) => centralize_function(&arch, f, &settings.limits),
        None => centralize_all(&arch, &settings.limits),
    };
    let trace = result.map_err(|e| match e {
        EngineError::InvalidConfig(_) => io.fail(EXIT_USAGE, e),
        _ => io.fail(EXIT_SEMANTIC, e),
    })?;

    let stem = args.file.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned());
    let dir = args.out.join(stem);
    fs::create_dir_all(&dir).map_err(|e| io.fail(EXIT_USAGE, format!("cannot create {}: {e}", dir.display())))?;
    write_trace(&trace, &dir, settings, io)?;
    io.print(&format!(
        "{} stage(s) written to {}\nterminal_reason: {}\n",
        trace.stages.len(),
        dir.display(),
        trace.terminal_reason
    ))
}

fn write_trace(trace: &StageTrace, dir: &Path, settings: &Settings, io: &mut Io) -> CmdResult {
    for (n, stage) in trace.stages.iter().enumerate() {
        write_file(&dir.join(format!("stage_{n}.eea")), &dsl::serialize(&stage.architecture), io)?;
        write_file(&dir.join(format!("stage_{n}.dot")), &emit_dot(&stage.architecture, &settings.render), io)?;
    }
    write_file(&dir.join("trace.md"), &trace.to_markdown(), io)
}

fn cmd_metrics(file: &Path, strict: bool, settings: &Settings, io: &mut Io) -> CmdResult {
    let arch = load_valid(file, io)?;
    let m = compute_metrics(&arch);
    let style = classify(&arch);
    let mut t = String::new();
    t.push_str(&format!("style: {} ({})\n", style.style, style.evidence.join("; ")));
    t.push_str(&format!("ecu_count: {}\n", m.ecu_count));
    t.push_str(&format!("circuit_count: {}\n", m.circuit_count));
    t.push_str(&format!("circuit_host_count: {}\n", m.circuit_host_count));
    t.push_str(&format!("channel_count: {}\n", m.channel_count));
    t.push_str(&format!("wire_length_m: {:.2}\n", m.wire_length_m));
    t.push_str(&format!("cut_leads: {}\n", m.cut_leads));
    t.push_str(&format!("lin_masters: {}\nlin_slaves: {}\n", m.lin_masters, m.lin_slaves));
    for (ty, n) in &m.bus_count_by_type {
        t.push_str(&format!("buses.{ty}: {n}\n"));
    }
    for (bus, load) in &m.busload {
        t.push_str(&format!("busload.{bus}: {load:.4}\n"));
    }
    for (f, hops) in &m.latency_hops {
        t.push_str(&format!("latency_hops.{f}: {hops}\n"));
    }
    for e in spof_analysis(&arch) {
        t.push_str(&format!("spof {}: {}\n", e.ecu, e.functions.join(", ")));
    }
    let violations = check_constraints(&arch, &settings.limits);
    for v in &violations {
        t.push_str(&format!("constraint {v}\n"));
    }
    io.print(&t)?;
    if strict && !violations.is_empty() {
        return Err(io.fail(EXIT_SEMANTIC, format!("{} constraint violation(s)", violations.len())));
    }
    Ok(())
}

fn label_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load_all(files: &[PathBuf], io: &mut Io) -> Result<Vec<(String, Architecture)>, Exit> {
    files.iter().map(|f| Ok((label_of(f), load_valid(f, io)?))).collect()
}

fn cmd_compare(
    files: &[PathBuf],
    format: Format,
    output: Option<&Path>,
    settings: &Settings,
    io: &mut Io,
) -> CmdResult {
    let variants = load_all(files, io)?;
    let report: ComparisonReport = compare(&variants, &settings.limits).map_err(|e| io.fail(EXIT_USAGE, e))?;
    let text = match format {
        Format::Markdown => report.to_markdown(),
        Format::Csv => report.to_csv(),
    };
    match output {
        Some(path) => write_file(path, &text, io),
        None => io.print(&text),
    }
}

fn cmd_fleet_summary(files: &[PathBuf], format: Format, io: &mut Io) -> CmdResult {
    let variants = if files.is_empty() {
        corpus::FLEET
            .iter()
            .map(|(label, text)| (label.to_string(), dsl::parse(text).expect("bundled fleet files parse")))
            .collect()
    } else {
        load_all(files, io)?
    };
    let summary = fleet_summary(&variants);
    io.print(&match format {
        Format::Markdown => summary.to_markdown(),
        Format::Csv => summary.to_csv(),
    })
}
