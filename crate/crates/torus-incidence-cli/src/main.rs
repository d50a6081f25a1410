//! Command-line interface for torus incidence colorings.
//!
//! Exit codes are a stable contract: 0 success (and, for `verify`, a valid
//! input), 1 invariant violation (invalid coloring, or an internal failure
//! that should be reported as a bug), 2 usage or parse error, 3 refused by
//! a size guard.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use torus_incidence::coloring::{
    verify_incidence_coloring, verify_partial, verify_vertex_coloring, Verdict,
};
use torus_incidence::constructor::{construct_with, ConstructError, ConstructOptions};
use torus_incidence::exact::{
    exact_incidence_chromatic_with, exact_vertex_chromatic_with, ExactError, OracleGuards,
};
use torus_incidence::formats::{
    coloring_json, generic_graph_json, parse_coloring_json, parse_graph_json, parse_pattern_json,
    parse_pattern_matrix, partial_coloring_json, pattern_json, pattern_matrix,
    quasi_pattern_json, render_ascii, render_dot, torus_graph_json, FormatError, ParsedColoring,
    ParsedGraph, ParsedPattern,
};
use torus_incidence::graph::{Incidence, TorusGrid};
use torus_incidence::pattern::QuasiPattern;

#[derive(Parser)]
#[command(name = "torus-incidence", version, about = "Incidence colorings of toroidal grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an optimal incidence coloring of the m x n torus.
    ///
    /// The coloring goes to stdout (or --out); a one-line trace summary
    /// with the case label and palette size goes to stderr.
    Construct {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Write the coloring here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Check a coloring or pattern file and report valid/invalid.
    Verify {
        /// Coloring file (kind `incidence`) or pattern file (kind
        /// `vertex-square`).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyKind::Incidence)]
        kind: VerifyKind,
    },
    /// Certify a chromatic number exhaustively and print the report JSON.
    Chromatic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        target: ChromaticTarget,
        /// Largest palette size to try.
        #[arg(long, default_value_t = 12)]
        k_max: u32,
        #[command(flatten)]
        settings: Settings,
    },
    /// Draw a coloring file as an ASCII diagram.
    Render {
        #[arg(long)]
        input: PathBuf,
    },
    /// Convert between the supported file formats.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: OutputFormat,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Matrix,
    Dot,
    Ascii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    /// An incidence coloring file, total or partial.
    Incidence,
    /// A pattern file read as a vertex coloring of the torus square.
    VertexSquare,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChromaticTarget {
    /// Incidence chromatic number of the torus.
    Incidence,
    /// Chromatic number of the torus square.
    Square,
}

/// Flags shared by commands that consult the cache or the size guards.
/// Precedence: flags, then the config file, then the environment (which
/// carries the cache directory only).
#[derive(Args)]
struct Settings {
    /// TOML config file with optional keys `cache_dir`, `max_vertices`,
    /// `max_incidences`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for base-pattern cache files.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Raise the vertex guard of the exhaustive oracles.
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Raise the incidence guard of the exhaustive oracles.
    #[arg(long)]
    max_incidences: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    cache_dir: Option<PathBuf>,
    max_vertices: Option<usize>,
    max_incidences: Option<usize>,
}

/// Settings after applying the precedence rules.
struct Resolved {
    cache_dir: Option<PathBuf>,
    guards: OracleGuards,
}

const CACHE_DIR_ENV: &str = "TORUS_INCIDENCE_CACHE_DIR";

impl Settings {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let config = match &self.config {
            Some(path) => {
                let text = read_input(path)?;
                toml::from_str::<ConfigFile>(&text)
                    .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let cache_dir = self
            .cache_dir
            .clone()
            .or(config.cache_dir)
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));
        let defaults = OracleGuards::default();
        let guards = OracleGuards {
            max_vertices: Some(
                self.max_vertices
                    .or(config.max_vertices)
                    .unwrap_or(defaults.max_vertices.expect("default guard is set")),
            ),
            max_incidences: Some(
                self.max_incidences
                    .or(config.max_incidences)
                    .unwrap_or(defaults.max_incidences.expect("default guard is set")),
            ),
        };
        Ok(Resolved { cache_dir, guards })
    }
}

enum CliError {
    /// Bad arguments, unreadable files, parse errors: exit 2.
    Usage(String),
    /// A coloring failed verification or an internal invariant broke: exit 1.
    Invalid(String),
    /// An exhaustive oracle refused an oversized instance: exit 3.
    Guard(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invalid(_) => 1,
            CliError::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::Guard(m) => m,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Construct {
            m,
            n,
            format,
            out,
            settings,
        } => cmd_construct(m, n, format, out.as_deref(), &settings),
        Command::Verify { input, kind } => cmd_verify(&input, kind),
        Command::Chromatic {
            m,
            n,
            target,
            k_max,
            settings,
        } => cmd_chromatic(m, n, target, k_max, &settings),
        Command::Render { input } => cmd_render(&input),
        Command::Export { input, format, out } => cmd_export(&input, format, out.as_deref()),
    }
}

fn cmd_construct(
    m: usize,
    n: usize,
    format: OutputFormat,
    out: Option<&Path>,
    settings: &Settings,
) -> Result<(), CliError> {
    let resolved = settings.resolve()?;
    let opts = ConstructOptions {
        cache_dir: resolved.cache_dir,
        ..ConstructOptions::default()
    };
    let (coloring, trace) = construct_with(m, n, &opts).map_err(|e| match e {
        ConstructError::TooSmall { .. } => CliError::Usage(e.to_string()),
        other => CliError::Invalid(format!("construction failed: {other}")),
    })?;
    let payload = match format {
        OutputFormat::Json => coloring_json(&coloring),
        OutputFormat::Ascii => render_ascii(&coloring.as_partial()),
        OutputFormat::Dot => render_dot(&coloring.as_partial()),
        OutputFormat::Matrix => {
            return Err(CliError::Usage(
                "the matrix format carries patterns only, not colorings".into(),
            ))
        }
    };
    write_output(out, &payload)?;
    eprintln!("{} palette={}", trace.summary(), coloring.palette_size());
    Ok(())
}

fn cmd_verify(input: &Path, kind: VerifyKind) -> Result<(), CliError> {
    let text = read_input(input)?;
    match kind {
        VerifyKind::Incidence => match parse_coloring_json(&text)? {
            ParsedColoring::Total(c) => report_verdict(
                verify_incidence_coloring(&c).map_witness(|(a, b)| incidence_pair(a, b)),
            ),
            ParsedColoring::Partial(c) => {
                report_verdict(verify_partial(&c).map_witness(|(a, b)| incidence_pair(a, b)))
            }
        },
        VerifyKind::VertexSquare => {
            let pattern = parse_pattern_input(&text)?.pattern;
            let cols = pattern.cols();
            let coloring = pattern
                .square_coloring()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            report_verdict(verify_vertex_coloring(&coloring).map_witness(|(u, v)| {
                format!(
                    "vertices ({},{}) and ({},{}) within distance two share a color",
                    u / cols,
                    u % cols,
                    v / cols,
                    v % cols
                )
            }))
        }
    }
}

fn report_verdict(verdict: Verdict<String>) -> Result<(), CliError> {
    match verdict {
        Verdict::Valid => {
            println!("valid");
            Ok(())
        }
        Verdict::Invalid { witness } => {
            println!("invalid: {witness}");
            Err(CliError::Invalid("verification failed".into()))
        }
    }
}

fn incidence_pair(a: Incidence, b: Incidence) -> String {
    format!("incidences {a} and {b} are adjacent with equal colors")
}

fn cmd_chromatic(
    m: usize,
    n: usize,
    target: ChromaticTarget,
    k_max: u32,
    settings: &Settings,
) -> Result<(), CliError> {
    let resolved = settings.resolve()?;
    let grid = TorusGrid::new(m, n)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = match target {
        ChromaticTarget::Incidence => {
            exact_incidence_chromatic_with(grid, k_max, &resolved.guards)
        }
        ChromaticTarget::Square => {
            exact_vertex_chromatic_with(&grid.to_graph().square(), k_max, &resolved.guards)
        }
    }
    .map_err(|e| match e {
        ExactError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
        other => CliError::Invalid(other.to_string()),
    })?;
    print!("{}", report.to_json());
    Ok(())
}

fn cmd_render(input: &Path) -> Result<(), CliError> {
    let text = read_input(input)?;
    let partial = parse_coloring_json(&text)?.into_partial();
    print!("{}", render_ascii(&partial));
    Ok(())
}

fn cmd_export(input: &Path, format: OutputFormat, out: Option<&Path>) -> Result<(), CliError> {
    let text = read_input(input)?;
    let payload = match sniff(&text) {
        InputKind::Coloring => {
            let parsed = parse_coloring_json(&text)?;
            match (format, parsed) {
                (OutputFormat::Json, ParsedColoring::Total(c)) => coloring_json(&c),
                (OutputFormat::Json, ParsedColoring::Partial(c)) => partial_coloring_json(&c),
                (OutputFormat::Ascii, parsed) => render_ascii(&parsed.into_partial()),
                (OutputFormat::Dot, parsed) => render_dot(&parsed.into_partial()),
                (OutputFormat::Matrix, _) => {
                    return Err(CliError::Usage(
                        "the matrix format carries patterns only, not colorings".into(),
                    ))
                }
            }
        }
        InputKind::Pattern => export_pattern(parse_pattern_input(&text)?, format)?,
        InputKind::Matrix => export_pattern(
            ParsedPattern {
                pattern: parse_pattern_matrix(&text)?,
                deleted_edges: Vec::new(),
            },
            format,
        )?,
        InputKind::Graph => match (format, parse_graph_json(&text)?) {
            (OutputFormat::Json, ParsedGraph::Torus(grid)) => torus_graph_json(grid),
            (OutputFormat::Json, ParsedGraph::Generic(g)) => generic_graph_json(&g),
            _ => {
                return Err(CliError::Usage(
                    "graph files export to json only".into(),
                ))
            }
        },
    };
    write_output(out, &payload)
}

fn export_pattern(parsed: ParsedPattern, format: OutputFormat) -> Result<String, CliError> {
    let ParsedPattern {
        pattern,
        deleted_edges,
    } = parsed;
    match format {
        OutputFormat::Json if deleted_edges.is_empty() => Ok(pattern_json(&pattern)),
        OutputFormat::Json => {
            let qp = QuasiPattern::new(pattern, BTreeSet::from_iter(deleted_edges))
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            Ok(quasi_pattern_json(&qp))
        }
        OutputFormat::Matrix if deleted_edges.is_empty() => Ok(pattern_matrix(&pattern)),
        OutputFormat::Matrix => Err(CliError::Usage(
            "the matrix format cannot express deleted edges".into(),
        )),
        OutputFormat::Dot | OutputFormat::Ascii => Err(CliError::Usage(
            "patterns export to json or matrix only".into(),
        )),
    }
}

enum InputKind {
    Coloring,
    Pattern,
    Graph,
    Matrix,
}

/// Decides what a file contains: JSON files are told apart by their
/// distinguishing key, everything else is matrix text.
fn sniff(text: &str) -> InputKind {
    if text.trim_start().starts_with('{') {
        if text.contains("\"colors\"") {
            InputKind::Coloring
        } else if text.contains("\"entries\"") {
            InputKind::Pattern
        } else {
            InputKind::Graph
        }
    } else {
        InputKind::Matrix
    }
}

fn parse_pattern_input(text: &str) -> Result<ParsedPattern, CliError> {
    match sniff(text) {
        InputKind::Pattern => Ok(parse_pattern_json(text)?),
        InputKind::Matrix => Ok(ParsedPattern {
            pattern: parse_pattern_matrix(text)?,
            deleted_edges: Vec::new(),
        }),
        _ => Err(CliError::Usage(
            "expected a pattern file (json or matrix text)".into(),
        )),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, payload: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}
