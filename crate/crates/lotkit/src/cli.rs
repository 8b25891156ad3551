//! The `lotkit` command line. [`run`] takes its output streams as arguments
//! so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 unreadable input or bad usage, 2 the input
//! parsed but failed validation (or `verify` found violations).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use lotkit_core::certify::verify_certificate;
use lotkit_core::complexity::{ExactOptions, DEFAULT_MAX_VERTICES};
use lotkit_core::gen::{census_size, enumerate_lots, random_lot, rosebrock_chain, Attachment, GenError, DEFAULT_CENSUS_CAP};
use lotkit_core::reachability::naive_closure;

use crate::analysis::{analyze_text, render_text, AnalyzeOptions};
use crate::document::CertificateDoc;
use crate::formats::{export_dot, serialize_lot};
use crate::verify::{dump_findings, run as run_verify, ClosureOracle, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Environment variable overriding the exhaustive census cap.
pub const MAX_M_VAR: &str = "LOTKIT_MAX_M";

/// Violations written to disk by `verify`.
const DUMP_LIMIT: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "lotkit", version, about = "Complexity, decomposition and asphericity checks for labeled oriented trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a LOT file or a presentation (`< gens | rels >`).
    Analyze(AnalyzeArgs),
    /// Write generated LOTs as LOT files.
    Generate(GenerateArgs),
    /// Check invariants over the census and random samples.
    Verify(VerifyArgs),
    /// Re-verify a certificate JSON document.
    CheckCertificate { path: PathBuf },
}

#[derive(clap::Args, Debug)]
pub struct AnalyzeArgs {
    pub path: PathBuf,
    /// Run the exact (exponential) complexity search.
    #[arg(long)]
    pub exact: bool,
    /// Print the analysis as JSON.
    #[arg(long)]
    pub json: bool,
    /// Write a Graphviz drawing with the best seed highlighted.
    #[arg(long, value_name = "OUT")]
    pub dot: Option<PathBuf>,
    /// Write the certificate, if any, as a standalone JSON document.
    #[arg(long, value_name = "OUT")]
    pub certificate: Option<PathBuf>,
    /// Largest graph the exact search accepts.
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Chain,
    Random,
    Census,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachmentArg {
    Chain,
    Star,
    Random,
}

impl From<AttachmentArg> for Attachment {
    fn from(a: AttachmentArg) -> Self {
        match a {
            AttachmentArg::Chain => Attachment::Chain,
            AttachmentArg::Star => Attachment::Star,
            AttachmentArg::Random => Attachment::Random,
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Vertex count (random and census modes).
    #[arg(long, short = 'm')]
    pub vertices: Option<usize>,
    /// Number of Rosebrock parts (chain mode).
    #[arg(long)]
    pub parts: Option<usize>,
    #[arg(long, value_enum, default_value = "chain")]
    pub attachment: AttachmentArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random LOTs, seeded `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Output directory; single graphs go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Allow a census above the cap.
    #[arg(long)]
    pub force: bool,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    /// Largest census size checked exhaustively.
    #[arg(long, default_value_t = 5)]
    pub max_m: usize,
    /// Random LOTs checked at each of m = 6 and m = 7.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where failing graphs are written.
    #[arg(long, default_value = "lotkit-violations")]
    pub dump_dir: PathBuf,
    /// Allow a census above the cap.
    #[arg(long)]
    pub force: bool,
}

/// Replaceable internals, for self-tests of the harness.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub oracle: ClosureOracle,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks { oracle: naive_closure }
    }
}

/// Exhaustive census cap, from the environment or the default.
pub fn census_cap() -> usize {
    std::env::var(MAX_M_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CENSUS_CAP)
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, out, err, Hooks::default())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, hooks: Hooks) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a, out, err),
        Command::Generate(g) => generate(&g, out, err),
        Command::Verify(v) => verify(&v, out, err, hooks),
        Command::CheckCertificate { path } => check_certificate(&path, out),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

type CmdResult = Result<i32, String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let text = read(&args.path)?;
    let options = AnalyzeOptions { exact: args.exact, exact_options: ExactOptions { budget: None, max_vertices: args.max_vertices } };
    let analysis = match analyze_text(&text, &options) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", args.path.display());
            return Ok(EXIT_INPUT);
        }
    };
    if args.json {
        let _ = writeln!(out, "{}", analysis.document.to_json());
    } else {
        let _ = write!(out, "{}", render_text(&analysis));
    }
    if let Some(path) = &args.dot {
        match &analysis.graph {
            Some(g) => write_file(path, &export_dot(g, &analysis.highlight()))?,
            None => {
                let _ = writeln!(err, "not a simple graph; no drawing written");
            }
        }
    }
    if let (Some(path), Some(cert), Some(g)) = (&args.certificate, &analysis.certificate, &analysis.graph) {
        write_file(path, &CertificateDoc::new(g, cert).to_json())?;
    }
    if analysis.is_valid() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(err, "{}: input failed validation", args.path.display());
        Ok(EXIT_INVALID)
    }
}

fn generate(args: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("--mode {:?} needs {flag}", args.mode).to_lowercase());
    let graphs: Vec<(String, lotkit_core::graph::LogGraph)> = match args.mode {
        ModeArg::Chain => {
            let parts = need(args.parts, "--parts")?;
            let g = rosebrock_chain(parts, args.attachment.into(), args.seed).map_err(|e| e.to_string())?;
            let attachment = format!("{:?}", args.attachment).to_lowercase();
            vec![(format!("chain-s{parts}-{attachment}-seed{}.lot", args.seed), g)]
        }
        ModeArg::Random => {
            let m = need(args.vertices, "--vertices")?;
            (0..args.count as u64)
                .map(|i| {
                    let seed = args.seed.wrapping_add(i);
                    random_lot(m, seed).map(|g| (format!("random-m{m}-seed{seed}.lot"), g)).map_err(|e| e.to_string())
                })
                .collect::<Result<_, _>>()?
        }
        ModeArg::Census => {
            let m = need(args.vertices, "--vertices")?;
            let cap = if args.force { usize::MAX } else { census_cap() };
            let lots = enumerate_lots(m, cap).map_err(|e| match e {
                GenError::SizeTooLarge { .. } => format!("{e} (use --force or set {MAX_M_VAR})"),
                other => other.to_string(),
            })?;
            let width = census_size(m).to_string().len();
            lots.enumerate().map(|(i, g)| (format!("census-m{m}-{i:0width$}.lot"), g)).collect()
        }
    };
    let Some(dir) = &args.out else {
        if args.mode == ModeArg::Census {
            return Err("--mode census needs --out".into());
        }
        for (i, (_, g)) in graphs.iter().enumerate() {
            if i > 0 {
                let _ = writeln!(out);
            }
            let _ = write!(out, "{}", serialize_lot(g));
        }
        return Ok(EXIT_OK);
    };
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for (name, g) in &graphs {
        write_file(&dir.join(name), &serialize_lot(g))?;
    }
    if args.mode == ModeArg::Census {
        let m = args.vertices.expect("checked above");
        let manifest = serde_json::json!({
            "mode": "census",
            "m": m,
            "count": graphs.len(),
            "expected": census_size(m),
            "files": graphs.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
        });
        write_file(&dir.join("manifest.json"), &serde_json::to_string_pretty(&manifest).expect("json"))?;
        if graphs.len() as u64 != census_size(m) {
            let _ = writeln!(err, "census count {} differs from the closed form {}", graphs.len(), census_size(m));
            return Ok(EXIT_INVALID);
        }
    }
    let _ = writeln!(out, "wrote {} graphs to {}", graphs.len(), dir.display());
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write, hooks: Hooks) -> CmdResult {
    let cap = census_cap();
    if args.max_m > cap && !args.force {
        return Err(format!("census of {} vertices exceeds the cap of {cap} (use --force or set {MAX_M_VAR})", args.max_m));
    }
    let config =
        VerifyConfig { max_m: args.max_m, samples: args.samples, seed: args.seed, oracle: hooks.oracle, ..VerifyConfig::default() };
    let report = run_verify(&config);
    let _ = writeln!(out, "{}", report.summary());
    if report.findings.is_empty() {
        return Ok(EXIT_OK);
    }
    for f in report.findings.iter().take(DUMP_LIMIT) {
        let _ = writeln!(err, "violation [{}] m={}: {}", f.check, f.graph.vertex_count(), f.detail);
    }
    match dump_findings(&report.findings, &args.dump_dir, DUMP_LIMIT) {
        Ok(paths) => {
            let _ = writeln!(err, "wrote {} fixtures to {}", paths.len(), args.dump_dir.display());
        }
        Err(e) => {
            let _ = writeln!(err, "could not write fixtures: {e}");
        }
    }
    Ok(EXIT_INVALID)
}

fn check_certificate(path: &Path, out: &mut dyn Write) -> CmdResult {
    let text = read(path)?;
    let (g, cert) = CertificateDoc::from_json(&text).and_then(|d| d.to_certificate()).map_err(|e| format!("{}: {e}", path.display()))?;
    match verify_certificate(&g, &cert) {
        Ok(()) => {
            let _ = writeln!(out, "certificate ok: {}", cert.reason.as_str());
            Ok(EXIT_OK)
        }
        Err(e) => {
            let _ = writeln!(out, "certificate rejected: {e}");
            Ok(EXIT_INVALID)
        }
    }
}
