//! Command-line driver: parses experiment specs, runs them through the
//! `gaplab` harness and writes CSV or JSON results with a run manifest.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;
use serde_json::{Map, Value};

pub use args::{Cli, Command, Format};
pub use error::{CliError, EXIT_RUNTIME, EXIT_SPEC};

use commands::{BoundsParams, CoverParams, KsParams, LearnParams, LowerBoundParams, NoGapParams, Params, SeparationParams, VcParams};
use manifest::{now_rfc3339, spec_hash, RunManifest};
use output::{render_csv, render_json};

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SPEC } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// One experiment taken from the config (or the flags alone).
struct Entry {
    seed: u64,
    out: Option<PathBuf>,
    params: Map<String, Value>,
}

fn load_entries(cli: &Cli) -> Result<Vec<Entry>, CliError> {
    let raw: Vec<Value> = match &cli.config {
        None => vec![Value::Object(Map::new())],
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
            match serde_json::from_str(&text)? {
                Value::Array(items) if items.is_empty() => return Err(CliError::Spec("config list is empty".into())),
                Value::Array(items) => items,
                obj @ Value::Object(_) => vec![obj],
                _ => return Err(CliError::Spec("config must be an object or a list of objects".into())),
            }
        }
    };
    let name = cli.command.name();
    raw.into_iter()
        .map(|v| {
            let Value::Object(mut map) = v else {
                return Err(CliError::Spec("config entries must be objects".into()));
            };
            if let Some(kind) = map.remove("kind") {
                if kind.as_str() != Some(name) {
                    return Err(CliError::Spec(format!("config kind {kind} does not match command {name}")));
                }
            }
            map.remove("name");
            let config_seed = match map.remove("seed") {
                None => None,
                Some(s) => Some(s.as_u64().ok_or_else(|| CliError::Spec(format!("seed {s} is not a u64")))?),
            };
            let config_out = match map.remove("out") {
                None => None,
                Some(Value::String(s)) => Some(PathBuf::from(s)),
                Some(o) => return Err(CliError::Spec(format!("out {o} is not a path"))),
            };
            Ok(Entry { seed: cli.seed.or(config_seed).unwrap_or(0), out: cli.out.clone().or(config_out), params: map })
        })
        .collect()
}

fn overlay(params: &mut Map<String, Value>, flags: impl Serialize) -> Result<(), CliError> {
    if let Value::Object(flags) = serde_json::to_value(flags)? {
        params.extend(flags);
    }
    Ok(())
}

/// Output path of entry `k` of `total`: `run.csv` becomes `run.1.csv`, ...
fn numbered(path: &Path, k: usize, total: usize) -> PathBuf {
    if total == 1 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{k}"),
    };
    path.with_file_name(name)
}

fn run_params<P: Params>(params: Map<String, Value>, cli_trials: Option<u64>, seed: u64) -> Result<(output::Report, Value), CliError> {
    let mut params = params;
    if let (true, Some(t)) = (P::USES_TRIALS, cli_trials) {
        params.insert("trials".into(), t.into());
    }
    let parsed: P = serde_json::from_value(Value::Object(params))?;
    let resolved = serde_json::to_value(&parsed)?;
    Ok((parsed.run(seed)?, resolved))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let started_at = now_rfc3339();
    let entries = load_entries(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let name = cli.command.name();
    let total = entries.len();
    let mut manifest = RunManifest {
        tool: "gaplab",
        version: env!("CARGO_PKG_VERSION"),
        command: name.to_string(),
        spec_sha256: Vec::new(),
        seed: Vec::new(),
        started_at,
        finished_at: String::new(),
        outputs: Vec::new(),
    };
    let mut failure = None;
    for (k, mut entry) in entries.into_iter().enumerate() {
        let result = pool.install(|| -> Result<(), CliError> {
            let params = std::mem::take(&mut entry.params);
            let (report, resolved) = match &cli.command {
                Command::Cover(a) => with_flags::<CoverParams>(params, a, cli, entry.seed),
                Command::Vc(a) => with_flags::<VcParams>(params, a, cli, entry.seed),
                Command::Learn(a) => with_flags::<LearnParams>(params, a, cli, entry.seed),
                Command::Separation(a) => with_flags::<SeparationParams>(params, a, cli, entry.seed),
                Command::LowerBound(a) => with_flags::<LowerBoundParams>(params, a, cli, entry.seed),
                Command::KsStats(a) => with_flags::<KsParams>(params, a, cli, entry.seed),
                Command::NoGap(a) => with_flags::<NoGapParams>(params, a, cli, entry.seed),
                Command::Bounds(a) => with_flags::<BoundsParams>(params, a, cli, entry.seed),
            }?;
            let hash = spec_hash(name, entry.seed, &resolved);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = match cli.format {
                Format::Csv => render_csv(&report, name, entry.seed, &hash)?,
                Format::Json => render_json(&report, name, entry.seed, &hash)?,
            };
            match &entry.out {
                Some(path) => {
                    let path = numbered(path, k + 1, total);
                    std::fs::write(&path, text)?;
                    manifest.outputs.push(path.display().to_string());
                }
                None => print!("{text}"),
            }
            manifest.spec_sha256.push(hash);
            manifest.seed.push(entry.seed);
            Ok(())
        });
        if let Err(e) = result {
            failure = Some(e);
            break;
        }
    }
    manifest.finished_at = now_rfc3339();
    write_manifest(&manifest, cli.out.as_deref().or(manifest.outputs.first().map(Path::new)))?;
    failure.map_or(Ok(()), Err)
}

fn with_flags<P: Params>(mut params: Map<String, Value>, flags: impl Serialize, cli: &Cli, seed: u64) -> Result<(output::Report, Value), CliError> {
    overlay(&mut params, flags)?;
    run_params::<P>(params, cli.trials, seed)
}

/// `<out>.manifest.json` next to the output, or one JSON line on stderr.
fn write_manifest(manifest: &RunManifest, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest)?;
    match out {
        Some(path) => {
            let mut name = path.as_os_str().to_owned();
            name.push(".manifest.json");
            std::fs::write(PathBuf::from(name), text + "\n")?;
        }
        None => eprintln!("{}", serde_json::to_string(manifest)?),
    }
    Ok(())
}
