use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robertson_cli::builtins::{builtin, builtin_scenarios, list_builtin_scenarios};
use robertson_cli::scenario::validate_all;
use robertson_cli::{
    parse_scenarios, run_batch, to_csv, to_json, Format, Report, ReportRecord, RunError,
    ScenarioConfig,
};

/// Log verbosity, e.g. `ROBERTSON_LOG=info`.
const LOG_ENV: &str = "ROBERTSON_LOG";

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "robertson", version, about = "Run uncertainty-relation scenarios and emit reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled scenario.
    Run(RunArgs),
    /// List bundled scenarios.
    List,
    /// Run every bundled scenario and print one PASS/FAIL line each.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file: one scenario object or {"scenarios": [...]}.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    scenario: Option<PathBuf>,
    /// Id of a bundled scenario.
    #[arg(long)]
    builtin: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Overrides the seed of every scenario.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CheckArgs {
    /// Also write the full report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

fn encode(report: &Report, format: Format) -> std::io::Result<Vec<u8>> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(&report.records),
    }
}

/// Writes through a temporary file in the target directory and renames it, so
/// readers never see a partial report.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(report: &Report, format: Format, out: Option<&Path>) -> std::io::Result<()> {
    let bytes = encode(report, format)?;
    match out {
        Some(path) => write_atomic(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    }
}

fn load(args: &RunArgs) -> Result<Vec<ScenarioConfig>, String> {
    if let Some(path) = &args.scenario {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        return parse_scenarios(&text).map_err(|e| format!("{}: {e}", path.display()));
    }
    let id = args.builtin.as_deref().unwrap_or_default();
    builtin(id).map(|c| vec![c]).ok_or_else(|| format!("no bundled scenario named '{id}'"))
}

fn exit_for(e: &RunError) -> ExitCode {
    match e {
        RunError::Module { .. } => ExitCode::from(EXIT_CHECK_FAILED),
        RunError::Schema(_) | RunError::Io(_) => ExitCode::from(EXIT_USAGE),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let configs = match load(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let report = match run_batch(&configs, args.seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    // Scenarios that declare their own output path also get a file of their own.
    for c in &configs {
        if let Some(spec) = c.output.as_ref().filter(|o| o.path.is_some()) {
            let records: Vec<ReportRecord> = report
                .records
                .iter()
                .filter(|r| r.scenario_id == c.scenario_id)
                .cloned()
                .collect();
            let own = Report::new(1, records);
            let format = args.format.map_or(spec.format, Format::from);
            if let Err(e) = emit(&own, format, spec.path.as_deref()) {
                eprintln!("error: writing report for {}: {e}", c.scenario_id);
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let format = args.format.map(Format::from).unwrap_or_else(|| {
        match configs.as_slice() {
            [only] => only.output.as_ref().map_or(Format::Json, |o| o.format),
            _ => Format::Json,
        }
    });
    if let Err(e) = emit(&report, format, args.out.as_deref()) {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn check(args: CheckArgs) -> ExitCode {
    let configs = builtin_scenarios();
    if let Err(e) = validate_all(&configs) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let mut records = Vec::new();
    let mut all_passed = true;
    for c in &configs {
        match robertson_cli::run_scenario(c, None) {
            Ok(recs) => {
                let passed = recs.iter().all(ReportRecord::passed);
                all_passed &= passed;
                println!("{} {}", if passed { "PASS" } else { "FAIL" }, c.scenario_id);
                for r in recs.iter() {
                    for failed in r.checks.iter().filter(|k| !k.passed) {
                        log::warn!(
                            "{}/{}: {} = {} (expected {} {})",
                            c.scenario_id,
                            r.operation,
                            failed.name,
                            failed.value,
                            failed.comparison,
                            failed.expected
                        );
                    }
                }
                records.extend(recs);
            }
            Err(e) => {
                all_passed = false;
                println!("FAIL {} ({e})", c.scenario_id);
            }
        }
    }
    let report = Report::new(configs.len(), records);
    if let Some(out) = &args.out {
        if let Err(e) = emit(&report, args.format.into(), Some(out)) {
            eprintln!("error: writing report: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run(args) => run(args),
        Command::List => {
            for (id, description) in list_builtin_scenarios() {
                println!("{id}\t{description}");
            }
            ExitCode::SUCCESS
        }
        Command::Check(args) => check(args),
    }
}
