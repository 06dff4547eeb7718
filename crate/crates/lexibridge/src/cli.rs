//! Command-line front end. The binary only forwards to [`main`].

use std::collections::BTreeMap;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use lexibridge_core::model::{Pos, SynsetId, TranslationRecord};
use lexibridge_core::stats::{self, CountingPolicy};
use lexibridge_core::validation::validate_project;

use crate::api::{self, AppState};
use crate::export::{export_lmf, LexiconInfo};
use crate::prior::{export_tsv, import_prior_translations};
use crate::report;
use crate::store::{ProjectStore, SCHEMA};
use crate::users::UserConfig;
use crate::wndb::load_source;

pub const DEFAULT_STORE: &str = "lexibridge.project";
pub const DEFAULT_ADDR: &str = "127.0.0.1:8787";

type Error = Box<dyn std::error::Error + Send + Sync>;

#[derive(Debug, Parser)]
#[command(name = "lexibridge", version, about = "Wordnet translation workbench")]
pub struct Cli {
    /// Project file.
    #[arg(long, global = true, env = "LEXIBRIDGE_DATA", default_value = DEFAULT_STORE)]
    pub store: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    /// Translation records.
    Target,
    /// Imported source synsets.
    Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Tsv,
    Lmf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load source synsets from a directory of WNDB data files.
    ImportWndb { dir: PathBuf },
    /// Load prior translations from a 7-column TSV file.
    ImportPrior { tsv: PathBuf },
    /// Print findings; exits 1 when any error-severity finding exists.
    Validate {
        #[arg(long)]
        pos: Option<Pos>,
        /// Print only error-severity findings.
        #[arg(long)]
        errors_only: bool,
        /// Include records nobody has submitted yet.
        #[arg(long)]
        all: bool,
    },
    /// Inventory, enrichment and rejection-loop reports.
    Stats {
        #[command(subcommand)]
        report: StatsCommand,
    },
    /// Write the target lexicon to stdout.
    Export {
        #[arg(long, value_enum, default_value = "tsv")]
        format: ExportFormat,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value = DEFAULT_ADDR)]
        addr: SocketAddr,
        #[arg(long)]
        users: PathBuf,
    },
    /// Drop every claim on every record.
    ReleaseClaims,
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    Inventory {
        #[arg(long, value_enum, default_value = "target")]
        side: Side,
        /// Which target records count; ignored for the source side.
        #[arg(long, default_value = "submitted")]
        policy: CountingPolicy,
        #[arg(long, value_enum, default_value = "tsv")]
        format: ReportFormat,
    },
    Diff {
        /// Prior-translation TSV or project file to compare against.
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long, value_enum, default_value = "tsv")]
        format: ReportFormat,
    },
    Loops {
        #[arg(long, value_enum, default_value = "tsv")]
        format: ReportFormat,
    },
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn load_baseline(path: &Path) -> Result<BTreeMap<SynsetId, TranslationRecord>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if text.starts_with(SCHEMA) {
        return Ok(ProjectStore::from_text(&text)?.project().records.clone());
    }
    let parsed = import_prior_translations(&text)?;
    for e in &parsed.errors {
        eprintln!("warning: {}:{}: {}", path.display(), e.line, e.reason);
    }
    Ok(parsed.records.into_iter().map(|r| (r.source, r)).collect())
}

/// Runs one command, writing its output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<ExitCode, Error> {
    let path = cli.store;
    match cli.command {
        Command::ImportWndb { dir } => {
            let (sources, parse) = load_source(&dir)?;
            for w in &parse.warnings {
                eprintln!("warning: {w}");
            }
            for e in &parse.errors {
                eprintln!(
                    "skipped {}:{} (byte {}): {}",
                    e.file, e.line, e.byte_offset, e.reason
                );
            }
            let mut store = ProjectStore::open(&path)?;
            let n = store.import_sources(sources.into_values().collect())?;
            store.save(&path)?;
            writeln!(
                out,
                "imported {n} synsets, skipped {} lines",
                parse.errors.len()
            )?;
        }
        Command::ImportPrior { tsv } => {
            let text =
                std::fs::read_to_string(&tsv).map_err(|e| format!("{}: {e}", tsv.display()))?;
            let parsed = import_prior_translations(&text)?;
            for e in &parsed.errors {
                eprintln!("skipped {}:{}: {}", tsv.display(), e.line, e.reason);
            }
            let mut store = ProjectStore::open(&path)?;
            let n = store.import_records(parsed.records)?;
            store.save(&path)?;
            writeln!(
                out,
                "imported {n} records, skipped {} rows",
                parsed.errors.len()
            )?;
        }
        Command::Validate {
            pos,
            errors_only,
            all,
        } => {
            let store = ProjectStore::open(&path)?;
            let findings = validate_project(store.project(), pos.map(Pos::bucket), all);
            let failed = findings.iter().any(|f| f.is_error());
            let shown: Vec<_> = findings
                .into_iter()
                .filter(|f| !errors_only || f.is_error())
                .collect();
            out.write_all(report::findings_lines(&shown).as_bytes())?;
            if failed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Stats { report: which } => {
            let store = ProjectStore::open(&path)?;
            let records = &store.project().records;
            let text = match which {
                StatsCommand::Inventory {
                    side,
                    policy,
                    format,
                } => {
                    let inv = match side {
                        Side::Target => stats::inventory(records.values(), policy),
                        Side::Source => stats::source_inventory(store.project().sources.values()),
                    };
                    match format {
                        ReportFormat::Tsv => report::inventory_tsv(&inv),
                        ReportFormat::Json => json(&inv),
                    }
                }
                StatsCommand::Diff { baseline, format } => {
                    let base = load_baseline(&baseline)?;
                    let outcome = stats::enrichment_diff(&base, records);
                    if !outcome.unmatched_baseline.is_empty() {
                        eprintln!(
                            "warning: {} baseline records are not in the project",
                            outcome.unmatched_baseline.len()
                        );
                    }
                    match format {
                        ReportFormat::Tsv => report::diff_tsv(&outcome.diff),
                        ReportFormat::Json => json(&outcome),
                    }
                }
                StatsCommand::Loops { format } => {
                    let m = stats::loop_metrics(records.values());
                    match format {
                        ReportFormat::Tsv => report::loops_tsv(&m),
                        ReportFormat::Json => json(&m),
                    }
                }
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Export { format } => {
            let store = ProjectStore::open(&path)?;
            let records = store.project().records.values();
            let text = match format {
                ExportFormat::Tsv => export_tsv(records),
                ExportFormat::Lmf => export_lmf(records, &LexiconInfo::default()),
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Serve { addr, users } => {
            let users = UserConfig::load(&users)?;
            let store = ProjectStore::open(&path)?;
            let journal = store.journal(&path)?;
            let state = Arc::new(AppState::new(store, users).with_journal(journal));
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr).await?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                axum::serve(listener, api::router(state))
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await
            })?;
        }
        Command::ReleaseClaims => {
            let mut store = ProjectStore::open(&path)?;
            let n = store.release_claims()?;
            store.save(&path)?;
            writeln!(out, "released {n} claims")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
