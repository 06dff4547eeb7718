//! Event-sourced project store.
//!
//! The project file is UTF-8 text:
//!
//! ```text
//! lexibridge-project 1
//! {"kind":"import_sources",...}
//! {"kind":"transition",...}
//! #snapshot
//! {"project":{...},"claims":{...}}
//! ```
//!
//! The first line names the schema version. Each following line is one log
//! entry in JSON. The optional snapshot section holds the state the log
//! replays to; it is checked against the replay on load.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use lexibridge_core::model::{
    Project, Role, SourceSynset, SynsetId, Timestamp, TranslationRecord, UserId,
};
use lexibridge_core::validation::SpecializationIndex;
use lexibridge_core::workflow::{self, Claim, ClaimBoard, Edits, Transition, WorkflowError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: &str = "lexibridge-project";
pub const SCHEMA_VERSION: u32 = 1;
const SNAPSHOT_MARKER: &str = "#snapshot";

/// One entry of the append-only log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogEntry {
    ImportSources {
        sources: Vec<SourceSynset>,
    },
    ImportRecords {
        records: Vec<TranslationRecord>,
    },
    Transition {
        id: SynsetId,
        event: lexibridge_core::WorkflowEvent,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edits: Option<Edits>,
    },
    Claim {
        id: SynsetId,
        claim: Claim,
    },
    ReleaseClaims {
        /// `None` releases every claim.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ids: Option<Vec<SynsetId>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Snapshot {
    project: Project,
    claims: ClaimBoard,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("no record for {0}")]
    NotFound(SynsetId),
    #[error(transparent)]
    Workflow(#[from] WorkflowError),
    #[error("record {0} already has translation work and cannot be overwritten by an import")]
    RecordExists(SynsetId),
    #[error("corrupt project file at byte {offset}: {reason}")]
    CorruptFile { offset: usize, reason: String },
    #[error("unsupported project schema version {found} (expected {SCHEMA_VERSION})")]
    VersionMismatch { found: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectStore {
    project: Project,
    claims: ClaimBoard,
    log: Vec<LogEntry>,
}

impl ProjectStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn project(&self) -> &Project {
        &self.project
    }

    pub fn claims(&self) -> &ClaimBoard {
        &self.claims
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    /// Monotonic version stamp: the number of log entries.
    pub fn version(&self) -> usize {
        self.log.len()
    }

    pub fn record(&self, id: &SynsetId) -> Option<&TranslationRecord> {
        self.project.records.get(id)
    }

    pub fn source(&self, id: &SynsetId) -> Option<&SourceSynset> {
        self.project.sources.get(id)
    }

    /// Whether two stores hold the same project and claims, ignoring the log.
    pub fn same_state(&self, other: &ProjectStore) -> bool {
        self.project == other.project && self.claims == other.claims
    }

    fn check(&self, entry: &LogEntry) -> Result<(), StoreError> {
        match entry {
            LogEntry::ImportRecords { records } => {
                for r in records {
                    if let Some(existing) = self.project.records.get(&r.source) {
                        if existing.revision > 0 || existing.state.is_submitted() {
                            return Err(StoreError::RecordExists(r.source));
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Applies an entry to the in-memory state. Live operations and replay
    /// both go through here.
    fn apply_entry(&mut self, entry: &LogEntry) -> Result<(), StoreError> {
        self.check(entry)?;
        match entry {
            LogEntry::ImportSources { sources } => {
                self.project.add_sources(sources.iter().cloned())
            }
            LogEntry::ImportRecords { records } => {
                for r in records {
                    self.project.records.insert(r.source, r.clone());
                }
            }
            LogEntry::Transition { id, event, edits } => {
                let record = self
                    .project
                    .records
                    .get(id)
                    .ok_or(StoreError::NotFound(*id))?;
                let next = workflow::replay(record, event.clone(), edits.as_ref())?;
                self.project.records.insert(*id, next);
                self.claims.release(id);
            }
            LogEntry::Claim { id, claim } => {
                let record = self
                    .project
                    .records
                    .get(id)
                    .ok_or(StoreError::NotFound(*id))?;
                self.claims
                    .assign(record, &claim.actor, claim.role, claim.at)?;
            }
            LogEntry::ReleaseClaims { ids: None } => {
                self.claims.release_all();
            }
            LogEntry::ReleaseClaims { ids: Some(ids) } => {
                for id in ids {
                    self.claims.release(id);
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, entry: LogEntry) -> Result<(), StoreError> {
        self.apply_entry(&entry)?;
        self.log.push(entry);
        Ok(())
    }

    /// Rebuilds a store by replaying log entries from empty.
    pub fn replay<I: IntoIterator<Item = LogEntry>>(entries: I) -> Result<Self, StoreError> {
        let mut store = ProjectStore::new();
        for entry in entries {
            store.push(entry)?;
        }
        Ok(store)
    }

    pub fn import_sources(&mut self, sources: Vec<SourceSynset>) -> Result<usize, StoreError> {
        let n = sources.len();
        if n > 0 {
            self.push(LogEntry::ImportSources { sources })?;
        }
        Ok(n)
    }

    /// Adds prior translations. Records that already went through the
    /// workflow are never overwritten.
    pub fn import_records(&mut self, records: Vec<TranslationRecord>) -> Result<usize, StoreError> {
        let n = records.len();
        if n > 0 {
            self.push(LogEntry::ImportRecords { records })?;
        }
        Ok(n)
    }

    /// Runs a workflow transition on one record and logs it.
    pub fn transition(
        &mut self,
        id: SynsetId,
        tr: Transition,
    ) -> Result<&TranslationRecord, StoreError> {
        let record = self
            .project
            .records
            .get(&id)
            .ok_or(StoreError::NotFound(id))?;
        if !self.claims.permits(&id, &tr.actor, tr.role) {
            if let Some(claim) = self.claims.get(&id) {
                return Err(WorkflowError::AlreadyClaimed(claim.actor.clone()).into());
            }
        }
        let edits = tr.edits.clone().filter(|e| !e.is_empty());
        let index = SpecializationIndex::new(&self.project);
        let next = workflow::apply_indexed(record, tr, self.project.sources.get(&id), &index)?;
        let event = next
            .history
            .last()
            .cloned()
            .expect("transition appends an event");
        self.push(LogEntry::Transition { id, event, edits })?;
        Ok(&self.project.records[&id])
    }

    pub fn assign(
        &mut self,
        id: SynsetId,
        actor: &UserId,
        role: Role,
        at: Timestamp,
    ) -> Result<Claim, StoreError> {
        let record = self
            .project
            .records
            .get(&id)
            .ok_or(StoreError::NotFound(id))?;
        let claim = self.claims.clone().assign(record, actor, role, at)?;
        self.push(LogEntry::Claim {
            id,
            claim: claim.clone(),
        })?;
        Ok(claim)
    }

    /// Drops every claim. Returns how many there were.
    pub fn release_claims(&mut self) -> Result<usize, StoreError> {
        let n = self.claims.len();
        if n > 0 {
            self.push(LogEntry::ReleaseClaims { ids: None })?;
        }
        Ok(n)
    }

    fn header() -> String {
        format!("{SCHEMA} {SCHEMA_VERSION}\n")
    }

    fn log_text(&self) -> String {
        let mut out = Self::header();
        for entry in &self.log {
            out.push_str(&serde_json::to_string(entry).expect("log entries serialize"));
            out.push('\n');
        }
        out
    }

    /// The full project file: log followed by a snapshot section.
    pub fn to_text(&self) -> String {
        let mut out = self.log_text();
        let snapshot = Snapshot {
            project: self.project.clone(),
            claims: self.claims.clone(),
        };
        out.push_str(SNAPSHOT_MARKER);
        out.push('\n');
        out.push_str(&serde_json::to_string(&snapshot).expect("snapshot serializes"));
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<Self, StoreError> {
        let corrupt = |offset: usize, reason: String| StoreError::CorruptFile { offset, reason };
        let mut offset = 0;
        let mut lines = text.split_inclusive('\n').map(|raw| {
            let start = offset;
            offset += raw.len();
            (start, raw)
        });

        let (_, header) = lines
            .next()
            .ok_or_else(|| corrupt(0, "empty file".into()))?;
        let header = header
            .strip_suffix('\n')
            .ok_or_else(|| corrupt(0, "truncated header".into()))?;
        let mut parts = header.split(' ');
        if parts.next() != Some(SCHEMA) {
            return Err(corrupt(0, format!("not a {SCHEMA} file")));
        }
        let version = parts.next().unwrap_or("");
        if version != SCHEMA_VERSION.to_string() || parts.next().is_some() {
            return Err(StoreError::VersionMismatch {
                found: version.to_string(),
            });
        }

        let mut store = ProjectStore::new();
        let mut snapshot: Option<(usize, Snapshot)> = None;
        let mut in_snapshot = false;
        for (start, raw) in lines {
            let line = raw
                .strip_suffix('\n')
                .ok_or_else(|| corrupt(start, "truncated line".into()))?;
            if line.is_empty() {
                continue;
            }
            if in_snapshot {
                if snapshot.is_some() {
                    return Err(corrupt(start, "extra data after snapshot".into()));
                }
                let parsed = serde_json::from_str(line)
                    .map_err(|e| corrupt(start, format!("snapshot: {e}")))?;
                snapshot = Some((start, parsed));
            } else if line == SNAPSHOT_MARKER {
                in_snapshot = true;
            } else {
                let entry: LogEntry = serde_json::from_str(line)
                    .map_err(|e| corrupt(start, format!("log entry: {e}")))?;
                store
                    .push(entry)
                    .map_err(|e| corrupt(start, format!("log entry does not replay: {e}")))?;
            }
        }
        if let Some((start, snap)) = snapshot {
            if snap.project != store.project || snap.claims != store.claims {
                return Err(corrupt(
                    start,
                    "snapshot does not match the replayed log".into(),
                ));
            }
        } else if in_snapshot {
            return Err(corrupt(text.len(), "snapshot section is empty".into()));
        }
        Ok(store)
    }

    /// Writes the project file atomically.
    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        write_atomic(path, &self.to_text())
    }

    pub fn load(path: &Path) -> Result<Self, StoreError> {
        let text = std::fs::read(path).map_err(io_err(path))?;
        let text = String::from_utf8(text).map_err(|e| StoreError::CorruptFile {
            offset: e.utf8_error().valid_up_to(),
            reason: "invalid UTF-8".into(),
        })?;
        Self::from_text(&text)
    }

    /// Loads `path`, or starts empty when it does not exist.
    pub fn open(path: &Path) -> Result<Self, StoreError> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new())
        }
    }

    /// Rewrites `path` as log-only and returns a journal that appends new
    /// entries to it.
    pub fn journal(&self, path: &Path) -> Result<Journal, StoreError> {
        write_atomic(path, &self.log_text())?;
        let file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(io_err(path))?;
        Ok(Journal {
            path: path.to_path_buf(),
            file,
            written: self.log.len(),
        })
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), StoreError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(io_err(&tmp))?;
    std::fs::rename(&tmp, path).map_err(io_err(path))
}

/// Append handle for a log-only project file.
#[derive(Debug)]
pub struct Journal {
    path: PathBuf,
    file: File,
    written: usize,
}

impl Journal {
    /// Appends the store's entries that are not on disk yet.
    pub fn sync(&mut self, store: &ProjectStore) -> Result<(), StoreError> {
        let mut buf = String::new();
        for entry in &store.log[self.written..] {
            buf.push_str(&serde_json::to_string(entry).expect("log entries serialize"));
            buf.push('\n');
        }
        self.file
            .write_all(buf.as_bytes())
            .map_err(io_err(&self.path))?;
        self.file.flush().map_err(io_err(&self.path))?;
        self.written = store.log.len();
        Ok(())
    }
}

/// Current wall-clock time.
pub fn now() -> Timestamp {
    let ms = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as i64)
        .unwrap_or_default();
    Timestamp(ms)
}
