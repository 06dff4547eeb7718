//! JSON-over-HTTP service.
//!
//! Every request carries `Authorization: Bearer <token>`; the token decides
//! the caller's user id and role. All mutations go through one lock around
//! the store, and the per-record revision check turns races into 409s.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::extract::{FromRequestParts, Path, Query, State};
use axum::http::header::{AUTHORIZATION, CONTENT_TYPE};
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lexibridge_core::model::{
    Action, Finding, Pos, PosBucket, Role, SynsetId, TranslationRecord, WorkflowState,
};
use lexibridge_core::stats::{self, CountingPolicy};
use lexibridge_core::validation::{validate_record, SpecializationIndex};
use lexibridge_core::workflow::{self, Edits, Transition, WorkflowError};
use serde::{Deserialize, Serialize};

use crate::export::{export_lmf, LexiconInfo};
use crate::prior::{export_tsv, import_prior_translations};
use crate::store::{now, Journal, LogEntry, ProjectStore, StoreError};
use crate::users::{User, UserConfig};
use crate::wndb::{parse_source_files, WndbError};

pub const PAGE_SIZE: usize = 50;

pub struct AppState {
    store: Mutex<ProjectStore>,
    journal: Option<Mutex<Journal>>,
    users: UserConfig,
}

impl AppState {
    pub fn new(store: ProjectStore, users: UserConfig) -> Self {
        AppState {
            store: Mutex::new(store),
            journal: None,
            users,
        }
    }

    /// Persists every accepted mutation through `journal`.
    pub fn with_journal(mut self, journal: Journal) -> Self {
        self.journal = Some(Mutex::new(journal));
        self
    }

    pub fn store(&self) -> MutexGuard<'_, ProjectStore> {
        self.store.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn persist(&self, store: &ProjectStore) -> Result<(), ApiError> {
        if let Some(journal) = &self.journal {
            let mut journal = journal.lock().unwrap_or_else(|e| e.into_inner());
            journal.sync(store).map_err(ApiError::from)?;
        }
        Ok(())
    }
}

pub type Shared = Arc<AppState>;

/// Error body: `{code, message, findings?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub findings: Option<Vec<Finding>>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                code: code.into(),
                message: message.into(),
                findings: None,
            },
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn not_found(id: SynsetId) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "not_found",
            format!("no record for {id}"),
        )
    }

    fn forbidden(message: impl Into<String>) -> Self {
        Self::new(StatusCode::FORBIDDEN, "forbidden", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<WorkflowError> for ApiError {
    fn from(e: WorkflowError) -> Self {
        use StatusCode as S;
        let message = e.to_string();
        let (status, code) = match &e {
            WorkflowError::StaleRevision { .. } => (S::CONFLICT, "stale_revision"),
            WorkflowError::AlreadyClaimed(_) => (S::CONFLICT, "already_claimed"),
            WorkflowError::ValidationBlocked(_) => (S::UNPROCESSABLE_ENTITY, "validation_blocked"),
            WorkflowError::MissingNote(_) => (S::UNPROCESSABLE_ENTITY, "missing_note"),
            WorkflowError::EmptyPhrases => (S::UNPROCESSABLE_ENTITY, "empty_phrases"),
            WorkflowError::EditsNotAllowed(_) => (S::UNPROCESSABLE_ENTITY, "edits_not_allowed"),
            WorkflowError::IllegalTransition { state, action, .. } => {
                if workflow::moves_from(*state).any(|r| r.action == *action) {
                    (S::FORBIDDEN, "role_not_permitted")
                } else {
                    (S::UNPROCESSABLE_ENTITY, "illegal_transition")
                }
            }
            WorkflowError::DutySeparationViolation { .. } => (S::FORBIDDEN, "duty_separation"),
            WorkflowError::NotEditable { .. } => (S::FORBIDDEN, "not_editable"),
            WorkflowError::WrongQueue { .. } => (S::FORBIDDEN, "wrong_queue"),
            WorkflowError::OutOfOrder { .. } => (S::INTERNAL_SERVER_ERROR, "out_of_order"),
        };
        let mut err = ApiError::new(status, code, message);
        if let WorkflowError::ValidationBlocked(findings) = e {
            err.body.findings = Some(findings);
        }
        err
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(id) => ApiError::not_found(id),
            StoreError::Workflow(w) => w.into(),
            StoreError::RecordExists(_) => {
                ApiError::new(StatusCode::CONFLICT, "record_exists", e.to_string())
            }
            other => ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "storage",
                other.to_string(),
            ),
        }
    }
}

/// The authenticated caller.
#[derive(Debug, Clone)]
pub struct Caller(pub User);

impl FromRequestParts<Shared> for Caller {
    type Rejection = ApiError;

    async fn from_request_parts(
        parts: &mut Parts,
        state: &Shared,
    ) -> Result<Self, Self::Rejection> {
        let unauthorized = || {
            ApiError::new(
                StatusCode::UNAUTHORIZED,
                "unauthorized",
                "missing or unknown bearer token",
            )
        };
        let header = parts.headers.get(AUTHORIZATION).ok_or_else(unauthorized)?;
        let token = header
            .to_str()
            .ok()
            .and_then(|h| h.strip_prefix("Bearer "))
            .ok_or_else(unauthorized)?;
        state
            .users
            .authenticate(token.trim())
            .cloned()
            .map(Caller)
            .ok_or_else(unauthorized)
    }
}

fn parse_id(pos: &str, offset: &str) -> Result<SynsetId, ApiError> {
    format!("{pos}:{offset}")
        .parse()
        .map_err(|e| ApiError::bad_request(format!("bad synset id: {e}")))
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/api/synsets", get(list_synsets))
        .route("/api/synsets/{pos}/{offset}", get(get_synset))
        .route("/api/synsets/{pos}/{offset}/transition", post(transition))
        .route("/api/synsets/{pos}/{offset}/claim", post(claim))
        .route("/api/validate/{pos}/{offset}", get(validate))
        .route("/api/stats/inventory", get(stats_inventory))
        .route("/api/stats/diff", get(stats_diff))
        .route("/api/stats/loops", get(stats_loops))
        .route("/api/import/wndb", post(import_wndb))
        .route("/api/import/prior", post(import_prior))
        .route("/api/export", get(export))
        .with_state(state)
}

#[derive(Debug, Default, Deserialize)]
pub struct ListQuery {
    pub state: Option<String>,
    pub pos: Option<String>,
    pub page: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub id: SynsetId,
    pub state: WorkflowState,
    pub revision: u64,
    pub is_gap: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_by: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    pub page: usize,
    pub per_page: usize,
    pub total: usize,
    pub items: Vec<Summary>,
}

fn last_touched(r: &TranslationRecord) -> i64 {
    r.history.last().map_or(i64::MIN, |e| e.timestamp.0)
}

async fn list_synsets(
    State(app): State<Shared>,
    Caller(user): Caller,
    Query(q): Query<ListQuery>,
) -> Result<Json<Page>, ApiError> {
    let queue = workflow::queue_states(user.role);
    let state = match q.state.as_deref().filter(|s| !s.is_empty()) {
        Some(s) => {
            let s: WorkflowState = s
                .parse()
                .map_err(|_| ApiError::bad_request(format!("unknown state {s:?}")))?;
            if !queue.contains(&s) {
                return Err(ApiError::forbidden(format!(
                    "{s} is not in the {} queue",
                    user.role
                )));
            }
            Some(s)
        }
        None => None,
    };
    let bucket: Option<PosBucket> = match q.pos.as_deref().filter(|s| !s.is_empty()) {
        Some(p) => Some(
            p.parse::<Pos>()
                .map_err(|e| ApiError::bad_request(e.to_string()))?
                .bucket(),
        ),
        None => None,
    };
    let page = q.page.unwrap_or(1).max(1);

    let store = app.store();
    let mut hits: Vec<&TranslationRecord> = store
        .project()
        .records
        .values()
        .filter(|r| queue.contains(&r.state))
        .filter(|r| state.is_none_or(|s| r.state == s))
        .filter(|r| bucket.is_none_or(|b| r.source.pos.bucket() == b))
        .collect();
    hits.sort_by_key(|r| (last_touched(r), r.source));
    let total = hits.len();
    let items = hits
        .into_iter()
        .skip((page - 1) * PAGE_SIZE)
        .take(PAGE_SIZE)
        .map(|r| Summary {
            id: r.source,
            state: r.state,
            revision: r.revision,
            is_gap: r.is_gap,
            claimed_by: store.claims().get(&r.source).map(|c| c.actor.to_string()),
        })
        .collect();
    Ok(Json(Page {
        page,
        per_page: PAGE_SIZE,
        total,
        items,
    }))
}

async fn get_synset(
    State(app): State<Shared>,
    Caller(user): Caller,
    Path((pos, offset)): Path<(String, String)>,
) -> Result<Json<workflow::RecordView>, ApiError> {
    let id = parse_id(&pos, &offset)?;
    let store = app.store();
    let record = store.record(&id).ok_or_else(|| ApiError::not_found(id))?;
    Ok(Json(workflow::view_for(
        record,
        store.source(&id),
        user.role,
    )))
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct TransitionBody {
    pub action: Action,
    #[serde(default)]
    pub note: Option<String>,
    pub expected_revision: u64,
    #[serde(default)]
    pub edits: Option<Edits>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionReply {
    pub view: workflow::RecordView,
    pub warnings: Vec<Finding>,
}

async fn transition(
    State(app): State<Shared>,
    Caller(user): Caller,
    Path((pos, offset)): Path<(String, String)>,
    Json(body): Json<TransitionBody>,
) -> Result<Json<TransitionReply>, ApiError> {
    let id = parse_id(&pos, &offset)?;
    let mut tr = Transition::new(body.action, user.id.as_str(), user.role)
        .expecting(body.expected_revision)
        .at(now());
    tr.note = body.note;
    tr.edits = body.edits;

    let mut store = app.store();
    let record = store.transition(id, tr)?.clone();
    app.persist(&store)?;
    let warnings = record
        .history
        .last()
        .map(|e| e.warnings.clone())
        .unwrap_or_default();
    Ok(Json(TransitionReply {
        view: workflow::view_for(&record, store.source(&id), user.role),
        warnings,
    }))
}

async fn claim(
    State(app): State<Shared>,
    Caller(user): Caller,
    Path((pos, offset)): Path<(String, String)>,
) -> Result<Json<workflow::Claim>, ApiError> {
    let id = parse_id(&pos, &offset)?;
    let mut store = app.store();
    let claim = store.assign(id, &user.id, user.role, now())?;
    app.persist(&store)?;
    Ok(Json(claim))
}

async fn validate(
    State(app): State<Shared>,
    Caller(_): Caller,
    Path((pos, offset)): Path<(String, String)>,
) -> Result<Json<Vec<Finding>>, ApiError> {
    let id = parse_id(&pos, &offset)?;
    let store = app.store();
    let record = store.record(&id).ok_or_else(|| ApiError::not_found(id))?;
    let index = SpecializationIndex::new(store.project());
    Ok(Json(validate_record(record, store.source(&id), &index)))
}

#[derive(Debug, Default, Deserialize)]
pub struct InventoryQuery {
    pub policy: Option<String>,
    /// `target` (default) or `source`.
    pub side: Option<String>,
}

async fn stats_inventory(
    State(app): State<Shared>,
    Caller(_): Caller,
    Query(q): Query<InventoryQuery>,
) -> Result<Json<stats::InventoryReport>, ApiError> {
    let policy: CountingPolicy = match q.policy.as_deref() {
        Some(p) => p
            .parse()
            .map_err(|_| ApiError::bad_request(format!("unknown policy {p:?}")))?,
        None => CountingPolicy::default(),
    };
    let store = app.store();
    match q.side.as_deref().unwrap_or("target") {
        "target" => Ok(Json(stats::inventory(
            store.project().records.values(),
            policy,
        ))),
        "source" => Ok(Json(stats::source_inventory(
            store.project().sources.values(),
        ))),
        other => Err(ApiError::bad_request(format!("unknown side {other:?}"))),
    }
}

#[derive(Debug, Default, Deserialize)]
pub struct DiffQuery {
    pub baseline: Option<String>,
}

/// Records as first imported from prior translations.
pub fn prior_baseline(store: &ProjectStore) -> BTreeMap<SynsetId, TranslationRecord> {
    let mut out = BTreeMap::new();
    for entry in store.log() {
        if let LogEntry::ImportRecords { records } = entry {
            for r in records {
                out.entry(r.source).or_insert_with(|| r.clone());
            }
        }
    }
    out
}

/// Baseline `prior` (the default) is the imported prior translations; a
/// number `n` is the project as it stood after its first `n` log entries.
async fn stats_diff(
    State(app): State<Shared>,
    Caller(_): Caller,
    Query(q): Query<DiffQuery>,
) -> Result<Json<stats::DiffOutcome>, ApiError> {
    let store = app.store();
    let baseline = match q.baseline.as_deref().unwrap_or("prior") {
        "prior" => prior_baseline(&store),
        n => {
            let n: usize = n
                .parse()
                .map_err(|_| ApiError::bad_request("baseline must be `prior` or a log position"))?;
            if n > store.log().len() {
                return Err(ApiError::bad_request(format!(
                    "log has only {} entries",
                    store.log().len()
                )));
            }
            ProjectStore::replay(store.log()[..n].iter().cloned())?
                .project()
                .records
                .clone()
        }
    };
    Ok(Json(stats::enrichment_diff(
        &baseline,
        &store.project().records,
    )))
}

async fn stats_loops(State(app): State<Shared>, Caller(_): Caller) -> Json<stats::LoopMetrics> {
    let store = app.store();
    Json(stats::loop_metrics(store.project().records.values()))
}

fn require_import_role(user: &User) -> Result<(), ApiError> {
    if user.role == Role::Translator {
        return Err(ApiError::forbidden(
            "imports need the corrector or expert role",
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct WndbUpload {
    pub files: BTreeMap<String, String>,
}

async fn import_wndb(
    State(app): State<Shared>,
    Caller(user): Caller,
    Json(body): Json<WndbUpload>,
) -> Result<Json<crate::wndb::ParseReport>, ApiError> {
    require_import_role(&user)?;
    let (sources, report) = parse_source_files(&body.files).map_err(|e| match e {
        WndbError::NoInputFiles(_) => ApiError::bad_request(e.to_string()),
        other => ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "fatal_format",
            other.to_string(),
        ),
    })?;
    let mut store = app.store();
    store.import_sources(sources.into_values().collect())?;
    app.persist(&store)?;
    Ok(Json(report))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PriorReply {
    pub imported: usize,
    pub errors: Vec<crate::wndb::LineError>,
}

async fn import_prior(
    State(app): State<Shared>,
    Caller(user): Caller,
    body: String,
) -> Result<Json<PriorReply>, ApiError> {
    require_import_role(&user)?;
    let parsed = import_prior_translations(&body).map_err(|e| {
        ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "duplicate_record",
            e.to_string(),
        )
    })?;
    let mut store = app.store();
    let imported = store.import_records(parsed.records)?;
    app.persist(&store)?;
    Ok(Json(PriorReply {
        imported,
        errors: parsed.errors,
    }))
}

#[derive(Debug, Default, Deserialize)]
pub struct ExportQuery {
    pub format: Option<String>,
}

async fn export(
    State(app): State<Shared>,
    Caller(_): Caller,
    Query(q): Query<ExportQuery>,
) -> Result<Response, ApiError> {
    let store = app.store();
    let records = store.project().records.values();
    match q.format.as_deref().unwrap_or("tsv") {
        "tsv" => Ok((
            [(CONTENT_TYPE, "text/tab-separated-values; charset=utf-8")],
            export_tsv(records),
        )
            .into_response()),
        "lmf" => Ok((
            [(CONTENT_TYPE, "application/xml; charset=utf-8")],
            export_lmf(records, &LexiconInfo::default()),
        )
            .into_response()),
        other => Err(ApiError::bad_request(format!(
            "unknown export format {other:?}"
        ))),
    }
}
