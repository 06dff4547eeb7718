//! Core of the lexibridge wordnet localization workbench.
//!
//! Everything here is pure data manipulation over `alloc` collections:
//! the synset and translation-record model, the quality rule set, the
//! three-role review state machine, and report computations. Parsing,
//! persistence and serving live in the `lexibridge` crate.

#![no_std]

extern crate alloc;

pub mod model;
pub mod stats;
pub mod validation;
pub mod workflow;

pub use model::{
    normalize_lemma, Action, Finding, Locus, Offset, Pos, PosBucket, Project, Role, Severity,
    SourceSynset, Synonym, SynsetId, Timestamp, TranslationRecord, UserId, WorkflowEvent,
    WorkflowState,
};
