//! Project workflow on top of the computation engines: stage tracking,
//! persistence, CSV ingestion and chart export.

pub mod export;
pub mod import;
pub mod persist;
pub mod project;

pub use export::{export_chart_data, ExportError};
pub use import::{import_heuristics, import_problems, read_heuristics, read_problems, ImportError};
pub use persist::{from_json, load_project, lock_project, save_project, to_json, PersistError, ProjectLock};
pub use project::{
    EvaluationRecord, IterationRecord, LoopBack, ProjectOutcome, ProjectState, Stage, StageArtifacts,
    StageStatus, WorkbenchError,
};
