//! Reading and writing project files.
//!
//! A project file is a JSON document `{"schema_version": "1", "project": {..}}`.
//! Loading checks the structure first, then the semantic invariants, and
//! reports the first problem together with its path in the document.

use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::project::ProjectState;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("cannot access {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("schema violation at {location}: {message}")]
    SchemaViolation { location: String, message: String },
    #[error("unsupported schema version {0:?} (expected \"{SCHEMA_VERSION}\")")]
    UnsupportedVersion(String),
}

impl PersistError {
    fn io(path: &Path, source: io::Error) -> Self {
        PersistError::IoFailure {
            path: path.to_path_buf(),
            source,
        }
    }

    fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        PersistError::SchemaViolation {
            location: location.into(),
            message: message.into(),
        }
    }
}

#[derive(Serialize)]
struct ProjectFileOut<'a> {
    schema_version: &'static str,
    project: &'a ProjectState,
}

#[derive(Deserialize)]
struct ProjectFileIn {
    project: ProjectState,
}

pub fn to_json(state: &ProjectState) -> String {
    let doc = ProjectFileOut {
        schema_version: SCHEMA_VERSION,
        project: state,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("project serialization is infallible");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<ProjectState, PersistError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| PersistError::schema("$", e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| PersistError::schema("$", "expected a JSON object"))?;
    match obj.get("schema_version") {
        None => return Err(PersistError::schema("schema_version", "missing field")),
        Some(serde_json::Value::String(v)) if v == SCHEMA_VERSION => {}
        Some(serde_json::Value::String(v)) => return Err(PersistError::UnsupportedVersion(v.clone())),
        Some(other) => return Err(PersistError::UnsupportedVersion(other.to_string())),
    }
    let doc: ProjectFileIn = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let location = if path == "." { "$".to_string() } else { path };
        PersistError::schema(location, e.into_inner().to_string())
    })?;
    let report = doc.project.validate();
    if let Some(v) = report.violations.first() {
        return Err(PersistError::schema(format!("project.{}", v.subject), v.message.clone()));
    }
    Ok(doc.project)
}

/// Writes the project through a temporary file and a rename, so readers
/// never see a half-written document.
pub fn save_project(state: &ProjectState, path: &Path) -> Result<(), PersistError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, to_json(state)).map_err(|e| PersistError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| PersistError::io(path, e))
}

pub fn load_project(path: &Path) -> Result<ProjectState, PersistError> {
    let text = fs::read_to_string(path).map_err(|e| PersistError::io(path, e))?;
    from_json(&text)
}

/// An exclusive advisory lock on a project, held until dropped.
///
/// The lock lives on a sidecar `<project>.lock` file because saving
/// replaces the project file itself.
#[derive(Debug)]
pub struct ProjectLock {
    _file: File,
}

pub fn lock_project(path: &Path) -> Result<ProjectLock, PersistError> {
    let mut lock_path = path.as_os_str().to_owned();
    lock_path.push(".lock");
    let lock_path = PathBuf::from(lock_path);
    let file = OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(&lock_path)
        .map_err(|e| PersistError::io(&lock_path, e))?;
    file.lock().map_err(|e| PersistError::io(&lock_path, e))?;
    Ok(ProjectLock { _file: file })
}
