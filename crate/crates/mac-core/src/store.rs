//! Run persistence: every discovery run writes a directory containing the
//! adjacency matrix, the executed plan, any flags, one log per debate
//! session, and a manifest tying them together.
//!
//! Transcript logs are JSON Lines with one `{"author", "side", "content"}`
//! object per turn and carry no timestamps, so identical runs produce
//! byte-identical logs; the only wall-clock field lives in the manifest.

use crate::agents::Side;
use crate::graph::export_adjacency_csv;
use crate::pipelines::RunResult;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("manifest is not valid JSON: {0}")]
    Corrupt(String),
}

/// Summary of one pipeline run, written as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub pipeline: String,
    pub dataset_id: String,
    pub backend_id: String,
    pub model: String,
    pub created_unix_ms: u64,
    pub plan_algorithm: Option<String>,
    pub sessions: Vec<String>,
    pub flags: Vec<String>,
    /// Request digests served or stored by a caching backend during the
    /// run; empty for other backends.
    pub cache_digests: Vec<String>,
}

impl RunManifest {
    /// Builds the manifest for a finished run, stamped with the current
    /// wall-clock time.
    pub fn for_run(
        pipeline: &str,
        dataset_id: &str,
        backend_id: &str,
        model: &str,
        cache_digests: Vec<String>,
        result: &RunResult,
    ) -> Self {
        let created_unix_ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        Self {
            pipeline: pipeline.to_string(),
            dataset_id: dataset_id.to_string(),
            backend_id: backend_id.to_string(),
            model: model.to_string(),
            created_unix_ms,
            plan_algorithm: result.plan.as_ref().map(|p| p.algorithm.to_string()),
            sessions: result
                .transcripts
                .iter()
                .map(|t| t.meta.session.clone())
                .collect(),
            flags: result.flags.iter().map(|f| f.to_string()).collect(),
            cache_digests,
        }
    }
}

#[derive(Serialize)]
struct LogLine<'a> {
    author: &'a str,
    side: Option<Side>,
    content: &'a str,
}

/// Writes a complete run directory: `adjacency.csv`, `plan.txt` (when a
/// plan was debated), `flags.txt` (always, possibly empty), one
/// `<session>.log` per transcript, and `manifest.json`.
pub fn write_run_dir(
    dir: &Path,
    manifest: &RunManifest,
    result: &RunResult,
) -> Result<(), StoreError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(
        dir.join("adjacency.csv"),
        export_adjacency_csv(&result.adjacency),
    )?;

    if let Some(plan) = &result.plan {
        let mut text = format!("algorithm: {}\n", plan.algorithm);
        if let Some(alpha) = plan.alpha {
            text.push_str(&format!("alpha: {alpha}\n"));
        }
        if let Some(method) = plan.search_method {
            let name = match method {
                crate::scd::SearchMethod::Astar => "astar",
                crate::scd::SearchMethod::Dp => "dp",
            };
            text.push_str(&format!("search_method: {name}\n"));
        }
        for (idx, step) in plan.steps.iter().enumerate() {
            text.push_str(&format!("step {}: {step}\n", idx + 1));
        }
        std::fs::write(dir.join("plan.txt"), text)?;
    }

    let mut flags_text = String::new();
    for flag in &manifest.flags {
        flags_text.push_str(flag);
        flags_text.push('\n');
    }
    std::fs::write(dir.join("flags.txt"), flags_text)?;

    for transcript in &result.transcripts {
        let mut log = String::new();
        for entry in &transcript.entries {
            let line = LogLine {
                author: &entry.author,
                side: transcript.meta.sides.get(&entry.author).copied(),
                content: &entry.content,
            };
            log.push_str(&serde_json::to_string(&line).expect("log line serializes"));
            log.push('\n');
        }
        std::fs::write(dir.join(format!("{}.log", transcript.meta.session)), log)?;
    }

    let manifest_json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(dir.join("manifest.json"), manifest_json)?;
    Ok(())
}

/// Reads back a run directory's manifest.
pub fn read_manifest(dir: &Path) -> Result<RunManifest, StoreError> {
    let text = std::fs::read_to_string(dir.join("manifest.json"))?;
    serde_json::from_str(&text).map_err(|e| StoreError::Corrupt(e.to_string()))
}
