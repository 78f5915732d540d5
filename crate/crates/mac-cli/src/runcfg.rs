//! Run configuration: the optional TOML config file, flag/file/default
//! precedence, and the on-disk record that makes a run replayable.

use std::path::{Path, PathBuf};

use mac_core::datasets::{builtin_descriptor, DatasetDescriptor};
use mac_core::pipelines::PipelineConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::spec::{absolutize, BackendSpec, Pipeline, BACKEND_GRAMMAR};

/// Contents of a `--config` TOML file. Every field is optional; flags
/// override file values, which override the built-in defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub pipeline: Option<Pipeline>,
    /// Built-in dataset id (`mac datasets` lists them).
    pub dataset: Option<String>,
    /// Path to a dataset descriptor TOML for custom data.
    pub descriptor: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub backend: Option<String>,
    pub out: Option<PathBuf>,
    pub base_url: Option<String>,
    pub interactive: Option<bool>,
    /// Agent and algorithm settings (`[run]`, `[run.algorithm]`,
    /// `[run.debate]`).
    pub run: Option<PipelineConfig>,
}

/// A `discover` invocation as received: unset fields fall back to the
/// config file and then to defaults.
#[derive(Debug, Clone, Default)]
pub struct DiscoverRequest {
    pub config: Option<PathBuf>,
    pub pipeline: Option<Pipeline>,
    pub dataset: Option<String>,
    pub descriptor: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub backend: Option<String>,
    pub out: Option<PathBuf>,
    pub base_url: Option<String>,
    pub interactive: bool,
    pub strict_constraints: bool,
    pub model: Option<String>,
    pub temperature: Option<f64>,
    pub prompt_date: Option<String>,
    pub sample_rows: Option<usize>,
    pub alpha: Option<f64>,
    pub edge_threshold: Option<f64>,
    pub seed: Option<u64>,
    pub search_method: Option<mac_core::scd::SearchMethod>,
    pub max_rounds: Option<usize>,
    pub unresolved_policy: Option<mac_core::debate::UnresolvedPolicy>,
}

/// A fully validated `discover` request, ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedDiscover {
    pub pipeline: Pipeline,
    pub descriptor: DatasetDescriptor,
    pub csv: Option<PathBuf>,
    pub backend: Option<BackendSpec>,
    pub out: PathBuf,
    pub base_url: String,
    pub interactive: bool,
    pub run: PipelineConfig,
}

pub const DEFAULT_BASE_URL: &str = "https://api.openai.com/v1";

/// Applies flag > file > default precedence and validates the result.
pub fn resolve(req: DiscoverRequest) -> Result<ResolvedDiscover, CliError> {
    let file = match &req.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read config file {}: {e}", path.display()))
            })?;
            toml::from_str::<FileConfig>(&text).map_err(|e| {
                CliError::usage(format!("invalid config file {}: {e}", path.display()))
            })?
        }
        None => FileConfig::default(),
    };

    let pipeline = req
        .pipeline
        .or(file.pipeline)
        .ok_or_else(|| CliError::usage("--pipeline is required (flag or config file)"))?;

    let descriptor = match (
        req.dataset.or(file.dataset),
        req.descriptor.or(file.descriptor),
    ) {
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "pass either --dataset <builtin-id> or --descriptor <file.toml>, not both",
            ))
        }
        (Some(id), None) => builtin_descriptor(&id).map_err(|e| CliError::usage(e.to_string()))?,
        (None, Some(path)) => load_descriptor(&path)?,
        (None, None) => {
            return Err(CliError::usage(
                "a dataset is required: pass --dataset <builtin-id> or --descriptor <file.toml>",
            ))
        }
    };

    let csv = req.csv.or(file.csv);
    if pipeline.needs_data() && csv.is_none() {
        return Err(CliError::usage(format!(
            "--csv <file> is required for pipeline {pipeline}"
        )));
    }

    let backend = match (pipeline.needs_backend(), req.backend.or(file.backend)) {
        (true, Some(spec)) => Some(BackendSpec::parse(&spec)?),
        (true, None) => {
            return Err(CliError::usage(format!(
                "--backend is required for pipeline {pipeline}: {BACKEND_GRAMMAR}"
            )))
        }
        (false, Some(_)) => {
            eprintln!("note: pipeline {pipeline} runs without a backend; --backend is ignored");
            None
        }
        (false, None) => None,
    };

    let mut run = file.run.unwrap_or_default();
    if let Some(v) = req.model {
        run.model = v;
    }
    if let Some(v) = req.temperature {
        run.temperature = v;
    }
    if let Some(v) = req.prompt_date {
        run.prompt_date = v;
    }
    if let Some(v) = req.sample_rows {
        run.sample_rows = v;
    }
    if let Some(v) = req.alpha {
        run.algorithm.alpha = v;
    }
    if let Some(v) = req.edge_threshold {
        run.algorithm.edge_threshold = v;
    }
    if let Some(v) = req.seed {
        run.algorithm.seed = v;
    }
    if let Some(v) = req.search_method {
        run.algorithm.search_method = v;
    }
    if let Some(v) = req.max_rounds {
        run.debate.max_rounds = v;
    }
    if let Some(v) = req.unresolved_policy {
        run.debate.unresolved_policy = v;
    }
    if req.strict_constraints {
        run.strict_constraints = true;
    }

    run.algorithm
        .validate()
        .map_err(|e| CliError::usage(format!("invalid algorithm settings: {e}")))?;
    if run.debate.max_rounds == 0 {
        return Err(CliError::usage("max_rounds must be at least 1"));
    }

    let out = req.out.or(file.out).unwrap_or_else(|| {
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        PathBuf::from(format!("runs/{}_{}_{}", descriptor.id, pipeline, stamp))
    });

    Ok(ResolvedDiscover {
        pipeline,
        descriptor,
        csv,
        backend,
        out,
        base_url: req
            .base_url
            .or(file.base_url)
            .unwrap_or_else(|| DEFAULT_BASE_URL.to_string()),
        interactive: req.interactive || file.interactive.unwrap_or(false),
        run,
    })
}

/// Loads and sanity-checks a custom dataset descriptor TOML.
pub fn load_descriptor(path: &Path) -> Result<DatasetDescriptor, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read descriptor {}: {e}", path.display())))?;
    let descriptor: DatasetDescriptor = toml::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid descriptor {}: {e}", path.display())))?;
    if descriptor.id.trim().is_empty() {
        return Err(CliError::usage(format!(
            "descriptor {} has an empty id",
            path.display()
        )));
    }
    if descriptor.variables.len() < 2 {
        return Err(CliError::usage(format!(
            "descriptor {} needs at least two variables",
            path.display()
        )));
    }
    let mut names: Vec<&str> = descriptor
        .variables
        .iter()
        .map(|v| v.name.as_str())
        .collect();
    names.sort_unstable();
    names.dedup();
    if names.len() != descriptor.variables.len() {
        return Err(CliError::usage(format!(
            "descriptor {} repeats a variable name",
            path.display()
        )));
    }
    Ok(descriptor)
}

/// File inside every run directory that makes the run reproducible.
pub const RUN_RECORD_FILE: &str = "run_config.toml";

/// The resolved settings of a finished run, written next to its outputs.
/// Paths are absolute so `mac replay` works from any working directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub pipeline: Pipeline,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    pub descriptor: DatasetDescriptor,
    pub run: PipelineConfig,
}

impl RunRecord {
    pub fn for_resolved(resolved: &ResolvedDiscover) -> Self {
        RunRecord {
            pipeline: resolved.pipeline,
            backend: resolved
                .backend
                .as_ref()
                .map(|spec| spec.absolutized().spec_string()),
            csv: resolved
                .csv
                .as_ref()
                .map(|p| absolutize(p).display().to_string()),
            descriptor: resolved.descriptor.clone(),
            run: resolved.run.clone(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| CliError::runtime(anyhow::anyhow!("cannot serialize run record: {e}")))?;
        std::fs::write(dir.join(RUN_RECORD_FILE), text).map_err(CliError::runtime)
    }

    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(RUN_RECORD_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CliError::runtime(anyhow::anyhow!(
                "{} is not a run directory: cannot read {}: {e}",
                dir.display(),
                RUN_RECORD_FILE
            ))
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::runtime(anyhow::anyhow!("corrupt {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::EXIT_USAGE;

    fn base_request() -> DiscoverRequest {
        DiscoverRequest {
            pipeline: Some(Pipeline::Meta),
            dataset: Some("auto_mpg".to_string()),
            backend: Some("scripted:fixtures/auto_mpg_meta.toml".to_string()),
            ..DiscoverRequest::default()
        }
    }

    #[test]
    fn resolves_minimal_meta_request() {
        let resolved = resolve(base_request()).unwrap();
        assert_eq!(resolved.pipeline, Pipeline::Meta);
        assert_eq!(resolved.descriptor.id, "auto_mpg");
        assert!(resolved.csv.is_none());
        assert_eq!(resolved.run, PipelineConfig::default());
        assert!(resolved.out.starts_with("runs"));
    }

    #[test]
    fn missing_requirements_are_usage_errors() {
        let mut req = base_request();
        req.pipeline = None;
        assert_eq!(resolve(req).unwrap_err().exit_code(), EXIT_USAGE);

        let mut req = base_request();
        req.dataset = None;
        assert_eq!(resolve(req).unwrap_err().exit_code(), EXIT_USAGE);

        let mut req = base_request();
        req.backend = None;
        assert_eq!(resolve(req).unwrap_err().exit_code(), EXIT_USAGE);

        let mut req = base_request();
        req.pipeline = Some(Pipeline::Coding);
        assert_eq!(resolve(req).unwrap_err().exit_code(), EXIT_USAGE, "csv");

        let mut req = base_request();
        req.alpha = Some(1.5);
        assert_eq!(resolve(req).unwrap_err().exit_code(), EXIT_USAGE, "alpha");

        let mut req = base_request();
        req.max_rounds = Some(0);
        assert_eq!(resolve(req).unwrap_err().exit_code(), EXIT_USAGE, "rounds");
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("mac.toml");
        std::fs::write(
            &cfg,
            r#"
pipeline = "meta"
dataset = "auto_mpg"
backend = "scripted:a.toml"

[run]
temperature = 0.5

[run.debate]
max_rounds = 7
"#,
        )
        .unwrap();
        let req = DiscoverRequest {
            config: Some(cfg),
            temperature: Some(0.25),
            ..DiscoverRequest::default()
        };
        let resolved = resolve(req).unwrap();
        assert_eq!(resolved.run.temperature, 0.25);
        assert_eq!(resolved.run.debate.max_rounds, 7);
        assert_eq!(
            resolved.backend,
            Some(BackendSpec::Scripted("a.toml".into()))
        );
    }

    #[test]
    fn unknown_config_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("mac.toml");
        std::fs::write(&cfg, "pipelin = \"meta\"\n").unwrap();
        let req = DiscoverRequest {
            config: Some(cfg),
            ..base_request()
        };
        assert_eq!(resolve(req).unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn run_record_round_trips_through_toml() {
        let resolved = resolve(DiscoverRequest {
            csv: Some("data.csv".into()),
            pipeline: Some(Pipeline::MetaCoding),
            ..base_request()
        })
        .unwrap();
        let record = RunRecord::for_resolved(&resolved);
        let dir = tempfile::tempdir().unwrap();
        record.write(dir.path()).unwrap();
        let back = RunRecord::read(dir.path()).unwrap();
        assert_eq!(back, record);
        assert!(back.csv.unwrap().ends_with("data.csv"));
        assert!(back.backend.unwrap().starts_with("scripted:/"));
    }

    #[test]
    fn custom_descriptor_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.toml");
        std::fs::write(
            &path,
            r#"
id = "toy"
prose_description = "two linked measurements."

[[variables]]
name = "A"
description = "first measurement"

[[variables]]
name = "B"
description = "second measurement"
question_label = "B (units)"
"#,
        )
        .unwrap();
        let d = load_descriptor(&path).unwrap();
        assert_eq!(d.variables[1].question_label.as_deref(), Some("B (units)"));

        std::fs::write(&path, "id = \"toy\"\nprose_description = \"x\"\n").unwrap();
        assert_eq!(load_descriptor(&path).unwrap_err().exit_code(), EXIT_USAGE);
    }
}
