//! The four subcommands: discover, eval, replay, datasets.

use std::path::{Path, PathBuf};

use mac_core::agents::ParsedPlan;
use mac_core::datasets::{load_csv, DatasetDescriptor, BUILTIN_DATASETS};
use mac_core::debate::{AutoModerator, Moderator};
use mac_core::graph::{export_adjacency_csv, import_adjacency_csv};
use mac_core::metrics::compute_metrics;
use mac_core::pipelines::{
    coding_agents_model, coding_meta_hybrid, execute_plan, meta_agents_model, meta_coding_hybrid,
    RunResult,
};
use mac_core::store::{write_run_dir, RunManifest};
use mac_core::TabularData;

use crate::error::CliError;
use crate::moderator::StdinModerator;
use crate::runcfg::{resolve, DiscoverRequest, ResolvedDiscover, RunRecord};
use crate::spec::{BuiltBackend, Pipeline};

/// What `discover` produced, for callers that want more than stdout.
pub struct DiscoverOutcome {
    pub out_dir: PathBuf,
    pub manifest: RunManifest,
    pub adjacency_csv: String,
}

/// Resolves, runs, persists, and prints one discovery run.
pub fn cmd_discover(req: DiscoverRequest) -> Result<DiscoverOutcome, CliError> {
    let resolved = resolve(req)?;
    let mut auto = AutoModerator;
    let mut stdin_moderator = StdinModerator;
    let moderator: &mut dyn Moderator = if resolved.interactive {
        &mut stdin_moderator
    } else {
        &mut auto
    };

    let (result, backend) = run_resolved(&resolved, moderator)?;
    let outcome = persist_run(&resolved, &resolved.out, &result, &backend)?;
    RunRecord::for_resolved(&resolved).write(&resolved.out)?;

    println!("pipeline: {}", resolved.pipeline);
    println!("dataset: {}", resolved.descriptor.id);
    println!("backend: {}", outcome.manifest.backend_id);
    if let Some(plan) = &result.plan {
        println!("plan algorithm: {}", plan.algorithm);
    }
    for flag in &outcome.manifest.flags {
        println!("flag: {flag}");
    }
    print!("{}", outcome.adjacency_csv);
    println!("run written to {}", outcome.out_dir.display());
    Ok(outcome)
}

/// Runs a validated request and returns the result plus the backend (whose
/// cache digests the manifest records).
fn run_resolved(
    resolved: &ResolvedDiscover,
    moderator: &mut dyn Moderator,
) -> Result<(RunResult, BuiltBackend), CliError> {
    let backend = match &resolved.backend {
        Some(spec) => BuiltBackend::build(spec, &resolved.base_url, &resolved.run.model)?,
        None => BuiltBackend::None,
    };
    let data = match &resolved.csv {
        Some(path) => Some(load_data(path, &resolved.descriptor)?),
        None => None,
    };
    let descriptor = &resolved.descriptor;
    let run = &resolved.run;

    let result = match resolved.pipeline {
        Pipeline::Meta => {
            meta_agents_model(descriptor, required_backend(&backend)?, run, moderator)
                .map_err(CliError::runtime)?
        }
        Pipeline::Coding => coding_agents_model(
            descriptor,
            required_data(&data)?,
            required_backend(&backend)?,
            run,
            moderator,
        )
        .map_err(CliError::runtime)?,
        Pipeline::CodingMeta => coding_meta_hybrid(
            descriptor,
            required_data(&data)?,
            required_backend(&backend)?,
            run,
            moderator,
        )
        .map_err(CliError::runtime)?,
        Pipeline::MetaCoding => meta_coding_hybrid(
            descriptor,
            required_data(&data)?,
            required_backend(&backend)?,
            run,
            moderator,
        )
        .map_err(CliError::runtime)?,
        Pipeline::Pc => direct_run(
            mac_core::agents::PlanAlgorithm::Pc,
            required_data(&data)?,
            resolved,
        )?,
        Pipeline::Exact => direct_run(
            mac_core::agents::PlanAlgorithm::ExactSearch,
            required_data(&data)?,
            resolved,
        )?,
        Pipeline::Lingam => direct_run(
            mac_core::agents::PlanAlgorithm::DirectLingam,
            required_data(&data)?,
            resolved,
        )?,
    };
    Ok((result, backend))
}

fn required_backend(backend: &BuiltBackend) -> Result<&dyn mac_core::agents::Backend, CliError> {
    backend
        .as_dyn()
        .ok_or_else(|| CliError::usage("this pipeline needs --backend"))
}

fn required_data(data: &Option<TabularData>) -> Result<&TabularData, CliError> {
    data.as_ref()
        .ok_or_else(|| CliError::usage("this pipeline needs --csv"))
}

/// Runs one statistical algorithm directly, without any debate.
fn direct_run(
    algorithm: mac_core::agents::PlanAlgorithm,
    data: &TabularData,
    resolved: &ResolvedDiscover,
) -> Result<RunResult, CliError> {
    let plan = ParsedPlan {
        algorithm,
        steps: Vec::new(),
        alpha: None,
        search_method: None,
    };
    let adjacency = execute_plan(&plan, data, &resolved.run.algorithm, None, None, None)
        .map_err(CliError::runtime)?;
    Ok(RunResult {
        adjacency,
        plan: Some(plan),
        transcripts: Vec::new(),
        flags: Vec::new(),
    })
}

/// Loads a CSV and reorders its columns to the descriptor's variable order,
/// so every artifact downstream indexes variables the same way.
pub fn load_data(path: &Path, descriptor: &DatasetDescriptor) -> Result<TabularData, CliError> {
    let data = load_csv(path).map_err(CliError::runtime)?;
    data.reorder(&descriptor.variable_names())
        .map_err(CliError::runtime)
}

fn persist_run(
    resolved: &ResolvedDiscover,
    out_dir: &Path,
    result: &RunResult,
    backend: &BuiltBackend,
) -> Result<DiscoverOutcome, CliError> {
    let manifest = RunManifest::for_run(
        resolved.pipeline.name(),
        &resolved.descriptor.id,
        &backend.id(),
        &resolved.run.model,
        backend.cache_digests(),
        result,
    );
    write_run_dir(out_dir, &manifest, result).map_err(CliError::runtime)?;
    Ok(DiscoverOutcome {
        out_dir: out_dir.to_path_buf(),
        manifest,
        adjacency_csv: export_adjacency_csv(&result.adjacency),
    })
}

/// Scores an estimated adjacency CSV against a ground-truth one and prints
/// the metrics as two CSV lines.
pub fn cmd_eval(estimated: &Path, truth: &Path, out: Option<&Path>) -> Result<String, CliError> {
    let est = read_adjacency(estimated)?;
    let tru = read_adjacency(truth)?;
    let report = compute_metrics(&est, &tru).map_err(CliError::runtime)?;
    let text = report.to_csv();
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(CliError::runtime)?;
    }
    print!("{text}");
    Ok(text)
}

fn read_adjacency(path: &Path) -> Result<mac_core::BinaryAdjacency, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(anyhow::anyhow!("cannot read {}: {e}", path.display())))?;
    import_adjacency_csv(&text).map_err(|e| {
        CliError::runtime(anyhow::anyhow!(
            "invalid adjacency csv {}: {e}",
            path.display()
        ))
    })
}

/// Re-runs a recorded run against its response cache (or script) and
/// verifies the adjacency output is byte-identical. Caches are opened in
/// replay-only mode, so a passing replay provably made no live requests.
pub fn cmd_replay(run_dir: &Path) -> Result<(), CliError> {
    let record = RunRecord::read(run_dir)?;
    let backend = match record.backend.as_deref() {
        Some(spec) => Some(crate::spec::BackendSpec::parse(spec)?.replay_form()?),
        None => None,
    };
    let resolved = ResolvedDiscover {
        pipeline: record.pipeline,
        descriptor: record.descriptor,
        csv: record.csv.map(PathBuf::from),
        backend,
        out: run_dir.join("replay"),
        base_url: crate::runcfg::DEFAULT_BASE_URL.to_string(),
        interactive: false,
        run: record.run,
    };

    let (result, built) = run_resolved(&resolved, &mut AutoModerator)?;
    persist_run(&resolved, &resolved.out, &result, &built)?;

    let original = std::fs::read(run_dir.join("adjacency.csv")).map_err(CliError::runtime)?;
    let replayed = std::fs::read(resolved.out.join("adjacency.csv")).map_err(CliError::runtime)?;
    if original == replayed {
        println!(
            "replay matches: adjacency.csv is byte-identical ({} bytes)",
            original.len()
        );
        Ok(())
    } else {
        Err(CliError::runtime(anyhow::anyhow!(
            "replay diverged: {} and {} differ",
            run_dir.join("adjacency.csv").display(),
            resolved.out.join("adjacency.csv").display()
        )))
    }
}

/// Lists the built-in dataset descriptors.
pub fn cmd_datasets() -> Result<(), CliError> {
    for id in BUILTIN_DATASETS {
        let descriptor =
            mac_core::datasets::builtin_descriptor(id).expect("every listed builtin id resolves");
        let names: Vec<String> = descriptor.variable_names();
        println!("{id}: {}", names.join(", "));
    }
    Ok(())
}
