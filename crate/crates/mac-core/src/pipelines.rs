//! End-to-end discovery pipelines.
//!
//! Four ways to produce a causal adjacency over a described dataset:
//!
//! * **meta agents** — debate every ordered variable pair directly;
//! * **coding agents** — debate which statistical algorithm to run, then
//!   execute it natively on the data;
//! * **coding → meta** — run the statistical pipeline first and seed the
//!   pair debates with its result as hints;
//! * **meta → coding** — debate the pairs first and hand the result to the
//!   statistical stage as prior knowledge.

use crate::agents::templates::{hint_sentence, render_prompt};
use crate::agents::{AgentError, Backend, ParsedPlan, PlanAlgorithm, Transcript};
use crate::datasets::{summarize_sample, DatasetDescriptor, TabularData};
use crate::debate::{
    run_debate, run_plan_debate, DebateConfig, DebateError, DebateProfiles, MetaQuestion, Moderator,
};
use crate::graph::{
    adjacency_to_constraints, adjacency_to_prior, adjacency_to_super_structure, pattern_to_binary,
    verdicts_to_adjacency, BinaryAdjacency, EdgeConstraints, GraphError, PriorKnowledge,
};
use crate::scd::{direct_lingam, exact_search, pc, AlgorithmConfig, ScdError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("data columns {found:?} do not match descriptor variables {expected:?}")]
    LabelMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("no native implementation for the {0} algorithm")]
    UnsupportedAlgorithm(String),
    #[error(transparent)]
    Debate(#[from] DebateError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Scd(#[from] ScdError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Noteworthy events surfaced alongside a pipeline result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunFlag {
    /// The judge never settled this question; the unresolved policy chose.
    UnresolvedQuestion {
        session: String,
        cause: String,
        effect: String,
    },
    /// The debate asserted both directions of a pair.
    TwoCycle { a: String, b: String },
}

impl fmt::Display for RunFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunFlag::UnresolvedQuestion {
                session,
                cause,
                effect,
            } => write!(
                f,
                "unresolved question in {session}: {cause} -> {effect} (policy applied)"
            ),
            RunFlag::TwoCycle { a, b } => write!(f, "two-cycle between {a} and {b}"),
        }
    }
}

/// Everything a pipeline run produces.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub adjacency: BinaryAdjacency,
    pub plan: Option<ParsedPlan>,
    pub transcripts: Vec<Transcript>,
    pub flags: Vec<RunFlag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub algorithm: AlgorithmConfig,
    pub debate: DebateConfig,
    /// Model name recorded in live-request bodies and backend ids.
    pub model: String,
    pub temperature: f64,
    /// Date substituted into the agent system prompts.
    pub prompt_date: String,
    /// Rows shown to the plan debaters as a data sample.
    pub sample_rows: usize,
    /// When a debated graph becomes prior knowledge: leave a "no" verdict
    /// unknown (`true`, the default) or pin it as known-absent (`false`).
    pub unknown_absent: bool,
    /// Also pin debated edges as hard PC constraints in the meta → coding
    /// hybrid (the prior prose and super-structure are always passed).
    pub strict_constraints: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            algorithm: AlgorithmConfig::default(),
            debate: DebateConfig::default(),
            model: "gpt-3.5-turbo".to_string(),
            temperature: 0.0,
            prompt_date: "May 15 2024".to_string(),
            sample_rows: 5,
            unknown_absent: true,
            strict_constraints: false,
        }
    }
}

fn session_slug(label: &str) -> String {
    let mut slug = String::with_capacity(label.len());
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c.to_ascii_lowercase());
        } else if !slug.ends_with('_') {
            slug.push('_');
        }
    }
    slug.trim_matches('_').to_string()
}

fn check_columns(descriptor: &DatasetDescriptor, data: &TabularData) -> Result<(), PipelineError> {
    let expected = descriptor.variable_names();
    if data.columns() != expected.as_slice() {
        return Err(PipelineError::LabelMismatch {
            expected,
            found: data.columns().to_vec(),
        });
    }
    Ok(())
}

/// A statistical result used to seed pair debates with hints.
struct HintSource<'a> {
    adjacency: &'a BinaryAdjacency,
    algorithm: String,
}

/// One debate's worth of questions plus the ordered pairs they stand for.
struct QuestionBatch {
    session: String,
    questions: Vec<MetaQuestion>,
    pairs: Vec<(usize, usize)>,
}

fn question_batches(
    descriptor: &DatasetDescriptor,
    config: &PipelineConfig,
    hints: Option<&HintSource<'_>>,
) -> Vec<QuestionBatch> {
    let n = descriptor.variables.len();
    let label = |i: usize| descriptor.variables[i].question_label().to_string();
    let hint_for = |i: usize, j: usize| {
        hints.map(|h| {
            hint_sentence(
                &h.algorithm,
                h.adjacency.get(i, j) == 1,
                &label(i),
                &label(j),
            )
        })
    };
    let mut batches = Vec::new();
    if config.debate.batch_by_source {
        for i in 0..n {
            let mut questions = Vec::new();
            let mut pairs = Vec::new();
            for j in 0..n {
                if i == j {
                    continue;
                }
                questions.push(MetaQuestion {
                    index: questions.len() + 1,
                    cause: label(i),
                    effect: label(j),
                    hint: hint_for(i, j),
                });
                pairs.push((i, j));
            }
            batches.push(QuestionBatch {
                session: format!(
                    "meta_{:02}_{}",
                    i + 1,
                    session_slug(&descriptor.variables[i].name)
                ),
                questions,
                pairs,
            });
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                batches.push(QuestionBatch {
                    session: format!(
                        "meta_{:02}_{:02}_{}_{}",
                        i + 1,
                        j + 1,
                        session_slug(&descriptor.variables[i].name),
                        session_slug(&descriptor.variables[j].name)
                    ),
                    questions: vec![MetaQuestion {
                        index: 1,
                        cause: label(i),
                        effect: label(j),
                        hint: hint_for(i, j),
                    }],
                    pairs: vec![(i, j)],
                });
            }
        }
    }
    batches
}

fn run_meta(
    descriptor: &DatasetDescriptor,
    backend: &dyn Backend,
    config: &PipelineConfig,
    hints: Option<&HintSource<'_>>,
    moderator: &mut dyn Moderator,
) -> Result<(BinaryAdjacency, Vec<Transcript>, Vec<RunFlag>), PipelineError> {
    let profiles = DebateProfiles::meta(&config.prompt_date)?;
    let mut answers: Vec<((usize, usize), bool)> = Vec::new();
    let mut transcripts = Vec::new();
    let mut flags = Vec::new();
    for batch in question_batches(descriptor, config, hints) {
        let outcome = run_debate(
            &batch.session,
            &descriptor.prose_description,
            &batch.questions,
            &profiles,
            backend,
            &config.debate,
            config.temperature,
            moderator,
        )?;
        for (verdict, &(i, j)) in outcome.verdicts.iter().zip(&batch.pairs) {
            answers.push(((i, j), verdict.decision == crate::agents::Decision::Yes));
        }
        for index in &outcome.unresolved {
            let (i, j) = batch.pairs[index - 1];
            flags.push(RunFlag::UnresolvedQuestion {
                session: batch.session.clone(),
                cause: descriptor.variables[i].name.clone(),
                effect: descriptor.variables[j].name.clone(),
            });
        }
        transcripts.push(outcome.transcript);
    }
    let adjacency = verdicts_to_adjacency(descriptor.variable_names(), &answers)?;
    for i in 0..adjacency.n() {
        for j in (i + 1)..adjacency.n() {
            if adjacency.get(i, j) == 1 && adjacency.get(j, i) == 1 {
                flags.push(RunFlag::TwoCycle {
                    a: descriptor.variables[i].name.clone(),
                    b: descriptor.variables[j].name.clone(),
                });
            }
        }
    }
    Ok((adjacency, transcripts, flags))
}

/// Debates every ordered variable pair and assembles the answers into an
/// adjacency matrix. Uses no numeric data at all.
pub fn meta_agents_model(
    descriptor: &DatasetDescriptor,
    backend: &dyn Backend,
    config: &PipelineConfig,
    moderator: &mut dyn Moderator,
) -> Result<RunResult, PipelineError> {
    let (adjacency, transcripts, flags) = run_meta(descriptor, backend, config, None, moderator)?;
    Ok(RunResult {
        adjacency,
        plan: None,
        transcripts,
        flags,
    })
}

/// Runs the plan the agents settled on. `prior`, `constraints`, and
/// `super_structure` are honored by the algorithms that accept them.
pub fn execute_plan(
    plan: &ParsedPlan,
    data: &TabularData,
    config: &AlgorithmConfig,
    prior: Option<&PriorKnowledge>,
    constraints: Option<&EdgeConstraints>,
    super_structure: Option<&BinaryAdjacency>,
) -> Result<BinaryAdjacency, PipelineError> {
    let mut cfg = config.clone();
    if let Some(alpha) = plan.alpha {
        cfg.alpha = alpha;
    }
    if let Some(method) = plan.search_method {
        cfg.search_method = method;
    }
    match plan.algorithm {
        PlanAlgorithm::Pc => {
            let default = EdgeConstraints::default();
            let pattern = pc(data, &cfg, constraints.unwrap_or(&default))?;
            Ok(pattern_to_binary(&pattern, cfg.undirected_policy))
        }
        PlanAlgorithm::ExactSearch => Ok(exact_search(data, &cfg, super_structure)?),
        PlanAlgorithm::DirectLingam => {
            Ok(direct_lingam(data, &cfg, prior)?.adjacency(cfg.edge_threshold))
        }
        other => Err(PipelineError::UnsupportedAlgorithm(other.to_string())),
    }
}

fn plan_task_text(
    descriptor: &DatasetDescriptor,
    data: &TabularData,
    config: &PipelineConfig,
) -> Result<String, AgentError> {
    let sample = summarize_sample(data, config.sample_rows);
    render_prompt(
        "plan_task",
        &[
            ("dataset_description", descriptor.prose_description.as_str()),
            ("sample", sample.as_str()),
        ],
    )
}

#[allow(clippy::too_many_arguments)]
fn run_coding(
    descriptor: &DatasetDescriptor,
    data: &TabularData,
    backend: &dyn Backend,
    config: &PipelineConfig,
    task: &str,
    prior: Option<&PriorKnowledge>,
    constraints: Option<&EdgeConstraints>,
    super_structure: Option<&BinaryAdjacency>,
    moderator: &mut dyn Moderator,
) -> Result<(BinaryAdjacency, ParsedPlan, Transcript), PipelineError> {
    check_columns(descriptor, data)?;
    let profiles = DebateProfiles::plan(&config.prompt_date)?;
    let outcome = run_plan_debate(
        "plan",
        task,
        &profiles,
        backend,
        config.temperature,
        moderator,
    )?;
    let adjacency = execute_plan(
        &outcome.parsed,
        data,
        &config.algorithm,
        prior,
        constraints,
        super_structure,
    )?;
    Ok((adjacency, outcome.parsed, outcome.transcript))
}

/// Debates which algorithm to run on the dataset, then executes the
/// winning plan natively on the data.
pub fn coding_agents_model(
    descriptor: &DatasetDescriptor,
    data: &TabularData,
    backend: &dyn Backend,
    config: &PipelineConfig,
    moderator: &mut dyn Moderator,
) -> Result<RunResult, PipelineError> {
    let task = plan_task_text(descriptor, data, config)?;
    let (adjacency, plan, transcript) = run_coding(
        descriptor, data, backend, config, &task, None, None, None, moderator,
    )?;
    Ok(RunResult {
        adjacency,
        plan: Some(plan),
        transcripts: vec![transcript],
        flags: Vec::new(),
    })
}

/// Statistical stage first, debates second: the executed plan's adjacency
/// seeds every pair debate with a hint sentence, and the debates have the
/// final word.
pub fn coding_meta_hybrid(
    descriptor: &DatasetDescriptor,
    data: &TabularData,
    backend: &dyn Backend,
    config: &PipelineConfig,
    moderator: &mut dyn Moderator,
) -> Result<RunResult, PipelineError> {
    let task = plan_task_text(descriptor, data, config)?;
    let (stage_one, plan, plan_transcript) = run_coding(
        descriptor, data, backend, config, &task, None, None, None, moderator,
    )?;
    let hints = HintSource {
        adjacency: &stage_one,
        algorithm: plan.algorithm.to_string(),
    };
    let (adjacency, meta_transcripts, flags) =
        run_meta(descriptor, backend, config, Some(&hints), moderator)?;
    let mut transcripts = vec![plan_transcript];
    transcripts.extend(meta_transcripts);
    Ok(RunResult {
        adjacency,
        plan: Some(plan),
        transcripts,
        flags,
    })
}

/// Renders the debated graph as a prior-knowledge sentence for the plan
/// task.
fn prior_block_text(adjacency: &BinaryAdjacency) -> String {
    let edges = adjacency.edges();
    if edges.is_empty() {
        return "Prior knowledge from a previous debate of this dataset suggests no direct causal relationships.".to_string();
    }
    let labels = adjacency.labels();
    let rendered: Vec<String> = edges
        .iter()
        .map(|&(i, j)| format!("{} -> {}", labels[i], labels[j]))
        .collect();
    format!(
        "Prior knowledge from a previous debate of this dataset suggests the direct causal relationships: {}.",
        rendered.join(", ")
    )
}

fn insert_prior_block(task: &str, block: &str) -> String {
    const MARKER: &str = "Don't need to understand";
    match task.find(MARKER) {
        Some(pos) => format!("{}{block}\n{}", &task[..pos], &task[pos..]),
        None => format!("{task}\n{block}"),
    }
}

/// Debates first, statistics second: the debated adjacency is handed to
/// the plan debate as prose and to the executed algorithm as prior
/// knowledge (and as the exact-search super-structure).
pub fn meta_coding_hybrid(
    descriptor: &DatasetDescriptor,
    data: &TabularData,
    backend: &dyn Backend,
    config: &PipelineConfig,
    moderator: &mut dyn Moderator,
) -> Result<RunResult, PipelineError> {
    check_columns(descriptor, data)?;
    let (stage_one, mut transcripts, flags) =
        run_meta(descriptor, backend, config, None, moderator)?;
    let prior = adjacency_to_prior(&stage_one, config.unknown_absent);
    let constraints = if config.strict_constraints {
        Some(adjacency_to_constraints(&stage_one))
    } else {
        None
    };
    let super_structure = adjacency_to_super_structure(&stage_one);

    let task = insert_prior_block(
        &plan_task_text(descriptor, data, config)?,
        &prior_block_text(&stage_one),
    );
    let (adjacency, plan, plan_transcript) = run_coding(
        descriptor,
        data,
        backend,
        config,
        &task,
        Some(&prior),
        constraints.as_ref(),
        Some(&super_structure),
        moderator,
    )?;
    transcripts.push(plan_transcript);
    Ok(RunResult {
        adjacency,
        plan: Some(plan),
        transcripts,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{ScriptKey, ScriptRecord, ScriptedBackend, Side};
    use crate::datasets::VariableMeta;
    use crate::debate::AutoModerator;
    use crate::sim;

    fn descriptor(names: &[&str]) -> DatasetDescriptor {
        DatasetDescriptor {
            id: "test".to_string(),
            prose_description: "a synthetic test dataset".to_string(),
            variables: names
                .iter()
                .map(|n| VariableMeta::new(n, &format!("variable {n}")))
                .collect(),
        }
    }

    fn contains(side: Side, needle: &str, response: String) -> ScriptRecord {
        ScriptRecord {
            side,
            key: ScriptKey::Contains(needle.to_string()),
            response,
        }
    }

    fn any(side: Side, response: String) -> ScriptRecord {
        ScriptRecord {
            side,
            key: ScriptKey::Any,
            response,
        }
    }

    /// Meta backend whose judge answers differently per source batch: the
    /// affirmative tags its response with the batch's source name (taken
    /// from the task), the negative relays the tag, the judge keys on it.
    fn meta_script(sources: &[(&str, Vec<bool>)]) -> ScriptedBackend {
        let mut records = Vec::new();
        for (source, answers) in sources {
            let tag = format!("Batch marker: source {source}.");
            records.push(contains(
                Side::Affirmative,
                &format!("from {source} to"),
                format!("{}\n{tag}", sim::react_answers(&vec![true; answers.len()])),
            ));
            records.push(contains(
                Side::Negative,
                &tag,
                format!("{}\n{tag}", sim::react_answers(&vec![false; answers.len()])),
            ));
            records.push(contains(Side::Judge, &tag, sim::judge_decisive(answers)));
        }
        ScriptedBackend::from_records(records)
    }

    #[test]
    fn meta_model_assembles_adjacency_and_flags_two_cycles() {
        let descriptor = descriptor(&["A", "B", "C"]);
        // Judge per source: targets in natural order.
        let backend = meta_script(&[
            ("A", vec![true, false]), // A->B yes, A->C no
            ("B", vec![true, false]), // B->A yes, B->C no
            ("C", vec![true, false]), // C->A yes, C->B no
        ]);
        let config = PipelineConfig::default();
        let result = meta_agents_model(&descriptor, &backend, &config, &mut AutoModerator).unwrap();
        assert_eq!(result.adjacency.edges(), vec![(0, 1), (1, 0), (2, 0)]);
        assert_eq!(
            result.flags,
            vec![RunFlag::TwoCycle {
                a: "A".to_string(),
                b: "B".to_string()
            }]
        );
        assert!(result.plan.is_none());
        assert_eq!(result.transcripts.len(), 3);
        assert_eq!(result.transcripts[0].meta.session, "meta_01_a");

        // Determinism: the same scripted run reproduces byte-identical
        // transcripts and cells.
        let again = meta_agents_model(&descriptor, &backend, &config, &mut AutoModerator).unwrap();
        assert_eq!(again.adjacency.cells(), result.adjacency.cells());
        assert_eq!(again.transcripts, result.transcripts);
    }

    #[test]
    fn meta_model_pairwise_sessions() {
        let descriptor = descriptor(&["A", "B"]);
        let backend = ScriptedBackend::from_records(vec![
            any(Side::Affirmative, sim::react_answers(&[true])),
            any(Side::Negative, sim::react_answers(&[false])),
            any(Side::Judge, sim::judge_decisive(&[true])),
        ]);
        let config = PipelineConfig {
            debate: DebateConfig {
                batch_by_source: false,
                ..DebateConfig::default()
            },
            ..PipelineConfig::default()
        };
        let result = meta_agents_model(&descriptor, &backend, &config, &mut AutoModerator).unwrap();
        assert_eq!(result.transcripts.len(), 2);
        assert_eq!(result.transcripts[0].meta.session, "meta_01_02_a_b");
        assert_eq!(result.adjacency.edges(), vec![(0, 1), (1, 0)]);
    }

    fn chain_fixture() -> (DatasetDescriptor, TabularData) {
        let data = sim::chain_uniform(3, 0.9, 2000, 7);
        let descriptor = DatasetDescriptor {
            id: "chain".to_string(),
            prose_description: "a three-variable chain".to_string(),
            variables: data
                .columns()
                .iter()
                .map(|n| VariableMeta::new(n, "chain variable"))
                .collect(),
        };
        (descriptor, data)
    }

    #[test]
    fn coding_model_runs_debated_algorithm() {
        let (descriptor, data) = chain_fixture();
        let backend = ScriptedBackend::from_records(vec![
            contains(
                Side::Affirmative,
                "step-by-step plan for the coder",
                sim::plan_statement(
                    "DirectLiNGAM",
                    &[
                        "Standardize the data.",
                        "Estimate the causal order.",
                        "Threshold the weights.",
                    ],
                ),
            ),
            any(Side::Affirmative, sim::plan_statement("DirectLiNGAM", &[])),
            any(Side::Negative, sim::plan_statement("PC", &[])),
            any(Side::Judge, sim::plan_statement("DirectLiNGAM", &[])),
        ]);
        let config = PipelineConfig {
            algorithm: AlgorithmConfig {
                edge_threshold: 0.1,
                ..AlgorithmConfig::default()
            },
            ..PipelineConfig::default()
        };
        let result =
            coding_agents_model(&descriptor, &data, &backend, &config, &mut AutoModerator).unwrap();
        assert_eq!(result.adjacency.edges(), vec![(0, 1), (1, 2)]);
        let plan = result.plan.unwrap();
        assert_eq!(plan.algorithm, PlanAlgorithm::DirectLingam);
        assert_eq!(plan.steps.len(), 3);
        assert_eq!(result.transcripts.len(), 1);
        assert_eq!(result.transcripts[0].meta.session, "plan");
        // The plan task carried the dataset prose and a data sample.
        let task = &result.transcripts[0].entries[0].content;
        assert!(task.contains("a three-variable chain"));
        assert!(task.contains("X1"));
    }

    #[test]
    fn unsupported_plan_algorithm_is_an_error() {
        let (_, data) = chain_fixture();
        let plan = ParsedPlan {
            algorithm: PlanAlgorithm::Ges,
            steps: vec![],
            alpha: None,
            search_method: None,
        };
        let err =
            execute_plan(&plan, &data, &AlgorithmConfig::default(), None, None, None).unwrap_err();
        assert!(matches!(err, PipelineError::UnsupportedAlgorithm(name) if name == "GES"));
    }

    #[test]
    fn plan_overrides_reach_the_algorithm() {
        let (_, data) = chain_fixture();
        // alpha = 0.9999... makes PC delete nothing at level 0 only if
        // dependence holds; an extreme alpha close to 1 keeps every edge.
        let plan = ParsedPlan {
            algorithm: PlanAlgorithm::Pc,
            steps: vec![],
            alpha: Some(0.999_999),
            search_method: None,
        };
        let adj =
            execute_plan(&plan, &data, &AlgorithmConfig::default(), None, None, None).unwrap();
        // With alpha ~ 1 every independence test rejects, so the skeleton
        // stays complete: all three pairs remain adjacent in some form.
        let present_pairs = (0..3)
            .flat_map(|i| ((i + 1)..3).map(move |j| (i, j)))
            .filter(|&(i, j)| adj.get(i, j) == 1 || adj.get(j, i) == 1)
            .count();
        assert_eq!(present_pairs, 3);
    }

    #[test]
    fn meta_coding_hybrid_threads_prior_and_super_structure() {
        let (descriptor, data) = chain_fixture();
        // Meta stage: only X0 -> X1 affirmed; everything else denied.
        let mut records = vec![
            contains(
                Side::Affirmative,
                "from X0 to",
                format!(
                    "{}\nBatch marker: source X0.",
                    sim::react_answers(&[true, true])
                ),
            ),
            contains(
                Side::Negative,
                "Batch marker: source X0.",
                format!(
                    "{}\nBatch marker: source X0.",
                    sim::react_answers(&[false, false])
                ),
            ),
            contains(
                Side::Judge,
                "Batch marker: source X0.",
                sim::judge_decisive(&[true, false]),
            ),
        ];
        for source in ["X1", "X2"] {
            let tag = format!("Batch marker: source {source}.");
            records.push(contains(
                Side::Affirmative,
                &format!("from {source} to"),
                format!("{}\n{tag}", sim::react_answers(&[true, true])),
            ));
            records.push(contains(
                Side::Negative,
                &tag,
                format!("{}\n{tag}", sim::react_answers(&[false, false])),
            ));
            records.push(contains(
                Side::Judge,
                &tag,
                sim::judge_decisive(&[false, false]),
            ));
        }
        // Plan stage: Exact Search wins.
        records.push(contains(
            Side::Affirmative,
            "step-by-step plan for the coder",
            sim::plan_statement(
                "Exact Search",
                &["Score all candidate graphs.", "Return the best."],
            ),
        ));
        records.push(contains(
            Side::Affirmative,
            "Task: find the causal relationship",
            sim::plan_statement("Exact Search", &[]),
        ));
        records.push(any(Side::Negative, sim::plan_statement("PC", &[])));
        records.push(any(Side::Judge, sim::plan_statement("Exact Search", &[])));
        let backend = ScriptedBackend::from_records(records);

        let config = PipelineConfig::default();
        let result =
            meta_coding_hybrid(&descriptor, &data, &backend, &config, &mut AutoModerator).unwrap();
        // The super-structure from the meta stage admits only the X1-X2
        // pair, so the true X2 -> X3 edge cannot appear.
        for &(i, j) in &result.adjacency.edges() {
            assert!(
                (i.min(j), i.max(j)) == (0, 1),
                "edge ({i},{j}) escapes the debated super-structure"
            );
        }
        assert_eq!(
            result.plan.as_ref().unwrap().algorithm,
            PlanAlgorithm::ExactSearch
        );
        // The plan task announced the debated prior.
        let plan_task = &result.transcripts.last().unwrap().entries[0].content;
        assert!(plan_task.contains(
            "Prior knowledge from a previous debate of this dataset suggests the direct causal relationships: X0 -> X1."
        ));
        assert!(plan_task.contains("Don't need to understand"));
    }

    #[test]
    fn coding_meta_hybrid_seeds_hints_and_meta_decides() {
        let (descriptor, data) = chain_fixture();
        let mut records = vec![
            // Plan stage: DirectLiNGAM wins and is executed (finds the
            // chain, so hints claim X1 -> X2 and X2 -> X3 present). Keys
            // use text unique to the plan flow so the meta turns that
            // follow never match these records.
            contains(
                Side::Affirmative,
                "step-by-step plan for the coder",
                sim::plan_statement("DirectLiNGAM", &["Estimate order.", "Fit weights."]),
            ),
            contains(
                Side::Affirmative,
                "Don't need to understand",
                sim::plan_statement("DirectLiNGAM", &[]),
            ),
            contains(
                Side::Negative,
                "most suitable choice",
                sim::plan_statement("PC", &[]),
            ),
            contains(
                Side::Judge,
                "most suitable choice",
                sim::plan_statement("DirectLiNGAM", &[]),
            ),
        ];
        // Meta stage: the judge contradicts the hints everywhere.
        for source in ["X0", "X1", "X2"] {
            let tag = format!("Batch marker: source {source}.");
            records.push(contains(
                Side::Affirmative,
                &format!("from {source} to"),
                format!("{}\n{tag}", sim::react_answers(&[true, true])),
            ));
            records.push(contains(
                Side::Negative,
                &tag,
                format!("{}\n{tag}", sim::react_answers(&[false, false])),
            ));
            records.push(contains(
                Side::Judge,
                &tag,
                sim::judge_decisive(&[false, false]),
            ));
        }
        let backend = ScriptedBackend::from_records(records);
        let config = PipelineConfig {
            algorithm: AlgorithmConfig {
                edge_threshold: 0.1,
                ..AlgorithmConfig::default()
            },
            ..PipelineConfig::default()
        };
        let result =
            coding_meta_hybrid(&descriptor, &data, &backend, &config, &mut AutoModerator).unwrap();
        // The meta stage has the final word: empty graph.
        assert!(result.adjacency.edges().is_empty());
        // Hints derived from the executed DirectLiNGAM run reached the
        // debates with presence/absence rendered correctly.
        let meta_task = &result.transcripts[1].entries[0].content;
        assert!(meta_task.contains(
            "From the DirectLiNGAM algorithm and analysis, there is direct causal relationship from X0 to X1."
        ));
        assert!(meta_task.contains(
            "From the DirectLiNGAM algorithm and analysis, there is no direct causal relationship from X0 to X2."
        ));
        assert_eq!(result.transcripts.len(), 4);
        assert_eq!(result.transcripts[0].meta.session, "plan");
    }

    #[test]
    fn column_mismatch_is_rejected() {
        let (descriptor, _) = chain_fixture();
        let wrong = TabularData::new(
            vec!["A".to_string(), "B".to_string()],
            vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![0.5, 1.5]],
        )
        .unwrap();
        let backend = ScriptedBackend::from_records(vec![]);
        let err = coding_agents_model(
            &descriptor,
            &wrong,
            &backend,
            &PipelineConfig::default(),
            &mut AutoModerator,
        )
        .unwrap_err();
        assert!(matches!(err, PipelineError::LabelMismatch { .. }));
    }
}
