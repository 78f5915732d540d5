//! Debate orchestration: a moderated multi-agent exchange in which an
//! affirmative and a negative debater argue causal questions (or
//! algorithm choices) and a judge renders per-question verdicts, asking
//! for more rounds when undecided.

use crate::agents::parser::{extract_alpha, extract_search_method, parse_steps};
use crate::agents::templates::{
    render_prompt, steering_debater, steps_request, REFORMAT_REQUEST, STEERING_JUDGE,
};
use crate::agents::{
    parse_judge_verdicts, parse_plan, parse_react_blocks, AgentError, AgentProfile, Backend,
    ChatMessage, Decision, FinalAnswer, ParsedPlan, Side, Transcript, Verdict,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// One causal question posed to the debaters: is there a direct edge from
/// `cause` to `effect`? `hint` is an optional statistical-result sentence
/// prepended by the hybrid pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaQuestion {
    pub index: usize,
    pub cause: String,
    pub effect: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

impl MetaQuestion {
    fn render(&self) -> String {
        match &self.hint {
            None => format!(
                "{}. Are there any direct causal relationships from {} to {}?",
                self.index, self.cause, self.effect
            ),
            Some(hint) => format!(
                "{}. {hint} But from your expert and the suggested result above, are there any direct causal relationships from {} to {}?",
                self.index, self.cause, self.effect
            ),
        }
    }
}

/// What to record for questions the judge never decides within the round
/// budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UnresolvedPolicy {
    /// Treat the edge as absent (conservative default).
    #[default]
    NoEdge,
    /// Fall back to the affirmative debater's stated answer.
    AffirmativeAnswer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DebateConfig {
    /// Maximum number of judge turns per debate.
    pub max_rounds: usize,
    /// Pose all questions that share a source variable in one debate.
    pub batch_by_source: bool,
    pub unresolved_policy: UnresolvedPolicy,
}

impl Default for DebateConfig {
    fn default() -> Self {
        Self {
            max_rounds: 3,
            batch_by_source: true,
            unresolved_policy: UnresolvedPolicy::NoEdge,
        }
    }
}

#[derive(Debug, Error)]
pub enum DebateError {
    #[error("agent response unusable after one reformat retry: {0}")]
    ParserFailureAfterRetry(#[source] AgentError),
    #[error("backend failure: {0}")]
    BackendFailure(#[from] AgentError),
    #[error("debate requires at least one question")]
    NoQuestions,
}

/// Supplies the admin's steering turns. Returning `None` keeps the
/// canonical message; returning `Some` replaces it (an interactive
/// moderator typing feedback).
pub trait Moderator {
    fn steer(&mut self, canonical: &str, transcript: &Transcript) -> Option<String>;
}

/// Always uses the canonical steering messages.
pub struct AutoModerator;

impl Moderator for AutoModerator {
    fn steer(&mut self, _canonical: &str, _transcript: &Transcript) -> Option<String> {
        None
    }
}

/// The agent roster for one debate.
#[derive(Debug, Clone)]
pub struct DebateProfiles {
    pub affirmative: AgentProfile,
    pub negative: AgentProfile,
    pub judge: AgentProfile,
    pub executor: Option<AgentProfile>,
}

impl DebateProfiles {
    /// Roster for causal-question debates.
    pub fn meta(date: &str) -> Result<Self, AgentError> {
        let debater = render_prompt("debater", &[("date", date)])?;
        let judge = render_prompt("judge", &[("date", date)])?;
        Ok(Self {
            affirmative: AgentProfile {
                name: "Affirmative_Causal_Agent".to_string(),
                side: Side::Affirmative,
                system_prompt: debater.clone(),
            },
            negative: AgentProfile {
                name: "Negative_Causal_Agent".to_string(),
                side: Side::Negative,
                system_prompt: debater,
            },
            judge: AgentProfile {
                name: "Judge".to_string(),
                side: Side::Judge,
                system_prompt: judge,
            },
            executor: None,
        })
    }

    /// Roster for algorithm-plan debates, including the code-writing
    /// executor persona.
    pub fn plan(date: &str) -> Result<Self, AgentError> {
        let debater = render_prompt("plan_debater", &[("date", date)])?;
        let judge = render_prompt("plan_judge", &[("date", date)])?;
        let executor = render_prompt("executor", &[])?;
        Ok(Self {
            affirmative: AgentProfile {
                name: "Affirmative_Causal_Agent".to_string(),
                side: Side::Affirmative,
                system_prompt: debater.clone(),
            },
            negative: AgentProfile {
                name: "Negative_Causal_Agent".to_string(),
                side: Side::Negative,
                system_prompt: debater,
            },
            judge: AgentProfile {
                name: "Judge".to_string(),
                side: Side::Judge,
                system_prompt: judge,
            },
            executor: Some(AgentProfile {
                name: "Code_Writer".to_string(),
                side: Side::Executor,
                system_prompt: executor,
            }),
        })
    }

    fn register(&self, transcript: &mut Transcript) {
        for profile in [&self.affirmative, &self.negative, &self.judge] {
            transcript
                .meta
                .sides
                .insert(profile.name.clone(), profile.side);
        }
        if let Some(executor) = &self.executor {
            transcript
                .meta
                .sides
                .insert(executor.name.clone(), executor.side);
        }
    }
}

/// Renders the admin task message that opens a causal-question debate.
pub fn build_question_batch(
    dataset_description: &str,
    questions: &[MetaQuestion],
) -> Result<String, AgentError> {
    let lines: Vec<String> = questions.iter().map(MetaQuestion::render).collect();
    render_prompt(
        "meta_task",
        &[
            ("dataset_description", dataset_description),
            ("questions", lines.join("\n").as_str()),
        ],
    )
}

/// Result of a causal-question debate: one yes/no verdict per question,
/// plus the indices the judge never settled (decided by policy instead).
#[derive(Debug, Clone)]
pub struct DebateOutcome {
    pub verdicts: Vec<Verdict>,
    pub unresolved: Vec<usize>,
    pub transcript: Transcript,
}

/// How each agent sees the shared transcript: its own messages as
/// assistant turns, everything else as named user turns.
fn history_for(profile: &AgentProfile, transcript: &Transcript) -> Vec<ChatMessage> {
    transcript
        .entries
        .iter()
        .map(|entry| {
            if entry.author == profile.name {
                ChatMessage::agent(entry.author.clone(), entry.content.clone())
            } else {
                ChatMessage {
                    role: crate::agents::Role::User,
                    author: entry.author.clone(),
                    content: entry.content.clone(),
                }
            }
        })
        .collect()
}

fn respond(
    backend: &dyn Backend,
    profile: &AgentProfile,
    transcript: &mut Transcript,
    temperature: f64,
) -> Result<String, DebateError> {
    let history = history_for(profile, transcript);
    let response = backend.complete(profile, &history, temperature)?;
    transcript.push(ChatMessage::agent(profile.name.clone(), response.clone()));
    Ok(response)
}

/// Gets a response and parses it, allowing one reformat retry: if the
/// first response does not parse, the admin posts the canonical retry
/// message and the agent answers once more.
fn respond_parsed<T>(
    backend: &dyn Backend,
    profile: &AgentProfile,
    transcript: &mut Transcript,
    temperature: f64,
    retry_message: &str,
    parse: impl Fn(&str) -> Result<T, AgentError>,
) -> Result<T, DebateError> {
    let first = respond(backend, profile, transcript, temperature)?;
    match parse(&first) {
        Ok(parsed) => Ok(parsed),
        Err(_) => {
            transcript.push(ChatMessage::admin(retry_message));
            let second = respond(backend, profile, transcript, temperature)?;
            parse(&second).map_err(DebateError::ParserFailureAfterRetry)
        }
    }
}

fn post_steering(canonical: &str, transcript: &mut Transcript, moderator: &mut dyn Moderator) {
    let message = moderator
        .steer(canonical, transcript)
        .unwrap_or_else(|| canonical.to_string());
    transcript.push(ChatMessage::admin(message));
}

/// Runs one causal-question debate to completion.
///
/// Turn order is task, affirmative, negative, judge; while the judge asks
/// follow-ups and the round budget allows, the targeted debaters respond
/// to steering messages and the judge rules again. The latest ruling per
/// question wins. Questions still open after the final judge turn are
/// resolved by [`UnresolvedPolicy`] and reported in `unresolved`.
#[allow(clippy::too_many_arguments)]
pub fn run_debate(
    session: &str,
    dataset_description: &str,
    questions: &[MetaQuestion],
    profiles: &DebateProfiles,
    backend: &dyn Backend,
    config: &DebateConfig,
    temperature: f64,
    moderator: &mut dyn Moderator,
) -> Result<DebateOutcome, DebateError> {
    if questions.is_empty() {
        return Err(DebateError::NoQuestions);
    }
    let mut transcript = Transcript::new(session, backend.id());
    profiles.register(&mut transcript);

    let task = build_question_batch(dataset_description, questions)
        .map_err(DebateError::BackendFailure)?;
    transcript.push(ChatMessage::admin(task));

    let affirmative_blocks = respond_parsed(
        backend,
        &profiles.affirmative,
        &mut transcript,
        temperature,
        REFORMAT_REQUEST,
        parse_react_blocks,
    )?;
    respond_parsed(
        backend,
        &profiles.negative,
        &mut transcript,
        temperature,
        REFORMAT_REQUEST,
        parse_react_blocks,
    )?;

    let expected = questions.len();
    let mut decisions: BTreeMap<usize, Decision> = BTreeMap::new();
    let mut judge_turns = 0;
    loop {
        if judge_turns > 0 {
            post_steering(STEERING_JUDGE, &mut transcript, moderator);
        }
        let verdicts = respond_parsed(
            backend,
            &profiles.judge,
            &mut transcript,
            temperature,
            REFORMAT_REQUEST,
            |text| parse_judge_verdicts(text, expected),
        )?;
        judge_turns += 1;
        for verdict in verdicts {
            decisions.insert(verdict.question_index, verdict.decision);
        }

        let mut ask_affirmative = false;
        let mut ask_negative = false;
        for decision in decisions.values() {
            if let Decision::FollowUp { target, .. } = decision {
                ask_affirmative |= target.includes(Side::Affirmative);
                ask_negative |= target.includes(Side::Negative);
            }
        }
        if (!ask_affirmative && !ask_negative) || judge_turns >= config.max_rounds {
            break;
        }
        if ask_affirmative {
            post_steering(
                &steering_debater("Affirmative", expected),
                &mut transcript,
                moderator,
            );
            respond(backend, &profiles.affirmative, &mut transcript, temperature)?;
        }
        if ask_negative {
            post_steering(
                &steering_debater("Negative", expected),
                &mut transcript,
                moderator,
            );
            respond(backend, &profiles.negative, &mut transcript, temperature)?;
        }
    }

    let mut verdicts = Vec::with_capacity(questions.len());
    let mut unresolved = Vec::new();
    for question in questions {
        let decision = decisions.get(&question.index);
        let settled = match decision {
            Some(Decision::Yes) => Decision::Yes,
            Some(Decision::No) => Decision::No,
            _ => {
                unresolved.push(question.index);
                match config.unresolved_policy {
                    UnresolvedPolicy::NoEdge => Decision::No,
                    UnresolvedPolicy::AffirmativeAnswer => {
                        let answer = affirmative_blocks
                            .iter()
                            .find(|b| b.question_index == question.index)
                            .and_then(|b| b.final_answer.clone());
                        match answer {
                            Some(FinalAnswer::Yes) => Decision::Yes,
                            _ => Decision::No,
                        }
                    }
                }
            }
        };
        verdicts.push(Verdict {
            question_index: question.index,
            decision: settled,
        });
    }
    Ok(DebateOutcome {
        verdicts,
        unresolved,
        transcript,
    })
}

/// Retry message for plan-debate turns that could not be parsed.
pub const PLAN_REFORMAT_REQUEST: &str = "Your previous response could not be parsed. Please restate it, naming the chosen algorithm explicitly (PC, Exact Search, DirectLiNGAM, GES, FCI, or CD-NOD) and listing any steps as 'step 1: ...'.";

/// Result of an algorithm-plan debate.
#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub parsed: ParsedPlan,
    pub winner: Side,
    pub transcript: Transcript,
}

/// Runs one plan debate: both sides propose an algorithm, the judge picks
/// one in a single turn, and the side whose proposal matched (affirmative
/// on ties or ambiguity) writes the step-by-step plan.
pub fn run_plan_debate(
    session: &str,
    task: &str,
    profiles: &DebateProfiles,
    backend: &dyn Backend,
    temperature: f64,
    moderator: &mut dyn Moderator,
) -> Result<PlanOutcome, DebateError> {
    let mut transcript = Transcript::new(session, backend.id());
    profiles.register(&mut transcript);
    transcript.push(ChatMessage::admin(task));

    let affirmative_plan = respond_parsed(
        backend,
        &profiles.affirmative,
        &mut transcript,
        temperature,
        PLAN_REFORMAT_REQUEST,
        parse_plan,
    )?;
    let negative_plan = respond_parsed(
        backend,
        &profiles.negative,
        &mut transcript,
        temperature,
        PLAN_REFORMAT_REQUEST,
        parse_plan,
    )?;
    let judge_plan = respond_parsed(
        backend,
        &profiles.judge,
        &mut transcript,
        temperature,
        PLAN_REFORMAT_REQUEST,
        parse_plan,
    )?;

    let winner = if judge_plan.algorithm == negative_plan.algorithm
        && judge_plan.algorithm != affirmative_plan.algorithm
    {
        Side::Negative
    } else {
        Side::Affirmative
    };
    let (winner_profile, winner_plan) = match winner {
        Side::Negative => (&profiles.negative, &negative_plan),
        _ => (&profiles.affirmative, &affirmative_plan),
    };

    post_steering(&steps_request(winner.title()), &mut transcript, moderator);
    let steps_response = respond(backend, winner_profile, &mut transcript, temperature)?;
    let mut steps = parse_steps(&steps_response);
    if steps.is_empty() {
        steps = winner_plan.steps.clone();
    }
    let alpha = extract_alpha(&steps_response)
        .or(judge_plan.alpha)
        .or(winner_plan.alpha);
    let search_method = extract_search_method(&steps_response)
        .or(judge_plan.search_method)
        .or(winner_plan.search_method);

    Ok(PlanOutcome {
        parsed: ParsedPlan {
            algorithm: judge_plan.algorithm,
            steps,
            alpha,
            search_method,
        },
        winner,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::templates::DEFAULT_PROMPT_DATE;
    use crate::agents::{CountingBackend, PlanAlgorithm, ScriptKey, ScriptRecord, ScriptedBackend};
    use crate::sim;
    use std::sync::Arc;

    fn questions(n: usize) -> Vec<MetaQuestion> {
        (1..=n)
            .map(|k| MetaQuestion {
                index: k,
                cause: format!("X{k}"),
                effect: "Y".to_string(),
                hint: None,
            })
            .collect()
    }

    fn record(side: Side, response: String) -> ScriptRecord {
        ScriptRecord {
            side,
            key: ScriptKey::Any,
            response,
        }
    }

    #[test]
    fn question_batch_numbers_and_hints() {
        let mut qs = questions(2);
        qs[1].hint = Some(
            "From the PC algorithm and analysis, there is no direct causal relationship from X2 to Y.".to_string(),
        );
        let task = build_question_batch("a tiny dataset", &qs).unwrap();
        assert!(task.contains("This dataset is about a tiny dataset"));
        assert!(task.contains("1. Are there any direct causal relationships from X1 to Y?"));
        assert!(task.contains(
            "2. From the PC algorithm and analysis, there is no direct causal relationship from X2 to Y. But from your expert and the suggested result above, are there any direct causal relationships from X2 to Y?"
        ));
        assert!(task.contains("#Begin List Questions#"));
    }

    #[test]
    fn decisive_judge_ends_in_three_calls() {
        let profiles = DebateProfiles::meta(DEFAULT_PROMPT_DATE).unwrap();
        let scripted: Arc<dyn Backend> = Arc::new(ScriptedBackend::from_records(vec![
            record(Side::Affirmative, sim::react_answers(&[true, true])),
            record(Side::Negative, sim::react_answers(&[false, false])),
            record(Side::Judge, sim::judge_decisive(&[true, false])),
        ]));
        let counting = CountingBackend::new(scripted);
        let outcome = run_debate(
            "t1",
            "test data",
            &questions(2),
            &profiles,
            &counting,
            &DebateConfig::default(),
            0.0,
            &mut AutoModerator,
        )
        .unwrap();
        assert_eq!(counting.calls(), 3);
        assert!(outcome.unresolved.is_empty());
        assert_eq!(outcome.verdicts[0].decision, Decision::Yes);
        assert_eq!(outcome.verdicts[1].decision, Decision::No);
        // task + 3 agent turns, no steering.
        assert_eq!(outcome.transcript.entries.len(), 4);
    }

    #[test]
    fn adversarial_judge_hits_round_cap_and_policy() {
        let profiles = DebateProfiles::meta(DEFAULT_PROMPT_DATE).unwrap();
        let scripted: Arc<dyn Backend> = Arc::new(ScriptedBackend::from_records(vec![
            record(Side::Affirmative, sim::react_answers(&[true, false])),
            record(Side::Negative, sim::react_answers(&[false, true])),
            record(Side::Judge, sim::judge_followup(2)),
        ]));
        let counting = CountingBackend::new(scripted);
        let config = DebateConfig::default();
        let outcome = run_debate(
            "t2",
            "test data",
            &questions(2),
            &profiles,
            &counting,
            &config,
            0.0,
            &mut AutoModerator,
        )
        .unwrap();
        assert_eq!(outcome.unresolved, vec![1, 2]);
        assert_eq!(outcome.verdicts[0].decision, Decision::No);
        assert_eq!(outcome.verdicts[1].decision, Decision::No);
        // Judge turns are capped by max_rounds; each debater answers once
        // up front and once per follow-up round.
        let judge_calls = config.max_rounds;
        let debater_calls = 2 + 2 * (config.max_rounds - 1);
        assert_eq!(counting.calls(), judge_calls + debater_calls);

        let affirmative = run_debate(
            "t3",
            "test data",
            &questions(2),
            &profiles,
            &counting,
            &DebateConfig {
                unresolved_policy: UnresolvedPolicy::AffirmativeAnswer,
                ..DebateConfig::default()
            },
            0.0,
            &mut AutoModerator,
        )
        .unwrap();
        assert_eq!(affirmative.verdicts[0].decision, Decision::Yes);
        assert_eq!(affirmative.verdicts[1].decision, Decision::No);
        assert_eq!(affirmative.unresolved, vec![1, 2]);
    }

    #[test]
    fn late_ruling_overrides_followup() {
        let profiles = DebateProfiles::meta(DEFAULT_PROMPT_DATE).unwrap();
        // Judge asks for more the first time (keyed on the negative's
        // response being the latest user message) and rules after the
        // steering turn.
        let scripted = ScriptedBackend::from_records(vec![
            record(Side::Affirmative, sim::react_answers(&[true])),
            record(Side::Negative, sim::react_answers(&[false])),
            ScriptRecord {
                side: Side::Judge,
                key: ScriptKey::Contains("make a final decision".to_string()),
                response: sim::judge_decisive(&[true]),
            },
            record(Side::Judge, sim::judge_followup(1)),
        ]);
        let outcome = run_debate(
            "t4",
            "test data",
            &questions(1),
            &profiles,
            &scripted,
            &DebateConfig::default(),
            0.0,
            &mut AutoModerator,
        )
        .unwrap();
        assert!(outcome.unresolved.is_empty());
        assert_eq!(outcome.verdicts[0].decision, Decision::Yes);
        // Steering messages for both debaters and the judge were posted.
        let admin_turns: Vec<&str> = outcome
            .transcript
            .entries
            .iter()
            .filter(|e| e.author == "Admin")
            .map(|e| e.content.as_str())
            .collect();
        assert_eq!(admin_turns.len(), 4);
        assert!(admin_turns[1].starts_with("Affirmative, please answer"));
        assert!(admin_turns[2].starts_with("Negative, please answer"));
        assert_eq!(admin_turns[3], STEERING_JUDGE);
    }

    #[test]
    fn reformat_retry_recovers_then_fails() {
        let profiles = DebateProfiles::meta(DEFAULT_PROMPT_DATE).unwrap();
        // The affirmative ignores the format until the admin posts the
        // retry message.
        let scripted = ScriptedBackend::from_records(vec![
            ScriptRecord {
                side: Side::Affirmative,
                key: ScriptKey::Contains("could not be parsed".to_string()),
                response: sim::react_answers(&[true]),
            },
            record(Side::Affirmative, "I refuse to use the format.".to_string()),
            record(Side::Negative, sim::react_answers(&[false])),
            record(Side::Judge, sim::judge_decisive(&[false])),
        ]);
        let outcome = run_debate(
            "t5",
            "test data",
            &questions(1),
            &profiles,
            &scripted,
            &DebateConfig::default(),
            0.0,
            &mut AutoModerator,
        )
        .unwrap();
        assert_eq!(outcome.verdicts[0].decision, Decision::No);

        let stubborn = ScriptedBackend::from_records(vec![record(
            Side::Affirmative,
            "Still not using the format.".to_string(),
        )]);
        let err = run_debate(
            "t6",
            "test data",
            &questions(1),
            &profiles,
            &stubborn,
            &DebateConfig::default(),
            0.0,
            &mut AutoModerator,
        )
        .unwrap_err();
        assert!(matches!(err, DebateError::ParserFailureAfterRetry(_)));
    }

    #[test]
    fn moderator_can_replace_steering() {
        struct Loud;
        impl Moderator for Loud {
            fn steer(&mut self, canonical: &str, _t: &Transcript) -> Option<String> {
                canonical
                    .starts_with("Judge")
                    .then(|| "Judge, decide now.".to_string())
            }
        }
        let profiles = DebateProfiles::meta(DEFAULT_PROMPT_DATE).unwrap();
        let scripted = ScriptedBackend::from_records(vec![
            record(Side::Affirmative, sim::react_answers(&[true])),
            record(Side::Negative, sim::react_answers(&[false])),
            ScriptRecord {
                side: Side::Judge,
                key: ScriptKey::Contains("decide now".to_string()),
                response: sim::judge_decisive(&[true]),
            },
            record(Side::Judge, sim::judge_followup(1)),
        ]);
        let outcome = run_debate(
            "t7",
            "test data",
            &questions(1),
            &profiles,
            &scripted,
            &DebateConfig::default(),
            0.0,
            &mut Loud,
        )
        .unwrap();
        assert_eq!(outcome.verdicts[0].decision, Decision::Yes);
        assert!(outcome
            .transcript
            .entries
            .iter()
            .any(|e| e.author == "Admin" && e.content == "Judge, decide now."));
    }

    #[test]
    fn empty_question_list_is_rejected() {
        let profiles = DebateProfiles::meta(DEFAULT_PROMPT_DATE).unwrap();
        let scripted = ScriptedBackend::from_records(vec![]);
        assert!(matches!(
            run_debate(
                "t8",
                "d",
                &[],
                &profiles,
                &scripted,
                &DebateConfig::default(),
                0.0,
                &mut AutoModerator,
            ),
            Err(DebateError::NoQuestions)
        ));
    }

    #[test]
    fn plan_debate_negative_win_routes_steps_request() {
        let profiles = DebateProfiles::plan(DEFAULT_PROMPT_DATE).unwrap();
        let scripted: Arc<dyn Backend> = Arc::new(ScriptedBackend::from_records(vec![
            ScriptRecord {
                side: Side::Negative,
                key: ScriptKey::Contains("step-by-step plan for the coder".to_string()),
                response: sim::plan_statement(
                    "GES",
                    &[
                        "Load and standardize the data.",
                        "Run the search.",
                        "Report the matrix.",
                    ],
                ),
            },
            record(Side::Affirmative, sim::plan_statement("PC", &[])),
            record(Side::Negative, sim::plan_statement("GES", &[])),
            record(Side::Judge, sim::plan_statement("GES", &[])),
        ]));
        let counting = CountingBackend::new(scripted);
        let task = render_prompt(
            "plan_task",
            &[("dataset_description", "test data"), ("sample", "a,b\n1,2")],
        )
        .unwrap();
        let outcome =
            run_plan_debate("p1", &task, &profiles, &counting, 0.0, &mut AutoModerator).unwrap();
        assert_eq!(outcome.winner, Side::Negative);
        assert_eq!(outcome.parsed.algorithm, PlanAlgorithm::Ges);
        assert_eq!(outcome.parsed.steps.len(), 3);
        assert_eq!(outcome.parsed.steps[0], "Load and standardize the data.");
        assert_eq!(counting.calls(), 4);
        let request = outcome
            .transcript
            .entries
            .iter()
            .rev()
            .find(|e| e.author == "Admin")
            .unwrap();
        assert!(request
            .content
            .starts_with("Negative, please give step-by-step plan"));
    }

    #[test]
    fn plan_debate_affirmative_wins_ties() {
        let profiles = DebateProfiles::plan(DEFAULT_PROMPT_DATE).unwrap();
        let scripted = ScriptedBackend::from_records(vec![
            ScriptRecord {
                side: Side::Affirmative,
                key: ScriptKey::Contains("step-by-step plan for the coder".to_string()),
                response: "step 1: Use alpha = 0.01 for the independence tests.\nstep 2: Run PC and report.".to_string(),
            },
            record(Side::Affirmative, sim::plan_statement("PC", &[])),
            record(Side::Negative, sim::plan_statement("PC", &[])),
            record(Side::Judge, sim::plan_statement("PC", &[])),
        ]);
        let task = render_prompt(
            "plan_task",
            &[("dataset_description", "test data"), ("sample", "a,b\n1,2")],
        )
        .unwrap();
        let outcome =
            run_plan_debate("p2", &task, &profiles, &scripted, 0.0, &mut AutoModerator).unwrap();
        assert_eq!(outcome.winner, Side::Affirmative);
        assert_eq!(outcome.parsed.algorithm, PlanAlgorithm::Pc);
        assert_eq!(outcome.parsed.alpha, Some(0.01));
        assert_eq!(outcome.parsed.steps.len(), 2);
    }
}
