//! Parsers for agent responses: ReAct reasoning blocks, judge verdicts,
//! and plan-debate outcomes.
//!
//! The formats are defined by the prompt templates, but real model output
//! drifts (missing dashes, case changes, "Final answer" vs "Answer"), so
//! every matcher here is anchored yet tolerant: case-insensitive keys,
//! optional leading dashes, and last-line-wins where agents restate
//! themselves.

use super::{AgentError, Decision, FinalAnswer, FollowUpTarget, ReActBlock, ReActStep, Verdict};
use crate::scd::SearchMethod;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

fn block_header_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // Anchored at line start so "#End Question number 1#" style trailers
    // do not open a new block.
    RE.get_or_init(|| Regex::new(r"(?i)^\s*question number\s+(\d+)").unwrap())
}

fn answer_line_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)^\s*-?\s*(?:final\s+)?answer\s*:\s*(.*)$").unwrap())
}

fn step_line_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)^\s*-?\s*step\s+(\d+)\s*[:.]?\s*(.*)$").unwrap())
}

/// A contiguous run of lines belonging to one `Question number k` block.
struct RawBlock<'a> {
    index: usize,
    lines: Vec<&'a str>,
}

fn split_blocks(text: &str) -> Vec<RawBlock<'_>> {
    let header = block_header_re();
    let mut blocks: Vec<RawBlock<'_>> = Vec::new();
    for line in text.lines() {
        if let Some(caps) = header.captures(line) {
            if let Ok(index) = caps[1].parse::<usize>() {
                blocks.push(RawBlock {
                    index,
                    lines: vec![line],
                });
                continue;
            }
        }
        if let Some(last) = blocks.last_mut() {
            last.lines.push(line);
        }
    }
    blocks
}

/// ReAct keys in the order they should be probed. "Action Input" must be
/// checked before "Action" because the latter is a prefix of the former.
const REACT_KEYS: [&str; 4] = ["thought", "action input", "action", "observation"];

fn react_key(line: &str) -> Option<(&'static str, String)> {
    let trimmed = line.trim_start();
    let without_dash = trimmed.strip_prefix('-').unwrap_or(trimmed).trim_start();
    let lower = without_dash.to_lowercase();
    for key in REACT_KEYS {
        if lower.starts_with(key) {
            let rest = &without_dash[key.len()..];
            let rest = rest.trim_start();
            if let Some(value) = rest.strip_prefix(':') {
                return Some((key, value.trim().to_string()));
            }
        }
    }
    None
}

/// Parses the ReAct blocks of a debater response.
///
/// Each block starts at a line beginning with `Question number <k>` and
/// runs to the next such line. Inside a block, `-Thought:`, `-Action:`,
/// `-Action Input:`, and `-Observation:` lines populate [`ReActStep`]s (a
/// repeated key opens a new step), and the final answer is taken from the
/// last `-Final answer:`/`-Answer:` line, reading its first token as
/// yes/no when possible.
pub fn parse_react_blocks(text: &str) -> Result<Vec<ReActBlock>, AgentError> {
    let raw = split_blocks(text);
    if raw.is_empty() {
        return Err(AgentError::NoBlocksFound);
    }
    let answer_re = answer_line_re();
    let mut blocks = Vec::with_capacity(raw.len());
    for block in raw {
        let mut steps: Vec<ReActStep> = Vec::new();
        let mut current = ReActStep::default();
        let mut answer: Option<FinalAnswer> = None;
        for line in &block.lines[1..] {
            if let Some(caps) = answer_re.captures(line) {
                answer = Some(classify_answer(caps[1].trim()));
                continue;
            }
            if let Some((key, value)) = react_key(line) {
                if key == "observation" {
                    current.observation = Some(value);
                    continue;
                }
                let filled = match key {
                    "thought" => current.thought.is_some(),
                    "action" => current.action.is_some(),
                    _ => current.action_input.is_some(),
                };
                if (filled || current.observation.is_some()) && !current.is_empty() {
                    steps.push(std::mem::take(&mut current));
                }
                let slot = match key {
                    "thought" => &mut current.thought,
                    "action" => &mut current.action,
                    _ => &mut current.action_input,
                };
                *slot = Some(value);
            }
        }
        if !current.is_empty() {
            steps.push(current);
        }
        blocks.push(ReActBlock {
            question_index: block.index,
            steps,
            final_answer: answer,
        });
    }
    Ok(blocks)
}

fn classify_answer(text: &str) -> FinalAnswer {
    let first = text
        .split(|c: char| !c.is_ascii_alphanumeric())
        .find(|t| !t.is_empty())
        .unwrap_or("");
    match first.to_lowercase().as_str() {
        "yes" | "1" => FinalAnswer::Yes,
        "no" | "0" => FinalAnswer::No,
        _ => FinalAnswer::Other(text.to_string()),
    }
}

fn followup_marker(line: &str) -> bool {
    let lower = line.to_lowercase();
    lower.contains("waiting for additional information") || lower.contains("further information")
}

fn action_line(line: &str) -> Option<String> {
    react_key(line).and_then(|(key, value)| (key == "action").then_some(value))
}

/// Parses a judge response into one [`Verdict`] per question.
///
/// Rules, in order, per block: a final-answer line decides yes/no; failing
/// that, a follow-up marker ("waiting for additional information" /
/// "further information") produces a follow-up aimed at whichever sides
/// the block names (neither or both mentioned means both); anything else
/// is unparseable. Duplicate blocks for one question keep the last, and
/// the total must match `expected` questions.
pub fn parse_judge_verdicts(text: &str, expected: usize) -> Result<Vec<Verdict>, AgentError> {
    let raw = split_blocks(text);
    if raw.is_empty() {
        return Err(AgentError::NoBlocksFound);
    }
    let answer_re = answer_line_re();
    let mut by_index: std::collections::BTreeMap<usize, Verdict> =
        std::collections::BTreeMap::new();
    for block in raw {
        let mut answer: Option<FinalAnswer> = None;
        for line in &block.lines {
            if let Some(caps) = answer_re.captures(line) {
                answer = Some(classify_answer(caps[1].trim()));
            }
        }
        let decision = match answer {
            Some(FinalAnswer::Yes) => Some(Decision::Yes),
            Some(FinalAnswer::No) => Some(Decision::No),
            _ => None,
        };
        let decision = match decision {
            Some(d) => d,
            None => {
                let mut marker_line: Option<&str> = None;
                let mut last_action: Option<String> = None;
                for line in &block.lines {
                    if followup_marker(line) && marker_line.is_none() {
                        marker_line = Some(line);
                    }
                    if let Some(action) = action_line(line) {
                        last_action = Some(action);
                    }
                }
                match marker_line {
                    Some(marker) => {
                        let body = block.lines.join("\n").to_lowercase();
                        let aff = body.contains("affirmative");
                        let neg = body.contains("negative");
                        let target = match (aff, neg) {
                            (true, false) => FollowUpTarget::Affirmative,
                            (false, true) => FollowUpTarget::Negative,
                            _ => FollowUpTarget::Both,
                        };
                        Decision::FollowUp {
                            target,
                            question: last_action.unwrap_or_else(|| marker.trim().to_string()),
                        }
                    }
                    None => return Err(AgentError::UnparseableVerdict(block.index)),
                }
            }
        };
        by_index.insert(
            block.index,
            Verdict {
                question_index: block.index,
                decision,
            },
        );
    }
    if by_index.len() != expected {
        return Err(AgentError::VerdictCountMismatch {
            found: by_index.len(),
            expected,
        });
    }
    Ok(by_index.into_values().collect())
}

/// Discovery algorithms a plan debate can select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanAlgorithm {
    Pc,
    ExactSearch,
    DirectLingam,
    Ges,
    Fci,
    CdNod,
}

impl fmt::Display for PlanAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PlanAlgorithm::Pc => "PC",
            PlanAlgorithm::ExactSearch => "Exact Search",
            PlanAlgorithm::DirectLingam => "DirectLiNGAM",
            PlanAlgorithm::Ges => "GES",
            PlanAlgorithm::Fci => "FCI",
            PlanAlgorithm::CdNod => "CD-NOD",
        };
        f.write_str(name)
    }
}

/// Structured result of parsing a plan statement or plan-judge decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedPlan {
    pub algorithm: PlanAlgorithm,
    pub steps: Vec<String>,
    pub alpha: Option<f64>,
    pub search_method: Option<SearchMethod>,
}

struct AlgorithmPattern {
    regex: &'static str,
    algorithm: PlanAlgorithm,
}

const ALGORITHM_PATTERNS: [AlgorithmPattern; 8] = [
    AlgorithmPattern {
        regex: r"(?i)\bexact\s+search\b",
        algorithm: PlanAlgorithm::ExactSearch,
    },
    AlgorithmPattern {
        regex: r"(?i)\bdirect\s*lingam\b",
        algorithm: PlanAlgorithm::DirectLingam,
    },
    AlgorithmPattern {
        regex: r"(?i)\blingam\b",
        algorithm: PlanAlgorithm::DirectLingam,
    },
    AlgorithmPattern {
        regex: r"(?i)\bfast\s+causal\s+inference\b",
        algorithm: PlanAlgorithm::Fci,
    },
    AlgorithmPattern {
        regex: r"(?i)\bCD-?NOD\b",
        algorithm: PlanAlgorithm::CdNod,
    },
    AlgorithmPattern {
        regex: r"\bGES\b",
        algorithm: PlanAlgorithm::Ges,
    },
    AlgorithmPattern {
        regex: r"\bFCI\b",
        algorithm: PlanAlgorithm::Fci,
    },
    AlgorithmPattern {
        regex: r"\bPC\b",
        algorithm: PlanAlgorithm::Pc,
    },
];

fn detect_algorithm(region: &str) -> Option<PlanAlgorithm> {
    let mut best: Option<(usize, PlanAlgorithm)> = None;
    for pattern in &ALGORITHM_PATTERNS {
        let re = Regex::new(pattern.regex).unwrap();
        if let Some(m) = re.find(region) {
            let candidate = (m.start(), pattern.algorithm);
            best = match best {
                Some((at, _)) if at <= candidate.0 => best,
                _ => Some(candidate),
            };
        }
    }
    best.map(|(_, alg)| alg)
}

/// Parses a plan from a judge decision and/or a debater plan statement.
///
/// The algorithm is detected in the text after the last `Final answer:`
/// marker when one exists (the judge's decision region), otherwise in the
/// whole text; the earliest algorithm name in that region wins. Steps are
/// collected from `step <k>:` lines anywhere in the text, ordered by their
/// stated number. `alpha` and a search-method keyword are extracted when
/// present so the executor can honor them.
pub fn parse_plan(text: &str) -> Result<ParsedPlan, AgentError> {
    static FINAL_RE: OnceLock<Regex> = OnceLock::new();
    let final_re = FINAL_RE.get_or_init(|| Regex::new(r"(?i)final\s+answer\s*:").unwrap());
    let region_start = final_re
        .find_iter(text)
        .last()
        .map(|m| m.end())
        .unwrap_or(0);
    let algorithm =
        detect_algorithm(&text[region_start..]).ok_or(AgentError::NoAlgorithmDetected)?;

    Ok(ParsedPlan {
        algorithm,
        steps: parse_steps(text),
        alpha: extract_alpha(text),
        search_method: extract_search_method(text),
    })
}

/// Collects `step <k>: ...` lines anywhere in `text`, ordered by their
/// stated number. The step text is the rest of the line.
pub fn parse_steps(text: &str) -> Vec<String> {
    let step_re = step_line_re();
    let mut numbered: Vec<(usize, String)> = Vec::new();
    for line in text.lines() {
        if let Some(caps) = step_re.captures(line) {
            if let Ok(k) = caps[1].parse::<usize>() {
                numbered.push((k, caps[2].trim().to_string()));
            }
        }
    }
    numbered.sort_by_key(|(k, _)| *k);
    numbered.into_iter().map(|(_, s)| s).collect()
}

/// Extracts a significance level stated as `alpha = 0.01`, `alpha: .05`,
/// or `alpha of 0.1`.
pub fn extract_alpha(text: &str) -> Option<f64> {
    static ALPHA_RE: OnceLock<Regex> = OnceLock::new();
    let alpha_re =
        ALPHA_RE.get_or_init(|| Regex::new(r"(?i)alpha\s*(?:=|:|of)?\s*(0?\.\d+)").unwrap());
    alpha_re
        .captures(text)
        .and_then(|caps| caps[1].parse::<f64>().ok())
}

/// Extracts an exact-search strategy keyword when one is named.
pub fn extract_search_method(text: &str) -> Option<SearchMethod> {
    static METHOD_RE: OnceLock<Regex> = OnceLock::new();
    let method_re = METHOD_RE.get_or_init(|| {
        // `a*` has no trailing word boundary (the `*` is not a word
        // character), so it gets its own alternative.
        Regex::new(r"(?i)\ba\*|\b(astar|dp|dynamic\s+programming)\b").unwrap()
    });
    method_re.find(text).map(|m| {
        let token = m.as_str().to_lowercase();
        if token == "astar" || token == "a*" {
            SearchMethod::Astar
        } else {
            SearchMethod::Dp
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEBATER_SAMPLE: &str = "Question number 1:\n-Thought: Engine size should push weight up.\n-Action: Consider physics.\n-Action Input: Displacement, Weight\n-Observation: Larger engines are heavier.\n-Thought: The effect is direct.\n-Final answer: Yes\nQuestion number 2:\n-Thought: No mechanism links them.\n-Final answer: No";

    #[test]
    fn react_blocks_split_and_step_boundaries() {
        let blocks = parse_react_blocks(DEBATER_SAMPLE).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].question_index, 1);
        assert_eq!(blocks[0].steps.len(), 2);
        assert_eq!(
            blocks[0].steps[0].action_input.as_deref(),
            Some("Displacement, Weight")
        );
        assert_eq!(
            blocks[0].steps[0].observation.as_deref(),
            Some("Larger engines are heavier.")
        );
        assert_eq!(
            blocks[0].steps[1].thought.as_deref(),
            Some("The effect is direct.")
        );
        assert_eq!(blocks[0].final_answer, Some(FinalAnswer::Yes));
        assert_eq!(blocks[1].final_answer, Some(FinalAnswer::No));
    }

    #[test]
    fn last_answer_line_wins() {
        let text = "Question number 3:\n-Final answer: Yes\nOn reflection:\n-Final answer: No";
        let blocks = parse_react_blocks(text).unwrap();
        assert_eq!(blocks[0].final_answer, Some(FinalAnswer::No));
    }

    #[test]
    fn non_yes_no_answer_is_preserved() {
        let text = "Question number 1:\n-Final answer: It depends on the season.";
        let blocks = parse_react_blocks(text).unwrap();
        assert_eq!(
            blocks[0].final_answer,
            Some(FinalAnswer::Other("It depends on the season.".to_string()))
        );
    }

    #[test]
    fn no_blocks_is_an_error() {
        assert!(matches!(
            parse_react_blocks("I simply refuse."),
            Err(AgentError::NoBlocksFound)
        ));
        assert!(matches!(
            parse_judge_verdicts("hmm", 2),
            Err(AgentError::NoBlocksFound)
        ));
    }

    #[test]
    fn trailer_lines_do_not_open_blocks() {
        let text = "Question number 1:\n-Final answer: Yes\n#End Question number 1#\n";
        let blocks = parse_react_blocks(text).unwrap();
        assert_eq!(blocks.len(), 1);
    }

    const JUDGE_FOLLOWUP: &str = "Question number 1:\n-Thought: Both sides gave plausible stories.\n-Action: Please quantify the effect of Displacement on Mpg.\n-Observation: Waiting for additional information from the debaters.\nQuestion number 2:\n-Final answer: No";

    #[test]
    fn judge_followup_and_answer_mix() {
        let verdicts = parse_judge_verdicts(JUDGE_FOLLOWUP, 2).unwrap();
        assert_eq!(verdicts.len(), 2);
        match &verdicts[0].decision {
            Decision::FollowUp { target, question } => {
                assert_eq!(*target, FollowUpTarget::Both);
                assert_eq!(
                    question,
                    "Please quantify the effect of Displacement on Mpg."
                );
            }
            other => panic!("expected follow-up, got {other:?}"),
        }
        assert_eq!(verdicts[1].decision, Decision::No);
    }

    #[test]
    fn judge_targets_named_side() {
        let text = "Question number 1:\n-Thought: The Affirmative claim lacks evidence.\n-Action: Affirmative, provide data support.\n-Observation: Waiting for additional information from the debaters.";
        let verdicts = parse_judge_verdicts(text, 1).unwrap();
        match &verdicts[0].decision {
            Decision::FollowUp { target, .. } => {
                assert_eq!(*target, FollowUpTarget::Affirmative)
            }
            other => panic!("expected follow-up, got {other:?}"),
        }
    }

    #[test]
    fn judge_answer_beats_followup_marker() {
        let text = "Question number 1:\n-Observation: Further information was weighed.\n-Final answer: Yes";
        let verdicts = parse_judge_verdicts(text, 1).unwrap();
        assert_eq!(verdicts[0].decision, Decision::Yes);
    }

    #[test]
    fn duplicate_question_keeps_last() {
        let text = "Question number 1:\n-Final answer: Yes\nQuestion number 1:\n-Final answer: No";
        let verdicts = parse_judge_verdicts(text, 1).unwrap();
        assert_eq!(verdicts[0].decision, Decision::No);
    }

    #[test]
    fn verdict_count_mismatch_is_detected() {
        let text = "Question number 1:\n-Final answer: Yes";
        assert!(matches!(
            parse_judge_verdicts(text, 4),
            Err(AgentError::VerdictCountMismatch {
                found: 1,
                expected: 4
            })
        ));
    }

    #[test]
    fn unparseable_block_is_flagged() {
        let text = "Question number 1:\nI like trains.";
        assert!(matches!(
            parse_judge_verdicts(text, 1),
            Err(AgentError::UnparseableVerdict(1))
        ));
    }

    #[test]
    fn plan_detects_judge_choice_region() {
        let text = "The Affirmative argued for PC throughout.\n-Final answer: The GES algorithm is the most suitable choice for this dataset.";
        let plan = parse_plan(text).unwrap();
        assert_eq!(plan.algorithm, PlanAlgorithm::Ges);
    }

    #[test]
    fn plan_steps_and_options_extracted() {
        let text = "Use the PC algorithm with alpha = 0.01.\nstep 1: Load the data.\nstep 2: Run PC.\nStep 3: Report the matrix.";
        let plan = parse_plan(text).unwrap();
        assert_eq!(plan.algorithm, PlanAlgorithm::Pc);
        assert_eq!(plan.steps.len(), 3);
        assert_eq!(plan.steps[0], "Load the data.");
        assert_eq!(plan.alpha, Some(0.01));
        assert_eq!(plan.search_method, None);
    }

    #[test]
    fn plan_search_method_keywords() {
        let dp = parse_plan("Exact Search via dynamic programming.").unwrap();
        assert_eq!(dp.algorithm, PlanAlgorithm::ExactSearch);
        assert_eq!(dp.search_method, Some(SearchMethod::Dp));
        let astar = parse_plan("Exact Search with astar expansion.").unwrap();
        assert_eq!(astar.search_method, Some(SearchMethod::Astar));
    }

    #[test]
    fn plan_earliest_mention_wins() {
        let plan = parse_plan("DirectLiNGAM outperforms PC and GES here.").unwrap();
        assert_eq!(plan.algorithm, PlanAlgorithm::DirectLingam);
    }

    #[test]
    fn plan_without_algorithm_is_an_error() {
        assert!(matches!(
            parse_plan("Just look at the data very hard."),
            Err(AgentError::NoAlgorithmDetected)
        ));
    }
}
