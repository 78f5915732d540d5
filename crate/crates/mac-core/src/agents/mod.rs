//! Agent profiles and prompt templates, pluggable completion backends
//! (live HTTP, scripted, record/replay cache), and parsers for the ReAct,
//! judge-verdict, and plan response grammars.

pub mod backend;
pub mod parser;
pub mod templates;

pub use backend::{
    cache_key, Backend, CachedBackend, CountingBackend, LiveBackend, ScriptKey, ScriptRecord,
    ScriptedBackend,
};
pub use parser::{parse_judge_verdicts, parse_plan, parse_react_blocks, ParsedPlan, PlanAlgorithm};
pub use templates::render_prompt;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("unknown prompt template `{0}`")]
    UnknownTemplate(String),
    #[error("placeholder `{0}` is not bound")]
    UnboundPlaceholder(String),
    #[error("MAC_API_KEY is not set in the environment")]
    MissingApiKey,
    #[error("chat completion failed with HTTP {status}: {body}")]
    HttpFailure { status: u16, body: String },
    #[error("chat completion transport error: {0}")]
    HttpTransport(String),
    #[error("history contains no user message to answer")]
    EmptyHistory,
    #[error("no scripted response for side {side} and message digest {digest} (\"{excerpt}\")")]
    ScriptMiss {
        side: Side,
        digest: String,
        excerpt: String,
    },
    #[error("script file is malformed: {0}")]
    ScriptParse(String),
    #[error("cache has no entry for digest {0}")]
    CacheMiss(String),
    #[error("cache entry {0} is unreadable")]
    CacheCorrupt(String),
    #[error("response contains no question blocks")]
    NoBlocksFound,
    #[error("judge answered {found} questions, expected {expected}")]
    VerdictCountMismatch { found: usize, expected: usize },
    #[error("verdict for question {0} is neither an answer nor a follow-up")]
    UnparseableVerdict(usize),
    #[error("no known algorithm named in the plan")]
    NoAlgorithmDetected,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Debate role of an agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Affirmative,
    Negative,
    Judge,
    Executor,
}

impl Side {
    /// Capitalized form used in steering messages ("Affirmative, please…").
    pub fn title(&self) -> &'static str {
        match self {
            Side::Affirmative => "Affirmative",
            Side::Negative => "Negative",
            Side::Judge => "Judge",
            Side::Executor => "Executor",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

/// One participant: a name, a side, and the system prompt it runs under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentProfile {
    pub name: String,
    pub side: Side,
    pub system_prompt: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

/// One chat turn. `author` is an agent name or `"Admin"` for operator and
/// canonical steering messages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub author: String,
    pub content: String,
}

impl ChatMessage {
    pub fn admin(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            author: "Admin".into(),
            content: content.into(),
        }
    }

    pub fn agent(author: impl Into<String>, content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            author: author.into(),
            content: content.into(),
        }
    }
}

/// Session metadata carried with a transcript. Wall-clock time is recorded
/// once per run in the manifest, not per message, so transcripts serialize
/// byte-identically across reruns.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptMeta {
    /// Session name, e.g. the source variable of a question batch or "plan".
    pub session: String,
    pub backend_id: String,
    /// Agent name → side, for labeling serialized entries.
    pub sides: BTreeMap<String, Side>,
}

/// Ordered, append-only record of one debate session.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub entries: Vec<ChatMessage>,
    pub meta: TranscriptMeta,
}

impl Transcript {
    pub fn new(session: impl Into<String>, backend_id: impl Into<String>) -> Self {
        Transcript {
            entries: Vec::new(),
            meta: TranscriptMeta {
                session: session.into(),
                backend_id: backend_id.into(),
                sides: BTreeMap::new(),
            },
        }
    }

    pub fn push(&mut self, message: ChatMessage) {
        self.entries.push(message);
    }

    /// Side of the author of an entry, if the author is a registered agent.
    pub fn side_of(&self, author: &str) -> Option<Side> {
        self.meta.sides.get(author).copied()
    }
}

/// One Thought/Action/Action Input/Observation quadruple; every element is
/// optional because transcripts routinely omit some.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReActStep {
    pub thought: Option<String>,
    pub action: Option<String>,
    pub action_input: Option<String>,
    pub observation: Option<String>,
}

impl ReActStep {
    fn is_empty(&self) -> bool {
        self.thought.is_none()
            && self.action.is_none()
            && self.action_input.is_none()
            && self.observation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FinalAnswer {
    Yes,
    No,
    Other(String),
}

/// One per-question block of a debater response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReActBlock {
    pub question_index: usize,
    pub steps: Vec<ReActStep>,
    pub final_answer: Option<FinalAnswer>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FollowUpTarget {
    Affirmative,
    Negative,
    Both,
}

impl FollowUpTarget {
    pub fn includes(&self, side: Side) -> bool {
        match self {
            FollowUpTarget::Affirmative => side == Side::Affirmative,
            FollowUpTarget::Negative => side == Side::Negative,
            FollowUpTarget::Both => side == Side::Affirmative || side == Side::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    #[serde(rename = "follow_up")]
    FollowUp {
        target: FollowUpTarget,
        question: String,
    },
}

/// The judge's ruling on one question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub question_index: usize,
    pub decision: Decision,
}
