//! Chat backends: a live HTTP client, a scripted stand-in for tests and
//! offline runs, a disk cache wrapper, and a call-counting probe.
//!
//! Every backend is keyed by the same deterministic request digest
//! ([`cache_key`]), which makes cached runs replayable byte-for-byte.

use super::{AgentError, AgentProfile, ChatMessage, Role, Side};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

/// Environment variable holding the API key for live requests. The key is
/// never accepted through flags or config files.
pub const API_KEY_ENV: &str = "MAC_API_KEY";

/// A chat-completion provider.
pub trait Backend: Send + Sync {
    /// Produces the next message for `profile`, given the conversation so
    /// far as that agent sees it.
    fn complete(
        &self,
        profile: &AgentProfile,
        history: &[ChatMessage],
        temperature: f64,
    ) -> Result<String, AgentError>;

    /// Stable identifier recorded in run manifests.
    fn id(&self) -> String;
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

#[derive(Serialize)]
struct KeyMessage<'a> {
    role: &'a str,
    author: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct KeyPayload<'a> {
    system_prompt: &'a str,
    history: Vec<KeyMessage<'a>>,
    temperature: f64,
}

/// Deterministic digest of a completion request: SHA-256 over the system
/// prompt, the full visible history (role, author, content), and the
/// temperature. Identical requests always map to identical keys.
pub fn cache_key(profile: &AgentProfile, history: &[ChatMessage], temperature: f64) -> String {
    let payload = KeyPayload {
        system_prompt: &profile.system_prompt,
        history: history
            .iter()
            .map(|m| KeyMessage {
                role: m.role.as_str(),
                author: &m.author,
                content: &m.content,
            })
            .collect(),
        temperature,
    };
    let bytes = serde_json::to_vec(&payload).expect("request payload serializes");
    sha256_hex(&bytes)
}

fn last_user_message(history: &[ChatMessage]) -> Option<&ChatMessage> {
    history.iter().rev().find(|m| m.role == Role::User)
}

fn excerpt(content: &str) -> String {
    content.chars().take(80).collect()
}

/// How a scripted record matches the last user-visible message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptKey {
    /// SHA-256 hex digest of the exact message content.
    Digest(String),
    /// Substring of the message content.
    Contains(String),
    /// Matches any message (catch-all; order matters).
    Any,
}

impl ScriptKey {
    fn matches(&self, content: &str, digest: &str) -> bool {
        match self {
            ScriptKey::Digest(expected) => expected == digest,
            ScriptKey::Contains(needle) => content.contains(needle),
            ScriptKey::Any => true,
        }
    }
}

/// One scripted exchange: when an agent on `side` is asked to respond and
/// the last user message matches `key`, reply with `response`.
#[derive(Debug, Clone)]
pub struct ScriptRecord {
    pub side: Side,
    pub key: ScriptKey,
    pub response: String,
}

#[derive(Deserialize)]
struct RawRecord {
    side: Side,
    digest: Option<String>,
    contains: Option<String>,
    #[serde(default)]
    any: bool,
    response: String,
}

#[derive(Deserialize)]
struct ScriptFile {
    #[serde(default)]
    records: Vec<RawRecord>,
}

/// Table-driven backend: replies are looked up by the responding side and
/// the last user message, first matching record wins. Used for offline
/// runs and fixtures.
pub struct ScriptedBackend {
    records: Vec<ScriptRecord>,
    label: String,
}

impl ScriptedBackend {
    pub fn from_records(records: Vec<ScriptRecord>) -> Self {
        Self {
            records,
            label: "inline".to_string(),
        }
    }

    /// Parses the TOML script format: a `records` array whose entries give
    /// `side`, exactly one of `digest`/`contains`/`any = true`, and
    /// `response`.
    pub fn from_toml_str(text: &str, label: &str) -> Result<Self, AgentError> {
        let file: ScriptFile =
            toml::from_str(text).map_err(|e| AgentError::ScriptParse(e.to_string()))?;
        let mut records = Vec::with_capacity(file.records.len());
        for (pos, raw) in file.records.into_iter().enumerate() {
            let key = match (raw.digest, raw.contains, raw.any) {
                (Some(digest), None, false) => ScriptKey::Digest(digest),
                (None, Some(needle), false) => ScriptKey::Contains(needle),
                (None, None, true) => ScriptKey::Any,
                _ => {
                    return Err(AgentError::ScriptParse(format!(
                        "record {pos}: exactly one of digest, contains, any must be set"
                    )))
                }
            };
            records.push(ScriptRecord {
                side: raw.side,
                key,
                response: raw.response,
            });
        }
        Ok(Self {
            records,
            label: label.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, AgentError> {
        let text = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "script".to_string());
        Self::from_toml_str(&text, &label)
    }
}

impl Backend for ScriptedBackend {
    fn complete(
        &self,
        profile: &AgentProfile,
        history: &[ChatMessage],
        _temperature: f64,
    ) -> Result<String, AgentError> {
        let message = last_user_message(history).ok_or(AgentError::EmptyHistory)?;
        let digest = sha256_hex(message.content.as_bytes());
        for record in &self.records {
            if record.side == profile.side && record.key.matches(&message.content, &digest) {
                return Ok(record.response.clone());
            }
        }
        Err(AgentError::ScriptMiss {
            side: profile.side,
            digest,
            excerpt: excerpt(&message.content),
        })
    }

    fn id(&self) -> String {
        format!("scripted:{}", self.label)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    backend_id: String,
    response: String,
}

/// Wraps another backend with a directory of response files, one per
/// request digest. In `cache_only` mode there is no inner backend and an
/// unknown digest is an error, which is what replay uses to prove that no
/// live request would have been made.
pub struct CachedBackend {
    inner: Option<Box<dyn Backend>>,
    dir: PathBuf,
    state: Mutex<Vec<String>>,
}

impl CachedBackend {
    pub fn new(inner: Box<dyn Backend>, dir: impl Into<PathBuf>) -> Result<Self, AgentError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            inner: Some(inner),
            dir,
            state: Mutex::new(Vec::new()),
        })
    }

    /// Replay mode: serve only digests already on disk.
    pub fn cache_only(dir: impl Into<PathBuf>) -> Self {
        Self {
            inner: None,
            dir: dir.into(),
            state: Mutex::new(Vec::new()),
        }
    }

    fn entry_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn record_use(&self, key: &str) {
        let mut used = self.state.lock().expect("cache state lock");
        if !used.iter().any(|k| k == key) {
            used.push(key.to_string());
        }
    }

    /// Digests served or stored so far, sorted.
    pub fn used_digests(&self) -> Vec<String> {
        let mut used = self.state.lock().expect("cache state lock").clone();
        used.sort();
        used
    }
}

impl Backend for CachedBackend {
    fn complete(
        &self,
        profile: &AgentProfile,
        history: &[ChatMessage],
        temperature: f64,
    ) -> Result<String, AgentError> {
        let key = cache_key(profile, history, temperature);
        let path = self.entry_path(&key);
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let entry: CacheEntry = serde_json::from_str(&text)
                .map_err(|e| AgentError::CacheCorrupt(format!("{}: {e}", path.display())))?;
            self.record_use(&key);
            return Ok(entry.response);
        }
        let inner = match &self.inner {
            Some(inner) => inner,
            None => return Err(AgentError::CacheMiss(key)),
        };
        let response = inner.complete(profile, history, temperature)?;
        let entry = CacheEntry {
            backend_id: inner.id(),
            response: response.clone(),
        };
        let body = serde_json::to_string_pretty(&entry).expect("cache entry serializes");
        {
            let _guard = self.state.lock().expect("cache state lock");
            std::fs::write(&path, body)?;
        }
        self.record_use(&key);
        Ok(response)
    }

    fn id(&self) -> String {
        match &self.inner {
            Some(inner) => format!("cached:{}", inner.id()),
            None => "cached:replay".to_string(),
        }
    }
}

/// Transparent wrapper that counts completions, for asserting call-budget
/// invariants in tests.
#[derive(Clone)]
pub struct CountingBackend {
    inner: Arc<dyn Backend>,
    calls: Arc<AtomicUsize>,
}

impl CountingBackend {
    pub fn new(inner: Arc<dyn Backend>) -> Self {
        Self {
            inner,
            calls: Arc::new(AtomicUsize::new(0)),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Backend for CountingBackend {
    fn complete(
        &self,
        profile: &AgentProfile,
        history: &[ChatMessage],
        temperature: f64,
    ) -> Result<String, AgentError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.complete(profile, history, temperature)
    }

    fn id(&self) -> String {
        self.inner.id()
    }
}

/// OpenAI-compatible chat-completions client. The endpoint is
/// `{base_url}/chat/completions`; the bearer token comes exclusively from
/// the `MAC_API_KEY` environment variable.
pub struct LiveBackend {
    base_url: String,
    model: String,
    client: reqwest::blocking::Client,
}

impl LiveBackend {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            model: model.into(),
            client: reqwest::blocking::Client::new(),
        }
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.base_url.trim_end_matches('/'))
    }
}

/// Builds the JSON body for a chat-completions request. Agent-authored
/// messages relayed as user turns carry a `name` field so the provider can
/// distinguish speakers; the orchestrator's own turns ("Admin") do not.
pub fn build_request_body(
    model: &str,
    profile: &AgentProfile,
    history: &[ChatMessage],
    temperature: f64,
) -> serde_json::Value {
    let mut messages = vec![serde_json::json!({
        "role": "system",
        "content": profile.system_prompt,
    })];
    for message in history {
        let mut value = serde_json::json!({
            "role": message.role.as_str(),
            "content": message.content,
        });
        if message.role == Role::User && message.author != "Admin" {
            value["name"] = serde_json::Value::String(message.author.clone());
        }
        messages.push(value);
    }
    serde_json::json!({
        "model": model,
        "temperature": temperature,
        "messages": messages,
    })
}

/// Pulls `choices[0].message.content` out of a chat-completions response.
pub fn extract_content(value: &serde_json::Value) -> Result<String, AgentError> {
    value["choices"][0]["message"]["content"]
        .as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| {
            AgentError::HttpTransport("response missing choices[0].message.content".to_string())
        })
}

const LIVE_ATTEMPTS: u32 = 3;
const LIVE_BACKOFF_MS: u64 = 500;

impl Backend for LiveBackend {
    fn complete(
        &self,
        profile: &AgentProfile,
        history: &[ChatMessage],
        temperature: f64,
    ) -> Result<String, AgentError> {
        let api_key = std::env::var(API_KEY_ENV).map_err(|_| AgentError::MissingApiKey)?;
        let body = build_request_body(&self.model, profile, history, temperature);
        let mut last_error = AgentError::HttpTransport("no attempt made".to_string());
        for attempt in 0..LIVE_ATTEMPTS {
            if attempt > 0 {
                std::thread::sleep(std::time::Duration::from_millis(
                    LIVE_BACKOFF_MS << (attempt - 1),
                ));
            }
            let sent = self
                .client
                .post(self.endpoint())
                .bearer_auth(&api_key)
                .json(&body)
                .send();
            let response = match sent {
                Ok(response) => response,
                Err(e) => {
                    last_error = AgentError::HttpTransport(e.to_string());
                    continue;
                }
            };
            let status = response.status();
            if status.is_success() {
                let value: serde_json::Value = response
                    .json()
                    .map_err(|e| AgentError::HttpTransport(e.to_string()))?;
                return extract_content(&value);
            }
            let body_text = response.text().unwrap_or_default();
            last_error = AgentError::HttpFailure {
                status: status.as_u16(),
                body: body_text,
            };
            let retryable = status.as_u16() == 429 || status.is_server_error();
            if !retryable {
                return Err(last_error);
            }
        }
        Err(last_error)
    }

    fn id(&self) -> String {
        format!("live:{}", self.model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::Side;

    fn profile(side: Side) -> AgentProfile {
        AgentProfile {
            name: format!("{}_Causal_Agent", side.title()),
            side,
            system_prompt: "You are a test agent.".to_string(),
        }
    }

    fn history() -> Vec<ChatMessage> {
        vec![
            ChatMessage::admin("Task: find the causal relationship"),
            ChatMessage::agent(
                "Affirmative_Causal_Agent",
                "Question number 1:\n-Final answer: Yes",
            ),
        ]
    }

    #[test]
    fn cache_key_is_stable_and_sensitive() {
        let p = profile(Side::Affirmative);
        let h = history();
        let a = cache_key(&p, &h, 0.0);
        let b = cache_key(&p, &h, 0.0);
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
        let warmer = cache_key(&p, &h, 0.5);
        assert_ne!(a, warmer);
        let mut shifted = h.clone();
        shifted[0].content.push('!');
        assert_ne!(a, cache_key(&p, &shifted, 0.0));
    }

    #[test]
    fn scripted_matches_in_order_on_last_user_message() {
        let backend = ScriptedBackend::from_records(vec![
            ScriptRecord {
                side: Side::Negative,
                key: ScriptKey::Contains("causal relationship".to_string()),
                response: "specific".to_string(),
            },
            ScriptRecord {
                side: Side::Negative,
                key: ScriptKey::Any,
                response: "fallback".to_string(),
            },
        ]);
        let p = profile(Side::Negative);
        let out = backend.complete(&p, &history(), 0.0).unwrap();
        assert_eq!(out, "specific");
        let other = backend
            .complete(&p, &[ChatMessage::admin("unrelated")], 0.0)
            .unwrap();
        assert_eq!(other, "fallback");
    }

    #[test]
    fn scripted_miss_reports_digest_and_excerpt() {
        let backend = ScriptedBackend::from_records(vec![ScriptRecord {
            side: Side::Judge,
            key: ScriptKey::Contains("never present".to_string()),
            response: "x".to_string(),
        }]);
        let err = backend
            .complete(&profile(Side::Judge), &history(), 0.0)
            .unwrap_err();
        match err {
            AgentError::ScriptMiss {
                side,
                digest,
                excerpt,
            } => {
                assert_eq!(side, Side::Judge);
                assert_eq!(digest.len(), 64);
                assert!(excerpt.starts_with("Task: find"));
            }
            other => panic!("expected script miss, got {other:?}"),
        }
    }

    #[test]
    fn scripted_digest_key_matches_exact_content() {
        let content = "Task: find the causal relationship";
        let digest = sha256_hex(content.as_bytes());
        let backend = ScriptedBackend::from_records(vec![ScriptRecord {
            side: Side::Executor,
            key: ScriptKey::Digest(digest),
            response: "ok".to_string(),
        }]);
        let out = backend
            .complete(
                &profile(Side::Executor),
                &[ChatMessage::admin(content)],
                0.0,
            )
            .unwrap();
        assert_eq!(out, "ok");
    }

    #[test]
    fn scripted_requires_a_user_message() {
        let backend = ScriptedBackend::from_records(vec![]);
        let only_assistant = vec![ChatMessage::agent("X", "hello")];
        assert!(matches!(
            backend.complete(&profile(Side::Affirmative), &only_assistant, 0.0),
            Err(AgentError::EmptyHistory)
        ));
    }

    #[test]
    fn script_toml_round_trip_and_validation() {
        let text = r#"
[[records]]
side = "affirmative"
contains = "hello"
response = "hi"

[[records]]
side = "judge"
any = true
response = "fine"
"#;
        let backend = ScriptedBackend::from_toml_str(text, "t").unwrap();
        assert_eq!(backend.records.len(), 2);
        assert_eq!(backend.id(), "scripted:t");

        let bad = r#"
[[records]]
side = "judge"
response = "no key"
"#;
        assert!(matches!(
            ScriptedBackend::from_toml_str(bad, "t"),
            Err(AgentError::ScriptParse(_))
        ));
    }

    #[test]
    fn cached_backend_serves_second_call_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let scripted: Arc<dyn Backend> =
            Arc::new(ScriptedBackend::from_records(vec![ScriptRecord {
                side: Side::Affirmative,
                key: ScriptKey::Any,
                response: "cached answer".to_string(),
            }]));
        let counting = CountingBackend::new(scripted);
        let cached =
            CachedBackend::new(Box::new(counting.clone()), dir.path().join("cache")).unwrap();
        let p = profile(Side::Affirmative);
        let h = history();
        assert_eq!(cached.complete(&p, &h, 0.0).unwrap(), "cached answer");
        assert_eq!(cached.complete(&p, &h, 0.0).unwrap(), "cached answer");
        assert_eq!(counting.calls(), 1);
        assert_eq!(cached.used_digests().len(), 1);
        assert_eq!(cached.id(), "cached:scripted:inline");
    }

    #[test]
    fn cache_only_mode_misses_loudly_and_replays() {
        let dir = tempfile::tempdir().unwrap();
        let cache_dir = dir.path().join("cache");
        let scripted: Arc<dyn Backend> =
            Arc::new(ScriptedBackend::from_records(vec![ScriptRecord {
                side: Side::Negative,
                key: ScriptKey::Any,
                response: "recorded".to_string(),
            }]));
        let recorder =
            CachedBackend::new(Box::new(CountingBackend::new(scripted)), &cache_dir).unwrap();
        let p = profile(Side::Negative);
        let h = history();
        recorder.complete(&p, &h, 0.0).unwrap();

        let replayer = CachedBackend::cache_only(&cache_dir);
        assert_eq!(replayer.complete(&p, &h, 0.0).unwrap(), "recorded");
        assert_eq!(replayer.id(), "cached:replay");
        let fresh = vec![ChatMessage::admin("never seen")];
        assert!(matches!(
            replayer.complete(&p, &fresh, 0.0),
            Err(AgentError::CacheMiss(_))
        ));
    }

    #[test]
    fn corrupt_cache_entry_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cache_dir = dir.path().join("cache");
        std::fs::create_dir_all(&cache_dir).unwrap();
        let p = profile(Side::Judge);
        let h = history();
        let key = cache_key(&p, &h, 0.0);
        std::fs::write(cache_dir.join(format!("{key}.json")), "{not json").unwrap();
        let replayer = CachedBackend::cache_only(&cache_dir);
        assert!(matches!(
            replayer.complete(&p, &h, 0.0),
            Err(AgentError::CacheCorrupt(_))
        ));
    }

    #[test]
    fn request_body_shape_and_naming() {
        let p = profile(Side::Affirmative);
        let h = history();
        let body = build_request_body("gpt-3.5-turbo", &p, &h, 0.25);
        assert_eq!(body["model"], "gpt-3.5-turbo");
        assert_eq!(body["temperature"], 0.25);
        let messages = body["messages"].as_array().unwrap();
        assert_eq!(messages.len(), 3);
        assert_eq!(messages[0]["role"], "system");
        assert_eq!(messages[0]["content"], "You are a test agent.");
        assert_eq!(messages[1]["role"], "user");
        assert!(messages[1].get("name").is_none());
        assert_eq!(messages[2]["role"], "assistant");
    }

    #[test]
    fn agent_relayed_user_turns_carry_a_name() {
        let p = profile(Side::Judge);
        let h = vec![ChatMessage {
            role: Role::User,
            author: "Negative_Causal_Agent".to_string(),
            content: "I disagree.".to_string(),
        }];
        let body = build_request_body("m", &p, &h, 0.0);
        assert_eq!(body["messages"][1]["name"], "Negative_Causal_Agent");
    }

    #[test]
    fn content_extraction_handles_both_shapes() {
        let good = serde_json::json!({
            "choices": [{"message": {"role": "assistant", "content": "hello"}}]
        });
        assert_eq!(extract_content(&good).unwrap(), "hello");
        let bad = serde_json::json!({"choices": []});
        assert!(extract_content(&bad).is_err());
    }

    #[test]
    fn live_backend_requires_env_key() {
        // The variable is absent in the test environment, so the error
        // path is exercised without any network traffic.
        std::env::remove_var(API_KEY_ENV);
        let live = LiveBackend::new("http://127.0.0.1:9", "test-model");
        let err = live
            .complete(&profile(Side::Affirmative), &history(), 0.0)
            .unwrap_err();
        assert!(matches!(err, AgentError::MissingApiKey));
        assert_eq!(live.id(), "live:test-model");
    }
}
