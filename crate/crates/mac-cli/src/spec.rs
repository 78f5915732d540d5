//! Pipeline and backend selection: the `--pipeline` enum, the `--backend`
//! spec grammar, and construction of the concrete backend stack.

use std::fmt;
use std::path::{Path, PathBuf};

use mac_core::agents::{Backend, CachedBackend, LiveBackend, ScriptedBackend};
use mac_core::debate::UnresolvedPolicy;
use mac_core::scd::SearchMethod;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Everything `mac discover` can run: the four agent pipelines plus the
/// three statistical algorithms invoked directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Pipeline {
    Meta,
    Coding,
    CodingMeta,
    MetaCoding,
    Pc,
    Exact,
    Lingam,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Meta => "meta",
            Pipeline::Coding => "coding",
            Pipeline::CodingMeta => "coding_meta",
            Pipeline::MetaCoding => "meta_coding",
            Pipeline::Pc => "pc",
            Pipeline::Exact => "exact",
            Pipeline::Lingam => "lingam",
        }
    }

    /// Pipelines that hold debates need a chat backend.
    pub fn needs_backend(self) -> bool {
        matches!(
            self,
            Pipeline::Meta | Pipeline::Coding | Pipeline::CodingMeta | Pipeline::MetaCoding
        )
    }

    /// Every pipeline except the pure debate one runs on tabular data.
    pub fn needs_data(self) -> bool {
        !matches!(self, Pipeline::Meta)
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `--search-method` values, mirroring the core enum for clap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SearchMethodArg {
    Astar,
    Dp,
}

impl From<SearchMethodArg> for SearchMethod {
    fn from(value: SearchMethodArg) -> Self {
        match value {
            SearchMethodArg::Astar => SearchMethod::Astar,
            SearchMethodArg::Dp => SearchMethod::Dp,
        }
    }
}

/// `--unresolved-policy` values, mirroring the core enum for clap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum UnresolvedPolicyArg {
    NoEdge,
    AffirmativeAnswer,
}

impl From<UnresolvedPolicyArg> for UnresolvedPolicy {
    fn from(value: UnresolvedPolicyArg) -> Self {
        match value {
            UnresolvedPolicyArg::NoEdge => UnresolvedPolicy::NoEdge,
            UnresolvedPolicyArg::AffirmativeAnswer => UnresolvedPolicy::AffirmativeAnswer,
        }
    }
}

pub const BACKEND_GRAMMAR: &str = "expected one of: live, scripted:<file.toml>, cached:<dir>, \
     cached:<dir>:live, cached:<dir>:scripted:<file.toml>";

/// Parsed form of a `--backend` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendSpec {
    /// Chat-completions requests over HTTP; the key comes from `MAC_API_KEY`.
    Live,
    /// Keyed canned responses from a TOML file.
    Scripted(PathBuf),
    /// Replay from a response cache; any miss is an error.
    CacheOnly(PathBuf),
    /// A write-through response cache in front of another backend.
    Cached {
        dir: PathBuf,
        inner: Box<BackendSpec>,
    },
}

impl BackendSpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let spec = spec.trim();
        if spec == "live" {
            return Ok(BackendSpec::Live);
        }
        if let Some(path) = spec.strip_prefix("scripted:") {
            if path.is_empty() {
                return Err(CliError::usage(format!(
                    "backend spec '{spec}' is missing the script path: {BACKEND_GRAMMAR}"
                )));
            }
            return Ok(BackendSpec::Scripted(path.into()));
        }
        if let Some(rest) = spec.strip_prefix("cached:") {
            if rest.is_empty() {
                return Err(CliError::usage(format!(
                    "backend spec '{spec}' is missing the cache directory: {BACKEND_GRAMMAR}"
                )));
            }
            if let Some(pos) = rest.find(":scripted:") {
                let dir = &rest[..pos];
                if dir.is_empty() {
                    return Err(CliError::usage(format!(
                        "backend spec '{spec}' is missing the cache directory: {BACKEND_GRAMMAR}"
                    )));
                }
                let inner = Self::parse(&rest[pos + 1..])?;
                return Ok(BackendSpec::Cached {
                    dir: dir.into(),
                    inner: Box::new(inner),
                });
            }
            if let Some(dir) = rest.strip_suffix(":live") {
                if dir.is_empty() {
                    return Err(CliError::usage(format!(
                        "backend spec '{spec}' is missing the cache directory: {BACKEND_GRAMMAR}"
                    )));
                }
                return Ok(BackendSpec::Cached {
                    dir: dir.into(),
                    inner: Box::new(BackendSpec::Live),
                });
            }
            return Ok(BackendSpec::CacheOnly(rest.into()));
        }
        Err(CliError::usage(format!(
            "unrecognized backend spec '{spec}': {BACKEND_GRAMMAR}"
        )))
    }

    /// The spec string that parses back to `self`.
    pub fn spec_string(&self) -> String {
        match self {
            BackendSpec::Live => "live".to_string(),
            BackendSpec::Scripted(path) => format!("scripted:{}", path.display()),
            BackendSpec::CacheOnly(dir) => format!("cached:{}", dir.display()),
            BackendSpec::Cached { dir, inner } => {
                format!("cached:{}:{}", dir.display(), inner.spec_string())
            }
        }
    }

    /// Same spec with every path made absolute, so a recorded run can be
    /// replayed from any working directory.
    pub fn absolutized(&self) -> Self {
        match self {
            BackendSpec::Live => BackendSpec::Live,
            BackendSpec::Scripted(path) => BackendSpec::Scripted(absolutize(path)),
            BackendSpec::CacheOnly(dir) => BackendSpec::CacheOnly(absolutize(dir)),
            BackendSpec::Cached { dir, inner } => BackendSpec::Cached {
                dir: absolutize(dir),
                inner: Box::new(inner.absolutized()),
            },
        }
    }

    /// How a recorded run is replayed: caches become replay-only (so a
    /// replay provably makes no live requests), scripts rerun as-is, and an
    /// uncached live run cannot be replayed at all.
    pub fn replay_form(&self) -> Result<Self, CliError> {
        match self {
            BackendSpec::Live => Err(CliError::runtime(anyhow::anyhow!(
                "the recorded run used an uncached live backend; there is nothing to replay \
                 against (rerun it with --backend cached:<dir>:live)"
            ))),
            BackendSpec::Scripted(path) => Ok(BackendSpec::Scripted(path.clone())),
            BackendSpec::CacheOnly(dir) => Ok(BackendSpec::CacheOnly(dir.clone())),
            BackendSpec::Cached { dir, .. } => Ok(BackendSpec::CacheOnly(dir.clone())),
        }
    }
}

pub fn absolutize(path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        std::env::current_dir()
            .map(|cwd| cwd.join(path))
            .unwrap_or_else(|_| path.to_path_buf())
    }
}

/// The constructed backend stack for one run.
pub enum BuiltBackend {
    /// Statistical pipelines run without a backend.
    None,
    Live(LiveBackend),
    Scripted(ScriptedBackend),
    Cached(CachedBackend),
}

impl BuiltBackend {
    pub fn build(spec: &BackendSpec, base_url: &str, model: &str) -> Result<Self, CliError> {
        match spec {
            BackendSpec::Live => Ok(BuiltBackend::Live(LiveBackend::new(base_url, model))),
            BackendSpec::Scripted(path) => ScriptedBackend::load(path)
                .map(BuiltBackend::Scripted)
                .map_err(CliError::runtime),
            BackendSpec::CacheOnly(dir) => {
                Ok(BuiltBackend::Cached(CachedBackend::cache_only(dir.clone())))
            }
            BackendSpec::Cached { dir, inner } => {
                let inner: Box<dyn Backend> = match inner.as_ref() {
                    BackendSpec::Live => Box::new(LiveBackend::new(base_url, model)),
                    BackendSpec::Scripted(path) => {
                        Box::new(ScriptedBackend::load(path).map_err(CliError::runtime)?)
                    }
                    other => {
                        return Err(CliError::usage(format!(
                            "backend spec nests '{}' inside a cache; only live and scripted \
                             backends can be cached",
                            other.spec_string()
                        )))
                    }
                };
                CachedBackend::new(inner, dir.clone())
                    .map(BuiltBackend::Cached)
                    .map_err(CliError::runtime)
            }
        }
    }

    pub fn as_dyn(&self) -> Option<&dyn Backend> {
        match self {
            BuiltBackend::None => None,
            BuiltBackend::Live(b) => Some(b),
            BuiltBackend::Scripted(b) => Some(b),
            BuiltBackend::Cached(b) => Some(b),
        }
    }

    /// Identifier recorded in manifests; "none" for backend-free runs.
    pub fn id(&self) -> String {
        self.as_dyn()
            .map(|b| b.id())
            .unwrap_or_else(|| "none".to_string())
    }

    /// Digests served or stored by a caching backend during this run.
    pub fn cache_digests(&self) -> Vec<String> {
        match self {
            BuiltBackend::Cached(b) => b.used_digests(),
            _ => Vec::new(),
        }
    }
}
