//! Command-line front end for multi-agent causal discovery: runs the
//! debate and statistical pipelines on tabular datasets, persists every
//! run as a replayable directory, and scores results against ground truth.

pub mod commands;
pub mod error;
pub mod moderator;
pub mod runcfg;
pub mod spec;

pub use commands::{cmd_datasets, cmd_discover, cmd_eval, cmd_replay, DiscoverOutcome};
pub use error::{CliError, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE};
pub use moderator::StdinModerator;
pub use runcfg::{
    resolve, DiscoverRequest, FileConfig, ResolvedDiscover, RunRecord, RUN_RECORD_FILE,
};
pub use spec::{BackendSpec, BuiltBackend, Pipeline, SearchMethodArg, UnresolvedPolicyArg};
