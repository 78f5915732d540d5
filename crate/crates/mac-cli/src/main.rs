use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mac_cli::{
    cmd_datasets, cmd_discover, cmd_eval, cmd_replay, DiscoverRequest, Pipeline, SearchMethodArg,
    UnresolvedPolicyArg, EXIT_OK,
};

/// Multi-agent causal discovery over tabular datasets.
#[derive(Parser)]
#[command(name = "mac", version, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a discovery pipeline and write a replayable run directory.
    Discover(Box<DiscoverArgs>),
    /// Score an estimated adjacency CSV against a ground-truth CSV.
    Eval(EvalArgs),
    /// Re-run a recorded run from its cache and compare the outputs.
    Replay {
        /// A directory previously written by `mac discover`.
        run_dir: PathBuf,
    },
    /// List the built-in dataset descriptors.
    Datasets,
}

#[derive(Args)]
struct DiscoverArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Which pipeline to run.
    #[arg(long, value_enum)]
    pipeline: Option<Pipeline>,
    /// Built-in dataset id (see `mac datasets`).
    #[arg(long)]
    dataset: Option<String>,
    /// Dataset descriptor TOML for custom data (alternative to --dataset).
    #[arg(long)]
    descriptor: Option<PathBuf>,
    /// Tabular data CSV; headers must match the descriptor's variables.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Backend spec: live, scripted:<file.toml>, cached:<dir>,
    /// cached:<dir>:live, or cached:<dir>:scripted:<file.toml>.
    /// Live requests read the API key from the MAC_API_KEY environment
    /// variable.
    #[arg(long)]
    backend: Option<String>,
    /// Output directory for the run (default: runs/<dataset>_<pipeline>_<stamp>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base URL for the live backend's chat-completions API.
    #[arg(long)]
    base_url: Option<String>,
    /// Review each steering message interactively before it is sent.
    #[arg(long)]
    interactive: bool,
    /// In the meta_coding pipeline, also pin debated edges as hard
    /// constraints for the statistical stage.
    #[arg(long)]
    strict_constraints: bool,
    /// Model name for live requests.
    #[arg(long)]
    model: Option<String>,
    /// Sampling temperature for live requests.
    #[arg(long)]
    temperature: Option<f64>,
    /// Date substituted into the agent system prompts.
    #[arg(long)]
    prompt_date: Option<String>,
    /// Rows shown to the plan debaters as a data sample.
    #[arg(long)]
    sample_rows: Option<usize>,
    /// Significance level for conditional independence tests.
    #[arg(long)]
    alpha: Option<f64>,
    /// |weight| above which a LiNGAM coefficient counts as an edge.
    #[arg(long)]
    edge_threshold: Option<f64>,
    /// Seed recorded with the run.
    #[arg(long)]
    seed: Option<u64>,
    /// Exact-search strategy.
    #[arg(long, value_enum)]
    search_method: Option<SearchMethodArg>,
    /// Maximum judge turns per debate.
    #[arg(long)]
    max_rounds: Option<usize>,
    /// What a debate that never resolves a question decides.
    #[arg(long, value_enum)]
    unresolved_policy: Option<UnresolvedPolicyArg>,
}

#[derive(Args)]
struct EvalArgs {
    /// Estimated adjacency CSV (e.g. a run's adjacency.csv).
    #[arg(long)]
    estimated: PathBuf,
    /// Ground-truth adjacency CSV with the same labels.
    #[arg(long)]
    truth: PathBuf,
    /// Also write the metrics CSV to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<Box<DiscoverArgs>> for DiscoverRequest {
    fn from(args: Box<DiscoverArgs>) -> Self {
        DiscoverRequest {
            config: args.config,
            pipeline: args.pipeline,
            dataset: args.dataset,
            descriptor: args.descriptor,
            csv: args.csv,
            backend: args.backend,
            out: args.out,
            base_url: args.base_url,
            interactive: args.interactive,
            strict_constraints: args.strict_constraints,
            model: args.model,
            temperature: args.temperature,
            prompt_date: args.prompt_date,
            sample_rows: args.sample_rows,
            alpha: args.alpha,
            edge_threshold: args.edge_threshold,
            seed: args.seed,
            search_method: args.search_method.map(Into::into),
            max_rounds: args.max_rounds,
            unresolved_policy: args.unresolved_policy.map(Into::into),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Discover(args) => cmd_discover(DiscoverRequest::from(args)).map(|_| ()),
        Command::Eval(args) => {
            cmd_eval(&args.estimated, &args.truth, args.out.as_deref()).map(|_| ())
        }
        Command::Replay { run_dir } => cmd_replay(&run_dir),
        Command::Datasets => cmd_datasets(),
    };
    match outcome {
        Ok(()) => std::process::exit(EXIT_OK),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
