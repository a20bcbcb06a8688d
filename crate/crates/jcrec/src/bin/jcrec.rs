//! Command-line front end: dataset generation and validation, the
//! extraction pipeline, agent training and the experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jcrec::data::{
    filter_short_documents, generate_synthetic, load_bundle, save_bundle, DatasetBundle,
    SyntheticConfig,
};
use jcrec::env::EnvConfig;
use jcrec::eval::{
    explain_recommendation, results_csv, results_text, run_experiment, ExperimentConfig,
    SystemClock, ALGORITHMS,
};
use jcrec::recommend::{
    load_policy, policy_recommend, save_policy, train_policy_agent, train_value_agent,
    RecommenderPolicy, TrainConfig,
};
use jcrec::sem::clients::{KeywordExtractor, RatioMatcher, RemoteClient};
use jcrec::sem::embed::TrigramEmbedder;
use jcrec::sem::stats::extraction_stats;
use jcrec::sem::{DocumentExtraction, RawDocument, SemPipeline, DEFAULT_DEMONSTRATIONS};
use jcrec::skill::Thresholds;

#[derive(Parser)]
#[command(name = "jcrec", about = "Job-market-aware course recommendation toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BundleArg {
    /// Directory holding taxonomy.json, courses.json, jobs.json, learners.json.
    #[arg(long)]
    bundle: PathBuf,
}

#[derive(Args)]
struct ClientArgs {
    /// Extraction/matching backend.
    #[arg(long, default_value = "mock", value_parser = ["mock", "remote"])]
    client: String,
    /// Base URL of the remote service (required with --client remote).
    #[arg(long)]
    endpoint: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset bundle.
    Generate {
        /// TOML file with generator settings; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the generator seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for the bundle.
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a dataset bundle and report every violation.
    Validate {
        #[command(flatten)]
        bundle: BundleArg,
    },
    /// Run skill extraction and matching over raw documents.
    Extract {
        #[command(flatten)]
        bundle: BundleArg,
        /// JSON array of raw documents ({id, kind, text}).
        #[arg(long)]
        docs: PathBuf,
        #[command(flatten)]
        client: ClientArgs,
        /// Write extraction results as JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-kind corpus statistics over extraction results.
    Stats {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long)]
        docs: PathBuf,
        #[command(flatten)]
        client: ClientArgs,
    },
    /// Train a learned agent and save its policy.
    Train {
        #[command(flatten)]
        bundle: BundleArg,
        #[arg(long, value_parser = ["value-agent", "policy-agent"])]
        algorithm: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total environment steps.
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Episode horizon (courses per episode).
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Output policy file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Recommend a course sequence for one learner.
    Recommend {
        #[command(flatten)]
        bundle: BundleArg,
        /// Learner id from learners.json.
        #[arg(long)]
        learner: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "greedy", value_parser = ALGORITHMS)]
        algorithm: String,
        /// Trained policy file (required for learned algorithms).
        #[arg(long)]
        policy: Option<PathBuf>,
    },
    /// Compare recommenders across plan lengths and write the results.
    Evaluate {
        #[command(flatten)]
        bundle: BundleArg,
        /// Comma-separated plan lengths.
        #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
        k: Vec<usize>,
        /// Comma-separated algorithms to include.
        #[arg(long, value_delimiter = ',')]
        algorithms: Option<Vec<String>>,
        /// Comma-separated training seeds for the learned agents.
        #[arg(long, default_value = "0,1,2", value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Total training steps per learned agent.
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Output directory for results.csv and results.txt.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Generate { config, seed, out } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    toml::from_str::<SyntheticConfig>(&text)
                        .map_err(|e| format!("{}: {e}", path.display()))?
                }
                None => SyntheticConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let bundle = generate_synthetic(&cfg);
            save_bundle(&bundle, &out).map_err(|e| e.to_string())?;
            println!(
                "generated bundle: {} skills, {} courses, {} jobs, {} learners -> {}",
                bundle.taxonomy.len(),
                bundle.courses.len(),
                bundle.jobs.len(),
                bundle.learners.len(),
                out.display()
            );
            Ok(())
        }
        Command::Validate { bundle } => {
            let loaded = load_bundle(&bundle.bundle).map_err(|e| e.to_string())?;
            println!(
                "ok: {} skills, {} courses, {} jobs, {} learners",
                loaded.taxonomy.len(),
                loaded.courses.len(),
                loaded.jobs.len(),
                loaded.learners.len()
            );
            Ok(())
        }
        Command::Extract { bundle, docs, client, out } => {
            let bundle = load_bundle(&bundle.bundle).map_err(|e| e.to_string())?;
            let results = run_extraction(&bundle, &docs, &client)?;
            let json = serde_json::to_string_pretty(&results).expect("serializable");
            match out {
                Some(path) => {
                    std::fs::write(&path, json).map_err(|e| format!("{}: {e}", path.display()))?;
                    println!("wrote {} extractions -> {}", results.len(), path.display());
                }
                None => println!("{json}"),
            }
            Ok(())
        }
        Command::Stats { bundle, docs, client } => {
            let bundle = load_bundle(&bundle.bundle).map_err(|e| e.to_string())?;
            let results = run_extraction(&bundle, &docs, &client)?;
            let stats = extraction_stats(&results);
            println!("{}", serde_json::to_string_pretty(&stats).expect("serializable"));
            Ok(())
        }
        Command::Train { bundle, algorithm, seed, steps, k, out } => {
            let bundle = load_bundle(&bundle.bundle).map_err(|e| e.to_string())?;
            let env = make_env(&bundle, k);
            let cfg = TrainConfig { seed, total_steps: steps, ..TrainConfig::default() };
            let policy = match algorithm.as_str() {
                "value-agent" => train_value_agent(&env, &bundle.learners, &cfg),
                _ => train_policy_agent(&env, &bundle.learners, &cfg),
            }
            .map_err(|e| e.to_string())?;
            save_policy(&policy, &out).map_err(|e| e.to_string())?;
            println!("trained {algorithm} ({steps} steps, seed {seed}) -> {}", out.display());
            Ok(())
        }
        Command::Recommend { bundle, learner, k, algorithm, policy } => {
            let bundle = load_bundle(&bundle.bundle).map_err(|e| e.to_string())?;
            let profile = bundle
                .learners
                .iter()
                .find(|l| l.id == learner)
                .ok_or_else(|| format!("unknown learner id '{learner}'"))?
                .skills
                .clone();
            let env = make_env(&bundle, k);
            let policy = match algorithm.as_str() {
                "exhaustive" => RecommenderPolicy::Exhaustive,
                "greedy" => RecommenderPolicy::Greedy,
                learned => {
                    let path = policy
                        .ok_or_else(|| format!("--policy is required for algorithm '{learned}'"))?;
                    load_policy(&path).map_err(|e| e.to_string())?
                }
            };
            let rec = policy_recommend(&policy, &profile, &env, k).map_err(|e| e.to_string())?;
            println!("learner {learner} (k={k}, {algorithm})");
            println!("baseline applicable jobs: {}", env.marketability(&profile));
            if rec.courses.is_empty() {
                println!("no enrollable courses improve this profile");
            }
            for step in explain_recommendation(&profile, &rec, &env) {
                let gains: Vec<String> = step
                    .skills_gained
                    .iter()
                    .map(|(s, l)| format!("{s} -> {l}"))
                    .collect();
                println!(
                    "take {}: gains [{}], unlocks jobs [{}], applicable jobs now {}",
                    step.course,
                    gains.join(", "),
                    step.jobs_unlocked.join(", "),
                    step.marketability_after
                );
            }
            if rec.stopped_infeasible {
                println!("note: agent proposed an infeasible course; plan truncated");
            }
            println!("final applicable jobs: {}", rec.achieved_reward);
            Ok(())
        }
        Command::Evaluate { bundle, k, algorithms, seeds, steps, out } => {
            let bundle = load_bundle(&bundle.bundle).map_err(|e| e.to_string())?;
            let cfg = ExperimentConfig {
                ks: k,
                algorithms: algorithms
                    .unwrap_or_else(|| ALGORITHMS.iter().map(|s| s.to_string()).collect()),
                seeds,
                train: TrainConfig { total_steps: steps, ..TrainConfig::default() },
                ..ExperimentConfig::default()
            };
            let report = run_experiment(&bundle, &cfg, &SystemClock::new())
                .map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            let csv_path = out.join("results.csv");
            let txt_path = out.join("results.txt");
            std::fs::write(&csv_path, results_csv(&report))
                .map_err(|e| format!("{}: {e}", csv_path.display()))?;
            std::fs::write(&txt_path, results_text(&report))
                .map_err(|e| format!("{}: {e}", txt_path.display()))?;
            print!("{}", results_text(&report));
            println!("wrote {} and {}", csv_path.display(), txt_path.display());
            Ok(())
        }
    }
}

fn make_env(bundle: &DatasetBundle, horizon: usize) -> EnvConfig {
    EnvConfig::new(
        bundle.courses.clone(),
        bundle.jobs.clone(),
        Thresholds::default(),
        horizon.max(1),
        bundle.skill_universe(),
    )
}

fn run_extraction(
    bundle: &DatasetBundle,
    docs: &PathBuf,
    client: &ClientArgs,
) -> Result<Vec<DocumentExtraction>, String> {
    let text = std::fs::read_to_string(docs).map_err(|e| format!("{}: {e}", docs.display()))?;
    let raw: Vec<RawDocument> =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", docs.display()))?;
    let raw = filter_short_documents(raw);

    let embedder = TrigramEmbedder::default();
    let keyword = KeywordExtractor::from_taxonomy(&bundle.taxonomy);
    let ratio = RatioMatcher::default();
    let remote = client.endpoint.as_ref().map(RemoteClient::new);

    let pipeline = match client.client.as_str() {
        "remote" => {
            let remote = remote
                .as_ref()
                .ok_or_else(|| "--endpoint is required with --client remote".to_string())?;
            SemPipeline {
                taxonomy: &bundle.taxonomy,
                extractor: remote,
                matcher: remote,
                embedder: remote,
                demonstrations: DEFAULT_DEMONSTRATIONS,
            }
        }
        _ => SemPipeline {
            taxonomy: &bundle.taxonomy,
            extractor: &keyword,
            matcher: &ratio,
            embedder: &embedder,
            demonstrations: DEFAULT_DEMONSTRATIONS,
        },
    };

    let mut results = Vec::new();
    for doc in &raw {
        results.push(pipeline.process_document(doc).map_err(|e| format!("doc {}: {e}", doc.id))?);
    }
    Ok(results)
}
