//! Experiment runner: compare recommenders over a learner pool across
//! plan lengths, with reproducible CSV output and a human-readable report.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::time::Instant;

use thiserror::Error;

use crate::data::DatasetBundle;
use crate::env::{EnvConfig, EnvError};
use crate::recommend::{
    estimated_sequences, policy_recommend, train_policy_agent, train_value_agent, Recommendation,
    RecommenderPolicy, TrainConfig, TrainError,
};
use crate::skill::{user_job_sim, SkillMap, Thresholds};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("no learners to evaluate")]
    NoLearners,
    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),
}

/// Monotonic time source, injectable so reports can be made reproducible
/// in tests.
pub trait Clock {
    fn now_nanos(&self) -> u64;
}

pub struct SystemClock {
    epoch: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        SystemClock { epoch: Instant::now() }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now_nanos(&self) -> u64 {
        self.epoch.elapsed().as_nanos() as u64
    }
}

/// Deterministic clock advancing a fixed tick per reading.
pub struct FakeClock {
    tick: u64,
    reading: Cell<u64>,
}

impl FakeClock {
    pub fn new(tick: u64) -> Self {
        FakeClock { tick, reading: Cell::new(0) }
    }
}

impl Clock for FakeClock {
    fn now_nanos(&self) -> u64 {
        let t = self.reading.get();
        self.reading.set(t + self.tick);
        t
    }
}

pub const ALGORITHMS: [&str; 4] = ["exhaustive", "greedy", "value-agent", "policy-agent"];

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Plan lengths to evaluate; k = 0 (no recommendation) is always
    /// reported as the baseline row.
    pub ks: Vec<usize>,
    pub algorithms: Vec<String>,
    /// Seeds tried for each learned agent; the best-performing seed's
    /// policy is the one reported.
    pub seeds: Vec<u64>,
    pub train: TrainConfig,
    pub thresholds: Thresholds,
    /// Exhaustive search is skipped (row marked NA) when the estimated
    /// sequence count for a learner exceeds this.
    pub exhaustive_guard: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ks: vec![1, 2, 3],
            algorithms: ALGORITHMS.iter().map(|s| s.to_string()).collect(),
            seeds: vec![0, 1, 2],
            train: TrainConfig::default(),
            thresholds: Thresholds::default(),
            exhaustive_guard: 1e7,
        }
    }
}

/// One cell of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub k: usize,
    /// Mean achieved marketability over evaluated learners; None when the
    /// run was skipped by the exhaustive guard.
    pub mean_reward: Option<f64>,
    /// Total recommendation time (training excluded).
    pub time_ns: u64,
    pub job_sim_evals: u64,
}

#[derive(Debug)]
pub struct ExperimentReport {
    pub rows: Vec<ResultRow>,
    pub n_learners: usize,
}

fn make_env(bundle: &DatasetBundle, thresholds: Thresholds, horizon: usize) -> EnvConfig {
    EnvConfig::new(
        bundle.courses.clone(),
        bundle.jobs.clone(),
        thresholds,
        horizon.max(1),
        bundle.skill_universe(),
    )
}

/// Train a learned agent with each seed and keep the policy whose greedy
/// rollout earns the highest total reward at the longest plan length.
fn best_of_seeds(
    kind: &str,
    env: &EnvConfig,
    bundle: &DatasetBundle,
    cfg: &ExperimentConfig,
    max_k: usize,
) -> Result<RecommenderPolicy, EvalError> {
    let mut best: Option<(usize, RecommenderPolicy)> = None;
    for &seed in &cfg.seeds {
        let train = TrainConfig { seed, ..cfg.train.clone() };
        let policy = match kind {
            "value-agent" => train_value_agent(env, &bundle.learners, &train)?,
            "policy-agent" => train_policy_agent(env, &bundle.learners, &train)?,
            other => return Err(EvalError::UnknownAlgorithm(other.to_string())),
        };
        let mut total = 0;
        for learner in &bundle.learners {
            total += policy_recommend(&policy, &learner.skills, env, max_k)?.achieved_reward;
        }
        if best.as_ref().is_none_or(|(r, _)| total > *r) {
            best = Some((total, policy));
        }
    }
    Ok(best.expect("at least one seed").1)
}

/// Run the full comparison. Training time is not charged to the rows; each
/// row's time is the summed per-learner recommendation time.
pub fn run_experiment(
    bundle: &DatasetBundle,
    cfg: &ExperimentConfig,
    clock: &dyn Clock,
) -> Result<ExperimentReport, EvalError> {
    if bundle.learners.is_empty() {
        return Err(EvalError::NoLearners);
    }
    for algo in &cfg.algorithms {
        if !ALGORITHMS.contains(&algo.as_str()) {
            return Err(EvalError::UnknownAlgorithm(algo.clone()));
        }
    }
    let max_k = cfg.ks.iter().copied().max().unwrap_or(1).max(1);
    let env = make_env(bundle, cfg.thresholds, max_k);
    let n = bundle.learners.len();

    // The k = 0 baseline is algorithm-independent by construction.
    let baseline: usize = bundle.learners.iter().map(|l| env.marketability(&l.skills)).sum();
    let mut rows = Vec::new();
    for algo in &cfg.algorithms {
        rows.push(ResultRow {
            algorithm: algo.clone(),
            k: 0,
            mean_reward: Some(baseline as f64 / n as f64),
            time_ns: 0,
            job_sim_evals: 0,
        });
    }

    for algo in &cfg.algorithms {
        let policy = match algo.as_str() {
            "exhaustive" => RecommenderPolicy::Exhaustive,
            "greedy" => RecommenderPolicy::Greedy,
            learned => best_of_seeds(learned, &env, bundle, cfg, max_k)?,
        };
        for &k in &cfg.ks {
            if k == 0 {
                continue;
            }
            let guard_tripped = matches!(policy, RecommenderPolicy::Exhaustive)
                && bundle
                    .learners
                    .iter()
                    .any(|l| estimated_sequences(&env, &l.skills, k) > cfg.exhaustive_guard);
            if guard_tripped {
                rows.push(ResultRow {
                    algorithm: algo.clone(),
                    k,
                    mean_reward: None,
                    time_ns: 0,
                    job_sim_evals: 0,
                });
                continue;
            }
            let mut total_reward = 0usize;
            let mut total_evals = 0u64;
            let start = clock.now_nanos();
            for learner in &bundle.learners {
                let rec = policy_recommend(&policy, &learner.skills, &env, k)?;
                total_reward += rec.achieved_reward;
                total_evals += rec.job_sim_evals;
            }
            let time_ns = clock.now_nanos().saturating_sub(start);
            rows.push(ResultRow {
                algorithm: algo.clone(),
                k,
                mean_reward: Some(total_reward as f64 / n as f64),
                time_ns,
                job_sim_evals: total_evals,
            });
        }
    }
    rows.sort_by(|a, b| (&a.algorithm, a.k).cmp(&(&b.algorithm, b.k)));
    Ok(ExperimentReport { rows, n_learners: n })
}

/// Machine-readable results: rewards only, so reruns of a deterministic
/// experiment produce byte-identical files. Timings live in the text
/// report instead.
pub fn results_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("algorithm,k,mean_reward\n");
    for row in &report.rows {
        let reward = match row.mean_reward {
            Some(r) => format!("{r:.4}"),
            None => "NA".into(),
        };
        out.push_str(&format!("{},{},{}\n", row.algorithm, row.k, reward));
    }
    out
}

/// Aligned human-readable table including wall-clock timings.
pub fn results_text(report: &ExperimentReport) -> String {
    let mut out = format!("learners evaluated: {}\n\n", report.n_learners);
    out.push_str(&format!(
        "{:<14} {:>3} {:>12} {:>12} {:>14}\n",
        "algorithm", "k", "mean_reward", "time_ms", "job_sim_evals"
    ));
    for row in &report.rows {
        let reward = match row.mean_reward {
            Some(r) => format!("{r:.4}"),
            None => "NA".into(),
        };
        out.push_str(&format!(
            "{:<14} {:>3} {:>12} {:>12.3} {:>14}\n",
            row.algorithm,
            row.k,
            reward,
            row.time_ns as f64 / 1e6,
            row.job_sim_evals
        ));
    }
    out
}

/// Why each recommended course was worth taking.
#[derive(Debug, Clone, PartialEq)]
pub struct StepExplanation {
    pub course: String,
    /// Skills whose level rose, with the new level.
    pub skills_gained: Vec<(String, u8)>,
    /// Jobs that became applicable at this step.
    pub jobs_unlocked: Vec<String>,
    pub marketability_after: usize,
}

/// Replay a recommendation step by step and report what changed.
pub fn explain_recommendation(
    profile: &SkillMap,
    rec: &Recommendation,
    env: &EnvConfig,
) -> Vec<StepExplanation> {
    let mut current = profile.clone();
    let mut applicable: BTreeSet<String> = env
        .jobs
        .iter()
        .filter(|j| user_job_sim(&current, j) >= env.thresholds.t_uj)
        .map(|j| j.id.clone())
        .collect();
    let mut steps = Vec::new();
    for id in &rec.courses {
        let course = env.course(id).expect("recommended course exists");
        let next = crate::skill::apply_course(&current, course);
        let skills_gained = next
            .iter()
            .filter(|(s, l)| current.level(s) < l.get())
            .map(|(s, l)| (s.to_string(), l.get()))
            .collect();
        let now_applicable: BTreeSet<String> = env
            .jobs
            .iter()
            .filter(|j| user_job_sim(&next, j) >= env.thresholds.t_uj)
            .map(|j| j.id.clone())
            .collect();
        let jobs_unlocked = now_applicable.difference(&applicable).cloned().collect();
        steps.push(StepExplanation {
            course: id.clone(),
            skills_gained,
            jobs_unlocked,
            marketability_after: now_applicable.len(),
        });
        applicable = now_applicable;
        current = next;
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_synthetic, SyntheticConfig};
    use crate::skill::{CourseRecord, JobRecord};

    fn sm(pairs: &[(&str, u8)]) -> SkillMap {
        SkillMap::from_pairs(pairs.iter().map(|&(s, l)| (s, l))).unwrap()
    }

    fn small_bundle() -> DatasetBundle {
        generate_synthetic(&SyntheticConfig {
            seed: 7,
            skills: 6,
            courses: 5,
            jobs: 6,
            learners: 4,
            ..SyntheticConfig::default()
        })
    }

    fn search_only(ks: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            ks,
            algorithms: vec!["exhaustive".into(), "greedy".into()],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn baseline_row_is_shared_across_algorithms() {
        let report =
            run_experiment(&small_bundle(), &search_only(vec![1, 2]), &FakeClock::new(1)).unwrap();
        let baselines: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| r.k == 0)
            .map(|r| r.mean_reward.unwrap())
            .collect();
        assert_eq!(baselines.len(), 2);
        assert_eq!(baselines[0], baselines[1]);
    }

    #[test]
    fn exhaustive_dominates_greedy_in_the_table() {
        let report =
            run_experiment(&small_bundle(), &search_only(vec![1, 2, 3]), &FakeClock::new(1))
                .unwrap();
        for k in [1, 2, 3] {
            let get = |algo: &str| {
                report
                    .rows
                    .iter()
                    .find(|r| r.algorithm == algo && r.k == k)
                    .and_then(|r| r.mean_reward)
                    .unwrap()
            };
            assert!(get("exhaustive") >= get("greedy"), "k={k}");
        }
    }

    #[test]
    fn guard_marks_exhaustive_na() {
        let mut cfg = search_only(vec![3]);
        cfg.exhaustive_guard = 1.0;
        let report = run_experiment(&small_bundle(), &cfg, &FakeClock::new(1)).unwrap();
        let ex = report.rows.iter().find(|r| r.algorithm == "exhaustive" && r.k == 3).unwrap();
        assert_eq!(ex.mean_reward, None);
        let g = report.rows.iter().find(|r| r.algorithm == "greedy" && r.k == 3).unwrap();
        assert!(g.mean_reward.is_some());
    }

    #[test]
    fn csv_is_deterministic_and_reward_only() {
        let bundle = small_bundle();
        let cfg = search_only(vec![1, 2]);
        let a = results_csv(&run_experiment(&bundle, &cfg, &FakeClock::new(3)).unwrap());
        let b = results_csv(&run_experiment(&bundle, &cfg, &SystemClock::new()).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("algorithm,k,mean_reward\n"));
        assert!(!a.contains("time"));
    }

    #[test]
    fn unknown_algorithm_is_rejected() {
        let mut cfg = search_only(vec![1]);
        cfg.algorithms.push("oracle".into());
        assert!(matches!(
            run_experiment(&small_bundle(), &cfg, &FakeClock::new(1)),
            Err(EvalError::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn explanation_tracks_gains_and_unlocks() {
        let courses = vec![
            CourseRecord { id: "A".into(), required: SkillMap::new(), provided: sm(&[("x", 3)]) },
            CourseRecord { id: "B".into(), required: SkillMap::new(), provided: sm(&[("y", 2)]) },
        ];
        let jobs = vec![
            JobRecord { id: "jx".into(), required: sm(&[("x", 3)]) },
            JobRecord { id: "jy".into(), required: sm(&[("y", 2)]) },
        ];
        let env = EnvConfig::new(
            courses,
            jobs,
            Thresholds::default(),
            2,
            vec!["x".into(), "y".into()],
        );
        let profile = SkillMap::new();
        let rec = crate::recommend::recommend_exhaustive(&profile, &env, 2);
        let steps = explain_recommendation(&profile, &rec, &env);
        assert_eq!(steps.len(), 2);
        let all_unlocked: Vec<&String> =
            steps.iter().flat_map(|s| s.jobs_unlocked.iter()).collect();
        assert_eq!(all_unlocked.len(), 2);
        assert_eq!(steps.last().unwrap().marketability_after, 2);
        assert!(steps.iter().all(|s| !s.skills_gained.is_empty()));
    }

    #[test]
    fn fake_clock_times_are_reproducible() {
        let bundle = small_bundle();
        let cfg = search_only(vec![1]);
        let a = run_experiment(&bundle, &cfg, &FakeClock::new(5)).unwrap();
        let b = run_experiment(&bundle, &cfg, &FakeClock::new(5)).unwrap();
        let times_a: Vec<u64> = a.rows.iter().map(|r| r.time_ns).collect();
        let times_b: Vec<u64> = b.rows.iter().map(|r| r.time_ns).collect();
        assert_eq!(times_a, times_b);
    }
}
