//! The four sequential recommenders behind one policy interface.

mod dqn;
mod ppo;
mod search;

pub use dqn::train_value_agent;
pub use ppo::{actor_critic_gradient_error, train_policy_agent, ActorCritic};
pub use search::{
    estimated_sequences, recommend_exhaustive, recommend_greedy, recommend_greedy_with,
    GreedyOptions,
};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{encode_state, reset, step, EnvConfig, EnvError};
use crate::nn::Mlp;
use crate::skill::{SkillId, SkillMap};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training diverged at step {step}: loss {loss}")]
    Diverged { step: usize, loss: f64 },
    #[error("empty learner pool")]
    NoLearners,
    #[error(transparent)]
    Env(#[from] EnvError),
}

#[derive(Debug, Error)]
pub enum PolicyIoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported policy file version {0}")]
    Version(u32),
}

/// Result of rolling a recommender for one learner.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub courses: Vec<String>,
    pub final_profile: SkillMap,
    /// Marketability of the final profile.
    pub achieved_reward: usize,
    /// Job-similarity evaluations spent selecting candidates (not the
    /// environment's own reward computation). Zero for learned agents.
    pub job_sim_evals: u64,
    /// True when a learned agent's argmax action was infeasible and the
    /// rollout stopped there.
    pub stopped_infeasible: bool,
}

/// Hyperparameters for both learned agents. Defaults are desk-scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub total_steps: usize,
    pub discount: f64,
    pub learning_rate: f64,
    pub hidden: usize,
    pub seed: u64,
    // Value agent.
    pub replay_capacity: usize,
    pub batch_size: usize,
    pub target_sync: usize,
    pub warmup: usize,
    pub train_freq: usize,
    pub eps_start: f64,
    pub eps_end: f64,
    /// Fraction of total steps over which epsilon anneals linearly.
    pub eps_decay_frac: f64,
    // Policy agent.
    pub rollout_len: usize,
    pub clip: f64,
    pub epochs: usize,
    pub minibatch: usize,
    pub gae_lambda: f64,
    pub value_coef: f64,
    pub entropy_coef: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            total_steps: 100_000,
            discount: 0.99,
            learning_rate: 1e-3,
            hidden: 64,
            seed: 0,
            replay_capacity: 10_000,
            batch_size: 64,
            target_sync: 1_000,
            warmup: 500,
            train_freq: 1,
            eps_start: 1.0,
            eps_end: 0.05,
            eps_decay_frac: 0.5,
            rollout_len: 256,
            clip: 0.2,
            epochs: 4,
            minibatch: 64,
            gae_lambda: 0.95,
            value_coef: 0.5,
            entropy_coef: 0.01,
        }
    }
}

/// Learned action-value policy (greedy over Q at evaluation time).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValuePolicy {
    pub skill_universe: Vec<SkillId>,
    pub course_ids: Vec<String>,
    pub net: Mlp,
}

/// Learned stochastic policy evaluated by argmax over action preferences.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicyGradPolicy {
    pub skill_universe: Vec<SkillId>,
    pub course_ids: Vec<String>,
    pub net: ActorCritic,
}

/// Uniform interface over the four recommenders.
#[derive(Debug, Clone)]
pub enum RecommenderPolicy {
    Exhaustive,
    Greedy,
    Value(ValuePolicy),
    PolicyGrad(PolicyGradPolicy),
}

impl RecommenderPolicy {
    pub fn kind(&self) -> &'static str {
        match self {
            RecommenderPolicy::Exhaustive => "exhaustive",
            RecommenderPolicy::Greedy => "greedy",
            RecommenderPolicy::Value(_) => "value-agent",
            RecommenderPolicy::PolicyGrad(_) => "policy-agent",
        }
    }
}

/// Roll a policy through the environment for at most `k` feasible steps.
pub fn policy_recommend(
    policy: &RecommenderPolicy,
    profile: &SkillMap,
    env: &EnvConfig,
    k: usize,
) -> Result<Recommendation, EnvError> {
    match policy {
        RecommenderPolicy::Exhaustive => Ok(recommend_exhaustive(profile, env, k)),
        RecommenderPolicy::Greedy => Ok(recommend_greedy(profile, env, k)),
        RecommenderPolicy::Value(p) => {
            rollout_scores(profile, env, k, &p.skill_universe, &p.course_ids, |x| p.net.forward(x))
        }
        RecommenderPolicy::PolicyGrad(p) => {
            rollout_scores(profile, env, k, &p.skill_universe, &p.course_ids, |x| p.net.logits(x))
        }
    }
}

/// Shared greedy-argmax rollout for learned agents. Course selection costs
/// one forward pass; no job similarity is evaluated per candidate.
fn rollout_scores(
    profile: &SkillMap,
    env: &EnvConfig,
    k: usize,
    universe: &[SkillId],
    course_ids: &[String],
    score: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<Recommendation, EnvError> {
    let mut state = reset(env, profile.clone());
    let mut courses = Vec::new();
    let mut stopped_infeasible = false;

    for _ in 0..k {
        if state.terminated {
            break;
        }
        let x = encode_state(&state.profile, universe)?;
        let scores = score(&x);
        let action = argmax(&scores);
        let id = &course_ids[action];
        let outcome = step(&state, id, env)?;
        if outcome.reward == env.invalid_action_penalty && outcome.done {
            stopped_infeasible = true;
            break;
        }
        courses.push(id.clone());
        state = outcome.next_state;
    }

    let achieved = env.marketability(&state.profile);
    Ok(Recommendation {
        courses,
        final_profile: state.profile,
        achieved_reward: achieved,
        job_sim_evals: 0,
        stopped_infeasible,
    })
}

pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Sorted course ids used as the fixed action ordering of learned agents.
pub(crate) fn action_space(env: &EnvConfig) -> Vec<String> {
    let mut ids: Vec<String> = env.courses.iter().map(|c| c.id.clone()).collect();
    ids.sort();
    ids
}

const POLICY_FILE_VERSION: u32 = 1;

/// On-disk form of a trained policy: version, kind, shapes and row-major
/// parameter values (inside the serialized nets).
#[derive(Debug, Serialize, Deserialize)]
struct PolicyFile {
    version: u32,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<ValuePolicy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    policy_grad: Option<PolicyGradPolicy>,
}

pub fn save_policy(policy: &RecommenderPolicy, path: &Path) -> Result<(), PolicyIoError> {
    let file = match policy {
        RecommenderPolicy::Value(p) => PolicyFile {
            version: POLICY_FILE_VERSION,
            kind: "value-agent".into(),
            value: Some(p.clone()),
            policy_grad: None,
        },
        RecommenderPolicy::PolicyGrad(p) => PolicyFile {
            version: POLICY_FILE_VERSION,
            kind: "policy-agent".into(),
            value: None,
            policy_grad: Some(p.clone()),
        },
        other => PolicyFile {
            version: POLICY_FILE_VERSION,
            kind: other.kind().into(),
            value: None,
            policy_grad: None,
        },
    };
    std::fs::write(path, serde_json::to_string(&file)?)?;
    Ok(())
}

pub fn load_policy(path: &Path) -> Result<RecommenderPolicy, PolicyIoError> {
    let file: PolicyFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if file.version != POLICY_FILE_VERSION {
        return Err(PolicyIoError::Version(file.version));
    }
    Ok(match (file.kind.as_str(), file.value, file.policy_grad) {
        ("value-agent", Some(p), _) => RecommenderPolicy::Value(p),
        ("policy-agent", _, Some(p)) => RecommenderPolicy::PolicyGrad(p),
        ("greedy", _, _) => RecommenderPolicy::Greedy,
        _ => RecommenderPolicy::Exhaustive,
    })
}
