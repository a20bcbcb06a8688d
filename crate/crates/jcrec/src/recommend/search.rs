//! Search-based recommenders: exhaustive sequence enumeration and the
//! stepwise greedy heuristic.

use crate::env::EnvConfig;
use crate::skill::{apply_course, SkillMap};

use super::Recommendation;

/// Upper bound on the number of sequences exhaustive search would visit
/// from this profile. Used by callers to refuse hopeless configurations.
pub fn estimated_sequences(env: &EnvConfig, profile: &SkillMap, k: usize) -> f64 {
    let width = env.enrollable(profile).len().max(1) as f64;
    width.powi(k as i32)
}

/// Enumerate every feasible course sequence of length <= `k` and return one
/// maximizing the final marketability. Infeasible actions never appear:
/// only enrollable courses are expanded at each node, so the search is
/// pruned to feasible prefixes. Ties go to the lexicographically first
/// sequence of course ids.
pub fn recommend_exhaustive(profile: &SkillMap, env: &EnvConfig, k: usize) -> Recommendation {
    assert!(k >= 1);
    let mut best_reward = env.marketability(profile);
    let mut best_seq: Vec<String> = Vec::new();
    let mut best_profile = profile.clone();
    let mut evals: u64 = 0;
    let mut stack: Vec<String> = Vec::new();

    fn dfs(
        profile: &SkillMap,
        env: &EnvConfig,
        depth_left: usize,
        stack: &mut Vec<String>,
        best_reward: &mut usize,
        best_seq: &mut Vec<String>,
        best_profile: &mut SkillMap,
        evals: &mut u64,
    ) {
        let enrollable = env.enrollable(profile);
        if depth_left == 0 || enrollable.is_empty() {
            *evals += env.jobs.len() as u64;
            let reward = env.marketability(profile);
            if reward > *best_reward {
                *best_reward = reward;
                *best_seq = stack.clone();
                *best_profile = profile.clone();
            }
            return;
        }
        for id in enrollable {
            let course = env.course(id).expect("enrollable id comes from the course list");
            let next = apply_course(profile, course);
            stack.push(id.to_owned());
            dfs(&next, env, depth_left - 1, stack, best_reward, best_seq, best_profile, evals);
            stack.pop();
        }
    }

    dfs(
        profile,
        env,
        k,
        &mut stack,
        &mut best_reward,
        &mut best_seq,
        &mut best_profile,
        &mut evals,
    );

    Recommendation {
        courses: best_seq,
        final_profile: best_profile,
        achieved_reward: best_reward,
        job_sim_evals: evals,
        stopped_infeasible: false,
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyOptions {
    /// Stop as soon as no course strictly increases marketability instead
    /// of picking the argmax anyway.
    pub stop_on_no_improvement: bool,
}

/// At each of up to `k` steps, pick the enrollable course maximizing the
/// immediate marketability of the updated profile (lowest course id on
/// ties), apply it, and repeat. Stops early only when nothing is
/// enrollable.
pub fn recommend_greedy(profile: &SkillMap, env: &EnvConfig, k: usize) -> Recommendation {
    recommend_greedy_with(profile, env, k, GreedyOptions::default())
}

pub fn recommend_greedy_with(
    profile: &SkillMap,
    env: &EnvConfig,
    k: usize,
    opts: GreedyOptions,
) -> Recommendation {
    assert!(k >= 1);
    let mut current = profile.clone();
    let mut sequence = Vec::new();
    let mut evals: u64 = 0;

    for _ in 0..k {
        let enrollable = env.enrollable(&current);
        if enrollable.is_empty() {
            break;
        }
        let mut best: Option<(usize, &str, SkillMap)> = None;
        for id in enrollable {
            let course = env.course(id).expect("enrollable id comes from the course list");
            let candidate = apply_course(&current, course);
            evals += env.jobs.len() as u64;
            let reward = env.marketability(&candidate);
            // Ids arrive in ascending order, so strict > keeps the lowest.
            if best.as_ref().is_none_or(|(r, _, _)| reward > *r) {
                best = Some((reward, id, candidate));
            }
        }
        let (reward, id, next) = best.expect("non-empty enrollable set");
        if opts.stop_on_no_improvement && reward <= env.marketability(&current) {
            break;
        }
        sequence.push(id.to_owned());
        current = next;
    }

    let achieved = env.marketability(&current);
    Recommendation {
        courses: sequence,
        final_profile: current,
        achieved_reward: achieved,
        job_sim_evals: evals,
        stopped_infeasible: false,
    }
}
