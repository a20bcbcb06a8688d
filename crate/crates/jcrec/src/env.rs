//! Episodic MDP over skill profiles.
//!
//! States are learner skill maps, actions are courses, transitions are the
//! deterministic max-merge profile update, and the reward is marketability:
//! the number of jobs the updated profile can apply to. Recommending a
//! course outside the enrollable set ends the episode with a penalty.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::skill::{
    apply_course, enrollable_courses, marketability, user_course_rel, CourseRecord, JobRecord,
    SkillId, SkillMap, Thresholds, MAX_LEVEL,
};

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("unknown course id '{0}'")]
    UnknownCourse(String),
    #[error("step called on a terminated episode")]
    EpisodeTerminated,
    #[error("profile skill '{0}' is not in the skill universe")]
    UnknownSkill(String),
}

/// Immutable environment definition shared by every episode.
#[derive(Debug, Clone)]
pub struct EnvConfig {
    pub courses: Vec<CourseRecord>,
    pub jobs: Vec<JobRecord>,
    pub thresholds: Thresholds,
    /// Maximum number of courses per episode.
    pub horizon: usize,
    pub invalid_action_penalty: f64,
    /// Emit the marketability reward only on the final step of an episode
    /// instead of after every feasible step.
    pub terminal_reward_only: bool,
    /// Fixed skill ordering used for state encoding.
    pub skill_universe: Vec<SkillId>,
}

impl EnvConfig {
    pub fn new(
        courses: Vec<CourseRecord>,
        jobs: Vec<JobRecord>,
        thresholds: Thresholds,
        horizon: usize,
        skill_universe: Vec<SkillId>,
    ) -> Self {
        assert!(horizon >= 1, "horizon must be >= 1");
        assert!(!courses.is_empty() && !jobs.is_empty());
        EnvConfig {
            courses,
            jobs,
            thresholds,
            horizon,
            invalid_action_penalty: -1.0,
            terminal_reward_only: false,
            skill_universe,
        }
    }

    pub fn course(&self, id: &str) -> Option<&CourseRecord> {
        self.courses.iter().find(|c| c.id == id)
    }

    /// Ids of courses currently enrollable from `profile`.
    pub fn enrollable(&self, profile: &SkillMap) -> Vec<&str> {
        let set = enrollable_courses(profile, &self.courses, self.thresholds.t_uc);
        set.into_iter().collect()
    }

    pub fn marketability(&self, profile: &SkillMap) -> usize {
        marketability(profile, &self.jobs, self.thresholds.t_uj)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvState {
    pub profile: SkillMap,
    pub steps_taken: usize,
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub next_state: EnvState,
    pub reward: f64,
    pub done: bool,
}

/// Start a new episode from a learner profile.
pub fn reset(_config: &EnvConfig, initial_profile: SkillMap) -> EnvState {
    EnvState { profile: initial_profile, steps_taken: 0, terminated: false }
}

/// Advance one step by recommending the course with id `action`.
///
/// An enrollable course updates the profile and yields the new
/// marketability as reward; a known but non-enrollable course yields the
/// penalty and terminates the episode with the profile unchanged.
pub fn step(state: &EnvState, action: &str, config: &EnvConfig) -> Result<StepOutcome, EnvError> {
    if state.terminated {
        return Err(EnvError::EpisodeTerminated);
    }
    let course = config
        .course(action)
        .ok_or_else(|| EnvError::UnknownCourse(action.to_owned()))?;

    if user_course_rel(&state.profile, course) < config.thresholds.t_uc {
        let next_state = EnvState {
            profile: state.profile.clone(),
            steps_taken: state.steps_taken,
            terminated: true,
        };
        return Ok(StepOutcome {
            next_state,
            reward: config.invalid_action_penalty,
            done: true,
        });
    }

    let profile = apply_course(&state.profile, course);
    let steps_taken = state.steps_taken + 1;
    let done = steps_taken >= config.horizon;
    let reward = if config.terminal_reward_only && !done {
        0.0
    } else {
        config.marketability(&profile) as f64
    };
    Ok(StepOutcome {
        next_state: EnvState { profile, steps_taken, terminated: done },
        reward,
        done,
    })
}

/// Encode a profile as a dense vector over the skill universe, one slot
/// per skill, levels normalized by the maximum level.
pub fn encode_state(profile: &SkillMap, skill_universe: &[SkillId]) -> Result<Vec<f64>, EnvError> {
    let index: BTreeMap<&SkillId, usize> =
        skill_universe.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out = vec![0.0; skill_universe.len()];
    for (skill, level) in profile.iter() {
        let &i = index
            .get(skill)
            .ok_or_else(|| EnvError::UnknownSkill(skill.to_string()))?;
        out[i] = f64::from(level.get()) / f64::from(MAX_LEVEL);
    }
    Ok(out)
}
