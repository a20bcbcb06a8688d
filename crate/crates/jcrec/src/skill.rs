//! Skill profiles and the similarity / relevance / update math.
//!
//! Everything downstream (the environment, the recommenders, the CLI) sees
//! learners, job requirements and course prerequisite/outcome sets through
//! the [`SkillMap`] type defined here, and scores them with
//! [`user_job_sim`] and [`user_course_rel`].

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Highest proficiency level on the ordinal scale. Level 0 encodes absence
/// and is never stored.
pub const MAX_LEVEL: u8 = 3;

#[derive(Debug, Error, PartialEq)]
pub enum SkillError {
    #[error("proficiency level {0} outside 1..={MAX_LEVEL}")]
    InvalidLevel(u8),
    #[error("required level must be >= 1 (absent skills cannot be required)")]
    RequiredLevelZero,
    #[error("{0} '{1}' has an empty required skill set")]
    EmptyRequirement(&'static str, String),
    #[error("course '{0}' has an empty provided skill set")]
    EmptyProvision(String),
}

/// Opaque taxonomy skill identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SkillId(pub String);

impl SkillId {
    pub fn new(id: impl Into<String>) -> Self {
        SkillId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SkillId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SkillId {
    fn from(s: &str) -> Self {
        SkillId(s.to_owned())
    }
}

/// Stored proficiency level, always in 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Level(u8);

impl Level {
    pub fn new(value: u8) -> Result<Self, SkillError> {
        if (1..=MAX_LEVEL).contains(&value) {
            Ok(Level(value))
        } else {
            Err(SkillError::InvalidLevel(value))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = u8::deserialize(de)?;
        Level::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Map from skill to proficiency level. Absence means level 0; level 0 is
/// never stored as an entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SkillMap(BTreeMap<SkillId, Level>);

impl SkillMap {
    pub fn new() -> Self {
        SkillMap(BTreeMap::new())
    }

    /// Level for `skill`, 0 when absent.
    pub fn level(&self, skill: &SkillId) -> u8 {
        self.0.get(skill).map_or(0, |l| l.get())
    }

    pub fn contains(&self, skill: &SkillId) -> bool {
        self.0.contains_key(skill)
    }

    /// Insert or overwrite an entry. Level 0 is rejected; remove instead.
    pub fn set(&mut self, skill: SkillId, level: u8) -> Result<(), SkillError> {
        self.0.insert(skill, Level::new(level)?);
        Ok(())
    }

    pub fn remove(&mut self, skill: &SkillId) {
        self.0.remove(skill);
    }

    /// Raise the entry for `skill` to `level` if that is an increase.
    pub fn raise(&mut self, skill: SkillId, level: Level) {
        let entry = self.0.entry(skill).or_insert(level);
        if level > *entry {
            *entry = level;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SkillId, Level)> {
        self.0.iter().map(|(s, l)| (s, *l))
    }

    pub fn skills(&self) -> impl Iterator<Item = &SkillId> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, SkillError>
    where
        I: IntoIterator<Item = (S, u8)>,
        S: Into<SkillId>,
    {
        let mut map = SkillMap::new();
        for (skill, level) in pairs {
            map.set(skill.into(), level)?;
        }
        Ok(map)
    }
}

impl<'de> Deserialize<'de> for SkillMap {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<SkillId, Level>::deserialize(de)?;
        Ok(SkillMap(raw))
    }
}

/// A course: prerequisite skills and the skills it provides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CourseRecord {
    pub id: String,
    #[serde(default)]
    pub required: SkillMap,
    pub provided: SkillMap,
}

impl CourseRecord {
    pub fn validate(&self) -> Result<(), SkillError> {
        if self.provided.is_empty() {
            return Err(SkillError::EmptyProvision(self.id.clone()));
        }
        Ok(())
    }
}

/// A job posting reduced to its required skills and levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobRecord {
    pub id: String,
    pub required: SkillMap,
}

impl JobRecord {
    pub fn validate(&self) -> Result<(), SkillError> {
        if self.required.is_empty() {
            return Err(SkillError::EmptyRequirement("job", self.id.clone()));
        }
        Ok(())
    }
}

/// A learner and their current skill profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerProfile {
    pub id: String,
    pub skills: SkillMap,
}

/// Filter thresholds for course enrollability and job applicability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub t_uc: f64,
    pub t_uj: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { t_uc: 0.8, t_uj: 0.8 }
    }
}

impl Thresholds {
    pub fn new(t_uc: f64, t_uj: f64) -> Result<Self, String> {
        for (name, t) in [("t_uc", t_uc), ("t_uj", t_uj)] {
            if !(0.0..=1.0).contains(&t) {
                return Err(format!("{name}={t} outside [0,1]"));
            }
        }
        Ok(Thresholds { t_uc, t_uj })
    }
}

/// Similarity between a held level and a required level:
/// `min(held, required) / required`. The required side is never 0.
pub fn level_sim(held: u8, required: Level) -> f64 {
    debug_assert!(held <= MAX_LEVEL);
    f64::from(held.min(required.get())) / f64::from(required.get())
}

/// Mean per-skill level similarity over the job's requirements.
/// 1.0 iff the profile covers every required skill at or above its level.
pub fn user_job_sim(profile: &SkillMap, job: &JobRecord) -> f64 {
    debug_assert!(!job.required.is_empty(), "jobs with no requirements are rejected at ingestion");
    let total: f64 = job
        .required
        .iter()
        .map(|(skill, level)| level_sim(profile.level(skill), level))
        .sum();
    total / job.required.len() as f64
}

/// Mean coverage of a requirement set; vacuously 1 when the set is empty.
fn requirement_coverage(profile: &SkillMap, required: &SkillMap) -> f64 {
    if required.is_empty() {
        return 1.0;
    }
    let total: f64 = required
        .iter()
        .map(|(skill, level)| level_sim(profile.level(skill), level))
        .sum();
    total / required.len() as f64
}

/// Relevance of a course to a profile: prerequisite coverage times how much
/// of the provided skill set is still missing. 0 when the learner already
/// holds everything the course provides.
pub fn user_course_rel(profile: &SkillMap, course: &CourseRecord) -> f64 {
    debug_assert!(!course.provided.is_empty(), "courses with no provided skills are rejected at ingestion");
    let coverage = requirement_coverage(profile, &course.required);
    let already_provided = requirement_coverage(profile, &course.provided);
    coverage * (1.0 - already_provided)
}

/// Courses whose relevance meets the threshold (>= comparison).
pub fn enrollable_courses<'a>(
    profile: &SkillMap,
    courses: impl IntoIterator<Item = &'a CourseRecord>,
    t_uc: f64,
) -> BTreeSet<&'a str> {
    courses
        .into_iter()
        .filter(|c| user_course_rel(profile, c) >= t_uc)
        .map(|c| c.id.as_str())
        .collect()
}

/// Jobs whose similarity meets the threshold (>= comparison).
pub fn applicable_jobs<'a>(
    profile: &SkillMap,
    jobs: impl IntoIterator<Item = &'a JobRecord>,
    t_uj: f64,
) -> BTreeSet<&'a str> {
    jobs.into_iter()
        .filter(|j| user_job_sim(profile, j) >= t_uj)
        .map(|j| j.id.as_str())
        .collect()
}

/// Number of jobs the profile can apply to: the marketability reward.
pub fn marketability(profile: &SkillMap, jobs: &[JobRecord], t_uj: f64) -> usize {
    jobs.iter().filter(|j| user_job_sim(profile, j) >= t_uj).count()
}

/// Profile after completing a course: per-skill maximum of the current
/// profile and the course's provided set. Levels never decrease.
pub fn apply_course(profile: &SkillMap, course: &CourseRecord) -> SkillMap {
    let mut next = profile.clone();
    for (skill, level) in course.provided.iter() {
        next.raise(skill.clone(), level);
    }
    next
}
