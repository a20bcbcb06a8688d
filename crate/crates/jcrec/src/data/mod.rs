//! On-disk dataset formats, validation, normalization and the synthetic
//! generator.
//!
//! A dataset bundle is a directory of four JSON files: `taxonomy.json`
//! (array of taxonomy skills), `courses.json`, `jobs.json` and
//! `learners.json`. Levels are integers 1..=3, ids are strings, and every
//! skill referenced by a course, job or learner must exist in the
//! taxonomy.

mod normalize;
mod synthetic;

pub use normalize::{filter_short_documents, normalize_course_levels, select_eval_subset};
pub use synthetic::{generate_synthetic, SyntheticConfig};

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sem::TaxonomySkill;
use crate::skill::{CourseRecord, JobRecord, LearnerProfile, SkillId};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("bundle validation failed:\n{}", .0.join("\n"))]
    Validation(Vec<String>),
}

/// Everything needed to run recommendations: taxonomy, courses, jobs and
/// learner profiles, validated and normalized.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetBundle {
    pub taxonomy: Vec<TaxonomySkill>,
    pub courses: Vec<CourseRecord>,
    pub jobs: Vec<JobRecord>,
    pub learners: Vec<LearnerProfile>,
}

impl DatasetBundle {
    pub fn skill_universe(&self) -> Vec<SkillId> {
        let mut ids: Vec<SkillId> = self.taxonomy.iter().map(|s| s.id.clone()).collect();
        ids.sort();
        ids
    }

    /// Collect every invariant violation: empty requirement/provision
    /// sets, unknown skill ids, duplicate record ids.
    pub fn validation_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let known: BTreeSet<&SkillId> = self.taxonomy.iter().map(|s| &s.id).collect();

        let mut seen_taxo = BTreeSet::new();
        for s in &self.taxonomy {
            if !seen_taxo.insert(&s.id) {
                issues.push(format!("taxonomy '{}': duplicate skill id", s.id));
            }
            if s.preferred_label.trim().is_empty() {
                issues.push(format!("taxonomy '{}': empty preferred_label", s.id));
            }
        }

        fn check_skills(
            issues: &mut Vec<String>,
            known: &BTreeSet<&SkillId>,
            owner: String,
            field: &str,
            map: &crate::skill::SkillMap,
        ) {
            for skill in map.skills() {
                if !known.contains(skill) {
                    issues.push(format!("{owner}.{field}: skill '{skill}' not in taxonomy"));
                }
            }
        }

        let mut seen = BTreeSet::new();
        for c in &self.courses {
            if !seen.insert(&c.id) {
                issues.push(format!("course '{}': duplicate id", c.id));
            }
            if c.provided.is_empty() {
                issues.push(format!("course '{}'.provided: empty skill set", c.id));
            }
            check_skills(&mut issues, &known, format!("course '{}'", c.id), "required", &c.required);
            check_skills(&mut issues, &known, format!("course '{}'", c.id), "provided", &c.provided);
        }
        let mut seen = BTreeSet::new();
        for j in &self.jobs {
            if !seen.insert(&j.id) {
                issues.push(format!("job '{}': duplicate id", j.id));
            }
            if j.required.is_empty() {
                issues.push(format!("job '{}'.required: empty skill set", j.id));
            }
            check_skills(&mut issues, &known, format!("job '{}'", j.id), "required", &j.required);
        }
        let mut seen = BTreeSet::new();
        for l in &self.learners {
            if !seen.insert(&l.id) {
                issues.push(format!("learner '{}': duplicate id", l.id));
            }
            check_skills(&mut issues, &known, format!("learner '{}'", l.id), "skills", &l.skills);
        }
        issues
    }

    fn sort(&mut self) {
        self.taxonomy.sort_by(|a, b| a.id.cmp(&b.id));
        self.courses.sort_by(|a, b| a.id.cmp(&b.id));
        self.jobs.sort_by(|a, b| a.id.cmp(&b.id));
        self.learners.sort_by(|a, b| a.id.cmp(&b.id));
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, DataError> {
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| DataError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Load, validate and normalize a bundle from a directory. All violations
/// are reported together, not just the first.
pub fn load_bundle(dir: &Path) -> Result<DatasetBundle, DataError> {
    let mut bundle = DatasetBundle {
        taxonomy: read_json(&dir.join("taxonomy.json"))?,
        courses: read_json(&dir.join("courses.json"))?,
        jobs: read_json(&dir.join("jobs.json"))?,
        learners: read_json(&dir.join("learners.json"))?,
    };
    bundle.sort();
    let issues = bundle.validation_issues();
    if !issues.is_empty() {
        return Err(DataError::Validation(issues));
    }
    bundle.courses = bundle.courses.iter().map(normalize_course_levels).collect();
    Ok(bundle)
}

/// Write a bundle as the four JSON files, deterministically ordered.
pub fn save_bundle(bundle: &DatasetBundle, dir: &Path) -> Result<(), DataError> {
    std::fs::create_dir_all(dir).map_err(|source| DataError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut sorted = bundle.clone();
    sorted.sort();
    let write = |name: &str, json: String| -> Result<(), DataError> {
        let path = dir.join(name);
        std::fs::write(&path, json).map_err(|source| DataError::Io {
            path: path.display().to_string(),
            source,
        })
    };
    write("taxonomy.json", serde_json::to_string_pretty(&sorted.taxonomy).expect("serializable"))?;
    write("courses.json", serde_json::to_string_pretty(&sorted.courses).expect("serializable"))?;
    write("jobs.json", serde_json::to_string_pretty(&sorted.jobs).expect("serializable"))?;
    write("learners.json", serde_json::to_string_pretty(&sorted.learners).expect("serializable"))?;
    Ok(())
}
