//! Course inconsistency correction, document-length filters and the
//! deterministic evaluation subset.

use crate::sem::{DocumentKind, RawDocument};
use crate::skill::CourseRecord;

use super::DatasetBundle;

/// Fix courses that require a skill at or above the level they teach it:
/// the requirement is lowered to one level below the provided level, and
/// removed entirely when that would be level zero.
pub fn normalize_course_levels(course: &CourseRecord) -> CourseRecord {
    let mut required = course.required.clone();
    for (skill, provided_level) in course.provided.iter() {
        let required_level = course.required.level(skill);
        if required_level == 0 || required_level < provided_level.get() {
            continue;
        }
        let adjusted = provided_level.get() - 1;
        if adjusted == 0 {
            required.remove(skill);
        } else {
            required
                .set(skill.clone(), adjusted)
                .expect("adjusted level is within 1..=3");
        }
    }
    CourseRecord { id: course.id.clone(), required, provided: course.provided.clone() }
}

const JOB_MIN_WORDS: usize = 50;
const COURSE_MIN_WORDS: usize = 20;

/// Drop jobs under 50 words and course texts under 20; resumes are never
/// filtered.
pub fn filter_short_documents(docs: Vec<RawDocument>) -> Vec<RawDocument> {
    docs.into_iter()
        .filter(|d| {
            let words = d.text.split_whitespace().count();
            match d.kind {
                DocumentKind::Job => words >= JOB_MIN_WORDS,
                DocumentKind::CoursePrereq | DocumentKind::CourseTarget => words >= COURSE_MIN_WORDS,
                DocumentKind::Resume => true,
            }
        })
        .collect()
}

/// Evaluation subset: learners with strictly fewer than
/// `max_learner_skills` skills, and the first `max_jobs`/`max_courses`
/// records by sorted id.
pub fn select_eval_subset(
    bundle: &DatasetBundle,
    max_learner_skills: usize,
    max_jobs: usize,
    max_courses: usize,
) -> DatasetBundle {
    let mut subset = bundle.clone();
    subset.sort();
    subset.learners.retain(|l| l.skills.len() < max_learner_skills);
    subset.jobs.truncate(max_jobs);
    subset.courses.truncate(max_courses);
    subset
}
