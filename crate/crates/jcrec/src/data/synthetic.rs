//! Seeded synthetic dataset generator, a stand-in for scraped corpora.
//!
//! Level distributions echo what extraction produces in practice: jobs
//! lean toward expert requirements, learner profiles toward beginner
//! levels, and courses teach a small number of skills one level above
//! their own prerequisites.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::sem::TaxonomySkill;
use crate::skill::{CourseRecord, JobRecord, LearnerProfile, SkillId, SkillMap};

use super::DatasetBundle;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub skills: usize,
    pub courses: usize,
    pub jobs: usize,
    pub learners: usize,
    /// Inclusive range of required skills per job.
    pub job_skills: [usize; 2],
    /// Inclusive range of skills per learner profile.
    pub learner_skills: [usize; 2],
    /// Inclusive range of provided skills per course.
    pub course_provided: [usize; 2],
    /// Inclusive range of prerequisite skills per course.
    pub course_required: [usize; 2],
    /// Sampling weights for levels 1..=3 in job requirements.
    pub job_level_weights: [f64; 3],
    /// Sampling weights for levels 1..=3 in learner profiles.
    pub learner_level_weights: [f64; 3],
    /// Sampling weights for levels 1..=3 of provided course skills.
    pub course_level_weights: [f64; 3],
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            seed: 0,
            skills: 20,
            courses: 20,
            jobs: 20,
            learners: 10,
            job_skills: [1, 3],
            learner_skills: [1, 4],
            course_provided: [1, 3],
            course_required: [0, 2],
            job_level_weights: [0.1, 0.3, 0.6],
            learner_level_weights: [0.6, 0.3, 0.1],
            course_level_weights: [0.35, 0.35, 0.3],
        }
    }
}

impl SyntheticConfig {
    fn validate(&self) {
        assert!(self.skills >= 1 && self.courses >= 1 && self.jobs >= 1 && self.learners >= 1);
        for [lo, hi] in [self.job_skills, self.learner_skills, self.course_provided] {
            assert!(lo >= 1 && lo <= hi, "count ranges must be non-empty and start at 1");
        }
        assert!(self.course_required[0] <= self.course_required[1]);
        for w in [self.job_level_weights, self.learner_level_weights, self.course_level_weights] {
            assert!(w.iter().all(|x| *x >= 0.0) && w.iter().sum::<f64>() > 0.0);
        }
    }
}

fn weighted_level(weights: &[f64; 3], rng: &mut impl Rng) -> u8 {
    let total: f64 = weights.iter().sum();
    let mut draw = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        draw -= w;
        if draw < 0.0 {
            return (i + 1) as u8;
        }
    }
    3
}

fn range(bounds: [usize; 2], cap: usize, rng: &mut impl Rng) -> usize {
    rng.random_range(bounds[0].min(cap)..=bounds[1].min(cap)).max(1)
}

/// Generate a reproducible bundle. The same config always yields the same
/// bundle, and every generated course already satisfies the consistency
/// rule checked by `normalize_course_levels`.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> DatasetBundle {
    cfg.validate();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let taxonomy: Vec<TaxonomySkill> = (0..cfg.skills)
        .map(|i| TaxonomySkill {
            id: SkillId::new(format!("skill-{i:03}")),
            preferred_label: format!("skill {i}"),
            alt_labels: vec![],
            description: format!("synthetic taxonomy entry {i}"),
        })
        .collect();
    let ids: Vec<&SkillId> = taxonomy.iter().map(|s| &s.id).collect();

    let draw_map = |count: usize, weights: &[f64; 3], rng: &mut ChaCha8Rng| -> SkillMap {
        let mut map = SkillMap::new();
        for idx in sample(rng, ids.len(), count.min(ids.len())) {
            map.set(ids[idx].clone(), weighted_level(weights, rng)).expect("levels 1..=3");
        }
        map
    };

    let jobs: Vec<JobRecord> = (0..cfg.jobs)
        .map(|i| JobRecord {
            id: format!("job-{i:03}"),
            required: draw_map(range(cfg.job_skills, cfg.skills, &mut rng), &cfg.job_level_weights, &mut rng),
        })
        .collect();

    let learners: Vec<LearnerProfile> = (0..cfg.learners)
        .map(|i| LearnerProfile {
            id: format!("learner-{i:03}"),
            skills: draw_map(
                range(cfg.learner_skills, cfg.skills, &mut rng),
                &cfg.learner_level_weights,
                &mut rng,
            ),
        })
        .collect();

    let courses: Vec<CourseRecord> = (0..cfg.courses)
        .map(|i| {
            let provided =
                draw_map(range(cfg.course_provided, cfg.skills, &mut rng), &cfg.course_level_weights, &mut rng);
            let mut required = SkillMap::new();
            let n_req = rng.random_range(cfg.course_required[0]..=cfg.course_required[1]);
            // Prerequisites come from the provided skills, one level below
            // what the course teaches; level-1 provisions need none.
            let provided_skills: Vec<(SkillId, u8)> =
                provided.iter().map(|(s, l)| (s.clone(), l.get())).collect();
            for (skill, level) in provided_skills.into_iter().take(n_req) {
                if level >= 2 {
                    required.set(skill, level - 1).expect("levels 1..=3");
                }
            }
            CourseRecord { id: format!("course-{i:03}"), required, provided }
        })
        .collect();

    DatasetBundle { taxonomy, courses, jobs, learners }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::normalize_course_levels;

    #[test]
    fn same_seed_is_identical() {
        let cfg = SyntheticConfig { seed: 42, ..SyntheticConfig::default() };
        assert_eq!(generate_synthetic(&cfg), generate_synthetic(&cfg));
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_synthetic(&SyntheticConfig { seed: 1, ..SyntheticConfig::default() });
        let b = generate_synthetic(&SyntheticConfig { seed: 2, ..SyntheticConfig::default() });
        assert_ne!(a, b);
    }

    #[test]
    fn minimal_config_is_valid() {
        let cfg = SyntheticConfig {
            skills: 1,
            courses: 1,
            jobs: 1,
            learners: 1,
            job_skills: [1, 1],
            learner_skills: [1, 1],
            course_provided: [1, 1],
            course_required: [0, 0],
            ..SyntheticConfig::default()
        };
        let bundle = generate_synthetic(&cfg);
        assert!(bundle.validation_issues().is_empty());
        assert_eq!(bundle.courses.len(), 1);
        assert!(!bundle.courses[0].provided.is_empty());
    }

    #[test]
    fn generated_bundles_validate_and_normalize_unchanged() {
        for seed in 0..5 {
            let bundle = generate_synthetic(&SyntheticConfig { seed, ..SyntheticConfig::default() });
            assert!(bundle.validation_issues().is_empty());
            for c in &bundle.courses {
                assert_eq!(&normalize_course_levels(c), c, "course {} changed", c.id);
            }
        }
    }
}
