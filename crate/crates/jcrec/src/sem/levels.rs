//! Level-resolution heuristics: unknown levels default to beginner in
//! resumes, expert in jobs and intermediate in course text; duplicate
//! mentions keep the maximum resolved level.

use crate::skill::{Level, SkillId, SkillMap};

use super::{DocumentKind, LevelLabel};

fn resolve(kind: DocumentKind, label: &LevelLabel) -> u8 {
    match label {
        LevelLabel::Beginner => 1,
        LevelLabel::Intermediate => 2,
        LevelLabel::Expert => 3,
        LevelLabel::Unknown | LevelLabel::Other(_) => match kind {
            DocumentKind::Resume => 1,
            DocumentKind::Job => 3,
            DocumentKind::CoursePrereq | DocumentKind::CourseTarget => 2,
        },
    }
}

/// Turn matched (skill, label) pairs into a valid skill map for the
/// document kind.
pub fn resolve_unknown_levels(kind: DocumentKind, matched: &[(SkillId, LevelLabel)]) -> SkillMap {
    let mut map = SkillMap::new();
    for (skill, label) in matched {
        let level = Level::new(resolve(kind, label)).expect("resolved levels are 1..=3");
        map.raise(skill.clone(), level);
    }
    map
}
