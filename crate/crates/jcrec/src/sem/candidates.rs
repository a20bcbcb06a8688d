//! Hybrid taxonomy candidate selection: union of the rule-based top three
//! and the embedding top three.

use super::clients::EmbeddingProvider;
use super::embed::cosine;
use super::fuzzy::token_set_ratio;
use super::TaxonomySkill;

pub const MAX_CANDIDATES: usize = 6;
const TOP_PER_METHOD: usize = 3;

/// Rule-based score: 1.0 for an exact (case-insensitive) label match,
/// otherwise the best token-set ratio against the preferred and alternate
/// labels.
fn rule_score(surface: &str, skill: &TaxonomySkill) -> f64 {
    let lower = surface.trim().to_lowercase();
    let exact = std::iter::once(&skill.preferred_label)
        .chain(skill.alt_labels.iter())
        .any(|l| l.to_lowercase() == lower);
    if exact {
        return 1.0;
    }
    std::iter::once(&skill.preferred_label)
        .chain(skill.alt_labels.iter())
        .map(|l| token_set_ratio(surface, l))
        .fold(0.0, f64::max)
}

fn top_n<'a>(mut scored: Vec<(f64, &'a TaxonomySkill)>, n: usize) -> Vec<(f64, &'a TaxonomySkill)> {
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.id.cmp(&b.1.id)));
    scored.truncate(n);
    scored
}

/// Up to six candidates for a surface form, ordered by descending score
/// and then id.
pub fn select_candidates<'a>(
    surface: &str,
    taxonomy: &'a [TaxonomySkill],
    embedder: &dyn EmbeddingProvider,
) -> Vec<&'a TaxonomySkill> {
    let rule = top_n(
        taxonomy.iter().map(|s| (rule_score(surface, s), s)).collect(),
        TOP_PER_METHOD,
    );

    let surface_vec = embedder.embed(surface);
    let embedding = top_n(
        taxonomy
            .iter()
            .map(|s| {
                let text = format!("{} {}", s.preferred_label, s.description);
                (cosine(&surface_vec, &embedder.embed(&text)), s)
            })
            .collect(),
        TOP_PER_METHOD,
    );

    let mut union: Vec<(f64, &TaxonomySkill)> = Vec::new();
    for (score, skill) in rule.into_iter().chain(embedding) {
        match union.iter_mut().find(|(_, s)| s.id == skill.id) {
            Some(entry) => entry.0 = entry.0.max(score),
            None => union.push((score, skill)),
        }
    }
    union.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.id.cmp(&b.1.id)));
    union.truncate(MAX_CANDIDATES);
    union.into_iter().map(|(_, s)| s).collect()
}
