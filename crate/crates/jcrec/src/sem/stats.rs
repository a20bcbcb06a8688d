//! Corpus statistics over pipeline results: document lengths, extraction
//! and matching counts, and the level-label distribution per document
//! kind.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{DocumentExtraction, DocumentKind};

pub const LEVEL_BUCKETS: &[&str] = &["expert", "intermediate", "beginner", "unknown", "other"];

/// Aggregated statistics for one document kind.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct KindStats {
    pub kind: DocumentKind,
    pub documents: usize,
    pub words_per_sentence: f64,
    pub sentences_per_doc: f64,
    pub words_per_doc: f64,
    /// Average unique surface forms extracted per document.
    pub skills_extracted_per_doc: f64,
    /// Percentage of extracted skills carrying an identified level.
    pub levels_extracted_pct: f64,
    /// Average unique taxonomy skills matched per document.
    pub skills_matched_per_doc: f64,
    /// Percentage of all extracted skills per level bucket.
    pub level_distribution_pct: BTreeMap<String, f64>,
}

/// Compute per-kind statistics tables over processed documents.
pub fn extraction_stats(results: &[DocumentExtraction]) -> Vec<KindStats> {
    let mut by_kind: BTreeMap<DocumentKind, Vec<&DocumentExtraction>> = BTreeMap::new();
    for r in results {
        by_kind.entry(r.kind).or_default().push(r);
    }

    by_kind
        .into_iter()
        .map(|(kind, docs)| {
            let n = docs.len() as f64;
            let words: usize = docs.iter().map(|d| d.n_words).sum();
            let sentences: usize = docs.iter().map(|d| d.n_sentences).sum();

            let unique_extracted: usize = docs
                .iter()
                .map(|d| d.extracted.iter().map(|s| s.surface.to_lowercase()).collect::<BTreeSet<_>>().len())
                .sum();
            let unique_matched: usize = docs
                .iter()
                .map(|d| d.matched.iter().map(|(id, _)| id).collect::<BTreeSet<_>>().len())
                .sum();

            let total_skills: usize = docs.iter().map(|d| d.extracted.len()).sum();
            let mut bucket_counts: BTreeMap<String, usize> =
                LEVEL_BUCKETS.iter().map(|b| (b.to_string(), 0)).collect();
            let mut leveled = 0usize;
            for d in &docs {
                for s in &d.extracted {
                    *bucket_counts.get_mut(s.level.label()).expect("bucket exists") += 1;
                    if !matches!(s.level, super::LevelLabel::Unknown) {
                        leveled += 1;
                    }
                }
            }
            let pct = |count: usize| {
                if total_skills == 0 {
                    0.0
                } else {
                    100.0 * count as f64 / total_skills as f64
                }
            };

            KindStats {
                kind,
                documents: docs.len(),
                words_per_sentence: if sentences == 0 { 0.0 } else { words as f64 / sentences as f64 },
                sentences_per_doc: sentences as f64 / n,
                words_per_doc: words as f64 / n,
                skills_extracted_per_doc: unique_extracted as f64 / n,
                levels_extracted_pct: pct(leveled),
                skills_matched_per_doc: unique_matched as f64 / n,
                level_distribution_pct: bucket_counts.into_iter().map(|(b, c)| (b, pct(c))).collect(),
            }
        })
        .collect()
}
