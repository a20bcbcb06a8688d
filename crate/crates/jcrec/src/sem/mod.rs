//! Skill extraction and matching pipeline.
//!
//! Documents are segmented into sentence groups, skill mentions and level
//! strings are extracted by a pluggable client, taxonomy candidates are
//! selected by a hybrid rule/embedding ranking, a matcher client
//! adjudicates the best candidate, and the per-kind level heuristics turn
//! the survivors into a skill map.

pub mod candidates;
pub mod clients;
pub mod embed;
pub mod fuzzy;
pub mod levels;
pub mod segment;
pub mod stats;

use serde::{Deserialize, Serialize};

use crate::skill::SkillId;

use clients::{ClientError, ExtractorClient, MatchOption, MatcherClient};

/// Six-shot demonstration block shipped with the repo; forwarded verbatim
/// with every extraction request.
pub const DEFAULT_DEMONSTRATIONS: &str = include_str!("../../assets/extraction_demonstrations.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Job,
    CoursePrereq,
    CourseTarget,
    Resume,
}

impl DocumentKind {
    pub fn label(self) -> &'static str {
        match self {
            DocumentKind::Job => "job",
            DocumentKind::CoursePrereq => "course_prereq",
            DocumentKind::CourseTarget => "course_target",
            DocumentKind::Resume => "resume",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDocument {
    pub id: String,
    pub kind: DocumentKind,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceGroup {
    pub sentences: Vec<String>,
    pub doc_id: String,
    pub position: usize,
}

impl SentenceGroup {
    pub fn text(&self) -> String {
        self.sentences.join(" ")
    }
}

/// Proficiency label attached to an extracted skill. Anything outside the
/// four predefined categories is preserved verbatim under `Other`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelLabel {
    Beginner,
    Intermediate,
    Expert,
    Unknown,
    Other(String),
}

impl LevelLabel {
    pub fn parse(raw: &str) -> Self {
        match raw.trim().to_lowercase().as_str() {
            "beginner" => LevelLabel::Beginner,
            "intermediate" => LevelLabel::Intermediate,
            "expert" => LevelLabel::Expert,
            "unknown" => LevelLabel::Unknown,
            _ => LevelLabel::Other(raw.trim().to_owned()),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            LevelLabel::Beginner => "beginner",
            LevelLabel::Intermediate => "intermediate",
            LevelLabel::Expert => "expert",
            LevelLabel::Unknown => "unknown",
            LevelLabel::Other(_) => "other",
        }
    }
}

/// A surface-form skill with its level label and source group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedSkill {
    pub surface: String,
    pub level: LevelLabel,
    pub doc_id: String,
    pub group_position: usize,
}

/// Taxonomy entry against which surface forms are standardized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaxonomySkill {
    pub id: SkillId,
    pub preferred_label: String,
    #[serde(default)]
    pub alt_labels: Vec<String>,
    #[serde(default)]
    pub description: String,
}

/// Outcome of adjudicating one surface form against its candidates.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchDecision {
    Matched(SkillId),
    NoMatch,
    /// The client's answer was outside A..F / "no match".
    NonConforming,
}

const MAX_TRANSPORT_RETRIES: usize = 3;

fn with_retry<T>(mut call: impl FnMut() -> Result<T, ClientError>) -> Result<T, ClientError> {
    let mut last = None;
    for _ in 0..MAX_TRANSPORT_RETRIES {
        match call() {
            Ok(v) => return Ok(v),
            Err(e) if e.is_retryable() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Extract skill mentions from one sentence group. Transport failures are
/// retried and then propagated; a malformed response yields an empty list
/// and a diagnostic in `warnings`.
pub fn extract_skills(
    group: &SentenceGroup,
    client: &dyn ExtractorClient,
    demonstrations: &str,
    warnings: &mut Vec<String>,
) -> Result<Vec<ExtractedSkill>, ClientError> {
    let text = group.text();
    match with_retry(|| client.extract(&text, demonstrations)) {
        Ok(raw) => Ok(raw
            .into_iter()
            .filter(|r| !r.surface.trim().is_empty())
            .map(|r| ExtractedSkill {
                surface: r.surface,
                level: LevelLabel::parse(&r.level),
                doc_id: group.doc_id.clone(),
                group_position: group.position,
            })
            .collect()),
        Err(ClientError::Malformed(msg)) => {
            warnings.push(format!(
                "doc {} group {}: malformed extraction response dropped: {msg}",
                group.doc_id, group.position
            ));
            Ok(Vec::new())
        }
        Err(e) => Err(e),
    }
}

/// Present lettered candidates to the matcher client and map its answer
/// back to a taxonomy id.
pub fn match_skill(
    surface: &str,
    candidates: &[&TaxonomySkill],
    client: &dyn MatcherClient,
) -> Result<MatchDecision, ClientError> {
    if candidates.is_empty() {
        return Ok(MatchDecision::NoMatch);
    }
    debug_assert!(candidates.len() <= candidates::MAX_CANDIDATES);
    let options: Vec<MatchOption> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| MatchOption {
            letter: (b'A' + i as u8) as char,
            label: c.preferred_label.clone(),
            description: c.description.clone(),
        })
        .collect();
    let answer = with_retry(|| client.choose(surface, &options))?;
    let trimmed = answer.trim();
    if trimmed.eq_ignore_ascii_case("no match") {
        return Ok(MatchDecision::NoMatch);
    }
    let mut chars = trimmed.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => {
            let upper = c.to_ascii_uppercase();
            let idx = (upper as i32) - ('A' as i32);
            if (0..candidates.len() as i32).contains(&idx) {
                Ok(MatchDecision::Matched(candidates[idx as usize].id.clone()))
            } else {
                Ok(MatchDecision::NonConforming)
            }
        }
        _ => Ok(MatchDecision::NonConforming),
    }
}

/// All clients and assets needed to run the pipeline over documents.
pub struct SemPipeline<'a> {
    pub taxonomy: &'a [TaxonomySkill],
    pub extractor: &'a dyn ExtractorClient,
    pub matcher: &'a dyn MatcherClient,
    pub embedder: &'a dyn clients::EmbeddingProvider,
    pub demonstrations: &'a str,
}

/// Everything the pipeline learned about one document.
#[derive(Debug, Clone, Serialize)]
pub struct DocumentExtraction {
    pub doc_id: String,
    pub kind: DocumentKind,
    pub n_words: usize,
    pub n_sentences: usize,
    pub extracted: Vec<ExtractedSkill>,
    pub matched: Vec<(SkillId, LevelLabel)>,
    pub skills: crate::skill::SkillMap,
    pub non_conforming_choices: usize,
    pub warnings: Vec<String>,
}

impl<'a> SemPipeline<'a> {
    pub fn process_document(&self, doc: &RawDocument) -> Result<DocumentExtraction, ClientError> {
        let groups = segment::segment(doc);
        let n_sentences: usize = groups.iter().map(|g| g.sentences.len()).sum();
        let n_words = doc.text.split_whitespace().count();

        let mut warnings = Vec::new();
        let mut extracted = Vec::new();
        for group in &groups {
            extracted.extend(extract_skills(group, self.extractor, self.demonstrations, &mut warnings)?);
        }

        let mut matched = Vec::new();
        let mut non_conforming = 0;
        for skill in &extracted {
            let cands = candidates::select_candidates(&skill.surface, self.taxonomy, self.embedder);
            match match_skill(&skill.surface, &cands, self.matcher)? {
                MatchDecision::Matched(id) => matched.push((id, skill.level.clone())),
                MatchDecision::NoMatch => {}
                MatchDecision::NonConforming => non_conforming += 1,
            }
        }

        let skills = levels::resolve_unknown_levels(doc.kind, &matched);
        Ok(DocumentExtraction {
            doc_id: doc.id.clone(),
            kind: doc.kind,
            n_words,
            n_sentences,
            extracted,
            matched,
            skills,
            non_conforming_choices: non_conforming,
            warnings,
        })
    }
}
