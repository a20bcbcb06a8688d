//! Pluggable clients for the extraction/matching model calls, plus the
//! deterministic offline mocks. The remote implementations speak JSON over
//! HTTP to a configured endpoint with a bearer token from the environment.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::fuzzy::token_set_ratio;
use super::TaxonomySkill;

#[derive(Debug, Error)]
pub enum ClientError {
    /// Wire-level failure; safe to retry.
    #[error("transport error: {0}")]
    Transport(String),
    /// The service answered but the body did not match the protocol.
    #[error("malformed response: {0}")]
    Malformed(String),
}

impl ClientError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, ClientError::Transport(_))
    }
}

/// A skill mention as returned by the extraction model, level still raw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawExtractedSkill {
    pub surface: String,
    pub level: String,
}

/// Extracts skill mentions and level strings from a sentence-group text.
pub trait ExtractorClient {
    fn extract(&self, text: &str, demonstrations: &str) -> Result<Vec<RawExtractedSkill>, ClientError>;
}

/// Option presented to the matcher: letter, taxonomy label, description.
#[derive(Debug, Clone, Serialize)]
pub struct MatchOption {
    pub letter: char,
    pub label: String,
    pub description: String,
}

/// Adjudicates the best taxonomy candidate for a surface form. Returns the
/// raw choice string ("A".."F" or "no match" in the protocol).
pub trait MatcherClient {
    fn choose(&self, surface: &str, options: &[MatchOption]) -> Result<String, ClientError>;
}

/// Maps a string to a fixed-dimension real vector.
pub trait EmbeddingProvider {
    fn embed(&self, text: &str) -> Vec<f64>;
}

/// Offline extractor: scans the text for taxonomy labels appearing
/// verbatim (case-insensitive) and picks up an adjacent level word when
/// one is present in the same group. Deterministic and stateless.
pub struct KeywordExtractor {
    vocab: Vec<String>,
}

impl KeywordExtractor {
    pub fn from_taxonomy(taxonomy: &[TaxonomySkill]) -> Self {
        let mut vocab: Vec<String> = taxonomy
            .iter()
            .flat_map(|s| {
                std::iter::once(s.preferred_label.clone()).chain(s.alt_labels.iter().cloned())
            })
            .map(|l| l.to_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        vocab.sort();
        vocab.dedup();
        KeywordExtractor { vocab }
    }
}

const LEVEL_WORDS: &[&str] = &["beginner", "intermediate", "expert"];

impl ExtractorClient for KeywordExtractor {
    fn extract(&self, text: &str, _demonstrations: &str) -> Result<Vec<RawExtractedSkill>, ClientError> {
        let lower = text.to_lowercase();
        let level = LEVEL_WORDS
            .iter()
            .find(|w| lower.contains(**w))
            .copied()
            .unwrap_or("unknown");
        let mut out = Vec::new();
        for label in &self.vocab {
            if lower.contains(label.as_str()) {
                out.push(RawExtractedSkill { surface: label.clone(), level: level.to_owned() });
            }
        }
        Ok(out)
    }
}

/// Offline matcher: picks the lettered option whose label is most similar
/// to the surface form by token-set ratio, or answers "no match" below a
/// cutoff.
pub struct RatioMatcher {
    pub min_score: f64,
}

impl Default for RatioMatcher {
    fn default() -> Self {
        RatioMatcher { min_score: 0.5 }
    }
}

impl MatcherClient for RatioMatcher {
    fn choose(&self, surface: &str, options: &[MatchOption]) -> Result<String, ClientError> {
        let mut best: Option<(f64, char)> = None;
        for opt in options {
            let score = token_set_ratio(surface, &opt.label);
            if best.map_or(true, |(s, _)| score > s) {
                best = Some((score, opt.letter));
            }
        }
        Ok(match best {
            Some((score, letter)) if score >= self.min_score => letter.to_string(),
            _ => "no match".to_owned(),
        })
    }
}

/// Generation settings forwarded with every remote request.
#[derive(Debug, Clone, Serialize)]
pub struct GenerationSettings {
    pub temperature: f64,
    pub top_p: f64,
}

impl Default for GenerationSettings {
    fn default() -> Self {
        GenerationSettings { temperature: 0.0, top_p: 1.0 }
    }
}

/// Environment variable holding the bearer token for remote calls.
pub const TOKEN_ENV_VAR: &str = "JCREC_API_TOKEN";

/// HTTP client for a remote extraction/matching/embedding service.
///
/// Protocol (JSON over POST):
/// - `{endpoint}/extract`: `{text, demonstrations, temperature, top_p}`
///   -> `{skills: [{surface, level}]}`
/// - `{endpoint}/match`: `{surface, options: [{letter, label, description}],
///   temperature, top_p}` -> `{choice}`
/// - `{endpoint}/embed`: `{text}` -> `{embedding: [..]}`
pub struct RemoteClient {
    endpoint: String,
    token: Option<String>,
    settings: GenerationSettings,
    http: reqwest::blocking::Client,
}

impl RemoteClient {
    pub fn new(endpoint: impl Into<String>) -> Self {
        RemoteClient {
            endpoint: endpoint.into(),
            token: std::env::var(TOKEN_ENV_VAR).ok(),
            settings: GenerationSettings::default(),
            http: reqwest::blocking::Client::new(),
        }
    }

    fn post<T: Serialize, R: for<'de> Deserialize<'de>>(
        &self,
        path: &str,
        body: &T,
    ) -> Result<R, ClientError> {
        let url = format!("{}/{}", self.endpoint.trim_end_matches('/'), path);
        let mut req = self.http.post(&url).json(body);
        if let Some(token) = &self.token {
            req = req.bearer_auth(token);
        }
        let resp = req.send().map_err(|e| ClientError::Transport(e.to_string()))?;
        if !resp.status().is_success() {
            return Err(ClientError::Transport(format!("{url}: status {}", resp.status())));
        }
        resp.json().map_err(|e| ClientError::Malformed(e.to_string()))
    }
}

#[derive(Serialize)]
struct ExtractRequest<'a> {
    text: &'a str,
    demonstrations: &'a str,
    temperature: f64,
    top_p: f64,
}

#[derive(Deserialize)]
struct ExtractResponse {
    skills: Vec<RawExtractedSkill>,
}

impl ExtractorClient for RemoteClient {
    fn extract(&self, text: &str, demonstrations: &str) -> Result<Vec<RawExtractedSkill>, ClientError> {
        let resp: ExtractResponse = self.post(
            "extract",
            &ExtractRequest {
                text,
                demonstrations,
                temperature: self.settings.temperature,
                top_p: self.settings.top_p,
            },
        )?;
        Ok(resp.skills)
    }
}

#[derive(Serialize)]
struct MatchRequest<'a> {
    surface: &'a str,
    options: &'a [MatchOption],
    temperature: f64,
    top_p: f64,
}

#[derive(Deserialize)]
struct MatchResponse {
    choice: String,
}

impl MatcherClient for RemoteClient {
    fn choose(&self, surface: &str, options: &[MatchOption]) -> Result<String, ClientError> {
        let resp: MatchResponse = self.post(
            "match",
            &MatchRequest {
                surface,
                options,
                temperature: self.settings.temperature,
                top_p: self.settings.top_p,
            },
        )?;
        Ok(resp.choice)
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    text: &'a str,
}

#[derive(Deserialize)]
struct EmbedResponse {
    embedding: Vec<f64>,
}

impl EmbeddingProvider for RemoteClient {
    /// Falls back to the zero vector on failure; candidate selection then
    /// rests on the rule scores alone.
    fn embed(&self, text: &str) -> Vec<f64> {
        self.post::<_, EmbedResponse>("embed", &EmbedRequest { text })
            .map(|r| r.embedding)
            .unwrap_or_default()
    }
}
