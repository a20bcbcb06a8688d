//! Rule-based sentence segmentation and grouping.
//!
//! Resumes are processed one sentence at a time; job and course text in
//! pairs of consecutive sentences (the final group of an odd count has
//! size one).

use super::{DocumentKind, RawDocument, SentenceGroup};

/// Common abbreviations whose trailing period does not end a sentence.
const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "etc", "vs", "dr", "mr", "mrs", "ms", "prof", "inc", "ltd", "jr", "sr", "st",
    "no", "approx",
];

/// Split text into sentences on `.`, `!`, `?` and newline boundaries,
/// guarding a list of common abbreviations.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut sentences = Vec::new();
    let mut current = String::new();
    let chars: Vec<char> = text.chars().collect();

    let mut flush = |buf: &mut String| {
        let trimmed = buf.trim();
        if !trimmed.is_empty() {
            sentences.push(trimmed.to_owned());
        }
        buf.clear();
    };

    for (i, &c) in chars.iter().enumerate() {
        match c {
            '\n' => flush(&mut current),
            '!' | '?' => {
                current.push(c);
                flush(&mut current);
            }
            '.' => {
                current.push(c);
                let word = current
                    .trim_end_matches('.')
                    .rsplit(|ch: char| ch.is_whitespace())
                    .next()
                    .unwrap_or("")
                    .to_lowercase();
                let abbrev = ABBREVIATIONS.contains(&word.as_str());
                // An alphanumeric right after the period means a decimal
                // number or an internal period ("3.10", "e.g").
                let internal = chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
                if !abbrev && !internal {
                    flush(&mut current);
                }
            }
            _ => current.push(c),
        }
    }
    flush(&mut current);
    sentences
}

/// Segment a document into sentence groups according to its kind.
pub fn segment(doc: &RawDocument) -> Vec<SentenceGroup> {
    let sentences = split_sentences(&doc.text);
    let group_size = match doc.kind {
        DocumentKind::Resume => 1,
        DocumentKind::Job | DocumentKind::CoursePrereq | DocumentKind::CourseTarget => 2,
    };
    sentences
        .chunks(group_size)
        .enumerate()
        .map(|(position, chunk)| SentenceGroup {
            sentences: chunk.to_vec(),
            doc_id: doc.id.clone(),
            position,
        })
        .collect()
}
