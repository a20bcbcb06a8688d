//! Fuzzy string similarity: Levenshtein distance and the token-set ratio
//! used for rule-based taxonomy candidate scoring.

/// Edit distance over unicode scalar values, two-row dynamic programming.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Normalized edit similarity: 1 - distance / max length. Two empty
/// strings score 0 here; the token-set ratio never compares a fully empty
/// pair except in degenerate inputs, which must not score 1.
fn edit_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 0.0;
    }
    1.0 - levenshtein(a, b) as f64 / longest as f64
}

fn tokens(s: &str) -> Vec<String> {
    let mut out: Vec<String> = s
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Similarity comparing shared and unique tokens of the two strings.
///
/// Both strings are tokenized to sorted sets; the shared core, core plus
/// a-only tokens, and core plus b-only tokens are joined and compared
/// pairwise by normalized edit similarity, taking the maximum.
pub fn token_set_ratio(a: &str, b: &str) -> f64 {
    let ta = tokens(a);
    let tb = tokens(b);
    if ta.is_empty() && tb.is_empty() {
        return 0.0;
    }
    let shared: Vec<&String> = ta.iter().filter(|t| tb.contains(t)).collect();
    let only_a: Vec<&String> = ta.iter().filter(|t| !tb.contains(t)).collect();
    let only_b: Vec<&String> = tb.iter().filter(|t| !ta.contains(t)).collect();

    let join = |parts: &[&[&String]]| -> String {
        parts
            .iter()
            .flat_map(|p| p.iter())
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let t0 = join(&[&shared]);
    let t1 = join(&[&shared, &only_a]);
    let t2 = join(&[&shared, &only_b]);

    edit_similarity(&t0, &t1)
        .max(edit_similarity(&t0, &t2))
        .max(edit_similarity(&t1, &t2))
}
