//! Offline embedding provider: hashed character-trigram frequency vectors.
//! A remote sentence-embedding service can be dropped in behind the same
//! trait for higher quality.

use super::clients::EmbeddingProvider;

pub const DEFAULT_DIM: usize = 256;

/// Deterministic character-trigram frequency embedder.
#[derive(Debug, Clone)]
pub struct TrigramEmbedder {
    pub dim: usize,
}

impl Default for TrigramEmbedder {
    fn default() -> Self {
        TrigramEmbedder { dim: DEFAULT_DIM }
    }
}

// FNV-1a, fixed constants, so vectors are stable across runs and platforms.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

impl EmbeddingProvider for TrigramEmbedder {
    fn embed(&self, text: &str) -> Vec<f64> {
        let normalized: String = text
            .to_lowercase()
            .chars()
            .map(|c| if c.is_alphanumeric() { c } else { ' ' })
            .collect();
        let padded = format!("  {}  ", normalized.split_whitespace().collect::<Vec<_>>().join(" "));
        let chars: Vec<char> = padded.chars().collect();
        let mut vec = vec![0.0; self.dim];
        for window in chars.windows(3) {
            let tri: String = window.iter().collect();
            let slot = (fnv1a(tri.as_bytes()) % self.dim as u64) as usize;
            vec[slot] += 1.0;
        }
        vec
    }
}

/// Cosine similarity; 0 when either vector is all zeros.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}
