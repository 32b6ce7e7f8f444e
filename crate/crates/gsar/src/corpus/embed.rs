//! Deterministic feature-hashed bag-of-tokens embeddings.
//!
//! Texts are lowercased, split on non-alphanumeric characters, and each
//! token is hashed into one of `dimension` signed buckets; the count vector
//! is then L2-normalized. The hash is a fixed FNV-1a so vectors are stable
//! across runs, platforms, and toolchain upgrades, which is what makes
//! harness traces byte-reproducible.

/// Default embedding width used by the harness and the CLI.
pub const DEFAULT_DIMENSION: usize = 256;

/// Smallest width at which hashed buckets still separate small corpora.
pub const MIN_DIMENSION: usize = 8;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Embeds a text into a signed hashed bag-of-tokens vector of the given
/// dimension. Empty or token-free text maps to the zero vector.
///
/// The dimension must be at least [`MIN_DIMENSION`].
pub fn embed_text(text: &str, dimension: usize) -> Vec<f64> {
    assert!(
        dimension >= MIN_DIMENSION,
        "embedding dimension must be at least {MIN_DIMENSION}, got {dimension}"
    );
    let mut vector = vec![0.0f64; dimension];
    let lowered = text.to_lowercase();
    for token in lowered.split(|c: char| !c.is_alphanumeric()) {
        if token.is_empty() {
            continue;
        }
        let hash = fnv1a(token.as_bytes());
        // One bit picks the sign, the remaining bits pick the bucket, so the
        // two are not correlated through the low bits.
        let bucket = (hash >> 1) as usize % dimension;
        let sign = if hash & 1 == 0 { 1.0 } else { -1.0 };
        vector[bucket] += sign;
    }
    let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in &mut vector {
            *v /= norm;
        }
    }
    vector
}

/// Cosine similarity, with zero vectors defined to have similarity 0.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}
