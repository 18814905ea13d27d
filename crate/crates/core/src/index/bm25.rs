//! Okapi BM25 with Lucene's default parameters and idf.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    /// Term-frequency saturation.
    pub k1: f64,
    /// Length normalization, 0 disables it.
    pub b: f64,
}

impl Bm25Params {
    pub const LUCENE: Bm25Params = Bm25Params { k1: 1.2, b: 0.75 };
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self::LUCENE
    }
}

/// `ln(1 + (N - df + 0.5) / (df + 0.5))`, positive for every `df <= N`.
#[inline]
pub fn idf(doc_count: usize, doc_freq: usize) -> f64 {
    let n = doc_count as f64;
    let df = doc_freq as f64;
    (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
}

/// Saturated, length-normalized term frequency:
/// `tf (k1 + 1) / (tf + k1 (1 - b + b len / avgdl))`.
#[inline]
pub fn tf_part(tf: u32, doc_len: u32, avg_doc_len: f64, params: Bm25Params) -> f64 {
    let tf = tf as f64;
    let rel_len = if avg_doc_len > 0.0 {
        doc_len as f64 / avg_doc_len
    } else {
        1.0
    };
    let norm = params.k1 * (1.0 - params.b + params.b * rel_len);
    tf * (params.k1 + 1.0) / (tf + norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_doc_single_term() {
        // N = 1, df = 1: idf = ln(1 + 0.5 / 1.5) = ln(4/3)
        let idf = idf(1, 1);
        assert!((idf - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!((idf - 0.287682).abs() < 1e-6);
        // tf = 1 and len = avgdl reduce the tf part to exactly 1
        assert_eq!(tf_part(1, 1, 1.0, Bm25Params::LUCENE), 1.0);
    }

    #[test]
    fn idf_positive_and_decreasing() {
        for n in 0..60 {
            let mut prev = f64::INFINITY;
            for df in 0..=n {
                let v = idf(n, df);
                assert!(v > 0.0, "idf({n},{df}) = {v}");
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn tf_part_increasing_and_bounded() {
        let p = Bm25Params::LUCENE;
        for len in [1, 5, 50, 500] {
            let mut prev = 0.0;
            for tf in 1..200 {
                let v = tf_part(tf, len, 20.0, p);
                assert!(v > prev);
                assert!(v < p.k1 + 1.0);
                prev = v;
            }
        }
    }
}
