//! Exact structural pattern matching in linear time.
//!
//! A structure is encoded as a string of signed pairing offsets: 0 for
//! an unpaired position, `j - i` at the 5' end and `i - j` at the 3' end
//! of each pair `(i, j)`. A window of the text matches the pattern
//! exactly if and only if both the base strings and the offset strings
//! match, so two standard string-matching passes solve the problem in
//! `O(n + m)`.
//!
//! A pair reaching outside a candidate window needs no special boundary
//! handling: its offset at the mirrored position inside the pattern
//! would have to point outside the pattern, which no pattern offset
//! does, so such windows mismatch automatically.

use thiserror::Error;

use crate::rna_model::RnaStructure;

/// The signed pairing-offset encoding of a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelString {
    labels: Vec<i64>,
}

impl LabelString {
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Encode a structure as pairing offsets: 0 when unpaired, `j - i` and
/// `i - j` at the ends of each pair `(i, j)`.
pub fn encode_labels(r: &RnaStructure) -> LabelString {
    let mut labels = vec![0i64; r.len()];
    for &(i, j) in r.pairs() {
        let offset = (j - i) as i64;
        labels[i - 1] = offset;
        labels[j - 1] = -offset;
    }
    LabelString { labels }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchError {
    #[error("pattern must be non-empty")]
    EmptyPattern,
}

/// Find all (possibly overlapping) occurrences of `needle` in
/// `haystack`, as sorted 1-based start positions, in
/// `O(|needle| + |haystack|)` time.
pub fn kmp_find_all<T: PartialEq>(needle: &[T], haystack: &[T]) -> Result<Vec<usize>, MatchError> {
    if needle.is_empty() {
        return Err(MatchError::EmptyPattern);
    }
    // Failure function: longest proper prefix of needle[..=i] that is
    // also a suffix.
    let mut fail = vec![0usize; needle.len()];
    let mut k = 0;
    for i in 1..needle.len() {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }

    let mut hits = Vec::new();
    let mut j = 0;
    for (i, sym) in haystack.iter().enumerate() {
        while j > 0 && *sym != needle[j] {
            j = fail[j - 1];
        }
        if *sym == needle[j] {
            j += 1;
            if j == needle.len() {
                hits.push(i + 2 - needle.len());
                j = fail[j - 1];
            }
        }
    }
    Ok(hits)
}

/// All 1-based positions where the pattern structure `r1` occurs exactly
/// in the text structure `r2`: identical bases and identical pairing
/// offsets over the window.
///
/// Computed as the intersection of one string-matching pass over the
/// base sequences and one over the label strings.
pub fn exact_occurrences(r1: &RnaStructure, r2: &RnaStructure) -> Result<Vec<usize>, MatchError> {
    let seq_hits = kmp_find_all(r1.bases(), r2.bases())?;
    let label_hits = kmp_find_all(encode_labels(r1).labels(), encode_labels(r2).labels())?;

    // Merge two sorted position lists.
    let mut out = Vec::new();
    let (mut a, mut b) = (seq_hits.iter().peekable(), label_hits.iter().peekable());
    while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => {
                a.next();
            }
            std::cmp::Ordering::Greater => {
                b.next();
            }
            std::cmp::Ordering::Equal => {
                out.push(x);
                a.next();
                b.next();
            }
        }
    }
    Ok(out)
}
