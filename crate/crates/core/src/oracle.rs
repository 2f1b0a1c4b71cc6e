//! Brute-force reference implementations.
//!
//! These exist to verify the alignment and matching algorithms: an
//! exhaustive enumeration of every valid structural alignment at desk
//! scale, and a direct quadratic exact matcher. They are used by the
//! test suites and by the hidden `oracle` CLI subcommand; never use
//! them beyond the size guard.

use thiserror::Error;

use crate::align_dp::{AlignMode, Window};
use crate::rna_model::{PartnerMap, RnaStructure};
use crate::scoring::{
    crossing, derive_element_scores, AlignmentColumn, AlignmentResult, ElementScores, Score,
    ScoringScheme,
};

/// Maximum structure length the enumeration accepts.
pub const MAX_ORACLE_LEN: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("structure of length {len} exceeds the oracle size guard {max}")]
    TooLarge { len: usize, max: usize },
    #[error("fit alignment requires a non-empty pattern")]
    EmptyPattern,
}

fn guard(r1: &RnaStructure, r2: &RnaStructure, mode: AlignMode) -> Result<(), OracleError> {
    for r in [r1, r2] {
        if r.len() > MAX_ORACLE_LEN {
            return Err(OracleError::TooLarge {
                len: r.len(),
                max: MAX_ORACLE_LEN,
            });
        }
    }
    if mode == AlignMode::Fit && r1.is_empty() {
        return Err(OracleError::EmptyPattern);
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PosState {
    Pending,
    Gapped,
    Aligned(u32),
}

/// Exhaustive enumeration of the valid alignments of one window pair.
/// Validity (order preservation, unpaired-to-unpaired, pair-to-pair or
/// wholly gapped, deletable-only half-pairs, non-crossing matches) is
/// enforced incrementally so invalid subtrees are pruned; score and gap
/// count are maintained incrementally as columns are pushed.
struct Enumerator<'a, 'b, F> {
    scores: &'b ElementScores<'a>,
    p1: PartnerMap,
    p2: PartnerMap,
    win1: Window,
    win2: Window,
    cols: Vec<AlignmentColumn>,
    state1: Vec<PosState>,
    state2: Vec<PosState>,
    matched: Vec<((usize, usize), (usize, usize))>,
    score: Score,
    gaps: usize,
    visit: F,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Match,
    Del,
    Ins,
}

impl<'a, 'b, F: FnMut(&[AlignmentColumn], Score, usize)> Enumerator<'a, 'b, F> {
    fn run(scores: &'b ElementScores<'a>, win1: Window, win2: Window, visit: F) -> F {
        let mut e = Enumerator {
            scores,
            p1: scores.r1().partner_map(),
            p2: scores.r2().partner_map(),
            win1,
            win2,
            cols: Vec::new(),
            state1: vec![PosState::Pending; scores.r1().len() + 1],
            state2: vec![PosState::Pending; scores.r2().len() + 1],
            matched: Vec::new(),
            score: Score::ZERO,
            gaps: 0,
            visit,
        };
        e.rec(win1.start, win2.start);
        e.visit
    }

    fn last_kind(&self) -> Option<ColKind> {
        self.cols.last().map(|&(i, j)| match (i, j) {
            (Some(_), Some(_)) => ColKind::Match,
            (Some(_), None) => ColKind::Del,
            (None, Some(_)) => ColKind::Ins,
            (None, None) => unreachable!(),
        })
    }

    fn rec(&mut self, i: usize, j: usize) {
        let more1 = i <= self.win1.end;
        let more2 = j <= self.win2.end;
        if !more1 && !more2 {
            (self.visit)(&self.cols, self.score, self.gaps);
            return;
        }
        if more1 && more2 {
            if let Some((contrib, completes)) = self.aligned_contribution(i, j) {
                let col = self.cols.len() as u32;
                self.cols.push((Some(i), Some(j)));
                self.state1[i] = PosState::Aligned(col);
                self.state2[j] = PosState::Aligned(col);
                if completes {
                    self.matched
                        .push(((self.p1.partner(i), i), (self.p2.partner(j), j)));
                }
                self.score += contrib;
                self.rec(i + 1, j + 1);
                self.score -= contrib;
                if completes {
                    self.matched.pop();
                }
                self.state1[i] = PosState::Pending;
                self.state2[j] = PosState::Pending;
                self.cols.pop();
            }
        }
        if more1 && self.deletion_ok(i) {
            let opens = self.last_kind() != Some(ColKind::Del);
            let contrib = -self.scores.delta_del(i)
                - if opens {
                    self.scores.gap_open()
                } else {
                    Score::ZERO
                };
            self.cols.push((Some(i), None));
            self.state1[i] = PosState::Gapped;
            self.score += contrib;
            self.gaps += opens as usize;
            self.rec(i + 1, j);
            self.gaps -= opens as usize;
            self.score -= contrib;
            self.state1[i] = PosState::Pending;
            self.cols.pop();
        }
        if more2 && self.insertion_ok(j) {
            let opens = self.last_kind() != Some(ColKind::Ins);
            let contrib = -self.scores.delta_ins(j)
                - if opens {
                    self.scores.gap_open()
                } else {
                    Score::ZERO
                };
            self.cols.push((None, Some(j)));
            self.state2[j] = PosState::Gapped;
            self.score += contrib;
            self.gaps += opens as usize;
            self.rec(i, j + 1);
            self.gaps -= opens as usize;
            self.score -= contrib;
            self.state2[j] = PosState::Pending;
            self.cols.pop();
        }
    }

    /// Whether aligning positions `i` and `j` is (still) valid, and if
    /// so what the column contributes: `(score, completes_a_pair_match)`.
    fn aligned_contribution(&self, i: usize, j: usize) -> Option<(Score, bool)> {
        let a = self.p1.partner(i);
        let b = self.p2.partner(j);
        let u1 = a == i;
        let u2 = b == j;
        if u1 && u2 {
            return Some((self.scores.gamma(i, j), false));
        }
        if u1 != u2 {
            return None;
        }
        // Half-pairs (partner outside the window) may only be deleted.
        if a < self.win1.start || a > self.win1.end || b < self.win2.start || b > self.win2.end {
            return None;
        }
        if a < i {
            // 3' ends: the 5' ends must already be aligned to each other.
            if b >= j {
                return None;
            }
            match (self.state1[a], self.state2[b]) {
                (PosState::Aligned(ca), PosState::Aligned(cb)) if ca == cb => {}
                _ => return None,
            }
            for &(q1, q2) in &self.matched {
                if crossing((a, i), q1) || crossing((b, j), q2) {
                    return None;
                }
            }
            Some((self.scores.gamma(i, j), true))
        } else {
            // 5' ends: defer, the 3' ends will settle it.
            if b <= j {
                return None;
            }
            Some((Score::ZERO, false))
        }
    }

    fn deletion_ok(&self, i: usize) -> bool {
        let a = self.p1.partner(i);
        if a == i || a < self.win1.start || a > self.win1.end {
            return true;
        }
        a > i || self.state1[a] == PosState::Gapped
    }

    fn insertion_ok(&self, j: usize) -> bool {
        let b = self.p2.partner(j);
        if b == j || b < self.win2.start || b > self.win2.end {
            return true;
        }
        b > j || self.state2[b] == PosState::Gapped
    }
}

fn windows_including_empty(len: usize) -> Vec<Window> {
    let mut out = vec![Window::new(1, 0)];
    for start in 1..=len {
        for end in start..=len {
            out.push(Window::new(start, end));
        }
    }
    out
}

fn for_each_candidate<F: FnMut(&[AlignmentColumn], Score, usize)>(
    scores: &ElementScores,
    mode: AlignMode,
    mut visit: F,
) {
    let full1 = Window::full(scores.r1().len());
    let full2 = Window::full(scores.r2().len());
    match mode {
        AlignMode::Global => {
            Enumerator::run(scores, full1, full2, visit);
        }
        AlignMode::Fit => {
            // Every window of the text, including the empty one (the
            // whole pattern deleted against no text at all).
            for win2 in windows_including_empty(scores.r2().len()) {
                visit = Enumerator::run(scores, full1, win2, visit);
            }
        }
        AlignMode::Local => {
            for win1 in windows_including_empty(scores.r1().len()) {
                for win2 in windows_including_empty(scores.r2().len()) {
                    visit = Enumerator::run(scores, win1, win2, visit);
                }
            }
        }
    }
}

/// Every alignment of the two structures that satisfies the structural
/// alignment conditions for the given mode: the full structures for
/// global, every text window for fit, every window pair for local.
///
/// Candidate scores are exact similarity scores under `scheme`. Guarded
/// to structures of length at most [`MAX_ORACLE_LEN`].
pub fn enumerate_alignments(
    r1: &RnaStructure,
    r2: &RnaStructure,
    mode: AlignMode,
    scheme: &ScoringScheme,
) -> Result<Vec<AlignmentResult>, OracleError> {
    guard(r1, r2, mode)?;
    let scores = derive_element_scores(scheme, r1, r2);
    let mut out = Vec::new();
    for_each_candidate(&scores, mode, |cols, score, gaps| {
        let result = AlignmentResult::from_columns(r1, r2, cols, mode, score);
        debug_assert_eq!(result.gap_count, gaps);
        out.push(result);
    });
    Ok(out)
}

/// The best similarity score over [`enumerate_alignments`], streamed
/// without materializing candidates. For local mode the empty alignment
/// makes the result at least zero.
pub fn oracle_best(
    r1: &RnaStructure,
    r2: &RnaStructure,
    mode: AlignMode,
    scheme: &ScoringScheme,
) -> Result<Score, OracleError> {
    guard(r1, r2, mode)?;
    let scores = derive_element_scores(scheme, r1, r2);
    let mut best: Option<Score> = None;
    for_each_candidate(&scores, mode, |_, score, _| {
        best = Some(match best {
            Some(b) => b.max(score),
            None => score,
        });
    });
    Ok(best.expect("at least one candidate always exists"))
}

/// Direct quadratic exact structural pattern matching: checks the base
/// identity and pairing conditions at every offset. Independent of the
/// label-encoding matcher it verifies. An empty pattern yields no
/// occurrences.
pub fn naive_exact_match(r1: &RnaStructure, r2: &RnaStructure) -> Vec<usize> {
    let m = r1.len();
    let n = r2.len();
    if m == 0 || m > n {
        return Vec::new();
    }
    let p1 = r1.partner_map();
    let p2 = r2.partner_map();
    (1..=n - m + 1)
        .filter(|&i| {
            (1..=m).all(|k| {
                let t = i + k - 1;
                if r1.base(k) != r2.base(t) {
                    return false;
                }
                if p1.is_unpaired(k) {
                    p2.is_unpaired(t)
                } else {
                    !p2.is_unpaired(t) && p2.partner(t) == p1.partner(k) + i - 1
                }
            })
        })
        .collect()
}
