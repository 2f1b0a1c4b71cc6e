//! Two-phase affine-gap structural alignment.
//!
//! Phase 1 computes global alignment scores between every pair of
//! substructures delimited by a base pair of each input, walking both
//! pair lists sorted by 3' end so nested lookups always hit a populated
//! entry. Phase 2 runs one pass over the whole structures in the
//! requested mode (global, fit or local) and consults the phase-1 table
//! whenever two base pairs are matched.
//!
//! Three tables are filled per window pair: `A` (best alignment of the
//! two prefixes), `D` (best ending with the first structure's last
//! position aligned to `-`) and `I` (best ending with the second
//! structure's last position aligned to `-`). A pair match applies only
//! when both positions are 3' ends whose partners lie inside the window
//! bounds; a partner before the window start falls through to the
//! deletion/insertion cases, which is what keeps matched pairs mutually
//! non-crossing even on crossing inputs.
//!
//! One alignment job is single-threaded and deterministic; independent
//! jobs can run concurrently over the same shared structures and scheme.

use thiserror::Error;

use crate::rna_model::RnaStructure;
use crate::scoring::{
    derive_element_scores, AlignmentColumn, AlignmentResult, ElementScores, Score, ScoringScheme,
};

pub use crate::scoring::AlignMode;

/// A 1-based inclusive position window; `end == start - 1` means empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn new(start: usize, end: usize) -> Window {
        assert!(start >= 1 && end + 1 >= start, "bad window [{start}..{end}]");
        Window { start, end }
    }

    /// The whole structure: `[1..=len]`.
    pub fn full(len: usize) -> Window {
        Window { start: 1, end: len }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Phase-1 results: the global alignment score between the interiors of
/// every base pair of the first structure and every base pair of the
/// second, indexed by 3' ends.
pub struct PairTable {
    pairs1: Vec<(usize, usize)>,
    pairs2: Vec<(usize, usize)>,
    idx1: Vec<Option<u32>>,
    idx2: Vec<Option<u32>>,
    inner: Vec<Score>,
}

impl PairTable {
    /// Inner alignment score for the pairs of the two structures whose
    /// 3' ends sit at the given positions. Panics if either position is
    /// not a 3' end.
    pub fn inner_score(&self, r1_3end: usize, r2_3end: usize) -> Score {
        let ia = self.idx1[r1_3end].expect("position is not a pair 3' end in structure 1") as usize;
        let ib = self.idx2[r2_3end].expect("position is not a pair 3' end in structure 2") as usize;
        self.inner[ia * self.pairs2.len() + ib]
    }

    /// Pairs of the first structure, sorted by 3' end.
    pub fn pairs1(&self) -> &[(usize, usize)] {
        &self.pairs1
    }

    /// Pairs of the second structure, sorted by 3' end.
    pub fn pairs2(&self) -> &[(usize, usize)] {
        &self.pairs2
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }
}

/// Compute the phase-1 table: for every pair of base pairs, the global
/// alignment score of the delimited substructures. Iterates both pair
/// lists sorted by 3' end, so every nested lookup hits a populated
/// entry.
pub fn phase1_pair_table(scores: &ElementScores) -> PairTable {
    let r1 = scores.r1();
    let r2 = scores.r2();
    let mut pairs1 = r1.pairs().to_vec();
    pairs1.sort_unstable_by_key(|&(_, e)| e);
    let mut pairs2 = r2.pairs().to_vec();
    pairs2.sort_unstable_by_key(|&(_, e)| e);

    let mut idx1 = vec![None; r1.len() + 1];
    for (k, &(_, e)) in pairs1.iter().enumerate() {
        idx1[e] = Some(k as u32);
    }
    let mut idx2 = vec![None; r2.len() + 1];
    for (k, &(_, e)) in pairs2.iter().enumerate() {
        idx2[e] = Some(k as u32);
    }

    let (n1, n2) = (pairs1.len(), pairs2.len());
    let mut table = PairTable {
        pairs1,
        pairs2,
        idx1,
        idx2,
        inner: vec![Score::ZERO; n1 * n2],
    };
    for ia in 0..n1 {
        let (a5, a3) = table.pairs1[ia];
        for ib in 0..n2 {
            let (b5, b3) = table.pairs2[ib];
            let t = window_dp(
                scores,
                &table,
                Window::new(a5 + 1, a3 - 1),
                Window::new(b5 + 1, b3 - 1),
                AlignMode::Global,
            );
            table.inner[ia * n2 + ib] = t.a(t.len1(), t.len2());
        }
    }
    table
}

/// The filled `A`/`D`/`I` matrices for one window pair in one mode.
///
/// Cells are indexed by prefix lengths `(x, y)` of the two windows,
/// `0..=len`. Boundary entries the mode's recurrences never define are
/// poisoned and any read of them panics.
pub struct DpTables {
    win1: Window,
    win2: Window,
    mode: AlignMode,
    stride: usize,
    a: Vec<Score>,
    d: Vec<Score>,
    i: Vec<Score>,
}

impl DpTables {
    pub fn len1(&self) -> usize {
        self.win1.len()
    }

    pub fn len2(&self) -> usize {
        self.win2.len()
    }

    pub fn mode(&self) -> AlignMode {
        self.mode
    }

    fn check(&self, v: Score, table: &str, x: usize, y: usize) -> Score {
        assert!(
            !v.is_neg_inf(),
            "read of undefined {} entry ({}, {}) in {} mode",
            table,
            x,
            y,
            self.mode
        );
        v
    }

    /// Best alignment score of the prefix windows `(x, y)`.
    pub fn a(&self, x: usize, y: usize) -> Score {
        self.check(self.a[x * self.stride + y], "A", x, y)
    }

    /// Best score ending with window-1 position `x` aligned to `-`.
    pub fn d(&self, x: usize, y: usize) -> Score {
        self.check(self.d[x * self.stride + y], "D", x, y)
    }

    /// Best score ending with window-2 position `y` aligned to `-`.
    pub fn ins(&self, x: usize, y: usize) -> Score {
        self.check(self.i[x * self.stride + y], "I", x, y)
    }

    pub fn a_opt(&self, x: usize, y: usize) -> Option<Score> {
        let v = self.a[x * self.stride + y];
        (!v.is_neg_inf()).then_some(v)
    }

    pub fn d_opt(&self, x: usize, y: usize) -> Option<Score> {
        let v = self.d[x * self.stride + y];
        (!v.is_neg_inf()).then_some(v)
    }

    pub fn ins_opt(&self, x: usize, y: usize) -> Option<Score> {
        let v = self.i[x * self.stride + y];
        (!v.is_neg_inf()).then_some(v)
    }
}

/// Fill the `A`/`D`/`I` tables for one window pair.
///
/// Global mode accepts any window pair (this is the phase-1 building
/// block); fit and local mode are whole-structure passes and require
/// full windows.
pub fn window_dp(
    scores: &ElementScores,
    pair_table: &PairTable,
    win1: Window,
    win2: Window,
    mode: AlignMode,
) -> DpTables {
    if mode != AlignMode::Global {
        assert!(
            win1 == Window::full(scores.r1().len()) && win2 == Window::full(scores.r2().len()),
            "{} mode operates on full structures",
            mode
        );
    }
    let n1 = win1.len();
    let n2 = win2.len();
    let stride = n2 + 1;
    let g = scores.gap_open();
    let mut a = vec![Score::NEG_INF; (n1 + 1) * stride];
    let mut d = a.clone();
    let mut ins = a.clone();

    a[0] = Score::ZERO;
    match mode {
        AlignMode::Global => {
            d[0] = -g;
            ins[0] = -g;
        }
        AlignMode::Fit => d[0] = -g,
        AlignMode::Local => {}
    }
    for x in 1..=n1 {
        let idx = x * stride;
        match mode {
            AlignMode::Global | AlignMode::Fit => {
                let dv = d[idx - stride] - scores.delta_del(win1.start + x - 1);
                d[idx] = dv;
                a[idx] = dv;
                ins[idx] = dv - g;
            }
            AlignMode::Local => {
                a[idx] = Score::ZERO;
                ins[idx] = -g;
            }
        }
    }
    for y in 1..=n2 {
        match mode {
            AlignMode::Global => {
                let iv = ins[y - 1] - scores.delta_ins(win2.start + y - 1);
                ins[y] = iv;
                a[y] = iv;
                d[y] = iv - g;
            }
            AlignMode::Fit | AlignMode::Local => {
                a[y] = Score::ZERO;
                d[y] = -g;
            }
        }
    }

    let local = mode == AlignMode::Local;
    for x in 1..=n1 {
        let i = win1.start + x - 1;
        let di = scores.delta_del(i);
        let pi = scores.partner1(i);
        let row = x * stride;
        let prev = row - stride;
        for y in 1..=n2 {
            let j = win2.start + y - 1;
            let dj = scores.delta_ins(j);
            let mut dv = (d[prev + y] - di).max(a[prev + y] - di - g);
            let mut iv = (ins[row + y - 1] - dj).max(a[row + y - 1] - dj - g);
            if local {
                dv = dv.max(Score::ZERO);
                iv = iv.max(Score::ZERO);
            }
            let mut av = dv.max(iv);
            let pj = scores.partner2(j);
            if pi == i && pj == j {
                av = av.max(a[prev + y - 1] + scores.gamma(i, j));
            } else if pi >= win1.start && pi < i && pj >= win2.start && pj < j {
                // Both 3' ends with partners inside the window: match the
                // pairs, closing over the phase-1 interior alignment.
                let prefix = a[(pi - win1.start) * stride + (pj - win2.start)];
                av = av.max(prefix + pair_table.inner_score(i, j) + scores.gamma(i, j));
            }
            if local {
                av = av.max(Score::ZERO);
            }
            d[row + y] = dv;
            ins[row + y] = iv;
            a[row + y] = av;
        }
    }

    DpTables {
        win1,
        win2,
        mode,
        stride,
        a,
        d,
        i: ins,
    }
}

/// The mode's answer: the best score and the cell the traceback starts
/// from. Global reads the far corner; fit maximizes over the last row
/// (smallest column on ties); local maximizes over all cells (smallest
/// cell lexicographically on ties, and never below zero).
pub fn best_end(t: &DpTables) -> (Score, (usize, usize)) {
    let (n1, n2) = (t.len1(), t.len2());
    match t.mode {
        AlignMode::Global => (t.a(n1, n2), (n1, n2)),
        AlignMode::Fit => {
            let mut best = t.a(n1, 0);
            let mut at = 0;
            for y in 1..=n2 {
                let v = t.a(n1, y);
                if v > best {
                    best = v;
                    at = y;
                }
            }
            (best, (n1, at))
        }
        AlignMode::Local => {
            let mut best = Score::ZERO;
            let mut at = (0, 0);
            for x in 0..=n1 {
                for y in 0..=n2 {
                    let v = t.a(x, y);
                    if v > best {
                        best = v;
                        at = (x, y);
                    }
                }
            }
            (best, at)
        }
    }
}

/// All columns of the last row achieving the fit optimum, ascending.
pub fn best_fit_ends(t: &DpTables) -> Vec<usize> {
    assert_eq!(t.mode, AlignMode::Fit);
    let (best, _) = best_end(t);
    (0..=t.len2())
        .filter(|&y| t.a(t.len1(), y) == best)
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlignError {
    #[error("fit alignment requires a non-empty pattern")]
    EmptyPattern,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tab {
    A,
    D,
    I,
}

/// Reconstruct the columns of one optimal alignment, right to left,
/// starting at `start` in table `A`. Ties between cases are broken in a
/// fixed order: pair/base match first, then deletion, then insertion;
/// inside `D`/`I` the gap-extension case is preferred over opening. In
/// local mode the zero case applies only once nothing positive remains.
///
/// Pair-match steps recompute the inner window's tables on demand and
/// recurse into them, so only phase-1 scores need to be retained.
///
/// Returns the cell the traceback stopped at.
fn trace(
    t: &DpTables,
    scores: &ElementScores,
    pair_table: &PairTable,
    start: (usize, usize),
    out: &mut Vec<AlignmentColumn>,
) -> (usize, usize) {
    let g = scores.gap_open();
    let (w1s, w2s) = (t.win1.start, t.win2.start);
    let (mut x, mut y) = start;
    let mut tab = Tab::A;
    loop {
        if x == 0 && y == 0 {
            return (0, 0);
        }
        match t.mode {
            AlignMode::Fit if x == 0 => return (0, y),
            AlignMode::Global if x == 0 => {
                while y > 0 {
                    out.push((None, Some(w2s + y - 1)));
                    y -= 1;
                }
                return (0, 0);
            }
            AlignMode::Global | AlignMode::Fit if y == 0 => {
                while x > 0 {
                    out.push((Some(w1s + x - 1), None));
                    x -= 1;
                }
                return (0, 0);
            }
            _ => {}
        }
        match tab {
            Tab::A => {
                let val = t.a(x, y);
                if t.mode == AlignMode::Local && val == Score::ZERO {
                    return (x, y);
                }
                debug_assert!(x > 0 && y > 0);
                let i = w1s + x - 1;
                let j = w2s + y - 1;
                let pi = scores.partner1(i);
                let pj = scores.partner2(j);
                if pi == i && pj == j {
                    if t.a(x - 1, y - 1) + scores.gamma(i, j) == val {
                        out.push((Some(i), Some(j)));
                        x -= 1;
                        y -= 1;
                        continue;
                    }
                } else if pi >= w1s && pi < i && pj >= w2s && pj < j {
                    let prefix = (pi - w1s, pj - w2s);
                    let candidate =
                        t.a(prefix.0, prefix.1) + pair_table.inner_score(i, j) + scores.gamma(i, j);
                    if candidate == val {
                        out.push((Some(i), Some(j)));
                        let iw1 = Window::new(pi + 1, i - 1);
                        let iw2 = Window::new(pj + 1, j - 1);
                        let it = window_dp(scores, pair_table, iw1, iw2, AlignMode::Global);
                        trace(&it, scores, pair_table, (iw1.len(), iw2.len()), out);
                        out.push((Some(pi), Some(pj)));
                        (x, y) = prefix;
                        continue;
                    }
                }
                if t.d(x, y) == val {
                    tab = Tab::D;
                } else {
                    assert!(
                        t.ins(x, y) == val,
                        "no case explains A({}, {}) in {} mode",
                        x,
                        y,
                        t.mode
                    );
                    tab = Tab::I;
                }
            }
            Tab::D => {
                let val = t.d(x, y);
                let i = w1s + x - 1;
                let di = scores.delta_del(i);
                out.push((Some(i), None));
                if t.d(x - 1, y) - di == val {
                    x -= 1;
                } else {
                    assert!(
                        t.a(x - 1, y) - di - g == val,
                        "no case explains D({}, {})",
                        x,
                        y
                    );
                    x -= 1;
                    tab = Tab::A;
                }
            }
            Tab::I => {
                let val = t.ins(x, y);
                let j = w2s + y - 1;
                let dj = scores.delta_ins(j);
                out.push((None, Some(j)));
                if t.ins(x, y - 1) - dj == val {
                    y -= 1;
                } else {
                    assert!(
                        t.a(x, y - 1) - dj - g == val,
                        "no case explains I({}, {})",
                        x,
                        y
                    );
                    y -= 1;
                    tab = Tab::A;
                }
            }
        }
    }
}

/// Align two structures: run phase 1, then the whole-structure pass in
/// the requested mode, then trace back one optimal alignment.
///
/// The reported score always equals the independent column-by-column
/// rescoring of the reconstructed rows. Empty structures are accepted in
/// global and local mode; fit requires a non-empty pattern.
pub fn align(
    r1: &RnaStructure,
    r2: &RnaStructure,
    mode: AlignMode,
    scheme: &ScoringScheme,
) -> Result<AlignmentResult, AlignError> {
    if mode == AlignMode::Fit && r1.is_empty() {
        return Err(AlignError::EmptyPattern);
    }
    let scores = derive_element_scores(scheme, r1, r2);
    let pair_table = phase1_pair_table(&scores);
    let tables = window_dp(
        &scores,
        &pair_table,
        Window::full(r1.len()),
        Window::full(r2.len()),
        mode,
    );
    let (score, end) = best_end(&tables);
    let mut cols = Vec::new();
    trace(&tables, &scores, &pair_table, end, &mut cols);
    cols.reverse();
    Ok(AlignmentResult::from_columns(r1, r2, &cols, mode, score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rna_model::RnaStructure;
    use crate::scoring::{sim_score, validate_alignment};

    fn s(units: i64) -> Score {
        Score::from_int(units)
    }

    fn default_scheme() -> ScoringScheme {
        ScoringScheme::default()
    }

    fn full_tables(r1: &RnaStructure, r2: &RnaStructure, mode: AlignMode) -> DpTables {
        let scheme = default_scheme();
        let scores = derive_element_scores(&scheme, r1, r2);
        let pt = phase1_pair_table(&scores);
        window_dp(
            &scores,
            &pt,
            Window::full(r1.len()),
            Window::full(r2.len()),
            mode,
        )
    }

    #[test]
    fn boundary_goldens_global() {
        let r1 = RnaStructure::from_parts("a", "GAC", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GC", &[]).unwrap();
        let t = full_tables(&r1, &r2, AlignMode::Global);
        let g = s(3);
        assert_eq!(t.a(0, 0), Score::ZERO);
        assert_eq!(t.d(0, 0), -g);
        assert_eq!(t.ins(0, 0), -g);
        // Empty second window: one gap plus per-element deltas.
        assert_eq!(t.a(2, 0), s(-5));
        assert_eq!(t.d(2, 0), s(-5));
        assert_eq!(t.ins(2, 0), s(-5) - g);
    }

    #[test]
    fn boundary_goldens_fit() {
        let r1 = RnaStructure::from_parts("a", "GAC", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GC", &[]).unwrap();
        let t = full_tables(&r1, &r2, AlignMode::Fit);
        for y in 0..=2 {
            assert_eq!(t.a(0, y), Score::ZERO);
            assert_eq!(t.d(0, y), s(-3));
        }
    }

    #[test]
    fn boundary_goldens_local() {
        let r1 = RnaStructure::from_parts("a", "GAC", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GC", &[]).unwrap();
        let t = full_tables(&r1, &r2, AlignMode::Local);
        for x in 0..=3 {
            assert_eq!(t.a(x, 0), Score::ZERO);
        }
        for y in 0..=2 {
            assert_eq!(t.a(0, y), Score::ZERO);
        }
        for x in 1..=3 {
            assert_eq!(t.ins(x, 0), s(-3));
        }
        for y in 1..=2 {
            assert_eq!(t.d(0, y), s(-3));
        }
    }

    #[test]
    #[should_panic(expected = "undefined I entry")]
    fn fit_poisoned_boundary_read_panics() {
        let r1 = RnaStructure::from_parts("a", "GAC", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GC", &[]).unwrap();
        let t = full_tables(&r1, &r2, AlignMode::Fit);
        t.ins(0, 1);
    }

    #[test]
    #[should_panic(expected = "undefined D entry")]
    fn local_poisoned_boundary_read_panics() {
        let r1 = RnaStructure::from_parts("a", "GAC", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GC", &[]).unwrap();
        let t = full_tables(&r1, &r2, AlignMode::Local);
        t.d(1, 0);
    }

    #[test]
    fn best_end_global_single_match() {
        let r = RnaStructure::from_parts("a", "A", &[]).unwrap();
        let t = full_tables(&r, &r, AlignMode::Global);
        assert_eq!(best_end(&t), (s(2), (1, 1)));
    }

    #[test]
    fn best_end_fit_free_ends() {
        let r1 = RnaStructure::from_parts("a", "C", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "ACG", &[]).unwrap();
        let t = full_tables(&r1, &r2, AlignMode::Fit);
        assert_eq!(best_end(&t), (s(2), (1, 2)));
        assert_eq!(best_fit_ends(&t), vec![2]);
    }

    #[test]
    fn best_end_local_all_negative_is_zero() {
        let r1 = RnaStructure::from_parts("a", "A", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "C", &[]).unwrap();
        let t = full_tables(&r1, &r2, AlignMode::Local);
        assert_eq!(best_end(&t), (Score::ZERO, (0, 0)));
        let result = align(&r1, &r2, AlignMode::Local, &default_scheme()).unwrap();
        assert_eq!(result.score, Score::ZERO);
        assert_eq!(result.region1, None);
        assert_eq!(result.region2, None);
        assert!(result.row1.is_empty() && result.row2.is_empty());
    }

    #[test]
    fn phase1_hairpin_interiors() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "ACGU", &[(1, 4)]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GCGC", &[(1, 4)]).unwrap();
        let scores = derive_element_scores(&scheme, &r1, &r2);
        let pt = phase1_pair_table(&scores);
        // Interiors "CG" vs "CG": two unpaired matches, no gaps.
        assert_eq!(pt.inner_score(4, 4), s(4));
    }

    #[test]
    fn phase1_empty_without_pairs() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "ACGU", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GCGC", &[(1, 4)]).unwrap();
        let scores = derive_element_scores(&scheme, &r1, &r2);
        assert!(phase1_pair_table(&scores).is_empty());
    }

    #[test]
    fn phase1_nested_consults_inner() {
        let scheme = default_scheme();
        // (1,8) encloses (2,7) which encloses "CGCG" in both structures.
        let r = RnaStructure::from_parts("a", "AACGCGUU", &[(1, 8), (2, 7)]).unwrap();
        let scores = derive_element_scores(&scheme, &r, &r);
        let pt = phase1_pair_table(&scores);
        assert_eq!(pt.inner_score(7, 7), s(8), "inner pair interior, 4 matches");
        // Outer interior aligns pair (2,7) to itself (+5) around the
        // inner interior score (+8).
        assert_eq!(pt.inner_score(8, 8), s(13));
    }

    #[test]
    fn align_identity_is_self_score() {
        let scheme = default_scheme();
        let r = RnaStructure::from_parts("a", "GACGUC", &[(1, 6), (2, 5)]).unwrap();
        let result = align(&r, &r, AlignMode::Global, &scheme).unwrap();
        // Two pair matches and two unpaired matches, no gaps.
        assert_eq!(result.score, s(14));
        assert_eq!(result.gap_count, 0);
        assert_eq!(result.row1, "GACGUC");
        assert_eq!(result.row2, "GACGUC");
        assert_eq!(result.region1, Some((1, 6)));
        assert!(validate_alignment(&result, &r, &r).is_empty());
        assert_eq!(sim_score(&result, &r, &r, &scheme).unwrap(), result.score);
    }

    #[test]
    fn align_global_single_deletion() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "A", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "", &[]).unwrap();
        let result = align(&r1, &r2, AlignMode::Global, &scheme).unwrap();
        assert_eq!(result.score, s(-4));
        assert_eq!(result.gap_count, 1);
        assert_eq!(result.row1, "A");
        assert_eq!(result.row2, "-");
    }

    #[test]
    fn align_global_both_empty() {
        let scheme = default_scheme();
        let r = RnaStructure::from_parts("a", "", &[]).unwrap();
        let result = align(&r, &r, AlignMode::Global, &scheme).unwrap();
        assert_eq!(result.score, Score::ZERO);
        assert_eq!(result.gap_count, 0);
        assert_eq!(result.region1, None);
    }

    #[test]
    fn align_fit_rejects_empty_pattern() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "ACG", &[]).unwrap();
        assert_eq!(
            align(&r1, &r2, AlignMode::Fit, &scheme),
            Err(AlignError::EmptyPattern)
        );
    }

    #[test]
    fn align_fit_empty_text_deletes_pattern() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "AC", &[]).unwrap();
        let r2 = RnaStructure::from_parts("b", "", &[]).unwrap();
        let result = align(&r1, &r2, AlignMode::Fit, &scheme).unwrap();
        assert_eq!(result.score, s(-5), "two deletions in one gap");
        assert_eq!(result.row1, "AC");
        assert_eq!(result.row2, "--");
        assert_eq!(result.region2, None);
    }

    #[test]
    fn align_fit_exact_window_bounds_self_score() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("p", "GAAC", &[(2, 3)]).unwrap();
        let r2 =
            RnaStructure::from_parts("t", "UUGAACUU", &[(4, 5)]).unwrap();
        assert_eq!(
            crate::exact_match::exact_occurrences(&r1, &r2).unwrap(),
            vec![3]
        );
        let result = align(&r1, &r2, AlignMode::Fit, &scheme).unwrap();
        // Self-match: two unpaired matches + one pair match.
        let self_score = s(2 + 2 + 5);
        assert!(result.score >= self_score);
        assert_eq!(result.region1, Some((1, 4)));
        assert!(validate_alignment(&result, &r1, &r2).is_empty());
        assert_eq!(sim_score(&result, &r1, &r2, &scheme).unwrap(), result.score);
    }

    #[test]
    fn align_local_example() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("p", "GAAC", &[]).unwrap();
        let r2 = RnaStructure::from_parts("t", "UUGAACUU", &[]).unwrap();
        let result = align(&r1, &r2, AlignMode::Local, &scheme).unwrap();
        assert_eq!(result.score, s(8));
        assert_eq!(result.region1, Some((1, 4)));
        assert_eq!(result.region2, Some((3, 6)));
        assert_eq!(result.gap_count, 0);
    }

    #[test]
    fn align_traceback_rescores_exactly() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "GACUGCAU", &[(1, 6), (2, 5), (7, 8)]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GGCUGCC", &[(2, 6)]).unwrap();
        for mode in [AlignMode::Global, AlignMode::Fit, AlignMode::Local] {
            let result = align(&r1, &r2, mode, &scheme).unwrap();
            assert!(
                validate_alignment(&result, &r1, &r2).is_empty(),
                "{mode}: invalid traceback"
            );
            assert_eq!(
                sim_score(&result, &r1, &r2, &scheme).unwrap(),
                result.score,
                "{mode}: rescore drift"
            );
        }
    }

    #[test]
    fn mode_ordering_on_fixed_instance() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "GACUG", &[(1, 5)]).unwrap();
        let r2 = RnaStructure::from_parts("b", "CCGACUGCC", &[(3, 7)]).unwrap();
        let global = align(&r1, &r2, AlignMode::Global, &scheme).unwrap().score;
        let fit = align(&r1, &r2, AlignMode::Fit, &scheme).unwrap().score;
        let local = align(&r1, &r2, AlignMode::Local, &scheme).unwrap().score;
        assert!(local >= fit && fit >= global);
        assert!(local >= Score::ZERO);
    }

    /// Matched pairs of the result: pairs of r1 wholly covered whose
    /// ends are both aligned to bases.
    fn matched_pairs(result: &AlignmentResult, r1: &RnaStructure) -> usize {
        let cols = result.columns().unwrap();
        let mut col_of1 = std::collections::HashMap::new();
        for (c, &(i, _)) in cols.iter().enumerate() {
            if let Some(i) = i {
                col_of1.insert(i, c);
            }
        }
        r1.pairs()
            .iter()
            .filter(|&&(a, b)| {
                matches!(
                    (col_of1.get(&a), col_of1.get(&b)),
                    (Some(&ca), Some(&cb)) if cols[ca].1.is_some() && cols[cb].1.is_some()
                )
            })
            .count()
    }

    #[test]
    fn all_crossing_pairs_match_at_most_once() {
        let scheme = default_scheme();
        // Pairs (1,4), (2,5), (3,6) are mutually crossing in both
        // structures, so condition 4 admits at most one match.
        let r = RnaStructure::from_parts("a", "ACGACG", &[(1, 4), (2, 5), (3, 6)]).unwrap();
        for mode in [AlignMode::Global, AlignMode::Fit, AlignMode::Local] {
            let result = align(&r, &r, mode, &scheme).unwrap();
            assert!(validate_alignment(&result, &r, &r).is_empty());
            assert!(matched_pairs(&result, &r) <= 1, "{mode}");
        }
    }

    #[test]
    fn dominance_a_bounds_d_and_i() {
        let r1 = RnaStructure::from_parts("a", "GACUGC", &[(1, 6), (2, 4)]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GCUGC", &[(1, 5)]).unwrap();
        for mode in [AlignMode::Global, AlignMode::Fit, AlignMode::Local] {
            let t = full_tables(&r1, &r2, mode);
            for x in 0..=t.len1() {
                for y in 0..=t.len2() {
                    let a = t.a(x, y);
                    if let Some(d) = t.d_opt(x, y) {
                        assert!(a >= d, "{mode}: A < D at ({x}, {y})");
                    }
                    if let Some(i) = t.ins_opt(x, y) {
                        assert!(a >= i, "{mode}: A < I at ({x}, {y})");
                    }
                }
            }
        }
    }

    #[test]
    fn gap_accounting_matches_rows() {
        let scheme = default_scheme();
        let r1 = RnaStructure::from_parts("a", "GGGACUUU", &[(1, 8), (2, 7)]).unwrap();
        let r2 = RnaStructure::from_parts("b", "GACU", &[]).unwrap();
        for mode in [AlignMode::Global, AlignMode::Fit, AlignMode::Local] {
            let result = align(&r1, &r2, mode, &scheme).unwrap();
            let runs = |row: &str| {
                let mut n = 0;
                let mut in_run = false;
                for c in row.chars() {
                    if c == '-' {
                        if !in_run {
                            n += 1;
                        }
                        in_run = true;
                    } else {
                        in_run = false;
                    }
                }
                n
            };
            assert_eq!(result.gap_count, runs(&result.row1) + runs(&result.row2));
        }
    }
}
