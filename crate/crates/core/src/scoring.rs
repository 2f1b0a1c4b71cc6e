//! Similarity scoring for structural alignments.
//!
//! Houses the element similarity function (base and pair substitution
//! tables, deletion/insertion penalties, gap-open penalty), the derived
//! per-position tables used by the dynamic program, alignment validation,
//! and independent column-by-column rescoring of a finished alignment.
//!
//! All arithmetic is exact half-integer fixed point: a [`Score`] is an
//! integer count of half-units, so per-end halving of pair penalties and
//! every comparison in the alignment algorithms stay exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

use crate::rna_model::{Base, PartnerMap, RnaStructure};

/// An exact half-integer score (stored as a count of half-units).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Score(i64);

impl Score {
    pub const ZERO: Score = Score(0);

    /// Sentinel for structurally impossible DP states. Never produced by
    /// score arithmetic on reachable states.
    pub(crate) const NEG_INF: Score = Score(i64::MIN / 4);

    /// Score worth `units` whole units.
    pub const fn from_int(units: i64) -> Score {
        Score(units * 2)
    }

    /// Score from a count of half-units.
    pub const fn from_halves(halves: i64) -> Score {
        Score(halves)
    }

    pub const fn halves(self) -> i64 {
        self.0
    }

    /// Exact half of this score. Panics if the result is not a
    /// half-integer (i.e. if `self` is an odd number of half-units).
    pub fn half(self) -> Score {
        assert!(
            self.0.rem_euclid(2) == 0,
            "half of {} half-units is not half-integer representable",
            self.0
        );
        Score(self.0 / 2)
    }

    /// Whether this is a whole number of units.
    pub const fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }

    /// `self * n`.
    pub const fn scale(self, n: i64) -> Score {
        Score(self.0 * n)
    }

    pub(crate) fn is_neg_inf(self) -> bool {
        self.0 <= Score::NEG_INF.0 / 2
    }
}

impl Add for Score {
    type Output = Score;
    fn add(self, rhs: Score) -> Score {
        Score(self.0.saturating_add(rhs.0))
    }
}

impl Sub for Score {
    type Output = Score;
    fn sub(self, rhs: Score) -> Score {
        Score(self.0.saturating_sub(rhs.0))
    }
}

impl Neg for Score {
    type Output = Score;
    fn neg(self) -> Score {
        Score(-self.0)
    }
}

impl AddAssign for Score {
    fn add_assign(&mut self, rhs: Score) {
        *self = *self + rhs;
    }
}

impl SubAssign for Score {
    fn sub_assign(&mut self, rhs: Score) {
        *self = *self - rhs;
    }
}

impl Sum for Score {
    fn sum<I: Iterator<Item = Score>>(iter: I) -> Score {
        iter.fold(Score::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Score {
    /// Renders with exactly one decimal place, always `.0` or `.5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        let frac = if a.is_multiple_of(2) { "0" } else { "5" };
        write!(f, "{}{}.{}", sign, a / 2, frac)
    }
}

/// Error parsing a score literal.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("'{0}' is not a half-integer score")]
pub struct ScoreParseError(String);

impl FromStr for Score {
    type Err = ScoreParseError;

    /// Accepts integers and `.0`/`.5` decimals, e.g. `2`, `-1`, `0.5`, `-3.5`.
    fn from_str(s: &str) -> Result<Score, ScoreParseError> {
        let err = || ScoreParseError(s.to_string());
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (units_str, half) = match body.split_once('.') {
            None => (body, 0),
            Some((u, "0")) => (u, 0),
            Some((u, "5")) => (u, 1),
            Some(_) => return Err(err()),
        };
        if units_str.is_empty() || !units_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let units: i64 = units_str.parse().map_err(|_| err())?;
        let halves = units * 2 + half;
        Ok(Score(if neg { -halves } else { halves }))
    }
}

/// Alignment mode: which regions of the two structures must be covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlignMode {
    /// Both structures aligned end to end.
    Global,
    /// All of the pattern against some window of the text (asymmetric:
    /// the first structure is the pattern, the second the text).
    Fit,
    /// Best window of one against best window of the other.
    Local,
}

impl fmt::Display for AlignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlignMode::Global => "global",
            AlignMode::Fit => "fit",
            AlignMode::Local => "local",
        })
    }
}

impl FromStr for AlignMode {
    type Err = String;
    fn from_str(s: &str) -> Result<AlignMode, String> {
        match s {
            "global" => Ok(AlignMode::Global),
            "fit" => Ok(AlignMode::Fit),
            "local" => Ok(AlignMode::Local),
            other => Err(format!("unknown mode '{}'", other)),
        }
    }
}

/// Error in a scoring scheme file or in the scheme's values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("line {line}: malformed line '{text}'")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {source}")]
    BadValue {
        line: usize,
        source: ScoreParseError,
    },
    #[error("line {line}: '{text}' is not a base (A, C, G or U)")]
    BadBase { line: usize, text: String },
    #[error("sign convention violated: {rule}")]
    Convention { rule: String },
}

/// The similarity scoring function: substitution tables, indel
/// penalties and the gap-open penalty.
///
/// Deletion/insertion penalties are stored as non-negative magnitudes;
/// the corresponding edit operations score their negation. Pair
/// deletion/insertion penalties are the total for the two ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoringScheme {
    /// 4x4 unpaired-base substitution scores, indexed by [`Base::index`].
    pub base_subst: [[Score; 4]; 4],
    /// Penalty (>= 0) per deleted unpaired base.
    pub base_del: Score,
    /// Penalty (>= 0) per inserted unpaired base.
    pub base_ins: Score,
    /// Pair substitution score when both bases agree.
    pub pair_match: Score,
    /// Pair substitution score when exactly one base agrees.
    pub pair_half: Score,
    /// Pair substitution score when neither base agrees.
    pub pair_mismatch: Score,
    /// Total penalty (>= 0) for deleting a base pair. Must be a whole
    /// number of units so the per-end half stays half-integer.
    pub pair_del: Score,
    /// Total penalty (>= 0) for inserting a base pair. Same constraint.
    pub pair_ins: Score,
    /// Gap-open penalty g > 0; each gap costs an additional -g.
    pub gap_open: Score,
}

impl Default for ScoringScheme {
    /// Default scheme: base match +2, mismatch -1, base indel 1, pair
    /// substitution +5/+1/-1 by agreement, pair indel 4, gap open 3.
    fn default() -> Self {
        let m = Score::from_int(2);
        let x = Score::from_int(-1);
        let mut base_subst = [[x; 4]; 4];
        for (i, row) in base_subst.iter_mut().enumerate() {
            row[i] = m;
        }
        ScoringScheme {
            base_subst,
            base_del: Score::from_int(1),
            base_ins: Score::from_int(1),
            pair_match: Score::from_int(5),
            pair_half: Score::from_int(1),
            pair_mismatch: Score::from_int(-1),
            pair_del: Score::from_int(4),
            pair_ins: Score::from_int(4),
            gap_open: Score::from_int(3),
        }
    }
}

impl ScoringScheme {
    /// Substitution score for two unpaired bases.
    pub fn base_subst(&self, a: Base, b: Base) -> Score {
        self.base_subst[a.index()][b.index()]
    }

    /// Substitution score for a pair `(a5, a3)` replaced by `(b5, b3)`,
    /// graded by how many of the two ends agree.
    pub fn pair_subst(&self, a5: Base, a3: Base, b5: Base, b3: Base) -> Score {
        match (a5 == b5) as u8 + (a3 == b3) as u8 {
            2 => self.pair_match,
            1 => self.pair_half,
            _ => self.pair_mismatch,
        }
    }

    /// Check the sign conventions.
    pub fn validate(&self) -> Result<(), SchemeError> {
        let rule = |msg: &str| SchemeError::Convention {
            rule: msg.to_string(),
        };
        for b in Base::ALL {
            if self.base_subst(b, b) < Score::ZERO {
                return Err(rule(&format!(
                    "substitution score for identical bases must be >= 0 (got {} for {})",
                    self.base_subst(b, b),
                    b
                )));
            }
        }
        if self.base_del < Score::ZERO {
            return Err(rule("base_del must be >= 0"));
        }
        if self.base_ins < Score::ZERO {
            return Err(rule("base_ins must be >= 0"));
        }
        if self.pair_match < Score::ZERO {
            return Err(rule(
                "pair substitution with both bases agreeing must score >= 0",
            ));
        }
        if self.pair_del < Score::ZERO {
            return Err(rule("pair_del must be >= 0"));
        }
        if self.pair_ins < Score::ZERO {
            return Err(rule("pair_ins must be >= 0"));
        }
        if self.gap_open <= Score::ZERO {
            return Err(rule("gap_open must be positive"));
        }
        if !self.pair_del.is_integral() {
            return Err(rule(
                "pair_del must be a whole number so its per-end half is half-integer",
            ));
        }
        if !self.pair_ins.is_integral() {
            return Err(rule(
                "pair_ins must be a whole number so its per-end half is half-integer",
            ));
        }
        Ok(())
    }
}

/// Parse a scoring scheme from `key = value` text.
///
/// Recognized keys: `base_match`, `base_mismatch`, `base_del`,
/// `base_ins`, `pair_match`, `pair_half`, `pair_mismatch`, `pair_del`,
/// `pair_ins`, `gap_open`. Individual cells of the 4x4 base table can be
/// overridden with `subst A G -2` lines (applied after the scalars,
/// regardless of order). `#` starts a comment; omitted keys keep the
/// documented defaults. The resulting scheme is checked against the
/// sign conventions.
pub fn load_scheme(text: &str) -> Result<ScoringScheme, SchemeError> {
    let mut scheme = ScoringScheme::default();
    let mut base_match = Score::from_int(2);
    let mut base_mismatch = Score::from_int(-1);
    let mut overrides: Vec<(Base, Base, Score)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let parse_score = |s: &str| -> Result<Score, SchemeError> {
            s.trim()
                .parse()
                .map_err(|source| SchemeError::BadValue {
                    line: line_no,
                    source,
                })
        };
        if let Some(rest) = line.strip_prefix("subst") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(SchemeError::Malformed {
                    line: line_no,
                    text: line.to_string(),
                });
            }
            let base = |t: &str| -> Result<Base, SchemeError> {
                let mut chars = t.chars();
                match (chars.next().and_then(Base::from_char), chars.next()) {
                    (Some(b), None) => Ok(b),
                    _ => Err(SchemeError::BadBase {
                        line: line_no,
                        text: t.to_string(),
                    }),
                }
            };
            overrides.push((base(toks[0])?, base(toks[1])?, parse_score(toks[2])?));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| SchemeError::Malformed {
            line: line_no,
            text: line.to_string(),
        })?;
        let value = parse_score(value)?;
        match key.trim() {
            "base_match" => base_match = value,
            "base_mismatch" => base_mismatch = value,
            "base_del" => scheme.base_del = value,
            "base_ins" => scheme.base_ins = value,
            "pair_match" => scheme.pair_match = value,
            "pair_half" => scheme.pair_half = value,
            "pair_mismatch" => scheme.pair_mismatch = value,
            "pair_del" => scheme.pair_del = value,
            "pair_ins" => scheme.pair_ins = value,
            "gap_open" => scheme.gap_open = value,
            other => {
                return Err(SchemeError::UnknownKey {
                    line: line_no,
                    key: other.to_string(),
                })
            }
        }
    }

    for i in 0..4 {
        for j in 0..4 {
            scheme.base_subst[i][j] = if i == j { base_match } else { base_mismatch };
        }
    }
    for (a, b, v) in overrides {
        scheme.base_subst[a.index()][b.index()] = v;
    }
    scheme.validate()?;
    Ok(scheme)
}

/// Per-position element scores for one structure pair: the similarity
/// `gamma(i, j)` and the gap penalties `delta` with pair penalties
/// halved per end.
pub struct ElementScores<'a> {
    r1: &'a RnaStructure,
    r2: &'a RnaStructure,
    scheme: &'a ScoringScheme,
    p1: PartnerMap,
    p2: PartnerMap,
    del: Vec<Score>,
    ins: Vec<Score>,
}

fn delta_table(r: &RnaStructure, p: &PartnerMap, base_pen: Score, pair_pen: Score) -> Vec<Score> {
    let mut t = vec![Score::ZERO; r.len() + 1];
    for (pos, slot) in t.iter_mut().enumerate().skip(1) {
        *slot = if p.is_unpaired(pos) {
            base_pen
        } else {
            pair_pen.half()
        };
    }
    t
}

/// Build the derived gamma/delta tables for a structure pair.
pub fn derive_element_scores<'a>(
    scheme: &'a ScoringScheme,
    r1: &'a RnaStructure,
    r2: &'a RnaStructure,
) -> ElementScores<'a> {
    let p1 = r1.partner_map();
    let p2 = r2.partner_map();
    let del = delta_table(r1, &p1, scheme.base_del, scheme.pair_del);
    let ins = delta_table(r2, &p2, scheme.base_ins, scheme.pair_ins);
    ElementScores {
        r1,
        r2,
        scheme,
        p1,
        p2,
        del,
        ins,
    }
}

impl<'a> ElementScores<'a> {
    /// Similarity for aligning the element ending at position `i` of the
    /// first structure with the element ending at `j` of the second.
    ///
    /// Defined only when both positions are unpaired (base substitution)
    /// or both are 3' ends of pairs (pair substitution on the four
    /// bases); any other combination is a caller contract violation.
    pub fn gamma(&self, i: usize, j: usize) -> Score {
        let pi = self.p1.partner(i);
        let pj = self.p2.partner(j);
        if pi == i && pj == j {
            self.scheme.base_subst(self.r1.base(i), self.r2.base(j))
        } else if pi < i && pj < j {
            self.scheme.pair_subst(
                self.r1.base(pi),
                self.r1.base(i),
                self.r2.base(pj),
                self.r2.base(j),
            )
        } else {
            panic!(
                "gamma({}, {}) requested for a structurally forbidden combination",
                i, j
            );
        }
    }

    /// Penalty magnitude for aligning position `i` of the first
    /// structure to `-` (half the pair penalty for paired positions).
    pub fn delta_del(&self, i: usize) -> Score {
        self.del[i]
    }

    /// Penalty magnitude for aligning position `j` of the second
    /// structure to `-`.
    pub fn delta_ins(&self, j: usize) -> Score {
        self.ins[j]
    }

    pub fn partner1(&self, i: usize) -> usize {
        self.p1.partner(i)
    }

    pub fn partner2(&self, j: usize) -> usize {
        self.p2.partner(j)
    }

    pub fn gap_open(&self) -> Score {
        self.scheme.gap_open
    }

    pub fn r1(&self) -> &RnaStructure {
        self.r1
    }

    pub fn r2(&self) -> &RnaStructure {
        self.r2
    }

    pub fn scheme(&self) -> &ScoringScheme {
        self.scheme
    }
}

/// One alignment column: the covered position of each structure, or
/// `None` for a gap in that row.
pub type AlignmentColumn = (Option<usize>, Option<usize>);

/// A finished structural alignment: gapped rows, covered regions, score
/// and gap count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentResult {
    /// Bases of the first structure's covered region with `-` gaps.
    pub row1: String,
    /// Bases of the second structure's covered region with `-` gaps.
    pub row2: String,
    /// Covered region `[i..=j]` of the first structure; `None` if empty.
    pub region1: Option<(usize, usize)>,
    /// Covered region of the second structure; `None` if empty.
    pub region2: Option<(usize, usize)>,
    /// Alignment similarity score.
    pub score: Score,
    /// Number of gaps: maximal runs of `-` in either row.
    pub gap_count: usize,
    pub mode: AlignMode,
}

impl AlignmentResult {
    /// Assemble a result from an explicit column list (1-based absolute
    /// positions). The gap count is derived from the columns.
    pub fn from_columns(
        r1: &RnaStructure,
        r2: &RnaStructure,
        cols: &[AlignmentColumn],
        mode: AlignMode,
        score: Score,
    ) -> AlignmentResult {
        let mut row1 = String::with_capacity(cols.len());
        let mut row2 = String::with_capacity(cols.len());
        let (mut min1, mut max1, mut min2, mut max2) = (usize::MAX, 0, usize::MAX, 0);
        for &(i, j) in cols {
            match i {
                Some(p) => {
                    row1.push(r1.base(p).to_char());
                    min1 = min1.min(p);
                    max1 = max1.max(p);
                }
                None => row1.push('-'),
            }
            match j {
                Some(p) => {
                    row2.push(r2.base(p).to_char());
                    min2 = min2.min(p);
                    max2 = max2.max(p);
                }
                None => row2.push('-'),
            }
        }
        AlignmentResult {
            row1,
            row2,
            region1: (min1 != usize::MAX).then_some((min1, max1)),
            region2: (min2 != usize::MAX).then_some((min2, max2)),
            score,
            gap_count: count_gaps(cols),
            mode,
        }
    }

    /// Recover the column list from the rows and regions.
    pub fn columns(&self) -> Result<Vec<AlignmentColumn>, AlignmentViolation> {
        let chars1: Vec<char> = self.row1.chars().collect();
        let chars2: Vec<char> = self.row2.chars().collect();
        if chars1.len() != chars2.len() {
            return Err(AlignmentViolation::RowLengthMismatch {
                len1: chars1.len(),
                len2: chars2.len(),
            });
        }
        let mut next1 = self.region1.map(|(s, _)| s);
        let mut next2 = self.region2.map(|(s, _)| s);
        let mut cols = Vec::with_capacity(chars1.len());
        for (idx, (&c1, &c2)) in chars1.iter().zip(&chars2).enumerate() {
            let column = idx + 1;
            if c1 == '-' && c2 == '-' {
                return Err(AlignmentViolation::BothGaps { column });
            }
            let p1 = if c1 == '-' {
                None
            } else {
                let p = next1.ok_or(AlignmentViolation::CoverageMismatch { row: 1 })?;
                next1 = Some(p + 1);
                Some(p)
            };
            let p2 = if c2 == '-' {
                None
            } else {
                let p = next2.ok_or(AlignmentViolation::CoverageMismatch { row: 2 })?;
                next2 = Some(p + 1);
                Some(p)
            };
            cols.push((p1, p2));
        }
        let covered = |region: Option<(usize, usize)>, next: Option<usize>, row: u8| match region {
            Some((_, e)) if next != Some(e + 1) => {
                Err(AlignmentViolation::CoverageMismatch { row })
            }
            _ => Ok(()),
        };
        covered(self.region1, next1, 1)?;
        covered(self.region2, next2, 2)?;
        Ok(cols)
    }
}

/// Count the gaps (maximal `-` runs in either row) of a column list.
pub fn count_gaps(cols: &[AlignmentColumn]) -> usize {
    let mut gaps = 0;
    let mut in1 = false;
    let mut in2 = false;
    for &(i, j) in cols {
        if i.is_none() {
            if !in1 {
                gaps += 1;
            }
            in1 = true;
        } else {
            in1 = false;
        }
        if j.is_none() {
            if !in2 {
                gaps += 1;
            }
            in2 = true;
        } else {
            in2 = false;
        }
    }
    gaps
}

/// A violated alignment condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlignmentViolation {
    /// Rows have different lengths.
    RowLengthMismatch { len1: usize, len2: usize },
    /// A column is `-` in both rows.
    BothGaps { column: usize },
    /// A region lies outside the structure or is reversed.
    BadRegion { row: u8 },
    /// The non-gap characters of a row do not spell the covered region.
    RowContentMismatch { row: u8, column: usize },
    /// A row covers more or fewer positions than its region.
    CoverageMismatch { row: u8 },
    /// An unpaired base is aligned to a paired base.
    UnpairedVsPaired { column: usize },
    /// A position whose pair partner lies outside the covered region is
    /// aligned to a base; such half-pairs may only be deleted.
    HalfPairAligned { column: usize },
    /// One end of a pair is aligned to a base, the other to `-`.
    PairEndGapMismatch { pair: (usize, usize), structure: u8 },
    /// The two ends of a pair are aligned to positions that do not form
    /// the corresponding pair in the other structure.
    PartnerMisaligned { pair: (usize, usize), structure: u8 },
    /// Two matched pairs cross.
    CrossingMatches {
        first: (usize, usize),
        second: (usize, usize),
        structure: u8,
    },
    /// The recorded gap count does not equal the maximal `-` runs.
    GapCountMismatch { recorded: usize, actual: usize },
}

impl fmt::Display for AlignmentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AlignmentViolation::*;
        match self {
            RowLengthMismatch { len1, len2 } => {
                write!(f, "rows differ in length: {} vs {}", len1, len2)
            }
            BothGaps { column } => write!(f, "column {} is '-' in both rows", column),
            BadRegion { row } => write!(f, "region of row {} is out of bounds", row),
            RowContentMismatch { row, column } => write!(
                f,
                "row {} column {} does not spell the covered region",
                row, column
            ),
            CoverageMismatch { row } => {
                write!(f, "row {} does not cover exactly its region", row)
            }
            UnpairedVsPaired { column } => {
                write!(f, "column {}: unpaired base aligned to a paired base", column)
            }
            HalfPairAligned { column } => write!(
                f,
                "column {}: pair end with partner outside the region is aligned to a base",
                column
            ),
            PairEndGapMismatch { pair, structure } => write!(
                f,
                "pair ({}, {}) of structure {} has one end aligned and one end gapped",
                pair.0, pair.1, structure
            ),
            PartnerMisaligned { pair, structure } => write!(
                f,
                "pair ({}, {}) of structure {} is not aligned to a pair of the other structure",
                pair.0, pair.1, structure
            ),
            CrossingMatches {
                first,
                second,
                structure,
            } => write!(
                f,
                "matched pairs ({}, {}) and ({}, {}) cross in structure {}",
                first.0, first.1, second.0, second.1, structure
            ),
            GapCountMismatch { recorded, actual } => write!(
                f,
                "recorded gap count {} but rows contain {} gaps",
                recorded, actual
            ),
        }
    }
}

fn region_in_bounds(region: Option<(usize, usize)>, len: usize) -> bool {
    match region {
        None => true,
        Some((s, e)) => 1 <= s && s <= e && e <= len,
    }
}

pub(crate) fn crossing(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// Check an alignment against the structural alignment conditions.
///
/// Verifies that the rows spell the covered regions, that unpaired bases
/// align only to unpaired bases or gaps, that pairs align to pairs or
/// are wholly deleted (a pair end whose partner lies outside the covered
/// region may only be deleted), that matched pairs are mutually
/// non-crossing, and that the recorded gap count matches the rows.
pub fn validate_alignment(
    alignment: &AlignmentResult,
    r1: &RnaStructure,
    r2: &RnaStructure,
) -> Vec<AlignmentViolation> {
    let mut violations = Vec::new();
    if !region_in_bounds(alignment.region1, r1.len()) {
        violations.push(AlignmentViolation::BadRegion { row: 1 });
    }
    if !region_in_bounds(alignment.region2, r2.len()) {
        violations.push(AlignmentViolation::BadRegion { row: 2 });
    }
    if !violations.is_empty() {
        return violations;
    }
    let cols = match alignment.columns() {
        Ok(cols) => cols,
        Err(v) => return vec![v],
    };

    // Condition 1: rows spell their regions.
    for (idx, ((&(p1, p2), c1), c2)) in cols
        .iter()
        .zip(alignment.row1.chars())
        .zip(alignment.row2.chars())
        .enumerate()
    {
        if let Some(p) = p1 {
            if r1.base(p).to_char() != c1 {
                violations.push(AlignmentViolation::RowContentMismatch {
                    row: 1,
                    column: idx + 1,
                });
            }
        }
        if let Some(p) = p2 {
            if r2.base(p).to_char() != c2 {
                violations.push(AlignmentViolation::RowContentMismatch {
                    row: 2,
                    column: idx + 1,
                });
            }
        }
    }

    let pm1 = r1.partner_map();
    let pm2 = r2.partner_map();
    let in_region = |region: Option<(usize, usize)>, pos: usize| match region {
        Some((s, e)) => s <= pos && pos <= e,
        None => false,
    };

    let mut col_of1 = vec![0usize; r1.len() + 1];
    let mut col_of2 = vec![0usize; r2.len() + 1];
    for (idx, &(p1, p2)) in cols.iter().enumerate() {
        if let Some(p) = p1 {
            col_of1[p] = idx + 1;
        }
        if let Some(p) = p2 {
            col_of2[p] = idx + 1;
        }
    }

    // Condition 2 and the half-pair rule, per column.
    for (idx, &(p1, p2)) in cols.iter().enumerate() {
        let column = idx + 1;
        if let (Some(i), Some(j)) = (p1, p2) {
            let u1 = pm1.is_unpaired(i);
            let u2 = pm2.is_unpaired(j);
            if u1 != u2 {
                violations.push(AlignmentViolation::UnpairedVsPaired { column });
            } else if !u1 {
                let half1 = !in_region(alignment.region1, pm1.partner(i));
                let half2 = !in_region(alignment.region2, pm2.partner(j));
                if half1 || half2 {
                    violations.push(AlignmentViolation::HalfPairAligned { column });
                }
            }
        }
    }

    // Condition 3, per pair wholly inside its region; collects matches.
    let mut matches: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for &(a, b) in r1.pairs() {
        if !(in_region(alignment.region1, a) && in_region(alignment.region1, b)) {
            continue;
        }
        let ca = cols[col_of1[a] - 1].1;
        let cb = cols[col_of1[b] - 1].1;
        match (ca, cb) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                if pm2.partner(x) == y && x < y {
                    matches.push(((a, b), (x, y)));
                } else {
                    violations.push(AlignmentViolation::PartnerMisaligned {
                        pair: (a, b),
                        structure: 1,
                    });
                }
            }
            _ => violations.push(AlignmentViolation::PairEndGapMismatch {
                pair: (a, b),
                structure: 1,
            }),
        }
    }
    for &(a, b) in r2.pairs() {
        if !(in_region(alignment.region2, a) && in_region(alignment.region2, b)) {
            continue;
        }
        let ca = cols[col_of2[a] - 1].0;
        let cb = cols[col_of2[b] - 1].0;
        match (ca, cb) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                if !(pm1.partner(x) == y && x < y) {
                    violations.push(AlignmentViolation::PartnerMisaligned {
                        pair: (a, b),
                        structure: 2,
                    });
                }
            }
            _ => violations.push(AlignmentViolation::PairEndGapMismatch {
                pair: (a, b),
                structure: 2,
            }),
        }
    }

    // Condition 4: matched pairs are mutually non-crossing in both structures.
    for (i, &(pa1, pa2)) in matches.iter().enumerate() {
        for &(pb1, pb2) in &matches[i + 1..] {
            if crossing(pa1, pb1) {
                violations.push(AlignmentViolation::CrossingMatches {
                    first: pa1,
                    second: pb1,
                    structure: 1,
                });
            }
            if crossing(pa2, pb2) {
                violations.push(AlignmentViolation::CrossingMatches {
                    first: pa2,
                    second: pb2,
                    structure: 2,
                });
            }
        }
    }

    let actual = count_gaps(&cols);
    if actual != alignment.gap_count {
        violations.push(AlignmentViolation::GapCountMismatch {
            recorded: alignment.gap_count,
            actual,
        });
    }

    violations
}

/// Rescore an alignment column by column from the element scores, plus
/// the gap term. Never reads any dynamic-programming state.
///
/// Each deletion/insertion column contributes its delta (half the pair
/// penalty for a pair end, which also covers pair ends whose partner
/// lies outside the covered region); each aligned column of two 3' ends
/// contributes the full pair substitution; aligned 5' ends contribute
/// nothing further; each gap (maximal `-` run) contributes the negated
/// gap-open penalty.
pub fn sim_score(
    alignment: &AlignmentResult,
    r1: &RnaStructure,
    r2: &RnaStructure,
    scheme: &ScoringScheme,
) -> Result<Score, Vec<AlignmentViolation>> {
    let violations = validate_alignment(alignment, r1, r2);
    if !violations.is_empty() {
        return Err(violations);
    }
    let cols = alignment.columns().expect("validated");
    let scores = derive_element_scores(scheme, r1, r2);
    let mut total = Score::ZERO;
    for &(p1, p2) in &cols {
        match (p1, p2) {
            (Some(i), Some(j)) => {
                let a = scores.partner1(i);
                let b = scores.partner2(j);
                // Base substitution, or pair substitution at the 3'
                // column; aligned 5' ends are scored by their 3' ends.
                if (a == i && b == j) || (a < i && b < j) {
                    total += scores.gamma(i, j);
                }
            }
            (Some(i), None) => total -= scores.delta_del(i),
            (None, Some(j)) => total -= scores.delta_ins(j),
            (None, None) => unreachable!("validated"),
        }
    }
    total -= scheme.gap_open.scale(count_gaps(&cols) as i64);
    Ok(total)
}
