//! RNA structures: a primary sequence over `{A, C, G, U}` plus a set of
//! base pairs, possibly crossing (pseudoknots and tertiary contacts are
//! legal input).
//!
//! Positions are 1-based everywhere in the public API. Structures are
//! immutable after construction and safe to share across threads.

use std::fmt;

use thiserror::Error;

/// A nucleotide base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    A,
    C,
    G,
    U,
}

impl Base {
    /// Parse one character. Lowercase is accepted; `t`/`T` normalizes to `U`.
    pub fn from_char(c: char) -> Option<Base> {
        match c {
            'A' | 'a' => Some(Base::A),
            'C' | 'c' => Some(Base::C),
            'G' | 'g' => Some(Base::G),
            'U' | 'u' | 'T' | 't' => Some(Base::U),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::U => 'U',
        }
    }

    /// Table index in `A, C, G, U` order.
    pub fn index(self) -> usize {
        match self {
            Base::A => 0,
            Base::C => 1,
            Base::G => 2,
            Base::U => 3,
        }
    }

    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::G, Base::U];
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Error raised while parsing or constructing a structure.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("line {line}: invalid character '{ch}' in sequence")]
    BadSequenceChar { line: usize, ch: char },
    #[error("line {line}: invalid character '{ch}' in structure string")]
    BadStructureChar { line: usize, ch: char },
    #[error("line {line}: unbalanced brackets: unmatched '{ch}' at position {pos}")]
    UnbalancedBracket { line: usize, ch: char, pos: usize },
    #[error("line {line}: structure string length {got} does not match sequence length {want}")]
    LengthMismatch { line: usize, got: usize, want: usize },
    #[error("line {line}: malformed pair entry '{text}'")]
    BadPairEntry { line: usize, text: String },
    #[error("missing '>' header line")]
    MissingHeader,
    #[error("missing sequence line")]
    MissingSequence,
    #[error("missing structure line (dot-bracket or '#pairs')")]
    MissingStructure,
    #[error("invalid structure: {0}")]
    Invalid(Violation),
}

/// A violated structure invariant, with the offending positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A pair index lies outside `1..=len`.
    OutOfRange { pair: (usize, usize), len: usize },
    /// A pair has `i >= j`.
    NotAscending { pair: (usize, usize) },
    /// Two pairs share a participating position.
    SharedPosition { pos: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { pair, len } => write!(
                f,
                "pair ({}, {}) out of range for length {}",
                pair.0, pair.1, len
            ),
            Violation::NotAscending { pair } => {
                write!(f, "pair ({}, {}) requires i < j", pair.0, pair.1)
            }
            Violation::SharedPosition { pos } => {
                write!(f, "position {} participates in more than one pair", pos)
            }
        }
    }
}

/// Check the pair-set invariants against a sequence of length `len`.
///
/// Returns every violation found: indices in range, `i < j`, and no
/// position shared between two pairs. Crossing pairs are legal.
pub fn validate_pairs(len: usize, pairs: &[(usize, usize)]) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut seen = vec![false; len + 1];
    for &(i, j) in pairs {
        if i >= j {
            violations.push(Violation::NotAscending { pair: (i, j) });
            continue;
        }
        if i < 1 || j > len {
            violations.push(Violation::OutOfRange { pair: (i, j), len });
            continue;
        }
        for pos in [i, j] {
            if seen[pos] {
                violations.push(Violation::SharedPosition { pos });
            }
            seen[pos] = true;
        }
    }
    violations
}

/// An RNA structure: named sequence plus validated base pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnaStructure {
    name: String,
    seq: Vec<Base>,
    /// Sorted by 5' end; 1-based; i < j; no shared positions.
    pairs: Vec<(usize, usize)>,
}

impl RnaStructure {
    /// Build a structure, validating the pair set.
    pub fn new(
        name: impl Into<String>,
        seq: Vec<Base>,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<Self, StructureError> {
        if let Some(v) = validate_pairs(seq.len(), &pairs).into_iter().next() {
            return Err(StructureError::Invalid(v));
        }
        pairs.sort_unstable();
        Ok(RnaStructure {
            name: name.into(),
            seq,
            pairs,
        })
    }

    /// Convenience constructor from plain strings; pairs are 1-based.
    pub fn from_parts(
        name: &str,
        sequence: &str,
        pairs: &[(usize, usize)],
    ) -> Result<Self, StructureError> {
        let seq = parse_sequence(sequence, 0)?;
        RnaStructure::new(name, seq, pairs.to_vec())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Primary-sequence length.
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Base at 1-based position `pos`.
    pub fn base(&self, pos: usize) -> Base {
        self.seq[pos - 1]
    }

    pub fn bases(&self) -> &[Base] {
        &self.seq
    }

    /// Base pairs, sorted by 5' end.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The partner function: `p(i) = i` for unpaired positions, and
    /// `p(i) = j`, `p(j) = i` for each pair `(i, j)`.
    pub fn partner_map(&self) -> PartnerMap {
        let mut p: Vec<usize> = (0..=self.len()).collect();
        for &(i, j) in &self.pairs {
            p[i] = j;
            p[j] = i;
        }
        PartnerMap { p }
    }

    /// Re-check the invariants. Always empty for constructed values.
    pub fn validate(&self) -> Vec<Violation> {
        validate_pairs(self.len(), &self.pairs)
    }

    /// Pairs whose bases fall outside `{AU, UA, GC, CG, GU, UG}`.
    ///
    /// The alignment and matching algorithms never depend on pair
    /// chemistry; this exists for an optional strict-input warning.
    pub fn chemistry_violations(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .copied()
            .filter(|&(i, j)| {
                !matches!(
                    (self.base(i), self.base(j)),
                    (Base::A, Base::U)
                        | (Base::U, Base::A)
                        | (Base::G, Base::C)
                        | (Base::C, Base::G)
                        | (Base::G, Base::U)
                        | (Base::U, Base::G)
                )
            })
            .collect()
    }

    /// Serialize in the pair-list file format (`>name`, sequence,
    /// `#pairs`, one `i j` line per pair).
    pub fn to_pairlist_text(&self) -> String {
        let mut out = String::new();
        out.push('>');
        out.push_str(&self.name);
        out.push('\n');
        for b in &self.seq {
            out.push(b.to_char());
        }
        out.push('\n');
        out.push_str("#pairs\n");
        for &(i, j) in &self.pairs {
            out.push_str(&format!("{} {}\n", i, j));
        }
        out
    }
}

/// The partner function `p(·)` of one structure.
///
/// `p(p(i)) = i` holds for every position; `p(i) = i` exactly for
/// unpaired positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartnerMap {
    /// `p[pos]` for 1-based `pos`; index 0 is unused.
    p: Vec<usize>,
}

impl PartnerMap {
    /// Partner of 1-based `pos` (`pos` itself when unpaired).
    pub fn partner(&self, pos: usize) -> usize {
        self.p[pos]
    }

    pub fn is_unpaired(&self, pos: usize) -> bool {
        self.p[pos] == pos
    }

    /// Number of positions covered.
    pub fn len(&self) -> usize {
        self.p.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Input format of the structure line(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureFormat {
    DotBracket,
    PairList,
}

const OPEN: [char; 4] = ['(', '[', '{', '<'];
const CLOSE: [char; 4] = [')', ']', '}', '>'];

fn parse_sequence(line: &str, line_no: usize) -> Result<Vec<Base>, StructureError> {
    line.chars()
        .map(|c| {
            Base::from_char(c).ok_or(StructureError::BadSequenceChar {
                line: line_no,
                ch: c,
            })
        })
        .collect()
}

/// Parse a dot-bracket string into pairs. The four bracket families
/// `()`, `[]`, `{}`, `<>` each match independently, so crossings across
/// families encode pseudoknots; `.` is unpaired.
fn parse_dotbracket(db: &str, line_no: usize) -> Result<Vec<(usize, usize)>, StructureError> {
    let mut stacks: [Vec<usize>; 4] = Default::default();
    let mut pairs = Vec::new();
    for (idx, c) in db.chars().enumerate() {
        let pos = idx + 1;
        if c == '.' {
            continue;
        }
        if let Some(f) = OPEN.iter().position(|&o| o == c) {
            stacks[f].push(pos);
        } else if let Some(f) = CLOSE.iter().position(|&cl| cl == c) {
            let open = stacks[f]
                .pop()
                .ok_or(StructureError::UnbalancedBracket {
                    line: line_no,
                    ch: c,
                    pos,
                })?;
            pairs.push((open, pos));
        } else {
            return Err(StructureError::BadStructureChar {
                line: line_no,
                ch: c,
            });
        }
    }
    for (f, stack) in stacks.iter().enumerate() {
        if let Some(&pos) = stack.last() {
            return Err(StructureError::UnbalancedBracket {
                line: line_no,
                ch: OPEN[f],
                pos,
            });
        }
    }
    Ok(pairs)
}

/// Parse one structure from text in the given format.
///
/// The text layout is the structure file format: `>name`, then the
/// sequence line, then either a dot-bracket line of equal length or the
/// `#pairs` sentinel followed by one `i j` pair per line (1-based),
/// terminated by end of input or a blank line.
pub fn parse_rna(text: &str, format: StructureFormat) -> Result<RnaStructure, StructureError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(StructureError::MissingHeader)?;
    let header = header.trim();
    if !header.starts_with('>') {
        return Err(StructureError::MissingHeader);
    }
    let name = header[1..].trim().to_string();
    let (seq_no, seq_line) = lines.next().ok_or(StructureError::MissingSequence)?;
    let seq = parse_sequence(seq_line.trim(), seq_no + 1)?;

    let structure_line = lines.next();
    let pairs = match format {
        StructureFormat::DotBracket => {
            let (db_no, db) = match structure_line {
                Some((n, l)) => (n + 1, l.trim()),
                None if seq.is_empty() => (3, ""),
                None => return Err(StructureError::MissingStructure),
            };
            if db.chars().count() != seq.len() {
                return Err(StructureError::LengthMismatch {
                    line: db_no,
                    got: db.chars().count(),
                    want: seq.len(),
                });
            }
            parse_dotbracket(db, db_no)?
        }
        StructureFormat::PairList => {
            match structure_line {
                Some((_, l)) if l.trim() == "#pairs" => {}
                Some((n, l)) => {
                    return Err(StructureError::BadPairEntry {
                        line: n + 1,
                        text: l.trim().to_string(),
                    })
                }
                None => return Err(StructureError::MissingStructure),
            }
            let mut pairs = Vec::new();
            for (n, line) in lines {
                let line = line.trim();
                if line.is_empty() {
                    break;
                }
                let mut it = line.split_whitespace();
                let (i, j) = match (it.next(), it.next(), it.next()) {
                    (Some(a), Some(b), None) => (a.parse::<usize>(), b.parse::<usize>()),
                    _ => {
                        return Err(StructureError::BadPairEntry {
                            line: n + 1,
                            text: line.to_string(),
                        })
                    }
                };
                match (i, j) {
                    (Ok(i), Ok(j)) => pairs.push((i, j)),
                    _ => {
                        return Err(StructureError::BadPairEntry {
                            line: n + 1,
                            text: line.to_string(),
                        })
                    }
                }
            }
            pairs
        }
    };
    RnaStructure::new(name, seq, pairs)
}

/// Parse one structure, auto-detecting the format: a third line equal to
/// `#pairs` selects the pair-list format, anything else is dot-bracket.
pub fn parse_structure(text: &str) -> Result<RnaStructure, StructureError> {
    let is_pairlist = text
        .lines()
        .nth(2)
        .map(|l| l.trim() == "#pairs")
        .unwrap_or(false);
    let format = if is_pairlist {
        StructureFormat::PairList
    } else {
        StructureFormat::DotBracket
    };
    parse_rna(text, format)
}
