//! Output records for the `rnamatch` command line tool: the stable
//! tab-separated machine format (with a parser to read it back) and the
//! human-readable alignment rendering.

use std::fmt::Write as _;

use rnamatch::{AlignMode, AlignmentResult, RnaStructure, Score};

/// One alignment answer as printed by the CLI.
///
/// The machine format is line-oriented `key<TAB>value` with a stable
/// field order: `mode`, `name1`, `name2`, `score`, `region1`,
/// `region2`, `gap_count`, `row1`, `row2`, `annotation1`,
/// `annotation2`, and optionally `all_ends`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputRecord {
    pub mode: AlignMode,
    pub name1: String,
    pub name2: String,
    pub score: Score,
    pub region1: Option<(usize, usize)>,
    pub region2: Option<(usize, usize)>,
    pub gap_count: usize,
    pub row1: String,
    pub row2: String,
    pub annotation1: String,
    pub annotation2: String,
    /// Every optimal fit end column, when requested.
    pub all_ends: Option<Vec<usize>>,
}

/// Structure annotation for one gapped row: `(` and `)` mark the 5' and
/// 3' ends of paired positions, `.` unpaired positions, `-` gaps.
pub fn annotate_row(row: &str, region: Option<(usize, usize)>, r: &RnaStructure) -> String {
    let p = r.partner_map();
    let mut next = region.map(|(s, _)| s);
    row.chars()
        .map(|c| {
            if c == '-' {
                '-'
            } else {
                let pos = next.expect("row covers its region");
                next = Some(pos + 1);
                let partner = p.partner(pos);
                if partner == pos {
                    '.'
                } else if partner > pos {
                    '('
                } else {
                    ')'
                }
            }
        })
        .collect()
}

fn region_str(region: Option<(usize, usize)>) -> String {
    match region {
        Some((s, e)) => format!("{}..{}", s, e),
        None => "-".to_string(),
    }
}

fn parse_region(text: &str) -> Result<Option<(usize, usize)>, String> {
    if text == "-" {
        return Ok(None);
    }
    let (s, e) = text
        .split_once("..")
        .ok_or_else(|| format!("bad region '{}'", text))?;
    let s = s.parse().map_err(|_| format!("bad region '{}'", text))?;
    let e = e.parse().map_err(|_| format!("bad region '{}'", text))?;
    Ok(Some((s, e)))
}

impl OutputRecord {
    pub fn new(
        result: &AlignmentResult,
        r1: &RnaStructure,
        r2: &RnaStructure,
        all_ends: Option<Vec<usize>>,
    ) -> OutputRecord {
        OutputRecord {
            mode: result.mode,
            name1: r1.name().to_string(),
            name2: r2.name().to_string(),
            score: result.score,
            region1: result.region1,
            region2: result.region2,
            gap_count: result.gap_count,
            row1: result.row1.clone(),
            row2: result.row2.clone(),
            annotation1: annotate_row(&result.row1, result.region1, r1),
            annotation2: annotate_row(&result.row2, result.region2, r2),
            all_ends,
        }
    }

    /// Render the machine format.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut field = |k: &str, v: &str| {
            let _ = writeln!(out, "{}\t{}", k, v);
        };
        field("mode", &self.mode.to_string());
        field("name1", &self.name1);
        field("name2", &self.name2);
        field("score", &self.score.to_string());
        field("region1", &region_str(self.region1));
        field("region2", &region_str(self.region2));
        field("gap_count", &self.gap_count.to_string());
        field("row1", &self.row1);
        field("row2", &self.row2);
        field("annotation1", &self.annotation1);
        field("annotation2", &self.annotation2);
        if let Some(ends) = &self.all_ends {
            let joined: Vec<String> = ends.iter().map(|e| e.to_string()).collect();
            field("all_ends", &joined.join(","));
        }
        out
    }

    /// Parse the machine format back into a record.
    pub fn parse_tsv(text: &str) -> Result<OutputRecord, String> {
        let mut fields = std::collections::HashMap::new();
        for line in text.lines() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| format!("line without tab: '{}'", line))?;
            fields.insert(k.to_string(), v.to_string());
        }
        let get = |k: &str| {
            fields
                .get(k)
                .cloned()
                .ok_or_else(|| format!("missing field '{}'", k))
        };
        let all_ends = match fields.get("all_ends") {
            None => None,
            Some(v) if v.is_empty() => Some(Vec::new()),
            Some(v) => Some(
                v.split(',')
                    .map(|t| t.parse().map_err(|_| format!("bad end column '{}'", t)))
                    .collect::<Result<Vec<usize>, String>>()?,
            ),
        };
        Ok(OutputRecord {
            mode: get("mode")?.parse()?,
            name1: get("name1")?,
            name2: get("name2")?,
            score: get("score")?.parse().map_err(|e| format!("{}", e))?,
            region1: parse_region(&get("region1")?)?,
            region2: parse_region(&get("region2")?)?,
            gap_count: get("gap_count")?
                .parse()
                .map_err(|_| "bad gap_count".to_string())?,
            row1: get("row1")?,
            row2: get("row2")?,
            annotation1: get("annotation1")?,
            annotation2: get("annotation2")?,
            all_ends,
        })
    }

    /// Render the human-readable format: a header and the five-line
    /// alignment block (rows, their structure annotations, and `|`
    /// markers on matched columns).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "structure1: {}", self.name1);
        let _ = writeln!(out, "structure2: {}", self.name2);
        let _ = writeln!(out, "score: {}", self.score);
        let _ = writeln!(out, "gaps: {}", self.gap_count);
        let _ = writeln!(out, "region1: {}", region_str(self.region1));
        let _ = writeln!(out, "region2: {}", region_str(self.region2));
        if let Some(ends) = &self.all_ends {
            let joined: Vec<String> = ends.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "optimal end columns: {}", joined.join(" "));
        }
        out.push('\n');
        if self.row1.is_empty() && self.row2.is_empty() {
            let _ = writeln!(out, "(empty alignment)");
            return out;
        }
        let markers: String = self
            .row1
            .chars()
            .zip(self.row2.chars())
            .map(|(a, b)| if a != '-' && b != '-' { '|' } else { ' ' })
            .collect();
        let _ = writeln!(out, "{}", self.row1);
        let _ = writeln!(out, "{}", self.annotation1);
        let _ = writeln!(out, "{}", markers);
        let _ = writeln!(out, "{}", self.annotation2);
        let _ = writeln!(out, "{}", self.row2);
        out
    }
}
