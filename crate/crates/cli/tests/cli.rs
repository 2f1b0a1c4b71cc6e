//! End-to-end tests of the rnamatch binary.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use rnamatch::{align, AlignMode, RnaStructure, ScoringScheme};
use rnamatch_cli::OutputRecord;

fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rnamatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exact_reports_positions_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pat = write_file(&dir, "pat.struct", ">pat\nAU\n()\n");
    let txt = write_file(&dir, "txt.struct", ">txt\nGGAUAU\n..()()\n");
    let out = run(&["exact", "-1", pat.to_str().unwrap(), "-2", txt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "3\n5\n");

    let none = write_file(&dir, "none.struct", ">none\nCCCC\n....\n");
    let out = run(&["exact", "-1", pat.to_str().unwrap(), "-2", none.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "");
}

#[test]
fn parse_error_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(&dir, "bad.struct", ">bad\nACGU\n(.((\n");
    let ok = write_file(&dir, "ok.struct", ">ok\nA\n.\n");
    let out = run(&["exact", "-1", bad.to_str().unwrap(), "-2", ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.struct"), "stderr names the file: {err}");
    assert!(err.contains("line 3"), "stderr names the line: {err}");
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["global", "-1", "/nonexistent.struct", "-2", "/nonexistent.struct"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fit_tsv_matches_library_score() {
    let dir = tempfile::tempdir().unwrap();
    let pat = write_file(&dir, "a.struct", ">a\nGAAC\n.().\n");
    let txt = write_file(&dir, "b.struct", ">b\nUUGAACUU\n...()...\n");
    let out = run(&[
        "fit",
        "-1",
        pat.to_str().unwrap(),
        "-2",
        txt.to_str().unwrap(),
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record = OutputRecord::parse_tsv(&stdout(&out)).unwrap();

    let r1 = RnaStructure::from_parts("a", "GAAC", &[(2, 3)]).unwrap();
    let r2 = RnaStructure::from_parts("b", "UUGAACUU", &[(4, 5)]).unwrap();
    let expected = align(&r1, &r2, AlignMode::Fit, &ScoringScheme::default()).unwrap();
    assert_eq!(record.score, expected.score);
    assert_eq!(record.region1, expected.region1);
    assert_eq!(record.region2, expected.region2);
    assert_eq!(record.gap_count, expected.gap_count);
    assert_eq!(record.row1, expected.row1);
}

#[test]
fn scheme_file_changes_scores() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(&dir, "a.struct", ">a\nA\n.\n");
    let b = write_file(&dir, "b.struct", ">b\nA\n.\n");
    let scheme = write_file(&dir, "s.scheme", "base_match = 7\n");
    let out = run(&[
        "global",
        "-1",
        a.to_str().unwrap(),
        "-2",
        b.to_str().unwrap(),
        "--scheme",
        scheme.to_str().unwrap(),
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record = OutputRecord::parse_tsv(&stdout(&out)).unwrap();
    assert_eq!(record.score.to_string(), "7.0");

    let bad = write_file(&dir, "bad.scheme", "gap_open = -1\n");
    let out = run(&[
        "global",
        "-1",
        a.to_str().unwrap(),
        "-2",
        b.to_str().unwrap(),
        "--scheme",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("gap_open"), "names the broken rule: {err}");
}

#[test]
fn fit_all_ends_lists_every_optimum() {
    let dir = tempfile::tempdir().unwrap();
    // Pattern A fits equally well at both A positions of the text.
    let pat = write_file(&dir, "a.struct", ">a\nA\n.\n");
    let txt = write_file(&dir, "b.struct", ">b\nCACAC\n.....\n");
    let out = run(&[
        "fit",
        "-1",
        pat.to_str().unwrap(),
        "-2",
        txt.to_str().unwrap(),
        "--all-ends",
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record = OutputRecord::parse_tsv(&stdout(&out)).unwrap();
    assert_eq!(record.all_ends, Some(vec![2, 4]));
    assert_eq!(record.region2, Some((2, 2)), "smallest end on ties");
}

#[test]
fn strict_pairs_warns_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let odd = write_file(&dir, "odd.struct", ">odd\nAA\n()\n");
    let out = run(&[
        "exact",
        "-1",
        odd.to_str().unwrap(),
        "-2",
        odd.to_str().unwrap(),
        "--strict-pairs",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("non-canonical pair"), "{err}");

    // Without the flag the parse is silent.
    let out = run(&["exact", "-1", odd.to_str().unwrap(), "-2", odd.to_str().unwrap()]);
    assert!(String::from_utf8(out.stderr).unwrap().is_empty());
}

#[test]
fn oracle_subcommand_prints_reference_score() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(&dir, "a.struct", ">a\nGAAC\n....\n");
    let b = write_file(&dir, "b.struct", ">b\nUUGAACUU\n........\n");
    let out = run(&[
        "oracle",
        "-1",
        a.to_str().unwrap(),
        "-2",
        b.to_str().unwrap(),
        "--mode",
        "local",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "8.0\n");

    // Hidden from the default help output.
    let help = run(&["--help"]);
    assert!(!stdout(&help).contains("oracle"));
}

#[test]
fn local_empty_alignment_renders() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_file(&dir, "a.struct", ">a\nA\n.\n");
    let c = write_file(&dir, "c.struct", ">c\nC\n.\n");
    let out = run(&["local", "-1", a.to_str().unwrap(), "-2", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("score: 0.0"));
    assert!(text.contains("(empty alignment)"));
}

#[test]
fn pairlist_input_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let pat = write_file(&dir, "p.struct", ">p\nAU\n#pairs\n1 2\n");
    let txt = write_file(&dir, "t.struct", ">t\nAUAU\n#pairs\n1 2\n3 4\n");
    let out = run(&["exact", "-1", pat.to_str().unwrap(), "-2", txt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\n3\n");
}
