//! Comparison of RNA structures with possibly crossing base pairs:
//! exact structural pattern matching in linear time, and affine-gap
//! structural alignment in three modes (global, fit, local) via a
//! two-phase dynamic program with traceback.
//!
//! - [`rna_model`]: structure representation, parsing and validation.
//! - [`scoring`]: similarity schemes, derived element scores, alignment
//!   validation and independent rescoring.
//! - [`exact_match`]: linear-time exact matching through a pairing
//!   offset encoding and string matching.
//! - [`align_dp`]: the two-phase alignment algorithm.
//! - [`oracle`]: brute-force references for verification.
//! - [`synth`]: deterministic fixture generators for tests and benches.
//!
//! All positions are 1-based in the public API, and all scores are
//! exact half-integers.

pub mod align_dp;
pub mod exact_match;
pub mod oracle;
pub mod rna_model;
pub mod scoring;
pub mod synth;

pub use align_dp::{
    align, best_end, best_fit_ends, phase1_pair_table, window_dp, AlignError, DpTables, PairTable,
    Window,
};
pub use exact_match::{encode_labels, exact_occurrences, kmp_find_all, LabelString, MatchError};
pub use oracle::{enumerate_alignments, naive_exact_match, oracle_best, OracleError};
pub use rna_model::{
    parse_rna, parse_structure, validate_pairs, Base, PartnerMap, RnaStructure, StructureError,
    StructureFormat,
};
pub use scoring::{
    derive_element_scores, load_scheme, sim_score, validate_alignment, AlignMode, AlignmentColumn,
    AlignmentResult, AlignmentViolation, ElementScores, SchemeError, Score, ScoringScheme,
};
