//! Shared fixtures for the rnamatch benchmarks.

use rnamatch::synth::{self, Rng};
use rnamatch::RnaStructure;

/// Random text structure with ~5% paired positions and a pattern cut
/// from its middle, reproducible from the seed.
pub fn text_and_pattern(seed: u64, text_len: usize, pattern_len: usize) -> (RnaStructure, RnaStructure) {
    let mut rng = Rng::new(seed);
    let text = synth::random_structure(&mut rng, "text", text_len, 4, text_len / 40);
    let start = text_len / 2;
    let pattern = synth::cut_window(&text, start, start + pattern_len - 1);
    (text, pattern)
}

/// Unpaired random structure.
pub fn unpaired(seed: u64, len: usize) -> RnaStructure {
    let mut rng = Rng::new(seed);
    synth::random_structure(&mut rng, "unpaired", len, 4, 0)
}
