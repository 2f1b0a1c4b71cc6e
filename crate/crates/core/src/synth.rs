//! Deterministic synthetic structure generators for tests and
//! benchmarks.

use crate::rna_model::{Base, RnaStructure};

/// Small deterministic generator (splitmix64) so fixtures reproduce
/// bit-identically everywhere.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..n`. Panics on `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}

fn random_bases(rng: &mut Rng, len: usize, alphabet_size: usize) -> Vec<Base> {
    (0..len)
        .map(|_| Base::ALL[rng.below(alphabet_size.clamp(1, 4))])
        .collect()
}

fn draw_pairs(rng: &mut Rng, len: usize, num_pairs: usize) -> Vec<(usize, usize)> {
    let mut pool: Vec<usize> = (1..=len).collect();
    // Partial Fisher-Yates: peel two random free positions per pair.
    let mut pairs = Vec::new();
    for _ in 0..num_pairs {
        if pool.len() < 2 {
            break;
        }
        let a = pool.swap_remove(rng.below(pool.len()));
        let b = pool.swap_remove(rng.below(pool.len()));
        pairs.push((a.min(b), a.max(b)));
    }
    pairs
}

/// Random structure with up to `max_pairs` pairs over the first
/// `alphabet_size` bases. Crossing pairs arise naturally.
pub fn random_structure(
    rng: &mut Rng,
    name: &str,
    len: usize,
    alphabet_size: usize,
    max_pairs: usize,
) -> RnaStructure {
    let bases = random_bases(rng, len, alphabet_size);
    let pairs = if len >= 2 && max_pairs > 0 {
        let count = rng.below(max_pairs + 1);
        draw_pairs(rng, len, count)
    } else {
        Vec::new()
    };
    RnaStructure::new(name, bases, pairs).expect("generated pairs are disjoint")
}

/// Random structure guaranteed to contain at least one crossing pair of
/// pairs, plus up to `extra_pairs` further random pairs. Requires
/// `len >= 4`.
pub fn random_crossing_structure(
    rng: &mut Rng,
    name: &str,
    len: usize,
    alphabet_size: usize,
    extra_pairs: usize,
) -> RnaStructure {
    assert!(len >= 4);
    let bases = random_bases(rng, len, alphabet_size);
    // Choose i1 < i2 < j1 < j2 for the crossing motif.
    let mut picks: Vec<usize> = Vec::new();
    let mut pool: Vec<usize> = (1..=len).collect();
    for _ in 0..4 {
        picks.push(pool.swap_remove(rng.below(pool.len())));
    }
    picks.sort_unstable();
    let mut pairs = vec![(picks[0], picks[2]), (picks[1], picks[3])];
    if extra_pairs > 0 && pool.len() >= 2 {
        let extra: Vec<(usize, usize)> = {
            let mut extras = Vec::new();
            for _ in 0..rng.below(extra_pairs + 1) {
                if pool.len() < 2 {
                    break;
                }
                let a = pool.swap_remove(rng.below(pool.len()));
                let b = pool.swap_remove(rng.below(pool.len()));
                extras.push((a.min(b), a.max(b)));
            }
            extras
        };
        pairs.extend(extra);
    }
    RnaStructure::new(name, bases, pairs).expect("generated pairs are disjoint")
}

/// Structure of length `len` whose first `k` positions pair with the
/// mirrored last `k`: `(1, len), (2, len-1), ...`. Bases cycle `ACGU`.
pub fn nested_structure(name: &str, len: usize, k: usize) -> RnaStructure {
    assert!(2 * k <= len);
    let bases: Vec<Base> = (0..len).map(|i| Base::ALL[i % 4]).collect();
    let pairs: Vec<(usize, usize)> = (1..=k).map(|t| (t, len + 1 - t)).collect();
    RnaStructure::new(name, bases, pairs).expect("nested pairs are disjoint")
}

/// Structure with `k` mutually crossing pairs `(t, t + k)`. Requires
/// `len >= 2k`.
pub fn all_crossing_structure(name: &str, len: usize, k: usize) -> RnaStructure {
    assert!(2 * k <= len);
    let bases: Vec<Base> = (0..len).map(|i| Base::ALL[i % 4]).collect();
    let pairs: Vec<(usize, usize)> = (1..=k).map(|t| (t, t + k)).collect();
    RnaStructure::new(name, bases, pairs).expect("crossing pairs are disjoint")
}

/// The substructure on window `[start..=end]`: bases of the window and
/// the pairs lying wholly inside it, re-indexed to 1-based window
/// coordinates. Pairs reaching outside the window are dropped.
pub fn cut_window(r: &RnaStructure, start: usize, end: usize) -> RnaStructure {
    let bases: Vec<Base> = (start..=end).map(|p| r.base(p)).collect();
    let pairs: Vec<(usize, usize)> = r
        .pairs()
        .iter()
        .filter(|&&(i, j)| i >= start && j <= end)
        .map(|&(i, j)| (i - start + 1, j - start + 1))
        .collect();
    RnaStructure::new(format!("{}[{}..{}]", r.name(), start, end), bases, pairs)
        .expect("window pairs stay disjoint")
}
