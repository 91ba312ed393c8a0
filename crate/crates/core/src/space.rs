//! Space accounting and empirical entropy of the indexed text.

use std::collections::HashMap;

use crate::search::SelfIndex;

/// Budget for dictionary storage, in bits per text symbol.
pub const DICT_BITS_PER_SYMBOL: f64 = 20.0;

/// Payload budget factor: payload plus its directories must stay within
/// `PAYLOAD_FACTOR * n * log2(sigma)` bits.
pub const PAYLOAD_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceReport {
    pub n: usize,
    pub sigma: usize,
    pub d: usize,
    pub sample_rate: usize,
    /// Wavelet levels of the reversed BWT plus their rank/select directories.
    pub payload_bits: usize,
    pub partial_rank_bits: usize,
    pub interval_rank_bits: usize,
    pub acc_bits: usize,
    pub samples_bits: usize,
    pub topology_bits: usize,
    /// Per-symbol chunk counts used to decode stored rank answers.
    pub chunk_dir_bits: usize,
    /// Marks, layout and entries of the node dictionaries.
    pub dict_entry_bits: usize,
    pub heavy_child_bits: usize,
    pub dict_count: usize,
    pub dict_entries: usize,
}

impl SpaceReport {
    pub fn of(idx: &SelfIndex) -> Self {
        let fm = idx.fm();
        let seq = fm.bwt();
        let dicts = idx.dicts();
        Self {
            n: idx.len(),
            sigma: idx.sigma(),
            d: idx.params().d,
            sample_rate: fm.sample_rate(),
            payload_bits: seq.payload_bits(),
            partial_rank_bits: seq.partial_rank_bits(),
            interval_rank_bits: fm.interval_index().size_in_bits(),
            acc_bits: 64 * fm.acc().len(),
            samples_bits: fm.samples().size_in_bits(),
            topology_bits: idx.topology().size_in_bits(),
            chunk_dir_bits: seq.chunk_dir_bits(),
            dict_entry_bits: dicts.dict_bits(),
            heavy_child_bits: dicts.heavy_child_bits(),
            dict_count: dicts.num_dicts(),
            dict_entries: dicts.total_entries(),
        }
    }

    /// Everything the dictionaries need: entries, marks, heavy child
    /// ordinals and the chunk counts that complete stored ranks.
    pub fn dictionary_bits(&self) -> usize {
        self.dict_entry_bits + self.heavy_child_bits + self.chunk_dir_bits
    }

    pub fn total_bits(&self) -> usize {
        self.payload_bits
            + self.partial_rank_bits
            + self.interval_rank_bits
            + self.acc_bits
            + self.samples_bits
            + self.topology_bits
            + self.dictionary_bits()
    }

    fn log_sigma(&self) -> f64 {
        (self.sigma.max(2) as f64).log2()
    }

    pub fn payload_budget(&self) -> f64 {
        PAYLOAD_FACTOR * self.n as f64 * self.log_sigma()
    }

    pub fn dictionary_budget(&self) -> f64 {
        DICT_BITS_PER_SYMBOL * self.n as f64
    }

    pub fn payload_within_budget(&self) -> bool {
        self.payload_bits as f64 <= self.payload_budget()
    }

    pub fn dictionary_within_budget(&self) -> bool {
        self.dictionary_bits() as f64 <= self.dictionary_budget()
    }

    /// `(name, bits)` per component.
    pub fn sections(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("bwt_payload", self.payload_bits),
            ("partial_rank", self.partial_rank_bits),
            ("interval_rank", self.interval_rank_bits),
            ("acc", self.acc_bits),
            ("samples", self.samples_bits),
            ("topology", self.topology_bits),
            ("chunk_dir", self.chunk_dir_bits),
            ("dicts", self.dict_entry_bits),
            ("heavy_child_idx", self.heavy_child_bits),
        ]
    }
}

/// Zero-order empirical entropy in bits per symbol.
pub fn entropy0(symbols: &[u32]) -> f64 {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for &c in symbols {
        *counts.entry(c).or_default() += 1;
    }
    h0_of_counts(counts.values().copied(), symbols.len())
}

fn h0_of_counts(counts: impl Iterator<Item = usize>, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts.filter(|&c| c > 0).map(|c| c as f64 / t).map(|p| -p * p.log2()).sum()
}

/// `k`-th order empirical entropy: the average zero-order entropy of the
/// symbols following each length-`k` context, weighted by context frequency.
pub fn entropy_k(symbols: &[u32], k: usize) -> f64 {
    let n = symbols.len();
    if k == 0 {
        return entropy0(symbols);
    }
    if n <= k {
        return 0.0;
    }
    let mut ctx: HashMap<&[u32], HashMap<u32, usize>> = HashMap::new();
    for i in k..n {
        *ctx.entry(&symbols[i - k..i]).or_default().entry(symbols[i]).or_default() += 1;
    }
    let total: f64 = ctx
        .values()
        .map(|h| {
            let m: usize = h.values().sum();
            m as f64 * h0_of_counts(h.values().copied(), m)
        })
        .sum();
    total / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropies() {
        assert_eq!(entropy0(&[]), 0.0);
        assert_eq!(entropy0(&[1, 1, 1]), 0.0);
        assert!((entropy0(&[1, 2, 1, 2]) - 1.0).abs() < 1e-12);
        // alternating text is fully predictable from one symbol of context
        let alt: Vec<u32> = (0..100).map(|i| i % 2).collect();
        assert!(entropy_k(&alt, 1).abs() < 1e-12);
        let t: Vec<u32> = b"mississippi".iter().map(|&b| b as u32).collect();
        let h0 = entropy0(&t);
        assert!((h0 - 1.8231).abs() < 1e-3);
        assert!(entropy_k(&t, 1) <= h0);
        assert!(entropy_k(&t, 2) <= entropy_k(&t, 1));
    }

    #[test]
    fn budgets_on_random_text() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for sigma in [2u8, 4, 16, 64, 255] {
            let bytes: Vec<u8> = (0..20000).map(|_| rng.gen_range(1..=sigma)).collect();
            let idx = SelfIndex::build(&bytes, None).unwrap();
            let rep = SpaceReport::of(&idx);
            assert!(rep.payload_within_budget(), "sigma {sigma}: {rep:?}");
            assert!(rep.dictionary_within_budget(), "sigma {sigma}: {rep:?}");
        }
    }
}
