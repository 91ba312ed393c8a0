//! Symbol sequences over `[0, sigma)` with access, rank, select, partial rank
//! and range histograms.
//!
//! The payload is a wavelet matrix. Two extra directories sit next to it:
//! the per-symbol chunk counts used to decode stored rank answers, and a
//! group-local directory that answers partial rank without touching the
//! payload.

mod chunks;
mod prank;
mod wavelet;

use crate::bitvec::{BitVec, IntVec};
use crate::error::{Error, Result};
use crate::node_dict::HeavyLightParams;

pub(crate) use chunks::ChunkDirectory;
pub(crate) use prank::PartialRankDirectory;
use wavelet::WaveletMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceIndex {
    sigma: usize,
    payload: WaveletMatrix,
    chunks: ChunkDirectory,
    prank: PartialRankDirectory,
}

impl SequenceIndex {
    /// Group size for the partial-rank directory is the one the interval
    /// rank structure uses for this alphabet.
    pub fn new(symbols: &[u32], sigma: usize) -> Result<Self> {
        if sigma == 0 && !symbols.is_empty() {
            return Err(Error::SymbolOutOfAlphabet { symbol: symbols[0], sigma });
        }
        if let Some(&bad) = symbols.iter().find(|&&x| x as usize >= sigma) {
            return Err(Error::SymbolOutOfAlphabet { symbol: bad, sigma });
        }
        let sigma = sigma.max(1);
        let g = HeavyLightParams::for_alphabet(sigma).group_size();
        Ok(Self {
            sigma,
            payload: WaveletMatrix::new(symbols, sigma),
            chunks: ChunkDirectory::new(symbols, sigma),
            prank: PartialRankDirectory::new(symbols, sigma, g),
        })
    }

    pub fn len(&self) -> usize {
        self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            Err(Error::OutOfRange { index: i, len: self.len() })
        } else {
            Ok(())
        }
    }

    fn check_symbol(&self, a: u32) -> Result<()> {
        if a as usize >= self.sigma {
            Err(Error::SymbolOutOfAlphabet { symbol: a, sigma: self.sigma })
        } else {
            Ok(())
        }
    }

    pub fn access(&self, i: usize) -> Result<u32> {
        self.check(i)?;
        Ok(self.payload.access(i))
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> u32 {
        self.payload.access(i)
    }

    /// Occurrences of `a` in `S[0..=i]`.
    pub fn rank(&self, a: u32, i: usize) -> Result<usize> {
        self.check(i)?;
        self.check_symbol(a)?;
        Ok(self.payload.rank_before(a, i + 1))
    }

    /// Occurrences of `a` in `S[0..pos)`; `rank_before(a, 0) == 0` plays the
    /// role of rank at `-1`.
    #[inline]
    pub fn rank_before(&self, a: u32, pos: usize) -> usize {
        debug_assert!(pos <= self.len());
        self.payload.rank_before(a, pos)
    }

    pub fn count(&self, a: u32) -> usize {
        self.payload.rank_before(a, self.len())
    }

    /// Position of the `k`-th occurrence of `a`, `k >= 1`.
    pub fn select(&self, a: u32, k: usize) -> Result<usize> {
        self.check_symbol(a)?;
        if k == 0 || k > self.count(a) {
            return Err(Error::NotFound);
        }
        Ok(self.payload.select(a, k))
    }

    /// `rank(access(i), i)` from the group directory alone.
    pub fn partial_rank(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.prank.partial_rank(i))
    }

    #[inline]
    pub(crate) fn partial_rank_unchecked(&self, i: usize) -> usize {
        self.prank.partial_rank(i)
    }

    /// Histogram of `S[l..=r]` in ascending symbol order.
    pub fn distinct_symbols(&self, l: usize, r: usize) -> Result<Vec<(u32, usize)>> {
        if l > r {
            return Err(Error::ContractViolation(format!("empty range {l}..={r}")));
        }
        self.check(r)?;
        let mut out = Vec::new();
        self.for_each_distinct(l, r, |a, f| out.push((a, f)));
        Ok(out)
    }

    #[inline]
    pub(crate) fn for_each_distinct(&self, l: usize, r: usize, mut f: impl FnMut(u32, usize)) {
        self.payload.for_each_distinct(l, r + 1, &mut f);
    }

    /// Occurrences of `a` in all chunks before the one holding position `i`.
    #[inline]
    pub fn chunk_base(&self, a: u32, i: usize) -> usize {
        self.chunks.base(a, i / self.chunks.chunk_size())
    }

    pub fn chunk_size(&self) -> usize {
        self.chunks.chunk_size()
    }

    /// Rank through the chunk directory: chunk prefix count plus the count
    /// inside the chunk.
    pub fn rank_via_chunks(&self, a: u32, i: usize) -> Result<usize> {
        self.check(i)?;
        self.check_symbol(a)?;
        let k = i / self.chunks.chunk_size();
        let chunk_start = k * self.chunks.chunk_size();
        let inside = self.payload.rank_before(a, i + 1) - self.payload.rank_before(a, chunk_start);
        Ok(self.chunks.base(a, k) + inside)
    }

    pub(crate) fn prank(&self) -> &PartialRankDirectory {
        &self.prank
    }

    pub(crate) fn payload_levels(&self) -> &[BitVec] {
        self.payload.levels()
    }

    pub(crate) fn chunk_dir(&self) -> &ChunkDirectory {
        &self.chunks
    }

    pub(crate) fn from_parts(
        sigma: usize,
        len: usize,
        levels: Vec<BitVec>,
        chunk_bits: Vec<BitVec>,
        prank: [IntVec; 4],
    ) -> Result<Self> {
        let payload = WaveletMatrix::from_levels(len, levels)
            .ok_or_else(|| Error::CorruptIndex("sequence payload".into()))?;
        if chunk_bits.len() != sigma {
            return Err(Error::CorruptIndex("chunk directory".into()));
        }
        let g = HeavyLightParams::for_alphabet(sigma).group_size();
        let [slot, ordinal, group_slots, base] = prank;
        if slot.len() != len || ordinal.len() != len || group_slots.len() != len.div_ceil(g) + 1 {
            return Err(Error::CorruptIndex("partial rank directory".into()));
        }
        Ok(Self {
            sigma,
            payload,
            chunks: ChunkDirectory::from_parts(sigma, chunk_bits),
            prank: PartialRankDirectory::from_parts(g, slot, ordinal, group_slots, base),
        })
    }

    /// Payload bits plus its rank/select directories.
    pub fn payload_bits(&self) -> usize {
        self.payload.size_in_bits()
    }

    pub fn chunk_dir_bits(&self) -> usize {
        self.chunks.size_in_bits()
    }

    pub fn partial_rank_bits(&self) -> usize {
        self.prank.size_in_bits()
    }
}
