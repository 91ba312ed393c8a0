//! Plain bitvectors with rank/select directories, and a packed integer array.
//!
//! Ranks are exposed in two flavours. `rank1(i)` is the inclusive count over
//! `bits[0..=i]` and rejects out-of-range indices. `rank1_before(pos)` counts
//! `bits[0..pos)` and is what the hot paths use, so that "rank at -1" is just
//! `rank1_before(0) == 0`.

use crate::error::{Error, Result};

const WORD: usize = 64;
const WORDS_PER_SUPER: usize = 8;
const SUPER_BITS: usize = WORD * WORDS_PER_SUPER;
const SELECT_SAMPLE: usize = 512;

/// Appends bits one at a time and freezes into a [`BitVec`].
#[derive(Debug, Default, Clone)]
pub struct BitVecBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitVecBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self { words: Vec::with_capacity(bits.div_ceil(WORD)), len: 0 }
    }

    /// `len` zero bits, to be flipped with [`BitVecBuilder::set`].
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(WORD)], len }
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / WORD] |= 1 << (self.len % WORD);
        }
        self.len += 1;
    }

    pub fn push_run(&mut self, bit: bool, count: usize) {
        for _ in 0..count {
            self.push(bit);
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn build(self) -> BitVec {
        BitVec::from_words(self.words, self.len)
    }
}

/// Immutable bitvector with constant-time rank and sampled select.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    /// Ones before each 512-bit superblock.
    supers: Vec<u64>,
    /// Ones before each word, relative to its superblock.
    blocks: Vec<u16>,
    /// Superblock holding every `SELECT_SAMPLE`-th one (1-based ordinals 1, 513, ...).
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl BitVec {
    /// Builds the directories in a single pass over `words`. Bits past `len`
    /// in the last word are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(WORD), 0);
        if !len.is_multiple_of(WORD) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD)) - 1;
        }

        let n_supers = words.len().div_ceil(WORDS_PER_SUPER);
        let mut supers = Vec::with_capacity(n_supers + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut select1_hints = Vec::new();
        let mut select0_hints = Vec::new();
        let mut total = 0usize;
        let mut rel = 0usize;
        for (w, &word) in words.iter().enumerate() {
            if w % WORDS_PER_SUPER == 0 {
                supers.push(total as u64);
                rel = 0;
            }
            blocks.push(rel as u16);
            let ones = word.count_ones() as usize;
            let width = WORD.min(len - w * WORD);
            let zeros = width - ones;
            let zeros_before = w * WORD - total;
            // does this word contain the ordinal 1 + SELECT_SAMPLE * h?
            while select1_hints.len() * SELECT_SAMPLE < total + ones {
                select1_hints.push((w / WORDS_PER_SUPER) as u32);
            }
            while select0_hints.len() * SELECT_SAMPLE < zeros_before + zeros {
                select0_hints.push((w / WORDS_PER_SUPER) as u32);
            }
            total += ones;
            rel += ones;
        }
        supers.push(total as u64);

        Self { words, len, ones: total, supers, blocks, select1_hints, select0_hints }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut b = BitVecBuilder::new();
        for bit in bits {
            b.push(bit);
        }
        b.build()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    /// Ones in `bits[0..pos)`; `pos` may equal `len`.
    #[inline]
    pub fn rank1_before(&self, pos: usize) -> usize {
        debug_assert!(pos <= self.len);
        if pos == self.len {
            return self.ones;
        }
        let w = pos / WORD;
        let base = self.supers[w / WORDS_PER_SUPER] as usize + self.blocks[w] as usize;
        let mask = (1u64 << (pos % WORD)) - 1;
        base + (self.words[w] & mask).count_ones() as usize
    }

    #[inline]
    pub fn rank0_before(&self, pos: usize) -> usize {
        pos - self.rank1_before(pos)
    }

    /// Ones in `bits[0..=i]`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i >= self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.rank1_before(i + 1))
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        if i >= self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.rank0_before(i + 1))
    }

    /// Position of the `k`-th one, `k >= 1`.
    pub fn select1(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.ones {
            return Err(Error::NotFound);
        }
        Ok(self.select_impl::<true>(k))
    }

    /// Position of the `k`-th zero, `k >= 1`.
    pub fn select0(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.count_zeros() {
            return Err(Error::NotFound);
        }
        Ok(self.select_impl::<false>(k))
    }

    /// Unchecked select for internal callers that already validated `k`.
    #[inline]
    pub(crate) fn select1_unchecked(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.ones);
        self.select_impl::<true>(k)
    }

    #[inline]
    pub(crate) fn select0_unchecked(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.count_zeros());
        self.select_impl::<false>(k)
    }

    fn select_impl<const ONE: bool>(&self, k: usize) -> usize {
        let before_super = |s: usize| -> usize {
            let ones = self.supers[s] as usize;
            if ONE {
                ones
            } else {
                (s * SUPER_BITS).min(self.len) - ones
            }
        };
        let hints = if ONE { &self.select1_hints } else { &self.select0_hints };
        let h = (k - 1) / SELECT_SAMPLE;
        let mut lo = hints[h] as usize;
        let mut hi = hints.get(h + 1).map_or(self.supers.len() - 1, |&s| s as usize + 1);
        // last superblock `s` in [lo, hi) with before_super(s) < k
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if before_super(mid) < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut remaining = k - before_super(lo);
        let first = lo * WORDS_PER_SUPER;
        let last = (first + WORDS_PER_SUPER).min(self.words.len());
        for w in first..last {
            let word = if ONE { self.words[w] } else { !self.words[w] };
            let c = word.count_ones() as usize;
            if remaining <= c {
                return w * WORD + select_in_word(word, remaining);
            }
            remaining -= c;
        }
        unreachable!("select directory inconsistent")
    }

    /// Bits used by the payload plus directories.
    pub fn size_in_bits(&self) -> usize {
        self.words.len() * 64
            + self.supers.len() * 64
            + self.blocks.len() * 16
            + (self.select1_hints.len() + self.select0_hints.len()) * 32
    }
}

/// Index of the `k`-th (1-based) set bit of `word`.
#[inline]
fn select_in_word(mut word: u64, k: usize) -> usize {
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

/// Number of bits needed to store values in `[0, max]`, at least 1.
pub fn bits_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

/// Fixed-width packed integer array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntVec {
    words: Vec<u64>,
    len: usize,
    width: u32,
}

impl IntVec {
    pub fn new(width: u32) -> Self {
        assert!((1..=64).contains(&width));
        Self { words: Vec::new(), len: 0, width }
    }

    /// Packs `values` using the smallest width that holds the maximum.
    pub fn from_slice(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        Self::from_slice_with_width(values, bits_for(max))
    }

    pub fn from_slice_with_width(values: &[u64], width: u32) -> Self {
        let mut v = Self::new(width);
        v.words.reserve((values.len() * width as usize).div_ceil(64));
        for &x in values {
            v.push(x);
        }
        v
    }

    pub(crate) fn from_raw(words: Vec<u64>, len: usize, width: u32) -> Result<Self> {
        if !(1..=64).contains(&width) || words.len() != (len * width as usize).div_ceil(64) {
            return Err(Error::CorruptIndex("packed array dimensions".into()));
        }
        Ok(Self { words, len, width })
    }

    pub fn push(&mut self, x: u64) {
        let w = self.width as usize;
        debug_assert!(w == 64 || x < (1u64 << w), "{x} does not fit in {w} bits");
        let bit = self.len * w;
        let (i, off) = (bit / 64, bit % 64);
        if i >= self.words.len() {
            self.words.push(0);
        }
        self.words[i] |= x << off;
        if off + w > 64 {
            self.words.push(x >> (64 - off));
        }
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, idx: usize) -> u64 {
        debug_assert!(idx < self.len);
        let w = self.width as usize;
        let bit = idx * w;
        let (i, off) = (bit / 64, bit % 64);
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        let mut x = self.words[i] >> off;
        if off + w > 64 {
            x |= self.words[i + 1] << (64 - off);
        }
        x & mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn size_in_bits(&self) -> usize {
        self.words.len() * 64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVec {
        BitVec::from_bits(s.bytes().map(|c| c == b'1'))
    }

    #[test]
    fn empty() {
        let b = bv("");
        assert_eq!(b.count_ones(), 0);
        assert_eq!(b.rank1_before(0), 0);
        assert!(b.rank1(0).is_err());
        assert!(b.select1(1).is_err());
    }

    #[test]
    fn small_examples() {
        let b = bv("101101");
        assert_eq!(b.count_ones(), 4);
        assert_eq!(b.rank1(4).unwrap(), 3);
        assert_eq!(b.rank1_before(0), 0);
        assert_eq!(b.select1(1).unwrap(), 0);
        assert_eq!(b.select1(4).unwrap(), 5);
        assert_eq!(b.select0(2).unwrap(), 4);
        assert!(b.select1(5).is_err());
        assert!(b.rank1(6).is_err());
        assert_eq!(bv("000").rank1(2).unwrap(), 0);
        assert_eq!(bv("1").select1(1).unwrap(), 0);
    }

    #[test]
    fn all_ones() {
        let b = BitVec::from_bits(std::iter::repeat_n(true, 64));
        assert_eq!(b.rank1(63).unwrap(), 64);
        assert_eq!(b.select1(64).unwrap(), 63);
    }

    #[test]
    fn large_round_trip() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let bits: Vec<bool> = (0..1_000_000)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state.is_multiple_of(3)
            })
            .collect();
        let b = BitVec::from_bits(bits.iter().copied());
        for k in 1..=b.count_ones() {
            let p = b.select1(k).unwrap();
            assert!(b.get(p));
            assert_eq!(b.rank1(p).unwrap(), k);
        }
        for k in (1..=b.count_zeros()).step_by(7) {
            let p = b.select0(k).unwrap();
            assert!(!b.get(p));
            assert_eq!(b.rank0(p).unwrap(), k);
        }
    }

    #[test]
    fn intvec_widths() {
        for width in [1u32, 3, 7, 13, 31, 63, 64] {
            let max = if width == 64 { u64::MAX } else { (1 << width) - 1 };
            let vals: Vec<u64> = (0..300u64).map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15) & max).collect();
            let v = IntVec::from_slice_with_width(&vals, width);
            assert_eq!(v.iter().collect::<Vec<_>>(), vals);
        }
        assert_eq!(bits_for(0), 1);
        assert_eq!(bits_for(4), 3);
    }

    proptest! {
        #[test]
        fn matches_scan(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
            let b = BitVec::from_bits(bits.iter().copied());
            let mut ones = 0;
            for (i, &bit) in bits.iter().enumerate() {
                prop_assert_eq!(b.rank1_before(i), ones);
                if bit {
                    ones += 1;
                    prop_assert_eq!(b.select1(ones).unwrap(), i);
                } else {
                    prop_assert_eq!(b.select0(i + 1 - ones).unwrap(), i);
                }
                prop_assert_eq!(b.rank1(i).unwrap() + b.rank0(i).unwrap(), i + 1);
            }
            prop_assert_eq!(b.count_ones(), ones);
        }
    }
}
