use crate::bitvec::{bits_for, BitVec, BitVecBuilder};

/// Wavelet matrix: one bitvector per bit of the symbol code, most significant
/// level first, each level stably partitioned zeros-then-ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct WaveletMatrix {
    len: usize,
    levels: Vec<BitVec>,
    zeros: Vec<usize>,
}

impl WaveletMatrix {
    pub fn new(symbols: &[u32], sigma: usize) -> Self {
        let depth = bits_for(sigma.saturating_sub(1) as u64) as usize;
        let mut cur: Vec<u32> = symbols.to_vec();
        let mut next_zero = Vec::with_capacity(cur.len());
        let mut next_one = Vec::with_capacity(cur.len());
        let mut levels = Vec::with_capacity(depth);
        let mut zeros = Vec::with_capacity(depth);
        for level in 0..depth {
            let shift = depth - 1 - level;
            let mut b = BitVecBuilder::with_capacity(cur.len());
            next_zero.clear();
            next_one.clear();
            for &x in &cur {
                let bit = (x >> shift) & 1 == 1;
                b.push(bit);
                if bit {
                    next_one.push(x);
                } else {
                    next_zero.push(x);
                }
            }
            let bv = b.build();
            zeros.push(bv.count_zeros());
            levels.push(bv);
            cur.clear();
            cur.extend_from_slice(&next_zero);
            cur.extend_from_slice(&next_one);
        }
        Self { len: symbols.len(), levels, zeros }
    }

    pub fn from_levels(len: usize, levels: Vec<BitVec>) -> Option<Self> {
        if levels.iter().any(|l| l.len() != len) || levels.is_empty() {
            return None;
        }
        let zeros = levels.iter().map(|l| l.count_zeros()).collect();
        Some(Self { len, levels, zeros })
    }

    pub fn levels(&self) -> &[BitVec] {
        &self.levels
    }

    fn depth(&self) -> usize {
        self.levels.len()
    }

    #[inline]
    pub fn access(&self, mut i: usize) -> u32 {
        let mut sym = 0u32;
        for (lv, bv) in self.levels.iter().enumerate() {
            let bit = bv.get(i);
            sym = (sym << 1) | bit as u32;
            i = if bit { self.zeros[lv] + bv.rank1_before(i) } else { bv.rank0_before(i) };
        }
        sym
    }

    /// Occurrences of `a` in `[0, pos)`.
    #[inline]
    pub fn rank_before(&self, a: u32, pos: usize) -> usize {
        let (mut s, mut e) = (0usize, pos);
        let d = self.depth();
        for (lv, bv) in self.levels.iter().enumerate() {
            if (a >> (d - 1 - lv)) & 1 == 1 {
                s = self.zeros[lv] + bv.rank1_before(s);
                e = self.zeros[lv] + bv.rank1_before(e);
            } else {
                s = bv.rank0_before(s);
                e = bv.rank0_before(e);
            }
        }
        e - s
    }

    /// Position of the `k`-th occurrence of `a`; caller checks `1 <= k <= count`.
    pub fn select(&self, a: u32, k: usize) -> usize {
        let d = self.depth();
        let mut s = 0usize;
        for (lv, bv) in self.levels.iter().enumerate() {
            s = if (a >> (d - 1 - lv)) & 1 == 1 {
                self.zeros[lv] + bv.rank1_before(s)
            } else {
                bv.rank0_before(s)
            };
        }
        let mut p = s + k - 1;
        for lv in (0..d).rev() {
            let bv = &self.levels[lv];
            p = if (a >> (d - 1 - lv)) & 1 == 1 {
                bv.select1_unchecked(p - self.zeros[lv] + 1)
            } else {
                bv.select0_unchecked(p + 1)
            };
        }
        p
    }

    /// Calls `f(symbol, frequency)` for each distinct symbol in `[l, r)`.
    pub fn for_each_distinct(&self, l: usize, r: usize, f: &mut impl FnMut(u32, usize)) {
        if l < r {
            self.distinct_rec(0, l, r, 0, f);
        }
    }

    fn distinct_rec(&self, lv: usize, s: usize, e: usize, prefix: u32, f: &mut impl FnMut(u32, usize)) {
        if lv == self.depth() {
            f(prefix, e - s);
            return;
        }
        let bv = &self.levels[lv];
        let (s0, e0) = (bv.rank0_before(s), bv.rank0_before(e));
        if e0 > s0 {
            self.distinct_rec(lv + 1, s0, e0, prefix << 1, f);
        }
        let z = self.zeros[lv];
        let (s1, e1) = (z + (s - s0), z + (e - e0));
        if e1 > s1 {
            self.distinct_rec(lv + 1, s1, e1, (prefix << 1) | 1, f);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn size_in_bits(&self) -> usize {
        self.levels.iter().map(BitVec::size_in_bits).sum::<usize>() + self.zeros.len() * 64
    }
}
