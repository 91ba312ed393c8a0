//! FM-index over the BWT of the reversed text.
//!
//! Working on the reversed text means a backward step on its BWT extends the
//! current pattern prefix to the right, so patterns are consumed left to
//! right and the search can walk down the suffix tree of the original text.
//! The LF mapping on the same BWT moves forward in the original text, which
//! is what `extract` uses.

use crate::bitvec::{bits_for, BitVec, BitVecBuilder, IntVec};
use crate::counters::QueryStats;
use crate::error::{Error, Result};
use crate::interval_rank::IntervalRankIndex;
use crate::sequence::SequenceIndex;
use crate::suffix::{SuffixArrayBundle, Text};

/// Default sampling step, `max(1, ceil(log2 n))`.
pub fn default_sample_rate(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        ((usize::BITS - (n - 1).leading_zeros()) as usize).max(1)
    }
}

/// Suffix array samples of the reversed text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledSA {
    b: usize,
    /// Rows whose suffix array value is a multiple of `b` or `n - 1`.
    marked: BitVec,
    values: IntVec,
    /// Row of reversed-text position `k * b`.
    inv: IntVec,
}

impl SampledSA {
    pub fn new(sa: &[usize], b: usize) -> Self {
        let n = sa.len();
        let width = bits_for(n.saturating_sub(1) as u64);
        let mut marked = BitVecBuilder::with_capacity(n);
        let mut values = IntVec::new(width);
        let mut inv = vec![0u64; n.div_ceil(b)];
        for (row, &p) in sa.iter().enumerate() {
            let m = p % b == 0 || p + 1 == n;
            marked.push(m);
            if m {
                values.push(p as u64);
            }
            if p % b == 0 {
                inv[p / b] = row as u64;
            }
        }
        Self { b, marked: marked.build(), values, inv: IntVec::from_slice_with_width(&inv, width) }
    }

    pub fn sample_rate(&self) -> usize {
        self.b
    }

    pub fn is_sampled(&self, row: usize) -> bool {
        self.marked.get(row)
    }

    pub fn num_samples(&self) -> usize {
        self.values.len()
    }

    fn value(&self, row: usize) -> usize {
        self.values.get(self.marked.rank1_before(row)) as usize
    }

    pub(crate) fn parts(&self) -> (&BitVec, &IntVec, &IntVec) {
        (&self.marked, &self.values, &self.inv)
    }

    pub(crate) fn from_parts(b: usize, marked: BitVec, values: IntVec, inv: IntVec) -> Result<Self> {
        let n = marked.len();
        if b == 0 || values.len() != marked.count_ones() || inv.len() != n.div_ceil(b) {
            return Err(Error::CorruptIndex("suffix array samples".into()));
        }
        Ok(Self { b, marked, values, inv })
    }

    pub fn size_in_bits(&self) -> usize {
        self.marked.size_in_bits() + self.values.size_in_bits() + self.inv.size_in_bits()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMIndex {
    n: usize,
    bwt: SequenceIndex,
    irx: IntervalRankIndex,
    acc: Vec<usize>,
    samples: SampledSA,
}

impl FMIndex {
    /// Index over the reverse of `text`.
    pub fn new(text: &Text, b: usize) -> Result<Self> {
        let rev = text.reversed();
        let bundle = SuffixArrayBundle::new(&rev);
        Self::from_reversed(&rev, bundle, b)
    }

    /// `rev` is the reversed text and `bundle` its suffix array and BWT.
    pub fn from_reversed(rev: &Text, bundle: SuffixArrayBundle, b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::ContractViolation("sample rate must be at least 1".into()));
        }
        let sigma = rev.sigma();
        let SuffixArrayBundle { sa, bwt } = bundle;
        let samples = SampledSA::new(&sa, b);
        drop(sa);
        let seq = SequenceIndex::new(&bwt, sigma)?;
        let irx = IntervalRankIndex::new(&seq);
        let acc = acc_from_counts(&seq);
        Ok(Self { n: rev.len(), bwt: seq, irx, acc, samples })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sigma(&self) -> usize {
        self.bwt.sigma()
    }

    pub fn sample_rate(&self) -> usize {
        self.samples.b
    }

    /// `acc[a]` = number of symbols smaller than `a`.
    pub fn acc(&self) -> &[usize] {
        &self.acc
    }

    /// The reversed-text BWT.
    pub fn bwt(&self) -> &SequenceIndex {
        &self.bwt
    }

    pub fn interval_index(&self) -> &IntervalRankIndex {
        &self.irx
    }

    pub fn samples(&self) -> &SampledSA {
        &self.samples
    }

    /// Interval of `aX` given the interval `[l, r]` of `X`, by two general
    /// rank queries.
    pub fn backward_step(&self, a: u32, l: usize, r: usize, stats: &mut QueryStats) -> Option<(usize, usize)> {
        debug_assert!(l <= r && r < self.n);
        if a as usize >= self.sigma() {
            return None;
        }
        stats.general_rank += 2;
        let lo = self.bwt.rank_before(a, l);
        let hi = self.bwt.rank_before(a, r + 1);
        (lo < hi).then(|| self.backward_step_with_ranks(a, lo, hi))
    }

    /// Interval from precomputed `rank_a(l - 1)` and `rank_a(r)`.
    #[inline]
    pub fn backward_step_with_ranks(&self, a: u32, rank_lo: usize, rank_hi: usize) -> (usize, usize) {
        debug_assert!(rank_lo < rank_hi);
        let base = self.acc[a as usize];
        (base + rank_lo, base + rank_hi - 1)
    }

    /// Row of the reversed-text suffix one position to the left.
    pub fn lf(&self, j: usize) -> Result<usize> {
        if j >= self.n {
            return Err(Error::OutOfRange { index: j, len: self.n });
        }
        Ok(self.lf_counted(j, &mut QueryStats::default()))
    }

    #[inline]
    pub(crate) fn lf_counted(&self, j: usize, stats: &mut QueryStats) -> usize {
        stats.access += 1;
        stats.partial_rank += 1;
        stats.lf_steps += 1;
        let c = self.bwt.get(j);
        self.acc[c as usize] + self.bwt.partial_rank_unchecked(j) - 1
    }

    /// `Some(c)` if every symbol of `B[l..=r]` is `c`: the end symbols agree
    /// and their partial ranks differ by the width.
    pub fn uniform_symbol(&self, l: usize, r: usize, stats: &mut QueryStats) -> Option<u32> {
        stats.access += 2;
        let c = self.bwt.get(l);
        if self.bwt.get(r) != c {
            return None;
        }
        stats.partial_rank += 2;
        (self.bwt.partial_rank_unchecked(r) - self.bwt.partial_rank_unchecked(l) == r - l).then_some(c)
    }

    /// Small interval rank on the reversed BWT.
    pub fn interval_rank(&self, a: u32, i: usize, j: usize, stats: &mut QueryStats) -> Result<Option<(usize, usize)>> {
        stats.interval_rank += 1;
        let out = self.irx.rank_pair(&self.bwt, a, i, j)?;
        if out.is_some() {
            stats.partial_rank += 2;
        }
        Ok(out)
    }

    /// Suffix array value of `row` in the reversed text.
    pub fn sa_value(&self, row: usize, stats: &mut QueryStats) -> usize {
        let mut row = row;
        let mut steps = 0;
        while !self.samples.is_sampled(row) {
            row = self.lf_counted(row, stats);
            steps += 1;
        }
        self.samples.value(row) + steps
    }

    /// Text positions of the occurrences whose reversed-BWT interval is
    /// `[l, r]`, for a pattern of length `m`. Unsorted.
    pub fn locate(&self, l: usize, r: usize, m: usize, stats: &mut QueryStats) -> Vec<usize> {
        let n = self.n;
        (l..=r)
            .map(|row| {
                let p = self.sa_value(row, stats);
                // the occurrence ends at reversed position p, start maps back mod n
                (2 * n - 1 - p - m % n) % n
            })
            .collect()
    }

    /// `T[i..i+len]` as symbols, sentinel included when reached.
    pub fn extract(&self, i: usize, len: usize, stats: &mut QueryStats) -> Result<Vec<u32>> {
        let n = self.n;
        if i > n || len > n - i {
            return Err(Error::OutOfRange { index: i.saturating_add(len), len: n });
        }
        if len == 0 {
            return Ok(Vec::new());
        }
        // reading B at the row of reversed position q yields T[n - 1 - q]
        let q = n - 1 - i;
        let b = self.samples.b;
        let next = q.div_ceil(b) * b;
        let (mut row, start) = if next < n {
            (self.samples.inv.get(next / b) as usize, next)
        } else {
            (0, n - 1)
        };
        for _ in q..start {
            row = self.lf_counted(row, stats);
        }
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            stats.access += 1;
            out.push(self.bwt.get(row));
            if k + 1 < len {
                row = self.lf_counted(row, stats);
            }
        }
        Ok(out)
    }

    pub(crate) fn from_parts(bwt: SequenceIndex, irx: IntervalRankIndex, acc: Vec<usize>, samples: SampledSA) -> Result<Self> {
        let n = bwt.len();
        if acc != acc_from_counts(&bwt) || samples.marked.len() != n {
            return Err(Error::CorruptIndex("fm index components".into()));
        }
        Ok(Self { n, bwt, irx, acc, samples })
    }
}

fn acc_from_counts(seq: &SequenceIndex) -> Vec<usize> {
    let mut acc = Vec::with_capacity(seq.sigma());
    let mut sum = 0;
    for a in 0..seq.sigma() as u32 {
        acc.push(sum);
        sum += seq.count(a);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use csax_oracle::{naive_positions, naive_rank, naive_sa};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn banana(b: usize) -> (Text, FMIndex) {
        let t = Text::from_bytes(b"banana").unwrap();
        let fm = FMIndex::new(&t, b).unwrap();
        (t, fm)
    }

    #[test]
    fn acc_and_steps() {
        let (_, fm) = banana(2);
        assert_eq!(fm.acc(), &[0, 1, 4, 5]);
        let mut st = QueryStats::default();
        assert_eq!(fm.backward_step(1, 0, 6, &mut st), Some((1, 3)));
        assert_eq!(fm.backward_step(0, 0, 6, &mut st), Some((0, 0)));
        assert_eq!(st.general_rank, 4);
        assert_eq!(fm.backward_step_with_ranks(1, 0, 3), (1, 3));
        assert_eq!(fm.backward_step_with_ranks(1, 2, 3), (3, 3));
        // row 0 is the sentinel suffix of "ananab$", preceded by 'b' only
        assert_eq!(fm.backward_step(2, 0, 0, &mut st), Some((4, 4)));
        assert_eq!(fm.backward_step(3, 0, 0, &mut st), None);
    }

    #[test]
    fn single_symbol_text() {
        let t = Text::from_bytes(b"").unwrap();
        let fm = FMIndex::new(&t, 1).unwrap();
        assert_eq!(fm.acc(), &[0]);
        assert_eq!(fm.lf(0).unwrap(), 0);
        let mut st = QueryStats::default();
        assert_eq!(fm.locate(0, 0, 1, &mut st), vec![0]);
        assert_eq!(fm.extract(0, 1, &mut st).unwrap(), vec![0]);
    }

    #[test]
    fn sparse_sampling() {
        let (t, fm) = banana(7);
        // only values 0 and n-1 are sampled
        assert_eq!(fm.samples().num_samples(), 2);
        let mut st = QueryStats::default();
        assert_eq!(fm.extract(0, 7, &mut st).unwrap(), t.symbols());
    }

    #[test]
    fn lf_identity_banana() {
        let (t, fm) = banana(3);
        let rev = t.reversed();
        let sa = naive_sa(rev.symbols());
        let n = sa.len();
        for j in 0..n {
            assert_eq!(sa[fm.lf(j).unwrap()], (sa[j] + n - 1) % n);
        }
        let zero = sa.iter().position(|&p| p == 0).unwrap();
        assert_eq!(sa[fm.lf(zero).unwrap()], n - 1);
        assert!(fm.lf(n).is_err());
    }

    #[test]
    fn locate_banana() {
        let (_, fm) = banana(2);
        let mut st = QueryStats::default();
        let find = |pat: &[u32], st: &mut QueryStats| {
            let (mut l, mut r) = (0, fm.len() - 1);
            for &a in pat {
                (l, r) = fm.backward_step(a, l, r, st).unwrap();
            }
            let mut v = fm.locate(l, r, pat.len(), st);
            v.sort();
            v
        };
        assert_eq!(find(&[1, 3, 1], &mut st), vec![1, 3]);
        assert_eq!(find(&[2, 1, 3, 1, 3, 1], &mut st), vec![0]);
        assert_eq!(find(&[0], &mut st), vec![6]);
        assert_eq!(fm.extract(1, 3, &mut st).unwrap(), vec![1, 3, 1]);
        assert!(fm.extract(5, 3, &mut st).is_err());
    }

    #[test]
    fn sample_rate_one_needs_no_steps() {
        let t = Text::from_bytes(b"mississippi").unwrap();
        let fm = FMIndex::new(&t, 1).unwrap();
        let mut st = QueryStats::default();
        fm.locate(0, fm.len() - 1, 1, &mut st);
        assert_eq!(st.lf_steps, 0);
    }

    #[test]
    fn random_against_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for &sigma in &[2u8, 4, 16, 200] {
            for _ in 0..10 {
                let n = rng.gen_range(0..1500);
                let bytes: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
                let t = Text::from_bytes(&bytes).unwrap();
                let b = rng.gen_range(1..12);
                let fm = FMIndex::new(&t, b).unwrap();
                let rev = t.reversed();
                let sa = naive_sa(rev.symbols());
                let len = t.len();
                let mut seen = vec![false; len];
                for j in 0..len {
                    let k = fm.lf(j).unwrap();
                    assert_eq!(sa[k], (sa[j] + len - 1) % len);
                    assert!(!seen[k]);
                    seen[k] = true;
                    let mut st = QueryStats::default();
                    assert_eq!(fm.sa_value(j, &mut st), sa[j]);
                    assert!(st.lf_steps < b as u64);
                    assert_eq!(st.general_rank, 0);
                }
                let s = t.symbols();
                let bbar: Vec<u32> = (0..len).map(|i| fm.bwt().access(i).unwrap()).collect();
                for _ in 0..30 {
                    let i = rng.gen_range(0..len);
                    let l = rng.gen_range(0..=len - i);
                    let mut st = QueryStats::default();
                    assert_eq!(fm.extract(i, l, &mut st).unwrap(), &s[i..i + l]);
                    assert_eq!(st.general_rank, 0);
                }
                for _ in 0..20 {
                    let i = rng.gen_range(0..len);
                    let m = rng.gen_range(1..6).min(len - i);
                    let pat = &s[i..i + m];
                    let mut st = QueryStats::default();
                    let (mut l, mut r) = (0, len - 1);
                    for &a in pat {
                        let lo = naive_rank(&bbar, &a, l as isize - 1);
                        let hi = naive_rank(&bbar, &a, r as isize);
                        (l, r) = fm.backward_step(a, l, r, &mut st).unwrap();
                        assert_eq!((l, r), fm.backward_step_with_ranks(a, lo, hi));
                    }
                    let mut got = fm.locate(l, r, m, &mut st);
                    got.sort();
                    assert_eq!(got, naive_positions(s, pat));
                }
            }
        }
    }
}
