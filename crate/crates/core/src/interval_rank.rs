//! Small interval rank queries over a sequence.
//!
//! The sequence is cut into groups of `g` positions. For each group we keep
//! its distinct symbols encoded as their first offset inside the group, plus
//! one increasing list of offsets per symbol. A query over a window of width
//! at most `g` touches at most two groups and finishes with two partial rank
//! lookups, never a general rank.
//!
//! Membership and predecessor searches are binary searches over these short
//! sorted arrays.

use crate::bitvec::{bits_for, IntVec};
use crate::error::{Error, Result};
use crate::sequence::SequenceIndex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRankIndex {
    g: usize,
    len: usize,
    /// Per global slot: first offset of the slot's symbol inside its group.
    first_offset: IntVec,
    /// Per global slot position: local slot ids of the group sorted by symbol.
    by_symbol: IntVec,
    /// Per global slot: start of its offset list inside the group's segment of `occ`.
    list_start: IntVec,
    /// Group `i` owns `occ[i*g .. i*g + group_len]`; lists are in slot order.
    occ: IntVec,
}

impl IntervalRankIndex {
    pub fn new(seq: &SequenceIndex) -> Self {
        let prank = seq.prank();
        let g = prank.group_size();
        let n = seq.len();
        let width = bits_for(g.saturating_sub(1) as u64);
        let slot_width = bits_for(g as u64);

        let mut first_offset = IntVec::new(width);
        let mut by_symbol = IntVec::new(width);
        let mut list_start = IntVec::new(slot_width);
        let mut occ = IntVec::new(width);

        let mut firsts: Vec<(u32, usize)> = Vec::with_capacity(g);
        let mut counts: Vec<usize> = Vec::with_capacity(g);
        let mut fill: Vec<usize> = Vec::with_capacity(g);
        let mut group_occ = vec![0u64; g];
        for gi in 0..n.div_ceil(g) {
            let start = gi * g;
            let end = (start + g).min(n);
            let (gs, ge) = prank.group_slot_range(gi);
            firsts.clear();
            counts.clear();
            counts.resize(ge - gs, 0);
            for p in start..end {
                let s = prank.slot(p);
                if s == firsts.len() {
                    firsts.push((seq.get(p), p - start));
                }
                counts[s] += 1;
            }
            fill.clear();
            let mut acc = 0;
            for (s, &(_, off)) in firsts.iter().enumerate() {
                first_offset.push(off as u64);
                list_start.push(acc as u64);
                fill.push(acc);
                acc += counts[s];
            }
            for p in start..end {
                let s = prank.slot(p);
                group_occ[fill[s]] = (p - start) as u64;
                fill[s] += 1;
            }
            for &o in &group_occ[..end - start] {
                occ.push(o);
            }
            let mut order: Vec<usize> = (0..firsts.len()).collect();
            order.sort_unstable_by_key(|&s| firsts[s].0);
            for s in order {
                by_symbol.push(s as u64);
            }
        }

        Self { g, len: n, first_offset, by_symbol, list_start, occ }
    }

    pub fn group_size(&self) -> usize {
        self.g
    }

    pub fn num_groups(&self) -> usize {
        self.len.div_ceil(self.g)
    }

    /// Local slot of `a` in group `gi`, found by binary search over the
    /// symbol-sorted slots (each comparison is one access).
    fn find_slot(&self, seq: &SequenceIndex, gi: usize, a: u32) -> Option<usize> {
        let (gs, ge) = seq.prank().group_slot_range(gi);
        let start = gi * self.g;
        let (mut lo, mut hi) = (0usize, ge - gs);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let s = self.by_symbol.get(gs + mid) as usize;
            let sym = seq.get(start + self.first_offset.get(gs + s) as usize);
            match sym.cmp(&a) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(s),
            }
        }
        None
    }

    /// Bounds of the occurrence list of local slot `s` in group `gi`, as
    /// indices into `occ`.
    fn list(&self, seq: &SequenceIndex, gi: usize, s: usize) -> (usize, usize) {
        let (gs, ge) = seq.prank().group_slot_range(gi);
        let base = gi * self.g;
        let from = self.list_start.get(gs + s) as usize;
        let to = if gs + s + 1 < ge {
            self.list_start.get(gs + s + 1) as usize
        } else {
            self.len.min(base + self.g) - base
        };
        (base + from, base + to)
    }

    /// Largest offset `<= hi` and `>= lo` of `a` inside group `gi`.
    fn rightmost(&self, seq: &SequenceIndex, gi: usize, a: u32, lo: usize, hi: usize) -> Option<usize> {
        let s = self.find_slot(seq, gi, a)?;
        let (from, to) = self.list(seq, gi, s);
        let k = partition(from, to, |i| self.occ.get(i) as usize <= hi);
        (k > from).then(|| self.occ.get(k - 1) as usize).filter(|&o| o >= lo)
    }

    /// Smallest offset `>= lo` and `<= hi` of `a` inside group `gi`.
    fn leftmost(&self, seq: &SequenceIndex, gi: usize, a: u32, lo: usize, hi: usize) -> Option<usize> {
        let s = self.find_slot(seq, gi, a)?;
        let (from, to) = self.list(seq, gi, s);
        let k = partition(from, to, |i| (self.occ.get(i) as usize) < lo);
        (k < to).then(|| self.occ.get(k) as usize).filter(|&o| o <= hi)
    }

    /// `<rank_a(i-1), rank_a(j)>` if `a` occurs in `seq[i..=j]`, `None`
    /// otherwise. Requires `j - i <= g`.
    pub fn rank_pair(&self, seq: &SequenceIndex, a: u32, i: usize, j: usize) -> Result<Option<(usize, usize)>> {
        if i > j || j >= self.len {
            return Err(Error::OutOfRange { index: j, len: self.len });
        }
        if j - i > self.g {
            return Err(Error::ContractViolation(format!(
                "interval rank window {i}..={j} wider than group size {}",
                self.g
            )));
        }
        if a as usize >= seq.sigma() {
            return Ok(None);
        }
        let (gx, gy) = (i / self.g, j / self.g);
        debug_assert!(gy - gx <= 1);

        let window = |gi: usize| {
            let start = gi * self.g;
            let lo = i.max(start) - start;
            let hi = j.min(start + self.g - 1) - start;
            (start, lo, hi)
        };

        // rightmost occurrence, right group first
        let mut right = None;
        for gi in (gx..=gy).rev() {
            let (start, lo, hi) = window(gi);
            if let Some(o) = self.rightmost(seq, gi, a, lo, hi) {
                right = Some(start + o);
                break;
            }
        }
        let Some(right) = right else { return Ok(None) };

        let mut left = right;
        for gi in gx..=gy {
            let (start, lo, hi) = window(gi);
            if let Some(o) = self.leftmost(seq, gi, a, lo, hi) {
                left = start + o;
                break;
            }
        }

        let p = seq.prank();
        Ok(Some((p.partial_rank(left) - 1, p.partial_rank(right))))
    }

    /// Occurrences of `a` before group `gi`, if `a` occurs in that group.
    pub fn base_rank(&self, seq: &SequenceIndex, a: u32, gi: usize) -> Option<usize> {
        let s = self.find_slot(seq, gi, a)?;
        let (gs, _) = seq.prank().group_slot_range(gi);
        Some(seq.prank().base(gs + s))
    }

    /// Increasing in-group offsets of `a` in group `gi`.
    pub fn offsets(&self, seq: &SequenceIndex, a: u32, gi: usize) -> Vec<usize> {
        match self.find_slot(seq, gi, a) {
            Some(s) => {
                let (from, to) = self.list(seq, gi, s);
                (from..to).map(|k| self.occ.get(k) as usize).collect()
            }
            None => Vec::new(),
        }
    }

    /// Distinct symbols of group `gi` with their first offsets, in first-occurrence order.
    pub fn group_symbols(&self, seq: &SequenceIndex, gi: usize) -> Vec<(u32, usize)> {
        let (gs, ge) = seq.prank().group_slot_range(gi);
        (gs..ge)
            .map(|k| {
                let off = self.first_offset.get(k) as usize;
                (seq.get(gi * self.g + off), off)
            })
            .collect()
    }

    pub(crate) fn parts(&self) -> [&IntVec; 4] {
        [&self.first_offset, &self.by_symbol, &self.list_start, &self.occ]
    }

    pub(crate) fn from_parts(g: usize, len: usize, parts: [IntVec; 4]) -> Result<Self> {
        let [first_offset, by_symbol, list_start, occ] = parts;
        if occ.len() != len || first_offset.len() != by_symbol.len() || first_offset.len() != list_start.len() {
            return Err(Error::CorruptIndex("interval rank tables".into()));
        }
        Ok(Self { g, len, first_offset, by_symbol, list_start, occ })
    }

    pub fn size_in_bits(&self) -> usize {
        self.parts().iter().map(|v| v.size_in_bits()).sum()
    }
}

/// First index in `[from, to)` where `pred` turns false.
fn partition(mut from: usize, mut to: usize, pred: impl Fn(usize) -> bool) -> usize {
    while from < to {
        let mid = (from + to) / 2;
        if pred(mid) {
            from = mid + 1;
        } else {
            to = mid;
        }
    }
    from
}

#[cfg(test)]
mod tests {
    use super::*;
    use csax_oracle::naive_interval_rank;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ANNB: [u32; 7] = [1, 3, 3, 2, 0, 1, 1];

    fn build(s: &[u32], sigma: usize) -> (SequenceIndex, IntervalRankIndex) {
        let seq = SequenceIndex::new(s, sigma).unwrap();
        let irx = IntervalRankIndex::new(&seq);
        (seq, irx)
    }

    #[test]
    fn annb_groups() {
        let (seq, irx) = build(&ANNB, 4);
        assert_eq!(irx.group_size(), 4);
        assert_eq!(irx.num_groups(), 2);
        assert_eq!(irx.group_symbols(&seq, 0), vec![(1, 0), (3, 1), (2, 3)]);
        assert_eq!(irx.group_symbols(&seq, 1), vec![(0, 0), (1, 1)]);
        assert_eq!(irx.offsets(&seq, 3, 0), vec![1, 2]);
        assert_eq!(irx.base_rank(&seq, 1, 1), Some(1));
    }

    #[test]
    fn annb_queries() {
        let (seq, irx) = build(&ANNB, 4);
        assert_eq!(irx.rank_pair(&seq, 1, 4, 6).unwrap(), Some((1, 3)));
        assert_eq!(irx.rank_pair(&seq, 2, 4, 6).unwrap(), None);
        for i in 0..7 {
            let a = ANNB[i];
            let pr = seq.partial_rank(i).unwrap();
            assert_eq!(irx.rank_pair(&seq, a, i, i).unwrap(), Some((pr - 1, pr)));
        }
        assert!(matches!(irx.rank_pair(&seq, 1, 0, 5), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn single_group_and_uniform() {
        let (seq, irx) = build(&[2, 2, 2], 3);
        assert_eq!(irx.num_groups(), 1);
        let (seq2, irx2) = build(&[1; 40], 2);
        for gi in 0..irx2.num_groups() {
            assert_eq!(irx2.group_symbols(&seq2, gi).len(), 1);
            let glen = (40 - gi * 4).min(4);
            assert_eq!(irx2.offsets(&seq2, 1, gi), (0..glen).collect::<Vec<_>>());
        }
        assert_eq!(irx.rank_pair(&seq, 2, 0, 2).unwrap(), Some((0, 3)));
    }

    #[test]
    fn exhaustive_small_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &sigma in &[2usize, 4, 16, 64, 256] {
            let m = 600;
            let s: Vec<u32> = (0..m).map(|_| rng.gen_range(0..sigma as u32)).collect();
            let (seq, irx) = build(&s, sigma);
            let g = irx.group_size();
            for gi in 0..irx.num_groups() {
                for (a, off) in irx.group_symbols(&seq, gi) {
                    // first offsets really are first occurrences
                    assert!(!s[gi * g..gi * g + off].contains(&a));
                    assert_eq!(s[gi * g + off], a);
                    let offs = irx.offsets(&seq, a, gi);
                    assert!(offs.windows(2).all(|w| w[0] < w[1]));
                    let base = irx.base_rank(&seq, a, gi).unwrap();
                    assert_eq!(base, s[..gi * g].iter().filter(|&&x| x == a).count());
                }
            }
            for i in 0..m {
                for j in i..m.min(i + g + 1) {
                    for a in 0..sigma.min(20) as u32 {
                        assert_eq!(irx.rank_pair(&seq, a, i, j).unwrap(), naive_interval_rank(&s, &a, i, j));
                    }
                }
            }
        }
    }
}
