//! Heavy/light classification of suffix tree nodes and the per-node symbol
//! dictionaries that carry precomputed rank answers on the reversed BWT.
//!
//! A node is heavy when it has at least `d` leaves. Dictionaries are kept for
//! special nodes (two or more heavy children) and for heavy nodes with one
//! heavy child and at least `d` light children. Each entry stores the two rank
//! answers as remainders inside their chunk of the reversed BWT; the chunk
//! prefix count is recovered from the chunk directory at query time, so an
//! entry costs `O(log sigma)` bits.

use crate::bitvec::{bits_for, BitVec, BitVecBuilder, IntVec};
use crate::error::{Error, Result};
use crate::sequence::SequenceIndex;
use crate::suffix::{NodeId, SuffixTreeTopo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeavyLightParams {
    /// Heaviness threshold.
    pub d: usize,
}

impl HeavyLightParams {
    /// `d = max(2, ceil(log2 sigma))`.
    pub fn for_alphabet(sigma: usize) -> Self {
        let log = if sigma <= 1 { 0 } else { (usize::BITS - (sigma - 1).leading_zeros()) as usize };
        Self { d: log.max(2) }
    }

    /// Group size of the interval rank structure, `max(d^2, 4)`.
    pub fn group_size(&self) -> usize {
        (self.d * self.d).max(4)
    }
}

/// Heavy-child summary of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeShape {
    pub heavy: bool,
    pub heavy_children: usize,
    pub light_children: usize,
    /// Ordinal of the first heavy child, if any.
    pub first_heavy: Option<usize>,
}

impl NodeShape {
    pub fn of(topo: &SuffixTreeTopo, v: NodeId, d: usize) -> Self {
        let heavy = topo.num_leaves(v) >= d;
        let mut shape = NodeShape { heavy, heavy_children: 0, light_children: 0, first_heavy: None };
        if !heavy {
            return shape;
        }
        for (j, c) in topo.children(v).enumerate() {
            if topo.num_leaves(c) >= d {
                shape.heavy_children += 1;
                shape.first_heavy.get_or_insert(j);
            } else {
                shape.light_children += 1;
            }
        }
        shape
    }

    pub fn is_special(&self) -> bool {
        self.heavy && self.heavy_children >= 2
    }

    /// Whether the node carries a dictionary.
    pub fn needs_dict(&self, d: usize) -> bool {
        self.is_special() || (self.heavy && self.heavy_children == 1 && self.light_children >= d)
    }
}

/// Output of the classification pass.
#[derive(Debug, Clone)]
pub struct NodeClassification {
    pub marked: BitVec,
    pub heavy_child_idx: IntVec,
    pub heavy_nodes: usize,
    pub special_nodes: usize,
}

/// One pass over the topology in preorder.
pub fn classify_nodes(topo: &SuffixTreeTopo, params: HeavyLightParams) -> NodeClassification {
    let d = params.d;
    let mut marked = BitVecBuilder::with_capacity(topo.num_nodes());
    let mut heavy_child = IntVec::new(bits_for(d as u64));
    let (mut heavy_nodes, mut special_nodes) = (0, 0);
    let bits = topo.bits();
    for pos in 0..bits.len() {
        if !bits.get(pos) {
            continue;
        }
        let shape = NodeShape::of(topo, NodeId(pos), d);
        heavy_nodes += shape.heavy as usize;
        special_nodes += shape.is_special() as usize;
        let mark = shape.needs_dict(d);
        marked.push(mark);
        if !mark {
            let v = match (shape.heavy_children, shape.first_heavy) {
                (1, Some(j)) => j as u64 + 1,
                _ => 0,
            };
            heavy_child.push(v);
        }
    }
    NodeClassification { marked: marked.build(), heavy_child_idx: heavy_child, heavy_nodes, special_nodes }
}

/// Decoded dictionary entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DictEntry {
    /// Ordinal of the heavy child among the node's children.
    pub child: usize,
    /// `rank_a(l - 1)` on the reversed BWT.
    pub rank_lo: usize,
    /// `rank_a(r)` on the reversed BWT.
    pub rank_hi: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDicts {
    params: HeavyLightParams,
    sigma: usize,
    /// D: marks node preorders that own a dictionary.
    marked: BitVec,
    /// Unary layout: dictionary `k` is a 1 followed by one 0 per entry.
    bounds: BitVec,
    keys: IntVec,
    child: IntVec,
    rem_lo: IntVec,
    rem_hi: IntVec,
    heavy_child_idx: IntVec,
}

impl NodeDicts {
    pub fn params(&self) -> HeavyLightParams {
        self.params
    }

    pub fn marked(&self) -> &BitVec {
        &self.marked
    }

    pub fn is_marked(&self, preorder: usize) -> bool {
        self.marked.get(preorder)
    }

    pub fn num_dicts(&self) -> usize {
        self.marked.count_ones()
    }

    pub fn total_entries(&self) -> usize {
        self.keys.len()
    }

    fn entry_range(&self, k: usize) -> (usize, usize) {
        let start = self.bounds.select1_unchecked(k + 1) - k;
        let end = if k + 1 < self.bounds.count_ones() {
            self.bounds.select1_unchecked(k + 2) - (k + 1)
        } else {
            self.keys.len()
        };
        (start, end)
    }

    /// Keys of the dictionary at `preorder`, ascending.
    pub fn keys_of(&self, preorder: usize) -> Result<Vec<u32>> {
        let k = self.dict_index(preorder)?;
        let (s, e) = self.entry_range(k);
        Ok((s..e).map(|i| self.keys.get(i) as u32).collect())
    }

    fn dict_index(&self, preorder: usize) -> Result<usize> {
        if preorder >= self.marked.len() || !self.marked.get(preorder) {
            return Err(Error::ContractViolation(format!("node {preorder} has no dictionary")));
        }
        Ok(self.marked.rank1_before(preorder))
    }

    /// Entry for `a` at the node with preorder `preorder`, whose reversed-BWT
    /// interval is `[l, r]`.
    pub fn lookup(&self, preorder: usize, a: u32, l: usize, r: usize, bbar: &SequenceIndex) -> Result<Option<DictEntry>> {
        let k = self.dict_index(preorder)?;
        let (s, e) = self.entry_range(k);
        let (mut lo, mut hi) = (s, e);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match (self.keys.get(mid) as u32).cmp(&a) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => {
                    let rank_lo = if l == 0 { 0 } else { bbar.chunk_base(a, l - 1) + self.rem_lo.get(mid) as usize };
                    let rank_hi = bbar.chunk_base(a, r) + self.rem_hi.get(mid) as usize;
                    return Ok(Some(DictEntry { child: self.child.get(mid) as usize, rank_lo, rank_hi }));
                }
            }
        }
        Ok(None)
    }

    /// Ordinal of the single heavy child of an unmarked heavy node.
    pub fn heavy_child_of(&self, preorder: usize) -> Result<usize> {
        if preorder >= self.marked.len() {
            return Err(Error::OutOfRange { index: preorder, len: self.marked.len() });
        }
        if self.marked.get(preorder) {
            return Err(Error::ContractViolation(format!("node {preorder} has a dictionary")));
        }
        match self.heavy_child_idx.get(self.marked.rank0_before(preorder)) {
            0 => Err(Error::NotFound),
            j => Ok(j as usize - 1),
        }
    }

    pub(crate) fn parts(&self) -> (&BitVec, &BitVec, [&IntVec; 5]) {
        (
            &self.marked,
            &self.bounds,
            [&self.keys, &self.child, &self.rem_lo, &self.rem_hi, &self.heavy_child_idx],
        )
    }

    pub(crate) fn from_parts(sigma: usize, marked: BitVec, bounds: BitVec, ints: [IntVec; 5]) -> Result<Self> {
        let [keys, child, rem_lo, rem_hi, heavy_child_idx] = ints;
        let ok = bounds.count_ones() == marked.count_ones()
            && bounds.count_zeros() == keys.len()
            && [child.len(), rem_lo.len(), rem_hi.len()].iter().all(|&x| x == keys.len())
            && heavy_child_idx.len() == marked.count_zeros();
        if !ok {
            return Err(Error::CorruptIndex("node dictionaries".into()));
        }
        Ok(Self {
            params: HeavyLightParams::for_alphabet(sigma),
            sigma,
            marked,
            bounds,
            keys,
            child,
            rem_lo,
            rem_hi,
            heavy_child_idx,
        })
    }

    /// Bits of D, the dictionary layout and entries.
    pub fn dict_bits(&self) -> usize {
        self.marked.size_in_bits()
            + self.bounds.size_in_bits()
            + [&self.keys, &self.child, &self.rem_lo, &self.rem_hi].iter().map(|v| v.size_in_bits()).sum::<usize>()
    }

    pub fn heavy_child_bits(&self) -> usize {
        self.heavy_child_idx.size_in_bits()
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }
}

/// Collects dictionaries in arbitrary node order and packs them.
#[derive(Debug)]
pub struct NodeDictsBuilder {
    params: HeavyLightParams,
    sigma: usize,
    class: NodeClassification,
    pending: Vec<Option<Vec<(u32, u32, u64, u64)>>>,
}

impl NodeDictsBuilder {
    pub fn new(sigma: usize, params: HeavyLightParams, class: NodeClassification) -> Self {
        let pending = vec![None; class.marked.count_ones()];
        Self { params, sigma, class, pending }
    }

    pub fn is_marked(&self, preorder: usize) -> bool {
        self.class.marked.get(preorder)
    }

    /// `entries` are `(symbol, child ordinal, rank_lo, rank_hi)` for the node
    /// whose reversed-BWT interval is `[l, r]`.
    pub fn insert(
        &mut self,
        preorder: usize,
        entries: &[(u32, usize, usize, usize)],
        l: usize,
        r: usize,
        bbar: &SequenceIndex,
    ) -> Result<()> {
        if !self.is_marked(preorder) {
            return Err(Error::ContractViolation(format!("node {preorder} is not marked")));
        }
        let k = self.class.marked.rank1_before(preorder);
        if self.pending[k].is_some() {
            return Err(Error::ContractViolation(format!("dictionary of node {preorder} filled twice")));
        }
        let mut packed: Vec<(u32, u32, u64, u64)> = entries
            .iter()
            .map(|&(a, j, lo, hi)| {
                let rem_lo = if l == 0 { lo } else { lo - bbar.chunk_base(a, l - 1) };
                let rem_hi = hi - bbar.chunk_base(a, r);
                (a, j as u32, rem_lo as u64, rem_hi as u64)
            })
            .collect();
        packed.sort_unstable_by_key(|e| e.0);
        if packed.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::ContractViolation(format!("duplicate key in dictionary of node {preorder}")));
        }
        self.pending[k] = Some(packed);
        Ok(())
    }

    /// Preorders of marked nodes that never received a dictionary.
    pub fn missing(&self) -> Vec<usize> {
        self.pending
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(k, _)| self.class.marked.select1_unchecked(k + 1))
            .collect()
    }

    pub fn finish(self) -> Result<NodeDicts> {
        let missing = self.missing();
        if !missing.is_empty() {
            return Err(Error::ContractViolation(format!("{} marked nodes without dictionary", missing.len())));
        }
        let sigma = self.sigma;
        let key_w = bits_for(sigma.saturating_sub(1) as u64);
        let rem_w = bits_for(sigma as u64);
        let max_child = self.pending.iter().flatten().flatten().map(|e| e.1).max().unwrap_or(0);
        let mut keys = IntVec::new(key_w);
        let mut child = IntVec::new(bits_for(max_child as u64));
        let mut rem_lo = IntVec::new(rem_w);
        let mut rem_hi = IntVec::new(rem_w);
        let mut bounds = BitVecBuilder::new();
        for dict in self.pending.into_iter().flatten() {
            bounds.push(true);
            for (a, j, lo, hi) in dict {
                bounds.push(false);
                keys.push(a as u64);
                child.push(j as u64);
                rem_lo.push(lo);
                rem_hi.push(hi);
            }
        }
        Ok(NodeDicts {
            params: self.params,
            sigma,
            marked: self.class.marked,
            bounds: bounds.build(),
            keys,
            child,
            rem_lo,
            rem_hi,
            heavy_child_idx: self.class.heavy_child_idx,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suffix::{SuffixArrayBundle, Text};
    use csax_oracle::naive_suffix_tree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn params() {
        assert_eq!(HeavyLightParams::for_alphabet(1).d, 2);
        assert_eq!(HeavyLightParams::for_alphabet(2).d, 2);
        assert_eq!(HeavyLightParams::for_alphabet(4).d, 2);
        assert_eq!(HeavyLightParams::for_alphabet(5).d, 3);
        assert_eq!(HeavyLightParams::for_alphabet(256).d, 8);
        assert_eq!(HeavyLightParams::for_alphabet(257).d, 9);
        assert_eq!(HeavyLightParams::for_alphabet(2).group_size(), 4);
        assert_eq!(HeavyLightParams::for_alphabet(64).group_size(), 36);
    }

    fn topo_of(bytes: &[u8]) -> (Text, SuffixTreeTopo) {
        let t = Text::from_bytes(bytes).unwrap();
        let topo = SuffixArrayBundle::new(&t).topology(&t);
        (t, topo)
    }

    #[test]
    fn banana_classification() {
        let (_, topo) = topo_of(b"banana");
        let params = HeavyLightParams { d: 2 };
        let class = classify_nodes(&topo, params);
        // preorder: root, $, a, a$, ana, anaa$.., anana$, banana$, na, na$, nana$
        let heavy: Vec<usize> = (0..topo.num_nodes())
            .filter(|&p| NodeShape::of(&topo, topo.node_at_preorder(p).unwrap(), 2).heavy)
            .collect();
        let by_range = |l, r| topo.preorder(topo.node_from_range(l, r).unwrap());
        let mut expect = vec![0, by_range(1, 3), by_range(2, 3), by_range(5, 6)];
        expect.sort();
        assert_eq!(heavy, expect);
        // root: heavy children "a" and "na" => special
        assert!(class.marked.get(0));
        assert_eq!(class.special_nodes, 1);
        // "a" has one heavy child ("ana") and one light child ("a$"), 1 < d
        let a = by_range(1, 3);
        assert!(!class.marked.get(a));
        assert_eq!(class.heavy_child_idx.get(class.marked.rank0_before(a)), 2);
    }

    #[test]
    fn only_root_heavy() {
        // every symbol distinct: internal nodes = root only
        let (_, topo) = topo_of(b"abcdefgh");
        let class = classify_nodes(&topo, HeavyLightParams { d: 3 });
        assert_eq!(class.heavy_nodes, 1);
        // all children are leaves, so the root has no heavy child
        assert!(!class.marked.get(0));
        assert_eq!(class.heavy_child_idx.get(0), 0);
    }

    #[test]
    fn chain_heavy_child() {
        let (_, topo) = topo_of(b"aaaaaaaa");
        let class = classify_nodes(&topo, HeavyLightParams { d: 2 });
        // each internal node: children "$"-leaf (light) then the next chain node
        let mut v = topo.root();
        while !topo.is_leaf(v) && topo.num_leaves(v) > 2 {
            let p = topo.preorder(v);
            assert!(!class.marked.get(p));
            let j = class.heavy_child_idx.get(class.marked.rank0_before(p)) as usize - 1;
            assert_eq!(j, 1);
            v = topo.child(v, j).unwrap();
        }
    }

    #[test]
    fn marking_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for &sigma in &[2u8, 4, 16, 64] {
            for _ in 0..4 {
                let n = rng.gen_range(1..2000);
                let bytes: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
                let (t, topo) = topo_of(&bytes);
                let params = HeavyLightParams::for_alphabet(t.sigma());
                let d = params.d;
                let class = classify_nodes(&topo, params);
                let mut special = 0;
                for node in naive_suffix_tree(t.symbols()) {
                    let v = topo.node_from_range(node.lb, node.rb).unwrap();
                    let heavy = node.leaves() >= d;
                    let hc = node.children.iter().filter(|c| c.1 >= d).count();
                    let lc = node.children.len() - hc;
                    let expect = heavy && (hc >= 2 || (hc == 1 && lc >= d));
                    special += (heavy && hc >= 2) as usize;
                    assert_eq!(class.marked.get(topo.preorder(v)), expect);
                }
                assert_eq!(class.special_nodes, special);
                assert!(special <= n / d + 1);
                // leaves are never marked
                for i in 0..t.len() {
                    assert!(!class.marked.get(topo.preorder(topo.leaf(i).unwrap())));
                }
            }
        }
    }
}
