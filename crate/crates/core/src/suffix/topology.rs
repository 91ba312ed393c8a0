//! Balanced-parentheses encoding of the suffix tree shape.
//!
//! Navigation is built on excess searches over a range min-max tree: block
//! minima of the excess sequence are kept in a segment tree over 64-bit
//! blocks, so forward/backward searches and range minima touch one or two
//! partial blocks plus a logarithmic tree walk.

use crate::bitvec::{BitVec, BitVecBuilder};
use crate::error::{Error, Result};

const BLOCK: usize = 64;

/// Handle of a tree node: position of its opening parenthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    pub fn position(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BalancedParens {
    bits: BitVec,
    /// Segment tree of absolute block minima, leaves at `[width, 2*width)`.
    tree: Vec<i64>,
    width: usize,
}

impl BalancedParens {
    fn new(bits: BitVec) -> Self {
        let nblocks = bits.len().div_ceil(BLOCK).max(1);
        let width = nblocks.next_power_of_two();
        let mut tree = vec![i64::MAX; 2 * width];
        let mut e = 0i64;
        for b in 0..bits.len().div_ceil(BLOCK) {
            let mut m = i64::MAX;
            for p in b * BLOCK..((b + 1) * BLOCK).min(bits.len()) {
                e += if bits.get(p) { 1 } else { -1 };
                m = m.min(e);
            }
            tree[width + b] = m;
        }
        for i in (1..width).rev() {
            tree[i] = tree[2 * i].min(tree[2 * i + 1]);
        }
        Self { bits, tree, width }
    }

    fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    fn is_open(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    #[inline]
    fn delta(&self, i: usize) -> i64 {
        if self.bits.get(i) {
            1
        } else {
            -1
        }
    }

    /// Excess over `bits[0..pos)`.
    #[inline]
    fn excess_before(&self, pos: usize) -> i64 {
        2 * self.bits.rank1_before(pos) as i64 - pos as i64
    }

    /// Excess over `bits[0..=i]`.
    #[inline]
    fn excess(&self, i: usize) -> i64 {
        self.excess_before(i + 1)
    }

    /// Smallest `j > start` with `excess(j) <= target`. `start` may be -1.
    fn fwd_first_le(&self, start: isize, target: i64) -> Option<usize> {
        let j = (start + 1) as usize;
        if j >= self.len() {
            return None;
        }
        let b = j / BLOCK;
        let mut e = self.excess_before(j);
        for p in j..((b + 1) * BLOCK).min(self.len()) {
            e += self.delta(p);
            if e <= target {
                return Some(p);
            }
        }
        let nb = self.next_block_le(b, target)?;
        let mut e = self.excess_before(nb * BLOCK);
        for p in nb * BLOCK..((nb + 1) * BLOCK).min(self.len()) {
            e += self.delta(p);
            if e <= target {
                return Some(p);
            }
        }
        unreachable!("block minimum inconsistent")
    }

    /// Largest `j < start` with `excess(j) <= target`; `Some(-1)` stands for
    /// the virtual position before the sequence (excess 0).
    fn bwd_first_le(&self, start: usize, target: i64) -> Option<isize> {
        if start > 0 {
            let j = start - 1;
            let b = j / BLOCK;
            let mut e = self.excess(j);
            for p in (b * BLOCK..=j).rev() {
                if e <= target {
                    return Some(p as isize);
                }
                e -= self.delta(p);
            }
            if let Some(pb) = self.prev_block_le(b, target) {
                let last = ((pb + 1) * BLOCK).min(self.len()) - 1;
                let mut e = self.excess(last);
                for p in (pb * BLOCK..=last).rev() {
                    if e <= target {
                        return Some(p as isize);
                    }
                    e -= self.delta(p);
                }
                unreachable!("block minimum inconsistent");
            }
        }
        (target >= 0).then_some(-1)
    }

    fn next_block_le(&self, b: usize, target: i64) -> Option<usize> {
        let mut node = self.width + b;
        loop {
            if node == 1 {
                return None;
            }
            if node.is_multiple_of(2) && self.tree[node + 1] <= target {
                node += 1;
                break;
            }
            node /= 2;
        }
        while node < self.width {
            node = if self.tree[2 * node] <= target { 2 * node } else { 2 * node + 1 };
        }
        Some(node - self.width)
    }

    fn prev_block_le(&self, b: usize, target: i64) -> Option<usize> {
        let mut node = self.width + b;
        loop {
            if node == 1 {
                return None;
            }
            if node % 2 == 1 && self.tree[node - 1] <= target {
                node -= 1;
                break;
            }
            node /= 2;
        }
        while node < self.width {
            node = if self.tree[2 * node + 1] <= target { 2 * node + 1 } else { 2 * node };
        }
        Some(node - self.width)
    }

    /// Minimum of `excess(p)` for `p` in `[x, y]`.
    fn range_min(&self, x: usize, y: usize) -> i64 {
        let (bx, by) = (x / BLOCK, y / BLOCK);
        let mut e = self.excess_before(x);
        let mut m = i64::MAX;
        let first_end = if bx == by { y } else { (bx + 1) * BLOCK - 1 };
        for p in x..=first_end {
            e += self.delta(p);
            m = m.min(e);
        }
        if bx == by {
            return m;
        }
        // full blocks bx+1 .. by-1
        let (mut lo, mut hi) = (self.width + bx + 1, self.width + by);
        while lo < hi {
            if lo % 2 == 1 {
                m = m.min(self.tree[lo]);
                lo += 1;
            }
            if hi % 2 == 1 {
                hi -= 1;
                m = m.min(self.tree[hi]);
            }
            lo /= 2;
            hi /= 2;
        }
        let mut e = self.excess_before(by * BLOCK);
        for p in by * BLOCK..=y {
            e += self.delta(p);
            m = m.min(e);
        }
        m
    }

    fn find_close(&self, v: usize) -> usize {
        self.fwd_first_le(v as isize, self.excess(v) - 1).expect("unbalanced parentheses")
    }

    fn enclose(&self, v: usize) -> Option<usize> {
        self.bwd_first_le(v, self.excess(v) - 2).map(|j| (j + 1) as usize)
    }

    /// Leftmost position of the minimum excess in `[x, y]`.
    fn rmq(&self, x: usize, y: usize) -> usize {
        let m = self.range_min(x, y);
        self.fwd_first_le(x as isize - 1, m).expect("minimum exists")
    }
}

/// Suffix tree shape: leaves in preorder are the suffix array ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixTreeTopo {
    bp: BalancedParens,
    /// Marks the opening parenthesis of every leaf `()`.
    leaves: BitVec,
}

impl SuffixTreeTopo {
    /// Shape from the LCP array: each lcp-interval opens before its first
    /// leaf and closes after its last.
    pub fn from_lcp(lcp: &[usize]) -> Self {
        let n = lcp.len();
        let mut opens = vec![0u32; n];
        let mut closes = vec![0u32; n];
        for_each_lcp_interval(lcp, |lb, rb, _| {
            opens[lb] += 1;
            closes[rb] += 1;
        });
        let mut b = BitVecBuilder::with_capacity(4 * n);
        for i in 0..n {
            b.push_run(true, opens[i] as usize);
            b.push(true);
            b.push(false);
            b.push_run(false, closes[i] as usize);
        }
        Self::from_bits(b.build())
    }

    /// Wraps a parenthesis sequence; rebuilds navigation directories.
    pub fn from_bits(bits: BitVec) -> Self {
        let mut leaves = BitVecBuilder::zeros(bits.len());
        for i in 0..bits.len().saturating_sub(1) {
            if bits.get(i) && !bits.get(i + 1) {
                leaves.set(i, true);
            }
        }
        Self { bp: BalancedParens::new(bits), leaves: leaves.build() }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bp.bits
    }

    /// Marks the opening parenthesis of every leaf.
    pub fn leaf_marks(&self) -> &BitVec {
        &self.leaves
    }

    pub fn num_nodes(&self) -> usize {
        self.bp.bits.count_ones()
    }

    pub fn num_leaves_total(&self) -> usize {
        self.leaves.count_ones()
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    /// Validates a raw position as a node handle.
    pub fn node(&self, pos: usize) -> Result<NodeId> {
        if pos < self.bp.len() && self.bp.is_open(pos) {
            Ok(NodeId(pos))
        } else {
            Err(Error::ContractViolation(format!("position {pos} is not a node")))
        }
    }

    pub fn preorder(&self, v: NodeId) -> usize {
        self.bp.bits.rank1_before(v.0)
    }

    pub fn node_at_preorder(&self, p: usize) -> Result<NodeId> {
        self.bp.bits.select1(p + 1).map(NodeId)
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.leaves.get(v.0)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.bp.enclose(v.0).map(NodeId)
    }

    pub fn first_child(&self, v: NodeId) -> Option<NodeId> {
        (!self.is_leaf(v)).then_some(NodeId(v.0 + 1))
    }

    pub fn next_sibling(&self, v: NodeId) -> Option<NodeId> {
        let e = self.bp.find_close(v.0) + 1;
        (e < self.bp.len() && self.bp.is_open(e)).then_some(NodeId(e))
    }

    pub fn children(&self, v: NodeId) -> Children<'_> {
        Children { topo: self, next: self.first_child(v) }
    }

    /// `j`-th child (0-based).
    pub fn child(&self, v: NodeId, j: usize) -> Option<NodeId> {
        self.children(v).nth(j)
    }

    pub fn child_count(&self, v: NodeId) -> usize {
        self.children(v).count()
    }

    pub fn num_leaves(&self, v: NodeId) -> usize {
        let close = self.bp.find_close(v.0);
        self.leaves.rank1_before(close) - self.leaves.rank1_before(v.0)
    }

    pub fn leftmost_leaf_rank(&self, v: NodeId) -> usize {
        self.leaves.rank1_before(v.0)
    }

    /// Suffix array interval `[l, r]` covered by `v`.
    pub fn leaf_range(&self, v: NodeId) -> (usize, usize) {
        let l = self.leftmost_leaf_rank(v);
        (l, l + self.num_leaves(v) - 1)
    }

    /// Leaf for suffix array rank `i`.
    pub fn leaf(&self, i: usize) -> Result<NodeId> {
        self.leaves.select1(i + 1).map(NodeId).map_err(|_| Error::OutOfRange {
            index: i,
            len: self.num_leaves_total(),
        })
    }

    pub fn lca(&self, u: NodeId, v: NodeId) -> NodeId {
        let (u, v) = if u.0 <= v.0 { (u, v) } else { (v, u) };
        if u == v || v.0 <= self.bp.find_close(u.0) {
            return u;
        }
        let m = self.bp.rmq(u.0, v.0);
        NodeId(self.bp.enclose(m + 1).expect("lca below root"))
    }

    /// Lowest node whose leaf interval contains `[l, r]`.
    pub fn node_from_range(&self, l: usize, r: usize) -> Result<NodeId> {
        Ok(self.lca(self.leaf(l)?, self.leaf(r)?))
    }

    pub fn size_in_bits(&self) -> usize {
        self.bp.bits.size_in_bits() + self.bp.tree.len() * 64 + self.leaves.size_in_bits()
    }
}

pub struct Children<'a> {
    topo: &'a SuffixTreeTopo,
    next: Option<NodeId>,
}

impl Iterator for Children<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let cur = self.next?;
        self.next = self.topo.next_sibling(cur);
        Some(cur)
    }
}

/// Reports every lcp-interval `(lb, rb, depth)` with `lb < rb`, children
/// before parents. The root interval `[0, n-1]` is included when `n >= 2`.
pub fn for_each_lcp_interval(lcp: &[usize], mut f: impl FnMut(usize, usize, usize)) {
    let n = lcp.len();
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    for i in 1..=n {
        let l = if i < n { Some(lcp[i]) } else { None };
        let mut lb = i - 1;
        while let Some(&(d, b)) = stack.last() {
            if l.is_none_or(|l| l < d) {
                stack.pop();
                if i - 1 > b {
                    f(b, i - 1, d);
                }
                lb = b;
            } else {
                break;
            }
        }
        if let Some(l) = l {
            if stack.last().is_none_or(|&(d, _)| d < l) {
                stack.push((l, lb));
            }
        }
    }
}
