//! Construction of the node dictionaries by a depth-first walk over Weiner
//! links, using the BWTs of both the text and its reverse.
//!
//! A frame stands for an internal node `u` of the text's suffix tree with
//! path label `X`. It carries the interval of `X` in the forward BWT `B` and
//! of `rev(X)` in the reversed BWT `B̄`, plus the node of the reversed tree at
//! or below `rev(X)`. From a frame we:
//!
//! * read the labels and sizes of the heavy children of `u` off the symbol
//!   histogram of `B̄[l̄..r̄]`, and fill the dictionary of `u` if it has one;
//! * find the symbols `a` for which `aX` is again an internal node: those
//!   preceding `X` in front of at least two different children of `u`;
//! * for each such `a`, derive the frame of `aX`: its `B̄` interval is the
//!   child of `rev(X)` labelled `a` in the reversed tree, its `B` interval is
//!   one backward step on `B`, and its node is the lowest common ancestor of
//!   the interval's boundary leaves.
//!
//! Only targets with at least `min_leaves` occurrences are followed. Since
//! `aX` never occurs more often than `X`, heavy nodes are closed under this
//! walk, and the production threshold `d` visits exactly the heavy internal
//! nodes. A threshold of 2 visits every internal node.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fm_index::{default_sample_rate, FMIndex};
use crate::node_dict::{classify_nodes, HeavyLightParams, NodeDicts, NodeDictsBuilder};
use crate::sequence::SequenceIndex;
use crate::suffix::{NodeId, SuffixArrayBundle, SuffixTreeTopo, Text};

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Suffix array sampling step; defaults to `ceil(log2 n)`.
    pub sample_rate: Option<usize>,
    /// Follow every internal node instead of heavy ones only.
    pub full_traversal: bool,
    /// Keep one record per visited node in the report.
    pub record_visits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VisitRecord {
    pub preorder: usize,
    pub b_interval: (usize, usize),
    pub bbar_interval: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct BuildReport {
    pub visits: Vec<VisitRecord>,
    pub visited_count: usize,
    /// Largest number of live traversal levels, counting the running frame.
    pub max_depth: usize,
    /// Tri-state marks set while computing the Weiner link symbols.
    pub v_marks: u64,
    /// Sum of child counts over the nodes of the reversed suffix tree.
    pub reversed_tree_edges: u64,
    pub heavy_nodes: usize,
    pub special_nodes: usize,
    pub marked_nodes: usize,
    /// Rough peak of the temporary arrays used during construction.
    pub intermediate_bytes: usize,
    pub seconds: f64,
}

pub struct BuildOutput {
    pub fm: FMIndex,
    pub topo: SuffixTreeTopo,
    pub dicts: NodeDicts,
    pub params: HeavyLightParams,
    pub report: BuildReport,
}

#[derive(Debug, Clone, Copy)]
struct WeinerFrame {
    node: NodeId,
    /// Node of the reversed tree whose leaf range is `bbar`; `rev(X)` is
    /// either this node or lies on the edge above it.
    tbar: NodeId,
    b: (usize, usize),
    bbar: (usize, usize),
}

impl WeinerFrame {
    fn width(&self) -> usize {
        self.b.1 - self.b.0 + 1
    }
}

const NOT_SEEN: u8 = 0;
const SEEN: u8 = 1;
const SEEN_TWICE: u8 = 2;

struct Workspace {
    v: Vec<u8>,
    touched: Vec<u32>,
    children: Vec<(usize, NodeId, (usize, usize))>,
    entries: Vec<(u32, usize, usize, usize)>,
    symbols: Vec<(u32, usize)>,
}

struct Walker<'a> {
    topo: &'a SuffixTreeTopo,
    topo_bar: &'a SuffixTreeTopo,
    b: &'a SequenceIndex,
    acc_b: &'a [usize],
    bbar: &'a SequenceIndex,
    d: usize,
    min_leaves: usize,
    dicts: NodeDictsBuilder,
    ws: Workspace,
    report: BuildReport,
    record: bool,
}

impl Walker<'_> {
    fn process_node(&mut self, f: WeinerFrame, out: &mut Vec<WeinerFrame>) -> Result<()> {
        let topo = self.topo;
        let width = f.width();
        if width != f.bbar.1 - f.bbar.0 + 1 || width != topo.num_leaves(f.node) {
            return Err(Error::ContractViolation(format!("frame width mismatch at {:?}", f.b)));
        }
        let p = topo.preorder(f.node);
        self.report.visited_count += 1;
        if self.record {
            self.report.visits.push(VisitRecord { preorder: p, b_interval: f.b, bbar_interval: f.bbar });
        }
        if topo.is_leaf(f.node) {
            return Ok(());
        }

        let ws = &mut self.ws;
        ws.children.clear();
        for (j, c) in topo.children(f.node).enumerate() {
            ws.children.push((j, c, topo.leaf_range(c)));
        }

        if self.dicts.is_marked(p) {
            // heavy children of u, in symbol order, from the histogram of B̄
            ws.symbols.clear();
            let d = self.d;
            let sym = &mut ws.symbols;
            self.bbar.for_each_distinct(f.bbar.0, f.bbar.1, |a, freq| {
                if freq >= d {
                    sym.push((a, freq));
                }
            });
            sym.sort_unstable();
            ws.entries.clear();
            let mut heavy = ws.children.iter().filter(|c| c.2 .1 - c.2 .0 + 1 >= d);
            for &(a, freq) in ws.symbols.iter() {
                let &(j, _, (l, r)) = heavy
                    .next()
                    .ok_or_else(|| Error::ContractViolation(format!("heavy child count mismatch at node {p}")))?;
                if r - l + 1 != freq {
                    return Err(Error::ContractViolation(format!("heavy child size mismatch at node {p}")));
                }
                let lo = self.bbar.rank_before(a, f.bbar.0);
                let hi = self.bbar.rank_before(a, f.bbar.1 + 1);
                ws.entries.push((a, j, lo, hi));
            }
            if heavy.next().is_some() {
                return Err(Error::ContractViolation(format!("heavy child count mismatch at node {p}")));
            }
            self.dicts.insert(p, &ws.entries, f.bbar.0, f.bbar.1, self.bbar)?;
        }

        // symbols preceding X in front of at least two distinct children
        ws.touched.clear();
        let (v, touched) = (&mut ws.v, &mut ws.touched);
        let mut marks = 0u64;
        for &(_, _, (l, r)) in ws.children.iter() {
            self.b.for_each_distinct(l, r, |a, _| {
                marks += 1;
                let s = &mut v[a as usize];
                match *s {
                    NOT_SEEN => {
                        *s = SEEN;
                        touched.push(a);
                    }
                    SEEN => *s = SEEN_TWICE,
                    _ => {}
                }
            });
        }
        self.report.v_marks += marks;

        let (lu, ru) = f.b;
        let uniform = {
            let c = self.b.get(lu);
            (self.b.get(ru) == c
                && self.b.partial_rank_unchecked(ru) - self.b.partial_rank_unchecked(lu) == ru - lu)
                .then_some(c)
        };
        match uniform {
            Some(c) => {
                // rev(X) sits inside an edge: one extension, same B̄ interval
                if ws.v[c as usize] == SEEN_TWICE && width >= self.min_leaves {
                    let b = step(self.b, self.acc_b, c, lu, ru);
                    out.push(WeinerFrame { node: topo.node_from_range(b.0, b.1)?, tbar: f.tbar, b, bbar: f.bbar });
                }
            }
            None => {
                let min = self.min_leaves;
                ws.symbols.clear();
                let sym = &mut ws.symbols;
                self.b.for_each_distinct(lu, ru, |a, freq| {
                    if freq >= min {
                        sym.push((a, freq));
                    }
                });
                sym.sort_unstable();
                let tb = self.topo_bar;
                let mut kids = tb.children(f.tbar).filter(|&c| tb.num_leaves(c) >= min);
                for &(a, freq) in ws.symbols.iter() {
                    let cbar = kids
                        .next()
                        .ok_or_else(|| Error::ContractViolation(format!("reversed child count mismatch at node {p}")))?;
                    let bbar = tb.leaf_range(cbar);
                    if bbar.1 - bbar.0 + 1 != freq {
                        return Err(Error::ContractViolation(format!("reversed child size mismatch at node {p}")));
                    }
                    if ws.v[a as usize] == SEEN_TWICE {
                        let b = step(self.b, self.acc_b, a, lu, ru);
                        out.push(WeinerFrame { node: topo.node_from_range(b.0, b.1)?, tbar: cbar, b, bbar });
                    }
                }
            }
        }

        for &a in ws.touched.iter() {
            ws.v[a as usize] = NOT_SEEN;
        }
        Ok(())
    }

    /// Smaller targets first, the largest one last in place of its parent's
    /// level, so the number of live levels stays logarithmic.
    fn traverse_bounded(&mut self, root: WeinerFrame) -> Result<()> {
        struct Level {
            rest: Vec<WeinerFrame>,
            tail: WeinerFrame,
        }
        let mut levels: Vec<Level> = Vec::new();
        let mut next = Some(root);
        loop {
            let frame = match next.take() {
                Some(f) => f,
                None => match levels.last_mut() {
                    None => break,
                    Some(level) => match level.rest.pop() {
                        Some(f) => f,
                        None => levels.pop().expect("nonempty").tail,
                    },
                },
            };
            self.report.max_depth = self.report.max_depth.max(levels.len() + 1);
            let mut kids = Vec::new();
            self.process_node(frame, &mut kids)?;
            if kids.is_empty() {
                continue;
            }
            let big = (0..kids.len()).max_by_key(|&i| kids[i].width()).expect("nonempty");
            let tail = kids.swap_remove(big);
            if kids.is_empty() {
                next = Some(tail);
            } else {
                levels.push(Level { rest: kids, tail });
            }
        }
        Ok(())
    }
}

/// Backward step on the forward BWT.
fn step(b: &SequenceIndex, acc: &[usize], a: u32, l: usize, r: usize) -> (usize, usize) {
    let base = acc[a as usize];
    (base + b.rank_before(a, l), base + b.rank_before(a, r + 1) - 1)
}

/// Builds the FM-index over the reversed text, the suffix tree topology of
/// the text, and every node dictionary.
pub fn build_all_dicts(text: &Text, opts: &BuildOptions) -> Result<BuildOutput> {
    let start = Instant::now();
    let n = text.len();
    let sigma = text.sigma();
    let params = HeavyLightParams::for_alphabet(sigma);
    let b_rate = opts.sample_rate.unwrap_or_else(|| default_sample_rate(n));
    let word = std::mem::size_of::<usize>();

    // forward side: topology of T and the sequence index over B
    let fwd = SuffixArrayBundle::new(text);
    let topo = fwd.topology(text);
    let b = SequenceIndex::new(&fwd.bwt, sigma)?;
    let mut peak = n * (3 * word + 4);
    drop(fwd);

    // reverse side
    let rev = text.reversed();
    let bwd = SuffixArrayBundle::new(&rev);
    let topo_bar = bwd.topology(&rev);
    peak = peak.max(n * (3 * word + 4) + b.payload_bits() / 8);
    let fm = FMIndex::from_reversed(&rev, bwd, b_rate)?;

    let class = classify_nodes(&topo, params);
    let mut report = BuildReport {
        heavy_nodes: class.heavy_nodes,
        special_nodes: class.special_nodes,
        marked_nodes: class.marked.count_ones(),
        intermediate_bytes: peak,
        reversed_tree_edges: topo_bar.num_nodes().saturating_sub(1) as u64,
        ..BuildReport::default()
    };

    let mut acc_b = Vec::with_capacity(sigma);
    let mut sum = 0;
    for a in 0..sigma as u32 {
        acc_b.push(sum);
        sum += b.count(a);
    }

    let min_leaves = if opts.full_traversal { 2 } else { params.d };
    let mut walker = Walker {
        topo: &topo,
        topo_bar: &topo_bar,
        b: &b,
        acc_b: &acc_b,
        bbar: fm.bwt(),
        d: params.d,
        min_leaves,
        dicts: NodeDictsBuilder::new(sigma, params, class),
        ws: Workspace {
            v: vec![NOT_SEEN; sigma],
            touched: Vec::new(),
            children: Vec::new(),
            entries: Vec::new(),
            symbols: Vec::new(),
        },
        report: BuildReport::default(),
        record: opts.record_visits,
    };
    let root = WeinerFrame { node: topo.root(), tbar: topo_bar.root(), b: (0, n - 1), bbar: (0, n - 1) };
    if opts.full_traversal || topo.num_leaves(root.node) >= params.d {
        walker.traverse_bounded(root)?;
    }
    let Walker { dicts, report: walk, .. } = walker;
    let dicts = dicts.finish()?;
    drop(topo_bar);
    drop(b);

    report.visits = walk.visits;
    report.visited_count = walk.visited_count;
    report.max_depth = walk.max_depth;
    report.v_marks = walk.v_marks;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(BuildOutput { fm, topo, dicts, params, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use csax_oracle::{naive_rank, naive_suffix_tree};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn full(bytes: &[u8]) -> (Text, BuildOutput) {
        let t = Text::from_bytes(bytes).unwrap();
        let opts = BuildOptions { full_traversal: true, record_visits: true, ..Default::default() };
        let out = build_all_dicts(&t, &opts).unwrap();
        (t, out)
    }

    fn visited_ranges(out: &BuildOutput) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = out
            .report
            .visits
            .iter()
            .map(|r| out.topo.leaf_range(out.topo.node_at_preorder(r.preorder).unwrap()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn banana_visits_internal_nodes() {
        let (t, out) = full(b"banana");
        let mut expect: Vec<_> = naive_suffix_tree(t.symbols())
            .into_iter()
            .filter(|v| v.leaves() >= 2)
            .map(|v| (v.lb, v.rb))
            .collect();
        expect.sort();
        // "", "a", "ana", "na"
        assert_eq!(expect.len(), 4);
        assert_eq!(visited_ranges(&out), expect);
    }

    #[test]
    fn sentinel_only() {
        let (_, out) = full(b"");
        assert_eq!(out.report.visited_count, 1);
        assert_eq!(out.report.max_depth, 1);
    }

    #[test]
    fn unary_chain_depth() {
        let (_, out) = full(&[b'a'; 5000]);
        assert_eq!(out.report.visited_count, 5000);
        assert!(out.report.max_depth <= 2, "depth {}", out.report.max_depth);
    }

    #[test]
    fn random_visits_and_dicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for &sigma in &[2u8, 3, 4, 16, 64, 250] {
            for _ in 0..5 {
                let n = rng.gen_range(1..2000);
                let bytes: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
                let (t, out) = full(&bytes);
                let mut expect: Vec<_> = naive_suffix_tree(t.symbols())
                    .into_iter()
                    .filter(|v| v.leaves() >= 2)
                    .map(|v| (v.lb, v.rb))
                    .collect();
                expect.sort();
                assert_eq!(visited_ranges(&out), expect);

                let bbar: Vec<u32> = (0..t.len()).map(|i| out.fm.bwt().access(i).unwrap()).collect();
                for rec in &out.report.visits {
                    if !out.dicts.is_marked(rec.preorder) {
                        continue;
                    }
                    let (l, r) = rec.bbar_interval;
                    for a in out.dicts.keys_of(rec.preorder).unwrap() {
                        let e = out.dicts.lookup(rec.preorder, a, l, r, out.fm.bwt()).unwrap().unwrap();
                        assert_eq!(e.rank_lo, naive_rank(&bbar, &a, l as isize - 1));
                        assert_eq!(e.rank_hi, naive_rank(&bbar, &a, r as isize));
                    }
                }
                // pairs (Xb, a) with two or more left extensions are child edges of the
                // reversed tree; the rest contribute one mark per edge of this tree
                assert!(out.report.v_marks <= out.report.reversed_tree_edges + out.topo.num_nodes() as u64);
            }
        }
    }

    #[test]
    fn production_visits_heavy_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &sigma in &[16u8, 200] {
            let bytes: Vec<u8> = (0..3000).map(|_| rng.gen_range(1..=sigma)).collect();
            let t = Text::from_bytes(&bytes).unwrap();
            let opts = BuildOptions { record_visits: true, ..Default::default() };
            let out = build_all_dicts(&t, &opts).unwrap();
            let d = out.params.d;
            let heavy_internal = (0..out.topo.num_nodes())
                .map(|p| out.topo.node_at_preorder(p).unwrap())
                .filter(|&v| !out.topo.is_leaf(v) && out.topo.num_leaves(v) >= d)
                .count();
            assert_eq!(out.report.visited_count, heavy_internal);
        }
    }
}
