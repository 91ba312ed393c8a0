//! Pattern search: walk down the suffix tree of the text while extending the
//! pattern on the reversed BWT, so that at most one step per query needs a
//! general rank query.
//!
//! While the walk sits on a heavy node, the next interval comes from a stored
//! dictionary entry or, for a node whose only heavy child is the one taken,
//! from two small interval rank queries near the interval ends. Inside an
//! edge the interval holds a single symbol and partial rank suffices. The
//! first step into a light child pays one general backward step; from then on
//! the interval is at most `d` wide and small interval rank answers every
//! step.

use crate::builder::{build_all_dicts, BuildOptions, BuildReport};
use crate::counters::QueryStats;
use crate::error::{Error, Result};
use crate::fm_index::FMIndex;
use crate::node_dict::{HeavyLightParams, NodeDicts};
use crate::suffix::{AlphabetMap, NodeId, SuffixTreeTopo, Text};

/// Where the search stands in the text's suffix tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cursor {
    /// Exactly at a heavy node.
    AtNode(NodeId),
    /// Strictly inside the edge leading to `child`.
    OnEdge { child: NodeId, matched: usize },
    /// Below a light node; never returns to a node cursor.
    LightDetached,
}

/// Result of a search: the reversed-BWT interval, if any, and counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    pub interval: Option<(usize, usize)>,
    pub stats: QueryStats,
}

impl SearchOutcome {
    pub fn count(&self) -> usize {
        self.interval.map_or(0, |(l, r)| r - l + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfIndex {
    pub(crate) fm: FMIndex,
    pub(crate) topo: SuffixTreeTopo,
    pub(crate) dicts: NodeDicts,
    pub(crate) params: HeavyLightParams,
    pub(crate) alphabet: Option<AlphabetMap>,
    pub(crate) digest: [u8; 32],
}

impl SelfIndex {
    /// Builds over `bytes`; byte 0x00 is reserved for the sentinel.
    pub fn build(bytes: &[u8], sample_rate: Option<usize>) -> Result<Self> {
        let text = Text::from_bytes(bytes)?;
        Ok(Self::build_text(&text, &BuildOptions { sample_rate, ..Default::default() })?.0)
    }

    pub fn build_text(text: &Text, opts: &BuildOptions) -> Result<(Self, BuildReport)> {
        let out = build_all_dicts(text, opts)?;
        let idx = Self {
            fm: out.fm,
            topo: out.topo,
            dicts: out.dicts,
            params: out.params,
            alphabet: text.alphabet().cloned(),
            digest: text_digest(text),
        };
        Ok((idx, out.report))
    }

    /// Text length including the sentinel.
    pub fn len(&self) -> usize {
        self.fm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fm.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.fm.sigma()
    }

    pub fn params(&self) -> HeavyLightParams {
        self.params
    }

    pub fn fm(&self) -> &FMIndex {
        &self.fm
    }

    pub fn topology(&self) -> &SuffixTreeTopo {
        &self.topo
    }

    pub fn dicts(&self) -> &NodeDicts {
        &self.dicts
    }

    pub fn alphabet(&self) -> Option<&AlphabetMap> {
        self.alphabet.as_ref()
    }

    /// SHA-256 of the coded text, sentinel included.
    pub fn text_digest(&self) -> &[u8; 32] {
        &self.digest
    }

    /// Pattern bytes to codes; `None` if some byte does not occur in the text.
    pub fn encode(&self, pattern: &[u8]) -> Option<Vec<u32>> {
        match &self.alphabet {
            Some(map) => pattern.iter().map(|&b| map.encode(b)).collect(),
            None => pattern.iter().map(|&b| (b != 0 && (b as usize) < self.sigma()).then_some(b as u32)).collect(),
        }
    }

    pub fn count(&self, pattern: &[u8]) -> usize {
        self.search_interval(pattern).count()
    }

    pub fn search_interval(&self, pattern: &[u8]) -> SearchOutcome {
        match self.encode(pattern) {
            Some(p) => self.search_symbols(&p),
            None => SearchOutcome { interval: None, stats: QueryStats::default() },
        }
    }

    /// Sorted text positions of `pattern`.
    pub fn count_locate(&self, pattern: &[u8]) -> Vec<usize> {
        let mut stats = QueryStats::default();
        self.locate_with(pattern, usize::MAX, &mut stats)
    }

    /// Like [`count_locate`](Self::count_locate), capped at `limit` rows of
    /// the interval; counters accumulate into `stats`.
    pub fn locate_with(&self, pattern: &[u8], limit: usize, stats: &mut QueryStats) -> Vec<usize> {
        match self.encode(pattern) {
            Some(p) => self.locate_symbols_with(&p, limit, stats),
            None => Vec::new(),
        }
    }

    /// Sorted text positions of a coded pattern.
    pub fn locate_symbols(&self, pattern: &[u32]) -> Vec<usize> {
        self.locate_symbols_with(pattern, usize::MAX, &mut QueryStats::default())
    }

    pub fn locate_symbols_with(&self, pattern: &[u32], limit: usize, stats: &mut QueryStats) -> Vec<usize> {
        let out = self.search_symbols(pattern);
        stats.merge(&out.stats);
        let Some((l, r)) = out.interval else { return Vec::new() };
        if limit == 0 {
            return Vec::new();
        }
        let r = r.min(l.saturating_add(limit - 1));
        let mut pos = self.fm.locate(l, r, pattern.len(), stats);
        pos.sort_unstable();
        pos
    }

    /// `T[i..i+len]` as bytes. Reaching the sentinel is an error.
    pub fn extract(&self, i: usize, len: usize) -> Result<Vec<u8>> {
        let n = self.len();
        if i > n - 1 || len > n - 1 - i {
            return Err(Error::OutOfRange { index: i.saturating_add(len), len: n - 1 });
        }
        let syms = self.fm.extract(i, len, &mut QueryStats::default())?;
        Ok(match &self.alphabet {
            Some(map) => syms.iter().map(|&c| map.decode(c).expect("non-sentinel")).collect(),
            None => syms.iter().map(|&c| c as u8).collect(),
        })
    }

    /// `T[i..i+len]` as codes, sentinel included.
    pub fn extract_symbols(&self, i: usize, len: usize) -> Result<Vec<u32>> {
        self.fm.extract(i, len, &mut QueryStats::default())
    }

    /// Search over coded symbols; codes 0 (the sentinel) and `>= sigma` never match.
    pub fn search_symbols(&self, pattern: &[u32]) -> SearchOutcome {
        let mut stats = QueryStats::default();
        let interval = self.run(pattern, &mut stats);
        SearchOutcome { interval, stats }
    }

    fn run(&self, pattern: &[u32], stats: &mut QueryStats) -> Option<(usize, usize)> {
        let n = self.len();
        let fm = &self.fm;
        let topo = &self.topo;
        let d = self.params.d;
        let sigma = self.sigma();
        let (mut l, mut r) = (0, n - 1);
        if pattern.iter().any(|&a| a == 0 || a as usize >= sigma) {
            return None;
        }
        if pattern.is_empty() {
            return Some((l, r));
        }
        let root = topo.root();
        let mut cursor = if topo.num_leaves(root) >= d { Cursor::AtNode(root) } else { Cursor::LightDetached };

        for &a in pattern {
            if let Cursor::OnEdge { child, matched } = cursor {
                match fm.uniform_symbol(l, r, stats) {
                    Some(c) => {
                        // case 5: inside an edge every row continues with c
                        stats.cases[5] += 1;
                        if a != c {
                            return None;
                        }
                        stats.partial_rank += 1;
                        let hi = fm.bwt().partial_rank_unchecked(r);
                        (l, r) = fm.backward_step_with_ranks(a, hi - (r - l + 1), hi);
                        cursor = Cursor::OnEdge { child, matched: matched + 1 };
                        continue;
                    }
                    None => cursor = Cursor::AtNode(child),
                }
            }
            match cursor {
                Cursor::AtNode(u) => {
                    let p = topo.preorder(u);
                    if self.dicts.is_marked(p) {
                        stats.dict_lookups += 1;
                        let entry = self.dicts.lookup(p, a, l, r, fm.bwt()).expect("marked node");
                        match entry {
                            Some(e) => {
                                // case 1
                                stats.cases[0] += 1;
                                (l, r) = fm.backward_step_with_ranks(a, e.rank_lo, e.rank_hi);
                                let child = topo.child(u, e.child).expect("dictionary child");
                                cursor = Cursor::OnEdge { child, matched: 1 };
                            }
                            None => {
                                // case 2
                                stats.cases[1] += 1;
                                (l, r) = fm.backward_step(a, l, r, stats)?;
                                cursor = Cursor::LightDetached;
                            }
                        }
                    } else if let Some((l2, r2, child)) = self.heavy_child_step(u, p, a, l, r, stats) {
                        // case 3a
                        stats.cases[2] += 1;
                        (l, r) = (l2, r2);
                        cursor = Cursor::OnEdge { child, matched: 1 };
                    } else {
                        // case 3b
                        stats.cases[3] += 1;
                        (l, r) = fm.backward_step(a, l, r, stats)?;
                        cursor = Cursor::LightDetached;
                    }
                }
                Cursor::LightDetached => {
                    // case 4
                    stats.cases[4] += 1;
                    stats.max_light_width = stats.max_light_width.max((r - l) as u64);
                    assert!(r - l <= d, "light interval {l}..={r} wider than {d}");
                    let (lo, hi) = fm.interval_rank(a, l, r, stats).expect("window within group size")?;
                    (l, r) = fm.backward_step_with_ranks(a, lo, hi);
                }
                Cursor::OnEdge { .. } => unreachable!(),
            }
        }
        Some((l, r))
    }

    /// Tries the single heavy child of an unmarked node: its label occupies
    /// all but fewer than `d^2` rows of `[l, r]`, so its first and last
    /// occurrences lie within `d^2` of the ends.
    fn heavy_child_step(
        &self,
        u: NodeId,
        p: usize,
        a: u32,
        l: usize,
        r: usize,
        stats: &mut QueryStats,
    ) -> Option<(usize, usize, NodeId)> {
        let j = self.dicts.heavy_child_of(p).ok()?;
        let child = self.topo.child(u, j)?;
        let n = self.len();
        let w = self.params.d * self.params.d;
        let fm = &self.fm;
        let (lo, _) = fm.interval_rank(a, l, (l + w).min(n - 1), stats).ok()??;
        let (_, hi) = fm.interval_rank(a, r.saturating_sub(w), r, stats).ok()??;
        if hi <= lo || hi - lo != self.topo.num_leaves(child) {
            return None;
        }
        let (l2, r2) = fm.backward_step_with_ranks(a, lo, hi);
        Some((l2, r2, child))
    }
}

pub(crate) fn text_digest(text: &Text) -> [u8; 32] {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for &c in text.symbols() {
        h.update(c.to_le_bytes());
    }
    h.finalize().into()
}
