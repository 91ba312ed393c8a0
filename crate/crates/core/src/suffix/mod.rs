//! Texts, suffix arrays, BWTs and suffix tree topology.

mod sais;
mod topology;

pub use topology::{for_each_lcp_interval, Children, NodeId, SuffixTreeTopo};

use crate::error::{Error, Result};

/// Order-preserving map between input bytes and dense symbol codes. Code 0
/// is the sentinel; byte `0x00` is reserved for it and never mapped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetMap {
    to_code: [u32; 256],
    to_byte: Vec<u8>,
}

impl AlphabetMap {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut used = [false; 256];
        for (i, &b) in bytes.iter().enumerate() {
            if b == 0 {
                return Err(Error::ReservedByte(i));
            }
            used[b as usize] = true;
        }
        let present: Vec<u8> = (1..=255u8).filter(|&b| used[b as usize]).collect();
        Self::from_used(&present)
    }

    /// `used` lists the mapped bytes in ascending order.
    pub(crate) fn from_used(used: &[u8]) -> Result<Self> {
        if used.contains(&0) || used.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::CorruptIndex("alphabet map".into()));
        }
        let mut to_code = [0u32; 256];
        let mut to_byte = vec![0u8];
        for (i, &b) in used.iter().enumerate() {
            to_code[b as usize] = i as u32 + 1;
            to_byte.push(b);
        }
        Ok(Self { to_code, to_byte })
    }

    pub fn sigma(&self) -> usize {
        self.to_byte.len()
    }

    /// Code of `b`, or `None` for bytes absent from the text (and for 0x00).
    #[inline]
    pub fn encode(&self, b: u8) -> Option<u32> {
        match self.to_code[b as usize] {
            0 => None,
            c => Some(c),
        }
    }

    /// Byte of a code; the sentinel decodes to `None`.
    pub fn decode(&self, code: u32) -> Option<u8> {
        match code {
            0 => None,
            c => self.to_byte.get(c as usize).copied(),
        }
    }

    /// Mapped bytes, ascending.
    pub fn used_bytes(&self) -> &[u8] {
        &self.to_byte[1..]
    }
}

/// Dense-coded text ending with the unique sentinel 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    symbols: Vec<u32>,
    sigma: usize,
    alphabet: Option<AlphabetMap>,
}

impl Text {
    /// Maps bytes to codes and appends the sentinel.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let alphabet = AlphabetMap::from_bytes(bytes)?;
        let mut symbols: Vec<u32> = bytes.iter().map(|&b| alphabet.to_code[b as usize]).collect();
        symbols.push(0);
        Ok(Self { symbols, sigma: alphabet.sigma(), alphabet: Some(alphabet) })
    }

    /// Takes already-coded symbols; the last must be the only 0.
    pub fn from_symbols(symbols: Vec<u32>, sigma: usize) -> Result<Self> {
        match symbols.last() {
            None => return Err(Error::InvalidText("empty symbol sequence")),
            Some(&x) if x != 0 => return Err(Error::InvalidText("text must end with sentinel 0")),
            _ => {}
        }
        if symbols[..symbols.len() - 1].contains(&0) {
            return Err(Error::InvalidText("sentinel 0 occurs before the end"));
        }
        if let Some(&bad) = symbols.iter().find(|&&x| x as usize >= sigma) {
            return Err(Error::SymbolOutOfAlphabet { symbol: bad, sigma });
        }
        Ok(Self { symbols, sigma, alphabet: None })
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Never true: the sentinel is always present.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn alphabet(&self) -> Option<&AlphabetMap> {
        self.alphabet.as_ref()
    }

    /// Text bytes without the sentinel, when built from bytes.
    pub fn to_bytes(&self) -> Option<Vec<u8>> {
        let map = self.alphabet.as_ref()?;
        Some(self.symbols[..self.len() - 1].iter().filter_map(|&c| map.decode(c)).collect())
    }

    /// `T[0..n-1]` reversed, followed by a fresh sentinel.
    pub fn reversed(&self) -> Text {
        let n = self.len();
        let mut symbols: Vec<u32> = self.symbols[..n - 1].iter().rev().copied().collect();
        symbols.push(0);
        Text { symbols, sigma: self.sigma, alphabet: self.alphabet.clone() }
    }
}

/// Suffix array and BWT of one text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixArrayBundle {
    pub sa: Vec<usize>,
    pub bwt: Vec<u32>,
}

impl SuffixArrayBundle {
    /// Induced-sorting construction; linear time.
    pub fn new(text: &Text) -> Self {
        let s = text.symbols();
        let n = s.len();
        let sa = sais::suffix_array(s, text.sigma());
        let bwt = sa.iter().map(|&p| s[(p + n - 1) % n]).collect();
        Self { sa, bwt }
    }

    pub fn lcp(&self, text: &Text) -> Vec<usize> {
        sais::lcp_array(text.symbols(), &self.sa)
    }

    pub fn topology(&self, text: &Text) -> SuffixTreeTopo {
        SuffixTreeTopo::from_lcp(&self.lcp(text))
    }
}

/// Suffix array plus suffix tree shape of `text`.
pub fn build_topology(bundle: &SuffixArrayBundle, text: &Text) -> SuffixTreeTopo {
    bundle.topology(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use csax_oracle::{naive_bwt, naive_sa, naive_suffix_tree};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn banana() -> Text {
        Text::from_bytes(b"banana").unwrap()
    }

    #[test]
    fn alphabet_is_order_preserving() {
        let t = banana();
        assert_eq!(t.symbols(), &[2, 1, 3, 1, 3, 1, 0]);
        assert_eq!(t.sigma(), 4);
        let m = t.alphabet().unwrap();
        assert_eq!(m.encode(b'z'), None);
        assert_eq!(m.encode(0), None);
        assert_eq!(m.decode(3), Some(b'n'));
        assert_eq!(m.decode(0), None);
        assert!(matches!(Text::from_bytes(b"ab\0c"), Err(Error::ReservedByte(2))));
    }

    #[test]
    fn from_symbols_validation() {
        assert!(Text::from_symbols(vec![], 1).is_err());
        assert!(Text::from_symbols(vec![1, 2], 3).is_err());
        assert!(Text::from_symbols(vec![1, 0, 2, 0], 3).is_err());
        assert!(Text::from_symbols(vec![5, 0], 3).is_err());
        assert!(Text::from_symbols(vec![2, 1, 0], 3).is_ok());
    }

    #[test]
    fn banana_bundle() {
        let t = banana();
        let b = SuffixArrayBundle::new(&t);
        assert_eq!(b.sa, vec![6, 5, 3, 1, 0, 4, 2]);
        // "annb$aa"
        assert_eq!(b.bwt, vec![1, 3, 3, 2, 0, 1, 1]);
        let one = Text::from_bytes(b"").unwrap();
        let b1 = SuffixArrayBundle::new(&one);
        assert_eq!(b1.sa, vec![0]);
        assert_eq!(b1.bwt, vec![0]);
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(banana().reversed().to_bytes().unwrap(), b"ananab");
        assert_eq!(Text::from_bytes(b"").unwrap().reversed().symbols(), &[0]);
        assert_eq!(Text::from_bytes(b"ab").unwrap().reversed().to_bytes().unwrap(), b"ba");
    }

    #[test]
    fn banana_topology() {
        let t = banana();
        let topo = SuffixArrayBundle::new(&t).topology(&t);
        assert_eq!(topo.num_nodes(), 11);
        assert_eq!(topo.num_leaves_total(), 7);
        let root = topo.root();
        assert_eq!(topo.num_leaves(root), 7);
        assert_eq!(topo.child_count(root), 4);
        let a = topo.node_from_range(1, 3).unwrap();
        assert_eq!(topo.num_leaves(a), 3);
        assert_eq!(topo.leaf_range(a), (1, 3));
        assert_eq!(topo.lca(a, a), a);
        assert_eq!(topo.parent(a), Some(root));
        assert_eq!(topo.parent(root), None);
        // "ana" = [2, 3], "na" = [5, 6]
        let ana = topo.node_from_range(2, 3).unwrap();
        assert_eq!(topo.parent(ana), Some(a));
        assert_eq!(topo.leaf_range(topo.node_from_range(5, 6).unwrap()), (5, 6));
        assert_eq!(topo.node_from_range(4, 6).unwrap(), root);
        assert!(topo.node(topo.root().position() + topo.bits().len() - 1).is_err());
        assert!(topo.leaf(7).is_err());
    }

    #[test]
    fn single_sentinel_topology() {
        let t = Text::from_bytes(b"").unwrap();
        let topo = SuffixArrayBundle::new(&t).topology(&t);
        assert_eq!(topo.num_nodes(), 1);
        assert!(topo.is_leaf(topo.root()));
        assert_eq!(topo.num_leaves(topo.root()), 1);
        assert_eq!(topo.leaf(0).unwrap(), topo.root());
    }

    #[test]
    fn unary_text_is_a_path() {
        for k in 1..40usize {
            let t = Text::from_bytes(&vec![b'a'; k]).unwrap();
            let topo = SuffixArrayBundle::new(&t).topology(&t);
            // k internal nodes ("", a, ..., a^{k-1}) and k+1 leaves
            assert_eq!(topo.num_nodes(), 2 * k + 1);
            let mut v = topo.root();
            for _ in 0..k - 1 {
                assert_eq!(topo.child_count(v), 2);
                v = topo.child(v, 1).unwrap();
            }
            assert_eq!(topo.child_count(v), 2);
            assert!(topo.children(v).all(|c| topo.is_leaf(c)));
        }
    }

    fn random_text(rng: &mut ChaCha8Rng, n: usize, sigma: u8) -> Text {
        let bytes: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
        Text::from_bytes(&bytes).unwrap()
    }

    #[test]
    fn suffix_arrays_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &sigma in &[2u8, 4, 16, 64, 255] {
            for _ in 0..6 {
                let n = rng.gen_range(0..10_000);
                let t = random_text(&mut rng, n, sigma);
                let b = SuffixArrayBundle::new(&t);
                let sa = naive_sa(t.symbols());
                assert_eq!(b.sa, sa);
                assert_eq!(b.bwt, naive_bwt(t.symbols(), &sa));
            }
        }
    }

    #[test]
    fn internal_nodes_match_naive_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for &sigma in &[2u8, 4, 16, 64] {
            for _ in 0..5 {
                let n = rng.gen_range(1..2000);
                let t = random_text(&mut rng, n, sigma);
                let b = SuffixArrayBundle::new(&t);
                let expect: BTreeSet<(usize, usize, usize)> =
                    naive_suffix_tree(t.symbols()).iter().map(|x| (x.lb, x.rb, x.depth)).collect();
                let mut got = BTreeSet::new();
                for_each_lcp_interval(&b.lcp(&t), |l, r, d| {
                    got.insert((l, r, d));
                });
                assert_eq!(got, expect);

                let topo = b.topology(&t);
                let mut from_topo = BTreeSet::new();
                for p in 0..topo.num_nodes() {
                    let v = topo.node_at_preorder(p).unwrap();
                    assert_eq!(topo.preorder(v), p);
                    let (l, r) = topo.leaf_range(v);
                    assert_eq!(topo.node_from_range(l, r).unwrap(), v);
                    if !topo.is_leaf(v) {
                        assert!(topo.child_count(v) >= 2);
                        from_topo.insert((l, r));
                    }
                }
                let expect_ranges: BTreeSet<(usize, usize)> = expect.iter().map(|&(l, r, _)| (l, r)).collect();
                assert_eq!(from_topo, expect_ranges);
            }
        }
    }
}
