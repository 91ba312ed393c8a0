//! On-disk index container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "CSAX" | version u32 | n u64 | sigma u64 | b u64 | d u64
//! text digest [32] | section count u64 | (id, offset, len) u64 x 3 per section
//! body digest [32] | header check u64
//! body: sections, each starting on an 8-byte boundary
//! ```
//!
//! The header check is the first 8 bytes of SHA-256 over every header byte
//! before it, so any flipped header bit is caught. The body digest covers
//! all section bytes. Only raw bits are stored; rank/select directories and
//! navigation tables are rebuilt on load.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::bitvec::{BitVec, IntVec};
use crate::error::{Error, Result};
use crate::fm_index::{FMIndex, SampledSA};
use crate::interval_rank::IntervalRankIndex;
use crate::node_dict::{HeavyLightParams, NodeDicts};
use crate::search::SelfIndex;
use crate::sequence::SequenceIndex;
use crate::suffix::{AlphabetMap, SuffixTreeTopo};

pub const MAGIC: &[u8; 4] = b"CSAX";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum SectionId {
    AlphabetMap = 1,
    Payload = 2,
    ChunkDir = 3,
    PartialRank = 4,
    IntervalRank = 5,
    Acc = 6,
    Samples = 7,
    Topology = 8,
    LeafMap = 9,
    Marked = 10,
    Dicts = 11,
    HeavyChild = 12,
}

const ALL_SECTIONS: [SectionId; 12] = [
    SectionId::AlphabetMap,
    SectionId::Payload,
    SectionId::ChunkDir,
    SectionId::PartialRank,
    SectionId::IntervalRank,
    SectionId::Acc,
    SectionId::Samples,
    SectionId::Topology,
    SectionId::LeafMap,
    SectionId::Marked,
    SectionId::Dicts,
    SectionId::HeavyChild,
];

impl SectionId {
    pub fn name(self) -> &'static str {
        match self {
            SectionId::AlphabetMap => "alphabet_map",
            SectionId::Payload => "bwt_payload",
            SectionId::ChunkDir => "chunk_dir",
            SectionId::PartialRank => "partial_rank",
            SectionId::IntervalRank => "interval_rank",
            SectionId::Acc => "acc",
            SectionId::Samples => "samples",
            SectionId::Topology => "topology",
            SectionId::LeafMap => "leaf_map",
            SectionId::Marked => "dict_marks",
            SectionId::Dicts => "dicts",
            SectionId::HeavyChild => "heavy_child_idx",
        }
    }
}

/// Parsed fixed header fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub version: u32,
    pub n: u64,
    pub sigma: u64,
    pub b: u64,
    pub d: u64,
    pub text_digest: [u8; 32],
    pub sections: Vec<(u64, u64, u64)>,
}

#[derive(Default)]
struct Words(Vec<u64>);

impl Words {
    fn u(&mut self, x: u64) {
        self.0.push(x);
    }

    fn bits(&mut self, bv: &BitVec) {
        self.u(bv.len() as u64);
        self.0.extend_from_slice(bv.words());
    }

    fn ints(&mut self, v: &IntVec) {
        self.u(v.len() as u64);
        self.u(v.width() as u64);
        self.0.extend_from_slice(v.words());
    }
}

struct Reader<'a> {
    words: &'a [u64],
    pos: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn corrupt(&self) -> Error {
        Error::CorruptIndex(format!("section {} truncated", self.what))
    }

    fn u(&mut self) -> Result<u64> {
        let x = *self.words.get(self.pos).ok_or_else(|| self.corrupt())?;
        self.pos += 1;
        Ok(x)
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u()?).map_err(|_| self.corrupt())
    }

    fn take(&mut self, k: usize) -> Result<Vec<u64>> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.words.len()).ok_or_else(|| self.corrupt())?;
        let out = self.words[self.pos..end].to_vec();
        self.pos = end;
        Ok(out)
    }

    fn bits(&mut self) -> Result<BitVec> {
        let len = self.usize()?;
        let words = self.take(len.div_ceil(64))?;
        Ok(BitVec::from_words(words, len))
    }

    fn ints(&mut self) -> Result<IntVec> {
        let len = self.usize()?;
        let width = self.u()?;
        if !(1..=64).contains(&width) {
            return Err(Error::CorruptIndex(format!("section {}: bad width", self.what)));
        }
        let nw = len.checked_mul(width as usize).ok_or_else(|| self.corrupt())?.div_ceil(64);
        let words = self.take(nw)?;
        IntVec::from_raw(words, len, width as u32)
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.words.len() {
            Ok(())
        } else {
            Err(Error::CorruptIndex(format!("section {} has trailing data", self.what)))
        }
    }
}

fn sections_of(idx: &SelfIndex) -> Vec<(SectionId, Words)> {
    let fm = &idx.fm;
    let seq = fm.bwt();
    let mut out = Vec::new();
    for id in ALL_SECTIONS {
        let mut w = Words::default();
        match id {
            SectionId::AlphabetMap => match &idx.alphabet {
                Some(map) => {
                    w.u(1);
                    w.u(map.used_bytes().len() as u64);
                    w.0.extend(map.used_bytes().iter().map(|&b| b as u64));
                }
                None => w.u(0),
            },
            SectionId::Payload => {
                w.u(seq.payload_levels().len() as u64);
                seq.payload_levels().iter().for_each(|bv| w.bits(bv));
            }
            SectionId::ChunkDir => {
                w.u(seq.chunk_dir().chunk_size() as u64);
                seq.chunk_dir().per_symbol().iter().for_each(|bv| w.bits(bv));
            }
            SectionId::PartialRank => seq.prank().parts().iter().for_each(|v| w.ints(v)),
            SectionId::IntervalRank => {
                w.u(fm.interval_index().group_size() as u64);
                fm.interval_index().parts().iter().for_each(|v| w.ints(v));
            }
            SectionId::Acc => fm.acc().iter().for_each(|&a| w.u(a as u64)),
            SectionId::Samples => {
                let (marked, values, inv) = fm.samples().parts();
                w.u(fm.sample_rate() as u64);
                w.bits(marked);
                w.ints(values);
                w.ints(inv);
            }
            SectionId::Topology => w.bits(idx.topo.bits()),
            SectionId::LeafMap => w.bits(idx.topo.leaf_marks()),
            SectionId::Marked => w.bits(idx.dicts.parts().0),
            SectionId::Dicts => {
                let (_, bounds, ints) = idx.dicts.parts();
                w.bits(bounds);
                ints[..4].iter().for_each(|v| w.ints(v));
            }
            SectionId::HeavyChild => w.ints(idx.dicts.parts().2[4]),
        }
        out.push((id, w));
    }
    out
}

fn header_len(sections: usize) -> usize {
    4 + 4 + 4 * 8 + 32 + 8 + sections * 24 + 32 + 8
}

/// Byte length of the fixed header, section table and checks included.
pub const HEADER_LEN: usize = 4 + 4 + 4 * 8 + 32 + 8 + ALL_SECTIONS.len() * 24 + 32 + 8;

/// Serializes the index.
pub fn to_bytes(idx: &SelfIndex) -> Vec<u8> {
    let sections = sections_of(idx);
    let hlen = header_len(sections.len());
    let mut body = Vec::new();
    let mut table = Vec::new();
    for (id, w) in &sections {
        let off = hlen + body.len();
        for x in &w.0 {
            body.extend_from_slice(&x.to_le_bytes());
        }
        table.push((*id as u64, off as u64, (w.0.len() * 8) as u64));
    }
    let mut out = Vec::with_capacity(hlen + body.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for x in [idx.len(), idx.sigma(), idx.fm.sample_rate(), idx.params.d] {
        out.extend_from_slice(&(x as u64).to_le_bytes());
    }
    out.extend_from_slice(&idx.digest);
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    for (id, off, len) in table {
        for x in [id, off, len] {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out.extend_from_slice(&Sha256::digest(&body));
    let check = header_check(&out);
    out.extend_from_slice(&check.to_le_bytes());
    debug_assert_eq!(out.len(), hlen);
    out.extend_from_slice(&body);
    out
}

fn header_check(bytes: &[u8]) -> u64 {
    let h = Sha256::digest(bytes);
    u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

fn corrupt(msg: &str) -> Error {
    Error::CorruptIndex(msg.to_string())
}

fn le_u64(bytes: &[u8], at: usize) -> Result<u64> {
    bytes
        .get(at..at + 8)
        .map(|s| u64::from_le_bytes(s.try_into().expect("8 bytes")))
        .ok_or_else(|| corrupt("truncated header"))
}

/// Validates magic, version and header check; returns the header.
pub fn read_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(corrupt("bad magic"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(Error::CorruptIndex(format!("unsupported version {version}")));
    }
    let n = le_u64(bytes, 8)?;
    let sigma = le_u64(bytes, 16)?;
    let b = le_u64(bytes, 24)?;
    let d = le_u64(bytes, 32)?;
    let mut text_digest = [0u8; 32];
    text_digest.copy_from_slice(bytes.get(40..72).ok_or_else(|| corrupt("truncated header"))?);
    let count = le_u64(bytes, 72)?;
    if count != ALL_SECTIONS.len() as u64 {
        return Err(corrupt("section count"));
    }
    let hlen = header_len(count as usize);
    if bytes.len() < hlen {
        return Err(corrupt("truncated header"));
    }
    let check = le_u64(bytes, hlen - 8)?;
    if check != header_check(&bytes[..hlen - 8]) {
        return Err(corrupt("header checksum mismatch"));
    }
    let mut sections = Vec::new();
    for k in 0..count as usize {
        let at = 80 + 24 * k;
        sections.push((le_u64(bytes, at)?, le_u64(bytes, at + 8)?, le_u64(bytes, at + 16)?));
    }
    Ok(Header { version, n, sigma, b, d, text_digest, sections })
}

/// Parses and validates an index.
pub fn from_bytes(bytes: &[u8]) -> Result<SelfIndex> {
    let h = read_header(bytes)?;
    let hlen = header_len(h.sections.len());
    if Sha256::digest(&bytes[hlen..]).as_slice() != &bytes[hlen - 40..hlen - 8] {
        return Err(corrupt("body checksum mismatch"));
    }
    let mut words: Vec<Vec<u64>> = Vec::new();
    let mut expect = hlen as u64;
    for (k, &(id, off, len)) in h.sections.iter().enumerate() {
        if id != ALL_SECTIONS[k] as u64 || off != expect || len % 8 != 0 {
            return Err(corrupt("section table"));
        }
        let end = off.checked_add(len).filter(|&e| e <= bytes.len() as u64).ok_or_else(|| corrupt("section bounds"))?;
        words.push(
            bytes[off as usize..end as usize]
                .chunks_exact(8)
                .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect(),
        );
        expect = end;
    }
    if expect != bytes.len() as u64 {
        return Err(corrupt("trailing bytes"));
    }

    let to_usize = |x: u64| usize::try_from(x).map_err(|_| corrupt("header field"));
    let n = to_usize(h.n)?;
    let sigma = to_usize(h.sigma)?;
    let b = to_usize(h.b)?;
    if n == 0 || sigma == 0 || b == 0 || HeavyLightParams::for_alphabet(sigma).d as u64 != h.d {
        return Err(corrupt("header fields"));
    }
    let reader = |k: usize| Reader { words: &words[k], pos: 0, what: ALL_SECTIONS[k].name() };

    let mut r = reader(0);
    let alphabet = match r.u()? {
        0 => None,
        1 => {
            let k = r.usize()?;
            let used: Vec<u8> = r.take(k)?.into_iter().map(|x| x as u8).collect();
            let map = AlphabetMap::from_used(&used)?;
            if map.sigma() != sigma {
                return Err(corrupt("alphabet size"));
            }
            Some(map)
        }
        _ => return Err(corrupt("alphabet flag")),
    };
    r.done()?;

    let mut r = reader(1);
    let nlev = r.usize()?;
    let levels = (0..nlev).map(|_| r.bits()).collect::<Result<Vec<_>>>()?;
    r.done()?;

    let mut r = reader(2);
    let chunk = r.usize()?;
    if chunk != sigma {
        return Err(corrupt("chunk size"));
    }
    let chunk_bits = (0..sigma).map(|_| r.bits()).collect::<Result<Vec<_>>>()?;
    r.done()?;

    let mut r = reader(3);
    let prank = [r.ints()?, r.ints()?, r.ints()?, r.ints()?];
    r.done()?;

    if levels.iter().any(|bv| bv.len() != n) {
        return Err(corrupt("payload length"));
    }
    let seq = SequenceIndex::from_parts(sigma, n, levels, chunk_bits, prank)?;

    let mut r = reader(4);
    let g = r.usize()?;
    if g != HeavyLightParams::for_alphabet(sigma).group_size() {
        return Err(corrupt("interval rank group size"));
    }
    let irx = IntervalRankIndex::from_parts(g, n, [r.ints()?, r.ints()?, r.ints()?, r.ints()?])?;
    r.done()?;

    let mut r = reader(5);
    let acc = (0..sigma).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
    r.done()?;

    let mut r = reader(6);
    if r.usize()? != b {
        return Err(corrupt("sample rate"));
    }
    let samples = SampledSA::from_parts(b, r.bits()?, r.ints()?, r.ints()?)?;
    r.done()?;

    let fm = FMIndex::from_parts(seq, irx, acc, samples)?;

    let mut r = reader(7);
    let bp = r.bits()?;
    r.done()?;
    if !balanced(&bp) {
        return Err(corrupt("topology parentheses"));
    }
    let topo = SuffixTreeTopo::from_bits(bp);
    if topo.num_leaves_total() != n {
        return Err(corrupt("topology leaves"));
    }
    let mut r = reader(8);
    if &r.bits()? != topo.leaf_marks() {
        return Err(corrupt("leaf map"));
    }
    r.done()?;

    let mut r = reader(9);
    let marked = r.bits()?;
    r.done()?;
    if marked.len() != topo.num_nodes() {
        return Err(corrupt("dictionary marks"));
    }
    let mut r = reader(10);
    let bounds = r.bits()?;
    let (keys, child, lo, hi) = (r.ints()?, r.ints()?, r.ints()?, r.ints()?);
    r.done()?;
    let mut r = reader(11);
    let heavy = r.ints()?;
    r.done()?;
    let dicts = NodeDicts::from_parts(sigma, marked, bounds, [keys, child, lo, hi, heavy])?;

    Ok(SelfIndex {
        fm,
        topo,
        dicts,
        params: HeavyLightParams::for_alphabet(sigma),
        alphabet,
        digest: h.text_digest,
    })
}

fn balanced(bp: &BitVec) -> bool {
    let mut depth: i64 = 0;
    for i in 0..bp.len() {
        depth += if bp.get(i) { 1 } else { -1 };
        if depth < 0 || (depth == 0 && i + 1 < bp.len()) {
            return false;
        }
    }
    depth == 0 && !bp.is_empty()
}

impl SelfIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        to_bytes(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        from_bytes(bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        from_bytes(&fs::read(path)?)
    }
}

/// Byte size of each section of a serialized index.
pub fn section_sizes(bytes: &[u8]) -> Result<Vec<(&'static str, u64)>> {
    let h = read_header(bytes)?;
    h.sections
        .iter()
        .map(|&(id, _, len)| {
            ALL_SECTIONS
                .iter()
                .find(|s| **s as u64 == id)
                .map(|s| (s.name(), len))
                .ok_or_else(|| corrupt("section id"))
        })
        .collect()
}
