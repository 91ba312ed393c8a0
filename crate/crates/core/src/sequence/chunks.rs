use crate::bitvec::{BitVec, BitVecBuilder};

/// Per-symbol unary chunk counts: `A_a = 0 1^{c_0} 0 1^{c_1} ...` where `c_k`
/// is the number of occurrences of `a` in chunk `k` (positions
/// `[k*sigma, (k+1)*sigma)`, last chunk ragged).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ChunkDirectory {
    chunk: usize,
    per_symbol: Vec<BitVec>,
}

impl ChunkDirectory {
    pub fn new(symbols: &[u32], sigma: usize) -> Self {
        let chunk = sigma.max(1);
        let mut builders: Vec<BitVecBuilder> = (0..sigma).map(|_| BitVecBuilder::new()).collect();
        let mut counts = vec![0usize; sigma];
        for block in symbols.chunks(chunk) {
            for &x in block {
                counts[x as usize] += 1;
            }
            for (a, b) in builders.iter_mut().enumerate() {
                b.push(false);
                b.push_run(true, counts[a]);
                counts[a] = 0;
            }
        }
        Self { chunk, per_symbol: builders.into_iter().map(BitVecBuilder::build).collect() }
    }

    pub fn from_parts(chunk: usize, per_symbol: Vec<BitVec>) -> Self {
        Self { chunk, per_symbol }
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk
    }

    pub fn per_symbol(&self) -> &[BitVec] {
        &self.per_symbol
    }

    /// Occurrences of `a` before chunk `k`: `select0(k + 1, A_a) - k`.
    #[inline]
    pub fn base(&self, a: u32, k: usize) -> usize {
        self.per_symbol[a as usize].select0_unchecked(k + 1) - k
    }

    /// Occurrences of `a` inside chunk `k`.
    #[cfg(test)]
    pub fn count_in_chunk(&self, a: u32, k: usize) -> usize {
        let bv = &self.per_symbol[a as usize];
        let start = bv.select0_unchecked(k + 1);
        let end = if k + 2 <= bv.count_zeros() { bv.select0_unchecked(k + 2) } else { bv.len() };
        end - start - 1
    }

    pub fn size_in_bits(&self) -> usize {
        self.per_symbol.iter().map(BitVec::size_in_bits).sum()
    }
}
