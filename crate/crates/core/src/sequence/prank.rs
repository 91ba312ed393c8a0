use crate::bitvec::{bits_for, IntVec};

/// Group-local bookkeeping that answers partial rank with three directory
/// reads. Positions are split into groups of `g` symbols; inside a group each
/// distinct symbol gets a slot, numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PartialRankDirectory {
    g: usize,
    /// Slot of the symbol at each position.
    slot: IntVec,
    /// Earlier occurrences of the same symbol inside the group.
    ordinal: IntVec,
    /// Global index of each group's first slot; one extra trailing entry.
    group_slots: IntVec,
    /// Occurrences of the slot's symbol before its group.
    base: IntVec,
}

impl PartialRankDirectory {
    pub fn new(symbols: &[u32], sigma: usize, g: usize) -> Self {
        let n = symbols.len();
        let width = bits_for(g.saturating_sub(1) as u64);
        let mut slot = IntVec::new(width);
        let mut ordinal = IntVec::new(width);
        let mut group_slots = Vec::with_capacity(n.div_ceil(g) + 1);
        let mut base = Vec::new();

        let mut running = vec![0u64; sigma];
        // slot_of[a] is valid when stamp[a] == group index + 1
        let mut slot_of = vec![0u32; sigma];
        let mut stamp = vec![0usize; sigma];
        let mut seen_in_group = Vec::with_capacity(g);
        let mut count_in_group = Vec::with_capacity(g);

        for (gi, block) in symbols.chunks(g).enumerate() {
            group_slots.push(base.len() as u64);
            seen_in_group.clear();
            count_in_group.clear();
            for &x in block {
                let a = x as usize;
                if stamp[a] != gi + 1 {
                    stamp[a] = gi + 1;
                    slot_of[a] = seen_in_group.len() as u32;
                    seen_in_group.push(x);
                    count_in_group.push(0u64);
                    base.push(running[a]);
                }
                let s = slot_of[a] as usize;
                slot.push(s as u64);
                ordinal.push(count_in_group[s]);
                count_in_group[s] += 1;
            }
            for (s, &x) in seen_in_group.iter().enumerate() {
                running[x as usize] += count_in_group[s];
            }
        }
        group_slots.push(base.len() as u64);

        Self {
            g,
            slot,
            ordinal,
            group_slots: IntVec::from_slice(&group_slots),
            base: IntVec::from_slice(&base),
        }
    }

    pub fn from_parts(g: usize, slot: IntVec, ordinal: IntVec, group_slots: IntVec, base: IntVec) -> Self {
        Self { g, slot, ordinal, group_slots, base }
    }

    pub fn parts(&self) -> [&IntVec; 4] {
        [&self.slot, &self.ordinal, &self.group_slots, &self.base]
    }

    pub fn group_size(&self) -> usize {
        self.g
    }

    /// Number of occurrences of `access(i)` in `[0, i]`.
    #[inline]
    pub fn partial_rank(&self, i: usize) -> usize {
        let gs = self.group_slots.get(i / self.g) as usize;
        (self.base.get(gs + self.slot.get(i) as usize) + self.ordinal.get(i)) as usize + 1
    }

    #[inline]
    pub fn slot(&self, i: usize) -> usize {
        self.slot.get(i) as usize
    }

    /// Global slot range of group `gi`.
    #[inline]
    pub fn group_slot_range(&self, gi: usize) -> (usize, usize) {
        (self.group_slots.get(gi) as usize, self.group_slots.get(gi + 1) as usize)
    }

    #[inline]
    pub fn base(&self, global_slot: usize) -> usize {
        self.base.get(global_slot) as usize
    }

    pub fn size_in_bits(&self) -> usize {
        self.parts().iter().map(|v| v.size_in_bits()).sum()
    }
}
