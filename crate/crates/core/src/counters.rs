//! Per-query instrumentation. Each query owns its counters; nothing is global.

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Full rank queries on the sequence payload (two per general backward step).
    pub general_rank: u64,
    /// Small interval rank queries.
    pub interval_rank: u64,
    pub partial_rank: u64,
    pub access: u64,
    pub dict_lookups: u64,
    pub lf_steps: u64,
    /// Pattern steps handled by each search case: 1, 2, 3a, 3b, 4, 5.
    pub cases: [u64; 6],
    /// Widest interval seen when a light-detached step ran.
    pub max_light_width: u64,
}

impl QueryStats {
    pub fn merge(&mut self, other: &QueryStats) {
        self.general_rank += other.general_rank;
        self.interval_rank += other.interval_rank;
        self.partial_rank += other.partial_rank;
        self.access += other.access;
        self.dict_lookups += other.dict_lookups;
        self.lf_steps += other.lf_steps;
        for (a, b) in self.cases.iter_mut().zip(other.cases) {
            *a += b;
        }
        self.max_light_width = self.max_light_width.max(other.max_light_width);
    }
}
