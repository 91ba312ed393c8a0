//! Compressed self-index that answers counting queries with a suffix tree
//! guided backward search over the BWT of the reversed text.
//!
//! [`SelfIndex`] is the entry point: build it over a byte string, then
//! count, locate and extract. The lower modules are public so each layer can
//! be used and tested on its own.

pub mod bitvec;
pub mod builder;
pub mod container;
pub mod counters;
pub mod error;
pub mod fm_index;
pub mod interval_rank;
pub mod node_dict;
pub mod search;
pub mod sequence;
pub mod space;
pub mod suffix;

pub use builder::{BuildOptions, BuildReport};
pub use counters::QueryStats;
pub use error::{Error, Result};
pub use search::{SearchOutcome, SelfIndex};
pub use space::SpaceReport;
pub use suffix::Text;
