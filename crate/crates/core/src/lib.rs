//! Partial sums over an array in logarithmic time.
//!
//! [`PartialSumTree`] stores a mix of single values and window sums in one
//! flat array: cell `k` holds the fold of the logical values
//! `X[k] .. X[k + exp(k) - 1]`, where `exp(k)` is the lowest set bit of `k`
//! (the capacity for `k = 0`). Point updates, point reads, suffix and range
//! sums and the search for a cumulative sum all run in `O(log N)`.
//!
//! The element type is supplied by an [`AbelianGroup`] context; searching
//! additionally needs an [`OrderedGroup`]. [`NaiveArray`] is the linear-time
//! reference used for differential testing, [`WeightedSampler`] draws events
//! with probability proportional to mutable integer weights, and [`bench`]
//! counts loop iterations to check the logarithmic bounds.
//!
//! ```
//! use partial_sums::{CheckedI64, PartialSumTree};
//!
//! let mut tree = PartialSumTree::build(CheckedI64, &[14, 8, 6, 3, 8, 1, 5, 3])?;
//! tree.inc(3, 10)?;
//! assert_eq!(tree.get(3)?, 13);
//! assert_eq!(tree.range_sum(2..=4)?, 27);
//! assert_eq!(tree.suffix_sum(6)?, 8);
//! assert_eq!(tree.find(7)?, 6);
//! # Ok::<(), partial_sums::Error>(())
//! ```

pub mod bench;
pub mod group;
pub mod oracle;
pub mod sampler;
pub mod sumtree;
pub mod trace;

pub use group::{check_group_laws, check_order_laws, AbelianGroup, CheckedI64, FloatSum, OrderedGroup};
pub use oracle::NaiveArray;
pub use sampler::WeightedSampler;
pub use sumtree::{gcd_pow2, stored_cells, PartialSumTree};
pub use trace::{OpTrace, TraceKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("range {start}..{end} out of bounds for length {len}")]
    RangeOutOfBounds { start: usize, end: usize, len: usize },
    #[error("capacity {0} is not a power of two large enough for the array")]
    InvalidCapacity(usize),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("array is empty")]
    Empty,
    #[error("search value is outside [identity, total)")]
    SearchOutOfRange,
    #[error("weight of event {0} would become negative")]
    NegativeWeight(usize),
    #[error("total weight is zero")]
    ZeroTotal,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
