//! Brute-force reference semantics over a plain array.
//!
//! Every query is a direct linear fold or scan. Nothing here shares code
//! with the tree, so the two can be compared against each other.

use std::ops::{Bound, RangeBounds};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{AbelianGroup, CheckedI64, OrderedGroup};
use crate::sumtree::PartialSumTree;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveArray<G: AbelianGroup> {
    values: Vec<G::Elem>,
    ctx: G,
}

impl<G: AbelianGroup> NaiveArray<G> {
    pub fn new(ctx: G, values: &[G::Elem]) -> Self {
        Self { values: values.to_vec(), ctx }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[G::Elem] {
        &self.values
    }

    fn fold(&self, slice: &[G::Elem]) -> Result<G::Elem> {
        slice
            .iter()
            .try_fold(self.ctx.identity(), |acc, &v| self.ctx.combine(acc, v))
            .ok_or(Error::Overflow)
    }

    pub fn suffix_sum(&self, k: usize) -> Result<G::Elem> {
        match self.values.get(k..) {
            Some(tail) => self.fold(tail),
            None => Err(Error::IndexOutOfRange { index: k, len: self.len() }),
        }
    }

    pub fn range_sum(&self, range: impl RangeBounds<usize>) -> Result<G::Elem> {
        let start = match range.start_bound() {
            Bound::Included(&s) => s,
            Bound::Excluded(&s) => s + 1,
            Bound::Unbounded => 0,
        };
        let end = match range.end_bound() {
            Bound::Included(&e) => e + 1,
            Bound::Excluded(&e) => e,
            Bound::Unbounded => self.len(),
        };
        match self.values.get(start..end) {
            Some(slice) => self.fold(slice),
            None => Err(Error::RangeOutOfBounds { start, end, len: self.len() }),
        }
    }

    pub fn get(&self, k: usize) -> Result<G::Elem> {
        self.values.get(k).copied().ok_or(Error::IndexOutOfRange { index: k, len: self.len() })
    }

    pub fn inc(&mut self, k: usize, delta: G::Elem) -> Result<()> {
        let len = self.len();
        let slot = self.values.get_mut(k).ok_or(Error::IndexOutOfRange { index: k, len })?;
        *slot = self.ctx.combine(*slot, delta).ok_or(Error::Overflow)?;
        Ok(())
    }

    pub fn set(&mut self, k: usize, value: G::Elem) -> Result<()> {
        let len = self.len();
        *self.values.get_mut(k).ok_or(Error::IndexOutOfRange { index: k, len })? = value;
        Ok(())
    }

    pub fn append(&mut self, value: G::Elem) {
        self.values.push(value);
    }
}

impl<G: OrderedGroup> NaiveArray<G> {
    /// Scans down from the last index, accumulating the suffix fold, and
    /// returns the first `k` with `suffix(k+1) <= x < suffix(k)`. With
    /// negative values this is the largest such `k`.
    pub fn find(&self, x: G::Elem) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::Empty);
        }
        let ctx = &self.ctx;
        if ctx.less_than(x, ctx.identity()) {
            return Err(Error::SearchOutOfRange);
        }
        let mut above = ctx.identity();
        for k in (0..self.len()).rev() {
            let here = ctx.combine(above, self.values[k]).ok_or(Error::Overflow)?;
            if !ctx.less_than(x, above) && ctx.less_than(x, here) {
                return Ok(k);
            }
            above = here;
        }
        Err(Error::SearchOutOfRange)
    }
}

/// Outcome of [`run_differential`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialReport {
    pub sequences: usize,
    pub operations: usize,
    pub queries: usize,
    /// First disagreement, described for humans.
    pub first_mismatch: Option<String>,
}

impl DifferentialReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Runs random operation sequences on a tree and a naive array side by side.
///
/// For every starting length in `1..=max_len`, `sequences` random sequences
/// of `ops_per_sequence` operations are applied to both. Values are drawn
/// from `[-50, 50]`. Each operation is a mutation (`inc`, `set`, `append`)
/// or a query (`get`, `suffix_sum`, `range_sum`, `find`), and queries must
/// agree exactly. `find` is compared exactly when no value is negative and
/// checked for the bracket property otherwise.
pub fn run_differential(max_len: usize, sequences: usize, ops_per_sequence: usize, seed: u64) -> DifferentialReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DifferentialReport { sequences: 0, operations: 0, queries: 0, first_mismatch: None };

    for len in 1..=max_len {
        for seq in 0..sequences {
            // half the sequences start nonnegative so find gets exact comparisons
            let low = if seq % 2 == 0 { 0 } else { -50 };
            let values: Vec<i64> = (0..len).map(|_| rng.random_range(low..=50)).collect();
            report.sequences += 1;
            if let Err(msg) = differential_sequence(&values, ops_per_sequence, low, &mut rng, &mut report) {
                report.first_mismatch = Some(format!("len {len}, sequence {seq}: {msg}"));
                return report;
            }
        }
    }
    report
}

fn differential_sequence(
    values: &[i64],
    ops: usize,
    low: i64,
    rng: &mut ChaCha8Rng,
    report: &mut DifferentialReport,
) -> std::result::Result<(), String> {
    let mut tree = PartialSumTree::build(CheckedI64, values).map_err(|e| e.to_string())?;
    let mut naive = NaiveArray::new(CheckedI64, values);

    macro_rules! agree {
        ($what:expr, $a:expr, $b:expr) => {{
            let (a, b) = ($a, $b);
            if a != b {
                return Err(format!("{}: tree {:?}, naive {:?}", $what, a, b));
            }
        }};
    }

    for _ in 0..ops {
        report.operations += 1;
        let m = naive.len();
        match rng.random_range(0..7u8) {
            0 => {
                let (k, d) = (rng.random_range(0..m), rng.random_range(low..=50));
                agree!(format!("inc({k}, {d})"), tree.inc(k, d), naive.inc(k, d));
            }
            1 => {
                let (k, x) = (rng.random_range(0..m), rng.random_range(low..=50));
                agree!(format!("set({k}, {x})"), tree.set(k, x), naive.set(k, x));
            }
            2 => {
                let x = rng.random_range(low..=50);
                naive.append(x);
                agree!(format!("append({x})"), tree.append(x), Ok(()));
            }
            3 => {
                report.queries += 1;
                let k = rng.random_range(0..m);
                agree!(format!("get({k})"), tree.get(k), naive.get(k));
            }
            4 => {
                report.queries += 1;
                let k = rng.random_range(0..=m);
                agree!(format!("suffix_sum({k})"), tree.suffix_sum(k), naive.suffix_sum(k));
            }
            5 => {
                report.queries += 1;
                let j = rng.random_range(0..=m);
                let k = rng.random_range(j..=m);
                agree!(format!("range_sum({j}..{k})"), tree.range_sum(j..k), naive.range_sum(j..k));
            }
            _ => {
                let total = naive.suffix_sum(0).map_err(|e| e.to_string())?;
                if total <= 0 {
                    continue;
                }
                report.queries += 1;
                let x = rng.random_range(0..total);
                let found = tree.find(x).map_err(|e| format!("find({x}): {e}"))?;
                if naive.values().iter().all(|&v| v >= 0) {
                    agree!(format!("find({x})"), Ok::<usize, Error>(found), naive.find(x));
                } else {
                    let above = naive.suffix_sum(found + 1).map_err(|e| e.to_string())?;
                    let here = naive.suffix_sum(found).map_err(|e| e.to_string())?;
                    if !(above <= x && x < here) {
                        return Err(format!("find({x}) = {found} violates the bracket"));
                    }
                }
            }
        }
    }

    let stored = tree.to_vec().map_err(|e| e.to_string())?;
    agree!("final contents", stored.as_slice(), naive.values());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1_X: [i64; 16] = [14, 8, 6, 3, 8, 1, 5, 3, 20, 7, 3, 4, 6, 2, 4, 5];

    #[test]
    fn naive_queries() {
        let a = NaiveArray::new(CheckedI64, &FIG1_X);
        assert_eq!(a.suffix_sum(3), Ok(71));
        assert_eq!(a.suffix_sum(16), Ok(0));
        assert_eq!(a.range_sum(4..4), Ok(0));
        assert_eq!(a.range_sum(0..=15), Ok(99));
        assert_eq!(a.find(69), Ok(3));
        assert_eq!(a.find(99), Err(Error::SearchOutOfRange));
        assert!(a.suffix_sum(17).is_err());
        assert!(a.range_sum(3..18).is_err());
    }

    #[test]
    fn naive_updates() {
        let mut a = NaiveArray::new(CheckedI64, &[1, 2, 3]);
        a.inc(1, 5).unwrap();
        a.set(2, -4).unwrap();
        a.append(9);
        assert_eq!(a.values(), &[1, 7, -4, 9]);
        assert!(a.inc(4, 1).is_err());
        assert_eq!(NaiveArray::new(CheckedI64, &[i64::MAX]).inc(0, 1), Err(Error::Overflow));
    }

    #[test]
    fn naive_find_prefers_largest_bracket() {
        // suffix sums: 2, -1, 2, 0 -> x = 1 is bracketed at k = 2 and k = 0
        let a = NaiveArray::new(CheckedI64, &[3, -3, 2]);
        assert_eq!(a.find(1), Ok(2));
    }

    #[test]
    fn small_differential_run() {
        let report = run_differential(12, 10, 50, 7);
        assert!(report.passed(), "{:?}", report.first_mismatch);
        assert_eq!(report.sequences, 120);
        assert_eq!(report.operations, 6000);
    }
}
