//! The partial-sum tree.
//!
//! Cell `k` of the stored array holds the fold of the logical values
//! `X[k], X[k+1], ..., X[k + exp(k) - 1]`, with values at or beyond the
//! length `M` read as the identity. `exp(k)` is the largest power of two
//! dividing `k`, and `exp(0)` is the capacity `N`. Walking `i += exp(i)` from
//! `k` covers the suffix `X[k..M]`; walking `i -= exp(i)` from `k` visits
//! every cell whose window contains `k`.

use std::ops::{Bound, RangeBounds};

use crate::group::{AbelianGroup, OrderedGroup};
use crate::trace::{OpTrace, Probe};
use crate::{Error, Result};

/// Largest power of two dividing `k`, or `capacity` when `k == 0`.
///
/// Computed as `(capacity + k) & (capacity - k)`.
pub fn gcd_pow2(k: usize, capacity: usize) -> Result<usize> {
    if !capacity.is_power_of_two() {
        return Err(Error::InvalidCapacity(capacity));
    }
    if k >= capacity {
        return Err(Error::IndexOutOfRange { index: k, len: capacity });
    }
    Ok(step(capacity, k))
}

#[inline(always)]
fn step(capacity: usize, k: usize) -> usize {
    debug_assert!(k < capacity);
    (capacity + k) & (capacity - k)
}

fn min_capacity(len: usize) -> usize {
    len.max(1).next_power_of_two()
}

/// Stored cells for `values` at the given capacity.
///
/// `capacity` must be a power of two no smaller than `values.len()`. Each
/// cell is folded into its parent `i - exp(i)` from the highest index down,
/// so the construction is linear and uses only the group operation.
pub fn stored_cells<G: AbelianGroup>(ctx: &G, values: &[G::Elem], capacity: usize) -> Result<Vec<G::Elem>> {
    if !capacity.is_power_of_two() || capacity < values.len() {
        return Err(Error::InvalidCapacity(capacity));
    }
    let mut cells = values.to_vec();
    for i in (1..cells.len()).rev() {
        let parent = i - step(capacity, i);
        cells[parent] = ctx.combine(cells[parent], cells[i]).ok_or(Error::Overflow)?;
    }
    Ok(cells)
}

/// An array of group elements with logarithmic-time updates and partial sums.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumTree<G: AbelianGroup> {
    cells: Vec<G::Elem>,
    capacity: usize,
    ctx: G,
}

impl<G: AbelianGroup> PartialSumTree<G> {
    pub fn new(ctx: G) -> Self {
        Self { cells: Vec::new(), capacity: 1, ctx }
    }

    /// Builds a tree holding `values` in linear time.
    pub fn build(ctx: G, values: &[G::Elem]) -> Result<Self> {
        let capacity = min_capacity(values.len());
        let cells = stored_cells(&ctx, values, capacity)?;
        Ok(Self { cells, capacity, ctx })
    }

    /// Number of logical values `M`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The power of two `N` with `N/2 < M <= N` (1 for `M <= 1`).
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// The stored mixed sums.
    pub fn cells(&self) -> &[G::Elem] {
        &self.cells
    }

    pub fn context(&self) -> &G {
        &self.ctx
    }

    /// Sum of all values, `suffix_sum(0)`.
    pub fn total(&self) -> G::Elem {
        self.cells.first().copied().unwrap_or_else(|| self.ctx.identity())
    }

    /// Reads the logical values back out.
    pub fn to_vec(&self) -> Result<Vec<G::Elem>> {
        (0..self.len()).map(|k| self.get(k)).collect()
    }

    /// Stored cell, or the identity past the end.
    #[inline]
    fn cell(&self, i: usize) -> G::Elem {
        match self.cells.get(i) {
            Some(&v) => v,
            None => self.ctx.identity(),
        }
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: k, len: self.len() })
        }
    }

    fn combine(&self, a: G::Elem, b: G::Elem) -> Result<G::Elem> {
        self.ctx.combine(a, b).ok_or(Error::Overflow)
    }

    fn difference(&self, a: G::Elem, b: G::Elem) -> Result<G::Elem> {
        self.ctx.difference(a, b).ok_or(Error::Overflow)
    }

    /// Fold of `X[k..M]`; the identity for `k == M`.
    pub fn suffix_sum(&self, k: usize) -> Result<G::Elem> {
        self.suffix_sum_with(k, &mut ())
    }

    pub fn suffix_sum_traced(&self, k: usize) -> Result<(G::Elem, OpTrace<G::Elem>)> {
        let mut trace = OpTrace::default();
        let sum = self.suffix_sum_with(k, &mut trace)?;
        Ok((sum, trace))
    }

    fn suffix_sum_with(&self, k: usize, probe: &mut impl Probe<G::Elem>) -> Result<G::Elem> {
        let m = self.len();
        if k > m {
            return Err(Error::IndexOutOfRange { index: k, len: m });
        }
        let mut sum = self.ctx.identity();
        let mut i = k;
        loop {
            probe.visit(i, sum);
            if i >= m {
                break;
            }
            sum = self.combine(sum, self.cells[i])?;
            i += step(self.capacity, i);
            probe.step();
        }
        Ok(sum)
    }

    /// Fold of the values in `range`, as the difference of two suffix sums.
    ///
    /// An empty range yields the identity.
    pub fn range_sum(&self, range: impl RangeBounds<usize>) -> Result<G::Elem> {
        let (start, end) = resolve_range(range, self.len())?;
        let from = self.suffix_sum(start)?;
        let to = self.suffix_sum(end)?;
        self.difference(from, to)
    }

    /// The logical value `X[k]`.
    ///
    /// Starts from cell `k` and cancels the child cells `k+1, k+2, k+4, ...`
    /// inside its window.
    pub fn get(&self, k: usize) -> Result<G::Elem> {
        self.get_with(k, &mut ())
    }

    pub fn get_traced(&self, k: usize) -> Result<(G::Elem, OpTrace<G::Elem>)> {
        let mut trace = OpTrace::default();
        let value = self.get_with(k, &mut trace)?;
        Ok((value, trace))
    }

    fn get_with(&self, k: usize, probe: &mut impl Probe<G::Elem>) -> Result<G::Elem> {
        self.check_index(k)?;
        let m = self.len();
        let width = step(self.capacity, k);
        let mut x = self.cells[k];
        let mut i = 1;
        loop {
            probe.visit(i, x);
            if !(i < width && k + i < m) {
                break;
            }
            x = self.difference(x, self.cells[k + i])?;
            i *= 2;
            probe.step();
        }
        Ok(x)
    }

    /// Adds `delta` to `X[k]`.
    ///
    /// Updates exactly the cells whose window contains `k`. The tree is left
    /// untouched when any of those updates would overflow.
    pub fn inc(&mut self, k: usize, delta: G::Elem) -> Result<()> {
        self.inc_with(k, delta, &mut ())
    }

    pub fn inc_traced(&mut self, k: usize, delta: G::Elem) -> Result<OpTrace<G::Elem>> {
        let mut trace = OpTrace::default();
        self.inc_with(k, delta, &mut trace)?;
        Ok(trace)
    }

    fn inc_with(&mut self, k: usize, delta: G::Elem, probe: &mut impl Probe<G::Elem>) -> Result<()> {
        self.check_index(k)?;
        // first pass only validates, so a failed update leaves no partial writes
        let mut i = k;
        loop {
            self.combine(self.cells[i], delta)?;
            if i == 0 {
                break;
            }
            i -= step(self.capacity, i);
        }
        let mut i = k;
        loop {
            if let Some(v) = self.ctx.combine(self.cells[i], delta) {
                self.cells[i] = v;
            }
            probe.visit(i, self.cells[i]);
            probe.step();
            // the descent continues below zero in signed arithmetic; stop at 0
            if i == 0 {
                break;
            }
            i -= step(self.capacity, i);
        }
        Ok(())
    }

    /// Sets `X[k]` to `value` by adding the difference to the current value.
    pub fn set(&mut self, k: usize, value: G::Elem) -> Result<()> {
        let current = self.get(k)?;
        let delta = self.difference(value, current)?;
        self.inc(k, delta)
    }

    /// Appends `value`, doubling the capacity when the array is full.
    ///
    /// Doubling keeps every stored cell valid: `exp(k)` is unchanged for
    /// `0 < k < N`, and the window of cell 0 only gains identity elements.
    pub fn append(&mut self, value: G::Elem) -> Result<()> {
        let old_capacity = self.capacity;
        self.capacity = min_capacity(self.len() + 1);
        self.cells.push(self.ctx.identity());
        let k = self.len() - 1;
        if let Err(e) = self.inc(k, value) {
            self.cells.pop();
            self.capacity = old_capacity;
            return Err(e);
        }
        Ok(())
    }
}

impl<G: OrderedGroup> PartialSumTree<G> {
    /// Finds `k` with `suffix_sum(k+1) <= x < suffix_sum(k)`.
    ///
    /// Requires `identity <= x < total()`. The answer is unique when no value
    /// is negative; otherwise some index satisfying the bracket is returned.
    pub fn find(&self, x: G::Elem) -> Result<usize> {
        self.find_with(x, &mut ())
    }

    pub fn find_traced(&self, x: G::Elem) -> Result<(usize, OpTrace<G::Elem>)> {
        let mut trace = OpTrace::default();
        let k = self.find_with(x, &mut trace)?;
        Ok((k, trace))
    }

    fn find_with(&self, x: G::Elem, probe: &mut impl Probe<G::Elem>) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::Empty);
        }
        let ctx = &self.ctx;
        if ctx.less_than(x, ctx.identity()) || !ctx.less_than(x, self.total()) {
            return Err(Error::SearchOutOfRange);
        }

        let mut k = 0;
        let mut i = self.capacity / 2;
        // pivot: suffix sum starting at k + i
        let mut pivot = self.cell(i);
        probe.position(k);
        loop {
            probe.visit(i, pivot);
            if i == 0 {
                break;
            }
            if ctx.less_than(x, pivot) {
                // the pivot is not needed after the last halving
                if i > 1 {
                    let next = self.combine(pivot, self.cell(k + i * 3 / 2))?;
                    pivot = self.difference(next, self.cell(k + i))?;
                }
                k += i;
                probe.position(k);
            } else if i > 1 {
                pivot = self.combine(pivot, self.cell(k + i / 2))?;
            }
            i /= 2;
            probe.step();
        }
        Ok(k)
    }
}

fn resolve_range(range: impl RangeBounds<usize>, len: usize) -> Result<(usize, usize)> {
    let start = match range.start_bound() {
        Bound::Included(&s) => s,
        Bound::Excluded(&s) => s.checked_add(1).ok_or(Error::Overflow)?,
        Bound::Unbounded => 0,
    };
    let end = match range.end_bound() {
        Bound::Included(&e) => e.checked_add(1).ok_or(Error::Overflow)?,
        Bound::Excluded(&e) => e,
        Bound::Unbounded => len,
    };
    if start > end || end > len {
        return Err(Error::RangeOutOfBounds { start, end, len });
    }
    Ok((start, end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{CheckedI64, FloatSum};

    const FIG1_X: [i64; 16] = [14, 8, 6, 3, 8, 1, 5, 3, 20, 7, 3, 4, 6, 2, 4, 5];
    const FIG1_S: [i64; 16] = [99, 8, 9, 3, 17, 1, 8, 3, 51, 7, 7, 4, 17, 2, 9, 5];

    fn fig1() -> PartialSumTree<CheckedI64> {
        PartialSumTree::build(CheckedI64, &FIG1_X).unwrap()
    }

    /// Window sums computed directly from the definition.
    fn window_cells(values: &[i64], capacity: usize) -> Vec<i64> {
        (0..values.len())
            .map(|k| {
                let width = if k == 0 { capacity } else { 1 << k.trailing_zeros() };
                values[k..(k + width).min(values.len())].iter().sum()
            })
            .collect()
    }

    #[test]
    fn gcd_pow2_examples() {
        assert_eq!(gcd_pow2(12, 16), Ok(4));
        assert_eq!(gcd_pow2(0, 16), Ok(16));
        assert_eq!(gcd_pow2(3, 16), Ok(1));
        assert_eq!(gcd_pow2(16, 16), Err(Error::IndexOutOfRange { index: 16, len: 16 }));
        assert_eq!(gcd_pow2(1, 12), Err(Error::InvalidCapacity(12)));
    }

    #[test]
    fn gcd_pow2_is_lowest_set_bit() {
        for n in [1usize, 2, 4, 64, 1024] {
            for k in 1..n {
                let e = gcd_pow2(k, n).unwrap();
                assert_eq!(e, 1 << k.trailing_zeros());
                assert_eq!(k % e, 0);
            }
        }
    }

    #[test]
    fn build_fig1() {
        assert_eq!(fig1().cells(), &FIG1_S);
        assert_eq!(fig1().capacity(), 16);
    }

    #[test]
    fn build_clipped_window() {
        let t = PartialSumTree::build(CheckedI64, &[5, 1, 2]).unwrap();
        assert_eq!(t.capacity(), 4);
        assert_eq!(t.cells(), &window_cells(&[5, 1, 2], 4)[..]);
        assert_eq!(t.cells(), &[8, 1, 2]);
    }

    #[test]
    fn build_matches_definition_for_all_small_lengths() {
        for m in 0..=70usize {
            let values: Vec<i64> = (0..m as i64).map(|v| v * 7 % 11 - 5).collect();
            let t = PartialSumTree::build(CheckedI64, &values).unwrap();
            assert_eq!(t.cells(), &window_cells(&values, t.capacity())[..], "m = {m}");
            assert_eq!(t.to_vec().unwrap(), values);
        }
    }

    #[test]
    fn build_avoids_spurious_prefix_overflow() {
        let values = [i64::MAX, 1, -1];
        let t = PartialSumTree::build(CheckedI64, &values).unwrap();
        assert_eq!(t.to_vec().unwrap(), values);
        assert_eq!(PartialSumTree::build(CheckedI64, &[i64::MAX, 1]), Err(Error::Overflow));
    }

    #[test]
    fn empty_tree() {
        let t = PartialSumTree::build(CheckedI64, &[]).unwrap();
        assert_eq!(t.len(), 0);
        assert_eq!(t.capacity(), 1);
        assert_eq!(t.suffix_sum(0), Ok(0));
        assert_eq!(t.range_sum(..), Ok(0));
        assert_eq!(t.total(), 0);
        assert_eq!(t.find(0), Err(Error::Empty));
        assert!(t.get(0).is_err());
    }

    #[test]
    fn suffix_sums() {
        let t = fig1();
        let (sum, trace) = t.suffix_sum_traced(3).unwrap();
        assert_eq!(sum, 71);
        assert_eq!(trace.indices, vec![3, 4, 8, 16]);
        assert_eq!(trace.accumulators, vec![0, 3, 20, 71]);
        assert_eq!(t.suffix_sum(16), Ok(0));
        assert_eq!(t.suffix_sum(1), Ok(85));
        assert_eq!(t.suffix_sum(17), Err(Error::IndexOutOfRange { index: 17, len: 16 }));
    }

    #[test]
    fn range_sums() {
        let t = fig1();
        assert_eq!(t.range_sum(0..=15), Ok(99));
        assert_eq!(t.range_sum(3..=3), Ok(3));
        assert_eq!(t.range_sum(5..5), Ok(0));
        assert_eq!(t.range_sum(16..16), Ok(0));
        assert_eq!(t.range_sum(4..12), Ok(FIG1_X[4..12].iter().sum()));
        assert!(t.range_sum(3..17).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let reversed = t.range_sum(5..3);
        assert!(reversed.is_err());
    }

    #[test]
    fn get_values() {
        let t = fig1();
        let (x, trace) = t.get_traced(12).unwrap();
        assert_eq!(x, 6);
        assert_eq!(trace.indices, vec![1, 2, 4]);
        assert_eq!(trace.accumulators, vec![17, 15, 6]);
        assert_eq!(t.get(0), Ok(14));
        let zero = PartialSumTree::build(CheckedI64, &[0; 9]).unwrap();
        assert!((0..9).all(|k| zero.get(k) == Ok(0)));
        assert!(t.get(16).is_err());
    }

    #[test]
    fn inc_paths() {
        let mut t = fig1();
        assert_eq!(t.inc_traced(12, 1).unwrap().indices, vec![12, 8, 0]);
        assert_eq!(t.inc_traced(3, 1).unwrap().indices, vec![3, 2, 0]);
        assert_eq!(t.get(12), Ok(7));
        assert_eq!(t.get(3), Ok(4));

        let mut t = fig1();
        t.inc(7, 0).unwrap();
        assert_eq!(t.cells(), &FIG1_S);
    }

    #[test]
    fn inc_overflow_leaves_tree_untouched() {
        let mut t = PartialSumTree::build(CheckedI64, &[i64::MAX - 10, 0, 0, 5]).unwrap();
        let before = t.clone();
        assert_eq!(t.inc(3, 20), Err(Error::Overflow));
        assert_eq!(t, before);
    }

    #[test]
    fn set_values() {
        let mut t = fig1();
        t.set(12, 6).unwrap();
        assert_eq!(t.cells(), &FIG1_S);
        t.set(0, 0).unwrap();
        assert_eq!(t.suffix_sum(0), Ok(85));

        let mut one = PartialSumTree::build(CheckedI64, &[5]).unwrap();
        one.set(0, 9).unwrap();
        assert_eq!(one.get(0), Ok(9));
    }

    #[test]
    fn find_examples() {
        let t = fig1();
        let (k, trace) = t.find_traced(69).unwrap();
        assert_eq!(k, 3);
        assert_eq!(trace.indices, vec![8, 4, 2, 1, 0]);
        assert_eq!(trace.accumulators, vec![51, 68, 77, 71, 71]);
        assert_eq!(trace.positions, vec![0, 2, 3]);
        assert_eq!(trace.steps, 4);
        assert_eq!(t.find(0), Ok(15));
        assert_eq!(t.find(98), Ok(0));
        assert_eq!(t.find(99), Err(Error::SearchOutOfRange));
        assert_eq!(t.find(-1), Err(Error::SearchOutOfRange));
    }

    #[test]
    fn find_single_element() {
        let t = PartialSumTree::build(CheckedI64, &[4]).unwrap();
        let (k, trace) = t.find_traced(3).unwrap();
        assert_eq!(k, 0);
        assert_eq!(trace.steps, 0);
        assert_eq!(trace.accumulators, vec![4]);
    }

    #[test]
    fn single_cell_traces() {
        let t = PartialSumTree::build(CheckedI64, &[4]).unwrap();
        let (_, trace) = t.suffix_sum_traced(0).unwrap();
        assert_eq!(trace.indices, vec![0, 1]);
        assert_eq!(trace.steps, 1);
        let (_, trace) = t.get_traced(0).unwrap();
        assert_eq!(trace.indices, vec![1]);
    }

    #[test]
    fn find_skips_zero_weights() {
        let x = [0, 3, 0, 0, 2, 0, 1];
        let t = PartialSumTree::build(CheckedI64, &x).unwrap();
        let picks: Vec<usize> = (0..6).map(|r| t.find(r).unwrap()).collect();
        assert_eq!(picks, vec![6, 4, 4, 1, 1, 1]);
    }

    #[test]
    fn append_grows_capacity() {
        let mut t = PartialSumTree::new(CheckedI64);
        t.append(7).unwrap();
        assert_eq!(t.get(0), Ok(7));
        assert_eq!(t.capacity(), 1);

        // doubling alone leaves every cell as is
        let mut t = fig1();
        t.append(0).unwrap();
        assert_eq!(t.capacity(), 32);
        assert_eq!(&t.cells()[..16], &FIG1_S);

        // the following inc then touches only the descent 16 -> 0
        let mut t = fig1();
        t.append(1).unwrap();
        assert_eq!(t.capacity(), 32);
        assert_eq!(&t.cells()[1..16], &FIG1_S[1..]);
        assert_eq!(t.cells()[0], 100);
        assert_eq!(t.suffix_sum(0), Ok(100));
        let mut grown = FIG1_X.to_vec();
        grown.push(1);
        assert_eq!(t.cells(), &window_cells(&grown, 32)[..]);

        let mut t = fig1();
        t.append(0).unwrap();
        assert!((0..=16).all(|k| t.suffix_sum(k) == fig1().suffix_sum(k.min(16))));
    }

    #[test]
    fn append_overflow_rolls_back() {
        let mut t = PartialSumTree::build(CheckedI64, &[i64::MAX]).unwrap();
        let before = t.clone();
        assert_eq!(t.append(1), Err(Error::Overflow));
        assert_eq!(t, before);
    }

    #[test]
    fn cell_recursion_identity() {
        // s[k] = X[k] + sum of s[k + 2^i] for 2^i < exp(k), clipped at M
        for m in 1..=40usize {
            let values: Vec<i64> = (0..m as i64).map(|v| (v * 13) % 17 - 8).collect();
            let t = PartialSumTree::build(CheckedI64, &values).unwrap();
            for k in 0..m {
                let width = gcd_pow2(k, t.capacity()).unwrap();
                let mut expected = values[k];
                let mut i = 1;
                while i < width {
                    if k + i < m {
                        expected += t.cells()[k + i];
                    }
                    i *= 2;
                }
                assert_eq!(t.cells()[k], expected, "m = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn float_elements_within_tolerance() {
        let values: Vec<f64> = (0..37).map(|i| 0.1 * i as f64 + 1.0 / (i as f64 + 3.0)).collect();
        let t = PartialSumTree::build(FloatSum, &values).unwrap();
        for k in 0..=values.len() {
            let naive: f64 = values[k..].iter().sum();
            let got = t.suffix_sum(k).unwrap();
            assert!((got - naive).abs() <= 1e-9 * naive.abs().max(1.0), "k = {k}");
        }
        let r = t.total() * 0.5;
        let k = t.find(r).unwrap();
        assert!(t.suffix_sum(k + 1).unwrap() <= r && r < t.suffix_sum(k).unwrap());
    }

    #[test]
    fn shared_reads_across_threads() {
        let tree = fig1();
        let t = &tree;
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..4).map(|j| s.spawn(move || t.find(j * 20))).collect();
            for h in handles {
                assert!(h.join().unwrap().is_ok());
            }
        });
    }
}
