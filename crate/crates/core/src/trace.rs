//! Loop traces of the tree operations.
//!
//! Plain operations run with the no-op [`Probe`] for `()`, which compiles
//! away. The `*_traced` operations record into an [`OpTrace`].

use std::fmt::{self, Display, Write as _};

/// Observer of the loop variables of a tree operation.
pub trait Probe<E> {
    /// Loop index and accumulator at one observation point.
    fn visit(&mut self, index: usize, acc: E);
    /// Search position, recorded initially and whenever it moves.
    fn position(&mut self, k: usize);
    /// One execution of the loop body.
    fn step(&mut self);
}

impl<E> Probe<E> for () {
    #[inline(always)]
    fn visit(&mut self, _: usize, _: E) {}
    #[inline(always)]
    fn position(&mut self, _: usize) {}
    #[inline(always)]
    fn step(&mut self) {}
}

/// Recorded loop variables of one operation.
///
/// For `suffix_sum`, `get` and `find` there is one `indices`/`accumulators`
/// entry per evaluation of the loop condition, so the terminal index is
/// included. For `inc` there is one entry per updated cell, holding the new
/// cell value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTrace<E> {
    pub indices: Vec<usize>,
    pub accumulators: Vec<E>,
    /// `find` only: the position `k`, initially and after each change.
    pub positions: Vec<usize>,
    /// Number of loop-body executions.
    pub steps: usize,
}

impl<E> Default for OpTrace<E> {
    fn default() -> Self {
        Self { indices: Vec::new(), accumulators: Vec::new(), positions: Vec::new(), steps: 0 }
    }
}

impl<E> Probe<E> for OpTrace<E> {
    fn visit(&mut self, index: usize, acc: E) {
        self.indices.push(index);
        self.accumulators.push(acc);
    }

    fn position(&mut self, k: usize) {
        self.positions.push(k);
    }

    fn step(&mut self) {
        self.steps += 1;
    }
}

/// Which operation a trace came from; selects the row labels when rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    SuffixSum,
    Get,
    Inc,
    Find,
}

impl TraceKind {
    fn accumulator_label(self) -> Option<&'static str> {
        match self {
            TraceKind::SuffixSum => Some("sm"),
            TraceKind::Get => Some("x"),
            TraceKind::Find => Some("pv"),
            TraceKind::Inc => None,
        }
    }
}

fn row<T: Display>(out: &mut String, label: &str, items: &[T]) {
    out.push_str(label);
    out.push(':');
    for item in items {
        let _ = write!(out, " {item}");
    }
    out.push('\n');
}

/// Renders a trace as text rows in the order of the classic sample-run
/// tables: `i`, then the accumulator, then `k` for searches, then the result.
///
/// ```
/// use partial_sums::{CheckedI64, PartialSumTree, TraceKind};
///
/// let x = [14, 8, 6, 3, 8, 1, 5, 3, 20, 7, 3, 4, 6, 2, 4, 5];
/// let tree = PartialSumTree::build(CheckedI64, &x).unwrap();
/// let (sum, trace) = tree.suffix_sum_traced(3).unwrap();
/// let text = partial_sums::trace::render(TraceKind::SuffixSum, &trace, Some(sum));
/// assert_eq!(text, "i: 3 4 8 16\nsm: 0 3 20 71\nresult: 71\n");
/// ```
pub fn render<E: Display, R: Display>(kind: TraceKind, trace: &OpTrace<E>, result: Option<R>) -> String {
    let mut out = String::new();
    row(&mut out, "i", &trace.indices);
    if let Some(label) = kind.accumulator_label() {
        row(&mut out, label, &trace.accumulators);
    }
    if kind == TraceKind::Find {
        row(&mut out, "k", &trace.positions);
    }
    if let Some(result) = result {
        let _ = writeln!(out, "result: {result}");
    }
    out
}

impl<E: Display> Display for OpTrace<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        row(&mut out, "i", &self.indices);
        row(&mut out, "acc", &self.accumulators);
        if !self.positions.is_empty() {
            row(&mut out, "k", &self.positions);
        }
        f.write_str(out.trim_end())
    }
}
