//! Loop-iteration counters and timings for the tree operations.
//!
//! Every operation is run on a tree and on a [`NaiveArray`] with identical
//! inputs. Iteration counts come from the traced variants and are exact;
//! wall-clock times are informational only.
//!
//! Iterations are counted as loop-condition evaluations for `sumN` and
//! `get`, visited cells for `inc`, and loop-body executions for `find`.

use std::fmt;
use std::time::{Duration, Instant};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::CheckedI64;
use crate::oracle::NaiveArray;
use crate::sampler::RNG_NAME;
use crate::sumtree::PartialSumTree;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchOp {
    Inc,
    SuffixSum,
    Get,
    Find,
}

impl BenchOp {
    pub const ALL: [BenchOp; 4] = [BenchOp::Inc, BenchOp::SuffixSum, BenchOp::Get, BenchOp::Find];

    pub fn name(self) -> &'static str {
        match self {
            BenchOp::Inc => "inc",
            BenchOp::SuffixSum => "sumN",
            BenchOp::Get => "get",
            BenchOp::Find => "find",
        }
    }

    /// Largest iteration count allowed at capacity `n`.
    pub fn iteration_bound(self, n: usize) -> usize {
        let log = n.trailing_zeros() as usize;
        match self {
            BenchOp::Find => log,
            _ => log + 1,
        }
    }
}

/// Relative frequencies of the operations in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpMix {
    pub inc: u32,
    pub sum: u32,
    pub get: u32,
    pub find: u32,
}

impl Default for OpMix {
    fn default() -> Self {
        Self { inc: 1, sum: 1, get: 1, find: 1 }
    }
}

impl fmt::Display for OpMix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inc:{},sum:{},get:{},find:{}", self.inc, self.sum, self.get, self.find)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub op: BenchOp,
    pub size: usize,
    pub count: usize,
    pub mean_iterations: f64,
    pub max_iterations: usize,
    pub bound: usize,
    pub mean_ns: f64,
    pub naive_mean_ns: f64,
    /// Queries where the tree and the naive array disagreed.
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub mix: OpMix,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, op: BenchOp, size: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.op == op && r.size == size)
    }

    pub fn within_bounds(&self) -> bool {
        self.rows.iter().all(|r| r.max_iterations <= r.bound)
    }

    pub fn mismatches(&self) -> usize {
        self.rows.iter().map(|r| r.mismatches).sum()
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "op={} n={} count={} mean_iters={:.3} max_iters={} bound={} mean_ns={:.1} naive_mean_ns={:.1} mismatches={} mix={} seed={} rng={}",
                r.op.name(),
                r.size,
                r.count,
                r.mean_iterations,
                r.max_iterations,
                r.bound,
                r.mean_ns,
                r.naive_mean_ns,
                r.mismatches,
                self.mix,
                self.seed,
                RNG_NAME,
            )?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    count: usize,
    iterations: usize,
    max_iterations: usize,
    tree_time: Duration,
    naive_time: Duration,
    mismatches: usize,
}

impl Tally {
    fn record(&mut self, iterations: usize, tree_time: Duration, naive_time: Duration, agree: bool) {
        self.count += 1;
        self.iterations += iterations;
        self.max_iterations = self.max_iterations.max(iterations);
        self.tree_time += tree_time;
        self.naive_time += naive_time;
        self.mismatches += usize::from(!agree);
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Runs `ops` random operations drawn from `mix` at each size.
///
/// Sizes must be powers of two, at least 2; the array is filled to capacity
/// with weights in `[0, 100]`.
pub fn run_bench(sizes: &[usize], ops: usize, mix: OpMix, seed: u64) -> Result<BenchReport> {
    if let Some(&bad) = sizes.iter().find(|&&n| n < 2 || !n.is_power_of_two()) {
        return Err(Error::InvalidCapacity(bad));
    }
    let weights = [mix.inc, mix.sum, mix.get, mix.find];
    let choose = WeightedIndex::new(weights).map_err(|_| Error::ZeroTotal)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();

    for &n in sizes {
        let values: Vec<i64> = (0..n).map(|_| rng.random_range(0..=100)).collect();
        let mut tree = PartialSumTree::build(CheckedI64, &values)?;
        let mut naive = NaiveArray::new(CheckedI64, &values);
        let mut tallies: [Tally; 4] = Default::default();

        for _ in 0..ops {
            let op = BenchOp::ALL[choose.sample(&mut rng)];
            let tally = &mut tallies[op as usize];
            match op {
                BenchOp::Inc => {
                    let (k, d) = (rng.random_range(0..n), rng.random_range(0..=10));
                    let (res, t) = timed(|| tree.inc(k, d));
                    let (naive_res, nt) = timed(|| naive.inc(k, d));
                    // the descent does not depend on the delta
                    let trace = tree.inc_traced(k, 0)?;
                    tally.record(trace.indices.len(), t, nt, res == naive_res);
                }
                BenchOp::SuffixSum => {
                    let k = rng.random_range(0..=n);
                    let (res, t) = timed(|| tree.suffix_sum(k));
                    let (naive_res, nt) = timed(|| naive.suffix_sum(k));
                    let (_, trace) = tree.suffix_sum_traced(k)?;
                    tally.record(trace.indices.len(), t, nt, res == naive_res);
                }
                BenchOp::Get => {
                    let k = rng.random_range(0..n);
                    let (res, t) = timed(|| tree.get(k));
                    let (naive_res, nt) = timed(|| naive.get(k));
                    let (_, trace) = tree.get_traced(k)?;
                    tally.record(trace.indices.len(), t, nt, res == naive_res);
                }
                BenchOp::Find => {
                    let total = tree.total();
                    if total <= 0 {
                        continue;
                    }
                    let x = rng.random_range(0..total);
                    let (res, t) = timed(|| tree.find(x));
                    let (naive_res, nt) = timed(|| naive.find(x));
                    let (_, trace) = tree.find_traced(x)?;
                    tally.record(trace.steps, t, nt, res == naive_res);
                }
            }
        }

        for op in BenchOp::ALL {
            let t = &tallies[op as usize];
            let per = |total: f64| if t.count == 0 { 0.0 } else { total / t.count as f64 };
            rows.push(BenchRow {
                op,
                size: n,
                count: t.count,
                mean_iterations: per(t.iterations as f64),
                max_iterations: t.max_iterations,
                bound: op.iteration_bound(n),
                mean_ns: per(t.tree_time.as_nanos() as f64),
                naive_mean_ns: per(t.naive_time.as_nanos() as f64),
                mismatches: t.mismatches,
            });
        }
    }

    Ok(BenchReport { seed, mix, rows })
}
