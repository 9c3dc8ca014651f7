//! Weighted random choice over mutable integer weights.
//!
//! A uniform draw `r` in `[0, total)` is mapped to the event `k` whose
//! suffix-sum bracket `suffix(k+1) <= r < suffix(k)` contains it, so event
//! `k` is chosen with probability `weight[k] / total`. Weight changes and
//! draws both take `O(log n)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::CheckedI64;
use crate::sumtree::PartialSumTree;
use crate::{Error, Result};

/// Name of the pseudo-random generator behind every sampler.
pub const RNG_NAME: &str = "ChaCha8Rng";

#[derive(Debug, Clone)]
pub struct WeightedSampler {
    tree: PartialSumTree<CheckedI64>,
    rng: ChaCha8Rng,
    seed: u64,
}

impl WeightedSampler {
    /// Creates a sampler; weights must be nonnegative.
    pub fn new(weights: &[i64], seed: u64) -> Result<Self> {
        if let Some(k) = weights.iter().position(|&w| w < 0) {
            return Err(Error::NegativeWeight(k));
        }
        Ok(Self {
            tree: PartialSumTree::build(CheckedI64, weights)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.tree.total()
    }

    pub fn weight(&self, k: usize) -> Result<i64> {
        self.tree.get(k)
    }

    pub fn tree(&self) -> &PartialSumTree<CheckedI64> {
        &self.tree
    }

    /// The event selected by the uniform value `r`, `0 <= r < total`.
    pub fn select(&self, r: i64) -> Result<usize> {
        if self.total() <= 0 {
            return Err(Error::ZeroTotal);
        }
        self.tree.find(r)
    }

    /// Draws one event.
    pub fn draw(&mut self) -> Result<usize> {
        let total = self.total();
        if total <= 0 {
            return Err(Error::ZeroTotal);
        }
        // rand's bounded integer sampling rejects instead of reducing modulo
        let r = self.rng.random_range(0..total);
        self.tree.find(r)
    }

    pub fn update_weight(&mut self, k: usize, weight: i64) -> Result<()> {
        if weight < 0 {
            return Err(Error::NegativeWeight(k));
        }
        self.tree.set(k, weight)
    }

    pub fn increment_weight(&mut self, k: usize, delta: i64) -> Result<()> {
        let current = self.tree.get(k)?;
        match current.checked_add(delta) {
            Some(w) if w < 0 => Err(Error::NegativeWeight(k)),
            Some(_) => self.tree.inc(k, delta),
            None => Err(Error::Overflow),
        }
    }

    /// Counts of `draws` consecutive draws, indexed by event.
    pub fn histogram(&mut self, draws: usize) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; self.len()];
        for _ in 0..draws {
            counts[self.draw()?] += 1;
        }
        Ok(counts)
    }
}
