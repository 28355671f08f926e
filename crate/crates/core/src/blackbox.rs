//! Product-replacement random walk on the AC-graph of a group, emitting
//! tuple components as pseudo-random elements of the normally generated
//! subgroup.
//!
//! Each step applies one move drawn uniformly from the alphabet's move
//! list, so kind, positions, sign and conjugator are all uniform over their
//! finite ranges. The walk makes no theoretical uniformity claim; the
//! chi-square report is a diagnostic, not a guarantee.

use crate::error::{Error, Result};
use crate::graph::{KTuple, MoveAlphabet, MoveSpec};
use crate::group::FiniteGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Default number of steps discarded before sampling starts.
pub const DEFAULT_BURN_IN: u64 = 1000;
/// Default number of steps between consecutive samples.
pub const DEFAULT_STRIDE: u64 = 10;

/// One random walk over the AC-graph, deterministic given its seed.
pub struct WalkState<'g> {
    alphabet: &'g MoveAlphabet<'g>,
    moves: Vec<MoveSpec>,
    entries: Vec<usize>,
    rng: ChaCha8Rng,
    steps_taken: u64,
}

impl<'g> WalkState<'g> {
    /// Starts a walk at `start`, which must normally generate the group:
    /// moves preserve membership, so the walk then stays inside the graph.
    pub fn new(alphabet: &'g MoveAlphabet<'g>, start: &KTuple, seed: u64) -> Result<Self> {
        if !crate::graph::is_n_generating(alphabet.group(), alphabet.operators(), start) {
            return Err(Error::NotNGenerating(start.entries().to_vec()));
        }
        Ok(WalkState {
            alphabet,
            moves: alphabet.moves(start.len()),
            entries: start.entries().to_vec(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            steps_taken: 0,
        })
    }

    pub fn tuple(&self) -> KTuple {
        KTuple::new(self.alphabet.group(), self.entries.clone())
            .expect("walk entries stay in range")
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    /// Applies one uniformly chosen move.
    pub fn step(&mut self) {
        let idx = self.rng.gen_range(0..self.moves.len());
        let m = self.moves[idx];
        self.alphabet.apply_into(&mut self.entries, &m);
        self.steps_taken += 1;
    }

    /// Runs `burn_in` steps, then emits `count` elements, each taken from a
    /// uniformly random coordinate after `stride` further steps.
    pub fn sample_elements(
        &mut self,
        burn_in: u64,
        count: usize,
        stride: u64,
    ) -> Result<Vec<usize>> {
        if count == 0 {
            return Err(Error::InvalidArgument(
                "sample count must be at least 1".into(),
            ));
        }
        for _ in 0..burn_in {
            self.step();
        }
        let k = self.entries.len();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            for _ in 0..stride {
                self.step();
            }
            let coord = self.rng.gen_range(0..k);
            out.push(self.entries[coord]);
        }
        Ok(out)
    }
}

/// Chi-square comparison of a sample stream against the uniform
/// distribution on the group.
#[derive(Debug, Clone, Serialize)]
pub struct UniformityReport {
    pub group_order: usize,
    pub total_samples: usize,
    pub counts: Vec<u64>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Set when fewer than 30 samples per element were provided.
    pub low_power: bool,
}

pub fn uniformity_report(samples: &[usize], group: &FiniteGroup) -> Result<UniformityReport> {
    let n = group.order();
    let mut counts = vec![0u64; n];
    for &s in samples {
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, order: n });
        }
        counts[s] += 1;
    }
    let total = samples.len();
    let dof = n - 1;
    let (chi_square, p_value) = if n == 1 || total == 0 {
        (0.0, 1.0)
    } else {
        let expected = total as f64 / n as f64;
        let chi: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        let dist = statrs::distribution::ChiSquared::new(dof as f64)
            .map_err(|e| Error::Internal(format!("chi-square setup: {e}")))?;
        use statrs::distribution::ContinuousCDF;
        (chi, dist.sf(chi))
    };
    Ok(UniformityReport {
        group_order: n,
        total_samples: total,
        counts,
        chi_square,
        degrees_of_freedom: dof,
        p_value,
        low_power: total < 30 * n,
    })
}
