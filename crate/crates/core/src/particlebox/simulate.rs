//! Monte Carlo observation game: draw arrangements from `p`, tally what each
//! particle tuple sees.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{restriction_matrix, Distribution, SystemSpec};
use crate::error::{Error, Result};
use crate::rational::{serde_rat_vec, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameTally {
    pub rounds: u64,
    pub seed: u64,
    /// Times each row key was observed, in row order.
    pub counts: Vec<u64>,
    /// `counts / rounds`, exactly.
    #[serde(with = "serde_rat_vec")]
    pub frequencies: Vec<Rat>,
}

impl GameTally {
    /// Largest `|frequency − expected|` over all rows, as a float.
    pub fn max_deviation(&self, expected: &[Rat]) -> f64 {
        self.frequencies
            .iter()
            .zip(expected)
            .map(|(f, e)| (f - e).to_f64().unwrap_or(f64::INFINITY).abs())
            .fold(0.0, f64::max)
    }
}

/// Cumulative thresholds `⌊(p_0 + … + p_i)·2^64⌋`; a uniform `u64` below
/// threshold `i` and at or above threshold `i − 1` selects arrangement `i`.
fn thresholds(p: &[Rat]) -> Vec<u128> {
    let scale = BigInt::from(1u128 << 64);
    let mut cum = Rat::zero();
    p.iter()
        .map(|x| {
            cum += x;
            let t = (&cum * Rat::from_integer(scale.clone())).floor().to_integer();
            t.to_u128().unwrap_or(0).min(1u128 << 64)
        })
        .collect()
}

pub fn simulate_game(s: &SystemSpec, p: &Distribution, rounds: u64, seed: u64) -> Result<GameTally> {
    if rounds == 0 {
        return Err(Error::invalid("need at least one round"));
    }
    if p.values.len() != s.arrangement_count() {
        return Err(Error::DimensionMismatch(format!(
            "distribution has {} entries, {s} has {} arrangements",
            p.values.len(),
            s.arrangement_count()
        )));
    }
    let m = restriction_matrix(s)?;
    let mut rows_of = vec![Vec::new(); m.cols];
    for (row, cols) in m.support.iter().enumerate() {
        for &c in cols {
            rows_of[c].push(row);
        }
    }
    let cut = thresholds(&p.values);
    let mut draws = vec![0u64; m.cols];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let u = rng.next_u64() as u128;
        let idx = cut.partition_point(|&t| t <= u);
        draws[idx.min(m.cols - 1)] += 1;
    }
    let mut counts = vec![0u64; m.rows];
    for (col, &d) in draws.iter().enumerate() {
        for &row in &rows_of[col] {
            counts[row] += d;
        }
    }
    let frequencies = counts
        .iter()
        .map(|&c| Rat::new(BigInt::from(c), BigInt::from(rounds)))
        .collect();
    Ok(GameTally {
        rounds,
        seed,
        counts,
        frequencies,
    })
}
