//! Randomized check that the minimum distance of a code equals the length
//! of the shortest zero-sum subsequence of its parity-check columns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use davenport_core::gf2::{
    min_distance_with, min_zero_sum_length, random_parity_matrix, DistanceStrategy, GF2Matrix, WorkLimits,
    MAX_CODE_LENGTH, MAX_RANK,
};
use davenport_core::{Error, Length, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub trial: usize,
    pub matrix: String,
    pub min_distance: Length,
    pub min_zero_sum: Length,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcmReport {
    pub trials: usize,
    pub mismatches: usize,
    /// Trials whose code has no non-zero codeword.
    pub infinite_distance: usize,
    pub details: Vec<Mismatch>,
}

/// Draws `(r, n, matrix seed)` for every trial up front so the outcome does
/// not depend on the thread count.
fn draws(trials: usize, seed: u64, max_rank: usize, max_len: usize) -> Vec<(usize, usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let r = rng.random_range(1..=max_rank);
            let n = rng.random_range(r..=max_len.max(r));
            (r, n, rng.random())
        })
        .collect()
}

fn check(trial: usize, h: &GF2Matrix, limits: &WorkLimits) -> Result<Option<Mismatch>> {
    let d = min_distance_with(h, DistanceStrategy::NullSpace, limits)?;
    let cols: Vec<_> = h.columns().collect();
    let z = min_zero_sum_length(&cols, limits)?;
    Ok((d != z).then(|| Mismatch { trial, matrix: h.to_string(), min_distance: d, min_zero_sum: z }))
}

pub fn run_trials(trials: usize, seed: u64, max_rank: usize, max_len: usize) -> Result<PcmReport> {
    if max_rank == 0 || max_rank > MAX_RANK {
        return Err(Error::InvalidArgument(format!("max rank must be in 1..={MAX_RANK}, got {max_rank}")));
    }
    if max_len == 0 || max_len > MAX_CODE_LENGTH {
        return Err(Error::InvalidArgument(format!("max length must be in 1..={MAX_CODE_LENGTH}, got {max_len}")));
    }
    let limits = WorkLimits::default();
    let outcomes = draws(trials, seed, max_rank, max_len)
        .into_par_iter()
        .enumerate()
        .map(|(trial, (r, n, matrix_seed))| {
            let h = random_parity_matrix(r, n, matrix_seed)?;
            let infinite = h.rank() == h.cols();
            check(trial, &h, &limits).map(|m| (m, infinite))
        })
        .collect::<Result<Vec<_>>>()?;

    let infinite_distance = outcomes.iter().filter(|(_, inf)| *inf).count();
    let details: Vec<Mismatch> = outcomes.into_iter().filter_map(|(m, _)| m).collect();
    Ok(PcmReport { trials, mismatches: details.len(), infinite_distance, details })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_agrees() {
        let report = run_trials(40, 7, 5, 10).unwrap();
        assert_eq!(report.trials, 40);
        assert_eq!(report.mismatches, 0, "{:?}", report.details);
    }

    #[test]
    fn draws_are_seeded() {
        assert_eq!(draws(30, 3, 6, 12), draws(30, 3, 6, 12));
        assert_ne!(draws(30, 3, 6, 12), draws(30, 4, 6, 12));
        assert!(draws(100, 1, 6, 12).iter().all(|&(r, n, _)| (1..=6).contains(&r) && (r..=12).contains(&n)));
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(run_trials(1, 0, 0, 5).is_err());
        assert!(run_trials(1, 0, 3, 65).is_err());
    }
}
