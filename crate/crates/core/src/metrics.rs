//! σ-expectation consensus on pure states and batch statistics.

use serde::Serialize;

use crate::election::{Algorithm, ElectionTranscript};
use crate::qsim::StateVector;
use crate::{Error, Result};

pub const DEFAULT_CONSENSUS_TOL: f64 = 1e-9;

/// `⟨Z_i⟩` for every qubit, and whether they agree within `tol`
/// (maximum pairwise difference).
pub fn sigma_z_consensus(state: &StateVector, tol: f64) -> (bool, Vec<f64>) {
    let expectations: Vec<f64> = (0..state.num_qubits())
        .map(|q| state.expectation_z(q).expect("qubit in range"))
        .collect();
    let spread = expectation_spread(&expectations);
    (spread <= tol, expectations)
}

/// `max_i ⟨Z_i⟩ − min_i ⟨Z_i⟩`.
pub fn expectation_spread(expectations: &[f64]) -> f64 {
    let max = expectations
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = expectations.iter().copied().fold(f64::INFINITY, f64::min);
    if expectations.is_empty() {
        0.0
    } else {
        max - min
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialStats {
    pub algorithm: Algorithm,
    pub n: usize,
    pub trials: usize,
    pub mean_rounds: f64,
    pub max_rounds: usize,
    pub winner_histogram: Vec<u64>,
    pub chi_square_uniformity: f64,
    pub budget_exhausted_count: usize,
}

impl TrialStats {
    /// Trials that produced a leader.
    pub fn resolved(&self) -> usize {
        self.trials - self.budget_exhausted_count
    }

    /// Largest deviation of any bin's win frequency from `1/n`, in units of
    /// that bin's binomial standard error.
    pub fn max_uniformity_z(&self) -> f64 {
        let total = self.resolved() as f64;
        let n = self.winner_histogram.len() as f64;
        if total == 0.0 || n <= 1.0 {
            return 0.0;
        }
        let p = 1.0 / n;
        let se = (p * (1.0 - p) / total).sqrt();
        self.winner_histogram
            .iter()
            .map(|&c| ((c as f64 / total) - p).abs() / se)
            .fold(0.0, f64::max)
    }
}

/// Aggregates a batch of transcripts sharing one algorithm and one `n`.
pub fn summarize_trials(transcripts: &[ElectionTranscript]) -> Result<TrialStats> {
    let first = transcripts.first().ok_or(Error::EmptyTranscripts)?;
    let (algorithm, n) = (first.algorithm, first.n);
    if transcripts
        .iter()
        .any(|t| t.algorithm != algorithm || t.n != n)
    {
        return Err(Error::MixedTranscripts);
    }

    let mut histogram = vec![0u64; n];
    let mut exhausted = 0;
    let mut total_rounds = 0usize;
    let mut max_rounds = 0usize;
    for t in transcripts {
        let rounds = t.num_rounds();
        total_rounds += rounds;
        max_rounds = max_rounds.max(rounds);
        match t.leader() {
            Some(p) => histogram[p] += 1,
            None => exhausted += 1,
        }
    }

    let resolved = (transcripts.len() - exhausted) as f64;
    let expected = resolved / n as f64;
    let chi_square = if expected > 0.0 {
        histogram
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum()
    } else {
        0.0
    };

    Ok(TrialStats {
        algorithm,
        n,
        trials: transcripts.len(),
        mean_rounds: total_rounds as f64 / transcripts.len() as f64,
        max_rounds,
        winner_histogram: histogram,
        chi_square_uniformity: chi_square,
        budget_exhausted_count: exhausted,
    })
}
