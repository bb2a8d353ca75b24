//! Classical randomized election: every candidate flips a fair coin, heads
//! stay eligible. A round where nobody flips heads changes nothing, so the
//! number of rounds is unbounded.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::election::{rng_from_seed, Algorithm, Branch, ElectionTranscript, Outcome, RoundRecord};
use crate::{Error, Result};

pub const DEFAULT_MAX_ROUNDS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coin {
    Heads,
    Tails,
}

impl Coin {
    fn bit(self) -> u8 {
        match self {
            Coin::Heads => 1,
            Coin::Tails => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalRound {
    pub k_before: usize,
    /// Flips sorted tails-first; the order carries no identity.
    pub flips: Vec<Coin>,
    pub k_after: usize,
}

impl ClassicalRound {
    pub fn heads(&self) -> usize {
        self.flips.iter().filter(|&&c| c == Coin::Heads).count()
    }

    pub fn into_record(self, round_index: usize) -> RoundRecord {
        RoundRecord {
            round_index,
            k_before: self.k_before,
            branch: Branch::Classical,
            s_bit: None,
            values: self.flips.iter().map(|c| c.bit()).collect(),
            k_after: self.k_after,
        }
    }
}

/// Flips one coin per entry of `eligible` and drops the tails, unless
/// every coin came up tails.
pub fn classical_round<R: Rng + ?Sized>(eligible: &mut Vec<usize>, rng: &mut R) -> ClassicalRound {
    let k_before = eligible.len();
    let flips: Vec<Coin> = (0..k_before)
        .map(|_| {
            if rng.gen::<bool>() {
                Coin::Heads
            } else {
                Coin::Tails
            }
        })
        .collect();
    if flips.contains(&Coin::Heads) {
        let mut kept = Vec::with_capacity(k_before);
        for (&p, &c) in eligible.iter().zip(&flips) {
            if c == Coin::Heads {
                kept.push(p);
            }
        }
        *eligible = kept;
    }
    let mut sorted = flips;
    sorted.sort_by_key(|c| c.bit());
    ClassicalRound {
        k_before,
        flips: sorted,
        k_after: eligible.len(),
    }
}

/// Runs coin-flip rounds until one candidate remains or `max_rounds` have
/// been played. Running out of budget is reported as
/// [`Outcome::BudgetExhausted`] with every played round kept.
pub fn run_classical_election(
    n: usize,
    seed: u64,
    max_rounds: usize,
) -> Result<ElectionTranscript> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "election needs at least one processor".into(),
        ));
    }
    if max_rounds == 0 {
        return Err(Error::InvalidArgument(
            "round budget must be at least 1".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut eligible: Vec<usize> = (0..n).collect();
    let mut rounds = Vec::new();
    while eligible.len() > 1 && rounds.len() < max_rounds {
        let round = classical_round(&mut eligible, &mut rng);
        rounds.push(round.into_record(rounds.len() + 1));
    }
    let outcome = match eligible.as_slice() {
        [leader] => Outcome::Leader(*leader),
        _ => Outcome::BudgetExhausted,
    };
    Ok(ElectionTranscript {
        n,
        algorithm: Algorithm::Classical,
        seed,
        rounds,
        outcome,
    })
}
