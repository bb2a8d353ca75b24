//! Round-based leader election over the simulated network.
//!
//! Every processor runs the same local rule: it sees only its own status,
//! the bits it measured on its own qubits, and the anonymous broadcast
//! multiset. Processor indices exist for bookkeeping (register seating,
//! the reported leader) but never enter a protocol decision.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{
    build_even_symmetry_breaker, build_odd_symmetry_breaker, consistency_oracle,
    prepare_uniform_register, prepare_w_state, PhaseParams,
};
use crate::network::{
    assign_registers, Multiset, Network, NetworkConfig, ProcessorRegisters, Role,
};
use crate::qsim::{StateVector, UnitaryMatrix};
use crate::{Error, Result};

/// Largest W-state election the simulator runs.
pub const W_STATE_MAX_N: usize = 20;
/// Largest consistency-check election (three qubits per candidate).
pub const TANI_MAX_N: usize = 8;
/// Largest tournament bracket.
pub const TOURNAMENT_MAX_N: usize = 64;

/// Deterministic RNG used by every protocol.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Eligible,
    Ineligible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProcessorState {
    pub status: Status,
    pub r_qubit: Option<usize>,
    pub s_qubit: Option<usize>,
    pub t_qubit: Option<usize>,
    pub last_measured: Option<u8>,
}

impl Default for ProcessorState {
    fn default() -> Self {
        Self {
            status: Status::Eligible,
            r_qubit: None,
            s_qubit: None,
            t_qubit: None,
            last_measured: None,
        }
    }
}

impl ProcessorState {
    pub fn is_eligible(&self) -> bool {
        self.status == Status::Eligible
    }

    fn seat(&mut self, regs: ProcessorRegisters) {
        self.r_qubit = regs.r;
        self.s_qubit = regs.s;
        self.t_qubit = regs.t;
    }

    fn unseat(&mut self) {
        self.seat(ProcessorRegisters::default());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Inconsistent,
    ConsistentEven,
    ConsistentOdd,
    Classical,
    WState,
    Tournament,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Inconsistent => "inconsistent",
            Branch::ConsistentEven => "consistent_even",
            Branch::ConsistentOdd => "consistent_odd",
            Branch::Classical => "classical",
            Branch::WState => "w_state",
            Branch::Tournament => "tournament",
        }
    }
}

/// Branch taken by a consistency-check round with `k` candidates after the
/// shared `S` value has been read.
pub fn branch_for(s_bit: u8, k: usize) -> Branch {
    match (s_bit, k % 2) {
        (0, _) => Branch::Inconsistent,
        (_, 0) => Branch::ConsistentEven,
        _ => Branch::ConsistentOdd,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round_index: usize,
    pub k_before: usize,
    pub branch: Branch,
    pub s_bit: Option<u8>,
    /// Broadcast multiset, ascending.
    pub values: Vec<u8>,
    pub k_after: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    WState,
    Tani2,
    Classical,
    Tournament,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::WState => "w-state",
            Algorithm::Tani2 => "tani2",
            Algorithm::Classical => "classical",
            Algorithm::Tournament => "tournament",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Leader(usize),
    /// The classical baseline ran out of its round budget.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElectionTranscript {
    pub n: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

impl ElectionTranscript {
    pub fn leader(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Leader(p) => Some(p),
            Outcome::BudgetExhausted => None,
        }
    }

    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }
}

/// Local update rule. Depends only on the processor's own status and
/// measurement and on the anonymous payload.
pub fn next_status(
    status: Status,
    local_value: Option<u8>,
    branch: Branch,
    payload: &Multiset,
) -> Status {
    if status == Status::Ineligible {
        return Status::Ineligible;
    }
    let keep = match (branch, local_value) {
        (_, None) => false,
        (Branch::ConsistentOdd, Some(v)) => Some(v) == payload.max(),
        (_, Some(v)) => v == 1,
    };
    if keep {
        Status::Eligible
    } else {
        Status::Ineligible
    }
}

/// Number of candidates left after a round, as every processor computes it
/// from the broadcast.
pub fn survivor_count(branch: Branch, payload: &Multiset) -> usize {
    match branch {
        Branch::ConsistentOdd => payload.max().map_or(0, |m| payload.count(m)),
        _ => payload.count(1),
    }
}

fn eligible_ids(processors: &[ProcessorState]) -> Vec<usize> {
    processors
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_eligible())
        .map(|(i, _)| i)
        .collect()
}

fn sole_leader(processors: &[ProcessorState]) -> Result<usize> {
    match eligible_ids(processors).as_slice() {
        [one] => Ok(*one),
        many => Err(Error::ProtocolViolation(format!(
            "election ended with {} eligible processors",
            many.len()
        ))),
    }
}

fn check_decrease(k_before: usize, k_after: usize) -> Result<()> {
    if k_after == 0 || k_after >= k_before {
        return Err(Error::ProtocolViolation(format!(
            "round went from {k_before} to {k_after} candidates"
        )));
    }
    Ok(())
}

/// Applies the broadcast to each seated processor and checks the count they
/// all derive agrees with the statuses that result.
fn settle_round(
    network: &mut Network,
    processors: &mut [ProcessorState],
    seating: &[usize],
    values: &[u8],
    branch: Branch,
) -> Result<(Multiset, usize)> {
    let payload = network.broadcast(values);
    for (&p, &v) in seating.iter().zip(values) {
        let proc = &mut processors[p];
        proc.last_measured = Some(v);
        proc.status = next_status(proc.status, Some(v), branch, &payload);
    }
    let k_after = survivor_count(branch, &payload);
    let remaining = seating
        .iter()
        .filter(|&&p| processors[p].is_eligible())
        .count();
    if remaining != k_after {
        return Err(Error::ProtocolViolation(format!(
            "{remaining} processors kept eligibility but the broadcast implies {k_after}"
        )));
    }
    Ok((payload, k_after))
}

/// One-shot election on `W_n`: the processor that reads 1 leads.
pub fn run_w_state_election(n: usize, seed: u64) -> Result<ElectionTranscript> {
    if n > W_STATE_MAX_N {
        return Err(Error::Capacity {
            requested: n,
            max: W_STATE_MAX_N,
        });
    }
    let mut network = Network::new(NetworkConfig::new(n, seed, 1)?);
    let mut rng = rng_from_seed(seed);
    let mut processors = vec![ProcessorState::default(); n];
    let seating: Vec<usize> = (0..n).collect();

    let layout = assign_registers(network.config(), &seating, &[Role::R])?;
    for &(p, regs) in layout.seats() {
        processors[p].seat(regs);
    }
    let state = prepare_w_state(n)?;
    let outcome = state.measure(&layout.qubits(Role::R), &mut rng)?;
    let values: Vec<u8> = layout
        .seats()
        .iter()
        .map(|(_, regs)| outcome.bit_of(regs.r.expect("seated")).expect("measured"))
        .collect();

    let (payload, k_after) = settle_round(
        &mut network,
        &mut processors,
        &seating,
        &values,
        Branch::WState,
    )?;
    if k_after != 1 {
        return Err(Error::ProtocolViolation(format!(
            "W-state measurement produced {k_after} ones"
        )));
    }
    processors.iter_mut().for_each(ProcessorState::unseat);

    Ok(ElectionTranscript {
        n,
        algorithm: Algorithm::WState,
        seed,
        rounds: vec![RoundRecord {
            round_index: 1,
            k_before: n,
            branch: Branch::WState,
            s_bit: None,
            values: payload.sorted_values(),
            k_after,
        }],
        outcome: Outcome::Leader(sole_leader(&processors)?),
    })
}

fn per_seat_bits(
    layout_seats: &[(usize, ProcessorRegisters)],
    outcome: &crate::qsim::MeasurementOutcome,
    role: Role,
) -> Vec<u8> {
    layout_seats
        .iter()
        .map(|(_, regs)| {
            let q = regs.get(role).expect("role assigned");
            outcome.bit_of(q).expect("qubit measured")
        })
        .collect()
}

fn apply_local(
    state: StateVector,
    u: &UnitaryMatrix,
    per_processor: &[Vec<usize>],
) -> Result<StateVector> {
    per_processor
        .iter()
        .try_fold(state, |s, targets| s.apply_unitary(u, targets))
}

/// One consistency-check round among the processors in `seating`, which
/// also fixes the order in which they are seated on the register.
///
/// Every candidate prepares `|R>` in uniform superposition and a fresh
/// `|S> = |0>`; the consistency oracle flags whether all `R` agree and the
/// `S` register is measured. If the `R` string is inconsistent, candidates
/// reading `R = 1` survive. Otherwise every candidate applies the symmetry
/// breaker for the current count (`U` on `R`, or `V_k` on `R,T` after
/// copying `R` into a fresh `T`) and measures; survivors read 1 (even) or
/// the largest 2-bit value present (odd).
pub fn run_tani_round_on<R: Rng + ?Sized>(
    network: &mut Network,
    processors: &mut [ProcessorState],
    seating: &[usize],
    round_index: usize,
    rng: &mut R,
) -> Result<RoundRecord> {
    let k = seating.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "a round needs at least two candidates, got {k}"
        )));
    }
    if let Some(&p) = seating.iter().find(|&&p| !processors[p].is_eligible()) {
        return Err(Error::ProtocolViolation(format!(
            "ineligible processor {p} seated in a round"
        )));
    }
    processors.iter_mut().for_each(ProcessorState::unseat);

    let layout = assign_registers(network.config(), seating, &[Role::R, Role::S])?;
    for &(p, regs) in layout.seats() {
        processors[p].seat(regs);
    }
    let state = prepare_uniform_register(k)?
        .tensor(&StateVector::zero(k)?)?
        .apply_permutation(&consistency_oracle(k)?)?;

    let s_qubits = layout.qubits(Role::S);
    let s_outcome = state.measure(&s_qubits, rng)?;
    let s_bits = per_seat_bits(layout.seats(), &s_outcome, Role::S);
    let s_bit = s_bits[0];
    if s_bits.iter().any(|&b| b != s_bit) {
        return Err(Error::ProtocolViolation(format!(
            "S register disagrees across processors: {s_bits:?}"
        )));
    }
    let branch = branch_for(s_bit, k);

    // S is now a product basis state; dropping it leaves R on qubits 0..k.
    let r_state = s_outcome.into_post_state().discard(&s_qubits)?;
    for &(p, _) in layout.seats() {
        processors[p].s_qubit = None;
    }

    let values = match branch {
        Branch::Inconsistent | Branch::ConsistentEven => {
            let r_qubits = layout.qubits(Role::R);
            let r_state = if branch == Branch::ConsistentEven {
                let u = build_even_symmetry_breaker(&PhaseParams::new(k)?)?;
                let targets: Vec<Vec<usize>> = r_qubits.iter().map(|&q| vec![q]).collect();
                apply_local(r_state, &u, &targets)?
            } else {
                r_state
            };
            let outcome = r_state.measure(&r_qubits, rng)?;
            per_seat_bits(layout.seats(), &outcome, Role::R)
        }
        Branch::ConsistentOdd => {
            let pair_layout = assign_registers(network.config(), seating, &[Role::R, Role::T])?;
            for &(p, regs) in pair_layout.seats() {
                processors[p].seat(regs);
            }
            let pairs: Vec<Vec<usize>> = pair_layout
                .seats()
                .iter()
                .map(|(_, regs)| vec![regs.r.expect("R seated"), regs.t.expect("T seated")])
                .collect();
            let v = build_odd_symmetry_breaker(&PhaseParams::new(k)?)?;
            let state = r_state.tensor(&StateVector::zero(k)?)?;
            let state = apply_local(state, &UnitaryMatrix::cnot(), &pairs)?;
            let state = apply_local(state, &v, &pairs)?;
            let targets: Vec<usize> = pairs.iter().flatten().copied().collect();
            let outcome = state.measure(&targets, rng)?;
            let r = per_seat_bits(pair_layout.seats(), &outcome, Role::R);
            let t = per_seat_bits(pair_layout.seats(), &outcome, Role::T);
            r.iter().zip(&t).map(|(r, t)| (r << 1) | t).collect()
        }
        other => unreachable!("branch_for never yields {other:?}"),
    };

    let (payload, k_after) = settle_round(network, processors, seating, &values, branch)?;
    check_decrease(k, k_after)?;

    Ok(RoundRecord {
        round_index,
        k_before: k,
        branch,
        s_bit: Some(s_bit),
        values: payload.sorted_values(),
        k_after,
    })
}

/// A single consistency-check round among `k` fresh candidates.
pub fn run_tani_round<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<RoundRecord> {
    let mut network = Network::new(NetworkConfig::new(k.max(1), 0, 3)?);
    let mut processors = vec![ProcessorState::default(); k];
    let seating: Vec<usize> = (0..k).collect();
    run_tani_round_on(&mut network, &mut processors, &seating, 1, rng)
}

/// Repeats consistency-check rounds among the remaining candidates until one
/// is left. Each round removes at least one candidate, so at most `n − 1`
/// rounds are needed.
pub fn run_tani_election(n: usize, seed: u64) -> Result<ElectionTranscript> {
    if n > TANI_MAX_N {
        return Err(Error::Capacity {
            requested: 3 * n,
            max: 3 * TANI_MAX_N,
        });
    }
    let mut network = Network::new(NetworkConfig::new(n, seed, 3)?);
    let mut rng = rng_from_seed(seed);
    let mut processors = vec![ProcessorState::default(); n];
    let rounds = run_tani_rounds(&mut network, &mut processors, &mut rng)?;
    if rounds.len() > n.saturating_sub(1) {
        return Err(Error::ProtocolViolation(format!(
            "{} rounds for {n} processors",
            rounds.len()
        )));
    }
    Ok(ElectionTranscript {
        n,
        algorithm: Algorithm::Tani2,
        seed,
        rounds,
        outcome: Outcome::Leader(sole_leader(&processors)?),
    })
}

fn run_tani_rounds<R: Rng + ?Sized>(
    network: &mut Network,
    processors: &mut [ProcessorState],
    rng: &mut R,
) -> Result<Vec<RoundRecord>> {
    let mut rounds = Vec::new();
    loop {
        let seating = eligible_ids(processors);
        if seating.len() <= 1 {
            break;
        }
        rounds.push(run_tani_round_on(
            network,
            processors,
            &seating,
            rounds.len() + 1,
            rng,
        )?);
    }
    processors.iter_mut().for_each(ProcessorState::unseat);
    Ok(rounds)
}

/// Bracket of two-party consistency-check elections. Each pairing round
/// shuffles the remaining candidates, pairs them off, and gives a leftover
/// candidate a bye. Takes `⌈log₂ n⌉` pairing
/// rounds. In each record the values are 1 for every candidate that
/// advanced (bye included) and 0 for every one eliminated.
pub fn run_tournament(n: usize, seed: u64) -> Result<ElectionTranscript> {
    if !(2..=TOURNAMENT_MAX_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "tournament needs 2..={TOURNAMENT_MAX_N} processors, got {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut alive: Vec<usize> = (0..n).collect();
    let mut rounds = Vec::new();

    while alive.len() > 1 {
        let k_before = alive.len();
        // a fixed bracket would hand the bye to the same seat every round
        alive.shuffle(&mut rng);
        let mut next = Vec::with_capacity(k_before.div_ceil(2));
        let mut values = Vec::with_capacity(k_before);
        for pair in alive.chunks(2) {
            match *pair {
                [a, b] => {
                    let winner = two_party_match(&mut rng)?;
                    next.push(if winner == 0 { a } else { b });
                    values.extend([1, 0]);
                }
                [bye] => {
                    next.push(bye);
                    values.push(1);
                }
                _ => unreachable!(),
            }
        }
        let payload = crate::network::broadcast(&values);
        rounds.push(RoundRecord {
            round_index: rounds.len() + 1,
            k_before,
            branch: Branch::Tournament,
            s_bit: None,
            values: payload.sorted_values(),
            k_after: next.len(),
        });
        alive = next;
    }

    Ok(ElectionTranscript {
        n,
        algorithm: Algorithm::Tournament,
        seed,
        rounds,
        outcome: Outcome::Leader(alive[0]),
    })
}

/// Runs a two-processor consistency-check election on a private network and
/// returns the local index (0 or 1) of the winner.
fn two_party_match<R: Rng + ?Sized>(rng: &mut R) -> Result<usize> {
    let mut network = Network::new(NetworkConfig::new(2, 0, 3)?);
    let mut processors = vec![ProcessorState::default(); 2];
    run_tani_rounds(&mut network, &mut processors, rng)?;
    sole_leader(&processors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::broadcast;

    #[test]
    fn w_state_single_processor() {
        let t = run_w_state_election(1, 5).unwrap();
        assert_eq!(t.leader(), Some(0));
        assert_eq!(t.num_rounds(), 1);
    }

    #[test]
    fn w_state_two_processors_one_each_way() {
        let mut wins = [0usize; 2];
        for seed in 0..2000 {
            let t = run_w_state_election(2, seed).unwrap();
            assert_eq!(t.rounds[0].values, vec![0, 1]);
            wins[t.leader().unwrap()] += 1;
        }
        // 4 standard errors of a fair coin over 2000 trials is ~89.
        assert!((wins[0] as i64 - 1000).abs() < 90, "{wins:?}");
    }

    #[test]
    fn w_state_capacity() {
        assert!(matches!(
            run_w_state_election(21, 0),
            Err(Error::Capacity {
                requested: 21,
                max: 20
            })
        ));
        assert!(run_w_state_election(0, 0).is_err());
    }

    #[test]
    fn tani_single_processor_needs_no_rounds() {
        let t = run_tani_election(1, 0).unwrap();
        assert_eq!(t.leader(), Some(0));
        assert!(t.rounds.is_empty());
    }

    #[test]
    fn tani_two_processors_always_one_round() {
        let mut branches = std::collections::HashSet::new();
        for seed in 0..400 {
            let t = run_tani_election(2, seed).unwrap();
            assert_eq!(t.num_rounds(), 1);
            let r = &t.rounds[0];
            assert_eq!(r.values, vec![0, 1]);
            branches.insert(r.branch);
        }
        assert!(branches.contains(&Branch::Inconsistent));
        assert!(branches.contains(&Branch::ConsistentEven));
    }

    #[test]
    fn tani_capacity() {
        assert!(matches!(
            run_tani_election(9, 0),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn round_needs_two_candidates() {
        let mut rng = rng_from_seed(0);
        assert!(run_tani_round(1, &mut rng).is_err());
    }

    #[test]
    fn odd_round_survivors_hold_the_maximum() {
        let mut rng = rng_from_seed(77);
        let mut seen_odd = false;
        for _ in 0..400 {
            let r = run_tani_round(3, &mut rng).unwrap();
            if r.branch == Branch::ConsistentOdd {
                seen_odd = true;
                let max = *r.values.iter().max().unwrap();
                assert!(max <= 2, "row |11> of V is unreachable");
                assert_eq!(r.k_after, r.values.iter().filter(|&&v| v == max).count());
                assert!(r.values.iter().any(|&v| v != max));
            }
            assert!(r.k_after >= 1 && r.k_after < 3);
            assert_eq!(r.branch == Branch::Inconsistent, r.s_bit == Some(0));
        }
        assert!(seen_odd);
    }

    #[test]
    fn local_rule_ignores_everything_but_inputs() {
        let payload = broadcast(&[2, 1, 2]);
        assert_eq!(
            next_status(Status::Eligible, Some(2), Branch::ConsistentOdd, &payload),
            Status::Eligible
        );
        assert_eq!(
            next_status(Status::Eligible, Some(1), Branch::ConsistentOdd, &payload),
            Status::Ineligible
        );
        assert_eq!(
            next_status(Status::Ineligible, Some(1), Branch::Inconsistent, &payload),
            Status::Ineligible
        );
        assert_eq!(
            next_status(Status::Eligible, Some(1), Branch::ConsistentEven, &payload),
            Status::Eligible
        );
        assert_eq!(survivor_count(Branch::ConsistentOdd, &payload), 2);
        assert_eq!(
            survivor_count(Branch::Inconsistent, &broadcast(&[0, 1, 1, 0])),
            2
        );
    }

    #[test]
    fn branch_selection() {
        assert_eq!(branch_for(0, 4), Branch::Inconsistent);
        assert_eq!(branch_for(1, 4), Branch::ConsistentEven);
        assert_eq!(branch_for(1, 5), Branch::ConsistentOdd);
    }

    #[test]
    fn tournament_bracket_sizes() {
        let t4 = run_tournament(4, 1).unwrap();
        assert_eq!(t4.num_rounds(), 2);

        let t5 = run_tournament(5, 1).unwrap();
        let ks: Vec<(usize, usize)> = t5.rounds.iter().map(|r| (r.k_before, r.k_after)).collect();
        assert_eq!(ks, vec![(5, 3), (3, 2), (2, 1)]);
        // a bye shows up as one more advancing candidate than matches played
        let byes: Vec<usize> = t5
            .rounds
            .iter()
            .map(|r| {
                r.values.iter().filter(|&&v| v == 1).count()
                    - r.values.iter().filter(|&&v| v == 0).count()
            })
            .collect();
        assert_eq!(byes, vec![1, 1, 0]);

        for n in 2..=64 {
            let t = run_tournament(n, n as u64).unwrap();
            let expected = (n as f64).log2().ceil() as usize;
            assert_eq!(t.num_rounds(), expected, "n={n}");
            assert!(t.leader().unwrap() < n);
        }
        assert!(run_tournament(1, 0).is_err());
        assert!(run_tournament(65, 0).is_err());
    }

    #[test]
    fn same_seed_same_transcript() {
        for n in 1..=6 {
            assert_eq!(
                run_tani_election(n, 99).unwrap(),
                run_tani_election(n, 99).unwrap()
            );
        }
    }
}
