//! Simulated anonymous network.
//!
//! All entanglement lives in one shared [`StateVector`](crate::qsim::StateVector);
//! handing a qubit to a processor means recording its index in the layout.
//! The classical channel is a synchronous broadcast that delivers an
//! unordered multiset, so no value can be traced back to its sender.

use std::collections::BTreeMap;

use crate::qsim::MAX_QUBITS;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetworkConfig {
    n: usize,
    seed: u64,
    qubits_per_processor: usize,
}

impl NetworkConfig {
    pub fn new(n: usize, seed: u64, qubits_per_processor: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "network needs at least one processor".into(),
            ));
        }
        if !(1..=3).contains(&qubits_per_processor) {
            return Err(Error::InvalidArgument(format!(
                "qubits per processor must be 1..=3, got {qubits_per_processor}"
            )));
        }
        let requested = n * qubits_per_processor;
        if requested > MAX_QUBITS {
            return Err(Error::Capacity {
                requested,
                max: MAX_QUBITS,
            });
        }
        Ok(Self {
            n,
            seed,
            qubits_per_processor,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn qubits_per_processor(&self) -> usize {
        self.qubits_per_processor
    }
}

/// Register role held by a processor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// Candidate bit.
    R,
    /// Consistency flag.
    S,
    /// Auxiliary bit for the odd symmetry breaker.
    T,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProcessorRegisters {
    pub r: Option<usize>,
    pub s: Option<usize>,
    pub t: Option<usize>,
}

impl ProcessorRegisters {
    pub fn get(&self, role: Role) -> Option<usize> {
        match role {
            Role::R => self.r,
            Role::S => self.s,
            Role::T => self.t,
        }
    }

    fn set(&mut self, role: Role, qubit: usize) {
        match role {
            Role::R => self.r = Some(qubit),
            Role::S => self.s = Some(qubit),
            Role::T => self.t = Some(qubit),
        }
    }
}

/// Qubit assignment for one phase of a round. Each role occupies a
/// contiguous block; within a block, seats follow the order of the
/// eligible list handed to [`assign_registers`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    roles: Vec<Role>,
    seats: Vec<(usize, ProcessorRegisters)>,
}

impl RegisterLayout {
    pub fn num_qubits(&self) -> usize {
        self.roles.len() * self.seats.len()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// `(processor id, registers)` in seat order.
    pub fn seats(&self) -> &[(usize, ProcessorRegisters)] {
        &self.seats
    }

    pub fn registers_of(&self, processor: usize) -> Option<ProcessorRegisters> {
        self.seats
            .iter()
            .find(|(p, _)| *p == processor)
            .map(|(_, regs)| *regs)
    }

    /// All qubits of `role` in seat order.
    pub fn qubits(&self, role: Role) -> Vec<usize> {
        self.seats
            .iter()
            .filter_map(|(_, regs)| regs.get(role))
            .collect()
    }
}

/// Gives every processor in `eligible` one qubit per role.
pub fn assign_registers(
    config: &NetworkConfig,
    eligible: &[usize],
    roles: &[Role],
) -> Result<RegisterLayout> {
    let k = eligible.len();
    let mut distinct = eligible.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != k {
        return Err(Error::InvalidArgument(
            "eligible set lists a processor twice".into(),
        ));
    }
    if let Some(&p) = eligible.iter().find(|&&p| p >= config.n) {
        return Err(Error::InvalidArgument(format!(
            "processor {p} is not part of a {}-processor network",
            config.n
        )));
    }
    let requested = k * roles.len();
    if requested > MAX_QUBITS {
        return Err(Error::Capacity {
            requested,
            max: MAX_QUBITS,
        });
    }
    let seats = eligible
        .iter()
        .enumerate()
        .map(|(seat, &p)| {
            let mut regs = ProcessorRegisters::default();
            for (block, &role) in roles.iter().enumerate() {
                regs.set(role, block * k + seat);
            }
            (p, regs)
        })
        .collect();
    Ok(RegisterLayout {
        roles: roles.to_vec(),
        seats,
    })
}

/// Unordered collection of small integers with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Multiset {
    counts: BTreeMap<u8, usize>,
}

impl Multiset {
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, value: u8) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn max(&self) -> Option<u8> {
        self.counts.keys().next_back().copied()
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Values in ascending order, repeated by multiplicity.
    pub fn sorted_values(&self) -> Vec<u8> {
        self.counts
            .iter()
            .flat_map(|(&v, &c)| std::iter::repeat_n(v, c))
            .collect()
    }
}

impl FromIterator<u8> for Multiset {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut counts = BTreeMap::new();
        for v in iter {
            *counts.entry(v).or_insert(0) += 1;
        }
        Self { counts }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BroadcastRound {
    pub round_index: usize,
    pub payload: Multiset,
}

/// Strips sender identity from one value per eligible processor.
pub fn broadcast(values: &[u8]) -> Multiset {
    values.iter().copied().collect()
}

/// Round-ordered broadcast channel. Every call is a barrier: all eligible
/// processors see the same payload before the next round begins.
#[derive(Clone, Debug)]
pub struct Network {
    config: NetworkConfig,
    log: Vec<BroadcastRound>,
}

impl Network {
    pub fn new(config: NetworkConfig) -> Self {
        Self {
            config,
            log: Vec::new(),
        }
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn broadcast(&mut self, values: &[u8]) -> Multiset {
        let payload = broadcast(values);
        self.log.push(BroadcastRound {
            round_index: self.log.len() + 1,
            payload: payload.clone(),
        });
        payload
    }

    pub fn log(&self) -> &[BroadcastRound] {
        &self.log
    }
}
