//! Numerical checks of the algebraic facts the consistency-check election
//! relies on: the breakers are unitary, they leave no amplitude on any
//! consistent global string, and the oracle is its own inverse.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::circuits::{
    build_even_symmetry_breaker, build_odd_symmetry_breaker, consistency_oracle, prepare_ghz_state,
    prepare_uniform_register, ConsistencyOracle, PhaseParams,
};
use crate::qsim::{StateVector, UnitaryMatrix, MAX_QUBITS, TOLERANCE};
use crate::{Error, Result};

/// Amplitudes on `|0^k>` and `|1^k>` after `u` is applied to every qubit of
/// `(|0^k> + |1^k>)/√2`.
pub fn even_consistent_amplitudes(u: &UnitaryMatrix, k: usize) -> Result<[Complex64; 2]> {
    let mut state = prepare_ghz_state(k)?;
    for q in 0..k {
        state = state.apply_unitary(u, &[q])?;
    }
    Ok([state.amplitude(0)?, state.amplitude((1 << k) - 1)?])
}

/// The state every candidate holds after the consistent branch of an odd
/// round: `R` in `(|0^k> + |1^k>)/√2`, `T` copied from `R` by a CNOT, then
/// `v` applied to each `(R_i, T_i)` pair. Qubits are laid out `R_1..R_k
/// T_1..T_k`.
pub fn odd_branch_state(v: &UnitaryMatrix, k: usize) -> Result<StateVector> {
    if 2 * k > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: 2 * k,
            max: MAX_QUBITS,
        });
    }
    let mut state = prepare_ghz_state(k)?.tensor(&StateVector::zero(k)?)?;
    let cnot = UnitaryMatrix::cnot();
    for i in 0..k {
        state = state.apply_unitary(&cnot, &[i, k + i])?;
    }
    for i in 0..k {
        state = state.apply_unitary(v, &[i, k + i])?;
    }
    Ok(state)
}

/// Basis index of the string where every pair `(R_i, T_i)` equals `pair`
/// (`R` high bit), under the `R_1..R_k T_1..T_k` layout.
pub fn repeated_pair_index(pair: u8, k: usize) -> usize {
    let ones = (1usize << k) - 1;
    let r = if pair & 0b10 != 0 { ones } else { 0 };
    let t = if pair & 0b01 != 0 { ones } else { 0 };
    (r << k) | t
}

/// Amplitudes on `|00>^k, |01>^k, |10>^k, |11>^k` in [`odd_branch_state`].
pub fn odd_consistent_amplitudes(v: &UnitaryMatrix, k: usize) -> Result<[Complex64; 4]> {
    let state = odd_branch_state(v, k)?;
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (pair, slot) in out.iter_mut().enumerate() {
        *slot = state.amplitude(repeated_pair_index(pair as u8, k))?;
    }
    Ok(out)
}

/// Probability that the `S` register reads all ones after the oracle acts
/// on `k` uniform candidate bits.
pub fn consistency_probability(k: usize) -> Result<f64> {
    let state = prepare_uniform_register(k)?
        .tensor(&StateVector::zero(k)?)?
        .apply_permutation(&consistency_oracle(k)?)?;
    let s_qubits: Vec<usize> = (k..2 * k).collect();
    Ok(state.marginal(&s_qubits)?[(1 << k) - 1])
}

/// Fidelity between `U⊗U (|00>+|11>)/√2` (two-party `U`) and
/// `−i(|01>+|10>)/√2`.
pub fn two_party_fidelity(u: &UnitaryMatrix) -> Result<f64> {
    let mut state = prepare_ghz_state(2)?;
    for q in 0..2 {
        state = state.apply_unitary(u, &[q])?;
    }
    let h = Complex64::new(0.0, -FRAC_1_SQRT_2);
    let zero = Complex64::new(0.0, 0.0);
    let expected = StateVector::from_amplitudes(vec![zero, h, h, zero])?;
    state.fidelity(&expected)
}

/// Checks the oracle squares to the identity without materializing it.
pub fn oracle_is_involution(k: usize) -> Result<bool> {
    let oracle = ConsistencyOracle::new(k)?;
    Ok((0..1usize << oracle.num_qubits()).all(|i| oracle.image(oracle.image(i)) == i))
}

/// `U` with the sign of its lower-left entry flipped. Negative control.
pub fn corrupted_even_breaker(k: usize) -> Result<UnitaryMatrix> {
    let u = build_even_symmetry_breaker(&PhaseParams::new(k)?)?;
    let mut entries = u.entries().to_vec();
    entries[2] = -entries[2];
    UnitaryMatrix::from_entries_unchecked(2, entries)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    /// Measured deviation from the ideal value.
    pub deviation: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    fn new(name: String, deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            deviation,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub even_ks: Vec<usize>,
    pub odd_ks: Vec<usize>,
    pub corrupt_even: bool,
}

/// Largest `k` whose identities fit in the register (the oracle spans `2k`
/// qubits).
pub const SUITE_MAX_K: usize = MAX_QUBITS / 2;
/// Largest `k` for which the consistency probability is checked; matches
/// the full-protocol limit.
const CONSISTENCY_PROBABILITY_MAX_K: usize = 8;

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            even_ks: vec![2, 4, 6, 8, 10, 12],
            odd_ks: vec![3, 5, 7, 9],
            corrupt_even: false,
        }
    }
}

impl SuiteConfig {
    /// Every `k` in `min..=max`, split by parity.
    pub fn from_range(min: usize, max: usize) -> Result<Self> {
        if min < 2 || min > max {
            return Err(Error::InvalidArgument(format!("bad k range {min}..={max}")));
        }
        if max > SUITE_MAX_K {
            return Err(Error::Capacity {
                requested: 2 * max,
                max: MAX_QUBITS,
            });
        }
        Ok(Self {
            even_ks: (min..=max).filter(|k| k % 2 == 0).collect(),
            odd_ks: (min..=max).filter(|k| k % 2 == 1).collect(),
            corrupt_even: false,
        })
    }
}

fn max_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm()).fold(0.0, f64::max)
}

/// Runs every identity for the configured `k` values.
pub fn run_identity_suite(config: &SuiteConfig) -> Result<Vec<IdentityCheck>> {
    let mut checks = Vec::new();

    for &k in &config.even_ks {
        let u = if config.corrupt_even {
            corrupted_even_breaker(k)?
        } else {
            build_even_symmetry_breaker(&PhaseParams::new(k)?)?
        };
        checks.push(IdentityCheck::new(
            format!("unitarity of U (k={k})"),
            u.unitarity_deviation(),
            TOLERANCE,
        ));
        checks.push(IdentityCheck::new(
            format!("U zeroes |0^k> and |1^k> (k={k})"),
            max_norm(&even_consistent_amplitudes(&u, k)?),
            TOLERANCE,
        ));
        if k == 2 {
            checks.push(IdentityCheck::new(
                "two-party U⊗U gives -i(|01>+|10>)/√2".into(),
                1.0 - two_party_fidelity(&u)?,
                TOLERANCE,
            ));
        }
    }

    for &k in &config.odd_ks {
        let v = build_odd_symmetry_breaker(&PhaseParams::new(k)?)?;
        checks.push(IdentityCheck::new(
            format!("unitarity of V (k={k})"),
            v.unitarity_deviation(),
            TOLERANCE,
        ));
        checks.push(IdentityCheck::new(
            format!("V zeroes all four repeated pairs (k={k})"),
            max_norm(&odd_consistent_amplitudes(&v, k)?),
            TOLERANCE,
        ));
    }

    let mut all: Vec<usize> = config
        .even_ks
        .iter()
        .chain(&config.odd_ks)
        .copied()
        .collect();
    all.sort_unstable();
    for k in all {
        checks.push(IdentityCheck::new(
            format!("consistency oracle is an involution (k={k})"),
            if oracle_is_involution(k)? { 0.0 } else { 1.0 },
            0.0,
        ));
        if k <= CONSISTENCY_PROBABILITY_MAX_K {
            let expected = 2f64.powi(1 - k as i32);
            checks.push(IdentityCheck::new(
                format!("P(S = 1^k) = 2^(1-k) (k={k})"),
                (consistency_probability(k)? - expected).abs(),
                TOLERANCE,
            ));
        }
    }

    Ok(checks)
}
