//! Dense statevector simulator.
//!
//! Qubit 0 is the most significant bit of a basis index, so the basis state
//! `|q0 q1 ... q(m-1)>` has index `q0·2^(m-1) + ... + q(m-1)`. Every operation
//! returns a new state and leaves its input untouched; randomness enters only
//! through the explicit `rng` argument of [`StateVector::measure`].

use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

/// Largest register the dense backend will allocate.
pub const MAX_QUBITS: usize = 24;

/// Default numerical tolerance for norms, unitarity and zero amplitudes.
pub const TOLERANCE: f64 = 1e-10;

fn check_capacity(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: num_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps an amplitude array, checking its length is a power of two and
    /// its squared norm is 1 within [`TOLERANCE`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(1),
                actual: dim,
            });
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_capacity(num_qubits)?;
        let state = Self {
            num_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Result<Complex64> {
        self.amplitudes
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                dim: self.dim(),
            })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|amplitude(index)|²`.
    pub fn probability(&self, index: usize) -> Result<f64> {
        self.amplitude(index).map(|a| a.norm_sqr())
    }

    fn bit_position(&self, qubit: usize) -> usize {
        self.num_qubits - 1 - qubit
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        let mut seen = 0usize;
        for &q in targets {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
            if seen & (1 << q) != 0 {
                return Err(Error::DuplicateTarget(q));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    /// Reads the bits of `index` at `targets`, first target as the most
    /// significant bit of the result.
    fn gather_bits(&self, index: usize, targets: &[usize]) -> usize {
        targets.iter().fold(0, |acc, &q| {
            (acc << 1) | ((index >> self.bit_position(q)) & 1)
        })
    }

    /// Offsets obtained by scattering every `t`-bit pattern onto the target
    /// positions (first target is the pattern's most significant bit).
    fn scatter_offsets(&self, targets: &[usize]) -> Vec<usize> {
        let t = targets.len();
        (0..1usize << t)
            .map(|pattern| {
                targets.iter().enumerate().fold(0, |acc, (j, &q)| {
                    let bit = (pattern >> (t - 1 - j)) & 1;
                    acc | (bit << self.bit_position(q))
                })
            })
            .collect()
    }

    /// `self ⊗ other`; the qubits of `self` come first.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_capacity(num_qubits)?;
        let mut amplitudes = Vec::with_capacity(1 << num_qubits);
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Applies `u` to the ordered `targets`, identity on the rest.
    /// `targets[0]` is the most significant qubit of `u`'s basis.
    pub fn apply_unitary(&self, u: &UnitaryMatrix, targets: &[usize]) -> Result<Self> {
        self.check_targets(targets)?;
        let expected = 1usize << targets.len();
        if u.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: u.dim(),
            });
        }
        let offsets = self.scatter_offsets(targets);
        let mask = offsets.last().copied().unwrap_or(0);
        let mut out = self.amplitudes.clone();
        let mut block = vec![Complex64::new(0.0, 0.0); expected];
        for base in (0..self.dim()).filter(|i| i & mask == 0) {
            for (slot, &off) in block.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base | off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                out[base | off] = block
                    .iter()
                    .enumerate()
                    .map(|(col, v)| u.get(row, col) * v)
                    .sum();
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Relabels basis states: the amplitude at `i` moves to `perm.image(i)`.
    pub fn apply_permutation(&self, perm: &BasisPermutation) -> Result<Self> {
        if perm.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: perm.images.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, &j) in perm.images.iter().enumerate() {
            out[j] = self.amplitudes[i];
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Joint outcome distribution of `targets`. Entry `o` is the probability
    /// of reading the bits of `o` (first target most significant).
    pub fn marginal(&self, targets: &[usize]) -> Result<Vec<f64>> {
        self.check_targets(targets)?;
        let mut probs = vec![0.0; 1 << targets.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[self.gather_bits(i, targets)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Measures `targets` in the computational basis with a single uniform
    /// draw against the cumulative joint distribution.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        targets: &[usize],
        rng: &mut R,
    ) -> Result<MeasurementOutcome> {
        let probs = self.marginal(targets)?;
        let total: f64 = probs.iter().sum();
        let draw = rng.gen::<f64>() * total;

        let mut outcome = None;
        let mut cumulative = 0.0;
        for (o, &p) in probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            cumulative += p;
            outcome = Some(o);
            if draw < cumulative {
                break;
            }
        }
        let outcome = outcome.ok_or(Error::NotNormalized(total))?;
        let probability = probs[outcome];

        let scale = 1.0 / probability.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if self.gather_bits(i, targets) == outcome {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();

        let t = targets.len();
        Ok(MeasurementOutcome {
            targets: targets.to_vec(),
            bits: (0..t)
                .map(|j| ((outcome >> (t - 1 - j)) & 1) as u8)
                .collect(),
            probability,
            post_state: Self {
                num_qubits: self.num_qubits,
                amplitudes,
            },
        })
    }

    /// `<Z>` on `qubit`, with `|0>` → +1 and `|1>` → −1.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_targets(&[qubit])?;
        let pos = self.bit_position(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let sign = if (i >> pos) & 1 == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|²`, which ignores global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|c| c.norm_sqr())
    }

    /// Removes `qubits` from the register. They must be in a definite basis
    /// state (for example just after being measured); the remaining qubits
    /// keep their relative order.
    pub fn discard(&self, qubits: &[usize]) -> Result<Self> {
        self.check_targets(qubits)?;
        let mut pattern = None;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let bits = self.gather_bits(i, qubits);
            match pattern {
                None => pattern = Some(bits),
                Some(p) if p != bits => return Err(Error::NotSeparable(qubits.to_vec())),
                Some(_) => {}
            }
        }
        let pattern = pattern.unwrap_or(0);

        let kept: Vec<usize> = (0..self.num_qubits)
            .filter(|q| !qubits.contains(q))
            .collect();
        let offsets = self.scatter_offsets(qubits);
        let fixed = offsets[pattern];
        let kept_offsets = self.scatter_offsets(&kept);
        let amplitudes = kept_offsets
            .iter()
            .map(|&off| self.amplitudes[off | fixed])
            .collect();
        Ok(Self {
            num_qubits: kept.len(),
            amplitudes,
        })
    }
}

#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    targets: Vec<usize>,
    bits: Vec<u8>,
    probability: f64,
    post_state: StateVector,
}

impl MeasurementOutcome {
    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Observed bits, in target order.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// The observed bits read as an integer, first target most significant.
    pub fn value(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    /// Bit observed on `qubit`, if it was measured.
    pub fn bit_of(&self, qubit: usize) -> Option<u8> {
        self.targets
            .iter()
            .position(|&q| q == qubit)
            .map(|j| self.bits[j])
    }

    /// Prior probability of this outcome.
    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn post_state(&self) -> &StateVector {
        &self.post_state
    }

    pub fn into_post_state(self) -> StateVector {
        self.post_state
    }
}

/// A bijection on the basis indices of an `m`-qubit register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisPermutation {
    num_qubits: usize,
    images: Vec<usize>,
}

impl BasisPermutation {
    pub fn new(num_qubits: usize, images: Vec<usize>) -> Result<Self> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if images.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: images.len(),
            });
        }
        let mut hit = vec![false; dim];
        for &j in &images {
            if j >= dim {
                return Err(Error::IndexOutOfRange { index: j, dim });
            }
            if std::mem::replace(&mut hit[j], true) {
                return Err(Error::NotBijective(j));
            }
        }
        Ok(Self { num_qubits, images })
    }

    pub fn from_fn(num_qubits: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        Self::new(num_qubits, (0..1usize << num_qubits).map(f).collect())
    }

    pub fn identity(num_qubits: usize) -> Result<Self> {
        Self::from_fn(num_qubits, |i| i)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn image(&self, index: usize) -> usize {
        self.images[index]
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self {
            num_qubits: self.num_qubits,
            images,
        }
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.images.len(),
                actual: other.images.len(),
            });
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            images: self.images.iter().map(|&j| other.images[j]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Dense square complex matrix, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Builds a matrix from row-major entries and rejects it unless
    /// `‖M†M − I‖_max ≤ TOLERANCE`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        let m = Self::from_entries_unchecked(dim, entries)?;
        let deviation = m.unitarity_deviation();
        if deviation > TOLERANCE {
            return Err(Error::NotUnitary(deviation));
        }
        Ok(m)
    }

    /// Shape checks only. Used for negative controls and for inspecting
    /// candidate matrices before they are validated.
    pub fn from_entries_unchecked(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(1),
                actual: dim,
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(rows.len(), rows.iter().flatten().copied().collect())
    }

    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let dim = columns.len();
        if let Some(bad) = columns.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: bad.len(),
            });
        }
        let entries = (0..dim)
            .flat_map(|r| columns.iter().map(move |c| c[r]))
            .collect();
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let entries = (0..dim * dim)
            .map(|i| {
                if i / dim == i % dim {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::new(dim, entries)
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self {
            dim: 2,
            entries: vec![o, l, l, o],
        }
    }

    /// Controlled-NOT with the first target as control.
    pub fn cnot() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self {
            dim: 4,
            entries: vec![
                l, o, o, o, //
                o, l, o, o, //
                o, o, o, l, //
                o, o, l, o,
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        let d = self.dim;
        Self {
            dim: d,
            entries: (0..d * d).map(|i| self.get(i % d, i / d).conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let d = self.dim;
        let entries = (0..d * d)
            .map(|i| {
                let (r, c) = (i / d, i % d);
                (0..d).map(|j| self.get(r, j) * other.get(j, c)).sum()
            })
            .collect();
        Ok(Self { dim: d, entries })
    }

    /// `max |(M†M − I)_{ij}|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let dot: Complex64 = (0..d).map(|j| self.get(j, r).conj() * self.get(j, c)).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0); 2]).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let s = StateVector::basis(1, 0)
            .unwrap()
            .tensor(&StateVector::basis(1, 1).unwrap())
            .unwrap();
        assert_eq!(s.num_qubits(), 2);
        assert_eq!(s.amplitude(1).unwrap(), c(1.0, 0.0));
        assert_eq!(s.probability(0).unwrap(), 0.0);
    }

    #[test]
    fn tensor_of_three_plus_states_is_uniform() {
        let s = plus().tensor(&plus()).unwrap().tensor(&plus()).unwrap();
        for a in s.amplitudes() {
            assert!((a - c(1.0 / 8f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_respects_capacity() {
        let a = StateVector::zero(12).unwrap();
        let b = StateVector::zero(13).unwrap();
        assert_eq!(
            a.tensor(&b),
            Err(Error::Capacity {
                requested: 25,
                max: 24
            })
        );
        assert!(StateVector::zero(25).is_err());
    }

    #[test]
    fn pauli_x_on_qubit_zero_is_most_significant() {
        let s = StateVector::zero(2).unwrap();
        let out = s.apply_unitary(&UnitaryMatrix::pauli_x(), &[0]).unwrap();
        assert_eq!(out.amplitude(0b10).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn apply_unitary_rejects_bad_targets() {
        let s = StateVector::zero(2).unwrap();
        let x = UnitaryMatrix::pauli_x();
        assert_eq!(
            s.apply_unitary(&x, &[2]),
            Err(Error::QubitOutOfRange {
                qubit: 2,
                num_qubits: 2
            })
        );
        assert_eq!(
            s.apply_unitary(&UnitaryMatrix::cnot(), &[1, 1]),
            Err(Error::DuplicateTarget(1))
        );
        assert_eq!(
            s.apply_unitary(&x, &[0, 1]),
            Err(Error::DimensionMismatch {
                expected: 4,
                actual: 2
            })
        );
    }

    #[test]
    fn cnot_respects_target_order() {
        // |10> with control qubit 0 → |11>; with control qubit 1 → unchanged.
        let s = StateVector::basis(2, 0b10).unwrap();
        let a = s.apply_unitary(&UnitaryMatrix::cnot(), &[0, 1]).unwrap();
        assert_eq!(a.probability(0b11).unwrap(), 1.0);
        let b = s.apply_unitary(&UnitaryMatrix::cnot(), &[1, 0]).unwrap();
        assert_eq!(b.probability(0b10).unwrap(), 1.0);
    }

    #[test]
    fn swap_permutation_relabels() {
        let amps = vec![c(0.1, 0.0), c(0.2, 0.1), c(0.3, -0.2), c(0.0, 0.0)];
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<_> = amps.into_iter().map(|a| a / norm).collect();
        let s = StateVector::from_amplitudes(amps.clone()).unwrap();
        let perm = BasisPermutation::new(2, vec![0, 2, 1, 3]).unwrap();
        let out = s.apply_permutation(&perm).unwrap();
        assert_eq!(out.amplitudes(), &[amps[0], amps[2], amps[1], amps[3]]);
        let id = BasisPermutation::identity(2).unwrap();
        assert_eq!(s.apply_permutation(&id).unwrap(), s);
    }

    #[test]
    fn non_bijective_permutation_rejected() {
        assert_eq!(
            BasisPermutation::new(2, vec![0, 1, 1, 3]),
            Err(Error::NotBijective(1))
        );
        assert!(BasisPermutation::new(2, vec![0, 1, 2]).is_err());
        assert!(BasisPermutation::new(1, vec![0, 2]).is_err());
    }

    #[test]
    fn measuring_basis_state_is_certain() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = StateVector::basis(2, 0b01).unwrap();
        let m = s.measure(&[0, 1], &mut rng).unwrap();
        assert_eq!(m.bits(), &[0, 1]);
        assert_eq!(m.probability(), 1.0);
        assert_eq!(m.post_state(), &s);
    }

    #[test]
    fn post_state_is_exactly_zero_off_outcome() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = plus().tensor(&plus()).unwrap().tensor(&plus()).unwrap();
        let m = s.measure(&[2, 0], &mut rng).unwrap();
        let post = m.post_state();
        for i in 0..8 {
            let consistent = (i & 1) as u8 == m.bits()[0] && ((i >> 2) & 1) as u8 == m.bits()[1];
            if !consistent {
                assert_eq!(post.amplitude(i).unwrap(), c(0.0, 0.0));
            }
        }
        assert!((post.norm_sqr() - 1.0).abs() < 1e-10);
        assert_eq!(m.bit_of(2), Some(m.bits()[0]));
        assert_eq!(m.bit_of(1), None);
    }

    #[test]
    fn probability_out_of_range() {
        let s = StateVector::zero(3).unwrap();
        assert_eq!(
            s.probability(8),
            Err(Error::IndexOutOfRange { index: 8, dim: 8 })
        );
    }

    #[test]
    fn expectation_z_basics() {
        assert_eq!(StateVector::zero(1).unwrap().expectation_z(0).unwrap(), 1.0);
        assert!(plus().expectation_z(0).unwrap().abs() < 1e-15);
        let s = StateVector::basis(2, 0b01).unwrap();
        assert_eq!(s.expectation_z(1).unwrap(), -1.0);
        assert!(s.expectation_z(2).is_err());
    }

    #[test]
    fn from_amplitudes_rejects_unnormalized() {
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(StateVector::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn discard_measured_qubits() {
        // |+>|1>|+> → drop the middle qubit.
        let one = StateVector::basis(1, 1).unwrap();
        let s = plus().tensor(&one).unwrap().tensor(&plus()).unwrap();
        let reduced = s.discard(&[1]).unwrap();
        let expected = plus().tensor(&plus()).unwrap();
        assert!((reduced.fidelity(&expected).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(s.discard(&[0]), Err(Error::NotSeparable(vec![0])));
    }

    #[test]
    fn unitary_validation() {
        assert!(matches!(
            UnitaryMatrix::new(2, vec![c(1.0, 0.0); 4]),
            Err(Error::NotUnitary(_))
        ));
        assert!(UnitaryMatrix::new(3, vec![c(0.0, 0.0); 9]).is_err());
        assert_eq!(UnitaryMatrix::cnot().unitarity_deviation(), 0.0);
        let x = UnitaryMatrix::pauli_x();
        assert_eq!(
            x.matmul(&x.dagger()).unwrap(),
            UnitaryMatrix::identity(2).unwrap()
        );
    }
}
