//! Protocol states and unitaries: W states, uniform candidate registers, the
//! consistency oracle, and the two symmetry breakers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::qsim::{BasisPermutation, StateVector, UnitaryMatrix, MAX_QUBITS};
use crate::{Error, Result};

/// Phase parameters for `k` current candidates: `e^{iπ/k} = re + i·im`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseParams {
    k: usize,
    re: f64,
    im: f64,
}

impl PhaseParams {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "phase parameters need at least 2 candidates, got {k}"
            )));
        }
        let theta = PI / k as f64;
        Ok(Self {
            k,
            re: theta.cos(),
            im: theta.sin(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `cos(π/k)`
    pub fn re(&self) -> f64 {
        self.re
    }

    /// `sin(π/k)`
    pub fn im(&self) -> f64 {
        self.im
    }

    /// `e^{iπ/k}`
    pub fn phase(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn check_register(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// `W_n`: amplitude `1/√n` on every basis string of Hamming weight one.
pub fn prepare_w_state(n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("W state needs n ≥ 1".into()));
    }
    check_register(n)?;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
    for j in 0..n {
        amplitudes[1 << j] = amp;
    }
    StateVector::from_amplitudes(amplitudes)
}

/// `k` qubits each in `(|0>+|1>)/√2`.
pub fn prepare_uniform_register(k: usize) -> Result<StateVector> {
    if k == 0 {
        return Err(Error::InvalidArgument("register needs k ≥ 1".into()));
    }
    check_register(k)?;
    let dim = 1usize << k;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    StateVector::from_amplitudes(vec![amp; dim])
}

/// `(|0^n> + |1^n>)/√2`.
pub fn prepare_ghz_state(n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("GHZ state needs n ≥ 1".into()));
    }
    check_register(n)?;
    let dim = 1usize << n;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[dim - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_amplitudes(amplitudes)
}

/// True iff every bit of the `k`-bit string `x` is equal.
pub fn is_consistent(x: usize, k: usize) -> bool {
    let all = (1usize << k) - 1;
    x & all == 0 || x & all == all
}

/// Consistency check over `2k` qubits laid out as `|R_1..R_k S_1..S_k>`.
///
/// Maps `|x>|s>` to `|x>|s ⊕ 1^k>` when `x` is consistent and leaves it
/// alone otherwise, so each processor's `S` qubit records whether all the
/// candidate bits agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConsistencyOracle {
    k: usize,
}

impl ConsistencyOracle {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "consistency oracle needs k ≥ 2, got {k}"
            )));
        }
        check_register(2 * k)?;
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.k
    }

    pub fn image(&self, index: usize) -> usize {
        let k = self.k;
        let x = index >> k;
        if is_consistent(x, k) {
            index ^ ((1 << k) - 1)
        } else {
            index
        }
    }

    pub fn permutation(&self) -> Result<BasisPermutation> {
        BasisPermutation::from_fn(self.num_qubits(), |i| self.image(i))
    }
}

pub fn consistency_oracle(k: usize) -> Result<BasisPermutation> {
    ConsistencyOracle::new(k)?.permutation()
}

/// `U = (1/√2)[[1, e^{−iπ/k}], [−e^{iπ/k}, 1]]` for even `k`.
///
/// Applied to every qubit of `(|0^k> + |1^k>)/√2` it leaves no amplitude on
/// either consistent string.
pub fn build_even_symmetry_breaker(params: &PhaseParams) -> Result<UnitaryMatrix> {
    if !params.k.is_multiple_of(2) {
        return Err(Error::WrongParity {
            builder: "even",
            k: params.k,
        });
    }
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let e = params.phase();
    UnitaryMatrix::from_rows(&[vec![s, s * e.conj()], vec![-s * e, s]])
}

/// `V_k` on the pair `|R T>` (R is the high bit), for odd `k ≥ 3`.
///
/// Columns for inputs `|00>` and `|11>` are the printed ones scaled by
/// `1/√(R_k+1)`; input `|01>` maps to `|11>`. The `|10>` column is the
/// unit vector orthogonal to the other three obtained from `e_2` by
/// Gram-Schmidt, with its largest entry made real and positive. Only `|00>`
/// and `|11>` are ever fed to `V_k` by the protocol.
pub fn build_odd_symmetry_breaker(params: &PhaseParams) -> Result<UnitaryMatrix> {
    if params.k.is_multiple_of(2) || params.k < 3 {
        return Err(Error::WrongParity {
            builder: "odd",
            k: params.k,
        });
    }
    let r = params.re;
    let e = params.phase();
    let norm = 1.0 / (r + 1.0).sqrt();
    let h = FRAC_1_SQRT_2 * norm;
    let sr = r.sqrt() * norm;
    let re = |x: f64| Complex64::new(x, 0.0);
    let zero = re(0.0);

    let col0 = vec![re(h), re(h), re(sr), zero];
    let col1 = vec![zero, zero, zero, re(1.0)];
    let col3 = vec![e * h, e.conj() * h, re(-sr), zero];
    let col2 = complete_column(&[&col0, &col1, &col3], 2);

    UnitaryMatrix::from_columns(&[col0, col1, col2, col3])
}

/// Gram-Schmidt of the unit vector `e_start` against `basis`, normalized with
/// the phase of its largest-magnitude entry removed.
fn complete_column(basis: &[&Vec<Complex64>], start: usize) -> Vec<Complex64> {
    let dim = basis[0].len();
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[start] = Complex64::new(1.0, 0.0);
    for b in basis {
        let proj: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
        for (vi, bi) in v.iter_mut().zip(b.iter()) {
            *vi -= proj * bi;
        }
    }
    let len = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let pivot = phase_pivot(&v);
    let phase = pivot.conj() / pivot.norm();
    v.into_iter().map(|x| x * phase / len).collect()
}

/// Largest-magnitude entry; among entries tied within 1e-12, the first.
fn phase_pivot(v: &[Complex64]) -> Complex64 {
    let top = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    v.iter()
        .copied()
        .find(|x| x.norm() >= top - 1e-12)
        .unwrap_or(Complex64::new(1.0, 0.0))
}

/// Symmetry breaker for `k` candidates: `U` when `k` is even, `V_k` when odd.
pub fn symmetry_breaker(k: usize) -> Result<UnitaryMatrix> {
    let params = PhaseParams::new(k)?;
    if k.is_multiple_of(2) {
        build_even_symmetry_breaker(&params)
    } else {
        build_odd_symmetry_breaker(&params)
    }
}
