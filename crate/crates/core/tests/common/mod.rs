#![allow(dead_code)]

use num_complex::Complex64;
use qelect::qsim::{StateVector, UnitaryMatrix};
use rand::Rng;

pub fn random_state<R: Rng>(num_qubits: usize, rng: &mut R) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1usize << num_qubits)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps).unwrap()
}

/// Haar-ish random unitary via Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= proj * ci;
            }
        }
        let len = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if len > 1e-6 {
            cols.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    UnitaryMatrix::from_columns(&cols).unwrap()
}

pub fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Binomial check: `hits` out of `trials` against probability `p`, within
/// `z` standard errors.
pub fn within_se(hits: usize, trials: usize, p: f64, z: f64) -> bool {
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    ((hits as f64 / trials as f64) - p).abs() <= z * se.max(f64::MIN_POSITIVE)
}
