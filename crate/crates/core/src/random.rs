//! Seeded generators for states, operators, frames and distributions.
//!
//! Everything is driven by `ChaCha8Rng`, whose output stream is stable across
//! releases, so reports are reproducible from a single `u64` seed.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{eigh, CMat, CVec, C64};
use crate::math;
use crate::rational::Rational;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample (Box–Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng)) * (1.0 / math::sqrt(2.0))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with phase fix.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| complex_gaussian(rng));
    let mut q = CMat::zeros(d, d);
    for j in 0..d {
        let mut v: CVec = g.column(j).into_owned();
        for k in 0..j {
            let qk = q.column(k).into_owned();
            let c = qk.dotc(&v);
            v -= qk * c;
        }
        let n = v.norm();
        q.set_column(j, &(v / C64::new(n, 0.0)));
    }
    q
}

/// Random Hermitian traceless matrix with Frobenius norm 1.
pub fn traceless_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| complex_gaussian(rng));
    let mut h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let t = h.trace() / C64::new(d as f64, 0.0);
    for i in 0..d {
        h[(i, i)] -= t;
    }
    let n = h.norm();
    if n > 0.0 {
        h /= C64::new(n, 0.0);
    }
    h
}

/// Random full-rank density matrix `G G† / tr`.
pub fn density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let t = m.trace();
    let mut m = m / t;
    // exact Hermitian symmetry
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    m
}

/// Density matrix commuting with the projection `p`: `(PAP + P⊥BP⊥)/tr`.
pub fn density_commuting_with<R: Rng + ?Sized>(p: &CMat, rng: &mut R) -> CMat {
    let d = p.nrows();
    let a = density_matrix(d, rng);
    let b = density_matrix(d, rng);
    let pc = CMat::identity(d, d) - p;
    let m = p * a * p + &pc * b * &pc;
    let t = m.trace();
    let m = m / t;
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Positive rational weights `n_i / den` with `Σ = 1`, each numerator ≥ 1.
pub fn rational_weights<R: Rng + ?Sized>(d: usize, den: u64, rng: &mut R) -> Vec<Rational> {
    assert!(den >= d as u64, "denominator too small for positive weights");
    let mut counts = alloc::vec![1u64; d];
    for _ in 0..(den - d as u64) {
        counts[rng.random_range(0..d)] += 1;
    }
    counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), BigInt::from(den)))
        .collect()
}

/// Random probability vector of length `m` (entries may be zero when `allow_zero`).
pub fn probability_vector<R: Rng + ?Sized>(m: usize, allow_zero: bool, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m)
        .map(|_| {
            let u: f64 = rng.random();
            if allow_zero && u < 0.1 {
                0.0
            } else {
                -math::ln(1.0 - rng.random::<f64>())
            }
        })
        .collect();
    let s: f64 = v.iter().sum();
    if s == 0.0 {
        v[0] = 1.0;
        return v;
    }
    v.iter_mut().for_each(|x| *x /= s);
    v
}

pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random unitary commuting with the Hermitian `h` up to degenerate eigenspaces:
/// a diagonal phase in the eigenbasis of `h`.
pub fn eigenbasis_of(h: &CMat) -> CMat {
    eigh(h).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(3);
        let u = unitary(6, &mut rng);
        assert!((u.adjoint() * &u - CMat::identity(6, 6)).norm() < 1e-12);
    }

    #[test]
    fn weights_sum_to_one() {
        let mut rng = seeded(1);
        let w = rational_weights(5, 64, &mut rng);
        assert_eq!(crate::rational::sum(&w), crate::rational::int(1));
    }

    #[test]
    fn seeded_is_deterministic() {
        let a = unitary(3, &mut seeded(9));
        let b = unitary(3, &mut seeded(9));
        assert_eq!(a, b);
    }
}
