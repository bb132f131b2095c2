//! Dense complex operators on the `N`-dimensional Hilbert space, density
//! matrices, and the Schwinger clock and shift operators.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::field::Dimension;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// An `N x N` complex matrix in the position basis, stored row-major.
/// Row is the bra index, column the ket index.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: Dimension,
    entries: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: Dimension) -> Self {
        let n = dim.get();
        Operator {
            dim,
            entries: vec![ZERO; n * n],
        }
    }

    pub fn identity(dim: Dimension) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: Dimension, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = dim.get();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Operator { dim, entries }
    }

    /// Builds from row-major entries; the length must be `N^2`.
    pub fn from_row_major(dim: Dimension, entries: Vec<C64>) -> Result<Self> {
        let expected = dim.get() * dim.get();
        if entries.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: entries.len(),
            });
        }
        Ok(Operator { dim, entries })
    }

    pub fn diagonal(dim: Dimension, diag: &[C64]) -> Result<Self> {
        if diag.len() != dim.get() {
            return Err(Error::ShapeMismatch {
                expected: dim.get(),
                actual: diag.len(),
            });
        }
        Ok(Self::from_fn(
            dim,
            |i, j| if i == j { diag[i] } else { ZERO },
        ))
    }

    #[inline]
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.dim.get()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[C64] {
        let n = self.n();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n()).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Operator) -> C64 {
        let n = self.n();
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    pub fn scale(&self, s: C64) -> Self {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Operator::identity(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        let n = self.n();
        let amps = (0..n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(&v.amplitudes)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        StateVector {
            dim: self.dim,
            amplitudes: amps,
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_violation(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order, treating `self` as Hermitian.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.n();
        let m = DMatrix::from_fn(n, n, |i, j| self[(i, j)]);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim.get() + j]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        let n = self.dim.get();
        &mut self.entries[i * n + j]
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let n = self.n();
        let mut out = Operator::zeros(self.dim);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Operator {
            dim: self.dim,
            entries,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Operator {
            dim: self.dim,
            entries,
        }
    }
}

/// A ket expanded in the position basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dim: Dimension,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes, requiring unit norm to within `tol`.
    pub fn new(dim: Dimension, amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        if amplitudes.len() != dim.get() {
            return Err(Error::ShapeMismatch {
                expected: dim.get(),
                actual: amplitudes.len(),
            });
        }
        let v = StateVector { dim, amplitudes };
        let violation = (v.norm_sqr() - 1.0).abs();
        if violation > tol {
            return Err(Error::NotNormalized { violation });
        }
        Ok(v)
    }

    pub(crate) fn from_amplitudes(dim: Dimension, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), dim.get());
        StateVector { dim, amplitudes }
    }

    /// Position eigenstate `|q>`.
    pub fn basis(dim: Dimension, q: usize) -> Self {
        let mut amps = vec![ZERO; dim.get()];
        amps[q % dim.get()] = ONE;
        StateVector {
            dim,
            amplitudes: amps,
        }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|self><self|`.
    pub fn projector(&self) -> Operator {
        Operator::from_fn(self.dim, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        })
    }

    /// `<self|A|self>`.
    pub fn expectation(&self, a: &Operator) -> C64 {
        self.inner(&a.apply(self))
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
    tol: f64,
}

impl DensityMatrix {
    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> Dimension {
        self.op.dim
    }

    pub fn validation_tol(&self) -> f64 {
        self.tol
    }

    /// Maximally mixed state `I / N`.
    pub fn maximally_mixed(dim: Dimension) -> Self {
        let op = Operator::identity(dim).scale(C64::new(1.0 / dim.get() as f64, 0.0));
        DensityMatrix {
            op,
            tol: crate::DEFAULT_TOL,
        }
    }

    /// `|psi><psi|`.
    pub fn pure(psi: &StateVector) -> Self {
        DensityMatrix {
            op: psi.projector(),
            tol: crate::DEFAULT_TOL,
        }
    }

    /// Position-diagonal element `<q|rho|q>` as a real number.
    pub fn population(&self, q: usize) -> f64 {
        let n = self.op.n();
        self.op[(q % n, q % n)].re
    }
}

/// Checks the three density-matrix invariants at absolute tolerance `tol`,
/// reporting the first one that fails together with its magnitude.
pub fn validate_density(m: Operator, tol: f64) -> Result<DensityMatrix> {
    let violation = m.hermiticity_violation();
    if violation > tol {
        return Err(Error::NotHermitian { violation });
    }
    let violation = (m.trace() - ONE).norm();
    if violation > tol {
        return Err(Error::TraceNotOne { violation });
    }
    let min_eigenvalue = m.hermitian_eigenvalues()[0];
    if min_eigenvalue < -tol {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(DensityMatrix { op: m, tol })
}

fn ginibre(n: Dimension, rng: &mut ChaCha8Rng) -> Operator {
    Operator::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Seeded Ginibre state `G G^dagger / Tr(G G^dagger)`; identical seeds give
/// bit-identical matrices.
pub fn random_density(n: Dimension, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, &mut rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    let mut op = gg.scale(C64::new(1.0 / tr, 0.0));
    // exact Hermitian symmetry and real diagonal
    let dim = n.get();
    for i in 0..dim {
        op[(i, i)].im = 0.0;
        for j in i + 1..dim {
            op[(j, i)] = op[(i, j)].conj();
        }
    }
    DensityMatrix {
        op,
        tol: crate::DEFAULT_TOL,
    }
}

/// Seeded Haar-like random pure state (normalized complex Gaussian vector).
pub fn random_pure_state(n: Dimension, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps: Vec<C64> = (0..n.get())
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector {
        dim: n,
        amplitudes: amps,
    }
}

/// Seeded random Hermitian matrix `(G + G^dagger) / 2` (not normalized).
pub fn random_hermitian(n: Dimension, seed: u64) -> Operator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(n, &mut rng);
    Operator::from_fn(n, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5)
}

/// Clock operator `Z|q> = omega^q |q>`.
pub fn schwinger_z(n: Dimension) -> Operator {
    Operator::from_fn(n, |i, j| if i == j { n.omega_pow(i as i64) } else { ZERO })
}

/// Shift operator `X|q> = |q+1>`.
pub fn schwinger_x(n: Dimension) -> Operator {
    Operator::from_fn(n, |i, j| if i == (j + 1) % n.get() { ONE } else { ZERO })
}

/// `X^k Z^l` scaled by `omega^phase`, built entry by entry.
pub fn weyl_operator(k: usize, l: usize, phase: i64, n: Dimension) -> Operator {
    let dim = n.get();
    Operator::from_fn(n, |i, j| {
        if i == (j + k) % dim {
            n.omega_pow(phase + (l * j) as i64)
        } else {
            ZERO
        }
    })
}

/// `(X Z^b)^k` by repeated multiplication.
pub fn xz_power(b: usize, k: usize, n: Dimension) -> Operator {
    let xz = &schwinger_x(n) * &schwinger_z(n).pow(b % n.get());
    xz.pow(k)
}

/// `(X Z^b)^k` through `omega^{b k(k-1)/2} X^k Z^{kb}`.
pub fn xz_power_closed(b: usize, k: usize, n: Dimension) -> Operator {
    let phase = (b * (k * k.saturating_sub(1) / 2)) as i64;
    weyl_operator(k % n.get(), k * b, phase, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u64) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn z_for_three() {
        let d = dim(3);
        let z = schwinger_z(d);
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let expected = Operator::diagonal(d, &[ONE, w, w * w]).unwrap();
        assert!(z.max_abs_diff(&expected) < 1e-15);
        assert!(z.pow(3).max_abs_diff(&Operator::identity(d)) < 1e-12);
    }

    #[test]
    fn x_wraps_around() {
        let d = dim(3);
        let x = schwinger_x(d);
        let out = x.apply(&StateVector::basis(d, 2));
        assert!(out.max_abs_diff(&StateVector::basis(d, 0)) < 1e-15);
        assert!(
            schwinger_x(dim(5))
                .pow(5)
                .max_abs_diff(&Operator::identity(dim(5)))
                < 1e-12
        );
    }

    #[test]
    fn unitary_and_periodic() {
        for n in [3u64, 5, 7, 11, 13] {
            let d = dim(n);
            let id = Operator::identity(d);
            for u in [schwinger_z(d), schwinger_x(d)] {
                assert!((&u * &u.adjoint()).max_abs_diff(&id) < 1e-12);
                assert!(u.pow(d.get()).max_abs_diff(&id) < 1e-12);
            }
        }
    }

    #[test]
    fn clock_shift_commutation() {
        for n in [3u64, 5, 7, 11] {
            let d = dim(n);
            let (z, x) = (schwinger_z(d), schwinger_x(d));
            let lhs = &z * &x;
            let rhs = (&x * &z).scale(d.omega_pow(1));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn xz_power_examples() {
        let d = dim(3);
        let expected = (&schwinger_x(d).pow(2) * &schwinger_z(d).pow(2)).scale(d.omega_pow(1));
        assert!(xz_power(1, 2, d).max_abs_diff(&expected) < 1e-12);
        assert!(xz_power(2, 0, d).max_abs_diff(&Operator::identity(d)) < 1e-15);
        let d5 = dim(5);
        assert!(xz_power(2, 5, d5).max_abs_diff(&Operator::identity(d5)) < 1e-12);
    }

    #[test]
    fn schwinger_identities_exhaustive() {
        for n in [3u64, 5] {
            let d = dim(n);
            let nn = d.get();
            let (z, x) = (schwinger_z(d), schwinger_x(d));
            for b in 0..nn {
                for k in 1..nn {
                    let direct = xz_power(b, k, d);
                    // omega^{k(k-1)b/2} X^k Z^{kb}
                    let phase = (k * (k - 1) / 2 * b) as i64;
                    let a = (&x.pow(k) * &z.pow(k * b)).scale(d.omega_pow(phase));
                    assert!(direct.max_abs_diff(&a) < 1e-12);
                    // omega^{-k(k+1)b/2} Z^{kb} X^k
                    let phase = -((k * (k + 1) / 2 * b) as i64);
                    let c = (&z.pow(k * b) * &x.pow(k)).scale(d.omega_pow(phase));
                    assert!(direct.max_abs_diff(&c) < 1e-12);
                    assert!(direct.max_abs_diff(&xz_power_closed(b, k, d)) < 1e-12);
                }
                assert!(xz_power(b, nn, d).max_abs_diff(&Operator::identity(d)) < 1e-12);
            }
            for k in 1..nn {
                for l in 0..nn {
                    let lhs = &x.pow(k) * &z.pow(l);
                    let rhs = (&z.pow(l) * &x.pow(k)).scale(d.omega_pow(-((k * l) as i64)));
                    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn weyl_basis_is_trace_orthogonal() {
        for n in [3u64, 5] {
            let d = dim(n);
            let nn = d.get();
            let mut basis = Vec::new();
            for b in 0..nn {
                for k in 1..nn {
                    basis.push(xz_power(b, k, d));
                }
            }
            for l in 0..nn {
                basis.push(schwinger_z(d).pow(l));
            }
            assert_eq!(basis.len(), nn * nn);
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let ip = a.adjoint().trace_product(b);
                    let expected = if i == j { nn as f64 } else { 0.0 };
                    assert!((ip - C64::new(expected, 0.0)).norm() < 1e-10, "{i} {j}");
                }
            }
        }
    }

    #[test]
    fn density_validation() {
        let d = dim(3);
        assert!(validate_density(DensityMatrix::maximally_mixed(d).into_operator(), 1e-10).is_ok());

        let bad = Operator::diagonal(d, &[C64::new(2.0, 0.0), C64::new(-1.0, 0.0), ZERO]).unwrap();
        match validate_density(bad, 1e-10) {
            Err(Error::NotPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 1.0).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }

        match validate_density(schwinger_x(d), 1e-10) {
            Err(Error::NotHermitian { violation }) => assert!((violation - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }

        let two = Operator::identity(d).scale(C64::new(2.0 / 3.0, 0.0));
        assert!(matches!(
            validate_density(two, 1e-10),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn random_density_is_deterministic_and_valid() {
        let d = dim(3);
        let a = random_density(d, 42);
        let b = random_density(d, 42);
        assert_eq!(a, b);
        assert_ne!(a, random_density(d, 43));
        for n in [3u64, 5, 7, 11] {
            for seed in 0..10 {
                let rho = random_density(dim(n), seed);
                let ok = validate_density(rho.operator().clone(), 1e-10).unwrap();
                assert!(ok
                    .operator()
                    .hermitian_eigenvalues()
                    .iter()
                    .all(|&e| e >= -1e-14));
            }
        }
    }

    #[test]
    fn eigenvalue_oracle_for_ginibre_states() {
        // power iteration on (c I - rho) gives the smallest eigenvalue independently
        let d = dim(5);
        let rho = random_density(d, 9);
        let ev = rho.operator().hermitian_eigenvalues();
        let shift = Operator::identity(d).scale(C64::new(2.0, 0.0));
        let m = &shift - rho.operator();
        let mut v = StateVector::from_amplitudes(d, vec![C64::new(1.0, 0.3); 5]);
        for _ in 0..2000 {
            let w = m.apply(&v);
            let norm = w.norm_sqr().sqrt();
            v = StateVector::from_amplitudes(d, w.amplitudes().iter().map(|a| a / norm).collect());
        }
        let largest = v.expectation(&m).re;
        assert!((2.0 - largest - ev[0]).abs() < 1e-8);
        assert!(ev[0] > 0.0);
    }

    #[test]
    fn state_vector_norm_check() {
        let d = dim(3);
        assert!(StateVector::new(d, vec![ONE, ZERO, ZERO], 1e-12).is_ok());
        assert!(matches!(
            StateVector::new(d, vec![ONE, ONE, ZERO], 1e-12),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::new(d, vec![ONE], 1e-12),
            Err(Error::ShapeMismatch {
                expected: 3,
                actual: 1
            })
        ));
    }
}
