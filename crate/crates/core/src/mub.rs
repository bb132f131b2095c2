//! The `N + 1` mutually unbiased bases of a prime-dimensional space.

use crate::error::{Error, Result};
use crate::field::{BasisIndex, Dimension};
use crate::operator::{xz_power, Operator, StateVector};
use crate::C64;

const CHECK_TOL: f64 = 1e-10;

/// State `|m; b>`. The reference basis gives the unit vector `e_m`; shifted
/// bases give the eigenvectors of `X Z^b` with eigenvalue `omega^m`,
/// with amplitudes `omega^{b n(n-1)/2 - n m} / sqrt(N)`.
pub fn mub_state(m: usize, b: BasisIndex, n: Dimension) -> StateVector {
    match b {
        BasisIndex::Reference => StateVector::basis(n, m),
        BasisIndex::Shifted(b) => {
            let norm = 1.0 / (n.get() as f64).sqrt();
            let amps = (0..n.get())
                .map(|k| {
                    // k(k-1)/2 is an integer, so no field division is needed
                    let exp = (b * (k * k.saturating_sub(1) / 2)) as i64 - (k * m) as i64;
                    n.omega_pow(exp) * norm
                })
                .collect();
            StateVector::from_amplitudes(n, amps)
        }
    }
}

/// Momentum eigenstate `|p> = sum_q exp(2 pi i p q / N) |q> / sqrt(N)`.
pub fn momentum_state(p: usize, n: Dimension) -> StateVector {
    let norm = 1.0 / (n.get() as f64).sqrt();
    let amps = (0..n.get())
        .map(|q| n.omega_pow((p * q) as i64) * norm)
        .collect();
    StateVector::from_amplitudes(n, amps)
}

/// All `N + 1` bases, each an ordered list of `N` states.
#[derive(Debug, Clone)]
pub struct MubFamily {
    dim: Dimension,
    // indexed by BasisIndex::ordinal
    bases: Vec<Vec<StateVector>>,
}

impl MubFamily {
    /// Builds every basis and checks orthonormality, unbiasedness and the
    /// eigenvalue relation before returning.
    pub fn new(dim: Dimension) -> Result<Self> {
        let bases = dim
            .bases()
            .map(|b| (0..dim.get()).map(|m| mub_state(m, b, dim)).collect())
            .collect();
        let family = MubFamily { dim, bases };
        let report = family.check();
        if let Some(msg) = report.first_failure(CHECK_TOL) {
            return Err(Error::ConstructionInvariantViolated(msg));
        }
        Ok(family)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn basis(&self, b: BasisIndex) -> &[StateVector] {
        &self.bases[b.ordinal()]
    }

    pub fn state(&self, m: usize, b: BasisIndex) -> &StateVector {
        &self.bases[b.ordinal()][m % self.dim.get()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisIndex, &[StateVector])> {
        self.dim.bases().map(move |b| (b, self.basis(b)))
    }

    /// Worst-case deviations of the three defining properties.
    pub fn check(&self) -> MubReport {
        let n = self.dim.get();
        let mut report = MubReport::default();
        let labels: Vec<BasisIndex> = self.dim.bases().collect();
        for (i, &b) in labels.iter().enumerate() {
            let states = self.basis(b);
            for (m, s) in states.iter().enumerate() {
                for (m2, s2) in states.iter().enumerate() {
                    let target = if m == m2 { 1.0 } else { 0.0 };
                    let dev = (s.inner(s2) - C64::new(target, 0.0)).norm();
                    report.orthonormality = report.orthonormality.max(dev);
                }
            }
            for &b2 in &labels[i + 1..] {
                for s in states {
                    for s2 in self.basis(b2) {
                        let dev = (s.inner(s2).norm_sqr() - 1.0 / n as f64).abs();
                        report.unbiasedness = report.unbiasedness.max(dev);
                    }
                }
            }
            if let BasisIndex::Shifted(bb) = b {
                let xz = xz_power(bb, 1, self.dim);
                for (m, s) in states.iter().enumerate() {
                    let lhs = xz.apply(s);
                    let phase = self.dim.omega_pow(m as i64);
                    let dev = lhs
                        .amplitudes()
                        .iter()
                        .zip(s.amplitudes())
                        .map(|(a, v)| (a - phase * v).norm())
                        .fold(0.0, f64::max);
                    report.eigen_residual = report.eigen_residual.max(dev);
                }
            }
            let mut sum = Operator::zeros(self.dim);
            for s in states {
                sum = &sum + &s.projector();
            }
            report.completeness = report
                .completeness
                .max(sum.max_abs_diff(&Operator::identity(self.dim)));
        }
        report
    }
}

/// Maximum deviations found by [`MubFamily::check`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MubReport {
    pub orthonormality: f64,
    pub unbiasedness: f64,
    pub eigen_residual: f64,
    pub completeness: f64,
}

impl MubReport {
    pub fn max(&self) -> f64 {
        self.orthonormality
            .max(self.unbiasedness)
            .max(self.eigen_residual)
            .max(self.completeness)
    }

    fn first_failure(&self, tol: f64) -> Option<String> {
        [
            ("orthonormality", self.orthonormality),
            ("unbiasedness", self.unbiasedness),
            ("eigenvalue relation", self.eigen_residual),
            ("completeness", self.completeness),
        ]
        .into_iter()
        .find(|(_, v)| v.is_nan() || *v > tol)
        .map(|(name, v)| format!("{name} deviates by {v:.3e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::schwinger_x;

    fn dim(n: u64) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn zero_state_of_momentum_basis_is_uniform() {
        let d = dim(3);
        let s = mub_state(0, BasisIndex::Shifted(0), d);
        let u = 1.0 / 3f64.sqrt();
        for a in s.amplitudes() {
            assert!((a - C64::new(u, 0.0)).norm() < 1e-15);
        }
        assert!(momentum_state(0, d).max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn shifted_states_are_eigenvectors() {
        let d = dim(5);
        for b in 0..5 {
            let xz = xz_power(b, 1, d);
            for m in 0..5 {
                let s = mub_state(m, BasisIndex::Shifted(b), d);
                let out = xz.apply(&s);
                let expected = StateVector::from_amplitudes(
                    d,
                    s.amplitudes()
                        .iter()
                        .map(|a| a * d.omega_pow(m as i64))
                        .collect(),
                );
                assert!(out.max_abs_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn momentum_basis_relabeling() {
        let d = dim(5);
        let s = mub_state(2, BasisIndex::Shifted(0), d);
        assert!(s.max_abs_diff(&momentum_state(3, d)) < 1e-15);
        for n in [3u64, 5, 7, 11] {
            let d = dim(n);
            for p in 0..d.get() {
                let m = d.reduce(-(p as i64));
                assert!(
                    momentum_state(p, d).max_abs_diff(&mub_state(m, BasisIndex::Shifted(0), d))
                        < 1e-14
                );
            }
        }
    }

    #[test]
    fn momentum_states_diagonalize_shift() {
        let d = dim(5);
        let x = schwinger_x(d);
        for p in 0..5 {
            let s = momentum_state(p, d);
            let phase = d.omega_pow(-(p as i64));
            let expected =
                StateVector::from_amplitudes(d, s.amplitudes().iter().map(|a| a * phase).collect());
            assert!(x.apply(&s).max_abs_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn half_b_reading_agrees_with_inverse_of_two() {
        // b * inv(2) * n(n-1) mod N and b * (n(n-1)/2) mod N give the same phase
        for n in [3u64, 5, 7, 11, 13] {
            let d = dim(n);
            let inv2 = crate::field::mod_inverse(2, d).unwrap();
            for b in 0..d.get() {
                for k in 0..d.get() {
                    let a = d.reduce((b * inv2 * k * k.saturating_sub(1)) as i64);
                    let c = d.reduce((b * (k * k.saturating_sub(1) / 2)) as i64);
                    assert_eq!(a, c);
                }
            }
        }
    }

    #[test]
    fn family_sizes_and_invariants() {
        for (n, bases) in [(3u64, 4usize), (5, 6), (7, 8), (11, 12)] {
            let fam = MubFamily::new(dim(n)).unwrap();
            assert_eq!(fam.iter().count(), bases);
            assert!(fam.iter().all(|(_, s)| s.len() == n as usize));
            let r = fam.check();
            assert!(r.max() <= 1e-10, "{r:?}");
        }
    }
}
