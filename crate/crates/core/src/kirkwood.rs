//! Kirkwood's joint quasi-distribution `K(p,q) = Tr(rho |p><p|q><q|)` and its
//! exact conversions to and from the Wigner grid.
//!
//! Kirkwood grids are indexed momentum first, `(p, q)`, while Wigner grids
//! are indexed `(q, p)`; the conversion functions take care of the swap.

use crate::error::{Error, Result};
use crate::field::Dimension;
use crate::mub::momentum_state;
use crate::operator::{DensityMatrix, Operator};
use crate::wigner::{PhaseSpace, WignerGrid, REALITY_LIMIT};
use crate::C64;

/// Complex Kirkwood values indexed `(p, q)`, stored row-major in `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct KirkwoodGrid {
    dim: Dimension,
    values: Vec<C64>,
}

impl KirkwoodGrid {
    pub fn from_values(dim: Dimension, values: Vec<C64>) -> Result<Self> {
        let expected = dim.get() * dim.get();
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(KirkwoodGrid { dim, values })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> C64 {
        self.values[p * self.dim.get() + q]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn total(&self) -> C64 {
        self.values.iter().sum()
    }

    /// `sum_p K(p, q)`, the position population `<q|rho|q>`.
    pub fn position_marginal(&self, q: usize) -> C64 {
        let n = self.dim.get();
        (0..n).map(|p| self.get(p, q % n)).sum()
    }

    /// `sum_q K(p, q)`, the momentum population `<p|rho|p>`.
    pub fn momentum_marginal(&self, p: usize) -> C64 {
        let n = self.dim.get();
        (0..n).map(|q| self.get(p % n, q)).sum()
    }

    pub fn max_abs_diff(&self, other: &KirkwoodGrid) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Iterates `(p, q, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let n = self.dim.get();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i / n, i % n, v))
    }
}

/// `<q|A|p><p|q>` for every `(p, q)`; valid for any operator.
pub fn kirkwood_of(a: &Operator) -> KirkwoodGrid {
    let dim = a.dim();
    let n = dim.get();
    let mut values = Vec::with_capacity(n * n);
    for p in 0..n {
        let ket = momentum_state(p, dim);
        let amps = ket.amplitudes();
        for q in 0..n {
            let q_a_p: C64 = a.row(q).iter().zip(amps).map(|(x, y)| x * y).sum();
            values.push(q_a_p * amps[q].conj());
        }
    }
    KirkwoodGrid { dim, values }
}

impl PhaseSpace {
    pub fn kirkwood(&self, rho: &DensityMatrix) -> Result<KirkwoodGrid> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: rho.dim().get(),
            });
        }
        Ok(kirkwood_of(rho.operator()))
    }
}

/// Wigner transform of `|p><p|q><q|` evaluated at `(q', p') = (qg, pg)`:
/// `(1/N) {[q = q'] - [2q = 2q'+1] + exp(-2 pi i (p-p')(2(q-q')-1)/N)}`.
pub fn cross_wt_projectors(qg: usize, pg: usize, p: usize, q: usize, dim: Dimension) -> C64 {
    let n = dim.get();
    let (qg, pg, p, q) = (qg % n, pg % n, p % n, q % n);
    let mut v = C64::new(0.0, 0.0);
    if q == qg {
        v += 1.0;
    }
    if (2 * q) % n == (2 * qg + 1) % n {
        v -= 1.0;
    }
    let dp = p as i64 - pg as i64;
    let dq = 2 * (q as i64 - qg as i64) - 1;
    v += dim.omega_pow(-dp * dq);
    v / n as f64
}

/// `K(p,q) = (1/N) sum_{q',p'} W(q',p') W_{|p><p|q><q|}(q',p')`.
pub fn kirkwood_from_wigner(w: &WignerGrid) -> KirkwoodGrid {
    let dim = w.dim();
    let n = dim.get();
    // cross transform only depends on (p - p', q - q'), tabulate it once
    let table: Vec<C64> = (0..n * n)
        .map(|i| cross_wt_projectors(0, 0, i / n, i % n, dim))
        .collect();
    let mut values = vec![C64::new(0.0, 0.0); n * n];
    for p in 0..n {
        for q in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (qg, pg, wv) in w.iter() {
                let dp = (p + n - pg) % n;
                let dq = (q + n - qg) % n;
                acc += table[dp * n + dq] * wv;
            }
            values[p * n + q] = acc / n as f64;
        }
    }
    KirkwoodGrid { dim, values }
}

/// Inverse of [`kirkwood_from_wigner`]:
/// `W(q,p) = sum_{q',p'} omega^{2(q-q'+h)(p-p')} K(p',q') + <q|rho|q> - <q+h|rho|q+h>`
/// with `h = (N+1)/2`, the populations being read off the Kirkwood row sums.
pub fn wigner_from_kirkwood(k: &KirkwoodGrid) -> Result<WignerGrid> {
    let dim = k.dim();
    let n = dim.get();
    let h = dim.half();
    let populations: Vec<C64> = (0..n).map(|q| k.position_marginal(q)).collect();
    let mut values = vec![C64::new(0.0, 0.0); n * n];
    for q in 0..n {
        for p in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (pk, qk, kv) in k.iter() {
                let a = q as i64 - qk as i64 + h as i64;
                let b = p as i64 - pk as i64;
                acc += dim.omega_pow(2 * a * b) * kv;
            }
            acc += populations[q] - populations[(q + h) % n];
            values[q * n + p] = acc;
        }
    }
    let imag = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if imag > REALITY_LIMIT {
        return Err(Error::NonRealResult { imag });
    }
    WignerGrid::from_complex(dim, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{random_density, random_pure_state, StateVector};

    fn space(n: u64) -> PhaseSpace {
        PhaseSpace::new(Dimension::new(n).unwrap()).unwrap()
    }

    fn direct_kirkwood(s: &PhaseSpace, rho: &Operator) -> KirkwoodGrid {
        // Tr(rho P_p P_q) by explicit products
        let n = s.n();
        let mut values = Vec::new();
        for p in 0..n {
            let pp = momentum_state(p, s.dim()).projector();
            for q in 0..n {
                let pq = StateVector::basis(s.dim(), q).projector();
                values.push((rho * &(&pp * &pq)).trace());
            }
        }
        KirkwoodGrid::from_values(s.dim(), values).unwrap()
    }

    #[test]
    fn mixed_state_is_uniform() {
        let s = space(5);
        let k = s
            .kirkwood(&DensityMatrix::maximally_mixed(s.dim()))
            .unwrap();
        assert!(k
            .values()
            .iter()
            .all(|v| (v - C64::new(1.0 / 25.0, 0.0)).norm() < 1e-14));
        let w = wigner_from_kirkwood(&k).unwrap();
        assert!(w.values().iter().all(|v| (v - 0.2).abs() < 1e-12));
    }

    #[test]
    fn position_state() {
        let s = space(5);
        let rho = DensityMatrix::pure(&StateVector::basis(s.dim(), 2));
        let k = s.kirkwood(&rho).unwrap();
        for (p, q, v) in k.iter() {
            let expected = if q == 2 { 0.2 } else { 0.0 };
            assert!((v - C64::new(expected, 0.0)).norm() < 1e-14, "p={p} q={q}");
        }
        let w = s.wigner_transform(rho.operator()).unwrap();
        assert!(kirkwood_from_wigner(&w).max_abs_diff(&k) < 1e-12);
        let back = wigner_from_kirkwood(&k).unwrap();
        for (q, _, v) in back.iter() {
            assert!((v - if q == 2 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_direct_trace() {
        for n in [3u64, 5, 7] {
            let s = space(n);
            for seed in 0..5 {
                let rho = random_density(s.dim(), seed);
                let k = s.kirkwood(&rho).unwrap();
                assert!(k.max_abs_diff(&direct_kirkwood(&s, rho.operator())) < 1e-12);
                assert!((k.total() - C64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cross_transform_matches_brute_force() {
        for n in [3u64, 5] {
            let s = space(n);
            let n = s.n();
            for p in 0..n {
                let pp = momentum_state(p, s.dim()).projector();
                for q in 0..n {
                    let prod = &pp * &StateVector::basis(s.dim(), q).projector();
                    for qg in 0..n {
                        for pg in 0..n {
                            let direct = prod.trace_product(&s.line_operator(qg, pg).op);
                            let closed = cross_wt_projectors(qg, pg, p, q, s.dim());
                            assert!((direct - closed).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cross_transform_on_its_own_point() {
        let d = Dimension::new(7).unwrap();
        for q in 0..7 {
            for p in 0..7 {
                let v = cross_wt_projectors(q, p, p, q, d);
                assert!((v - C64::new(2.0 / 7.0, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn conversions_invert_each_other() {
        for n in [3u64, 5, 7, 11] {
            let s = space(n);
            for seed in 0..4 {
                let rho = random_density(s.dim(), 100 + seed);
                let w = s.wigner_transform(rho.operator()).unwrap();
                let k = s.kirkwood(&rho).unwrap();
                assert!(kirkwood_from_wigner(&w).max_abs_diff(&k) < 1e-10);
                let wk = wigner_from_kirkwood(&k).unwrap();
                assert!(wk.max_abs_diff(&w) < 1e-10);
                assert!((wk.normalization() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn marginals_and_complexity() {
        for n in [3u64, 5, 7] {
            let s = space(n);
            let psi = random_pure_state(s.dim(), 5);
            let rho = DensityMatrix::pure(&psi);
            let k = s.kirkwood(&rho).unwrap();
            assert!(k.max_imag() > 0.01);
            for q in 0..s.n() {
                assert!((k.position_marginal(q) - C64::new(rho.population(q), 0.0)).norm() < 1e-10);
            }
            for p in 0..s.n() {
                let direct = momentum_state(p, s.dim()).expectation(rho.operator());
                assert!((k.momentum_marginal(p) - direct).norm() < 1e-10);
            }
        }
    }
}
