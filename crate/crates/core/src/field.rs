//! Arithmetic in the prime field `Z_N` and the phase-space lines that index
//! the mutually unbiased bases.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::C64;

/// Hilbert-space dimension, guaranteed to be an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(usize);

impl Dimension {
    /// Validates `n` by trial division. `N = 2` is rejected because the basis
    /// construction divides by two.
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            if n >= 4 && n.is_multiple_of(2) {
                return Err(Error::NotPrime(n));
            }
            return Err(Error::EvenOrTooSmall(n));
        }
        let mut d = 3u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return Err(Error::NotPrime(n));
            }
            d += 2;
        }
        Ok(Dimension(n as usize))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// `(N + 1) / 2`, the field element representing one half.
    #[inline]
    pub fn half(self) -> usize {
        self.0.div_ceil(2)
    }

    /// Canonical representative of `k` in `[0, N-1]`.
    #[inline]
    pub fn reduce(self, k: i64) -> usize {
        k.rem_euclid(self.0 as i64) as usize
    }

    /// `omega^k` with `omega = exp(2 pi i / N)`; `k` is reduced first.
    #[inline]
    pub fn omega_pow(self, k: i64) -> C64 {
        let k = self.reduce(k);
        C64::from_polar(1.0, 2.0 * PI * k as f64 / self.0 as f64)
    }

    /// Iterator over the `N + 1` basis labels, reference basis first.
    pub fn bases(self) -> impl Iterator<Item = BasisIndex> {
        std::iter::once(BasisIndex::Reference).chain((0..self.0).map(BasisIndex::Shifted))
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Label of one of the `N + 1` bases.
///
/// `Reference` is the position basis; `Shifted(b)` is the eigenbasis of
/// `X Z^b`. Keeping the reference basis as its own tag keeps it from being
/// confused with `Shifted(0)`, the momentum basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    Reference,
    Shifted(usize),
}

impl BasisIndex {
    /// Position in the ordering `Reference, Shifted(0), ..., Shifted(N-1)`.
    pub fn ordinal(self) -> usize {
        match self {
            BasisIndex::Reference => 0,
            BasisIndex::Shifted(b) => b + 1,
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Reference => write!(f, "ref"),
            BasisIndex::Shifted(b) => write!(f, "b={b}"),
        }
    }
}

/// Multiplicative inverse of `a` modulo `N`.
pub fn mod_inverse(a: u64, n: Dimension) -> Result<usize> {
    let m = n.get() as i64;
    let a_red = (a % m as u64) as i64;
    if a_red == 0 {
        return Err(Error::ZeroDivisor(a, n.get()));
    }
    // extended Euclid on (a, m)
    let (mut r0, mut r1) = (a_red, m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    Ok(n.reduce(s0))
}

/// The state label `M_{q,p}(b)` selected by phase-space point `(q, p)` in
/// basis `b`: `q` for the reference basis, `(-p + b q) mod N` otherwise.
#[inline]
pub fn line_point(q: usize, p: usize, b: BasisIndex, n: Dimension) -> usize {
    match b {
        BasisIndex::Reference => q % n.get(),
        BasisIndex::Shifted(b) => n.reduce(b as i64 * q as i64 - p as i64),
    }
}

/// All `N + 1` points `(b, M_{q,p}(b))` of the line through `(q, p)`.
pub fn line_points(q: usize, p: usize, n: Dimension) -> Vec<(BasisIndex, usize)> {
    n.bases().map(|b| (b, line_point(q, p, b, n))).collect()
}
