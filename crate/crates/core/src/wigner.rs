//! Line operators and the discrete Wigner transform.
//!
//! For a phase-space point `(q, p)` the line operator is
//! `P(q,p) = sum_b |M_{q,p}(b); b><M_{q,p}(b); b| - I`, one projector from each
//! of the `N + 1` bases. The Wigner transform of an operator `A` is the grid
//! `W_A(q,p) = Tr(A P(q,p))`, and the `N^2` line operators are orthogonal
//! under `Tr(P P') / N`, which makes the transform invertible.

use crate::error::{Error, Result};
use crate::field::{line_point, BasisIndex, Dimension};
use crate::mub::MubFamily;
use crate::operator::{xz_power, Operator};
use crate::C64;

/// Imaginary parts above this are reported instead of dropped.
pub const REALITY_LIMIT: f64 = 1e-8;

/// Phase-point operator for one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct LineOperator {
    pub q: usize,
    pub p: usize,
    pub op: Operator,
}

/// Real Wigner values indexed `(q, p)`, stored row-major in `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    dim: Dimension,
    values: Vec<f64>,
    imag_residue: f64,
}

impl WignerGrid {
    pub fn from_values(dim: Dimension, values: Vec<f64>) -> Result<Self> {
        let expected = dim.get() * dim.get();
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(WignerGrid {
            dim,
            values,
            imag_residue: 0.0,
        })
    }

    /// Strips imaginary parts after checking them against [`REALITY_LIMIT`].
    pub(crate) fn from_complex(dim: Dimension, values: &[C64]) -> Result<Self> {
        let n = dim.get();
        let mut imag_residue = 0.0f64;
        for (i, v) in values.iter().enumerate() {
            let imag = v.im.abs();
            if imag > REALITY_LIMIT {
                return Err(Error::NonRealWignerValue {
                    q: i / n,
                    p: i % n,
                    imag,
                });
            }
            imag_residue = imag_residue.max(imag);
        }
        Ok(WignerGrid {
            dim,
            values: values.iter().map(|v| v.re).collect(),
            imag_residue,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn get(&self, q: usize, p: usize) -> f64 {
        self.values[q * self.dim.get() + p]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest imaginary part discarded when the grid was produced.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    /// `(1/N) sum_{q,p} W(q,p)`, which equals `Tr(A)`.
    pub fn normalization(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.dim.get() as f64
    }

    pub fn max_abs_diff(&self, other: &WignerGrid) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Iterates `(q, p, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.dim.get();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i / n, i % n, v))
    }
}

/// Characteristic function of an operator in the `(X Z^b)^k`, `Z^l` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicTable {
    dim: Dimension,
    // (k - 1) * N + b, k in 1..N
    kb_part: Vec<C64>,
    l_part: Vec<C64>,
}

impl CharacteristicTable {
    /// `Tr(A [(X Z^b)^k]^dagger)` for `k` in `1..N`.
    pub fn kb(&self, k: usize, b: usize) -> C64 {
        assert!(k >= 1 && k < self.dim.get(), "k out of range");
        self.kb_part[(k - 1) * self.dim.get() + b]
    }

    /// `Tr(A (Z^l)^dagger)`.
    pub fn l(&self, l: usize) -> C64 {
        self.l_part[l]
    }

    /// Reassembles the Wigner grid as the double phase sum
    /// `(1/N) [sum_{b,k} C(k,b) omega^{k(-p+bq)} + sum_l C(l) omega^{lq}]`,
    /// returned row-major in `(q, p)`.
    pub fn reassemble(&self) -> Vec<C64> {
        let d = self.dim;
        let n = d.get();
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for q in 0..n {
            for p in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..n {
                    for k in 1..n {
                        acc += self.kb(k, b) * d.omega_pow((k * (b * q)) as i64 - (k * p) as i64);
                    }
                }
                for l in 0..n {
                    acc += self.l(l) * d.omega_pow((l * q) as i64);
                }
                out[q * n + p] = acc / n as f64;
            }
        }
        out
    }
}

/// Line operator from its closed-form position-basis matrix elements:
/// `<x|P(q,p)|y> = [x=q][y=q] - [x=y][2x = 2q+1] + [x+y = 2q+1] omega^{p(x-y)}`,
/// all equalities taken mod `N`.
pub fn line_operator_closed_form(q: usize, p: usize, dim: Dimension) -> Operator {
    let n = dim.get();
    let (q, p) = (q % n, p % n);
    let target = (2 * q + 1) % n;
    Operator::from_fn(dim, |x, y| {
        let mut v = C64::new(0.0, 0.0);
        if x == q && y == q {
            v += 1.0;
        }
        if x == y && (2 * x) % n == target {
            v -= 1.0;
        }
        if (x + y) % n == target {
            v += dim.omega_pow(p as i64 * (x as i64 - y as i64));
        }
        v
    })
}

/// Wigner-transform context for one dimension: the basis family plus the
/// cached `N^2` line operators.
#[derive(Debug, Clone)]
pub struct PhaseSpace {
    dim: Dimension,
    mubs: MubFamily,
    lines: Vec<LineOperator>,
}

impl PhaseSpace {
    pub fn new(dim: Dimension) -> Result<Self> {
        let mubs = MubFamily::new(dim)?;
        let n = dim.get();
        let lines = (0..n * n)
            .map(|i| {
                let (q, p) = (i / n, i % n);
                LineOperator {
                    q,
                    p,
                    op: line_operator_closed_form(q, p, dim),
                }
            })
            .collect();
        Ok(PhaseSpace { dim, mubs, lines })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim.get()
    }

    pub fn mubs(&self) -> &MubFamily {
        &self.mubs
    }

    pub fn line_operator(&self, q: usize, p: usize) -> &LineOperator {
        let n = self.n();
        &self.lines[(q % n) * n + p % n]
    }

    pub fn line_operators(&self) -> &[LineOperator] {
        &self.lines
    }

    /// `sum_b |M_{q,p}(b); b><M_{q,p}(b); b| - I` from the basis states.
    pub fn line_operator_mub_sum(&self, q: usize, p: usize) -> Operator {
        let mut acc = Operator::identity(self.dim).scale(C64::new(-1.0, 0.0));
        for b in self.dim.bases() {
            let m = line_point(q, p, b, self.dim);
            acc = &acc + &self.mubs.state(m, b).projector();
        }
        acc
    }

    /// Literal evaluation of the triple phase sum over `(b, k, m)` plus the
    /// reference-basis double sum over `(k, n)`.
    pub fn line_operator_explicit(&self, q: usize, p: usize) -> Operator {
        let d = self.dim;
        let n = d.get();
        let inv_n = 1.0 / n as f64;
        let mut acc = Operator::zeros(d);
        for b in 0..n {
            for m in 0..n {
                let mut coeff = C64::new(0.0, 0.0);
                for k in 1..n {
                    coeff += d.omega_pow(k as i64 * ((b * q) as i64 - p as i64 - m as i64));
                }
                let proj = self.mubs.state(m, BasisIndex::Shifted(b)).projector();
                acc = &acc + &proj.scale(coeff * inv_n);
            }
        }
        for r in 0..n {
            let mut coeff = C64::new(0.0, 0.0);
            for k in 0..n {
                coeff += d.omega_pow(k as i64 * (q as i64 - r as i64));
            }
            acc[(r, r)] += coeff * inv_n;
        }
        acc
    }

    /// `Tr(A P(q,p))` for every point, row-major in `(q, p)`, with no reality
    /// requirement; used for non-Hermitian operators.
    pub fn wigner_transform_complex(&self, a: &Operator) -> Result<Vec<C64>> {
        self.check_dim(a.dim())?;
        Ok(self.lines.iter().map(|l| a.trace_product(&l.op)).collect())
    }

    /// Real Wigner grid of `a`. Fails with [`Error::NonRealWignerValue`] when
    /// an imaginary part exceeds [`REALITY_LIMIT`].
    pub fn wigner_transform(&self, a: &Operator) -> Result<WignerGrid> {
        let values = self.wigner_transform_complex(a)?;
        WignerGrid::from_complex(self.dim, &values)
    }

    pub fn characteristic_function(&self, a: &Operator) -> Result<CharacteristicTable> {
        self.check_dim(a.dim())?;
        let d = self.dim;
        let n = d.get();
        let mut kb_part = vec![C64::new(0.0, 0.0); (n - 1) * n];
        for b in 0..n {
            let step = xz_power(b, 1, d);
            let mut power = step.clone();
            for k in 1..n {
                kb_part[(k - 1) * n + b] = a.trace_product(&power.adjoint());
                power = &power * &step;
            }
        }
        // Z^l is diagonal, so Tr(A Z^{-l}) only needs the diagonal of A
        let l_part = (0..n)
            .map(|l| {
                (0..n)
                    .map(|r| a[(r, r)] * d.omega_pow(-((l * r) as i64)))
                    .sum()
            })
            .collect();
        Ok(CharacteristicTable {
            dim: d,
            kb_part,
            l_part,
        })
    }

    /// `(1/N) sum_{q,p} W(q,p) P(q,p)`.
    pub fn inverse_wigner(&self, w: &WignerGrid) -> Result<Operator> {
        self.check_dim(w.dim())?;
        let mut acc = Operator::zeros(self.dim);
        for (line, &v) in self.lines.iter().zip(w.values()) {
            acc = &acc + &line.op.scale(C64::new(v, 0.0));
        }
        Ok(acc.scale(C64::new(1.0 / self.n() as f64, 0.0)))
    }

    /// `(1/N)` times the sum of `W` over the points whose line passes through
    /// state `m` of basis `b`; this is `<m;b|rho|m;b>` for the grid of `rho`.
    pub fn radon_marginal(&self, w: &WignerGrid, m: usize, b: BasisIndex) -> f64 {
        radon_marginal(w, m, b)
    }

    fn check_dim(&self, other: Dimension) -> Result<()> {
        if other != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.get(),
            });
        }
        Ok(())
    }
}

/// Product formula `(1/N) sum W_A W_B`, equal to `Tr(A B)`.
pub fn overlap(wa: &WignerGrid, wb: &WignerGrid) -> Result<f64> {
    if wa.dim() != wb.dim() {
        return Err(Error::DimensionMismatch {
            left: wa.dim().get(),
            right: wb.dim().get(),
        });
    }
    let s: f64 = wa
        .values()
        .iter()
        .zip(wb.values())
        .map(|(a, b)| a * b)
        .sum();
    Ok(s / wa.dim().get() as f64)
}

/// Discrete Radon transform of a Wigner grid along the line `M_{q,p}(b) = m`.
pub fn radon_marginal(w: &WignerGrid, m: usize, b: BasisIndex) -> f64 {
    let d = w.dim();
    let m = m % d.get();
    let s: f64 = w
        .iter()
        .filter(|&(q, p, _)| line_point(q, p, b, d) == m)
        .map(|(_, _, v)| v)
        .sum();
    s / d.get() as f64
}
