//! Two-probe von Neumann measurement model.
//!
//! Probe 1 couples impulsively (strength `eps1`) to the position projector
//! `|q><q|`, probe 2 later (strength `eps2`) to the momentum projector
//! `|p><p|`. With Gaussian probes the normalized correlations are
//!
//! ```text
//! <Q1 Q2> / (eps1 eps2) = Re W11(eps1)
//! <P1 Q2> / (eps1 eps2) = 2 sigma^2 Im W11(eps1)
//! W11(eps1) = sum_q' G_{q'q}(eps1) Tr(rho |q'><q'| |p><p| |q><q|)
//! G_{q'q}   = [q'=q] + exp(-sigma^2 eps1^2 / 2) [q'!=q]
//! ```
//!
//! and `W11(0)` is the Kirkwood value `K(p,q)`. The error at finite coupling
//! is exactly `(exp(-sigma^2 eps1^2/2) - 1)(K - <q|rho|q>/N)`, quadratic in
//! `eps1`, which is what [`kirkwood_extrapolated`] removes.
//!
//! [`reconstruct_wigner`] only sees the state through a [`ProbeMeasurements`]
//! implementation.

use crate::error::{Error, Result};
use crate::field::Dimension;
use crate::kirkwood::KirkwoodGrid;
use crate::mub::momentum_state;
use crate::operator::DensityMatrix;
use crate::wigner::{WignerGrid, REALITY_LIMIT};
use crate::C64;

/// Coupling strengths and probe-1 momentum variance.
///
/// `eps1 = 0` is accepted and gives the exact weak-coupling limit.
/// `eps_single` is the coupling of the separate single-probe experiments
/// that measure position populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub eps1: f64,
    pub eps2: f64,
    pub sigma_p1_sq: f64,
    pub eps_single: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            eps1: 1e-3,
            eps2: 1.0,
            sigma_p1_sq: 1.0,
            eps_single: 1.0,
        }
    }
}

impl ProbeConfig {
    pub fn new(eps1: f64, eps2: f64, sigma_p1_sq: f64) -> Result<Self> {
        ProbeConfig {
            eps1,
            eps2,
            sigma_p1_sq,
            ..Default::default()
        }
        .validated()
    }

    pub fn with_eps1(self, eps1: f64) -> Result<Self> {
        ProbeConfig { eps1, ..self }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.eps1 >= 0.0 && self.eps1.is_finite()) {
            return Err(Error::InvalidProbeConfig(format!(
                "eps1 must be >= 0, got {}",
                self.eps1
            )));
        }
        for (name, v) in [
            ("eps2", self.eps2),
            ("sigma2", self.sigma_p1_sq),
            ("eps_single", self.eps_single),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidProbeConfig(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(self)
    }

    /// Off-diagonal weight `exp(-sigma^2 eps1^2 / 2)` of `G`.
    pub fn decoherence_factor(&self) -> f64 {
        (-0.5 * self.sigma_p1_sq * self.eps1 * self.eps1).exp()
    }
}

/// Normalized two-probe correlations for one `(p, q)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    pub p: usize,
    pub q: usize,
    /// `<Q1 Q2> / (eps1 eps2)`
    pub qq_over_eps: f64,
    /// `<P1 Q2> / (eps1 eps2)`
    pub pq_over_eps: f64,
    pub config: ProbeConfig,
}

impl CorrelationRecord {
    /// Record produced by a given `W11` value.
    pub fn from_w11(p: usize, q: usize, w11: C64, config: ProbeConfig) -> Self {
        CorrelationRecord {
            p,
            q,
            qq_over_eps: w11.re,
            pq_over_eps: 2.0 * config.sigma_p1_sq * w11.im,
            config,
        }
    }

    /// `qq + i pq / (2 sigma^2)`, the finite-coupling Kirkwood estimate.
    pub fn w11_estimate(&self) -> C64 {
        C64::new(
            self.qq_over_eps,
            self.pq_over_eps / (2.0 * self.config.sigma_p1_sq),
        )
    }

    /// Unnormalized `<Q1 Q2>`.
    pub fn raw_qq(&self) -> f64 {
        self.qq_over_eps * self.config.eps1 * self.config.eps2
    }

    /// Unnormalized `<P1 Q2>`.
    pub fn raw_pq(&self) -> f64 {
        self.pq_over_eps * self.config.eps1 * self.config.eps2
    }
}

/// Access to measured probe expectation values. Reconstruction only ever goes
/// through this trait.
pub trait ProbeMeasurements {
    fn dim(&self) -> Dimension;

    /// Two-probe correlations for position projector `q` then momentum
    /// projector `p`.
    fn correlations(&self, p: usize, q: usize, config: &ProbeConfig) -> CorrelationRecord;

    /// Mean pointer position `<Q>` of a single probe coupled with strength
    /// `eps` to the position projector `|q><q|`.
    fn single_probe_position(&self, q: usize, eps: f64) -> f64;
}

/// `W11(eps1)` as the literal `q'` sum with exact rank-1 projectors.
pub fn w11(rho: &DensityMatrix, p: usize, q: usize, eps1: f64, sigma_p1_sq: f64) -> C64 {
    let op = rho.operator();
    let dim = rho.dim();
    let n = dim.get();
    let (p, q) = (p % n, q % n);
    let ket_p = momentum_state(p, dim);
    let amps = ket_p.amplitudes();
    let off_diag = (-0.5 * sigma_p1_sq * eps1 * eps1).exp();
    // Tr(rho |q'><q'|p><p|q><q|) = <q|rho|q'> <q'|p> <p|q>
    let p_q = amps[q].conj();
    let mut acc = C64::new(0.0, 0.0);
    for qp in 0..n {
        let g = if qp == q { 1.0 } else { off_diag };
        acc += op[(q, qp)] * amps[qp] * p_q * g;
    }
    acc
}

pub fn probe_correlations(
    rho: &DensityMatrix,
    p: usize,
    q: usize,
    config: &ProbeConfig,
) -> CorrelationRecord {
    let v = w11(rho, p, q, config.eps1, config.sigma_p1_sq);
    CorrelationRecord::from_w11(p, q, v, *config)
}

/// `eps <q|rho|q>`, the pointer shift of a single probe measuring `|q><q|`.
pub fn single_probe_position(rho: &DensityMatrix, q: usize, eps: f64) -> f64 {
    eps * rho.population(q)
}

/// Simulated probes attached to a known state.
#[derive(Debug, Clone, Copy)]
pub struct SimulatedProbes<'a> {
    rho: &'a DensityMatrix,
}

impl<'a> SimulatedProbes<'a> {
    pub fn new(rho: &'a DensityMatrix) -> Self {
        SimulatedProbes { rho }
    }
}

impl ProbeMeasurements for SimulatedProbes<'_> {
    fn dim(&self) -> Dimension {
        self.rho.dim()
    }

    fn correlations(&self, p: usize, q: usize, config: &ProbeConfig) -> CorrelationRecord {
        probe_correlations(self.rho, p, q, config)
    }

    fn single_probe_position(&self, q: usize, eps: f64) -> f64 {
        single_probe_position(self.rho, q, eps)
    }
}

/// Correlation records for every `(p, q)`, indexed momentum first.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGrid {
    dim: Dimension,
    records: Vec<CorrelationRecord>,
}

impl CorrelationGrid {
    pub fn measure<M: ProbeMeasurements + ?Sized>(probes: &M, config: &ProbeConfig) -> Self {
        let dim = probes.dim();
        let n = dim.get();
        let records = (0..n * n)
            .map(|i| probes.correlations(i / n, i % n, config))
            .collect();
        CorrelationGrid { dim, records }
    }

    pub fn from_records(dim: Dimension, records: Vec<CorrelationRecord>) -> Result<Self> {
        let expected = dim.get() * dim.get();
        if records.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: records.len(),
            });
        }
        Ok(CorrelationGrid { dim, records })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn records(&self) -> &[CorrelationRecord] {
        &self.records
    }

    pub fn get(&self, p: usize, q: usize) -> &CorrelationRecord {
        &self.records[p * self.dim.get() + q]
    }

    /// The configuration shared by every record.
    pub fn config(&self) -> Result<ProbeConfig> {
        let first = self.records[0].config;
        if self.records.iter().any(|r| r.config != first) {
            return Err(Error::MixedConfigs);
        }
        Ok(first)
    }
}

/// Kirkwood grid estimated from probe data, tagged with the coupling used.
#[derive(Debug, Clone, PartialEq)]
pub struct KirkwoodEstimate {
    pub grid: KirkwoodGrid,
    pub config: ProbeConfig,
    pub extrapolated: bool,
}

/// Single-coupling estimate `K(p,q) ~ qq + i pq / (2 sigma^2)`.
pub fn kirkwood_from_correlations(records: &CorrelationGrid) -> Result<KirkwoodEstimate> {
    let config = records.config()?;
    let values = records
        .records()
        .iter()
        .map(CorrelationRecord::w11_estimate)
        .collect();
    Ok(KirkwoodEstimate {
        grid: KirkwoodGrid::from_values(records.dim(), values)?,
        config,
        extrapolated: false,
    })
}

/// Richardson extrapolation in `eps1^2` from records at `eps1` and `eps1/2`:
/// `(4 K(eps1/2) - K(eps1)) / 3`.
pub fn kirkwood_extrapolated(
    coarse: &CorrelationGrid,
    fine: &CorrelationGrid,
) -> Result<KirkwoodEstimate> {
    let (cc, fc) = (coarse.config()?, fine.config()?);
    if coarse.dim() != fine.dim() {
        return Err(Error::DimensionMismatch {
            left: coarse.dim().get(),
            right: fine.dim().get(),
        });
    }
    if (ProbeConfig { eps1: 0.0, ..cc }) != (ProbeConfig { eps1: 0.0, ..fc }) {
        return Err(Error::MixedConfigs);
    }
    if (cc.eps1 - 2.0 * fc.eps1).abs() > 1e-12 * cc.eps1.max(f64::MIN_POSITIVE) {
        return Err(Error::CouplingRatio {
            coarse: cc.eps1,
            fine: fc.eps1,
        });
    }
    let values = coarse
        .records()
        .iter()
        .zip(fine.records())
        .map(|(c, f)| (f.w11_estimate() * 4.0 - c.w11_estimate()) / 3.0)
        .collect();
    Ok(KirkwoodEstimate {
        grid: KirkwoodGrid::from_values(coarse.dim(), values)?,
        config: cc,
        extrapolated: true,
    })
}

/// Wigner grid from probe data alone: Kirkwood estimate through the
/// `(N+1)/2`-offset phase sum, plus the two single-probe population terms.
pub fn reconstruct_wigner<M: ProbeMeasurements + ?Sized>(
    probes: &M,
    config: &ProbeConfig,
    extrapolate: bool,
) -> Result<WignerGrid> {
    let config = config.validated()?;
    let coarse = CorrelationGrid::measure(probes, &config);
    let estimate = if extrapolate && config.eps1 > 0.0 {
        let fine = CorrelationGrid::measure(probes, &config.with_eps1(config.eps1 / 2.0)?);
        kirkwood_extrapolated(&coarse, &fine)?
    } else {
        kirkwood_from_correlations(&coarse)?
    };
    let dim = probes.dim();
    let n = dim.get();
    let h = dim.half();
    let eps = config.eps_single;
    let populations: Vec<f64> = (0..n)
        .map(|q| probes.single_probe_position(q, eps) / eps)
        .collect();
    let k = &estimate.grid;
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
