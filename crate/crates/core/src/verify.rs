//! Seeded property suites over one dimension, used by `qps verify`.
//!
//! Each check reports the worst deviation it saw and the threshold it was
//! held to. The report text contains no timings so repeated runs with the
//! same arguments print identical bytes.

use std::fmt;

use crate::error::Result;
use crate::field::Dimension;
use crate::kirkwood::{kirkwood_from_wigner, wigner_from_kirkwood};
use crate::mub::momentum_state;
use crate::operator::{
    random_density, random_hermitian, schwinger_x, schwinger_z, xz_power, Operator, StateVector,
};
use crate::probe::{reconstruct_wigner, w11, ProbeConfig, SimulatedProbes};
use crate::wigner::{overlap, radon_marginal, PhaseSpace};
use crate::C64;

/// Bound on the probe reconstruction error at the default coupling.
pub const RECONSTRUCTION_BOUND: f64 = 1e-4;
/// Allowed deviation of the fitted convergence order from 2.
pub const ORDER_TOLERANCE: f64 = 0.1;
/// Couplings used for the convergence-order fit.
pub const ORDER_COUPLINGS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 20,
            seed: 0,
            tol: crate::DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub deviation: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        // NaN never passes
        self.deviation <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub dim: Dimension,
    pub options: VerifyOptions,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "qps verify: N={} trials={} seed={} tol={:.1e}",
            self.dim, self.options.trials, self.options.seed, self.options.tol
        )?;
        writeln!(
            f,
            "{:<50} {:>13} {:>11}  result",
            "property", "max deviation", "threshold"
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<50} {:>13.3e} {:>11.1e}  {}",
                c.name,
                c.deviation,
                c.threshold,
                if c.passed() { "PASS" } else { "FAIL" }
            )?;
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        writeln!(f, "{passed}/{} properties passed", self.checks.len())
    }
}

/// Least-squares slope of `log(err)` against `log(eps)`.
pub fn loglog_slope(eps: &[f64], err: &[f64]) -> f64 {
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so a broken computation cannot pass
    it.into_iter().fold(0.0, |a: f64, b| {
        if a.is_nan() || b.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    })
}

pub fn run(dim: Dimension, options: VerifyOptions) -> Result<VerifyReport> {
    let space = PhaseSpace::new(dim)?;
    let n = dim.get();
    let nf = n as f64;
    let tol = options.tol;
    let id = Operator::identity(dim);
    let mut checks = Vec::new();
    let mut push = |name, deviation, threshold| {
        checks.push(Check {
            name,
            deviation,
            threshold,
        })
    };

    let mub = space.mubs().check();
    push("MUB orthonormality", mub.orthonormality, tol);
    push("MUB unbiasedness", mub.unbiasedness, tol);
    push("MUB eigenvalue relation", mub.eigen_residual, tol);

    let (z, x) = (schwinger_z(dim), schwinger_x(dim));
    let comm = (&z * &x).max_abs_diff(&(&x * &z).scale(dim.omega_pow(1)));
    let periodic = z.pow(n).max_abs_diff(&id).max(x.pow(n).max_abs_diff(&id));
    push(
        "clock/shift commutation and periodicity",
        comm.max(periodic),
        tol,
    );
    let mut xz_dev = 0.0f64;
    for b in 0..n {
        for k in 1..n {
            let phase = (k * (k - 1) / 2 * b) as i64;
            let closed = (&x.pow(k) * &z.pow(k * b)).scale(dim.omega_pow(phase));
            xz_dev = xz_dev.max(xz_power(b, k, dim).max_abs_diff(&closed));
        }
    }
    push("(XZ^b)^k normal ordering", xz_dev, tol);

    let lines = space.line_operators();
    let mut orth = 0.0f64;
    for a in lines {
        for b in lines {
            let t = a.op.trace_product(&b.op) / nf;
            let expected = if (a.q, a.p) == (b.q, b.p) { 1.0 } else { 0.0 };
            orth = orth.max((t - C64::new(expected, 0.0)).norm());
        }
    }
    push("line-operator orthogonality", orth, tol);

    let mut sum = Operator::zeros(dim);
    for l in lines {
        sum = &sum + &l.op;
    }
    push(
        "line-operator closure",
        sum.scale(C64::new(1.0 / nf, 0.0)).max_abs_diff(&id),
        tol,
    );

    let forms = max_of(lines.iter().map(|l| {
        let mub_sum = space.line_operator_mub_sum(l.q, l.p);
        let explicit = space.line_operator_explicit(l.q, l.p);
        l.op.max_abs_diff(&mub_sum)
            .max(l.op.max_abs_diff(&explicit))
            .max(mub_sum.max_abs_diff(&explicit))
    }));
    push(
        "line-operator closed form = basis sum = phase sum",
        forms,
        tol,
    );

    let mut reality = 0.0f64;
    let mut norm = 0.0f64;
    let mut product = 0.0f64;
    let mut marginal = 0.0f64;
    let mut w_to_k = 0.0f64;
    let mut k_to_w = 0.0f64;
    let mut inverse = 0.0f64;
    let mut limit = 0.0f64;
    let mut recon = 0.0f64;
    let mut order = 0.0f64;
    let momenta: Vec<Operator> = (0..n).map(|p| momentum_state(p, dim).projector()).collect();
    for trial in 0..options.trials {
        let seed = options
            .seed
            .wrapping_mul(1_000_003)
            .wrapping_add(trial as u64);
        let rho = random_density(dim, seed);
        let w = space.wigner_transform(rho.operator())?;
        reality = reality.max(w.imag_residue());
        norm = norm.max((w.normalization() - 1.0).abs());
        inverse = inverse.max(space.inverse_wigner(&w)?.max_abs_diff(rho.operator()));

        let a = random_hermitian(dim, seed ^ 0xA5A5_A5A5);
        let b = random_hermitian(dim, seed ^ 0x5A5A_5A5A);
        let (wa, wb) = (space.wigner_transform(&a)?, space.wigner_transform(&b)?);
        reality = reality.max(wa.imag_residue()).max(wb.imag_residue());
        product = product.max((overlap(&wa, &wb)? - a.trace_product(&b).re).abs());

        for basis in dim.bases() {
            for m in 0..n {
                let direct = space.mubs().state(m, basis).expectation(rho.operator()).re;
                marginal = marginal.max((radon_marginal(&w, m, basis) - direct).abs());
            }
        }

        let k = space.kirkwood(&rho)?;
        let mut direct = 0.0f64;
        for (p, q, kv) in k.iter() {
            // Tr(rho |p><p| |q><q|) by explicit operator products
            let pq = &momenta[p] * &StateVector::basis(dim, q).projector();
            direct = direct.max((rho.operator().trace_product(&pq) - kv).norm());
        }
        w_to_k = w_to_k
            .max(kirkwood_from_wigner(&w).max_abs_diff(&k))
            .max(direct);
        k_to_w = k_to_w.max(wigner_from_kirkwood(&k)?.max_abs_diff(&w));

        for (p, q, kv) in k.iter() {
            limit = limit.max((w11(&rho, p, q, 0.0, 1.0) - kv).norm());
        }

        let probes = SimulatedProbes::new(&rho);
        let cfg = ProbeConfig::default();
        recon = recon.max(reconstruct_wigner(&probes, &cfg, false)?.max_abs_diff(&w));
        let errs = ORDER_COUPLINGS
            .iter()
            .map(|&e| Ok(reconstruct_wigner(&probes, &cfg.with_eps1(e)?, false)?.max_abs_diff(&w)))
            .collect::<Result<Vec<f64>>>()?;
        let slope = loglog_slope(&ORDER_COUPLINGS, &errs);
        order = max_of([order, (slope - 2.0).abs()]);
    }
    push("Wigner reality", reality, tol);
    push("Wigner normalization", norm, tol);
    push("inverse transform round trip", inverse, tol);
    push("product formula", product, tol);
    push("marginality (Radon transform)", marginal, tol);
    push("Wigner -> Kirkwood vs direct trace", w_to_k, tol);
    push("Kirkwood -> Wigner round trip", k_to_w, tol);
    push("probe weak-coupling limit = Kirkwood", limit, tol);
    push(
        "probe reconstruction at eps1=1e-3",
        recon,
        RECONSTRUCTION_BOUND,
    );
    push(
        "probe convergence order |slope - 2|",
        order,
        ORDER_TOLERANCE,
    );

    Ok(VerifyReport {
        dim,
        options,
        checks,
    })
}
