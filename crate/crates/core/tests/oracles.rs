//! Cross-checks against constructions that do not share code paths with the
//! production routines.

use qps_core::mub::momentum_state;
use qps_core::operator::{random_density, StateVector};
use qps_core::probe::{reconstruct_wigner, w11, ProbeConfig, SimulatedProbes};
use qps_core::verify::loglog_slope;
use qps_core::{Dimension, Operator, PhaseSpace, C64};

fn space(n: u64) -> PhaseSpace {
    PhaseSpace::new(Dimension::new(n).unwrap()).unwrap()
}

#[test]
fn wigner_from_basis_expectations() {
    // W(q,p) = sum_b <M(b);b|rho|M(b);b> - Tr(rho)
    for n in [3u64, 5, 7] {
        let s = space(n);
        let rho = random_density(s.dim(), 77);
        let w = s.wigner_transform(rho.operator()).unwrap();
        for (q, p, v) in w.iter() {
            let mut acc = -1.0;
            for b in s.dim().bases() {
                let m = qps_core::field::line_point(q, p, b, s.dim());
                acc += s.mubs().state(m, b).expectation(rho.operator()).re;
            }
            assert!((acc - v).abs() < 1e-10);
        }
    }
}

#[test]
fn w11_literal_operator_products() {
    let s = space(5);
    let d = s.dim();
    let rho = random_density(d, 4);
    let (eps, sigma) = (0.2f64, 1.5f64);
    let g = (-0.5 * sigma * eps * eps).exp();
    for p in 0..5 {
        let pp = momentum_state(p, d).projector();
        for q in 0..5 {
            let pq = StateVector::basis(d, q).projector();
            let mut expected = C64::new(0.0, 0.0);
            for qp in 0..5 {
                let pqp = StateVector::basis(d, qp).projector();
                let prod: Operator = &(&(rho.operator() * &pqp) * &pp) * &pq;
                expected += prod.trace() * if qp == q { 1.0 } else { g };
            }
            assert!((w11(&rho, p, q, eps, sigma) - expected).norm() < 1e-13);
        }
    }
}

#[test]
fn reconstruction_converges_quadratically() {
    let s = space(5);
    let rho = random_density(s.dim(), 31);
    let exact = s.wigner_transform(rho.operator()).unwrap();
    let probes = SimulatedProbes::new(&rho);
    let eps = [1e-2, 5e-3, 2.5e-3];
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let cfg = ProbeConfig::default().with_eps1(e).unwrap();
            reconstruct_wigner(&probes, &cfg, false)
                .unwrap()
                .max_abs_diff(&exact)
        })
        .collect();
    let slope = loglog_slope(&eps, &errs);
    assert!((slope - 2.0).abs() <= 0.1, "slope {slope}");
    assert!((errs[0] / errs[1] - 4.0).abs() < 0.4);

    let at_default = reconstruct_wigner(&probes, &ProbeConfig::default(), false).unwrap();
    assert!(at_default.max_abs_diff(&exact) <= 1e-4);

    let exact_limit = reconstruct_wigner(
        &probes,
        &ProbeConfig::default().with_eps1(0.0).unwrap(),
        false,
    )
    .unwrap();
    assert!(exact_limit.max_abs_diff(&exact) <= 1e-10);

    let cfg = ProbeConfig::default().with_eps1(1e-2).unwrap();
    let single = reconstruct_wigner(&probes, &cfg, false)
        .unwrap()
        .max_abs_diff(&exact);
    let rich = reconstruct_wigner(&probes, &cfg, true)
        .unwrap()
        .max_abs_diff(&exact);
    assert!(rich < single, "{rich} vs {single}");
}

#[test]
fn reconstruction_error_within_phase_sum_budget() {
    // per-point Kirkwood error times N^2 bounds the grid error
    let s = space(5);
    let rho = random_density(s.dim(), 12);
    let exact_w = s.wigner_transform(rho.operator()).unwrap();
    let k = s.kirkwood(&rho).unwrap();
    let cfg = ProbeConfig::default();
    let worst_k = k
        .iter()
        .map(|(p, q, kv)| (w11(&rho, p, q, cfg.eps1, cfg.sigma_p1_sq) - kv).norm())
        .fold(0.0, f64::max);
    assert!(worst_k <= 1e-5);
    let w = reconstruct_wigner(&SimulatedProbes::new(&rho), &cfg, false).unwrap();
    assert!(w.max_abs_diff(&exact_w) <= 25.0 * worst_k + 1e-13);
}
