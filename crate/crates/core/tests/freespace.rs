use std::f64::consts::PI;

use trapdet::freespace::*;
use trapdet::green::green_expansion;
use trapdet::oscillator::Vec3;
use trapdet::quad::{integrate, integrate_to_infinity, QuadOptions};
use trapdet::solver::{find_roots, solve_state, Parity, RootOptions, SystemSpec};
use trapdet::Error;

#[test]
fn yukawa_kernel() {
    let o = Vec3::zeros();
    let g = green_free(&o, &Vec3::new(0.0, 0.0, 1.0), -0.5).unwrap();
    assert!((g + (-1.0f64).exp() / (2.0 * PI)).abs() < 1e-15);
    assert!((green_free_reg_diag(-2.0).unwrap() - 1.0 / PI).abs() < 1e-15);
    assert!(matches!(green_free(&o, &Vec3::x(), 0.0), Err(Error::Domain(_))));
    assert!(matches!(green_free(&o, &o, -1.0), Err(Error::Domain(_))));
    // κ → ∞ kills the kernel at fixed distance
    assert!(green_free(&o, &Vec3::x(), -5000.0).unwrap().abs() < 1e-40);
}

#[test]
fn pole_coefficient_matches_trap() {
    let o = Vec3::zeros();
    for h in [1e-4, 1e-6] {
        let g = green_free(&o, &Vec3::new(h, 0.0, 0.0), -0.8).unwrap();
        assert!((h * g + 1.0 / (2.0 * PI)).abs() < 2.0 * h);
    }
    let trap = green_expansion(0.7, 0.4, 1.0).unwrap();
    assert!((trap.g1 + 1.0 / (2.0 * PI)).abs() < 1e-12);
}

/// ∫G(r, r′)(−½Δ − E)φ(r) d³r = −φ(r′) for φ = e^{−r²}, using spherical
/// coordinates about r′ so the 1/ρ singularity is integrable.
#[test]
fn weak_schrodinger_identity() {
    let e: f64 = -0.9;
    let kappa = (-2.0 * e).sqrt();
    let rp = Vec3::new(0.0, 0.0, 0.6);
    let phi = |r2: f64| (-r2).exp();
    let op_phi = |r2: f64| (3.0 - 2.0 * r2 - e) * (-r2).exp();
    let opts = QuadOptions::new(1e-13, 1e-11);
    let theta = |t: f64| {
        let (s, c) = t.sin_cos();
        let radial = |rho: f64| {
            let r2 = (rp + Vec3::new(s, 0.0, c) * rho).norm_squared();
            -(-kappa * rho).exp() / (2.0 * PI) * rho * op_phi(r2)
        };
        2.0 * PI * s * integrate_to_infinity(radial, 0.0, opts).value
    };
    let lhs = integrate(theta, 0.0, PI, opts).value;
    assert!((lhs + phi(rp.norm_squared())).abs() < 1e-4, "{lhs}");
}

#[test]
fn generic_matches_closed_form() {
    for a in [0.3, 0.7, 1.0, 2.5, -0.5, -1.5] {
        for d in [0.05, 0.2, 0.5, 1.0, 3.0] {
            let spec = SystemSpec::symmetric_pair(d, a).unwrap();
            let states = bound_states_free(&spec).unwrap();
            for parity in [Parity::Even, Parity::Odd] {
                let closed = symmetric_pair_kappa(d, a, parity).unwrap();
                let generic: Vec<_> = states.iter().filter(|s| s.parity == parity).collect();
                match closed {
                    None => assert!(generic.is_empty(), "a={a} d={d} {parity:?}"),
                    Some(k) => {
                        assert_eq!(generic.len(), 1);
                        assert!((generic[0].kappa - k).abs() < 1e-10, "a={a} d={d} {parity:?}");
                        assert!((generic[0].energy + 0.5 * k * k).abs() < 1e-12 * k * k);
                    }
                }
            }
            if let [first, second] = states.as_slice() {
                assert_eq!(first.parity, Parity::Even);
                assert!(first.energy <= second.energy);
            }
        }
    }
}

#[test]
fn attractive_even_branch_ends_at_threshold() {
    let a = -0.4;
    let d_t = threshold_half_separation(a, Parity::Even).unwrap().unwrap();
    assert!((2.0 * d_t - 0.4).abs() < 1e-8);
    assert!(threshold_half_separation(a, Parity::Odd).unwrap().is_none());
    let has_even = |d: f64| {
        bound_states_free(&SystemSpec::symmetric_pair(d, a).unwrap()).unwrap().iter().any(|s| s.parity == Parity::Even)
    };
    assert!(has_even(0.9 * d_t));
    assert!(!has_even(1.1 * d_t));
    let near = symmetric_pair_kappa(0.999 * d_t, a, Parity::Even).unwrap().unwrap();
    assert!(near < 1e-2);
}

#[test]
fn dimer_limit() {
    for a in [0.4, 1.0] {
        let spec = SystemSpec::symmetric_pair(15.0 * a, a).unwrap();
        let states = bound_states_free(&spec).unwrap();
        assert_eq!(states.len(), 2);
        for s in &states {
            assert!((s.energy + 0.5 / (a * a)).abs() < 1e-6 / (a * a));
        }
    }
}

#[test]
fn splitting_follows_overlap() {
    let a = 0.5;
    let split = |d: f64| {
        let e = symmetric_pair_kappa(d, a, Parity::Even).unwrap().unwrap();
        let o = symmetric_pair_kappa(d, a, Parity::Odd).unwrap().unwrap();
        e - o
    };
    // to leading order κ_e − κ_o = e^{−2d/a}/d
    for d in [2.0, 3.0, 4.0] {
        let lead = (-2.0 * d / a).exp() / d;
        assert!((split(d) / lead - 1.0).abs() < 0.05);
    }
}

#[test]
fn branches_stop_at_threshold() {
    let ds: Vec<f64> = (1..=40).map(|i| 0.01 * i as f64).collect();
    let branches = pair_branches(-0.4, &ds).unwrap();
    let even = &branches[0];
    assert_eq!(even.parity, Parity::Even);
    assert!(even.samples.iter().all(|s| s.d < 0.2 && s.energy < 0.0));
    assert!(branches[1].samples.is_empty());
    for w in even.samples.windows(2) {
        assert!(w[1].energy > w[0].energy);
    }
}

/// Trapped dimer minus free dimer grows like d². The trapped dimer energy is
/// the contact-weighted centroid of the even roots near the top-weight root.
#[test]
fn trap_lifts_dimer_quadratically() {
    let a = 1.0;
    let opts = RootOptions::default();
    let mut pts = Vec::new();
    for sep in [4.0, 5.0, 6.0, 7.0, 8.0] {
        let d: f64 = sep / 2.0;
        let spec = SystemSpec::symmetric_pair(d, a).unwrap();
        let free = symmetric_pair_kappa(d, a, Parity::Even).unwrap().unwrap();
        let roots = find_roots(&spec, -2.0, d * d / 2.0 + 3.0, &opts).unwrap();
        let weighted: Vec<(f64, f64)> = roots
            .roots
            .iter()
            .filter(|r| r.parity == Parity::Even && !r.near_pole)
            .map(|r| {
                let st = solve_state(&spec, r.energy, r.parity).unwrap();
                ((st.norm * st.amplitudes[0]).powi(2), r.energy)
            })
            .collect();
        let top = weighted.iter().fold((0.0, 0.0), |m, w| if w.0 > m.0 { *w } else { m }).1;
        let near: Vec<_> = weighted.iter().filter(|w| (w.1 - top).abs() < 1.0).collect();
        let centroid = near.iter().map(|w| w.0 * w.1).sum::<f64>() / near.iter().map(|w| w.0).sum::<f64>();
        pts.push((d * d, centroid + 0.5 * free * free));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r2 = sxy * sxy / (sxx * syy);
    assert!(sxy / sxx > 0.0 && r2 > 0.99, "slope {} R² {r2}", sxy / sxx);
    for w in pts.windows(2) {
        assert!(w[1].1 > w[0].1);
    }
}
