use nalgebra::{Rotation3, Unit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trapdet::green::*;
use trapdet::oscillator::{level, shell_values, Vec3};
use trapdet::solver::{green_matrix, norm_quadrature, Parity, SpectralState, SystemSpec};
use trapdet::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

#[test]
fn prolate_examples() {
    let c = prolate_coords(&v(0.0, 0.0, 1.0), &v(0.0, 0.0, 1.0));
    assert_eq!((c.xi, c.eta, c.sign_factor), (1.0, 1.0, 1.0));
    let c = prolate_coords(&v(0.0, 0.0, 1.0), &v(0.0, 0.0, -1.0));
    assert_eq!((c.xi, c.eta, c.sign_factor), (1.0, 1.0, -1.0));
    let c = prolate_coords(&v(0.0, 0.0, 2.0), &v(0.0, 0.0, 0.5));
    assert!((c.xi - 4.0).abs() < 1e-15 && (c.eta - 0.25).abs() < 1e-15);
    // orthogonal points take sign 0
    let c = prolate_coords(&v(1.0, 0.0, 0.0), &v(0.0, 0.0, 2.0));
    assert_eq!(c.sign_factor, 0.0);
    assert!(c.xi >= c.eta);
}

#[test]
fn lambda_examples() {
    assert!(rel(lambda_factor(0.5).unwrap(), -1.0 / (2.0 * std::f64::consts::PI)) < 1e-14);
    assert!(matches!(lambda_factor(1.5), Err(Error::EnergyPole { .. })));
    assert!(rel(lambda_factor(-0.5).unwrap(), -0.5 * std::f64::consts::PI.powf(-1.5)) < 1e-14);
}

#[test]
fn green_against_mpmath() {
    // 30-digit values from the closed form evaluated in mpmath
    let cases = [
        (v(0.1, 0.2, 0.7), v(-0.3, 0.5, -0.4), 0.9, -0.135886954377731477662),
        (v(0.1, 0.2, 0.7), v(-0.3, 0.5, -0.4), -2.3, -0.00835971795655392058643),
        (v(0.0, 0.0, 0.7), v(0.0, 0.0, -0.4), 0.9, -0.170109296048114630221),
        (v(1.5, -1.2, 2.0), v(-0.3, 0.5, -0.4), 5.9, -0.014791046162788613),
    ];
    for (r, rp, e, want) in cases {
        let g = green_ho(&r, &rp, e).unwrap();
        assert_eq!(g.branch, GreenBranch::FullFormula);
        assert!(rel(g.value, want) < 1e-12, "G = {}, want {want}", g.value);
    }
}

#[test]
fn collinear_example_matches_oracle() {
    let (r, rp) = (v(0.0, 0.0, 0.7), v(0.0, 0.0, -0.4));
    let g = green_ho(&r, &rp, 0.9).unwrap().value;
    let o = green_spectral_oracle(&r, &rp, 0.9, ORACLE_DEFAULT_NMAX).unwrap();
    assert!(rel(g, o.value) < 1e-6);
}

#[test]
fn antipodal_limit() {
    let r = v(0.0, 0.0, 1.3);
    let g = green_ho(&r, &-r, 0.9).unwrap();
    assert_eq!(g.branch, GreenBranch::AntipodalLimit);
    assert!(rel(g.value, -0.02003279491353601994575) < 1e-12);

    let r = v(0.0, 0.0, 1.0);
    let g = green_ho(&r, &-r, 0.9).unwrap().value;
    assert!(g.is_finite());
    let mut last = f64::INFINITY;
    for s in [1e-2, 1e-3, 1e-4, 1e-5] {
        let off = green_ho(&r, &v(0.0, 0.0, -1.0 + s), 0.9).unwrap().value;
        let err = (off - g).abs();
        assert!(err < last, "approach not monotone at s = {s}");
        last = err;
    }
    assert!(last < 1e-5);
}

#[test]
fn coincidence_expansion() {
    let e = 0.9;
    let exp = green_expansion(1.3, e, 1.0).unwrap();
    assert!(rel(exp.g0, 0.079129923436925170131) < 1e-10);
    assert!(rel(exp.g1, -1.0 / (2.0 * std::f64::consts::PI)) < 1e-12);

    let r = v(0.0, 0.0, 1.3);
    let dir = v(0.36, 0.48, 0.8);
    let mut errs = Vec::new();
    for dr in [1e-3, 1e-4, 1e-5] {
        let g = green_ho(&r, &(r + dir * dr), e).unwrap().value;
        errs.push((g - exp.g0 - exp.g1 / dr).abs());
    }
    // O(Δr)
    assert!(errs[1] < 0.2 * errs[0] && errs[2] < 0.2 * errs[1], "{errs:?}");

    // δ = 1e-4 along z: value within 1e-6 of the expansion
    let g = green_ho(&r, &(r + v(0.0, 0.0, 1e-4)), e).unwrap().value;
    assert!(rel(g, exp.g0 + exp.g1 / 1e-4) < 1e-6);
}

/// Fitting c₀ + g₁/Δr + cΔr to the ±Δr average at Δr = 1e-3, 1e-4, 1e-5
/// recovers g₀ and g₁. The two-point fit without the linear term is
/// biased by c·(Δr₁ + Δr₂), a few 1e-4 here.
#[test]
fn expansion_matches_fit() {
    for (d, e) in [(v(0.0, 0.0, 0.8), 0.3), (v(1.0, -0.5, 0.2), 2.7), (v(0.0, 2.0, 0.0), -1.6)] {
        let exp = green_expansion(d.norm(), e, 1.0).unwrap();
        let dir = v(0.0, 0.6, 0.8);
        let avg = |h: f64| {
            0.5 * (green_ho(&d, &(d + dir * h), e).unwrap().value + green_ho(&d, &(d - dir * h), e).unwrap().value)
        };
        let hs = [1e-3, 1e-4, 1e-5];
        let a = nalgebra::Matrix3::from_fn(|i, j| [1.0, 1.0 / hs[i], hs[i]][j]);
        let b = nalgebra::Vector3::new(avg(hs[0]), avg(hs[1]), avg(hs[2]));
        let x = a.lu().solve(&b).unwrap();
        assert!(rel(x[1], exp.g1) < 1e-4, "g1 {} vs {}", x[1], exp.g1);
        assert!((x[0] - exp.g0).abs() < 1e-4 * exp.g0.abs().max(1.0), "g0 {} vs {}", x[0], exp.g0);
    }
}

#[test]
fn pole_coefficient_is_direction_free() {
    let d = v(0.3, -0.8, 1.1);
    let dr = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut fitted = Vec::new();
    for _ in 0..8 {
        let n = v(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).normalize();
        let g = green_ho(&d, &(d + n * dr), 1.1).unwrap().value;
        fitted.push(g * dr);
    }
    for f in &fitted {
        assert!(rel(*f, -1.0 / (2.0 * std::f64::consts::PI)) < 1e-3);
    }
}

#[test]
fn regular_diagonal() {
    assert!(rel(green_reg_diag(&Vec3::zeros(), 0.9).unwrap(), -0.163583865409996661447) < 1e-12);
    // unitarity roots at the centre: G_r(0, E) = 0 at 1/2, 5/2, 9/2
    for e in [0.5, 2.5, 4.5] {
        let g = green_reg_diag(&Vec3::zeros(), e);
        match g {
            Ok(x) => assert!(x.abs() < 1e-12, "G_r(0, {e}) = {x}"),
            Err(_) => assert!(is_pole(e)),
        }
    }
    for (d, e) in [(v(0.0, 0.0, 6.0), 1.4), (v(0.0, 0.0, 0.0), -0.7), (v(0.5, 0.5, 0.5), 3.3)] {
        let g = green_reg_diag(&d, e).unwrap();
        let o = green_spectral_oracle_regular(&d, e, ORACLE_DEFAULT_NMAX).unwrap().value;
        assert!((g - o).abs() < 1e-6 * o.abs().max(1.0), "G_r({d:?}, {e}) = {g}, oracle {o}");
    }
}

#[test]
fn oracle_properties() {
    let (r, rp) = (v(0.2, -0.4, 0.9), v(-0.6, 0.1, 0.3));
    let a = green_spectral_oracle(&r, &rp, 0.7, 60).unwrap().value;
    let b = green_spectral_oracle(&rp, &r, 0.7, 60).unwrap().value;
    assert!(rel(a, b) < 1e-13);

    let mut diffs = Vec::new();
    for n in [10, 20, 40, 80] {
        let lo = green_spectral_oracle(&r, &rp, 0.7, n).unwrap().value;
        let hi = green_spectral_oracle(&r, &rp, 0.7, 2 * n).unwrap().value;
        diffs.push((hi - lo).abs());
    }
    assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");

    // r′ = −r: the sum over states carries (−1)^n
    let r = v(0.3, 0.2, 0.8);
    let o = green_spectral_oracle(&r, &-r, 0.4, 120).unwrap().value;
    let g = green_ho(&r, &-r, 0.4).unwrap().value;
    assert!(rel(o, g) < 1e-6);
}

#[test]
fn symmetric_in_arguments() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let r = v(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let rp = v(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let e = rng.gen_range(-4.0..8.0);
        if is_pole(e) {
            continue;
        }
        let a = green_ho(&r, &rp, e).unwrap().value;
        let b = green_ho(&rp, &r, e).unwrap().value;
        assert!(rel(a, b) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn rotation_invariant(
        r in prop::array::uniform3(-2.0f64..2.0),
        rp in prop::array::uniform3(-2.0f64..2.0),
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0f64..std::f64::consts::TAU,
        e in -4.0f64..7.0,
    ) {
        let (r, rp) = (v(r[0], r[1], r[2]), v(rp[0], rp[1], rp[2]));
        prop_assume!((r - rp).norm() > 1e-3 && (r + rp).norm() > 1e-3);
        prop_assume!((e - (e - 1.5).round() - 1.5).abs() > 1e-3);
        let axis = v(axis[0], axis[1], axis[2]);
        prop_assume!(axis.norm() > 1e-2);
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
        let a = green_ho(&r, &rp, e).unwrap().value;
        let b = green_ho(&(rot * r), &(rot * rp), e).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-3), "{} vs {}", a, b);
    }
}

/// (E − E_n)G → Σ_deg φ_n(r)φ_n(r′), read off at E_n ± ε.
#[test]
fn pole_residues() {
    let (r, rp) = (v(0.3, 0.1, 0.6), v(-0.2, 0.4, -0.5));
    for n in 0..4 {
        let vals = shell_values(n, &[r, rp]);
        let residue: f64 = vals[0].iter().zip(&vals[1]).map(|(a, b)| a * b).sum();
        for eps in [1e-5, -1e-5] {
            let e = level(n) + eps;
            let got = eps * green_ho(&r, &rp, e).unwrap().value;
            assert!((got - residue).abs() < 1e-4 * residue.abs().max(1e-3), "n={n} eps={eps}: {got} vs {residue}");
        }
    }
}

/// ∫G(d_i, r)G(d_j, r) d³r = −∂_E G(d_i, d_j), through the quadrature of
/// |Σ u_i G(d_i, ·)|² for three choices of u.
#[test]
fn energy_derivative_identity() {
    let spec = SystemSpec::asymmetric_pair(0.6, 1.0, 0.3).unwrap();
    let e = 0.8;
    let h = 1e-3;
    let dg = (green_matrix(&spec, e + h).unwrap() - green_matrix(&spec, e - h).unwrap()) / (2.0 * h);
    for u in [[1.0, 0.0], [0.0, 1.0], [0.6, 0.8]] {
        let state = SpectralState { energy: e, parity: Parity::None, amplitudes: u.to_vec(), k: vec![0.0; 2], norm: 1.0 };
        let integral = norm_quadrature(&state, &spec, 1e-6).unwrap();
        let bilinear = -(u[0] * u[0] * dg[(0, 0)] + 2.0 * u[0] * u[1] * dg[(0, 1)] + u[1] * u[1] * dg[(1, 1)]);
        assert!(rel(integral, bilinear) < 1e-4, "u = {u:?}: {integral} vs {bilinear}");
    }
}
