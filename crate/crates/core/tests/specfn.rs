use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trapdet::quad::{integrate_to_infinity, QuadOptions};
use trapdet::specfn::*;
use trapdet::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn kummer_examples() {
    assert_eq!(kummer_m(0.3, 1.5, 0.0).unwrap(), 1.0);
    assert!(rel(kummer_m(1.5, 1.5, 2.0).unwrap(), 2f64.exp()) < 1e-14);
    // mpmath, 40 digits
    assert!(rel(kummer_m(-0.25, 1.5, 3.7).unwrap(), -0.39355768474806317453) < 1e-12);
}

#[test]
fn kummer_against_high_precision() {
    let cases = [
        (-3.3, 1.5, 12.0, -20.788929040947634104),
        (2.25, 2.5, 45.0, 1.5715850429169828973e19),
        (-7.75, 3.5, 20.0, 2.5718684140521636293),
        (0.1, 1.5, 0.01, 1.0006681362717260603),
        (-10.25, 1.5, 25.0, -9852.5477195951161719),
    ];
    for (a, b, x, want) in cases {
        let got = kummer_m(a, b, x).unwrap();
        assert!(rel(got, want) < 1e-10, "M({a}, {b}, {x}) = {got}, want {want}");
    }
}

#[test]
fn tricomi_examples() {
    // integral representation, by quadrature
    let (a, b, x) = (0.75, 1.5, 1.0);
    let integral = integrate_to_infinity(
        |t| (-x * t).exp() * t.powf(a - 1.0) * (1.0 + t).powf(b - a - 1.0),
        0.0,
        QuadOptions::new(0.0, 1e-12),
    )
    .value
        / gamma(a).unwrap();
    let u = tricomi_u(a, b, x).unwrap();
    assert!(rel(u, integral) < 1e-9, "{u} vs {integral}");
    assert!(rel(u, 0.89327795513936725123) < 1e-12);

    // U(a, a+1, x) = x^{-a} exactly, so the leading term is the whole story
    let big = tricomi_u(0.5, 1.5, 40.0).unwrap();
    assert!(rel(big, 40f64.powf(-0.5)) < 0.02);
    assert!(rel(big, 40f64.powf(-0.5)) < 1e-12);

    assert!((tricomi_u(-1.0, 1.5, 2.0).unwrap() - 0.5).abs() < 1e-14);
}

#[test]
fn tricomi_against_high_precision() {
    let cases = [
        (-3.3, 1.5, 12.0, 791.23102481463710901),
        (2.25, 2.5, 45.0, 1.8393193658997470598e-4),
        (-7.75, 3.5, 20.0, -22826171.205897279865),
        (0.1, 1.5, 0.01, 2.8009626647212260611),
        (-10.25, 1.5, 25.0, -1.4484838476351332121e11),
        (-5.6, 2.5, 3.3, 264.14683281453551323),
    ];
    for (a, b, x, want) in cases {
        let got = tricomi_u(a, b, x).unwrap();
        assert!(rel(got, want) < 1e-10, "U({a}, {b}, {x}) = {got}, want {want}");
    }
}

#[test]
fn tricomi_rejects_origin() {
    assert!(matches!(tricomi_u(0.3, 1.5, 0.0), Err(Error::Domain(_))));
}

#[test]
fn shorthand_unfolds() {
    assert_eq!(f_shorthand(FKind::M, 1, 0.37, 0.0).unwrap(), 1.0);
    assert_eq!(f_shorthand(FKind::U, 1, 0.5, 1.0).unwrap(), tricomi_u(0.5, 1.5, 1.0).unwrap());
    // a = 7/4 − E/2 = 1.25 at n = 2, E = 1
    assert_eq!(f_shorthand(FKind::M, 2, 1.0, 0.3).unwrap(), kummer_m(1.25, 2.5, 0.3).unwrap());
    assert_eq!(f_shorthand(FKind::M, 2, 2.0, 0.3).unwrap(), kummer_m(0.75, 2.5, 0.3).unwrap());
    assert!(rel(f_shorthand(FKind::M, 2, 2.0, 0.3).unwrap(), 1.0971845553281171179) < 1e-13);
}

#[test]
fn gamma_examples() {
    assert!(rel(gamma(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-14);
    assert_eq!(gamma(5.0).unwrap(), 24.0);
    assert!(rel(gamma(-1.5).unwrap(), 4.0 * std::f64::consts::PI.sqrt() / 3.0) < 1e-13);
    let (lg, sign) = log_gamma(-1.5).unwrap();
    assert_eq!(sign, 1.0);
    assert!(rel(lg, (4.0 * std::f64::consts::PI.sqrt() / 3.0).ln()) < 1e-13);
    let (_, sign) = log_gamma(-0.5).unwrap();
    assert_eq!(sign, -1.0);
}

#[test]
fn gamma_poles_are_reported() {
    for x in [0.0, -1.0, -7.0] {
        assert!(is_gamma_pole(x));
        assert!(matches!(gamma(x), Err(Error::GammaPole(_))));
        assert!(log_gamma(x).is_err());
        assert_eq!(rgamma(x), 0.0);
    }
}

#[test]
fn gamma_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let x: f64 = rng.gen_range(-15.0..15.0);
        if is_gamma_pole(x) || is_gamma_pole(x + 1.0) || (x - x.round()).abs() < 1e-3 {
            continue;
        }
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
    }
}

/// (b−a)M(a−1) + (2a−b+x)M(a) − aM(a+1) = 0, scaled by the largest term.
#[test]
fn kummer_contiguous_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.gen_range(1..=3);
        let b = n as f64 + 0.5;
        let a = (4.0 * n as f64 - 1.0) / 4.0 - rng.gen_range(-10.0..15.0) / 2.0;
        let x = rng.gen_range(0.0..40.0);
        let (m0, m1, m2) = (kummer_m(a - 1.0, b, x).unwrap(), kummer_m(a, b, x).unwrap(), kummer_m(a + 1.0, b, x).unwrap());
        let terms = [(b - a) * m0, (2.0 * a - b + x) * m1, -a * m2];
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let sum: f64 = terms.iter().sum();
        assert!(sum.abs() <= 1e-9 * scale, "a={a} b={b} x={x}: residual {sum:e} of {scale:e}");
    }
}

#[test]
fn derivative_relations() {
    let h = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let b = [1.5, 2.5][rng.gen_range(0..2)];
        let a = rng.gen_range(-6.0..4.0);
        let x = rng.gen_range(0.5..30.0);
        let dm = (kummer_m(a, b, x + h).unwrap() - kummer_m(a, b, x - h).unwrap()) / (2.0 * h);
        let want = a / b * kummer_m(a + 1.0, b + 1.0, x).unwrap();
        let scale = want.abs().max(kummer_m(a, b, x).unwrap().abs());
        assert!((dm - want).abs() <= 1e-6 * scale, "M' at a={a} b={b} x={x}");

        let du = (tricomi_u(a, b, x + h).unwrap() - tricomi_u(a, b, x - h).unwrap()) / (2.0 * h);
        let want = -a * tricomi_u(a + 1.0, b + 1.0, x).unwrap();
        let scale = want.abs().max(tricomi_u(a, b, x).unwrap().abs());
        assert!((du - want).abs() <= 1e-6 * scale, "U' at a={a} b={b} x={x}");
    }
}

/// U against its integral representation, for a > 0 where it converges.
#[test]
fn tricomi_matches_quadrature_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = QuadOptions::new(0.0, 1e-13);
    for _ in 0..40 {
        let b = [1.5, 2.5, 3.5][rng.gen_range(0..3)];
        let a = rng.gen_range(0.2..5.0);
        let x = rng.gen_range(0.1..50.0);
        let integral = integrate_to_infinity(
            |t| {
                if t == 0.0 {
                    return 0.0;
                }
                ((a - 1.0) * t.ln() + (b - a - 1.0) * t.ln_1p() - x * t).exp()
            },
            0.0,
            opts,
        )
        .value
            / gamma(a).unwrap();
        let u = tricomi_u(a, b, x).unwrap();
        assert!(rel(u, integral) < 1e-8, "U({a}, {b}, {x}) = {u}, quadrature {integral}");
    }
}

#[test]
fn sequences_match_single_calls() {
    let mut out = [0.0; 3];
    tricomi_u_seq(-2.3, 1.5, 7.0, &mut out).unwrap();
    for (k, v) in out.iter().enumerate() {
        assert!(rel(*v, tricomi_u(-2.3 + k as f64, 1.5 + k as f64, 7.0).unwrap()) < 1e-12);
    }
    kummer_m_seq(-2.3, 1.5, 7.0, &mut out).unwrap();
    for (k, v) in out.iter().enumerate() {
        assert!(rel(*v, kummer_m(-2.3 + k as f64, 1.5 + k as f64, 7.0).unwrap()) < 1e-12);
    }
}
