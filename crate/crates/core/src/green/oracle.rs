//! Brute-force eigenbasis sum Σ φ_n(r)φ_n(r′)/(E − E_n), used as a test oracle.
//!
//! The bare sum converges slowly, so the first K terms of the expansion of
//! 1/(E − E_n) about a reference energy E₀ < E are summed in closed form
//! through the Mehler kernel; the shells then enter with an extra factor
//! ((E₀−E)/(E₀−E_n))^K.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oscillator::{hermite_functions, level, Vec3};
use crate::quad::{integrate_breaks, QuadOptions};

pub const ORACLE_DEFAULT_NMAX: usize = 120;
const SUBTRACTIONS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    /// size of the shell contributions between n_max/2 and n_max
    pub truncation: f64,
}

// ln(sinh t / t)
fn ln_sinhc(t: f64) -> f64 {
    if t < 1e-2 {
        let t2 = t * t;
        t2 / 6.0 - t2 * t2 / 180.0 + t2 * t2 * t2 / 2835.0
    } else {
        (-(-2.0 * t).exp_m1() / (2.0 * t)).ln() + t
    }
}

// (2πt)^{3/2} e^{E₀t} K(r, r′, t)
fn scaled_mehler(t: f64, e0: f64, minus2: f64, plus2: f64) -> f64 {
    let th = (0.5 * t).tanh();
    let mut expo = e0 * t - 1.5 * ln_sinhc(t) - 0.25 * plus2 * th;
    if minus2 > 0.0 {
        expo -= 0.25 * minus2 / th;
    }
    expo.exp()
}

fn shell_sums(r: &Vec3, rp: &Vec3, n_max: usize) -> Vec<f64> {
    let axis: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            let a = hermite_functions(r[i], n_max);
            let b = hermite_functions(rp[i], n_max);
            a.iter().zip(&b).map(|(x, y)| x * y).collect()
        })
        .collect();
    let conv = |p: &[f64], q: &[f64]| -> Vec<f64> {
        (0..=n_max).map(|n| (0..=n).map(|i| p[i] * q[n - i]).sum()).collect()
    };
    conv(&conv(&axis[0], &axis[1]), &axis[2])
}

fn evaluate(r: &Vec3, rp: &Vec3, e: f64, n_max: usize, regular: bool) -> Result<OracleValue> {
    for n in 0..=n_max {
        if e == level(n) {
            return Err(Error::EnergyPole { energy: e });
        }
    }
    let e0 = e.min(0.0) - 6.0;
    let minus2 = (r - rp).norm_squared();
    let plus2 = (r + rp).norm_squared();
    let t_max = 60.0 / (1.5 - e0);
    let opts = QuadOptions { abs_tol: 1e-16, rel_tol: 1e-14, max_intervals: 4000 };

    let mut head = 0.0;
    let mut factorial = 1.0;
    for k in 0..SUBTRACTIONS {
        if k > 0 {
            factorial *= k as f64;
        }
        let kf = k as i32;
        let integrand = |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let t = u * u;
            let pref = (2.0 * PI * t).powf(-1.5);
            let body = if regular && k == 0 {
                let th = (0.5 * t).tanh();
                (e0 * t - 1.5 * ln_sinhc(t) - 0.25 * plus2 * th).exp_m1()
            } else {
                scaled_mehler(t, e0, minus2, plus2)
            };
            2.0 * u * t.powi(kf) * pref * body
        };
        let mut breaks = vec![0.0];
        let peak = minus2.sqrt();
        if peak > 0.0 && peak < t_max.sqrt() {
            breaks.push(0.5 * peak);
            breaks.push(peak);
            breaks.push(2.0 * peak);
        }
        breaks.push(t_max.sqrt());
        breaks.retain(|&b| b <= t_max.sqrt());
        breaks.dedup();
        let mut q = integrate_breaks(integrand, &breaks, opts).value;
        if regular && k == 0 {
            // the subtracted free kernel does not decay; add its tail beyond t_max
            q -= 2.0 * (2.0 * PI).powf(-1.5) / t_max.sqrt();
        }
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        head += (e0 - e).powi(kf) * sign * q / factorial;
    }

    let c = shell_sums(r, rp, n_max);
    let tail_term = |n: usize| {
        let en = level(n);
        c[n] * ((e0 - e) / (e0 - en)).powi(SUBTRACTIONS as i32) / (e - en)
    };
    let half: f64 = (0..=n_max / 2).map(tail_term).sum();
    let full: f64 = half + (n_max / 2 + 1..=n_max).map(tail_term).sum::<f64>();
    Ok(OracleValue { value: head + full, truncation: (full - half).abs() })
}

/// Spectral-sum value of G(r, r′; E) for r ≠ r′.
pub fn green_spectral_oracle(r: &Vec3, rp: &Vec3, e: f64, n_max: usize) -> Result<OracleValue> {
    if r == rp {
        return Err(Error::Domain("oracle needs distinct points; use the regular variant".into()));
    }
    evaluate(r, rp, e, n_max, false)
}

/// Spectral-sum value of the regular part of G at r = r′ = d.
pub fn green_spectral_oracle_regular(d: &Vec3, e: f64, n_max: usize) -> Result<OracleValue> {
    evaluate(d, d, e, n_max, true)
}

