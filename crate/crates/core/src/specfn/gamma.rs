use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// True when `x` is a nonpositive integer.
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x * 0.5).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        (PI * (-1.0 - r)).sin()
    } else {
        (PI * r).sin()
    }
}

// ln Γ(x) for x >= 0.5
fn lanczos_ln(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Returns `(ln|Γ(x)|, sign Γ(x))`.
pub fn log_gamma(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() || is_gamma_pole(x) {
        return Err(Error::GammaPole(x));
    }
    if x >= 0.5 {
        return Ok((lanczos_ln(x), 1.0));
    }
    let s = sin_pi(x);
    let ln = PI.ln() - s.abs().ln() - lanczos_ln(1.0 - x);
    Ok((ln, s.signum()))
}

pub fn gamma(x: f64) -> Result<f64> {
    if is_gamma_pole(x) {
        return Err(Error::GammaPole(x));
    }
    if (0.5..=20.0).contains(&x) {
        // small positive integers come out exact
        if x == x.floor() {
            let mut p = 1.0;
            for k in 2..x as u64 {
                p *= k as f64;
            }
            return Ok(p);
        }
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        return Ok((2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc);
    }
    if x < 0.5 && x > -20.0 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    let (ln, sign) = log_gamma(x)?;
    Ok(sign * ln.exp())
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x > -20.0 && x <= 20.0 {
        return 1.0 / gamma(x).expect("pole excluded above");
    }
    match log_gamma(x) {
        Ok((ln, sign)) => sign * (-ln).exp(),
        Err(_) => 0.0,
    }
}
