use super::gamma::{is_gamma_pole, log_gamma};
use super::{Neumaier, SpecFnAccuracy};
use crate::error::{Error, Result};

pub(crate) struct Series {
    pub value: f64,
    /// Σ|term| / |Σ term|, the cancellation ratio
    pub cond: f64,
}

pub(crate) fn m_series(a: f64, b: f64, x: f64, max_terms: usize) -> Result<Series> {
    let mut sum = Neumaier::new(1.0);
    let mut abs = 1.0;
    let mut term = 1.0;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * x / ((b + kf) * (kf + 1.0));
        if term == 0.0 {
            return Ok(finish(sum.value(), abs));
        }
        sum.add(term);
        abs += term.abs();
        let next = ((a + kf + 1.0) * x / ((b + kf + 1.0) * (kf + 2.0))).abs();
        if kf + 1.0 > -a && next < 0.5 && term.abs() * next / (1.0 - next) <= 1e-17 * sum.value().abs() {
            return Ok(finish(sum.value(), abs));
        }
    }
    Err(Error::NonConvergence { function: "M", a, b, x })
}

fn finish(value: f64, abs: f64) -> Series {
    let cond = if value == 0.0 { f64::INFINITY } else { abs / value.abs() };
    Series { value, cond }
}

// Leading large-x behaviour; only the exponentially dominant branch is kept, so
// this returns None unless the dropped branch is negligible.
fn m_asymptotic(a: f64, b: f64, x: f64, acc: &SpecFnAccuracy) -> Option<f64> {
    if is_gamma_pole(a) || is_gamma_pole(b - a) {
        return None;
    }
    let (lg_b, s_b) = log_gamma(b).ok()?;
    let (lg_a, s_a) = log_gamma(a).ok()?;
    let (lg_ba, _) = log_gamma(b - a).ok()?;
    let ln_main = lg_b - lg_a + x + (a - b) * x.ln();
    let ln_other = lg_b - lg_ba - a * x.ln();
    if ln_other - ln_main > (acc.rel_tol * 1e-3).ln() {
        return None;
    }
    let mut sum = Neumaier::new(1.0);
    let mut term = 1.0f64;
    for k in 0..acc.max_terms.min(500) {
        let kf = k as f64;
        let next = term * (b - a + kf) * (1.0 - a + kf) / ((kf + 1.0) * x);
        if next.abs() > term.abs() && k > 2 {
            return None;
        }
        term = next;
        sum.add(term);
        if term.abs() <= 1e-17 * sum.value().abs() {
            return Some(s_b * s_a * ln_main.exp() * sum.value());
        }
    }
    None
}

/// Kummer's function M(a, b, x) = ₁F₁(a; b; x).
pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<f64> {
    kummer_m_with(a, b, x, &SpecFnAccuracy::default())
}

pub fn kummer_m_with(a: f64, b: f64, x: f64, acc: &SpecFnAccuracy) -> Result<f64> {
    if is_gamma_pole(b) {
        return Err(Error::Domain(format!("M undefined for b = {b}")));
    }
    if !(a.is_finite() && b.is_finite() && x.is_finite()) {
        return Err(Error::Domain(format!("M({a}, {b}, {x}) with non-finite input")));
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    let terminating = is_gamma_pole(a);
    if x > acc.large_x_switch && !terminating {
        if let Some(v) = m_asymptotic(a, b, x, acc) {
            return Ok(v);
        }
    }
    let direct = m_series(a, b, x, acc.max_terms);
    if let Ok(s) = &direct {
        if s.cond * f64::EPSILON < acc.rel_tol * 1e-3 || terminating || x.abs() > 700.0 {
            return Ok(s.value);
        }
    }
    // e^x M(b−a, b, −x)
    let flipped = m_series(b - a, b, -x, acc.max_terms);
    let best = match (direct, flipped) {
        (Ok(d), Ok(f)) => {
            if d.cond <= f.cond {
                d
            } else {
                Series { value: x.exp() * f.value, cond: f.cond }
            }
        }
        (Ok(d), Err(_)) => d,
        (Err(_), Ok(f)) => Series { value: x.exp() * f.value, cond: f.cond },
        (Err(e), Err(_)) => return Err(e),
    };
    Ok(best.value)
}

/// M(a+n, b+n, x) for n = 0..out.len().
pub fn kummer_m_seq(a: f64, b: f64, x: f64, out: &mut [f64]) -> Result<()> {
    let acc = SpecFnAccuracy::default();
    for (n, slot) in out.iter_mut().enumerate() {
        *slot = kummer_m_with(a + n as f64, b + n as f64, x, &acc)?;
    }
    Ok(())
}
