use super::gamma::{gamma, is_gamma_pole, log_gamma, rgamma};
use super::kummer::m_series;
use super::{Neumaier, SpecFnAccuracy};
use crate::error::{Error, Result};

/// Tricomi's function U(a, b, x) for x > 0.
pub fn tricomi_u(a: f64, b: f64, x: f64) -> Result<f64> {
    tricomi_u_with(a, b, x, &SpecFnAccuracy::default())
}

pub fn tricomi_u_with(a: f64, b: f64, x: f64, acc: &SpecFnAccuracy) -> Result<f64> {
    let mut out = [0.0];
    tricomi_u_seq_with(a, b, x, &mut out, acc)?;
    Ok(out[0])
}

/// U(a+n, b+n, x) for n = 0..out.len().
pub fn tricomi_u_seq(a: f64, b: f64, x: f64, out: &mut [f64]) -> Result<()> {
    tricomi_u_seq_with(a, b, x, out, &SpecFnAccuracy::default())
}

pub fn tricomi_u_seq_with(a: f64, b: f64, x: f64, out: &mut [f64], acc: &SpecFnAccuracy) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("U({a}, {b}, x) needs finite x > 0, got {x}")));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("U({a}, {b}, {x}) with non-finite parameter")));
    }
    let mut pending = false;
    for (n, slot) in out.iter_mut().enumerate() {
        let (an, bn) = (a + n as f64, b + n as f64);
        *slot = f64::NAN;
        if is_gamma_pole(an) {
            *slot = u_asymptotic(an, bn, x, usize::MAX).expect("terminating series");
        } else if x >= acc.large_x_switch {
            if let Some(v) = u_asymptotic(an, bn, x, acc.max_terms) {
                *slot = v;
            }
        } else if bn != bn.floor() {
            if let Some(v) = u_connection(an, bn, x, acc) {
                *slot = v;
            }
        }
        pending |= slot.is_nan();
    }
    if pending {
        let mut full = vec![0.0; out.len()];
        u_integral_seq(a, b, x, &mut full)?;
        for (slot, v) in out.iter_mut().zip(full) {
            if slot.is_nan() {
                *slot = v;
            }
        }
    }
    Ok(())
}

// x^{-a} Σ (a)_k (a-b+1)_k / k! (-x)^{-k}; exact when a is a nonpositive integer
fn u_asymptotic(a: f64, b: f64, x: f64, max_terms: usize) -> Option<f64> {
    let mut sum = Neumaier::new(1.0);
    let mut abs = 1.0;
    let mut term = 1.0f64;
    let growth_phase = 2.0 * (a.abs() + b.abs()) + 5.0;
    let mut k = 0usize;
    while k < max_terms.min(2000) {
        let kf = k as f64;
        let next = term * (a + kf) * (a - b + 1.0 + kf) / ((kf + 1.0) * -x);
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() && kf > growth_phase {
            return None;
        }
        term = next;
        sum.add(term);
        abs += term.abs();
        if term.abs() <= 1e-17 * sum.value().abs() {
            break;
        }
        k += 1;
    }
    if k >= max_terms.min(2000) {
        return None;
    }
    let v = sum.value();
    if abs > 1e3 * v.abs() {
        return None;
    }
    Some(x.powf(-a) * v)
}

fn u_connection(a: f64, b: f64, x: f64, acc: &SpecFnAccuracy) -> Option<f64> {
    let m1 = m_series(a, b, x, acc.max_terms).ok()?;
    let m2 = m_series(a - b + 1.0, 2.0 - b, x, acc.max_terms).ok()?;
    let t1 = gamma(1.0 - b).ok()? * rgamma(a - b + 1.0) * m1.value;
    let t2 = gamma(b - 1.0).ok()? * rgamma(a) * x.powf(1.0 - b) * m2.value;
    let v = t1 + t2;
    let err = 4.0 * f64::EPSILON * (t1.abs() * m1.cond + t2.abs() * m2.cond);
    if v != 0.0 && err <= 1e-13 * v.abs() {
        Some(v)
    } else {
        None
    }
}

fn softplus(u: f64) -> f64 {
    if u > 35.0 {
        u
    } else {
        u.exp().ln_1p()
    }
}

fn sigmoid(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

// peak of -x e^u + alpha u + c ln(1+e^u)
fn log_peak(x: f64, alpha: f64, c: f64) -> f64 {
    let dl = |u: f64| -x * u.exp() + alpha + c * sigmoid(u);
    let mut u = (alpha / x).ln();
    let (mut lo, mut hi) = (u - 1.0, u + 1.0);
    while dl(lo) < 0.0 {
        lo -= 2.0 * (u - lo);
    }
    while dl(hi) > 0.0 {
        hi += 2.0 * (hi - u);
    }
    for _ in 0..100 {
        let f = dl(u);
        if f > 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let s = sigmoid(u);
        let df = -x * u.exp() + c * s * (1.0 - s);
        let mut next = u - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() < 1e-13 * (1.0 + u.abs()) {
            return next;
        }
        u = next;
    }
    u
}

/// Integral representation at a shifted parameter a0 >= 1 followed by
/// downward recurrence in a.
pub(crate) fn u_integral_seq(a: f64, b: f64, x: f64, out: &mut [f64]) -> Result<()> {
    let count = out.len();
    let m = if a < 1.0 { (1.0 - a).ceil() as usize } else { 0 };
    let a0 = a + m as f64;
    let c = b - a0 - 1.0;

    let base = |u: f64| -x * u.exp() + a0 * u + c * softplus(u);
    let top = a0 + count as f64;
    let u_pk = log_peak(x, a0, c);
    let u_pk_top = log_peak(x, top, c);
    let l_pk = base(u_pk);
    let curv = |u: f64, _alpha: f64| {
        let s = sigmoid(u);
        x * u.exp() - c * s * (1.0 - s)
    };
    let w = 1.0 / curv(u_pk_top, top).max(curv(u_pk, a0)).max(1e-300).sqrt();
    let h = (w / 3.0).min(0.1);

    // accumulators: [n] = t^n, [count + n] = t^{n+1}/(1+t)
    let mut sums = vec![Neumaier::new(0.0); 2 * count];
    let add_node = |u: f64, sums: &mut [Neumaier]| -> bool {
        let lb = base(u) - l_pk;
        let sp = softplus(u);
        let mut negligible = true;
        for n in 0..count {
            let nf = n as f64;
            let t0 = (lb + nf * u).exp();
            let t1 = (lb + (nf + 1.0) * u - sp).exp();
            sums[n].add(t0);
            sums[count + n].add(t1);
            negligible &= t0 <= 1e-18 * sums[n].value() && t1 <= 1e-18 * sums[count + n].value();
        }
        negligible
    };
    add_node(u_pk, &mut sums);
    let mut k = 1usize;
    loop {
        let u = u_pk - k as f64 * h;
        if add_node(u, &mut sums) || k > 200_000 {
            break;
        }
        k += 1;
    }
    let mut k = 1usize;
    loop {
        let u = u_pk + k as f64 * h;
        if (add_node(u, &mut sums) && u > u_pk_top) || k > 200_000 {
            break;
        }
        k += 1;
    }

    for n in 0..count {
        let nf = n as f64;
        let bn = b + nf;
        let mut alpha = a0 + nf;
        let (lg0, _) = log_gamma(alpha)?;
        let (lg1, _) = log_gamma(alpha + 1.0)?;
        let mut hi = h * sums[count + n].value() * (l_pk - lg1).exp();
        let mut cur = h * sums[n].value() * (l_pk - lg0).exp();
        for _ in 0..m {
            let lo = -(bn - 2.0 * alpha - x) * cur - alpha * (alpha - bn + 1.0) * hi;
            hi = cur;
            cur = lo;
            alpha -= 1.0;
        }
        if !cur.is_finite() {
            return Err(Error::NonConvergence { function: "U", a: a + nf, b: bn, x });
        }
        out[n] = cur;
    }
    Ok(())
}
