//! Behaviour of G on the line ξ = η.
//!
//! Writing the bracket of the closed form as Λ₁U₁M₁ + N(ξ,η)/(ξ−η) with
//! N(x,x) = 0, the value at ξ = η = x is Λ₁U₁M₁ + (∂_ξN − ∂_ηN)/2, which
//! after the derivative relations U′ = −aU(a+1,b+1), M′ = (a/b)M(a+1,b+1)
//! only needs the n = 1..3 families. Near r = r′ the same quantity gives
//! the regular part g⁰ (with s = +1); at r′ = −r it gives G itself (s = −1).

use std::f64::consts::PI;

use super::{families, Channel};
use crate::error::Result;
use crate::oscillator::Vec3;
use crate::specfn::rgamma;

/// G(r, r′) ≈ g0 + g1/|r − r′| around the midpoint of magnitude `center_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceExpansion {
    pub g0: f64,
    pub g1: f64,
    pub center_r: f64,
}

// below this x the bracket loses ~x^{-1/2} to cancellation; closed forms take over
const SMALL_X: f64 = 1e-10;

/// The ξ = η = x bracket, so that G = e^{−x}·bracket.
pub(crate) fn limit_bracket(ch: &Channel, x: f64, s: f64) -> Result<f64> {
    let (a, ap) = (ch.a, ch.ap);
    let (u, m) = families(a, x, x)?;
    let d1 = (-(2.0 * a / 3.0) * u[1] * m[1] - (a + 1.0) * u[2] * m[0])
        - (4.0 * (a + 1.0) / 15.0 * u[0] * m[2] + (2.0 * a / 3.0) * u[1] * m[1]);
    let mut value = ch.lam1 * u[0] * m[0] + ch.c1 * x * x * d1;
    if s != 0.0 {
        let (v, w) = families(ap, x, x)?;
        let d2 = (-(2.0 * ap / 3.0) * x * v[1] * w[1] + v[1] * w[0] - (ap + 1.0) * x * v[2] * w[0])
            - (2.0 / 3.0 * v[0] * w[1]
                + 4.0 * (ap + 1.0) / 15.0 * x * v[0] * w[2]
                + (2.0 * ap / 3.0) * x * v[1] * w[1]);
        value += s * ch.c2 * x * d2;
    }
    Ok(value)
}

pub(crate) fn expansion_at(ch: &Channel, center_r: f64, s: f64) -> Result<CoincidenceExpansion> {
    let x = center_r * center_r;
    if x < SMALL_X && s >= 0.0 {
        // G(0, r′) = e^{−ρ²/2}Λ₁U(a, 3/2, ρ²) expanded at ρ → 0
        return Ok(CoincidenceExpansion {
            g0: ch.lam1 * PI.sqrt() * rgamma(ch.a - 0.5) * -2.0,
            g1: -0.5 / PI,
            center_r,
        });
    }
    let g0 = (-x).exp() * limit_bracket(ch, x, s)?;
    let (u, m) = families(ch.a, x, x)?;
    let t1 = 2.0 / 3.0 * u[0] * m[1] + u[1] * m[0];
    let mut n0 = 2.0 * x * x * ch.c1 * t1;
    if s != 0.0 {
        let (v, w) = families(ch.ap, x, x)?;
        let t2 = x * (2.0 / 3.0 * v[0] * w[1] + v[1] * w[0]);
        n0 += s * 2.0 * x * ch.c2 * t2;
    }
    let g1 = (-x).exp() * n0 / (2.0 * center_r);
    Ok(CoincidenceExpansion { g0, g1, center_r })
}

/// g⁰ and g¹ at midpoint radius R with the given sign(r·r′).
pub fn green_expansion(center_r: f64, e: f64, sign_factor: f64) -> Result<CoincidenceExpansion> {
    let ch = Channel::new(e)?;
    expansion_at(&ch, center_r, sign_factor)
}

/// Regular part of G at r = r′ = d; the diagonal entry of D_N.
pub fn green_reg_diag(d: &Vec3, e: f64) -> Result<f64> {
    Ok(green_expansion(d.norm(), e, 1.0)?.g0)
}
