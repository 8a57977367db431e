//! Green's function of the isotropic 3D oscillator, (H₀ − E)G = −δ.
//!
//! G(r, r′; E) depends on the points only through the prolate coordinates
//! ξ ≥ η and sign(r·r′). With a = 3/4 − E/2 and a′ = a − 1/2,
//!
//! G = e^{−(ξ+η)/2} { Λ₁U₁(ξ)M₁(η) + [2ξη·aΛ₁·T₁ + s·2√(ξη)·a′Λ₂·T₂] / (ξ−η) }
//!
//! where T₁ = (2/3)U₁M₂ + U₂M₁ in the (a, 3/2) family and
//! T₂ = (2/3)ηU₁M₂ + ξU₂M₁ in the (a′, 3/2) family. The products aΛ₁ and
//! a′Λ₂ are formed as −½π^{−3/2}Γ(a+1) and −½π^{−3/2}Γ(a′+1), so nothing
//! blows up at E = 1/2 where Λ₂ alone has a pole that the prefactor cancels.

mod expansion;
mod oracle;

pub use expansion::{green_expansion, green_reg_diag, CoincidenceExpansion};
pub use oracle::{green_spectral_oracle, green_spectral_oracle_regular, OracleValue, ORACLE_DEFAULT_NMAX};

use crate::error::{Error, Result};
use crate::oscillator::Vec3;
use crate::specfn::{gamma, is_gamma_pole, kummer_m_seq, tricomi_u_seq};

const INV_2_PI_32: f64 = 0.089_793_561_062_583_28; // ½π^{−3/2}

/// Relative width of the ξ ≈ η band handled by limit formulas.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProlateCoords {
    pub xi: f64,
    pub eta: f64,
    pub sign_factor: f64,
}

pub fn prolate_coords(r: &Vec3, rp: &Vec3) -> ProlateCoords {
    let dot = r.dot(rp);
    let span = (r - rp).norm() * (r + rp).norm();
    let xi = 0.5 * (r.norm_squared() + rp.norm_squared() + span);
    // ξη = (r·r′)², which avoids the cancellation in the minus branch
    let eta = if xi > 0.0 { (dot * dot / xi).min(xi) } else { 0.0 };
    let sign_factor = if dot > 0.0 {
        1.0
    } else if dot < 0.0 {
        -1.0
    } else {
        0.0
    };
    ProlateCoords { xi, eta, sign_factor }
}

/// Λ(1, E) = −½π^{−3/2}Γ(3/4 − E/2).
pub fn lambda_factor(e: f64) -> Result<f64> {
    let a = 0.75 - 0.5 * e;
    if is_gamma_pole(a) {
        return Err(Error::EnergyPole { energy: e });
    }
    Ok(-INV_2_PI_32 * gamma(a)?)
}

/// True when E is one of the oscillator levels n + 3/2.
pub fn is_pole(e: f64) -> bool {
    is_gamma_pole(0.75 - 0.5 * e) || is_gamma_pole(1.25 - 0.5 * e)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Channel {
    pub a: f64,
    pub ap: f64,
    pub lam1: f64,
    /// aΛ₁
    pub c1: f64,
    /// a′Λ₂
    pub c2: f64,
}

impl Channel {
    pub fn new(e: f64) -> Result<Channel> {
        if is_pole(e) {
            return Err(Error::EnergyPole { energy: e });
        }
        let a = 0.75 - 0.5 * e;
        let ap = a - 0.5;
        Ok(Channel {
            a,
            ap,
            lam1: -INV_2_PI_32 * gamma(a)?,
            c1: -INV_2_PI_32 * gamma(a + 1.0)?,
            c2: -INV_2_PI_32 * gamma(ap + 1.0)?,
        })
    }
}

/// U(α+n, 3/2+n, x) and M(α+n, 3/2+n, y) for n = 0..3.
pub(crate) fn families(alpha: f64, x: f64, y: f64) -> Result<([f64; 3], [f64; 3])> {
    let mut u = [0.0; 3];
    let mut m = [0.0; 3];
    tricomi_u_seq(alpha, 1.5, x, &mut u)?;
    kummer_m_seq(alpha, 1.5, y, &mut m)?;
    Ok((u, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenBranch {
    FullFormula,
    CoincidenceExpansion,
    AntipodalLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEval {
    pub value: f64,
    pub branch: GreenBranch,
    pub energy: f64,
}

/// G(r, r′; E). Fails at the oscillator levels and at r = r′.
pub fn green_ho(r: &Vec3, rp: &Vec3, e: f64) -> Result<GreenEval> {
    let ch = Channel::new(e)?;
    let dr = (r - rp).norm();
    if dr == 0.0 {
        return Err(Error::Domain("G is singular at coincident points".into()));
    }
    let sum = (r + rp).norm();
    let pc = prolate_coords(r, rp);
    let band = DEGENERACY_THRESHOLD * pc.xi.max(1.0);
    if dr * sum < band {
        if dr <= sum {
            let ex = expansion::expansion_at(&ch, 0.5 * sum, pc.sign_factor)?;
            return Ok(GreenEval {
                value: ex.g0 + ex.g1 / dr,
                branch: GreenBranch::CoincidenceExpansion,
                energy: e,
            });
        }
        let x = 0.5 * (pc.xi + pc.eta);
        let value = (-x).exp() * expansion::limit_bracket(&ch, x, pc.sign_factor)?;
        return Ok(GreenEval { value, branch: GreenBranch::AntipodalLimit, energy: e });
    }
    let value = full_formula(&ch, pc)?;
    Ok(GreenEval { value, branch: GreenBranch::FullFormula, energy: e })
}

fn full_formula(ch: &Channel, pc: ProlateCoords) -> Result<f64> {
    let ProlateCoords { xi, eta, sign_factor: s } = pc;
    let (u, m) = families(ch.a, xi, eta)?;
    let t1 = 2.0 / 3.0 * u[0] * m[1] + u[1] * m[0];
    let mut bracket = ch.lam1 * u[0] * m[0];
    let mut odd = 0.0;
    if s != 0.0 {
        let (v, w) = families(ch.ap, xi, eta)?;
        let t2 = 2.0 / 3.0 * eta * v[0] * w[1] + xi * v[1] * w[0];
        odd = s * 2.0 * (xi * eta).sqrt() * ch.c2 * t2;
    }
    bracket += (2.0 * xi * eta * ch.c1 * t1 + odd) / (xi - eta);
    Ok((-0.5 * (xi + eta)).exp() * bracket)
}
