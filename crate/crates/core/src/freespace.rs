//! The impurities without the trap: Yukawa Green's function and the
//! negative-energy bound states it supports.
//!
//! G₀(r, r′; E) = −e^{−κ|r−r′|}/(2π|r−r′|) with E = −κ²/2. Its pole
//! coefficient is −1/(2π), the same as the trapped G, so the coupling
//! γ = 2πa carries over unchanged. The regular part at coincidence is κ/(2π).

use nalgebra::DMatrix as Mat;

use crate::error::{Error, Result};
use crate::oscillator::Vec3;
use crate::solver::{brent, sectors, sym_eigenvalues, Parity, Sector, SystemSpec};

pub fn green_free(r: &Vec3, rp: &Vec3, e: f64) -> Result<f64> {
    if !(e < 0.0) {
        return Err(Error::Domain(format!("free Green's function needs E < 0, got {e}")));
    }
    let dr = (r - rp).norm();
    if dr == 0.0 {
        return Err(Error::Domain("free Green's function at coincident points".into()));
    }
    let kappa = (-2.0 * e).sqrt();
    Ok(-(-kappa * dr).exp() / (2.0 * std::f64::consts::PI * dr))
}

pub fn green_free_reg_diag(e: f64) -> Result<f64> {
    if !(e < 0.0) {
        return Err(Error::Domain(format!("free Green's function needs E < 0, got {e}")));
    }
    Ok((-2.0 * e).sqrt() / (2.0 * std::f64::consts::PI))
}

/// G₀ − diag(1/γ) as a function of κ ≥ 0; κ = 0 is the threshold.
pub fn free_reduced_matrix(spec: &SystemSpec, kappa: f64) -> Mat<f64> {
    let pos = spec.positions();
    let imps = spec.impurities();
    let n = pos.len();
    let tau = 2.0 * std::f64::consts::PI;
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            kappa / tau - imps[i].inverse_coupling()
        } else {
            let r = (pos[i] - pos[j]).norm();
            -(-kappa * r).exp() / (tau * r)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeBoundState {
    pub energy: f64,
    pub kappa: f64,
    pub parity: Parity,
}

fn sector_eigs(spec: &SystemSpec, sector: &Sector, kappa: f64) -> Vec<f64> {
    sym_eigenvalues(&sector.project(&free_reduced_matrix(spec, kappa)))
}

/// Every bound state of the untrapped problem.
///
/// The eigenvalues of the reduced matrix rise with κ, and none is negative
/// once κ exceeds the Gershgorin bound, so the number of bound states in a
/// sector is the number of negative eigenvalues at threshold and each one
/// is a single monotone branch crossing zero.
pub fn bound_states_free(spec: &SystemSpec) -> Result<Vec<FreeBoundState>> {
    let pos = spec.positions();
    let imps = spec.impurities();
    let inv_a = imps
        .iter()
        .map(|imp| if imp.scattering_length.is_infinite() { 0.0 } else { 1.0 / imp.scattering_length })
        .fold(f64::NEG_INFINITY, f64::max);
    let row_sum = (0..pos.len())
        .map(|i| (0..pos.len()).filter(|&j| j != i).map(|j| 1.0 / (pos[i] - pos[j]).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let kappa_max = inv_a.max(0.0) + row_sum + 1.0;

    let mut out = Vec::new();
    for sector in sectors(spec) {
        if sector.dim() == 0 {
            continue;
        }
        let negative = sector_eigs(spec, &sector, 0.0).iter().filter(|&&x| x < 0.0).count();
        for k in 0..negative {
            let kappa = brent(|q| Ok(sector_eigs(spec, &sector, q)[k]), 0.0, kappa_max, 1e-14)?;
            out.push(FreeBoundState { energy: -0.5 * kappa * kappa, kappa, parity: sector.parity });
        }
    }
    out.sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.parity.cmp(&y.parity)));
    Ok(out)
}

/// κ from κ = 1/a ± e^{−2κd}/(2d), the two-impurity parity conditions
/// (+ even, − odd), for impurities at ±d ẑ.
pub fn symmetric_pair_kappa(d: f64, a: f64, parity: Parity) -> Result<Option<f64>> {
    let s = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
        Parity::None => return Err(Error::Config("pair parity must be even or odd".into())),
    };
    let f = |k: f64| -> Result<f64> { Ok(k - 1.0 / a - s * (-2.0 * k * d).exp() / (2.0 * d)) };
    let hi = 1.0 / a.abs() + 1.0 / (2.0 * d) + 1.0;
    if f(0.0)? >= 0.0 {
        return Ok(None);
    }
    brent(f, 0.0, hi, 1e-15).map(Some)
}

/// Half-separation at which a pair branch meets E = 0.
///
/// At κ = 0 the sector eigenvalue is −(1/(2π))(1/a ± 1/(2d)), which
/// vanishes at 2d = −a for the even branch (a < 0) and 2d = a for the odd
/// branch (a > 0). Solved numerically through the generic threshold
/// matrix so it doubles as a check of that path.
pub fn threshold_half_separation(a: f64, parity: Parity) -> Result<Option<f64>> {
    let exists = match parity {
        Parity::Even => a < 0.0,
        Parity::Odd => a > 0.0,
        Parity::None => return Err(Error::Config("pair parity must be even or odd".into())),
    };
    if !exists || !a.is_finite() {
        return Ok(None);
    }
    let f = |d: f64| -> Result<f64> {
        let spec = SystemSpec::symmetric_pair(d, a)?;
        let sector = sectors(&spec).into_iter().find(|s| s.parity == parity).expect("pair sectors");
        Ok(sector_eigs(&spec, &sector, 0.0)[0])
    };
    let lo = crate::solver::MIN_SEPARATION;
    let hi = 10.0 * a.abs();
    brent(f, lo, hi, 1e-15).map(Some)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSample {
    /// half-separation; impurities at ±d ẑ
    pub d: f64,
    pub energy: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundBranch {
    pub parity: Parity,
    pub samples: Vec<BranchSample>,
}

/// Even and odd free-space branches of a symmetric pair over the given
/// half-separations. Points where a branch has no bound state are skipped,
/// so a branch that reaches threshold simply stops.
pub fn pair_branches(a: f64, half_separations: &[f64]) -> Result<Vec<BoundBranch>> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for &d in half_separations {
        let spec = SystemSpec::symmetric_pair(d, a)?;
        for st in bound_states_free(&spec)? {
            let sample = BranchSample { d, energy: st.energy, kappa: st.kappa };
            match st.parity {
                Parity::Even => even.push(sample),
                _ => odd.push(sample),
            }
        }
    }
    Ok(vec![
        BoundBranch { parity: Parity::Even, samples: even },
        BoundBranch { parity: Parity::Odd, samples: odd },
    ])
}
