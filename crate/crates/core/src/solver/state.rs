use nalgebra::DMatrix as Mat;

use super::matrix::{green_matrix, reduced_matrix, sectors, Sector};
use super::system::{Parity, SystemSpec};
use crate::error::{Error, Result};
use crate::green::green_ho;
use crate::oscillator::{level, shell_values, Vec3};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};

/// A bound eigenstate Ψ(r) = norm · Σ_i u_i G(d_i, r; E).
///
/// `amplitudes` holds u normalised to unit length with its largest entry
/// positive; `k` is u/γ, the coefficients multiplying γ_i G. At unitarity
/// k vanishes and only u carries information.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub energy: f64,
    pub parity: Parity,
    pub amplitudes: Vec<f64>,
    pub k: Vec<f64>,
    pub norm: f64,
}

/// Null vectors closer than this (relative to the largest eigenvalue of the
/// sector matrix) to zero count as a second zero mode.
const SECOND_NULL_TOL: f64 = 1e-7;

fn sector_for(spec: &SystemSpec, parity: Parity) -> Result<Sector> {
    sectors(spec)
        .into_iter()
        .find(|s| s.parity == parity)
        .ok_or_else(|| Error::Config(format!("no {} sector for this configuration", parity.as_str())))
}

fn canonical(mut u: Vec<f64>) -> Vec<f64> {
    let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let big = u.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let s = if big < 0.0 { -1.0 / n } else { 1.0 / n };
    for x in &mut u {
        *x *= s;
    }
    u
}

/// Null vector of D̃(E) in the given sector, then its normalisation.
pub fn solve_state(spec: &SystemSpec, energy: f64, parity: Parity) -> Result<SpectralState> {
    let sector = sector_for(spec, parity)?;
    if sector.dim() == 0 {
        return Err(Error::Config(format!("the {} sector is empty", parity.as_str())));
    }
    let d = reduced_matrix(spec, energy)?;
    let eig = sector.project(&d).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].abs().total_cmp(&eig.eigenvalues[j].abs()));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if order.len() > 1 && eig.eigenvalues[order[1]].abs() <= SECOND_NULL_TOL * scale {
        let directions = order[..2]
            .iter()
            .map(|&c| {
                let v = &sector.basis * eig.eigenvectors.column(c);
                canonical(v.iter().copied().collect())
            })
            .collect();
        return Err(Error::Degenerate { energy, directions });
    }
    let v = &sector.basis * eig.eigenvectors.column(order[0]);
    let u = canonical(v.iter().copied().collect());
    let norm = normalization(spec, energy, &u)?;
    let k = u
        .iter()
        .zip(spec.impurities())
        .map(|(x, imp)| x * imp.inverse_coupling())
        .collect();
    Ok(SpectralState { energy, parity, amplitudes: u, k, norm })
}

/// 1/‖Σ u_i G(d_i, ·)‖ from ∫|Σ u_i G|² = −uᵀ ∂_E G u.
///
/// The two oscillator levels bracketing E are removed analytically before
/// differencing; what is left is smooth on the scale of the level spacing.
pub fn normalization(spec: &SystemSpec, energy: f64, u: &[f64]) -> Result<f64> {
    let pos = spec.positions();
    let below = (energy - 1.5).floor();
    let mut poles = Vec::new();
    for n in [below, below + 1.0] {
        if n < 0.0 {
            continue;
        }
        let n = n as usize;
        let en = level(n);
        if (energy - en).abs() < 1e-9 * energy.abs().max(1.0) {
            return Err(Error::EnergyPole { energy });
        }
        let proj: f64 = {
            let values = shell_values(n, &pos);
            let states = values[0].len();
            (0..states).map(|q| {
                let c: f64 = u.iter().zip(&values).map(|(ui, row)| ui * row[q]).sum();
                c * c
            }).sum()
        };
        poles.push((en, proj));
    }
    let h = 1e-3 * energy.abs().max(1.0);
    let uv = Mat::from_column_slice(u.len(), 1, u);
    let smooth = |e: f64| -> Result<f64> {
        let g = green_matrix(spec, e)?;
        let pole_part: f64 = poles.iter().map(|(en, p)| p / (e - en)).sum();
        Ok((uv.transpose() * g * &uv)[(0, 0)] - pole_part)
    };
    let deriv = (smooth(energy - 2.0 * h)? - 8.0 * smooth(energy - h)? + 8.0 * smooth(energy + h)?
        - smooth(energy + 2.0 * h)?)
        / (12.0 * h);
    let pole_deriv: f64 = poles.iter().map(|(en, p)| -p / (energy - en).powi(2)).sum();
    let integral = -(deriv + pole_deriv);
    if !(integral > 0.0) {
        return Err(Error::Solver(format!("non-positive norm integral {integral} at E = {energy}")));
    }
    Ok(1.0 / integral.sqrt())
}

impl SpectralState {
    /// Ψ(r). Undefined exactly on an impurity.
    pub fn wavefunction(&self, spec: &SystemSpec, r: &Vec3) -> Result<f64> {
        let mut psi = 0.0;
        for (u, imp) in self.amplitudes.iter().zip(spec.impurities()) {
            psi += u * green_ho(&imp.position, r, self.energy)?.value;
        }
        Ok(self.norm * psi)
    }

    /// Fits −2π|s|Ψ(d_i + s n̂) = A(1 − |s|/a) + O(s²) after averaging ±s,
    /// returning (A, 1/a). A should equal norm·u_i.
    pub fn contact_fit(&self, spec: &SystemSpec, i: usize, rho: f64) -> Result<(f64, f64)> {
        let d = spec.impurities()[i].position;
        let dir = Vec3::new(0.36, 0.48, 0.8);
        let h = |s: f64| -> Result<f64> {
            let psi = |t: f64| self.wavefunction(spec, &(d + dir * t));
            Ok(-std::f64::consts::PI * s * (psi(s)? + psi(-s)?))
        };
        let (h1, h2, h3) = (h(rho)?, h(2.0 * rho)?, h(3.0 * rho)?);
        let amp = 3.0 * h1 - 3.0 * h2 + h3;
        let slope = (-2.5 * h1 + 4.0 * h2 - 1.5 * h3) / rho;
        Ok((amp, -slope / amp))
    }
}

/// ∫|Ψ|² d³r by direct quadrature, for configurations with every impurity
/// on the z-axis. Each impurity gets spherical coordinates of its own,
/// weighted by a partition of unity that vanishes quadratically at the
/// other impurities, so every piece has a bounded integrand.
pub fn norm_quadrature(state: &SpectralState, spec: &SystemSpec, rel_tol: f64) -> Result<f64> {
    let pos = spec.positions();
    if pos.iter().any(|p| p.x != 0.0 || p.y != 0.0) {
        return Err(Error::Config("quadrature check needs impurities on the z-axis".into()));
    }
    let weight = |i: usize, r: &Vec3| -> f64 {
        let d2: Vec<f64> = pos.iter().map(|p| (r - p).norm_squared()).collect();
        let prod_except = |k: usize| d2.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x).product::<f64>();
        let total: f64 = (0..pos.len()).map(prod_except).sum();
        prod_except(i) / total
    };
    let inner = QuadOptions::new(0.0, 0.1 * rel_tol);
    let outer = QuadOptions::new(0.0, rel_tol);
    let mut failed = None;
    let mut total = 0.0;
    for (i, c) in pos.iter().enumerate() {
        let theta_integrand = |theta: f64| -> f64 {
            let (s, co) = theta.sin_cos();
            let dir = Vec3::new(s, 0.0, co);
            let radial = |rho: f64| -> f64 {
                if rho == 0.0 {
                    return 0.0;
                }
                let r = c + dir * rho;
                match state.wavefunction(spec, &r) {
                    Ok(psi) => weight(i, &r) * psi * psi * rho * rho,
                    Err(e) => {
                        failed.get_or_insert(e);
                        0.0
                    }
                }
            };
            2.0 * std::f64::consts::PI * s * integrate_to_infinity(radial, 0.0, inner).value
        };
        total += integrate(theta_integrand, 0.0, std::f64::consts::PI, outer).value;
    }
    match failed {
        Some(e) => Err(e),
        None => Ok(total),
    }
}
