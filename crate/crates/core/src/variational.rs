//! Minimal-basis variational model: impurity-bound orbitals
//! ψ_i = e^{−ρ_i/a}/(√(2πa) ρ_i), optionally joined by the trap ground
//! state φ₀, solved as (H − E S)v = 0.
//!
//! Each bound orbital is the exact zero-range bound state of its own
//! impurity, so kinetic energy plus its own contact term give
//! E_b = −1/(2a²). The contact terms of the other impurities act by
//! value, except that a bound orbital evaluated at its own centre is
//! replaced by its regular part [∂_ρ ρψ]₀ = −1/(a√(2πa)). Bra-side and
//! ket-side bookkeeping then differ slightly, so H is symmetrised.

use std::f64::consts::PI;

use nalgebra::DMatrix as Mat;

use crate::error::{Error, Result};
use crate::oscillator::Vec3;
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::solver::{Parity, SystemSpec};

/// Smallest eigenvalue of S the solver accepts.
pub const MIN_OVERLAP_EIGENVALUE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orbital {
    Bound { center: Vec3, a: f64 },
    TrapGround,
}

impl Orbital {
    pub fn value(&self, r: &Vec3) -> f64 {
        match *self {
            Orbital::Bound { center, a } => {
                let rho = (r - center).norm();
                (-rho / a).exp() / ((2.0 * PI * a).sqrt() * rho)
            }
            Orbital::TrapGround => PI.powf(-0.75) * (-0.5 * r.norm_squared()).exp(),
        }
    }

    /// The value a contact term at `d` sees: the regular part if `d` is the
    /// orbital's own centre.
    fn contact_value(&self, d: &Vec3) -> f64 {
        match *self {
            Orbital::Bound { center, a } if (center - d).norm() == 0.0 => -1.0 / (a * (2.0 * PI * a).sqrt()),
            _ => self.value(d),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalBasis {
    pub orbitals: Vec<Orbital>,
}

impl VariationalBasis {
    /// One bound orbital per impurity.
    pub fn two_state(spec: &SystemSpec) -> Result<VariationalBasis> {
        let mut orbitals = Vec::with_capacity(spec.len());
        for imp in spec.impurities() {
            let a = imp.scattering_length;
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Config(format!("bound orbitals need 0 < a < ∞, got a = {a}")));
            }
            orbitals.push(Orbital::Bound { center: imp.position, a });
        }
        Ok(VariationalBasis { orbitals })
    }

    /// Bound orbitals plus the trap ground state.
    pub fn three_state(spec: &SystemSpec) -> Result<VariationalBasis> {
        let mut basis = Self::two_state(spec)?;
        basis.orbitals.push(Orbital::TrapGround);
        Ok(basis)
    }

    pub fn len(&self) -> usize {
        self.orbitals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbitals.is_empty()
    }
}

fn opts() -> QuadOptions {
    QuadOptions::new(1e-15, 1e-11)
}

/// ∫ e^{−ρ₁/a₁ − ρ₂/a₂}/(ρ₁ρ₂) · p(r) d³r in prolate spheroidal coordinates,
/// with p = 1 (`second = false`) or p = r²/2 (`second = true`).
fn two_center(c1: &Vec3, a1: f64, c2: &Vec3, a2: f64, second: bool) -> f64 {
    let axis = c2 - c1;
    let big_d = axis.norm();
    let n = axis / big_d;
    let mid = (c1 + c2) / 2.0;
    let (al, be) = (1.0 / a1, 1.0 / a2);
    let h = big_d / 2.0;
    // ρ₁ = h(λ+μ), ρ₂ = h(λ−μ); d³r/(ρ₁ρ₂) = h dλ dμ dφ
    let inner = |lam: f64| -> f64 {
        integrate(
            |mu: f64| {
                let w = (-(al + be) * h * lam - (al - be) * h * mu).exp();
                let p = if second {
                    0.5 * (mid.norm_squared() + 2.0 * h * lam * mu * mid.dot(&n) + h * h * (lam * lam + mu * mu - 1.0))
                } else {
                    1.0
                };
                w * p
            },
            -1.0,
            1.0,
            opts(),
        )
        .value
    };
    2.0 * PI * h * integrate_to_infinity(inner, 1.0, opts()).value
}

/// ⟨ψ_i|ψ_j⟩ and ⟨ψ_i|r²/2|ψ_j⟩ for two bound orbitals.
fn bound_bound(c1: &Vec3, a1: f64, c2: &Vec3, a2: f64) -> (f64, f64) {
    let big_d = (c2 - c1).norm();
    if big_d == 0.0 {
        // same centre: only reached for i = j
        return (1.0, 0.5 * (c1.norm_squared() + a1 * a1 / 2.0));
    }
    let pref = 1.0 / (2.0 * PI * (a1 * a2).sqrt());
    if a1 == a2 {
        let a = a1;
        let beta = big_d / a;
        let c2m = ((c1 + c2) / 2.0).norm_squared();
        let i0 = (-beta).exp() / beta;
        let i2 = (-beta).exp() * (1.0 / beta + 2.0 / (beta * beta) + 2.0 / beta.powi(3));
        let s = (-beta).exp();
        let t = big_d / (4.0 * a) * (2.0 * c2m * i0 + big_d * big_d / 4.0 * (2.0 * i2 - 4.0 / 3.0 * i0));
        return (s, t);
    }
    (pref * two_center(c1, a1, c2, a2, false), pref * two_center(c1, a1, c2, a2, true))
}

/// ⟨ψ|φ₀⟩ and ⟨ψ|r²/2|φ₀⟩ for a bound orbital centred at c.
///
/// With r = c + ρn̂, φ₀ ∝ e^{−(c²+ρ²)/2} e^{−ρ|c|cosθ}, and the angular
/// integrals ∫dΩ e^{−x cosθ} = 4π sinh x/x and
/// ∫dΩ cosθ e^{−x cosθ} = −4π (x cosh x − sinh x)/x² leave one radial
/// quadrature each.
fn bound_trap(c: &Vec3, a: f64) -> (f64, f64) {
    let dd = c.norm();
    let pref = PI.powf(-0.75) / (2.0 * PI * a).sqrt();
    // e^{−(c²+ρ²)/2}·sinh(ρd)/(ρd) and the cosθ moment, written without overflow
    let radial = |rho: f64, moment: bool| -> f64 {
        let x = rho * dd;
        let base = -0.5 * (rho * rho + dd * dd);
        if x < 1e-3 {
            // series in x
            let x2 = x * x;
            let even = 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
            let odd = -x / 3.0 * (1.0 + x2 / 10.0);
            return 4.0 * PI * base.exp() * if moment { odd } else { even };
        }
        let ep = (base + x).exp(); // e^{−(ρ−d)²/2}
        let em = (base - x).exp();
        let sinh = 0.5 * (ep - em);
        let cosh = 0.5 * (ep + em);
        if moment {
            -4.0 * PI * (x * cosh - sinh) / (x * x)
        } else {
            4.0 * PI * sinh / x
        }
    };
    let s = integrate_to_infinity(|rho| rho * (-rho / a).exp() * radial(rho, false), 0.0, opts()).value;
    let t = integrate_to_infinity(
        |rho| {
            let e = rho * (-rho / a).exp();
            0.5 * ((dd * dd + rho * rho) * radial(rho, false) + 2.0 * rho * dd * radial(rho, true)) * e
        },
        0.0,
        opts(),
    )
    .value;
    (pref * s, pref * t)
}

/// S and the trap part ⟨i|r²/2|j⟩ (zero wherever a trap-ground ket makes
/// it unnecessary).
fn overlap_and_trap(basis: &VariationalBasis) -> (Mat<f64>, Mat<f64>) {
    let n = basis.len();
    let mut s = Mat::zeros(n, n);
    let mut t = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (sij, tij) = match (basis.orbitals[i], basis.orbitals[j]) {
                (Orbital::Bound { center: c1, a: a1 }, Orbital::Bound { center: c2, a: a2 }) => {
                    bound_bound(&c1, a1, &c2, a2)
                }
                (Orbital::Bound { center, a }, Orbital::TrapGround)
                | (Orbital::TrapGround, Orbital::Bound { center, a }) => bound_trap(&center, a),
                (Orbital::TrapGround, Orbital::TrapGround) => (1.0, 0.75),
            };
            s[(i, j)] = sij;
            s[(j, i)] = sij;
            t[(i, j)] = tij;
            t[(j, i)] = tij;
        }
    }
    (s, t)
}

pub fn overlap_matrix(basis: &VariationalBasis) -> Mat<f64> {
    overlap_and_trap(basis).0
}

pub fn hamiltonian_matrix(basis: &VariationalBasis, spec: &SystemSpec) -> Result<Mat<f64>> {
    for orb in &basis.orbitals {
        if let Orbital::Bound { center, a } = orb {
            let owner = spec.impurities().iter().find(|imp| imp.position == *center);
            match owner {
                Some(imp) if imp.scattering_length == *a => {}
                _ => return Err(Error::Config("bound orbital does not match an impurity of the system".into())),
            }
        }
    }
    let (s, t) = overlap_and_trap(basis);
    let n = basis.len();
    let imps = spec.impurities();
    // ⟨i|H|j⟩ with H acting on the ket
    let ket_side = |i: usize, j: usize| -> f64 {
        let bra = &basis.orbitals[i];
        match basis.orbitals[j] {
            Orbital::Bound { center, a } => {
                let eb = -0.5 / (a * a);
                let contact: f64 = imps
                    .iter()
                    .filter(|imp| imp.position != center)
                    .map(|imp| imp.coupling() * bra.contact_value(&imp.position) * basis.orbitals[j].value(&imp.position))
                    .sum();
                eb * s[(i, j)] + t[(i, j)] + contact
            }
            Orbital::TrapGround => {
                let contact: f64 = imps
                    .iter()
                    .map(|imp| imp.coupling() * bra.contact_value(&imp.position) * Orbital::TrapGround.value(&imp.position))
                    .sum();
                1.5 * s[(i, j)] + contact
            }
        }
    };
    let mut h = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = 0.5 * (ket_side(i, j) + ket_side(j, i));
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalSolution {
    /// ascending
    pub energies: Vec<f64>,
    /// column k holds v for energies[k], S-normalised
    pub amplitudes: Mat<f64>,
    pub parities: Vec<Parity>,
    pub overlap: Mat<f64>,
    pub hamiltonian: Mat<f64>,
}

pub fn solve_variational(basis: &VariationalBasis, spec: &SystemSpec) -> Result<VariationalSolution> {
    let s = overlap_matrix(basis);
    let h = hamiltonian_matrix(basis, spec)?;
    let min_s = s.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_s >= MIN_OVERLAP_EIGENVALUE) {
        return Err(Error::Basis(min_s));
    }
    let chol = s.clone().cholesky().ok_or(Error::Basis(min_s))?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse().ok_or(Error::Basis(min_s))?;
    let reduced = &l_inv * &h * l_inv.transpose();
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let eig = reduced.symmetric_eigen();
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let n = basis.len();
    let mut amplitudes = Mat::zeros(n, n);
    let mut energies = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        let mut v = l_inv.transpose() * eig.eigenvectors.column(k);
        let big = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if big < 0.0 {
            v = -v;
        }
        amplitudes.set_column(col, &v);
        energies.push(eig.eigenvalues[k]);
    }
    let parities = (0..n).map(|k| parity_of(basis, spec, amplitudes.column(k).as_slice())).collect();
    Ok(VariationalSolution { energies, amplitudes, parities, overlap: s, hamiltonian: h })
}

/// Reflection parity from the bound-orbital amplitudes of a mirror pair.
fn parity_of(basis: &VariationalBasis, spec: &SystemSpec, v: &[f64]) -> Parity {
    if spec.reflection_partners().is_none() {
        return Parity::None;
    }
    let centers: Vec<(usize, Vec3)> = basis
        .orbitals
        .iter()
        .enumerate()
        .filter_map(|(i, o)| match o {
            Orbital::Bound { center, .. } => Some((i, *center)),
            Orbital::TrapGround => None,
        })
        .collect();
    let mut sym = 0.0;
    let mut anti = 0.0;
    for &(i, ci) in &centers {
        let mirrored = Vec3::new(ci.x, ci.y, -ci.z);
        if let Some(&(j, _)) = centers.iter().find(|(_, cj)| (cj - mirrored).norm() < 1e-12) {
            sym += (v[i] - v[j]).powi(2);
            anti += (v[i] + v[j]).powi(2);
        }
    }
    if sym <= anti {
        Parity::Even
    } else {
        Parity::Odd
    }
}
