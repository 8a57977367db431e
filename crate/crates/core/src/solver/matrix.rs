use nalgebra::DMatrix as Mat;

use super::system::{Parity, SystemSpec};
use crate::error::{Error, Result};
use crate::green::{green_ho, green_reg_diag};

/// D_N(E): diagonal γ_i G_r(d_i) − 1, off-diagonal γ_j G(d_j, d_i).
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    pub energy: f64,
    pub entries: Mat<f64>,
}

/// G(d_i, d_j; E) with the regular part on the diagonal.
pub fn green_matrix(spec: &SystemSpec, e: f64) -> Result<Mat<f64>> {
    let pos = spec.positions();
    let n = pos.len();
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = green_reg_diag(&pos[i], e)?;
        for j in 0..i {
            let v = green_ho(&pos[i], &pos[j], e)?.value;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

pub fn build_dmatrix(spec: &SystemSpec, e: f64) -> Result<DMatrix> {
    let gam = spec.couplings();
    if gam.iter().any(|g| !g.is_finite()) {
        return Err(Error::Config(
            "D_N needs finite couplings; use the reduced matrix at unitarity".into(),
        ));
    }
    let g = green_matrix(spec, e)?;
    let n = spec.len();
    let entries = Mat::from_fn(n, n, |i, j| gam[j] * g[(j, i)] - if i == j { 1.0 } else { 0.0 });
    Ok(DMatrix { energy: e, entries })
}

pub fn det_d(spec: &SystemSpec, e: f64) -> Result<f64> {
    Ok(build_dmatrix(spec, e)?.entries.determinant())
}

/// D̃ = G − diag(1/γ), so that D_N = D̃·diag(γ). Symmetric, finite at
/// unitarity, and decreasing in E between poles.
pub fn reduced_matrix(spec: &SystemSpec, e: f64) -> Result<Mat<f64>> {
    let mut g = green_matrix(spec, e)?;
    for (i, imp) in spec.impurities().iter().enumerate() {
        g[(i, i)] -= imp.inverse_coupling();
    }
    Ok(g)
}

/// An invariant subspace of the impurity amplitudes under z → −z.
#[derive(Debug, Clone)]
pub(crate) struct Sector {
    pub parity: Parity,
    /// orthonormal columns spanning the sector
    pub basis: Mat<f64>,
}

impl Sector {
    pub fn project(&self, m: &Mat<f64>) -> Mat<f64> {
        self.basis.transpose() * m * &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

pub(crate) fn sectors(spec: &SystemSpec) -> Vec<Sector> {
    let n = spec.len();
    let Some(partner) = spec.reflection_partners() else {
        return vec![Sector { parity: Parity::None, basis: Mat::identity(n, n) }];
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for i in 0..n {
        let p = partner[i];
        if p == i {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            even.push(v);
        } else if i < p {
            let mut v = vec![0.0; n];
            v[i] = h;
            v[p] = h;
            even.push(v.clone());
            v[p] = -h;
            odd.push(v);
        }
    }
    let to_mat = |cols: Vec<Vec<f64>>| Mat::from_fn(n, cols.len(), |i, j| cols[j][i]);
    vec![
        Sector { parity: Parity::Even, basis: to_mat(even) },
        Sector { parity: Parity::Odd, basis: to_mat(odd) },
    ]
}

/// Ascending eigenvalues of a small symmetric matrix.
pub(crate) fn sym_eigenvalues(m: &Mat<f64>) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)]],
        2 => {
            let (p, q, r) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
            let mean = 0.5 * (p + r);
            let rad = (0.5 * (p - r)).hypot(q);
            vec![mean - rad, mean + rad]
        }
        _ => {
            let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        }
    }
}
