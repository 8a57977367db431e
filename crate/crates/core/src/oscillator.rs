//! Eigenfunctions of the isotropic oscillator in the Cartesian basis.

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;

/// E_n = n + 3/2.
pub fn level(n: usize) -> f64 {
    n as f64 + 1.5
}

/// Orthonormal Hermite functions h_0..=h_nmax at x.
pub fn hermite_functions(x: f64, nmax: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(nmax + 1);
    h.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if nmax >= 1 {
        h.push(std::f64::consts::SQRT_2 * x * h[0]);
    }
    for n in 1..nmax {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// (nx, ny, nz) with nx + ny + nz = n, in a fixed order.
pub fn shell_states(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..=n).flat_map(move |nx| (0..=n - nx).map(move |ny| [nx, ny, n - nx - ny]))
}

pub fn degeneracy(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Number of shell states with nz even (`true`) or odd (`false`).
pub fn degeneracy_by_reflection(n: usize, even: bool) -> usize {
    (0..=n).filter(|nz| (nz % 2 == 0) == even).map(|nz| n - nz + 1).sum()
}

pub fn eigenfunction(q: [usize; 3], r: &Vec3) -> f64 {
    let top = q[0].max(q[1]).max(q[2]);
    (0..3).map(|i| hermite_functions(r[i], top)[q[i]]).product()
}

/// Values of every state in shell `n` at the given points; row = point.
pub fn shell_values(n: usize, points: &[Vec3]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            let h: Vec<Vec<f64>> = (0..3).map(|i| hermite_functions(p[i], n)).collect();
            shell_states(n).map(|q| h[0][q[0]] * h[1][q[1]] * h[2][q[2]]).collect()
        })
        .collect()
}
