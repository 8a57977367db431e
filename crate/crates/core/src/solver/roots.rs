//! Eigenenergies as the zeros of det D̃(E).
//!
//! D̃(E) = G(E) − diag(1/γ) has ∂_E D̃ = −Σ_n v_n v_nᵀ/(E − E_n)², with
//! v_n the oscillator eigenfunctions at the impurities, so every sorted
//! eigenvalue of D̃ decreases between poles. The number of eigenvalues of
//! H below E is therefore N₀(E) + ν(E), where N₀ counts oscillator states
//! and ν counts negative eigenvalues of D̃. That count is exact even for
//! roots closer together than any grid could resolve, which is what the
//! dimer doublet at large separation needs. Each root then comes from a
//! Brent solve on a single monotone eigenvalue curve.

use nalgebra::DMatrix as Mat;

use super::matrix::{reduced_matrix, sectors, sym_eigenvalues, Sector};
use super::system::{Parity, SystemSpec};
use crate::error::{Error, Result};
use crate::oscillator::{level, shell_states, shell_values};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// absolute tolerance on each energy
    pub energy_tol: f64,
    /// half-width of the excluded band around each oscillator level,
    /// relative to max(1, E_n)
    pub pole_margin: f64,
    /// roots closer than this are flagged degenerate
    pub degeneracy_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { energy_tol: 1e-12, pole_margin: 1e-9, degeneracy_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub energy: f64,
    pub parity: Parity,
    /// number of shifted levels of the same parity below this one
    pub index: usize,
    /// another root lies within the degeneracy tolerance
    pub degenerate: bool,
    /// indistinguishable from an oscillator level at working precision
    pub near_pole: bool,
}

/// An oscillator level left untouched because its eigenfunctions vanish
/// at every impurity (within the given parity sector).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnaffectedLevel {
    pub energy: f64,
    pub parity: Parity,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub roots: Vec<Root>,
    pub unaffected: Vec<UnaffectedLevel>,
    /// shifted levels lying below the window, per sector
    pub below: Vec<(Parity, usize)>,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.energy).collect()
    }

    pub fn of_parity(&self, parity: Parity) -> Vec<f64> {
        self.roots.iter().filter(|r| r.parity == parity).map(|r| r.energy).collect()
    }
}

fn state_in_sector(q: [usize; 3], parity: Parity) -> bool {
    match parity {
        Parity::Even => q[2].is_multiple_of(2),
        Parity::Odd => q[2] % 2 == 1,
        Parity::None => true,
    }
}

/// Rank of the level-n residue inside the sector, and the sector's share
/// of the level's degeneracy.
fn shell_rank(spec: &SystemSpec, sector: &Sector, n: usize) -> (usize, usize) {
    let values = shell_values(n, &spec.positions());
    let cols: Vec<usize> = shell_states(n)
        .enumerate()
        .filter(|(_, q)| state_in_sector(*q, sector.parity))
        .map(|(i, _)| i)
        .collect();
    let deg = cols.len();
    if sector.dim() == 0 || deg == 0 {
        return (0, deg);
    }
    let v = Mat::from_fn(spec.len(), deg, |i, j| values[i][cols[j]]);
    let p = sector.basis.transpose() * v;
    let sv = p.singular_values();
    let top = sv.iter().fold(0.0f64, |m, x| m.max(*x));
    let rank = sv.iter().filter(|&&x| x > 1e-300 && x > 1e-12 * top).count();
    (rank, deg)
}

struct SectorScan<'a> {
    spec: &'a SystemSpec,
    sector: &'a Sector,
}

impl SectorScan<'_> {
    fn eigenvalues(&self, e: f64) -> Result<Vec<f64>> {
        let d = reduced_matrix(self.spec, e)?;
        Ok(sym_eigenvalues(&self.sector.project(&d)))
    }

    fn negatives(&self, e: f64) -> Result<usize> {
        Ok(self.eigenvalues(e)?.iter().filter(|&&x| x < 0.0).count())
    }

    fn solve_branch(&self, k: usize, lo: f64, hi: f64, tol: f64) -> Result<f64> {
        let f = |e: f64| -> Result<f64> { Ok(self.eigenvalues(e)?[k]) };
        brent(f, lo, hi, tol)
    }
}

/// Brent's method for a bracketed sign change (f(lo) ≥ 0 ≥ f(hi) or reverse).
pub fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Solver(format!("no sign change on [{lo}, {hi}]")));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::Solver(format!("Brent iteration did not settle on [{lo}, {hi}]")))
}

/// All eigenenergies in [e_min, e_max] that the impurities shift.
pub fn find_roots(spec: &SystemSpec, e_min: f64, e_max: f64, opts: &RootOptions) -> Result<Spectrum> {
    if !(e_min < e_max) || !e_min.is_finite() || !e_max.is_finite() {
        return Err(Error::Config(format!("bad energy window [{e_min}, {e_max}]")));
    }
    let mut spectrum = Spectrum::default();
    for sector in sectors(spec) {
        scan_sector(spec, &sector, e_min, e_max, opts, &mut spectrum)?;
    }
    spectrum.roots.sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.parity.cmp(&y.parity)));
    spectrum
        .unaffected
        .sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.parity.cmp(&y.parity)));
    let n = spectrum.roots.len();
    for i in 1..n {
        if spectrum.roots[i].energy - spectrum.roots[i - 1].energy <= opts.degeneracy_tol {
            spectrum.roots[i].degenerate = true;
            spectrum.roots[i - 1].degenerate = true;
        }
    }
    Ok(spectrum)
}

fn scan_sector(
    spec: &SystemSpec,
    sector: &Sector,
    e_min: f64,
    e_max: f64,
    opts: &RootOptions,
    out: &mut Spectrum,
) -> Result<()> {
    let scan = SectorScan { spec, sector };
    let margin = |e: f64| opts.pole_margin * e.abs().max(1.0);

    // oscillator levels strictly inside the window, plus end nudges
    let mut levels = Vec::new();
    let mut lo = e_min;
    let mut hi = e_max;
    let mut n = 0usize;
    loop {
        let en = level(n);
        if en > e_max + margin(en) {
            break;
        }
        if (en - e_min).abs() <= margin(en) {
            lo = en + margin(en);
        } else if (en - e_max).abs() <= margin(en) {
            hi = en - margin(en);
        } else if en > e_min {
            levels.push(n);
        }
        n += 1;
    }

    let mut edges = vec![lo];
    for &n in &levels {
        let en = level(n);
        edges.push(en - margin(en));
        edges.push(en + margin(en));
    }
    edges.push(hi);

    // pole-free pieces are [edges[2i], edges[2i+1]]
    let mut counts = Vec::with_capacity(edges.len());
    for &e in &edges {
        counts.push(scan.negatives(e)?);
    }
    let mut below = counts[0];
    for n in 0.. {
        if level(n) >= lo {
            break;
        }
        below += shell_rank(spec, sector, n).0;
    }
    let mut found = Vec::new();
    for piece in 0..edges.len() / 2 {
        let (a, b) = (edges[2 * piece], edges[2 * piece + 1]);
        let (na, nb) = (counts[2 * piece], counts[2 * piece + 1]);
        if nb < na {
            return Err(Error::Solver(format!(
                "negative-eigenvalue count fell from {na} to {nb} on [{a}, {b}]"
            )));
        }
        for k in na..nb {
            let energy = scan.solve_branch(k, a, b, opts.energy_tol)?;
            found.push(Root { energy, parity: sector.parity, index: 0, degenerate: false, near_pole: false });
        }
    }
    for (i, &n) in levels.iter().enumerate() {
        let en = level(n);
        let (rank, deg) = shell_rank(spec, sector, n);
        let below = counts[2 * i + 1];
        let above = counts[2 * i + 2];
        let jump = rank as i64 + above as i64 - below as i64;
        if jump < 0 {
            return Err(Error::Solver(format!(
                "inconsistent count across the level at E = {en} (rank {rank}, {below} -> {above})"
            )));
        }
        for _ in 0..jump {
            found.push(Root { energy: en, parity: sector.parity, index: 0, degenerate: false, near_pole: true });
        }
        if deg > rank {
            out.unaffected.push(UnaffectedLevel { energy: en, parity: sector.parity, multiplicity: deg - rank });
        }
    }
    found.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    for (i, root) in found.iter_mut().enumerate() {
        root.index = below + i;
    }
    out.roots.extend(found);
    out.below.push((sector.parity, below));
    Ok(())
}
