//! Parameter sweeps over a two-impurity configuration along the z-axis,
//! avoided-crossing detection and wave-function cuts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freespace::bound_states_free;
use crate::oscillator::Vec3;
use crate::solver::{find_roots, Parity, RootOptions, SpectralState, Spectrum, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepVar {
    /// full separation 2d between the impurities
    Separation2d,
    ScatteringA,
    /// displacement of the first impurity along z
    AsymDz,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::Separation2d => "separation_2d",
            SweepVar::ScatteringA => "scattering_a",
            SweepVar::AsymDz => "asym_dz",
        }
    }
}

impl std::str::FromStr for SweepVar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "separation_2d" => Ok(SweepVar::Separation2d),
            "scattering_a" => Ok(SweepVar::ScatteringA),
            "asym_dz" => Ok(SweepVar::AsymDz),
            other => Err(Error::Parse(format!("unknown sweep variable {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub sweep: SweepVar,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    /// fixed values for whichever parameters are not swept
    pub separation: f64,
    pub scattering_length: f64,
    pub dz: f64,
    pub e_min: f64,
    pub e_max: f64,
    /// add the untrapped bound-state branches to the table
    pub free_branches: bool,
    /// add oscillator levels the impurities leave alone
    pub unaffected: bool,
    /// largest change of a tracked level between neighbouring points
    /// before it is flagged
    pub jump_tolerance: f64,
}

impl ScanSpec {
    pub fn new(sweep: SweepVar, lo: f64, hi: f64, steps: usize) -> ScanSpec {
        ScanSpec {
            sweep,
            lo,
            hi,
            steps,
            separation: 6.0,
            scattering_length: 0.4,
            dz: 0.0,
            e_min: -5.0,
            e_max: 5.0,
            free_branches: false,
            unaffected: false,
            jump_tolerance: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::Config(format!("sweep range [{}, {}] is empty", self.lo, self.hi)));
        }
        if self.steps < 2 {
            return Err(Error::Config("a sweep needs at least 2 steps".into()));
        }
        if !(self.e_min < self.e_max) || !self.e_min.is_finite() || !self.e_max.is_finite() {
            return Err(Error::Config(format!("energy window [{}, {}] is empty", self.e_min, self.e_max)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64).collect()
    }

    /// The configuration at one sweep value: impurities at (d + Δz)ẑ and −dẑ.
    pub fn system_at(&self, value: f64) -> Result<SystemSpec> {
        let (mut sep, mut a, mut dz) = (self.separation, self.scattering_length, self.dz);
        match self.sweep {
            SweepVar::Separation2d => sep = value,
            SweepVar::ScatteringA => a = value,
            SweepVar::AsymDz => dz = value,
        }
        SystemSpec::asymmetric_pair(sep / 2.0, a, dz)
    }

    pub fn spectrum_at(&self, value: f64, opts: &RootOptions) -> Result<Spectrum> {
        find_roots(&self.system_at(value)?, self.e_min, self.e_max, opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LevelFlags {
    pub degenerate: bool,
    pub near_pole: bool,
    pub unaffected: bool,
    pub free: bool,
    pub jump: bool,
    pub error: bool,
    pub variational: bool,
}

impl LevelFlags {
    const NAMES: [&'static str; 7] = ["degenerate", "near_pole", "unaffected", "free", "jump", "error", "variational"];

    fn bits(&self) -> [bool; 7] {
        [self.degenerate, self.near_pole, self.unaffected, self.free, self.jump, self.error, self.variational]
    }

    pub fn render(&self) -> String {
        let names: Vec<&str> = Self::NAMES.iter().zip(self.bits()).filter(|(_, b)| *b).map(|(n, _)| *n).collect();
        names.join("|")
    }

    pub fn parse(s: &str) -> Result<LevelFlags> {
        let mut f = LevelFlags::default();
        for name in s.split('|').filter(|x| !x.is_empty()) {
            match name {
                "degenerate" => f.degenerate = true,
                "near_pole" => f.near_pole = true,
                "unaffected" => f.unaffected = true,
                "free" => f.free = true,
                "jump" => f.jump = true,
                "error" => f.error = true,
                "variational" => f.variational = true,
                other => return Err(Error::Parse(format!("unknown flag {other:?}"))),
            }
        }
        Ok(f)
    }
}

/// One row of a scan table.
///
/// `level_index` counts same-parity shifted levels below this one, so it
/// is an adiabatic label that stays put through avoided crossings. Rows
/// that are not shifted levels (unaffected levels, free-space branches,
/// failed points) use −1 and say what they are in `flags`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub value: f64,
    pub level_index: i64,
    pub energy: f64,
    pub parity: Parity,
    pub flags: LevelFlags,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    /// `None` for a table holding a single spectrum
    pub sweep: Option<SweepVar>,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    /// Energy of (parity, index) at each sweep value it appears at.
    pub fn track(&self, parity: Parity, index: i64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.parity == parity && r.level_index == index && !r.flags.free && !r.flags.unaffected)
            .map(|r| (r.value, r.energy))
            .collect()
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.rows.iter().map(|r| r.value).collect();
        v.dedup();
        v
    }
}

fn rows_at(scan: &ScanSpec, value: f64, opts: &RootOptions) -> Vec<ScanRow> {
    let mut rows = Vec::new();
    let spectrum = match scan.spectrum_at(value, opts) {
        Ok(s) => s,
        Err(_) => {
            let flags = LevelFlags { error: true, ..Default::default() };
            return vec![ScanRow { value, level_index: -1, energy: f64::NAN, parity: Parity::None, flags }];
        }
    };
    for r in &spectrum.roots {
        let flags = LevelFlags { degenerate: r.degenerate, near_pole: r.near_pole, ..Default::default() };
        rows.push(ScanRow { value, level_index: r.index as i64, energy: r.energy, parity: r.parity, flags });
    }
    if scan.unaffected {
        for u in &spectrum.unaffected {
            let flags = LevelFlags { unaffected: true, ..Default::default() };
            for _ in 0..u.multiplicity {
                rows.push(ScanRow { value, level_index: -1, energy: u.energy, parity: u.parity, flags });
            }
        }
    }
    if scan.free_branches {
        let free = scan.system_at(value).and_then(|s| bound_states_free(&s));
        match free {
            Ok(states) => {
                for st in states {
                    let flags = LevelFlags { free: true, ..Default::default() };
                    rows.push(ScanRow { value, level_index: -1, energy: st.energy, parity: st.parity, flags });
                }
            }
            Err(_) => {
                let flags = LevelFlags { free: true, error: true, ..Default::default() };
                rows.push(ScanRow { value, level_index: -1, energy: f64::NAN, parity: Parity::None, flags });
            }
        }
    }
    rows
}

/// Solve every sweep point (in parallel) and assemble the table in sweep
/// order. A point that fails gets a single row flagged `error`; the scan
/// carries on.
pub fn run_scan(scan: &ScanSpec, opts: &RootOptions) -> Result<ScanTable> {
    scan.validate()?;
    let values = scan.values();
    let per_point: Vec<Vec<ScanRow>> = values.par_iter().map(|&v| rows_at(scan, v, opts)).collect();
    let mut rows: Vec<ScanRow> = per_point.into_iter().flatten().collect();
    flag_jumps(&mut rows, scan.jump_tolerance);
    Ok(ScanTable { sweep: Some(scan.sweep), rows })
}

fn flag_jumps(rows: &mut [ScanRow], tolerance: f64) {
    use std::collections::HashMap;
    let mut last: HashMap<(Parity, i64), (f64, f64)> = HashMap::new();
    for row in rows.iter_mut() {
        if row.level_index < 0 {
            continue;
        }
        let key = (row.parity, row.level_index);
        if let Some(&(_, e)) = last.get(&key) {
            if (row.energy - e).abs() > tolerance {
                row.flags.jump = true;
            }
        }
        last.insert(key, (row.value, row.energy));
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingRecord {
    /// sweep value at the smallest gap
    pub value: f64,
    pub gap: f64,
    pub lower: usize,
    pub upper: usize,
    pub parity: Parity,
    /// energies of the two levels at `value`
    pub lower_energy: f64,
    pub upper_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingOptions {
    /// a minimum must lie below this fraction of the lower of the two
    /// surrounding gap maxima
    pub prominence: f64,
    /// sweep-value tolerance for the golden-section refinement
    pub refine_tol: f64,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        CrossingOptions { prominence: 0.7, refine_tol: 1e-6 }
    }
}

fn gap_at(scan: &ScanSpec, value: f64, parity: Parity, lower: usize, opts: &RootOptions) -> Result<(f64, f64, f64)> {
    // indices are absolute, so a wider window only adds room for the
    // upper level to move
    let widened = ScanSpec { e_max: scan.e_max + 2.0, ..scan.clone() };
    let sp = widened.spectrum_at(value, opts)?;
    let find = |k: usize| {
        sp.roots
            .iter()
            .find(|r| r.parity == parity && r.index == k)
            .map(|r| r.energy)
            .ok_or_else(|| Error::Solver(format!("level {k} left the window at {value}")))
    };
    let (lo, hi) = (find(lower)?, find(lower + 1)?);
    Ok((hi - lo, lo, hi))
}

/// Local minima of the gap between same-parity neighbours, filtered by
/// prominence and refined by golden-section search on re-solved spectra.
/// Opposite-parity levels are never paired: in a symmetric configuration
/// they cross exactly.
pub fn detect_crossings(
    table: &ScanTable,
    scan: &ScanSpec,
    opts: &RootOptions,
    copts: &CrossingOptions,
) -> Result<Vec<CrossingRecord>> {
    let mut keys: Vec<(Parity, i64)> = table
        .rows
        .iter()
        .filter(|r| r.level_index >= 0)
        .map(|r| (r.parity, r.level_index))
        .collect();
    keys.sort();
    keys.dedup();
    let mut candidates = Vec::new();
    for &(parity, k) in &keys {
        if !keys.contains(&(parity, k + 1)) {
            continue;
        }
        let lower = table.track(parity, k);
        let upper = table.track(parity, k + 1);
        let gaps: Vec<(f64, f64)> = lower
            .iter()
            .filter_map(|&(v, e)| upper.iter().find(|(w, _)| *w == v).map(|&(_, f)| (v, f - e)))
            .collect();
        for i in 1..gaps.len().saturating_sub(1) {
            let g = gaps[i].1;
            if !(g < gaps[i - 1].1 && g <= gaps[i + 1].1) {
                continue;
            }
            let left = gaps[..i].iter().rev().take_while(|x| x.1 >= g).fold(g, |m, x| m.max(x.1));
            let right = gaps[i + 1..].iter().take_while(|x| x.1 >= g).fold(g, |m, x| m.max(x.1));
            if g > copts.prominence * left.min(right) {
                continue;
            }
            candidates.push((parity, k as usize, gaps[i - 1].0, gaps[i + 1].0));
        }
    }
    let refined: Vec<Result<CrossingRecord>> = candidates
        .par_iter()
        .map(|&(parity, lower, a, b)| refine(scan, opts, copts, parity, lower, a, b))
        .collect();
    let mut out = refined.into_iter().collect::<Result<Vec<_>>>()?;
    out.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.lower.cmp(&y.lower)));
    Ok(out)
}

fn refine(
    scan: &ScanSpec,
    opts: &RootOptions,
    copts: &CrossingOptions,
    parity: Parity,
    lower: usize,
    mut a: f64,
    mut b: f64,
) -> Result<CrossingRecord> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = gap_at(scan, c, parity, lower, opts)?;
    let mut fd = gap_at(scan, d, parity, lower, opts)?;
    while (b - a).abs() > copts.refine_tol {
        if fc.0 < fd.0 {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gap_at(scan, c, parity, lower, opts)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gap_at(scan, d, parity, lower, opts)?;
        }
    }
    let (value, best) = if fc.0 < fd.0 { (c, fc) } else { (d, fd) };
    Ok(CrossingRecord {
        value,
        gap: best.0,
        lower,
        upper: lower + 1,
        parity,
        lower_energy: best.1,
        upper_energy: best.2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rendering {
    Raw,
    /// multiplied by Π_i |r − d_i| (|z² − d²| on the axis of a symmetric
    /// pair) so the samples stay finite at the impurities
    PoleTamed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutGeometry {
    /// z from lo to hi on the axis
    ZAxis { steps: usize },
    /// x–z plane, x and z each from lo to hi
    XzPlane { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutSample {
    pub x: f64,
    pub z: f64,
    pub value: f64,
}

/// Closer than this to an impurity, raw samples are refused.
pub const RAW_EXCLUSION: f64 = 1e-6;

pub fn wavefunction_cut(
    state: &SpectralState,
    spec: &SystemSpec,
    geometry: CutGeometry,
    lo: f64,
    hi: f64,
    rendering: Rendering,
) -> Result<Vec<CutSample>> {
    if !(lo < hi) {
        return Err(Error::Config(format!("cut range [{lo}, {hi}] is empty")));
    }
    let grid = |steps: usize| -> Result<Vec<f64>> {
        if steps < 2 {
            return Err(Error::Config("a cut needs at least 2 steps".into()));
        }
        Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect())
    };
    let points: Vec<(f64, f64)> = match geometry {
        CutGeometry::ZAxis { steps } => grid(steps)?.into_iter().map(|z| (0.0, z)).collect(),
        CutGeometry::XzPlane { steps } => {
            let g = grid(steps)?;
            g.iter().flat_map(|&z| g.iter().map(move |&x| (x, z))).collect()
        }
    };
    let pos = spec.positions();
    points
        .par_iter()
        .map(|&(x, z)| {
            let r = Vec3::new(x, 0.0, z);
            let dist: Vec<f64> = pos.iter().map(|p| (r - p).norm()).collect();
            let near = dist.iter().any(|&q| q < RAW_EXCLUSION);
            let value = match rendering {
                Rendering::Raw => {
                    if near {
                        return Err(Error::Domain(format!("raw sample at ({x}, 0, {z}) sits on an impurity")));
                    }
                    state.wavefunction(spec, &r)?
                }
                Rendering::PoleTamed => {
                    if near {
                        tamed_limit(state, spec, &r, &dist)?
                    } else {
                        dist.iter().product::<f64>() * state.wavefunction(spec, &r)?
                    }
                }
            };
            Ok(CutSample { x, z, value })
        })
        .collect()
}

/// Pole-tamed value on an impurity, from the contact amplitude:
/// Ψ ≈ −(norm·u_i)/(2πρ) so ρΨ → −norm·u_i/(2π).
fn tamed_limit(state: &SpectralState, spec: &SystemSpec, r: &Vec3, dist: &[f64]) -> Result<f64> {
    let i = dist.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).map(|(i, _)| i).unwrap_or(0);
    let others: f64 = spec.positions().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| (r - p).norm()).product();
    Ok(-state.norm * state.amplitudes[i] / (2.0 * std::f64::consts::PI) * others)
}
