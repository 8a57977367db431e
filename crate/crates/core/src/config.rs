//! JSON run configuration.
//!
//! ```json
//! {
//!   "impurities": [{"position": [0, 0, 3], "scattering_length": 0.4}],
//!   "scan": {"sweep": "separation_2d", "lo": 4, "hi": 8, "steps": 81},
//!   "solver": {"energy_tol": 1e-12},
//!   "physical": {"mass": 1.443e-25, "trap_frequency": 6.28e4}
//! }
//! ```
//!
//! Every block and field is optional. Without `physical`, lengths are in
//! oscillator lengths and energies in ħω. With it, inputs and outputs are
//! in metres and joules and converted at the boundary.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::oscillator::Vec3;
use crate::scan::{ScanSpec, SweepVar};
use crate::solver::{Impurity, RootOptions, SystemSpec};

const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub impurities: Vec<ImpurityConfig>,
    pub scan: ScanConfig,
    pub solver: SolverConfig,
    pub physical: Option<PhysicalConfig>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ImpurityConfig {
    pub position: [f64; 3],
    /// a string "inf" selects unitarity
    pub scattering_length: LengthOrInf,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum LengthOrInf {
    Finite(f64),
    Named(Infinity),
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
pub enum Infinity {
    #[serde(rename = "inf")]
    Inf,
}

impl LengthOrInf {
    pub fn value(self) -> f64 {
        match self {
            LengthOrInf::Finite(x) => x,
            LengthOrInf::Named(Infinity::Inf) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub sweep: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub separation: f64,
    pub scattering_length: f64,
    pub dz: f64,
    pub e_min: f64,
    pub e_max: f64,
    pub free_branches: bool,
    pub unaffected: bool,
    pub jump_tolerance: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        let s = ScanSpec::new(SweepVar::Separation2d, 2.0, 10.0, 81);
        ScanConfig {
            sweep: s.sweep.as_str().into(),
            lo: s.lo,
            hi: s.hi,
            steps: s.steps,
            separation: s.separation,
            scattering_length: s.scattering_length,
            dz: s.dz,
            e_min: s.e_min,
            e_max: s.e_max,
            free_branches: s.free_branches,
            unaffected: s.unaffected,
            jump_tolerance: s.jump_tolerance,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub energy_tol: f64,
    pub pole_margin: f64,
    pub degeneracy_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = RootOptions::default();
        SolverConfig { energy_tol: o.energy_tol, pole_margin: o.pole_margin, degeneracy_tol: o.degeneracy_tol }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConfig {
    /// kg
    pub mass: f64,
    /// angular frequency, rad/s
    pub trap_frequency: f64,
}

/// Scale factors from oscillator units to the units the user works in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub length: f64,
    pub energy: f64,
}

impl Units {
    pub const OSCILLATOR: Units = Units { length: 1.0, energy: 1.0 };

    pub fn of(physical: Option<PhysicalConfig>) -> Result<Units> {
        match physical {
            None => Ok(Units::OSCILLATOR),
            Some(p) => {
                if !(p.mass > 0.0 && p.trap_frequency > 0.0) {
                    return Err(Error::Config("mass and trap_frequency must be positive".into()));
                }
                Ok(Units { length: (HBAR / (p.mass * p.trap_frequency)).sqrt(), energy: HBAR * p.trap_frequency })
            }
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn units(&self) -> Result<Units> {
        Units::of(self.physical)
    }

    pub fn root_options(&self) -> Result<RootOptions> {
        let s = &self.solver;
        if !(s.energy_tol > 0.0 && s.pole_margin > 0.0 && s.degeneracy_tol >= 0.0) {
            return Err(Error::Config("solver tolerances must be positive".into()));
        }
        Ok(RootOptions { energy_tol: s.energy_tol, pole_margin: s.pole_margin, degeneracy_tol: s.degeneracy_tol })
    }

    /// The scan block in oscillator units.
    pub fn scan_spec(&self) -> Result<ScanSpec> {
        let u = self.units()?;
        let c = &self.scan;
        let sweep: SweepVar = c.sweep.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
        let mut s = ScanSpec::new(sweep, c.lo / u.length, c.hi / u.length, c.steps);
        s.separation = c.separation / u.length;
        s.scattering_length = c.scattering_length / u.length;
        s.dz = c.dz / u.length;
        s.e_min = c.e_min / u.energy;
        s.e_max = c.e_max / u.energy;
        s.free_branches = c.free_branches;
        s.unaffected = c.unaffected;
        s.jump_tolerance = c.jump_tolerance / u.energy;
        s.validate()?;
        Ok(s)
    }

    /// The explicit impurity list, if one was given.
    pub fn system(&self) -> Result<Option<SystemSpec>> {
        if self.impurities.is_empty() {
            return Ok(None);
        }
        let u = self.units()?;
        let imps = self
            .impurities
            .iter()
            .map(|i| {
                let p = Vec3::new(i.position[0], i.position[1], i.position[2]) / u.length;
                Impurity::new(p, i.scattering_length.value() / u.length)
            })
            .collect();
        SystemSpec::new(imps).map(Some)
    }
}
