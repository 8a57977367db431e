use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oscillator::Vec3;

/// Impurities closer than this are refused; two separate zero-range
/// centres stop being a sensible model well before they merge.
pub const MIN_SEPARATION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            "none" => Ok(Parity::None),
            other => Err(Error::Parse(format!("unknown parity {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impurity {
    pub position: Vec3,
    /// in units of l₀; `f64::INFINITY` is the unitarity limit
    pub scattering_length: f64,
}

impl Impurity {
    pub fn new(position: Vec3, scattering_length: f64) -> Impurity {
        Impurity { position, scattering_length }
    }

    /// γ = 2πa.
    pub fn coupling(&self) -> f64 {
        2.0 * PI * self.scattering_length
    }

    pub fn inverse_coupling(&self) -> f64 {
        if self.scattering_length.is_infinite() {
            0.0
        } else {
            1.0 / self.coupling()
        }
    }
}

/// Isotropic trap plus N static impurities, all in oscillator units.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    impurities: Vec<Impurity>,
}

impl SystemSpec {
    pub fn new(impurities: Vec<Impurity>) -> Result<SystemSpec> {
        if impurities.is_empty() {
            return Err(Error::Config("at least one impurity is required".into()));
        }
        for (i, imp) in impurities.iter().enumerate() {
            if !imp.position.iter().all(|c| c.is_finite()) {
                return Err(Error::Config(format!("impurity {i} has a non-finite position")));
            }
            let a = imp.scattering_length;
            if a.is_nan() || a == 0.0 || a == f64::NEG_INFINITY {
                return Err(Error::Config(format!("impurity {i} has scattering length {a}")));
            }
            for (j, other) in impurities.iter().enumerate().take(i) {
                let sep = (imp.position - other.position).norm();
                if sep < MIN_SEPARATION {
                    return Err(Error::Config(format!(
                        "impurities {j} and {i} are {sep:e} apart, below {MIN_SEPARATION:e}"
                    )));
                }
            }
        }
        Ok(SystemSpec { impurities })
    }

    pub fn single(position: Vec3, a: f64) -> Result<SystemSpec> {
        SystemSpec::new(vec![Impurity::new(position, a)])
    }

    /// Impurities at ±d ẑ with a common scattering length.
    pub fn symmetric_pair(d: f64, a: f64) -> Result<SystemSpec> {
        SystemSpec::asymmetric_pair(d, a, 0.0)
    }

    /// First impurity at (d + Δz) ẑ, second at −d ẑ.
    pub fn asymmetric_pair(d: f64, a: f64, dz: f64) -> Result<SystemSpec> {
        SystemSpec::new(vec![
            Impurity::new(Vec3::new(0.0, 0.0, d + dz), a),
            Impurity::new(Vec3::new(0.0, 0.0, -d), a),
        ])
    }

    pub fn len(&self) -> usize {
        self.impurities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.impurities.is_empty()
    }

    pub fn impurities(&self) -> &[Impurity] {
        &self.impurities
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.impurities.iter().map(|i| i.position).collect()
    }

    pub fn couplings(&self) -> Vec<f64> {
        self.impurities.iter().map(Impurity::coupling).collect()
    }

    /// Permutation π with σ_z d_i = d_{π(i)} and matching couplings, if the
    /// configuration is symmetric under z → −z.
    pub fn reflection_partners(&self) -> Option<Vec<usize>> {
        let tol = 1e-12;
        let mut partner = Vec::with_capacity(self.len());
        for imp in &self.impurities {
            let mirrored = Vec3::new(imp.position.x, imp.position.y, -imp.position.z);
            let hit = self.impurities.iter().position(|o| {
                (o.position - mirrored).norm() <= tol * (1.0 + mirrored.norm())
                    && (o.scattering_length == imp.scattering_length
                        || (o.scattering_length - imp.scattering_length).abs()
                            <= tol * imp.scattering_length.abs())
            })?;
            partner.push(hit);
        }
        Some(partner)
    }
}
