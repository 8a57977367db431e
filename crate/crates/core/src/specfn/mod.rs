//! Gamma, Kummer M and Tricomi U for real arguments.
//!
//! The Green's function only ever needs b ∈ {3/2, 5/2, 7/2} and
//! a = (4n−1)/4 − E/2, so the routines are tuned for half-integer b and
//! moderate x, though nothing below assumes it except where stated.

mod gamma;
mod kummer;
mod tricomi;

pub use gamma::{gamma, is_gamma_pole, log_gamma, rgamma};
pub use kummer::{kummer_m, kummer_m_seq, kummer_m_with};
pub use tricomi::{tricomi_u, tricomi_u_seq, tricomi_u_seq_with, tricomi_u_with};


use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFnAccuracy {
    /// largest acceptable estimated relative error
    pub rel_tol: f64,
    pub max_terms: usize,
    /// above this x the asymptotic expansions are tried first
    pub large_x_switch: f64,
}

impl Default for SpecFnAccuracy {
    fn default() -> Self {
        SpecFnAccuracy {
            rel_tol: 1e-10,
            max_terms: 10_000,
            large_x_switch: 30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FKind {
    U,
    M,
}

/// F((4n−1)/4 − E/2, (2n+1)/2, x) with F = U or M.
pub fn f_shorthand(kind: FKind, n: u32, e: f64, x: f64) -> Result<f64> {
    assert!((1..=3).contains(&n), "n must be 1, 2 or 3");
    let nf = n as f64;
    let a = (4.0 * nf - 1.0) / 4.0 - 0.5 * e;
    let b = (2.0 * nf + 1.0) / 2.0;
    match kind {
        FKind::U => tricomi_u(a, b, x),
        FKind::M => kummer_m(a, b, x),
    }
}

/// Neumaier's compensated sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new(start: f64) -> Self {
        Neumaier { sum: start, comp: 0.0 }
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
