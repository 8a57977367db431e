//! Bound states of the trapped atom with point impurities.

mod matrix;
mod roots;
mod state;
mod system;

pub use matrix::{build_dmatrix, det_d, green_matrix, reduced_matrix, DMatrix};
pub use roots::{brent, find_roots, Root, RootOptions, Spectrum, UnaffectedLevel};
pub use state::{norm_quadrature, normalization, solve_state, SpectralState};
pub use system::{Impurity, Parity, SystemSpec, MIN_SEPARATION};

pub(crate) use matrix::{sectors, sym_eigenvalues, Sector};
