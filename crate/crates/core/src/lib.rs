//! Spectral solver for the Peierls-Nabarro model of an edge dislocation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod elastic;
pub mod energy;
pub mod error;
pub mod grid;
pub mod krylov;
pub mod operators;
pub mod params;
pub mod perturb;
pub mod potential;
pub mod profile;
pub mod quadrature;
pub mod seminorm;
pub mod static_solver;
pub mod validation;

pub use error::{PnError, Result};
pub use grid::{build_grid, Grid1D, SpectralField};
pub use params::PhysParams;
pub use potential::{validate_potential, PotentialSpec, TablePotential};
pub use profile::{Background, Profile};
pub use seminorm::{hs_seminorm, hs_seminorm_samples, SeminormMode};
