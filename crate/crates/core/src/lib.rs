//! Collective decay rates of single-excitation Bloch (generalized Dicke)
//! modes in regular 1D, 2D and 3D atomic lattices.
//!
//! Every quantity is dimensionless: lengths are measured in units of `1/k₀`
//! (so a lattice is fully described by its step `k₀d`) and rates in units of
//! the single-atom linewidth `Γ₀`. The transition wavelength is therefore
//! [`WAVELENGTH`] `= 2π`.
//!
//! The crate provides four independent routes to `Γ(k)`:
//!
//! * the exact pair sum over lattice sites ([`lattice::gamma_direct_sum`]),
//! * the angular average of the structure factor
//!   ([`lattice::gamma_structure_quadrature`]),
//! * reciprocal-lattice integral representations for large finite arrays
//!   ([`spectra2d::gamma2d_finite`], [`spectra3d::gamma3d_finite`]),
//! * closed-form infinite-lattice and large-`N` asymptotic formulas,
//!
//! plus a dense diagonalization oracle ([`oracle`]) for small lattices.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dipole;
mod error;
pub mod lattice;
pub mod oracle;
pub mod quad;
pub mod spectra2d;
pub mod spectra3d;

pub use dipole::{AngularDirection, Polarization};
pub use error::{Error, Result};
pub use lattice::{LatticeSpec, Method, ModeVector, ReciprocalVector, SpectrumPoint};
pub use quad::{QuadResult, QuadratureSpec};

/// Real 3-vector in units of `1/k₀` (positions) or `k₀` (wavevectors).
pub type Vec3 = nalgebra::Vector3<f64>;

/// Transition wavelength `λ₀` in units of `1/k₀`.
pub const WAVELENGTH: f64 = core::f64::consts::TAU;

/// Dimensionless lattice step `k₀d` for a step given as a fraction of `λ₀`.
pub fn k0d_from_wavelengths(fraction: f64) -> f64 {
    WAVELENGTH * fraction
}
