//! Dense diagonalization of the coupled-dipole matrix for small lattices.
//!
//! `K_jj = i/2`, `K_jm = G_jm/2` for `j ≠ m`, so `2·Im K` is the real symmetric
//! decay kernel `Γ_jm` with unit diagonal. The collective Lamb shift of the
//! diagonal is dropped; everything validated here depends on `Im K` only.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods once std is linked
use num_traits::Float;

use crate::dipole::{pair_coupling, pair_decay_rate, Polarization};
use crate::error::{Error, Result};
use crate::lattice::{positions, LatticeSpec, ModeVector};
use crate::Vec3;

/// Largest lattice accepted for dense matrices.
pub const MATRIX_CAP: usize = 4096;

fn check_cap(lattice: &LatticeSpec) -> Result<usize> {
    let atoms = lattice.atoms();
    if atoms > MATRIX_CAP {
        return Err(Error::TooLarge { atoms, cap: MATRIX_CAP });
    }
    Ok(atoms)
}

/// Non-Hermitian, complex symmetric coupling matrix `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub entries: DMatrix<Complex64>,
}

impl CouplingMatrix {
    pub fn build(lattice: &LatticeSpec, d: &Polarization) -> Result<Self> {
        let n = check_cap(lattice)?;
        let r = positions(lattice);
        let mut k = DMatrix::from_element(n, n, Complex64::new(0.0, 0.5));
        for j in 0..n {
            for m in (j + 1)..n {
                let g = pair_coupling(&(r[j] - r[m]), d)? * 0.5;
                k[(j, m)] = g;
                k[(m, j)] = g;
            }
        }
        Ok(Self { entries: k })
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// `2·Im K`, the real symmetric decay kernel.
    pub fn decay_kernel(&self) -> DMatrix<f64> {
        self.entries.map(|z| 2.0 * z.im)
    }
}

/// Eigen decay rates `Γ_n = 2·Im λ_n`, ascending, with the matching
/// `Re λ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenRates {
    pub rates: Vec<f64>,
    pub shifts: Vec<f64>,
}

impl EigenRates {
    pub fn sum(&self) -> f64 {
        self.rates.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.rates.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.rates.last().copied().unwrap_or(0.0)
    }
}

/// Complex eigenvalues of `K` through a Schur decomposition.
pub fn eigen_rates(lattice: &LatticeSpec, d: &Polarization) -> Result<EigenRates> {
    let k = CouplingMatrix::build(lattice, d)?;
    eigen_rates_of(&k)
}

pub fn eigen_rates_of(k: &CouplingMatrix) -> Result<EigenRates> {
    let schur = nalgebra::Schur::try_new(k.entries.clone(), 1e-14, 10_000).ok_or(Error::EigenFailure)?;
    let lambda = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    let mut pairs: Vec<(f64, f64)> = lambda.iter().map(|z| (2.0 * z.im, z.re)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(EigenRates { rates: pairs.iter().map(|p| p.0).collect(), shifts: pairs.iter().map(|p| p.1).collect() })
}

/// Eigenvalues of the real symmetric kernel `Γ_jm`, ascending. This is a
/// different spectrum from [`eigen_rates`] in general; it bounds the mode
/// expectation values and carries the same trace.
pub fn decay_kernel_rates(lattice: &LatticeSpec, d: &Polarization) -> Result<Vec<f64>> {
    decay_kernel_rates_with(lattice, |u| pair_decay_rate(u, d))
}

/// [`decay_kernel_rates`] for an arbitrary pair kernel `u ↦ Γ(u)`, with the
/// diagonal taken from `Γ(0)`.
pub fn decay_kernel_rates_with<F: Fn(&Vec3) -> f64>(lattice: &LatticeSpec, kernel: F) -> Result<Vec<f64>> {
    let m = decay_kernel_matrix_with(lattice, kernel)?;
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn decay_kernel_matrix_with<F: Fn(&Vec3) -> f64>(lattice: &LatticeSpec, kernel: F) -> Result<DMatrix<f64>> {
    let n = check_cap(lattice)?;
    let r = positions(lattice);
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = kernel(&Vec3::zeros());
        for l in (j + 1)..n {
            let g = kernel(&(r[j] - r[l]));
            m[(j, l)] = g;
            m[(l, j)] = g;
        }
    }
    Ok(m)
}

/// `2·Im(v†Kv)` for the normalized Bloch vector `v_j = e^{ik·r_j}/√N`.
pub fn gamma_expectation(k: &ModeVector, lattice: &LatticeSpec, d: &Polarization) -> Result<f64> {
    let km = CouplingMatrix::build(lattice, d)?;
    Ok(gamma_expectation_of(k, lattice, &km))
}

pub fn gamma_expectation_of(k: &ModeVector, lattice: &LatticeSpec, km: &CouplingMatrix) -> f64 {
    let r = positions(lattice);
    let n = r.len();
    let scale = 1.0 / (n as f64).sqrt();
    let v = DVector::from_iterator(n, r.iter().map(|p| Complex64::from_polar(scale, k.k().dot(p))));
    let kv = &km.entries * &v;
    let e: Complex64 = v.iter().zip(kv.iter()).map(|(a, b)| a.conj() * b).sum();
    2.0 * e.im
}
