//! Rates of cubic 3D arrays.
//!
//! In 3D every emission direction is admissible for some `k`, so the finite
//! rate keeps both `k̂_z = ±√(1 − C²)` branches; in the infinite limit each
//! reciprocal vector contributes a delta shell `|k − g| = 1` instead of a
//! light circle.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::dipole::Polarization;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Method, ModeVector, ReciprocalVector, SpectrumPoint};
use crate::quad::{integrate_ellipse_chart, sinc2, AdmissibleEllipse, DiscPoint, Kernel2d, QuadratureSpec};
use crate::spectra2d::{sum_window_terms, window_terms};
#[allow(unused_imports)] // shadowed by inherent methods once std is linked
use num_traits::Float;

/// Factor between the `d²C` measure and the emission solid angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObliquityFactor {
    /// `dΩ = d²C/√(1 − C²)`, the Jacobian of `k̂ ↦ (k̂_x, k̂_y)`.
    Cosine,
    /// `d²C/(1 − √(1 − C²))`, integrated up to `√(1 − C²) = 1 − cutoff`; this
    /// weight diverges logarithmically at `C = 0`.
    OneMinusCosine { cutoff: f64 },
}

/// Finite-cube rate,
/// `(3N/8π) Σ_g ∫₀¹ds ∫₀^{2π}dψ sinc²(v_x) sinc²(v_y)
///  [W₊ sinc²((q_z − s)k₀dN_z/2) + W₋ sinc²((q_z + s)k₀dN_z/2)]`,
/// with `q = k − g`, `C = √(1−s²)(cos ψ, sin ψ)`, `W± = 1 − (d̂∥·C ± d̂_z s)²`.
pub fn gamma3d_finite(k: &ModeVector, lattice: &LatticeSpec, d: &Polarization, spec: &QuadratureSpec) -> Result<SpectrumPoint> {
    gamma3d_finite_with(k, lattice, d, spec, ObliquityFactor::Cosine)
}

/// [`gamma3d_finite`] with a selectable obliquity weight.
pub fn gamma3d_finite_with(
    k: &ModeVector,
    lattice: &LatticeSpec,
    d: &Polarization,
    spec: &QuadratureSpec,
    obliquity: ObliquityFactor,
) -> Result<SpectrumPoint> {
    spec.validate()?;
    let [nx, ny, nz] = lattice.counts();
    if lattice.dim() != 3 || nx < 4 || ny < 4 || nz < 4 {
        return Err(Error::Domain("finite 3D integral needs a 3D array with every N >= 4"));
    }
    let (s_max, extra): (f64, fn(f64) -> f64) = match obliquity {
        ObliquityFactor::Cosine => (1.0, |_| 1.0),
        ObliquityFactor::OneMinusCosine { cutoff } => {
            if !(cutoff > 0.0 && cutoff < 1.0) {
                return Err(Error::Domain("cutoff must lie in (0, 1)"));
            }
            (1.0 - cutoff, |s| s / (1.0 - s))
        }
    };
    let dd = lattice.k0d();
    let dv = d.vector();
    let semi = [dd * nx as f64 / 2.0, dd * ny as f64 / 2.0];
    let half_z = dd * nz as f64 / 2.0;
    let kv = k.k();
    let terms = window_terms(k, lattice, spec.window());
    let total = sum_window_terms(&terms, spec, |g, tol_abs| {
        let q = kv - g.g(dd);
        let ellipse = AdmissibleEllipse { center: [q.x * semi[0], q.y * semi[1]], semi_axes: semi };
        let h = |p: &DiscPoint| {
            let s = p.rim;
            let a = dv.x * p.c[0] + dv.y * p.c[1];
            let b = dv.z * s;
            let up = (1.0 - (a + b).powi(2)) * sinc2((q.z - s) * half_z);
            let down = (1.0 - (a - b).powi(2)) * sinc2((q.z + s) * half_z);
            (up + down) * extra(s)
        };
        integrate_ellipse_chart(Kernel2d::Sinc2, h, &ellipse, s_max, spec, tol_abs)
    });
    // (3N/8π)∫ds dψ = (3N_z/(2π(k₀d)²))∫d²v'
    let pref = 3.0 * nz as f64 / (2.0 * PI * dd * dd);
    Ok(SpectrumPoint {
        mode: *k,
        method: Method::FiniteIntegral,
        gamma: pref * total.value,
        err: pref * total.err_estimate,
        converged: total.converged,
    })
}

/// One light shell `|k − g| = 1` near `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellDescriptor {
    pub g: ReciprocalVector,
    /// `||k − g| − 1|`.
    pub shell_distance: f64,
    /// `1 − (d̂·(k − g)/|k − g|)²`.
    pub weight: f64,
}

/// Infinite-lattice rate: zero off every shell, a delta on a shell.
#[derive(Debug, Clone, PartialEq)]
pub enum ShellRate {
    Dark,
    /// `Γ = shell_prefactor(k₀d)·Σ weight·δ(|k − g| − 1)`.
    Singular(Vec<ShellDescriptor>),
}

impl ShellRate {
    /// Pointwise value where it exists: `0` off shell, `None` on a shell.
    pub fn value(&self) -> Option<f64> {
        match self {
            ShellRate::Dark => Some(0.0),
            ShellRate::Singular(_) => None,
        }
    }
}

/// Strength `3π²/(k₀d)³` multiplying each delta shell.
pub fn shell_prefactor(k0d: f64) -> f64 {
    3.0 * PI * PI / k0d.powi(3)
}

/// Every reciprocal vector whose light shell passes within `band` of `k`.
pub fn gamma3d_infinite_shell(k: &ModeVector, k0d: f64, d: &Polarization, band: f64) -> Vec<ShellDescriptor> {
    let kv = k.k();
    let dv = d.vector();
    let bound = ((kv.norm() + 1.0 + band) * k0d / TAU).ceil() as i64 + 1;
    let mut out = Vec::new();
    for mx in -bound..=bound {
        for my in -bound..=bound {
            for mz in -bound..=bound {
                let g = ReciprocalVector { m: [mx, my, mz] };
                let q = kv - g.g(k0d);
                let r = q.norm();
                let shell_distance = (r - 1.0).abs();
                if shell_distance < band {
                    let c = if r > 0.0 { dv.dot(&q) / r } else { 0.0 };
                    out.push(ShellDescriptor { g, shell_distance, weight: (1.0 - c * c).clamp(0.0, 1.0) });
                }
            }
        }
    }
    out
}

/// [`gamma3d_infinite_shell`] classified as dark or singular.
pub fn gamma3d_infinite(k: &ModeVector, k0d: f64, d: &Polarization, band: f64) -> ShellRate {
    let shells = gamma3d_infinite_shell(k, k0d, d, band);
    if shells.is_empty() {
        ShellRate::Dark
    } else {
        ShellRate::Singular(shells)
    }
}

/// Rescaled detuning from the shell along the `k_x` axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisEta {
    /// `η = (k₀dN_x/2)(κ − 1)`.
    pub eta: f64,
}

impl AxisEta {
    pub fn new(kx: f64, lattice: &LatticeSpec) -> Self {
        Self { eta: lattice.k0d() * lattice.counts()[0] as f64 / 2.0 * (kx - 1.0) }
    }
}

/// Axis rate with its validity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisApprox {
    pub value: f64,
    pub eta: AxisEta,
    /// Set when `N_x/(k₀d·N_z²) > 0.05`, the size of the first dropped term.
    pub outside_validity: bool,
}

/// Large-cube rate on the `k_x` axis for `d̂ = ẑ`:
/// `(3πN_x/(2(k₀d)²))·sinc²(η)`.
pub fn gamma3d_axis_approx(kx: f64, lattice: &LatticeSpec) -> AxisApprox {
    let [nx, _, nz] = lattice.counts();
    let d = lattice.k0d();
    let eta = AxisEta::new(kx, lattice);
    AxisApprox {
        value: 3.0 * PI * nx as f64 / (2.0 * d * d) * sinc2(eta.eta),
        eta,
        outside_validity: nx as f64 / (d * (nz * nz) as f64) > 0.05,
    }
}

/// Resonant optical thickness `b₀ = (3π/4)·N/(L_yL_z)` with `L_α = N_αk₀d`.
pub fn optical_thickness(lattice: &LatticeSpec) -> Result<f64> {
    if lattice.dim() != 3 {
        return Err(Error::Domain("optical thickness is defined for 3D arrays"));
    }
    let [nx, ny, nz] = lattice.counts().map(|n| n as f64);
    let d = lattice.k0d();
    Ok(0.75 * PI * (nx * ny * nz) / ((ny * d) * (nz * d)))
}
