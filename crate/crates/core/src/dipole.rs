//! Free-space dipole-dipole couplings in dimensionless units.
//!
//! Distances are `x = k₀r`, rates are in units of `Γ₀`. Only parallel dipole
//! configurations are modelled: every atom shares the same [`Polarization`].

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods once std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad::{sphere_average_from, QuadResult, QuadratureSpec};
use crate::Vec3;

/// Below this distance the pair terms use their Taylor series. The closed form
/// of `cos x/x² − sin x/x³` loses about `ε/x²` to cancellation, so the cutoff
/// sits where the truncated series and the closed form both stay below `1e-12`.
const SERIES_CUTOFF: f64 = 0.1;

/// Unit dipole orientation shared by all atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarization(Vec3);

impl Polarization {
    pub const X: Self = Self(Vec3::new(1.0, 0.0, 0.0));
    pub const Y: Self = Self(Vec3::new(0.0, 1.0, 0.0));
    pub const Z: Self = Self(Vec3::new(0.0, 0.0, 1.0));

    /// Accepts `d` only if it is a unit vector to within `1e-12`.
    pub fn new(d: Vec3) -> Result<Self> {
        let n = d.norm();
        if (n - 1.0).abs() <= 1e-12 {
            Ok(Self(d))
        } else {
            Err(Error::InvalidPolarization(n))
        }
    }

    /// Normalizes any non-zero finite vector.
    pub fn normalized(d: Vec3) -> Result<Self> {
        let n = d.norm();
        if n > 0.0 && n.is_finite() {
            Ok(Self(d / n))
        } else {
            Err(Error::InvalidPolarization(n))
        }
    }

    pub fn vector(&self) -> Vec3 {
        self.0
    }

    /// True when `d̂` lies in the `xy` plane of a 2D array.
    pub fn is_in_plane(&self) -> bool {
        self.0.z.abs() <= 1e-12
    }

    /// True when `d̂ = ±ẑ`.
    pub fn is_perpendicular(&self) -> bool {
        (self.0.z.abs() - 1.0).abs() <= 1e-12
    }
}

/// Direction `k̂₀` on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularDirection {
    theta: f64,
    phi: f64,
    unit: Vec3,
}

impl AngularDirection {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        Self::from_parts(theta, phi, st, ct)
    }

    /// Assembles a direction from precomputed `sin θ` and `cos θ`, as the
    /// Gauss–Legendre rules sample `cos θ` directly.
    pub(crate) fn from_parts(theta: f64, phi: f64, sin_theta: f64, cos_theta: f64) -> Self {
        let (sp, cp) = phi.sin_cos();
        Self { theta, phi, unit: Vec3::new(sin_theta * cp, sin_theta * sp, cos_theta) }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cos_theta(&self) -> f64 {
        self.unit.z
    }

    pub fn unit(&self) -> Vec3 {
        self.unit
    }
}

/// Scalar Green's function `e^{ix}/x`.
pub fn scalar_green(x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveDistance(x));
    }
    Ok(Complex64::from_polar(1.0 / x, x))
}

/// The two radial functions multiplying `(1 − c²)` and `(1 − 3c²)` in the
/// imaginary part of the coupling: `sin x/x` and `cos x/x² − sin x/x³`.
fn radial_im(x: f64) -> (f64, f64) {
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        let f1 = 1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 / 362_880.0)));
        let f2 = -1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 * (1.0 / 45_360.0 - x2 / 3_991_680.0)));
        (f1, f2)
    } else {
        let (s, c) = x.sin_cos();
        (s / x, c / (x * x) - s / (x * x * x))
    }
}

fn projection(u: &Vec3, d: &Polarization) -> (f64, f64) {
    let x = u.norm();
    let c = if x > 0.0 { d.vector().dot(u) / x } else { 0.0 };
    (x, c * c)
}

/// Pairwise decay term `Γ_jm/Γ₀` for separation `u` (units of `1/k₀`).
///
/// Total: at `u = 0` it returns the single-atom rate, exactly 1.
pub fn pair_decay_rate(u: &Vec3, d: &Polarization) -> f64 {
    let (x, c2) = projection(u, d);
    if x == 0.0 {
        return 1.0;
    }
    let (f1, f2) = radial_im(x);
    1.5 * ((1.0 - c2) * f1 + (1.0 - 3.0 * c2) * f2)
}

/// Full complex coupling `G_jm/Γ₀`; the real part gives the dipole shift and
/// diverges as `1/x³`, so `u = 0` is rejected.
pub fn pair_coupling(u: &Vec3, d: &Polarization) -> Result<Complex64> {
    let (x, c2) = projection(u, d);
    if x == 0.0 {
        return Err(Error::ZeroSeparation);
    }
    let (f1, f2) = radial_im(x);
    let (s, c) = x.sin_cos();
    let g1 = c / x;
    let g2 = -s / (x * x) - c / (x * x * x);
    let re = 1.5 * ((1.0 - c2) * g1 + (1.0 - 3.0 * c2) * g2);
    let im = 1.5 * ((1.0 - c2) * f1 + (1.0 - 3.0 * c2) * f2);
    Ok(Complex64::new(re, im))
}

/// `Γ_jm` from the angular average of the photon-exchange phase,
/// `(3/2)⟨(1 − (d̂·k̂)²) e^{−ik̂·u}⟩`.
///
/// The imaginary part of the average cancels by inversion symmetry; if it
/// exceeds `1e-10` the result is reported as not converged.
pub fn pair_decay_rate_angular(u: &Vec3, d: &Polarization, spec: &QuadratureSpec) -> Result<QuadResult<f64>> {
    spec.validate()?;
    let dv = d.vector();
    let x = u.norm();
    // e^{-ix cos γ} needs about x/2 Gauss nodes and x uniform azimuth nodes
    let n_theta = spec.n_theta.max((x / 2.0) as usize + 16);
    let n_phi = spec.n_phi.max(x as usize + 32);
    let r = sphere_average_from(
        |dir: &AngularDirection| {
            let k = dir.unit();
            let w = 1.0 - dv.dot(&k).powi(2);
            Complex64::from_polar(w, -k.dot(u))
        },
        spec,
        n_theta,
        n_phi,
    );
    let imag_ok = r.value.im.abs() < 1e-10;
    Ok(QuadResult { value: 1.5 * r.value.re, err_estimate: 1.5 * r.err_estimate, converged: r.converged && imag_ok })
}
