//! Lattice geometry, Bloch (generalized Dicke) modes and the exact mode
//! decay rate `Γ(k) = (1/N) Σ_jm Γ_jm e^{ik·r_jm}`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods once std is linked
use num_traits::Float;

use crate::dipole::{pair_decay_rate, AngularDirection, Polarization};
use crate::error::{Error, Result};
use crate::quad::{sphere_average_from, QuadratureSpec};
use crate::Vec3;

/// Default atom cap for the direct sum.
pub const DIRECT_SUM_CAP: usize = 40_000;

/// Regular cubic array: dimension, step `k₀d` and atoms per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    dim: u8,
    k0d: f64,
    counts: [usize; 3],
}

impl LatticeSpec {
    /// Axes beyond `dim` must have count 1.
    pub fn new(dim: u8, k0d: f64, counts: [usize; 3]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidLattice("dimension must be 1, 2 or 3"));
        }
        if !(k0d > 0.0 && k0d <= 2.0 * TAU) {
            return Err(Error::InvalidLattice("k0d must lie in (0, 4π]"));
        }
        if counts.contains(&0) {
            return Err(Error::InvalidLattice("atom counts must be positive"));
        }
        if counts[dim as usize..].iter().any(|&n| n != 1) {
            return Err(Error::InvalidLattice("unused axes must have count 1"));
        }
        Ok(Self { dim, k0d, counts })
    }

    pub fn chain(n: usize, k0d: f64) -> Result<Self> {
        Self::new(1, k0d, [n, 1, 1])
    }

    pub fn square(n: usize, k0d: f64) -> Result<Self> {
        Self::new(2, k0d, [n, n, 1])
    }

    pub fn cube(n: usize, k0d: f64) -> Result<Self> {
        Self::new(3, k0d, [n, n, n])
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn k0d(&self) -> f64 {
        self.k0d
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn atoms(&self) -> usize {
        self.counts.iter().product()
    }

    /// Mode vector at the zone grid point `k_α = 2π m_α/(N_α k₀d)`.
    pub fn zone_grid_point(&self, m: [i64; 3]) -> ModeVector {
        let mut k = Vec3::zeros();
        for a in 0..self.dim as usize {
            k[a] = TAU * m[a] as f64 / (self.counts[a] as f64 * self.k0d);
        }
        ModeVector { k }
    }
}

/// Quasi-momentum `k` in units of `k₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeVector {
    k: Vec3,
}

impl ModeVector {
    /// Zone-checked: `|k_α|·k₀d ≤ π` and `k_α = 0` on unused axes.
    pub fn new(k: Vec3, lattice: &LatticeSpec) -> Result<Self> {
        let m = Self::extended(k, lattice)?;
        let edge = PI * (1.0 + 1e-12);
        if k.iter().any(|c| c.abs() * lattice.k0d > edge) {
            return Err(Error::OutsideZone);
        }
        Ok(m)
    }

    /// Any finite `k`, for the periodic rates and for asymptotic formulas
    /// that are continued beyond the first zone.
    pub fn extended(k: Vec3, lattice: &LatticeSpec) -> Result<Self> {
        if k.iter().any(|c| !c.is_finite()) {
            return Err(Error::OutsideZone);
        }
        if k.iter().skip(lattice.dim as usize).any(|&c| c != 0.0) {
            return Err(Error::InvalidLattice("mode vector has components on unused axes"));
        }
        Ok(Self { k })
    }

    /// `k` mapped into the first zone by subtracting a reciprocal vector.
    pub fn folded(k: Vec3, lattice: &LatticeSpec) -> Result<Self> {
        let m = Self::extended(k, lattice)?;
        let b = TAU / lattice.k0d;
        Ok(Self { k: m.k.map(|c| c - b * (c / b).round()) })
    }

    pub fn k(&self) -> Vec3 {
        self.k
    }
}

/// Reciprocal lattice vector `g = (2π/k₀d)·m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReciprocalVector {
    pub m: [i64; 3],
}

impl ReciprocalVector {
    pub fn g(&self, k0d: f64) -> Vec3 {
        Vec3::new(self.m[0] as f64, self.m[1] as f64, self.m[2] as f64) * (TAU / k0d)
    }
}

/// Which route produced a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    DirectSum,
    AngularSf,
    FiniteIntegral,
    Infinite,
    Asymptotic,
    Radial,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::DirectSum, Method::AngularSf, Method::FiniteIntegral, Method::Infinite, Method::Asymptotic, Method::Radial];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::DirectSum => "direct_sum",
            Method::AngularSf => "angular_sf",
            Method::FiniteIntegral => "finite_integral",
            Method::Infinite => "infinite",
            Method::Asymptotic => "asymptotic",
            Method::Radial => "radial",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.as_str() == s).ok_or(Error::Domain("unknown method"))
    }
}

/// One rate with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub mode: ModeVector,
    pub method: Method,
    pub gamma: f64,
    pub err: f64,
    pub converged: bool,
}

/// Site positions `k₀d·(j_x, j_y, j_z)`, `j_x` outermost and `j_z` fastest.
pub fn positions(lattice: &LatticeSpec) -> Vec<Vec3> {
    let [nx, ny, nz] = lattice.counts;
    let d = lattice.k0d;
    let mut out = Vec::with_capacity(lattice.atoms());
    for jx in 0..nx {
        for jy in 0..ny {
            for jz in 0..nz {
                out.push(Vec3::new(jx as f64, jy as f64, jz as f64) * d);
            }
        }
    }
    out
}

/// Reduces `t` to `δ = t − mπ ∈ [−π/2, π/2]`, returning `(δ, m)`.
fn reduce_half_period(t: f64) -> (f64, i64) {
    let m = (t / PI).round();
    (t - m * PI, m as i64)
}

/// `sin(Nδ)/sin δ` for reduced `δ`, with the series limit near zero.
fn dirichlet_reduced(n: usize, delta: f64) -> f64 {
    let nf = n as f64;
    if delta.abs() < 1e-5 {
        nf * (1.0 - (nf * nf - 1.0) * delta * delta / 6.0)
    } else {
        (nf * delta).sin() / delta.sin()
    }
}

/// `sin²(N t)/sin² t` with removable singularities resolved.
pub fn dirichlet_sq(n: usize, t: f64) -> f64 {
    if n == 1 {
        return 1.0;
    }
    let (delta, _) = reduce_half_period(t);
    let r = dirichlet_reduced(n, delta);
    r * r
}

/// Unnormalized overlap `Σ_j e^{i(k−k')·r_j}` of two Bloch modes; equals `N`
/// on the diagonal.
///
/// Per axis the geometric sum is `e^{iθ(N−1)/2}·sin(Nθ/2)/sin(θ/2)` with
/// `θ = Δk·k₀d`, so the phase is referred to the array centre.
pub fn overlap(k: &ModeVector, k_prime: &ModeVector, lattice: &LatticeSpec) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    for a in 0..3 {
        let n = lattice.counts[a];
        if n == 1 {
            continue;
        }
        let theta = (k.k[a] - k_prime.k[a]) * lattice.k0d;
        let (delta, m) = reduce_half_period(0.5 * theta);
        let sign = if (m * (n as i64 - 1)).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let amp = sign * dirichlet_reduced(n, delta);
        out *= Complex64::from_polar(amp, 0.5 * theta * (n as f64 - 1.0));
    }
    out
}

/// `|F(k)|²` for emission direction `dir`.
pub fn structure_factor_sq(k: &ModeVector, dir: &AngularDirection, lattice: &LatticeSpec) -> f64 {
    let u = dir.unit();
    let mut out = 1.0;
    for a in 0..3 {
        out *= dirichlet_sq(lattice.counts[a], 0.5 * (k.k[a] - u[a]) * lattice.k0d);
    }
    out
}

/// Exact `Γ(k)` by summing over displacement classes, capped at
/// [`DIRECT_SUM_CAP`] atoms.
pub fn gamma_direct_sum(k: &ModeVector, lattice: &LatticeSpec, d: &Polarization) -> Result<SpectrumPoint> {
    gamma_direct_sum_with_cap(k, lattice, d, DIRECT_SUM_CAP)
}

/// [`gamma_direct_sum`] with a caller-chosen atom cap.
///
/// `Γ_jm` depends only on `r_j − r_m`, so each displacement `Δ` (in lattice
/// units) is visited once with multiplicity `Π_α (N_α − |Δ_α|)`.
pub fn gamma_direct_sum_with_cap(k: &ModeVector, lattice: &LatticeSpec, d: &Polarization, cap: usize) -> Result<SpectrumPoint> {
    let atoms = lattice.atoms();
    if atoms > cap {
        return Err(Error::TooLarge { atoms, cap });
    }
    let (sum, scale) = displacement_sum(k, lattice, |u| pair_decay_rate(u, d));
    let n = atoms as f64;
    let (re, im) = (sum.re / n, sum.im / n);
    if im.abs() > 1e-9 * re.abs().max(scale / n) {
        return Err(Error::SymmetryCheck { real: re, imag: im });
    }
    Ok(SpectrumPoint { mode: *k, method: Method::DirectSum, gamma: re, err: 0.0, converged: true })
}

/// `Σ_Δ mult(Δ)·f(Δ·k₀d)·e^{ik·Δ k₀d}` and `Σ |mult·f|`, the scale used for the
/// cancellation check.
pub(crate) fn displacement_sum<F: FnMut(&Vec3) -> f64>(k: &ModeVector, lattice: &LatticeSpec, mut f: F) -> (Complex64, f64) {
    let [nx, ny, nz] = lattice.counts.map(|n| n as i64);
    let dd = lattice.k0d;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for dx in -(nx - 1)..nx {
        let mx = (nx - dx.abs()) as f64;
        for dy in -(ny - 1)..ny {
            let my = mx * (ny - dy.abs()) as f64;
            for dz in -(nz - 1)..nz {
                let mult = my * (nz - dz.abs()) as f64;
                let u = Vec3::new(dx as f64, dy as f64, dz as f64) * dd;
                let term = mult * f(&u);
                scale += term.abs();
                sum += Complex64::from_polar(term, k.k.dot(&u));
            }
        }
    }
    (sum, scale)
}

/// `Γ(k) = (3/2N)⟨(1 − (d̂·k̂)²)|F|²⟩` by angular quadrature.
///
/// `|F|²` is a trigonometric polynomial of degree `(N_α − 1)k₀d` in each
/// component of `k̂`, so the starting node counts grow with `N_max·k₀d`.
pub fn gamma_structure_quadrature(
    k: &ModeVector,
    lattice: &LatticeSpec,
    d: &Polarization,
    spec: &QuadratureSpec,
) -> Result<SpectrumPoint> {
    spec.validate()?;
    let dv = d.vector();
    let n_max = *lattice.counts.iter().max().unwrap_or(&1) as f64;
    let span = n_max * lattice.k0d;
    let n_theta = spec.n_theta.max((0.6 * span) as usize + 16);
    let n_phi = spec.n_phi.max((1.2 * span) as usize + 32);
    let r = sphere_average_from(
        |dir: &AngularDirection| {
            let w = 1.0 - dv.dot(&dir.unit()).powi(2);
            w * structure_factor_sq(k, dir, lattice)
        },
        spec,
        n_theta,
        n_phi,
    );
    let pref = 1.5 / lattice.atoms() as f64;
    Ok(SpectrumPoint {
        mode: *k,
        method: Method::AngularSf,
        gamma: pref * r.value,
        err: pref * r.err_estimate,
        converged: r.converged,
    })
}
