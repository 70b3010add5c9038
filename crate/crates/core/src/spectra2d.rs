//! Rates of square arrays in the `xy` plane.
//!
//! Finite arrays use the reciprocal-sum integral over the admissible disc
//! `|C| < 1` of emission directions; infinite arrays collapse it onto the
//! light circles `|k − g| = 1`. Along the `k_x` axis with `d̂ = ẑ` the integral
//! reduces to a single `sinc²` integral with an inverse-square-root endpoint,
//! which has closed forms once `sinc²(v)` is replaced by `1/(1 + v²)`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods once std is linked
use num_traits::Float;

use crate::dipole::Polarization;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Method, ModeVector, ReciprocalVector, SpectrumPoint};
use crate::quad::{
    integrate_2d_sinc2, integrate_adaptive, integrate_semi_infinite_sqrt_singular, integrate_sinc2_sqrt_singular, lorentzian,
    AdmissibleEllipse, DiscPoint, Domain2d, Kernel2d, QuadResult, QuadratureSpec, Tolerance,
};

/// Distance from `|k − g| = 1` below which the infinite-lattice rate is
/// reported as divergent.
pub const LIGHT_CIRCLE_EPS: f64 = 1e-9;

/// Every `g` with `|k − g| < 1`, that is every light circle containing `k`.
pub fn reciprocal_circle_terms(k: &ModeVector, k0d: f64) -> Vec<ReciprocalVector> {
    let kv = k.k();
    let kn = (kv.x * kv.x + kv.y * kv.y).sqrt();
    let bound = ((1.0 + kn) * k0d / TAU).ceil() as i64 + 1;
    let mut out = Vec::new();
    for mx in -bound..=bound {
        for my in -bound..=bound {
            let r = ReciprocalVector { m: [mx, my, 0] };
            let q = kv - r.g(k0d);
            if q.x * q.x + q.y * q.y < 1.0 {
                out.push(r);
            }
        }
    }
    out
}

fn light_circle_terms(k: &ModeVector, k0d: f64) -> Result<Vec<(f64, f64, f64)>> {
    let kv = k.k();
    let kn = (kv.x * kv.x + kv.y * kv.y).sqrt();
    let bound = ((1.0 + kn) * k0d / TAU).ceil() as i64 + 1;
    let mut out = Vec::new();
    for mx in -bound..=bound {
        for my in -bound..=bound {
            let q = kv - ReciprocalVector { m: [mx, my, 0] }.g(k0d);
            let q2 = q.x * q.x + q.y * q.y;
            if (q2.sqrt() - 1.0).abs() < LIGHT_CIRCLE_EPS {
                return Err(Error::Singular);
            }
            if q2 < 1.0 {
                out.push((q.x, q.y, (1.0 - q2).sqrt()));
            }
        }
    }
    Ok(out)
}

fn require_2d(k: &ModeVector) -> Result<()> {
    if k.k().z != 0.0 {
        return Err(Error::Domain("2D rates need k_z = 0"));
    }
    Ok(())
}

/// Infinite-array rate `(3π/(k₀d)²) Σ_g (1 − (d̂∥·q)² − d̂_z² w²)/w`, with
/// `q = k − g` and `w = √(1 − |q|²)`.
///
/// The weight is the average over the two emission hemispheres `k̂_z = ±w`;
/// it reduces to the familiar parallel and perpendicular forms and stays
/// correct for tilted dipoles. Zero outside every light circle.
pub fn gamma2d_infinite(k: &ModeVector, k0d: f64, d: &Polarization) -> Result<f64> {
    require_2d(k)?;
    let dv = d.vector();
    let pref = 3.0 * PI / (k0d * k0d);
    let sum: f64 = light_circle_terms(k, k0d)?
        .into_iter()
        .map(|(qx, qy, w)| {
            let a = dv.x * qx + dv.y * qy;
            (1.0 - a * a - dv.z * dv.z * w * w) / w
        })
        .sum();
    Ok(pref * sum)
}

/// In-plane dipoles: `(3π/(k₀d)²) Σ_g (1 − (d̂·q)²)/√(1 − |q|²)`.
pub fn gamma2d_infinite_parallel(k: &ModeVector, k0d: f64, d: &Polarization) -> Result<f64> {
    require_2d(k)?;
    if !d.is_in_plane() {
        return Err(Error::Domain("parallel form needs an in-plane polarization"));
    }
    let dv = d.vector();
    let sum: f64 = light_circle_terms(k, k0d)?.into_iter().map(|(qx, qy, w)| (1.0 - (dv.x * qx + dv.y * qy).powi(2)) / w).sum();
    Ok(3.0 * PI / (k0d * k0d) * sum)
}

/// Dipoles along `ẑ`: `(3π/(k₀d)²) Σ_g |q|²/√(1 − |q|²)`.
pub fn gamma2d_infinite_perpendicular(k: &ModeVector, k0d: f64) -> Result<f64> {
    require_2d(k)?;
    let sum: f64 = light_circle_terms(k, k0d)?.into_iter().map(|(qx, qy, w)| (qx * qx + qy * qy) / w).sum();
    Ok(3.0 * PI / (k0d * k0d) * sum)
}

/// Reciprocal vectors whose admissible region reaches the `sinc²` window.
///
/// Along axis `α` the rescaled argument cannot drop below
/// `v_α = max(0, |k_α − g_α| − 1)·k₀d·N_α/2`, and the product kernel decays
/// as `Π 1/v_α²`; a term is kept when `Π max(1, v_α) ≤ V_max`.
pub(crate) fn window_terms(k: &ModeVector, lattice: &LatticeSpec, window: f64) -> Vec<ReciprocalVector> {
    let kv = k.k();
    let dim = lattice.dim() as usize;
    let d = lattice.k0d();
    let counts = lattice.counts();
    let b = TAU / d;
    let half = |a: usize| d * counts[a] as f64 / 2.0;
    let mut ranges = [(0i64, 0i64); 3];
    for (a, range) in ranges.iter_mut().enumerate().take(dim) {
        let reach = 1.0 + window / half(a);
        *range = (((kv[a] - reach) / b).ceil() as i64, ((kv[a] + reach) / b).floor() as i64);
    }
    let factor = |a: usize, m: i64| {
        let gap = ((kv[a] - b * m as f64).abs() - 1.0).max(0.0);
        (gap * half(a)).max(1.0)
    };
    let mut out = Vec::new();
    for mx in ranges[0].0..=ranges[0].1 {
        let fx = factor(0, mx);
        if fx > window {
            continue;
        }
        for my in ranges[1].0..=ranges[1].1 {
            let fy = if dim > 1 { factor(1, my) } else { 1.0 };
            if fx * fy > window {
                continue;
            }
            for mz in ranges[2].0..=ranges[2].1 {
                let fz = if dim > 2 { factor(2, mz) } else { 1.0 };
                if fx * fy * fz <= window {
                    out.push(ReciprocalVector { m: [mx, my, mz] });
                }
            }
        }
    }
    // nearest terms first, so the dominant value sets the absolute tolerance
    out.sort_by(|p, q| {
        let dist = |r: &ReciprocalVector| (kv - r.g(d)).norm();
        dist(p).total_cmp(&dist(q)).then(p.cmp(q))
    });
    out
}

/// Runs `term` over the window and accumulates values and error estimates.
pub(crate) fn sum_window_terms<F>(terms: &[ReciprocalVector], spec: &QuadratureSpec, mut term: F) -> QuadResult<f64>
where
    F: FnMut(&ReciprocalVector, f64) -> QuadResult<f64>,
{
    let mut value = 0.0;
    let mut err = 0.0;
    let mut converged = true;
    for g in terms {
        let tol_abs = spec.tol_rel * value.abs().max(1e-8);
        let r = term(g, tol_abs);
        value += r.value;
        err += r.err_estimate;
        converged &= r.converged || r.err_estimate <= tol_abs;
    }
    QuadResult { value, err_estimate: err, converged }
}

/// Finite-array rate from the reciprocal-sum integral,
/// `(3N_xN_y/4π) Σ_g ∫₀¹ds ∫₀^{2π}dψ sinc²(v_x) sinc²(v_y) (1 − a² − b²)`.
///
/// Here `C = √(1−s²)(cos ψ, sin ψ)` is the in-plane part of the emission
/// direction, `v = (k − g − C)·k₀dN/2`, `a = d̂∥·C` and `b = d̂_z s`. The
/// `(s, ψ)` chart absorbs the `1/√(1 − C²)` rim singularity. The sum is exact
/// before truncation; the window of [`QuadratureSpec::window`] bounds the
/// neglected `sinc²` tails.
pub fn gamma2d_finite(k: &ModeVector, lattice: &LatticeSpec, d: &Polarization, spec: &QuadratureSpec) -> Result<SpectrumPoint> {
    spec.validate()?;
    require_2d(k)?;
    finite_2d_inner(k, lattice, d, spec, &window_terms(k, lattice, spec.window()))
}

/// The single reciprocal term `g` of [`gamma2d_finite`]. The large-`N` axis
/// forms approximate the `g = 0` term alone.
pub fn gamma2d_finite_term(
    k: &ModeVector,
    lattice: &LatticeSpec,
    d: &Polarization,
    spec: &QuadratureSpec,
    g: ReciprocalVector,
) -> Result<SpectrumPoint> {
    spec.validate()?;
    require_2d(k)?;
    if g.m[2] != 0 {
        return Err(Error::Domain("reciprocal vector of a 2D array must have m_z = 0"));
    }
    finite_2d_inner(k, lattice, d, spec, &[g])
}

fn finite_2d_inner(
    k: &ModeVector,
    lattice: &LatticeSpec,
    d: &Polarization,
    spec: &QuadratureSpec,
    terms: &[ReciprocalVector],
) -> Result<SpectrumPoint> {
    let [nx, ny, _] = lattice.counts();
    if lattice.dim() != 2 || nx < 4 || ny < 4 {
        return Err(Error::Domain("finite 2D integral needs a 2D array with N_x, N_y >= 4"));
    }
    let dd = lattice.k0d();
    let dv = d.vector();
    let semi = [dd * nx as f64 / 2.0, dd * ny as f64 / 2.0];
    let weight = |p: &DiscPoint| {
        let a = dv.x * p.c[0] + dv.y * p.c[1];
        let b = dv.z * p.rim;
        1.0 - a * a - b * b
    };
    let kv = k.k();
    let total = sum_window_terms(terms, spec, |g, tol_abs| {
        let q = kv - g.g(dd);
        let ellipse = AdmissibleEllipse { center: [q.x * semi[0], q.y * semi[1]], semi_axes: semi };
        integrate_2d_sinc2(Kernel2d::Sinc2, weight, &Domain2d::Ellipse(ellipse), spec, tol_abs)
    });
    // integrate_2d_sinc2 works in rescaled v' variables: (3/(π(k₀d)²))∫d²v'
    let pref = 3.0 / (PI * dd * dd);
    Ok(SpectrumPoint {
        mode: *k,
        method: Method::FiniteIntegral,
        gamma: pref * total.value,
        err: pref * total.err_estimate,
        converged: total.converged,
    })
}

/// Regime of the large-`N` axis formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisRegime {
    /// `v₀ ≲ 1`: close to the light line `k_x = k₀`.
    NearBoundary,
    /// `v₀ ≫ 1`, where the far-field form applies.
    FarSubradiant,
}

/// `v₀ = k₀d·N_x(κ² − 1)/(4κ)` with `κ = k_x/k₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis2DAsymptoticParams {
    pub v0: f64,
    pub regime: AxisRegime,
}

impl Axis2DAsymptoticParams {
    /// `v₀` above which the far-field form is considered valid.
    pub const FAR_THRESHOLD: f64 = 10.0;

    pub fn new(kx: f64, nx: usize, k0d: f64) -> Result<Self> {
        if !(kx > 0.0) || nx == 0 || !(k0d > 0.0) {
            return Err(Error::Domain("axis parameters need k_x > 0, N_x >= 1, k0d > 0"));
        }
        let v0 = k0d * nx as f64 * (kx * kx - 1.0) / (4.0 * kx);
        let regime = if v0 > Self::FAR_THRESHOLD { AxisRegime::FarSubradiant } else { AxisRegime::NearBoundary };
        Ok(Self { v0, regime })
    }
}

/// Which closed form of the large-`N` axis rate to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisForm {
    /// Exact evaluation of the Lorentzian-kernel axis integral; reproduces
    /// both the boundary value and the far-field form.
    Derived,
    /// Alternate grouping: overall `1/√(k_xd)`, correction `4√2/√N_x`.
    InverseRootGrouping,
    /// Alternate grouping: leading term carries an extra `1/4`.
    QuarterLeadGrouping,
}

/// `π sin(φ/2)/(1+v₀²)^{1/4}` and `π cos(φ/2)/(1+v₀²)^{1/4}`, `φ = atan2(1, v₀)`:
/// `∫_{v₀}^∞ (1, v)/((1+v²)√(v−v₀)) dv`.
fn lorentzian_moments(v0: f64) -> (f64, f64) {
    let phi = 1.0f64.atan2(v0);
    let r = (1.0 + v0 * v0).powf(0.25);
    (PI * (0.5 * phi).sin() / r, PI * (0.5 * phi).cos() / r)
}

/// Large-`N` rate on the `k_x` axis for `d̂ = ẑ`, subradiant side `k_x ≥ k₀`,
/// up to `O(1/N²)`:
///
/// `(3π/(2(k₀d)³))·[(κk₀d)^{3/2}√N_x sin(φ/2)/(1+v₀²)^{1/4}
///  − 4√(κk₀d/N_x)·√((v₀+√(1+v₀²))/(2(1+v₀²)))]`.
pub fn gamma2d_large_n_axis(kx: f64, nx: usize, k0d: f64) -> Result<f64> {
    gamma2d_large_n_axis_form(kx, nx, k0d, AxisForm::Derived)
}

/// [`gamma2d_large_n_axis`] with a selectable grouping of factors.
pub fn gamma2d_large_n_axis_form(kx: f64, nx: usize, k0d: f64, form: AxisForm) -> Result<f64> {
    if kx < 1.0 {
        return Err(Error::Domain("large-N axis form covers k_x >= k0 only"));
    }
    let p = Axis2DAsymptoticParams::new(kx, nx, k0d)?;
    let v0 = p.v0;
    let n = nx as f64;
    let kd = kx * k0d;
    let s = (1.0 + v0 * v0).sqrt();
    let root = ((v0 + s) / (1.0 + v0 * v0)).sqrt();
    let (i0, _) = lorentzian_moments(v0);
    let lead = i0 / PI; // sin(φ/2)/(1+v₀²)^{1/4}
    let pref = 3.0 * PI / (2.0 * k0d.powi(3));
    let value = match form {
        AxisForm::Derived => pref * (kd.powf(1.5) * n.sqrt() * lead - 4.0 * (kd / n).sqrt() * root / 2f64.sqrt()),
        AxisForm::InverseRootGrouping => pref / kd.sqrt() * (kd * n.sqrt() * lead - 4.0 * 2f64.sqrt() / n.sqrt() * root),
        AxisForm::QuarterLeadGrouping => {
            pref * (kd.powf(1.5) * n.sqrt() * lead / 4.0 - 4.0 * (kd / n).sqrt() * root / 2f64.sqrt())
        }
    };
    Ok(value)
}

/// Far-field limit `(6π/((k₀d)³N_x))·κ(2 − κ²)/(κ² − 1)^{3/2}`, valid for
/// `1 < κ < √2` once `v₀ ≫ 1`.
pub fn gamma2d_large_n_axis_far(kx: f64, nx: usize, k0d: f64) -> Result<f64> {
    if !(kx > 1.0 && kx < 2f64.sqrt()) {
        return Err(Error::Domain("far-field axis form needs k0 < k_x < sqrt(2) k0"));
    }
    if nx == 0 {
        return Err(Error::Domain("N_x must be positive"));
    }
    let k2 = kx * kx;
    Ok(6.0 * PI / (k0d.powi(3) * nx as f64) * kx * (2.0 - k2) / (k2 - 1.0).powf(1.5))
}

/// Large-`N` value on the light line, `3π√(N_x/(2k₀d)³)`: the leading term of
/// [`gamma2d_large_n_axis`] at `v₀ = 0`.
pub fn gamma2d_large_n_boundary(nx: usize, k0d: f64) -> f64 {
    3.0 * PI * (nx as f64 / (2.0 * k0d).powi(3)).sqrt()
}

/// The axis integral before any closed form,
/// `(3/(2k₀d))√(N_x/(κk₀d)) ∫_{v₀}^∞ K(v)/√(v−v₀)·(κ² − 4κv/(k₀dN_x)) dv`,
/// with `K = sinc²` or its Lorentzian surrogate.
pub fn gamma2d_axis_integral(kx: f64, nx: usize, k0d: f64, kernel: Kernel2d, spec: &QuadratureSpec) -> Result<QuadResult<f64>> {
    spec.validate()?;
    if kx < 1.0 {
        return Err(Error::Domain("axis integral covers k_x >= k0 only"));
    }
    let p = Axis2DAsymptoticParams::new(kx, nx, k0d)?;
    let n = nx as f64;
    let slope = 4.0 * kx / (k0d * n);
    let affine = |v: f64| kx * kx - slope * v;
    let r = match kernel {
        Kernel2d::Sinc2 => integrate_sinc2_sqrt_singular(affine, p.v0, spec),
        Kernel2d::Lorentzian => integrate_semi_infinite_sqrt_singular(|v| lorentzian(v) * affine(v), p.v0, spec),
    };
    let pref = 1.5 / k0d * (n / (kx * k0d)).sqrt();
    Ok(r.scaled(pref))
}

/// Ring `|k| = k⊥` of a square `N×N` array with `d̂ = ẑ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialParams {
    pub k_perp: f64,
    pub n: usize,
    pub k0d: f64,
}

impl RadialParams {
    pub fn new(k_perp: f64, n: usize, k0d: f64) -> Result<Self> {
        if !(k_perp >= 0.0) || k_perp * k0d > PI * 2f64.sqrt() * (1.0 + 1e-12) {
            return Err(Error::Domain("k_perp must satisfy 0 <= k_perp d <= sqrt(2) pi"));
        }
        if n == 0 || !(k0d > 0.0) {
            return Err(Error::Domain("radial form needs N >= 1 and k0d > 0"));
        }
        Ok(Self { k_perp, n, k0d })
    }

    fn check_subradiant(&self) -> Result<()> {
        if self.k_perp <= 1.0 {
            return Err(Error::Domain("radial form covers the subradiant side k_perp > k0"));
        }
        if self.k0d >= PI {
            return Err(Error::Domain("radial form assumes k0d < pi"));
        }
        Ok(())
    }
}

/// Radial rate with the surrogate kernel `1/(1 + v⁴/4)`,
/// `(3/(π(k₀d)²))∫₀^∞ v/(1+v⁴/4) ∫₀^{2π} C²/√(1−C²) dθ dv`,
/// `C² = κ² − 4κ(v/k₀dN)cos θ + (2v/k₀dN)²`.
///
/// Evaluated in the disc chart: `C` ranges over `|C| < 1` and
/// `v = (k₀dN/2)|κx̂ − C|`, so the rim singularity is absorbed as in
/// [`gamma2d_finite`].
pub fn gamma2d_radial(params: &RadialParams, spec: &QuadratureSpec) -> Result<QuadResult<f64>> {
    spec.validate()?;
    params.check_subradiant()?;
    let half = params.k0d * params.n as f64 / 2.0;
    let ellipse = AdmissibleEllipse { center: [params.k_perp * half, 0.0], semi_axes: [half, half] };
    let r = integrate_2d_sinc2(Kernel2d::Lorentzian, |p: &DiscPoint| 1.0 - p.rim * p.rim, &Domain2d::Ellipse(ellipse), spec, 0.0);
    Ok(r.scaled(3.0 / (PI * params.k0d * params.k0d)))
}

/// The same rate in the rescaled variable `v' = v/N`:
/// `(3N²/(π(k₀d)²))∫ v'/(1+N⁴v'⁴/4) ∫ C²/√(1−C²) dθ dv'`, integrated directly in
/// polar coordinates.
///
/// For fixed `v'` the admissible arc is `|θ| < θ*`; the substitution
/// `θ = θ*(1 − t²)` removes the endpoint singularity.
pub fn gamma2d_radial_rescaled(params: &RadialParams, spec: &QuadratureSpec) -> Result<QuadResult<f64>> {
    spec.validate()?;
    params.check_subradiant()?;
    let kp = params.k_perp;
    let d = params.k0d;
    let n = params.n as f64;
    let inner_tol = Tolerance::new(0.0, spec.tol_rel * 0.1);
    let mut inner_ok = true;
    let outer = |vp: f64| {
        let r = 2.0 * vp / d;
        let c_star = (kp * kp + r * r - 1.0) / (2.0 * kp * r);
        if c_star >= 1.0 {
            return 0.0;
        }
        let theta_star = c_star.max(-1.0).acos();
        let arc = integrate_adaptive(
            |t: f64| {
                let theta = theta_star * (1.0 - t * t);
                let c2 = kp * kp - 2.0 * kp * r * theta.cos() + r * r;
                let gap = 2.0 * kp * r * (theta.cos() - c_star);
                if gap <= 0.0 {
                    return 0.0;
                }
                c2 / gap.sqrt() * 2.0 * theta_star * t
            },
            0.0,
            1.0,
            2,
            inner_tol,
        );
        inner_ok &= arc.converged;
        let kernel = 1.0 / (1.0 + 0.25 * (n * vp).powi(4));
        // both signs of θ
        2.0 * vp * kernel * arc.value
    };
    let lo = d * (kp - 1.0) / 2.0;
    let hi = d * (kp + 1.0) / 2.0;
    let r = integrate_adaptive(outer, lo, hi, 8, Tolerance::new(0.0, spec.tol_rel * 0.1));
    let r = r.scaled(3.0 * n * n / (PI * d * d));
    Ok(QuadResult { converged: r.converged && inner_ok, ..r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::gamma_direct_sum;
    use crate::Vec3;

    fn mode(kx: f64, ky: f64, l: &LatticeSpec) -> ModeVector {
        ModeVector::extended(Vec3::new(kx, ky, 0.0), l).unwrap()
    }

    #[test]
    fn circle_terms_examples() {
        let l = LatticeSpec::square(10, PI / 2.0).unwrap();
        assert_eq!(reciprocal_circle_terms(&mode(0.0, 0.0, &l), PI / 2.0), [ReciprocalVector { m: [0, 0, 0] }]);
        assert_eq!(reciprocal_circle_terms(&mode(0.0, 0.0, &l), TAU), [ReciprocalVector { m: [0, 0, 0] }]);
        assert!(reciprocal_circle_terms(&mode(1.2, 0.0, &l), PI / 2.0).is_empty());
    }

    #[test]
    fn infinite_anchors() {
        let l = LatticeSpec::square(10, PI / 2.0).unwrap();
        let g = gamma2d_infinite(&mode(0.0, 0.0, &l), PI / 2.0, &Polarization::X).unwrap();
        assert!((g - 12.0 / PI).abs() < 1e-12);
        for k0d in [0.5, 1.0, 2.0, 3.0] {
            assert_eq!(gamma2d_infinite(&mode(0.0, 0.0, &l), k0d, &Polarization::Z).unwrap(), 0.0);
        }
        assert_eq!(gamma2d_infinite(&mode(1.1, 0.3, &l), TAU / 5.0, &Polarization::X).unwrap(), 0.0);
        assert_eq!(gamma2d_infinite(&mode(1.0, 0.0, &l), PI / 2.0, &Polarization::Z), Err(Error::Singular));
    }

    #[test]
    fn finite_integral_small_array_matches_direct_sum() {
        let l = LatticeSpec::square(10, PI / 2.0).unwrap();
        let spec = QuadratureSpec::finite_integral();
        for (kx, ky, d) in [(0.0, 0.0, Polarization::Z), (0.3, 0.2, Polarization::X), (0.9, 0.5, Polarization::Z)] {
            let k = mode(kx, ky, &l);
            let f = gamma2d_finite(&k, &l, &d, &spec).unwrap();
            let e = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
            assert!(f.converged);
            assert!((f.gamma - e).abs() < 0.05 * e.abs().max(0.02), "{kx},{ky}: {} vs {e}", f.gamma);
        }
    }

    #[test]
    fn axis_closed_form_matches_lorentzian_integral() {
        let spec = QuadratureSpec::default();
        for (kx, nx, d) in [(1.0, 10, 1.6 * PI), (1.2, 10, 1.6 * PI), (1.05, 40, PI / 2.0), (1.4, 160, 2.0)] {
            let closed = gamma2d_large_n_axis(kx, nx, d).unwrap();
            let num = gamma2d_axis_integral(kx, nx, d, Kernel2d::Lorentzian, &spec).unwrap();
            assert!((closed - num.value).abs() < 1e-8 * closed.abs().max(1e-3), "{closed} vs {:?}", num);
        }
    }

    #[test]
    fn lorentzian_moment_at_one() {
        // ∫_1^∞ dv/((1+v²)√(v−1)) by direct quadrature
        let r = integrate_semi_infinite_sqrt_singular(lorentzian, 1.0, &QuadratureSpec::default());
        let (i0, _) = lorentzian_moments(1.0);
        assert!((r.value - i0).abs() < 1e-8);
    }

    #[test]
    fn alternate_axis_groupings_miss_the_boundary_value() {
        // at v₀ = 0 only the derived form reduces to the boundary value
        // (up to its O(1/N) correction)
        let (nx, d) = (400, 2.0);
        let b = gamma2d_large_n_boundary(nx, d);
        let derived = gamma2d_large_n_axis_form(1.0, nx, d, AxisForm::Derived).unwrap();
        let main = gamma2d_large_n_axis_form(1.0, nx, d, AxisForm::InverseRootGrouping).unwrap();
        let app = gamma2d_large_n_axis_form(1.0, nx, d, AxisForm::QuarterLeadGrouping).unwrap();
        assert!((derived / b - 1.0).abs() < 4.0 / (d * nx as f64) + 1e-12);
        assert!((main / b - 1.0).abs() > 0.4);
        assert!((app / b - 1.0).abs() > 0.4);
    }

    #[test]
    fn radial_forms_agree() {
        let spec = QuadratureSpec::default();
        let p = RadialParams::new(1.5, 20, PI / 2.0).unwrap();
        let a = gamma2d_radial(&p, &spec).unwrap();
        let b = gamma2d_radial_rescaled(&p, &spec).unwrap();
        assert!(a.converged && b.converged);
        assert!((a.value / b.value - 1.0).abs() < 1e-8, "{} {}", a.value, b.value);
    }
}
