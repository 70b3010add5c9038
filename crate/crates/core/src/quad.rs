//! Quadrature for the kernels that appear in lattice decay rates.
//!
//! * [`sphere_average`]: `(1/4π)∫ f dΩ` with Gauss–Legendre nodes in `cos θ`
//!   and uniform nodes in `φ`, refined by doubling.
//! * [`integrate_semi_infinite_sqrt_singular`]: `∫_{v₀}^∞ h(v)/√(v−v₀) dv`
//!   for non-oscillatory or decaying `h`.
//! * [`integrate_sinc2_semi_infinite`] and [`integrate_sinc2_sqrt_singular`]:
//!   the same with an explicit `sinc²(v)` weight, whose slow `1/v²` tail is
//!   handled asymptotically.
//! * [`integrate_2d_sinc2`]: 2D integrals with a `sinc²(v_x)sinc²(v_y)` (or
//!   surrogate) weight over an admissible ellipse whose rim carries an
//!   inverse-square-root singularity.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{PI, TAU};
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods once std is linked
use num_traits::Float;

use crate::dipole::AngularDirection;
use crate::error::{Error, Result};

/// Absolute error floor below which any integral is considered converged.
pub const ABS_FLOOR: f64 = 1e-14;

/// Node counts and tolerances for angular and singular integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub tol_rel: f64,
    pub max_refinements: u32,
    /// Tolerance on the analytic `sinc²` tail that fixes the reciprocal-space
    /// window of the finite-array integrals, `V_max = max(8π, 2/window_tol)`.
    pub window_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { n_theta: 64, n_phi: 128, tol_rel: 1e-7, max_refinements: 6, window_tol: 1e-2 }
    }
}

impl QuadratureSpec {
    /// Spec tuned for the 2D/3D reciprocal-space integrals, which are
    /// approximations in `1/N` and do not need angular-quadrature accuracy.
    pub fn finite_integral() -> Self {
        Self { tol_rel: 1e-6, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 8 || self.n_phi < 8 {
            return Err(Error::InvalidQuadrature("node counts must be at least 8"));
        }
        if !(self.tol_rel > 0.0 && self.tol_rel <= 1e-2) {
            return Err(Error::InvalidQuadrature("tol_rel must lie in (0, 1e-2]"));
        }
        if self.max_refinements > 20 {
            return Err(Error::InvalidQuadrature("max_refinements must be at most 20"));
        }
        if !(self.window_tol > 0.0 && self.window_tol < 1.0) {
            return Err(Error::InvalidQuadrature("window_tol must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Half-width `V_max` of the reciprocal-space window, in units of the
    /// rescaled `sinc²` argument.
    pub fn window(&self) -> f64 {
        (8.0 * PI).max(2.0 / self.window_tol)
    }

    fn converged(&self, value: f64, err: f64) -> bool {
        err <= (self.tol_rel * value).max(ABS_FLOOR)
    }
}

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub err_estimate: f64,
    pub converged: bool,
}

impl<T> QuadResult<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> QuadResult<U> {
        QuadResult { value: f(self.value), err_estimate: self.err_estimate, converged: self.converged }
    }
}

impl QuadResult<f64> {
    pub fn scaled(self, factor: f64) -> Self {
        Self { value: self.value * factor, err_estimate: self.err_estimate * factor.abs(), converged: self.converged }
    }
}

/// Values that can be integrated: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// `sinc²(v) = (sin v / v)²`, with a series branch near the origin.
pub fn sinc2(v: f64) -> f64 {
    let s = sinc(v);
    s * s
}

pub fn sinc(v: f64) -> f64 {
    if v.abs() < 1e-4 {
        let v2 = v * v;
        1.0 - v2 / 6.0 + v2 * v2 / 120.0
    } else {
        v.sin() / v
    }
}

/// Surrogate for `sinc²(v)`: `1/(1+v²)`, same integral over the half line.
pub fn lorentzian(v: f64) -> f64 {
    1.0 / (1.0 + v * v)
}

/// Surrogate for `sinc²(v_x)sinc²(v_y)` with radial symmetry,
/// `1/(1 + |v|⁴/4)`; same integral `π²` over the plane.
pub fn lorentzian_radial(v2: f64) -> f64 {
    1.0 / (1.0 + 0.25 * v2 * v2)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `(1/4π)∫ f dΩ`, starting from the node counts of `spec`.
pub fn sphere_average<T, F>(f: F, spec: &QuadratureSpec) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(&AngularDirection) -> T,
{
    sphere_average_from(f, spec, spec.n_theta, spec.n_phi)
}

/// [`sphere_average`] with explicit starting node counts, for integrands whose
/// oscillation scale is known ahead of time.
pub fn sphere_average_from<T, F>(mut f: F, spec: &QuadratureSpec, n_theta: usize, n_phi: usize) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(&AngularDirection) -> T,
{
    let mut nt = n_theta.max(8);
    let mut np = n_phi.max(8);
    np += np % 2;
    let mut prev = sphere_rule(&mut f, nt, np);
    let mut err = f64::INFINITY;
    for _ in 0..spec.max_refinements.max(1) {
        nt *= 2;
        np *= 2;
        let next = sphere_rule(&mut f, nt, np);
        err = (next - prev).magnitude();
        prev = next;
        if spec.converged(prev.magnitude(), err) {
            return QuadResult { value: prev, err_estimate: err, converged: true };
        }
    }
    QuadResult { value: prev, err_estimate: err, converged: false }
}

fn sphere_rule<T, F>(f: &mut F, n_theta: usize, n_phi: usize) -> T
where
    T: QuadValue,
    F: FnMut(&AngularDirection) -> T,
{
    let (mu, w) = gauss_legendre(n_theta);
    let dphi = TAU / n_phi as f64;
    let mut total = T::zero();
    for (&m, &wm) in mu.iter().zip(&w) {
        let sin_t = (1.0 - m * m).max(0.0).sqrt();
        let theta = m.acos();
        let mut ring = T::zero();
        for j in 0..n_phi {
            let phi = j as f64 * dphi;
            let dir = AngularDirection::from_parts(theta, phi, sin_t, m);
            ring = ring + f(&dir);
        }
        total = total + ring * wm;
    }
    // weights sum to 2 in cos θ and the φ sum carries n_phi, so divide by 2·n_phi
    total * (1.0 / (2.0 * n_phi as f64))
}

// Gauss–Kronrod 7/15 abscissae (positive half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// 15 nodes on `[-1, 1]` with Kronrod and embedded Gauss weights.
fn gk15_rule() -> ([f64; 15], [f64; 15], [f64; 15]) {
    let mut x = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for i in 0..7 {
        x[i] = -XGK[i];
        x[14 - i] = XGK[i];
        wk[i] = WGK[i];
        wk[14 - i] = WGK[i];
        if i % 2 == 1 {
            wg[i] = WG[i / 2];
            wg[14 - i] = WG[i / 2];
        }
    }
    x[7] = 0.0;
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (x, wk, wg)
}

fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let (x, wk, wg) = gk15_rule();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = T::zero();
    let mut g = T::zero();
    for i in 0..15 {
        let y = f(c + h * x[i]);
        k = k + y * wk[i];
        if wg[i] != 0.0 {
            g = g + y * wg[i];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Absolute and relative targets for the adaptive rules.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, max_segments: 4000 }
    }
    fn met(&self, value: f64, err: f64) -> bool {
        err <= self.abs.max(self.rel * value)
    }
}

/// Globally adaptive Gauss–Kronrod 7/15 on `[a, b]`, starting from
/// `initial_panels` equal panels.
pub fn integrate_adaptive<T, F>(mut f: F, a: f64, b: f64, initial_panels: usize, tol: Tolerance) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return QuadResult { value: T::zero(), err_estimate: 0.0, converged: true };
    }
    let panels = initial_panels.max(1);
    let mut heap = BinaryHeap::with_capacity(panels * 2);
    let width = (b - a) / panels as f64;
    let mut value = T::zero();
    let mut err = 0.0;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        let (v, e) = gk15(&mut f, lo, hi);
        value = value + v;
        err += e;
        heap.push(Segment { a: lo, b: hi, value: v, err: e });
    }
    let mut converged = tol.met(value.magnitude(), err);
    while !converged && heap.len() < tol.max_segments {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        value = value - worst.value + v1 + v2;
        err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
        converged = tol.met(value.magnitude(), err.max(0.0));
    }
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
    let err: f64 = segments.iter().map(|s| s.err).sum();
    QuadResult { value, err_estimate: err, converged: tol.met(value.magnitude(), err) }
}

/// `∫_a^∞ f(v) dv` for `f` decaying at least as `1/v²`, via the algebraic map
/// `v = a + L·u/(1−u)`.
pub fn integrate_semi_infinite<F>(mut f: F, a: f64, spec: &QuadratureSpec) -> QuadResult<f64>
where
    F: FnMut(f64) -> f64,
{
    let scale = 1.0 + a.abs();
    let tol = Tolerance::new(ABS_FLOOR, spec.tol_rel);
    integrate_adaptive(
        |u: f64| {
            let one_minus = 1.0 - u;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let v = a + scale * u / one_minus;
            let y = f(v) * scale / (one_minus * one_minus);
            if y.is_finite() {
                y
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        8,
        tol,
    )
}

/// `∫_{v₀}^∞ h(v)/√(v−v₀) dv` for regular `h` decaying at least as `1/v²`.
///
/// The substitution `v = v₀ + t²` removes the endpoint singularity, leaving
/// `2∫₀^∞ h(v₀+t²) dt`, which is then mapped onto a finite interval.
pub fn integrate_semi_infinite_sqrt_singular<F>(mut h: F, v0: f64, spec: &QuadratureSpec) -> QuadResult<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_semi_infinite(|t| 2.0 * h(v0 + t * t), 0.0, spec)
}

/// `∫_a^∞ sinc²(v) h(v) dv` for smooth, slowly varying `h`.
///
/// The oscillatory part is integrated on `[a, T]` with `T` a multiple of `π`;
/// beyond `T` the weight is split as `sin² = (1 − cos 2v)/2`, the mean part is
/// integrated on a mapped interval and the oscillating part is replaced by its
/// leading boundary term `q'(T)/8`, `q = h/v²`.
pub fn integrate_sinc2_semi_infinite<F>(mut h: F, a: f64, spec: &QuadratureSpec) -> QuadResult<f64>
where
    F: FnMut(f64) -> f64,
{
    let start = a.max(0.0);
    let cut = ((start + 64.0 * PI) / PI).ceil() * PI;
    let tol = Tolerance::new(ABS_FLOOR, spec.tol_rel * 0.25);
    let panels = ((cut - a) / PI).ceil() as usize;
    let body = integrate_adaptive(|v| sinc2(v) * h(v), a, cut, panels.max(1), tol);
    let (tail, tail_err) = sin2_tail(&mut h, cut, spec);
    let value = body.value + tail;
    let err = body.err_estimate + tail_err;
    QuadResult { value, err_estimate: err, converged: spec.converged(value.abs(), err) }
}

/// `∫_T^∞ sin²(v) q(v) dv` with `q = h/v²` and `T = nπ`; returns the value and
/// the size of the first neglected term.
fn sin2_tail<F: FnMut(f64) -> f64>(h: &mut F, cut: f64, spec: &QuadratureSpec) -> (f64, f64) {
    let mean = integrate_adaptive(
        |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            // v = T/u, q(v) dv = h(T/u) u²/T² · T/u² du
            h(cut / u) / cut
        },
        0.0,
        1.0,
        4,
        Tolerance::new(ABS_FLOOR, spec.tol_rel * 0.25),
    );
    let step = cut * 1e-3;
    let mut q = |v: f64| h(v) / (v * v);
    let q_m = q(cut - step);
    let q_0 = q(cut);
    let q_p = q(cut + step);
    let dq = (q_p - q_m) / (2.0 * step);
    let d2q = (q_p - 2.0 * q_0 + q_m) / (step * step);
    let value = 0.5 * mean.value + dq / 8.0;
    (value, 0.5 * mean.err_estimate + d2q.abs() / 16.0)
}

/// `∫_{v₀}^∞ sinc²(v) h(v)/√(v−v₀) dv`: singular near piece by `v = v₀ + t²`,
/// remainder by [`integrate_sinc2_semi_infinite`].
pub fn integrate_sinc2_sqrt_singular<F>(mut h: F, v0: f64, spec: &QuadratureSpec) -> QuadResult<f64>
where
    F: FnMut(f64) -> f64,
{
    let split = TAU;
    let near = integrate_adaptive(
        |t: f64| {
            let v = v0 + t * t;
            2.0 * sinc2(v) * h(v)
        },
        0.0,
        split.sqrt(),
        4,
        Tolerance::new(ABS_FLOOR, spec.tol_rel * 0.25),
    );
    let far = integrate_sinc2_semi_infinite(|v| h(v) / (v - v0).sqrt(), v0 + split, spec);
    let value = near.value + far.value;
    let err = near.err_estimate + far.err_estimate;
    QuadResult { value, err_estimate: err, converged: spec.converged(value.abs(), err) }
}

/// Weight multiplying the user integrand in [`integrate_2d_sinc2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel2d {
    /// `sinc²(v_x)·sinc²(v_y)`.
    Sinc2,
    /// `1/(1 + |v|⁴/4)`, the radially symmetric surrogate.
    Lorentzian,
}

impl Kernel2d {
    pub fn eval(self, v: [f64; 2]) -> f64 {
        match self {
            Kernel2d::Sinc2 => sinc2(v[0]) * sinc2(v[1]),
            Kernel2d::Lorentzian => lorentzian_radial(v[0] * v[0] + v[1] * v[1]),
        }
    }
}

/// Ellipse `|(v − center)/semi_axes| < 1`: the image of the admissible set
/// `C² < 1` in rescaled variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleEllipse {
    pub center: [f64; 2],
    pub semi_axes: [f64; 2],
}

impl AdmissibleEllipse {
    pub fn is_empty(&self) -> bool {
        !(self.semi_axes[0] > 0.0 && self.semi_axes[1] > 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain2d {
    /// Admissible ellipse; the integrand carries the factor `1/√(1−C²)`.
    Ellipse(AdmissibleEllipse),
    /// Whole plane, no constraint and no singular factor.
    Plane,
}

/// Sample point handed to the integrand of [`integrate_2d_sinc2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    /// Rescaled integration variables `(v'_x, v'_y)`.
    pub v: [f64; 2],
    /// Normalized offset `C = (center − v)/semi_axes`, `|C| < 1`.
    pub c: [f64; 2],
    /// `√(1 − C²)`, the distance-from-rim coordinate.
    pub rim: f64,
}

const MAX_CELLS_2D: usize = 60_000;

/// `s = √(1 − C²)` below which the ellipse is charted in `s`, above which in `|C|`.
const CHART_SPLIT_S: f64 = 0.6;

/// 2D integral of `kernel(v)·h(p)` over `domain`.
///
/// For an ellipse the integrand is additionally divided by `√(1−C²)`. Near
/// the rim the change of variables `C = √(1−s²)(cos ψ, sin ψ)` absorbs that
/// factor exactly (`d²C/√(1−C²) = ds dψ`); the interior, where the factor is
/// bounded, uses polar `|C|`. Both pieces go to adaptive tensor
/// Gauss–Kronrod cells.
pub fn integrate_2d_sinc2<F>(kernel: Kernel2d, h: F, domain: &Domain2d, spec: &QuadratureSpec, tol_abs: f64) -> QuadResult<f64>
where
    F: FnMut(&DiscPoint) -> f64,
{
    match domain {
        Domain2d::Ellipse(e) => integrate_ellipse_chart(kernel, h, e, 1.0, spec, tol_abs),
        Domain2d::Plane => integrate_plane(kernel, h, spec),
    }
}

/// The ellipse branch of [`integrate_2d_sinc2`] restricted to `s ≤ s_max`,
/// i.e. to `|C|² ≥ 1 − s_max²`. Used to probe integrands that are singular at
/// the centre of the admissible disc.
pub fn integrate_ellipse_chart<F>(
    kernel: Kernel2d,
    mut h: F,
    e: &AdmissibleEllipse,
    s_max: f64,
    spec: &QuadratureSpec,
    tol_abs: f64,
) -> QuadResult<f64>
where
    F: FnMut(&DiscPoint) -> f64,
{
    if e.is_empty() || !(s_max > 0.0) {
        return QuadResult { value: 0.0, err_estimate: 0.0, converged: true };
    }
    let [ax, ay] = e.semi_axes;
    let [cx, cy] = e.center;
    let jac = ax * ay;
    let radius = ax.max(ay);
    let n_psi = (radius.ceil() as usize).clamp(8, 256);
    let n_rad = ((0.4 * radius).ceil() as usize).clamp(4, 96);
    let mut point = |rho: f64, s: f64, psi: f64| {
        let c = [rho * psi.cos(), rho * psi.sin()];
        let v = [cx - ax * c[0], cy - ay * c[1]];
        kernel.eval(v) * h(&DiscPoint { v, c, rim: s }) * jac
    };
    let tol = Tolerance { abs: 0.5 * tol_abs.max(ABS_FLOOR), rel: spec.tol_rel, max_segments: MAX_CELLS_2D };
    let s_max = s_max.min(1.0);
    // rim annulus in s, which absorbs the singular factor
    let rim = cubature(
        [0.0, s_max.min(CHART_SPLIT_S)],
        [0.0, TAU],
        n_rad,
        n_psi,
        |s, psi| point((1.0 - s * s).max(0.0).sqrt(), s, psi),
        tol,
    );
    if s_max <= CHART_SPLIT_S {
        return rim;
    }
    // interior in polar |C|, where s-cells would squeeze the centre into a
    // strip of width O(1/radius²)
    let rho_min = (1.0 - s_max * s_max).max(0.0).sqrt();
    let rho_max = (1.0 - CHART_SPLIT_S * CHART_SPLIT_S).sqrt();
    let inner = cubature(
        [rho_min, rho_max],
        [0.0, TAU],
        n_rad,
        n_psi,
        |rho, psi| {
            let s = (1.0 - rho * rho).sqrt();
            point(rho, s, psi) * rho / s
        },
        tol,
    );
    let value = rim.value + inner.value;
    let err = rim.err_estimate + inner.err_estimate;
    QuadResult { value, err_estimate: err, converged: Tolerance { abs: 2.0 * tol.abs, ..tol }.met(value.abs(), err) }
}

fn integrate_plane<F>(kernel: Kernel2d, mut h: F, spec: &QuadratureSpec) -> QuadResult<f64>
where
    F: FnMut(&DiscPoint) -> f64,
{
    let point = |v: [f64; 2]| DiscPoint { v, c: [0.0, 0.0], rim: f64::NAN };
    match kernel {
        Kernel2d::Sinc2 => {
            let mut inner_ok = true;
            let mut inner_err = 0.0;
            let mut line = |x: f64, h: &mut F| {
                let mut side = |sign: f64| integrate_sinc2_semi_infinite(|y| h(&point([x, sign * y])), 0.0, spec);
                let r = side(1.0);
                let l = side(-1.0);
                inner_ok &= r.converged && l.converged;
                inner_err += (r.err_estimate + l.err_estimate) * sinc2(x);
                r.value + l.value
            };
            let right = integrate_sinc2_semi_infinite(|x| line(x, &mut h), 0.0, spec);
            let left = integrate_sinc2_semi_infinite(|x| line(-x, &mut h), 0.0, spec);
            let value = right.value + left.value;
            let err = right.err_estimate + left.err_estimate;
            QuadResult {
                value,
                err_estimate: err,
                converged: right.converged && left.converged && spec.converged(value.abs(), err),
            }
        }
        Kernel2d::Lorentzian => {
            // polar: ∫₀^{2π} dψ ∫₀^∞ r dr K(r) h
            let mut outer = |psi: f64| {
                let (s, c) = psi.sin_cos();
                integrate_semi_infinite(|r| r * lorentzian_radial(r * r) * h(&point([r * c, r * s])), 0.0, spec).value
            };
            let tol = Tolerance::new(ABS_FLOOR, spec.tol_rel);
            integrate_adaptive(&mut outer, 0.0, TAU, 8, tol)
        }
    }
}

struct Cell {
    x: [f64; 2],
    y: [f64; 2],
    value: f64,
    err: f64,
    split_x: bool,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn cell_rule<F: FnMut(f64, f64) -> f64>(f: &mut F, x: [f64; 2], y: [f64; 2]) -> Cell {
    let (nodes, wk, wg) = gk15_rule();
    let cx = 0.5 * (x[0] + x[1]);
    let hx = 0.5 * (x[1] - x[0]);
    let cy = 0.5 * (y[0] + y[1]);
    let hy = 0.5 * (y[1] - y[0]);
    let mut kk = 0.0;
    let mut gk = 0.0; // Gauss in x, Kronrod in y
    let mut kg = 0.0; // Kronrod in x, Gauss in y
    for i in 0..15 {
        let xi = cx + hx * nodes[i];
        let mut row_k = 0.0;
        let mut row_g = 0.0;
        for j in 0..15 {
            let fv = f(xi, cy + hy * nodes[j]);
            row_k += wk[j] * fv;
            row_g += wg[j] * fv;
        }
        kk += wk[i] * row_k;
        kg += wk[i] * row_g;
        gk += wg[i] * row_k;
    }
    let area = hx * hy;
    let value = kk * area;
    let err_x = ((kk - gk) * area).abs();
    let err_y = ((kk - kg) * area).abs();
    Cell { x, y, value, err: err_x + err_y, split_x: err_x >= err_y }
}

/// Adaptive tensor-product Gauss–Kronrod cubature on a rectangle.
pub fn cubature<F>(x: [f64; 2], y: [f64; 2], nx: usize, ny: usize, mut f: F, tol: Tolerance) -> QuadResult<f64>
where
    F: FnMut(f64, f64) -> f64,
{
    let nx = nx.max(1);
    let ny = ny.max(1);
    let dx = (x[1] - x[0]) / nx as f64;
    let dy = (y[1] - y[0]) / ny as f64;
    let mut heap = BinaryHeap::with_capacity(nx * ny * 2);
    let mut value = 0.0;
    let mut err = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            let cx = [x[0] + dx * i as f64, if i + 1 == nx { x[1] } else { x[0] + dx * (i + 1) as f64 }];
            let cy = [y[0] + dy * j as f64, if j + 1 == ny { y[1] } else { y[0] + dy * (j + 1) as f64 }];
            let cell = cell_rule(&mut f, cx, cy);
            value += cell.value;
            err += cell.err;
            heap.push(cell);
        }
    }
    let mut converged = tol.met(value.abs(), err);
    while !converged && heap.len() < tol.max_segments {
        let Some(worst) = heap.pop() else { break };
        let (a, b) = if worst.split_x {
            let m = 0.5 * (worst.x[0] + worst.x[1]);
            (cell_rule(&mut f, [worst.x[0], m], worst.y), cell_rule(&mut f, [m, worst.x[1]], worst.y))
        } else {
            let m = 0.5 * (worst.y[0] + worst.y[1]);
            (cell_rule(&mut f, worst.x, [worst.y[0], m]), cell_rule(&mut f, worst.x, [m, worst.y[1]]))
        };
        value += a.value + b.value - worst.value;
        err += a.err + b.err - worst.err;
        heap.push(a);
        heap.push(b);
        converged = tol.met(value.abs(), err.max(0.0));
    }
    let mut cells = heap.into_vec();
    cells.sort_by(|p, q| p.x[0].total_cmp(&q.x[0]).then(p.y[0].total_cmp(&q.y[0])));
    let value: f64 = cells.iter().map(|c| c.value).sum();
    let err: f64 = cells.iter().map(|c| c.err).sum();
    QuadResult { value, err_estimate: err, converged: tol.met(value.abs(), err) }
}
