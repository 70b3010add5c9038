//! Data behind each published figure, one labeled column per curve.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use subrad_core::spectra2d::{gamma2d_finite_term, gamma2d_radial, RadialParams};
use subrad_core::{k0d_from_wavelengths, LatticeSpec, Method, ModeVector, Polarization, QuadratureSpec, ReciprocalVector, Vec3};

use crate::error::CliError;
use crate::eval::{csv_text, evaluate, fmt_num, EvalContext, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig3,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig5,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig5 => "fig5",
        }
    }
}

impl FromStr for FigureId {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        FigureId::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| CliError::config(format!("unknown figure `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<Outcome> for Cell {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Value { gamma, .. } => Cell::Num(gamma),
            Outcome::Singular => Cell::Text("singular".into()),
            Outcome::Failed(msg) => Cell::Text(format!("error: {}", csv_text(&msg))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                match c {
                    Cell::Num(x) => s.push_str(&fmt_num(*x)),
                    Cell::Text(t) => s.push_str(t),
                    Cell::Empty => {}
                }
            }
            writeln!(s).unwrap();
        }
        s
    }
}

/// `lo + (hi − lo)·i/n` for `i = 1..=n`: open at `lo`, closed at `hi`.
fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

fn eval(method: Method, k: Vec3, lattice: &LatticeSpec, d: &Polarization, q: &QuadratureSpec) -> Cell {
    let ctx = EvalContext { lattice, polarization: d, quadrature: q };
    match ModeVector::extended(k, lattice) {
        Ok(k) => evaluate(method, &k, &ctx).into(),
        Err(e) => Cell::Text(format!("error: {e}")),
    }
}

fn names(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

/// Infinite-array map over the zone, `k_x d/π` and `k_y d/π` in `[−1, 1]`.
fn fig1(k0d: f64) -> Table {
    let n = 201;
    let l = LatticeSpec::square(1, k0d).unwrap();
    let q = QuadratureSpec::default();
    let z = |i: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
    let rows = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (zx, zy) = (z(idx / n), z(idx % n));
            let k = Vec3::new(zx, zy, 0.0) * (PI / k0d);
            vec![Cell::Num(zx), Cell::Num(zy), eval(Method::Infinite, k, &l, &Polarization::X, &q)]
        })
        .collect();
    Table { columns: names(&["kxd_over_pi", "kyd_over_pi", "infinite"]), rows }
}

/// `Γ(0,0)` of a 10×10 array against `k₀d ∈ (0, 2π)`.
fn fig2(d: Polarization) -> Table {
    let q = QuadratureSpec::default();
    let points = open_grid(0.0, TAU, 200);
    let rows = points[..points.len() - 1]
        .par_iter()
        .map(|&k0d| {
            let finite = LatticeSpec::square(10, k0d).unwrap();
            vec![
                Cell::Num(k0d),
                eval(Method::DirectSum, Vec3::zeros(), &finite, &d, &q),
                eval(Method::Infinite, Vec3::zeros(), &finite, &d, &q),
            ]
        })
        .collect();
    Table { columns: names(&["k0d", "direct_sum_n10", "infinite"]), rows }
}

/// `Γ(k_x, 0)` for `d = 0.8λ₀`, `N_x = N_y = 10`, `d̂ = ẑ`. The light line
/// `k_x = k₀` sits at `k_xd = 1.6π`, so the range runs past the zone edge up
/// to `2π`; the asymptotic form only exists for `k_x ≥ k₀`.
fn fig3() -> Table {
    let k0d = k0d_from_wavelengths(0.8);
    let l = LatticeSpec::square(10, k0d).unwrap();
    let q = QuadratureSpec::finite_integral();
    let d = Polarization::Z;
    let rows = open_grid(0.0, TAU, 200)
        .into_par_iter()
        .map(|kxd| {
            let k = Vec3::new(kxd / k0d, 0.0, 0.0);
            let g0 = ModeVector::extended(k, &l)
                .and_then(|m| gamma2d_finite_term(&m, &l, &d, &q, ReciprocalVector { m: [0, 0, 0] }))
                .map_or_else(|e| Cell::Text(format!("error: {e}")), |p| Cell::Num(p.gamma));
            let asym = if k.x >= 1.0 { eval(Method::Asymptotic, k, &l, &d, &q) } else { Cell::Empty };
            vec![
                Cell::Num(kxd),
                eval(Method::FiniteIntegral, k, &l, &d, &q),
                g0,
                eval(Method::DirectSum, k, &l, &d, &q),
                asym,
                eval(Method::Infinite, k, &l, &d, &q),
            ]
        })
        .collect();
    Table { columns: names(&["kxd", "finite_integral", "finite_integral_g0", "direct_sum", "asymptotic", "infinite"]), rows }
}

fn radial(k_perp: f64, n: usize) -> Cell {
    let q = QuadratureSpec::finite_integral();
    RadialParams::new(k_perp, n, k0d_from_wavelengths(0.25))
        .and_then(|p| gamma2d_radial(&p, &q))
        .map_or_else(|e| Cell::Text(format!("error: {e}")), |r| Cell::Num(r.value))
}

/// Radial rate for `d = λ₀/4` against `k_⊥/k₀ ∈ (1, 2]`.
fn fig4a() -> Table {
    let sizes = [10, 50, 100];
    let rows = open_grid(1.0, 2.0, 100)
        .into_par_iter()
        .map(|kp| {
            let mut row = vec![Cell::Num(kp)];
            row.extend(sizes.iter().map(|&n| radial(kp, n)));
            row
        })
        .collect();
    Table { columns: names(&["kperp", "radial_n10", "radial_n50", "radial_n100"]), rows }
}

/// Radial rate against `N` at three fixed `k_⊥/k₀`.
fn fig4b() -> Table {
    let kps = [1.2, 1.5, 2.0];
    let sizes = [10usize, 20, 30, 40, 50, 60, 70, 80, 90, 100];
    let rows = sizes
        .par_iter()
        .map(|&n| {
            let mut row = vec![Cell::Num(n as f64)];
            row.extend(kps.iter().map(|&kp| radial(kp, n)));
            row
        })
        .collect();
    Table { columns: names(&["n", "radial_kperp1.2", "radial_kperp1.5", "radial_kperp2"]), rows }
}

/// `Γ(k_x, 0, 0)` of a 20³ cube, `d = λ₀/4`, `d̂ = ẑ`, over `k_xd ∈ (0, π]`.
fn fig5() -> Table {
    let k0d = k0d_from_wavelengths(0.25);
    let l = LatticeSpec::cube(20, k0d).unwrap();
    let q = QuadratureSpec::finite_integral();
    let d = Polarization::Z;
    let rows = open_grid(0.0, PI, 200)
        .into_par_iter()
        .map(|kxd| {
            let k = Vec3::new(kxd / k0d, 0.0, 0.0);
            vec![
                Cell::Num(kxd),
                eval(Method::FiniteIntegral, k, &l, &d, &q),
                eval(Method::Asymptotic, k, &l, &d, &q),
                eval(Method::DirectSum, k, &l, &d, &q),
            ]
        })
        .collect();
    Table { columns: names(&["kxd", "finite_integral", "asymptotic", "direct_sum"]), rows }
}

/// Figure data; run inside a rayon pool to bound the worker count.
pub fn figure(id: FigureId) -> Table {
    match id {
        FigureId::Fig1a => fig1(k0d_from_wavelengths(0.2)),
        FigureId::Fig1b => fig1(k0d_from_wavelengths(1.0)),
        FigureId::Fig2a => fig2(Polarization::Z),
        FigureId::Fig2b => fig2(Polarization::X),
        FigureId::Fig3 => fig3(),
        FigureId::Fig4a => fig4a(),
        FigureId::Fig4b => fig4b(),
        FigureId::Fig5 => fig5(),
    }
}
