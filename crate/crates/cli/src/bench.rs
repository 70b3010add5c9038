//! Wall-clock timings of representative evaluations.

use std::f64::consts::PI;
use std::time::Instant;

use subrad_core::oracle::eigen_rates;
use subrad_core::{LatticeSpec, Method, ModeVector, Polarization, QuadratureSpec, Vec3};

use crate::eval::{evaluate, EvalContext};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub name: String,
    pub repeats: usize,
    pub mean_ms: f64,
}

fn time<F: FnMut()>(name: &str, repeats: usize, mut f: F) -> BenchRow {
    let start = Instant::now();
    for _ in 0..repeats {
        f();
    }
    BenchRow { name: name.to_string(), repeats, mean_ms: start.elapsed().as_secs_f64() * 1e3 / repeats as f64 }
}

pub fn run(repeats: usize) -> Vec<BenchRow> {
    let repeats = repeats.max(1);
    let q = QuadratureSpec::finite_integral();
    let case = |name: &str, method: Method, l: LatticeSpec, k: Vec3| {
        let k = ModeVector::extended(k, &l).unwrap();
        let d = Polarization::Z;
        let ctx = EvalContext { lattice: &l, polarization: &d, quadrature: &q };
        time(name, repeats, || {
            std::hint::black_box(evaluate(method, &k, &ctx));
        })
    };
    let sq = LatticeSpec::square(10, PI / 2.0).unwrap();
    let cube = LatticeSpec::cube(20, PI / 2.0).unwrap();
    let mut rows = vec![
        case("direct_sum 10x10", Method::DirectSum, sq, Vec3::new(0.3, 0.2, 0.0)),
        case("angular_sf 10x10", Method::AngularSf, sq, Vec3::new(0.3, 0.2, 0.0)),
        case("finite_integral 10x10", Method::FiniteIntegral, sq, Vec3::new(0.3, 0.2, 0.0)),
        case("infinite 2D", Method::Infinite, sq, Vec3::new(0.3, 0.2, 0.0)),
        case("radial 100x100", Method::Radial, LatticeSpec::square(100, PI / 2.0).unwrap(), Vec3::new(1.5, 0.0, 0.0)),
        case("direct_sum 20^3", Method::DirectSum, cube, Vec3::new(1.0, 0.0, 0.0)),
        case("finite_integral 20^3", Method::FiniteIntegral, cube, Vec3::new(1.0, 0.0, 0.0)),
    ];
    let l = LatticeSpec::square(16, PI / 2.0).unwrap();
    rows.push(time("eigen_rates 16x16", repeats, || {
        std::hint::black_box(eigen_rates(&l, &Polarization::Z).unwrap());
    }));
    rows
}
