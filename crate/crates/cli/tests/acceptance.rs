//! Acceptance run: one line per criterion, each checked at its stated
//! tolerance. Criteria listed in `KNOWN_FAILURES` are expected to fail for
//! reasons analysed outside the code; the run exits non-zero on any other
//! failure and on any known failure that starts passing.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subrad::config::SweepConfig;
use subrad::sweep::{run_sweep, SweepOptions};
use subrad_core::dipole::{pair_decay_rate, pair_decay_rate_angular};
use subrad_core::lattice::gamma_direct_sum;
use subrad_core::oracle::{decay_kernel_rates, eigen_rates, gamma_expectation};
use subrad_core::quad::{sinc, sphere_average};
use subrad_core::spectra2d::{
    gamma2d_finite, gamma2d_finite_term, gamma2d_infinite, gamma2d_infinite_parallel, gamma2d_infinite_perpendicular,
    gamma2d_large_n_axis, gamma2d_large_n_boundary, gamma2d_radial, RadialParams,
};
use subrad_core::spectra3d::{gamma3d_axis_approx, gamma3d_finite, optical_thickness};
use subrad_core::{AngularDirection, LatticeSpec, ModeVector, Polarization, QuadratureSpec, ReciprocalVector, Vec3};

/// Criteria that fail at their stated tolerance.
const KNOWN_FAILURES: [u32; 2] = [6, 9];

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn random_polarization(rng: &mut ChaCha8Rng) -> Polarization {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if let Ok(d) = Polarization::normalized(v) {
            return d;
        }
    }
}

fn random_mode(rng: &mut ChaCha8Rng, l: &LatticeSpec) -> ModeVector {
    let e = PI / l.k0d();
    let mut k = Vec3::zeros();
    for a in 0..l.dim() as usize {
        k[a] = rng.gen_range(-e..e);
    }
    ModeVector::new(k, l).unwrap()
}

fn plane_mode(k: Vec3, k0d: f64) -> ModeVector {
    ModeVector::extended(k, &LatticeSpec::square(1, k0d).unwrap()).unwrap()
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn pair_rate_limit() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let exact = (0..100).all(|_| pair_decay_rate(&Vec3::zeros(), &random_polarization(&mut rng)) == 1.0);
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let d = random_polarization(&mut rng);
        let u = random_polarization(&mut rng).vector() * rng.gen_range(0.0..50.0);
        let a = pair_decay_rate_angular(&u, &d, &spec).unwrap().value;
        worst = worst.max((a - pair_decay_rate(&u, &d)).abs());
    }
    verdict(exact && worst < 1e-8, format!("Γ(0) = 1 exactly: {exact}; angular max deviation {worst:.2e} (< 1e-8)"))
}

fn cross_method_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for l in [LatticeSpec::square(5, 1.3).unwrap(), LatticeSpec::cube(3, 2.1).unwrap()] {
        for _ in 0..20 {
            let k = random_mode(&mut rng, &l);
            let d = random_polarization(&mut rng);
            let a = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
            let b = gamma_expectation(&k, &l, &d).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    verdict(worst < 1e-10, format!("max |direct − expectation| {worst:.2e} (< 1e-10)"))
}

fn quadrature_identity() -> Verdict {
    let spec = QuadratureSpec { tol_rel: 1e-10, ..QuadratureSpec::default() };
    let mut worst = 0.0f64;
    for x in [0.1, 1.0, PI, 10.0, 30.0] {
        let r = sphere_average(|dir: &AngularDirection| Complex64::from_polar(1.0, -x * dir.cos_theta()), &spec);
        worst = worst.max((r.value - Complex64::new(sinc(x), 0.0)).norm());
    }
    verdict(worst < 1e-9, format!("max |⟨e^(−ix cosθ)⟩ − sinc x| {worst:.2e} (< 1e-9)"))
}

fn dicke_limit() -> Verdict {
    let l = LatticeSpec::square(10, 0.01).unwrap();
    let k = ModeVector::new(Vec3::zeros(), &l).unwrap();
    let mut worst = 0.0f64;
    for a in [0.0, 0.3, PI / 4.0, 1.0, PI / 2.0] {
        let d = Polarization::new(Vec3::new(f64::cos(a), f64::sin(a), 0.0)).unwrap();
        let g = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
        worst = worst.max((g - 100.0).abs() / 100.0);
    }
    verdict(worst < 0.02, format!("max |Γ/Γ₀ − 100|/100 = {worst:.2e} (< 2%)"))
}

fn infinite_anchors() -> Verdict {
    let zero = Vec3::zeros();
    let perp = [0.5, 1.0, 2.0, 3.0]
        .iter()
        .map(|&k0d| gamma2d_infinite_perpendicular(&plane_mode(zero, k0d), k0d).unwrap().abs())
        .fold(0.0, f64::max);
    let par = gamma2d_infinite_parallel(&plane_mode(zero, PI / 2.0), PI / 2.0, &Polarization::X).unwrap();
    let par_err = (par - 12.0 / PI).abs();
    let k0d = TAU / 5.0;
    let mut wrong = 0;
    for i in 0..101 {
        for j in 0..101 {
            let k = Vec3::new(-1.0 + i as f64 / 50.0, -1.0 + j as f64 / 50.0, 0.0) * (PI / k0d);
            if (k.norm() - 1.0).abs() < 1e-9 {
                continue;
            }
            let g = gamma2d_infinite(&plane_mode(k, k0d), k0d, &Polarization::X).unwrap();
            if (g == 0.0) != (k.norm() > 1.0) {
                wrong += 1;
            }
        }
    }
    verdict(
        perp == 0.0 && par_err < 1e-9 && wrong == 0,
        format!("Γ⊥(0) max {perp:.1e}; |Γ∥(0) − 12/π| {par_err:.1e}; {wrong} misclassified dark-grid points"),
    )
}

/// The asymptotic form exists only for `k_x ≥ k₀`, i.e. `k_xd ≥ 1.6π` here, so
/// the stated range `[k₀d + 0.3, π]` is empty. The comparison is made on the
/// continuation `[k₀d + 0.3, 2π]`, against both the full finite integral and
/// its `g = 0` term (the one the asymptotic form approximates).
fn fig3_reproduction() -> Verdict {
    let k0d = 1.6 * PI;
    let nx = 10;
    let l = LatticeSpec::square(nx, k0d).unwrap();
    let q = QuadratureSpec::finite_integral();
    let d = Polarization::Z;
    let lo = k0d + 0.3;
    let literal_empty = lo > PI;
    let (mut dev_full, mut dev_g0, mut inf_max) = (0.0f64, 0.0f64, 0.0f64);
    let n = 24;
    for i in 0..=n {
        let kxd = lo + (TAU - lo) * i as f64 / n as f64;
        let k = ModeVector::extended(Vec3::new(kxd / k0d, 0.0, 0.0), &l).unwrap();
        let asym = gamma2d_large_n_axis(kxd / k0d, nx, k0d).unwrap();
        let full = gamma2d_finite(&k, &l, &d, &q).unwrap().gamma;
        let g0 = gamma2d_finite_term(&k, &l, &d, &q, ReciprocalVector { m: [0, 0, 0] }).unwrap().gamma;
        dev_full = dev_full.max((asym - full).abs() / full);
        dev_g0 = dev_g0.max((asym - g0).abs() / g0);
        inf_max = inf_max.max(gamma2d_infinite(&k, k0d, &d).unwrap().abs());
    }
    let boundary = gamma2d_large_n_boundary(nx, k0d);
    let formula = 3.0 * PI * (nx as f64 / (2.0 * k0d).powi(3)).sqrt();
    let at_k0 = gamma2d_finite(&ModeVector::extended(Vec3::new(1.0, 0.0, 0.0), &l).unwrap(), &l, &d, &q).unwrap().gamma;
    let boundary_rel = (boundary - at_k0).abs() / at_k0;
    let boundary_ok = (boundary - formula).abs() < 1e-6 && (boundary - 0.935).abs() < 1e-3 && boundary_rel < 0.3;
    let tracking_ok = dev_full < 0.15 && inf_max == 0.0;
    verdict(
        boundary_ok && tracking_ok,
        format!(
            "stated range empty: {literal_empty}; on k_xd∈[{lo:.3}, 2π]: asymptotic vs finite max dev {:.0}% (vs g=0 term {:.0}%, bound 15%), \
             infinite max {inf_max:.3}; boundary {boundary:.5} vs finite {at_k0:.4} ({:.1}%, bound 30%)",
            100.0 * dev_full,
            100.0 * dev_g0,
            100.0 * boundary_rel
        ),
    )
}

fn inverse_nx_law() -> Verdict {
    let ns = [20.0, 40.0, 80.0, 160.0];
    let g: Vec<f64> = ns.iter().map(|&n| gamma2d_large_n_axis(1.2, n as usize, 1.6 * PI).unwrap()).collect();
    let s = log_slope(&ns, &g);
    verdict((s + 1.0).abs() <= 0.1, format!("slope {s:.4} (−1 ± 0.1)"))
}

fn inverse_area_law() -> Verdict {
    let spec = QuadratureSpec::finite_integral();
    let ns = [20.0, 40.0, 80.0];
    let mut slopes = Vec::new();
    for kp in [1.2, 1.5, 2.0] {
        let g: Vec<f64> = ns
            .iter()
            .map(|&n| gamma2d_radial(&RadialParams::new(kp, n as usize, PI / 2.0).unwrap(), &spec).unwrap().value)
            .collect();
        slopes.push(log_slope(&ns, &g));
    }
    let ok = slopes.iter().all(|s| (s + 2.0).abs() <= 0.1);
    verdict(ok, format!("slopes {:.4} {:.4} {:.4} (−2 ± 0.1)", slopes[0], slopes[1], slopes[2]))
}

fn peak_identity() -> Verdict {
    let l = LatticeSpec::cube(20, PI / 2.0).unwrap();
    let approx = gamma3d_axis_approx(1.0, &l).value;
    let b0 = optical_thickness(&l).unwrap();
    let identity = (approx - 2.0 * b0).abs() <= 1e-12 * approx;
    let target = (approx - 120.0 / PI).abs() < 1e-9;
    let k = ModeVector::new(Vec3::new(1.0, 0.0, 0.0), &l).unwrap();
    let finite = gamma3d_finite(&k, &l, &Polarization::Z, &QuadratureSpec::finite_integral()).unwrap().gamma;
    let direct = gamma_direct_sum(&k, &l, &Polarization::Z).unwrap().gamma;
    let rel = (finite - approx).abs() / approx;
    verdict(
        identity && target && rel < 0.1,
        format!(
            "approx {approx:.4} = 2b₀: {identity}, = 120/π: {target}; finite {finite:.3} (direct sum {direct:.3}) off by {:.2}% (bound 10%)",
            100.0 * rel
        ),
    )
}

fn eigen_sum_rule() -> Verdict {
    let mut worst_sum = 0.0f64;
    let mut min_rate = f64::INFINITY;
    for k0d in [PI / 2.0, 1.6 * PI] {
        for l in [
            LatticeSpec::square(4, k0d).unwrap(),
            LatticeSpec::square(5, k0d).unwrap(),
            LatticeSpec::cube(3, k0d).unwrap(),
            LatticeSpec::cube(4, k0d).unwrap(),
        ] {
            let n = l.atoms() as f64;
            for d in [Polarization::Z, Polarization::X] {
                let e = eigen_rates(&l, &d).unwrap();
                let fast = decay_kernel_rates(&l, &d).unwrap();
                worst_sum = worst_sum.max((e.sum() - n).abs()).max((fast.iter().sum::<f64>() - n).abs());
                min_rate = e.rates.iter().chain(&fast).copied().fold(min_rate, f64::min);
            }
        }
    }
    verdict(worst_sum < 1e-8 && min_rate >= -1e-8, format!("max |ΣΓ − N| {worst_sum:.2e}; min Γ_n {min_rate:.3e}"))
}

fn sweep_determinism() -> Verdict {
    let text =
        "dim = 2\nk0d = 0.4pi\nnx = 1\nny = 1\npol = 1 0 0\nmethod[] = infinite\nkx_range = -1,1,201\nky_range = -1,1,201\n";
    let config = SweepConfig::parse(text).unwrap();
    let run = |workers: usize, dir: &std::path::Path| {
        let opts = SweepOptions { workers, timing: false, cache_dir: Some(dir.to_path_buf()) };
        run_sweep(&config, &opts).unwrap()
    };
    let (d1, d8) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (one, s1) = run(1, d1.path());
    let (eight, s8) = run(8, d8.path());
    let (again, s_again) = run(8, d8.path());
    let fresh = s1.computed_methods == 1 && s8.computed_methods == 1;
    let cached = s_again.cached_methods == 1;
    verdict(
        one == eight && eight == again && fresh && cached,
        format!(
            "{} rows; 1 vs 8 workers identical: {}; cached rerun identical: {}",
            s1.points,
            one == eight,
            eight == again && cached
        ),
    )
}

/// Number, name, runtime bound and check.
type Criterion = (u32, &'static str, Option<Duration>, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "pair-rate limit", Some(Duration::from_secs(10)), pair_rate_limit),
        (2, "cross-method exactness", Some(Duration::from_secs(30)), cross_method_exactness),
        (3, "quadrature identity", None, quadrature_identity),
        (4, "Dicke limit", None, dicke_limit),
        (5, "infinite-2D anchors", None, infinite_anchors),
        (6, "axis curve reproduction", Some(Duration::from_secs(300)), fig3_reproduction),
        (7, "1/N_x law", None, inverse_nx_law),
        (8, "1/N² law", Some(Duration::from_secs(600)), inverse_area_law),
        (9, "3D peak identity", Some(Duration::from_secs(300)), peak_identity),
        (10, "eigen sum rule and positivity", Some(Duration::from_secs(60)), eigen_sum_rule),
        (11, "sweep determinism", None, sweep_determinism),
    ];
    let mut unexpected = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let mut v = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                v.passed = false;
                v.detail.push_str(&format!("; runtime {elapsed:.1?} over {limit:?}"));
            }
        }
        let known = KNOWN_FAILURES.contains(&id);
        let status = match (v.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL [known]",
            (false, false) => "FAIL",
            (true, true) => "PASS [unexpected]",
        };
        if v.passed == known {
            unexpected += 1;
        }
        println!("criterion {id:>2} {status:<17} {name}: {} ({:.2} s)", v.detail, elapsed.as_secs_f64());
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criterion outcome(s) differ from the expected list");
        ExitCode::FAILURE
    }
}
