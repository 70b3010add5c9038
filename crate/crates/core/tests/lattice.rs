use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use subrad_core::lattice::{gamma_direct_sum, gamma_structure_quadrature, overlap, positions, structure_factor_sq};
use subrad_core::{AngularDirection, LatticeSpec, ModeVector, Polarization, QuadratureSpec, ReciprocalVector, Vec3};

fn unit_vector() -> impl Strategy<Value = Vec3> {
    (-1.0f64..1.0, 0.0..TAU).prop_map(|(c, phi)| {
        let s = (1.0 - c * c).sqrt();
        Vec3::new(s * phi.cos(), s * phi.sin(), c)
    })
}

fn lattice() -> impl Strategy<Value = LatticeSpec> {
    prop_oneof![
        (1usize..12, 0.2..2.0 * TAU).prop_map(|(n, d)| LatticeSpec::chain(n, d).unwrap()),
        (1usize..7, 1usize..7, 0.2..2.0 * TAU).prop_map(|(a, b, d)| LatticeSpec::new(2, d, [a, b, 1]).unwrap()),
        (1usize..4, 1usize..4, 1usize..4, 0.2..2.0 * TAU).prop_map(|(a, b, c, d)| LatticeSpec::new(3, d, [a, b, c]).unwrap()),
    ]
}

/// A lattice with a zone mode and a polarization.
fn configuration() -> impl Strategy<Value = (LatticeSpec, ModeVector, Polarization)> {
    (lattice(), proptest::array::uniform3(-1.0f64..1.0), unit_vector()).prop_map(|(l, f, d)| {
        let mut k = Vec3::zeros();
        for a in 0..l.dim() as usize {
            k[a] = f[a] * PI / l.k0d();
        }
        (l, ModeVector::new(k, &l).unwrap(), Polarization::normalized(d).unwrap())
    })
}

/// `(1/N) Σ_jm Γ_jm e^{ik·(r_j − r_m)}` over all ordered pairs.
fn naive_rate(k: &ModeVector, l: &LatticeSpec, d: &Polarization) -> f64 {
    let r = positions(l);
    let mut s = Complex64::new(0.0, 0.0);
    for a in &r {
        for b in &r {
            let u = a - b;
            s += Complex64::from_polar(subrad_core::dipole::pair_decay_rate(&u, d), k.k().dot(&u));
        }
    }
    s.re / r.len() as f64
}

#[test]
fn overlap_of_two_site_chain() {
    let l = LatticeSpec::chain(2, 1.0).unwrap();
    let k = ModeVector::new(Vec3::zeros(), &l).unwrap();
    let kp = ModeVector::new(Vec3::new(PI / 2.0, 0.0, 0.0), &l).unwrap();
    let brute: Complex64 = positions(&l).iter().map(|r| Complex64::from_polar(1.0, (k.k() - kp.k()).dot(r))).sum();
    let o = overlap(&k, &kp, &l);
    assert!((o - brute).norm() < 1e-14);
    assert!((o.norm() - 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn three_site_structure_factor_zero() {
    let l = LatticeSpec::chain(3, 1.0).unwrap();
    // (k_x − k̂_x)·d = 2π/3 with k̂ = x̂
    let k = ModeVector::extended(Vec3::new(1.0 + TAU / 3.0, 0.0, 0.0), &l).unwrap();
    let f = structure_factor_sq(&k, &AngularDirection::new(PI / 2.0, 0.0), &l);
    assert!(f < 1e-28, "{f}");
}

#[test]
fn mean_rule_over_zone_grid() {
    for (l, d) in [
        (LatticeSpec::square(6, 1.3).unwrap(), Polarization::Z),
        (LatticeSpec::new(2, 4.0, [5, 3, 1]).unwrap(), Polarization::normalized(Vec3::new(1.0, 2.0, 0.5)).unwrap()),
        (LatticeSpec::cube(4, PI / 2.0).unwrap(), Polarization::X),
    ] {
        let [nx, ny, nz] = l.counts().map(|n| n as i64);
        let mut total = 0.0;
        for mx in 0..nx {
            for my in 0..ny {
                for mz in 0..nz {
                    total += gamma_direct_sum(&l.zone_grid_point([mx, my, mz]), &l, &d).unwrap().gamma;
                }
            }
        }
        let mean = total / l.atoms() as f64;
        assert!((mean - 1.0).abs() < 1e-8, "{l:?}: {mean}");
    }
}

#[test]
fn structure_quadrature_matches_direct_sum() {
    let spec = QuadratureSpec::default();
    for l in [LatticeSpec::square(5, 2.1).unwrap(), LatticeSpec::cube(4, 1.4).unwrap()] {
        for (k, d) in [
            (Vec3::new(0.3, -0.8, 0.0), Vec3::new(0.0, 0.0, 1.0)),
            (Vec3::new(-1.2, 0.4, 0.0), Vec3::new(1.0, -1.0, 0.3)),
            (Vec3::new(0.9, 1.1, 0.0), Vec3::new(0.2, 0.9, -0.4)),
        ] {
            let mut k = k;
            if l.dim() == 3 {
                k.z = 0.6 * k.x - 0.5;
            }
            let k = ModeVector::new(k, &l).unwrap();
            let d = Polarization::normalized(d).unwrap();
            let a = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
            let b = gamma_structure_quadrature(&k, &l, &d, &spec).unwrap();
            assert!(b.converged);
            assert!((a - b.gamma).abs() <= 1e-6 * a.abs(), "{l:?} {k:?}: {a} vs {}", b.gamma);
        }
    }
}

#[test]
fn dicke_limit() {
    let l = LatticeSpec::square(10, 0.01).unwrap();
    let k = ModeVector::new(Vec3::zeros(), &l).unwrap();
    for d in [Polarization::X, Polarization::normalized(Vec3::new(1.0, 1.0, 0.0)).unwrap()] {
        let a = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
        let b = gamma_structure_quadrature(&k, &l, &d, &QuadratureSpec::default()).unwrap().gamma;
        assert!((a - 100.0).abs() < 2.0 && (b - 100.0).abs() < 2.0, "{a} {b}");
    }
}

proptest! {
    #[test]
    fn direct_sum_matches_pairwise_definition((l, k, d) in configuration()) {
        let a = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
        let b = naive_rate(&k, &l, &d);
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn rate_is_nonnegative_and_bounded((l, k, d) in configuration()) {
        let g = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
        prop_assert!(g >= -1e-9);
        prop_assert!(g <= 1.5 * l.atoms() as f64 + 1e-9);
    }

    #[test]
    fn rate_has_parity((l, k, d) in configuration()) {
        let minus = ModeVector::new(-k.k(), &l).unwrap();
        let a = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
        let b = gamma_direct_sum(&minus, &l, &d).unwrap().gamma;
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn rate_is_zone_periodic((l, k, d) in configuration(), m in proptest::array::uniform3(-2i64..=2)) {
        let mut m = m;
        for a in l.dim() as usize..3 {
            m[a] = 0;
        }
        let shifted = ModeVector::extended(k.k() + ReciprocalVector { m }.g(l.k0d()), &l).unwrap();
        let a = gamma_direct_sum(&k, &l, &d).unwrap().gamma;
        let b = gamma_direct_sum(&shifted, &l, &d).unwrap().gamma;
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn structure_factor_bounds((l, k, _d) in configuration(), c in -1.0f64..1.0, phi in 0.0..TAU) {
        let f = structure_factor_sq(&k, &AngularDirection::new(c.acos(), phi), &l);
        let n = l.atoms() as f64;
        prop_assert!(f >= 0.0 && f <= n * n * (1.0 + 1e-12));
    }

    #[test]
    fn overlap_matches_geometric_sum((l, k, _d) in configuration(), (_l2, kp, _d2) in configuration()) {
        let mut q = kp.k();
        for a in l.dim() as usize..3 {
            q[a] = 0.0;
        }
        let kp = ModeVector::extended(q, &l).unwrap();
        let brute: Complex64 = positions(&l).iter().map(|r| Complex64::from_polar(1.0, (k.k() - kp.k()).dot(r))).sum();
        prop_assert!((overlap(&k, &kp, &l) - brute).norm() < 1e-9 * l.atoms() as f64);
    }
}
