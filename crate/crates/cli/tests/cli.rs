use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn subrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subrad")).args(args).env_remove("SUBRAD_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gamma_of(row: &str) -> &str {
    row.split(',').nth(4).unwrap()
}

#[test]
fn point_examples() {
    let o = subrad(&["point", "--dim", "2", "--k0d", "1", "--n", "1", "1", "--k", "0", "0", "--method", "direct_sum"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kx,ky,kz,method,gamma,err,wall_time_ms"));
    assert_eq!(gamma_of(lines.next().unwrap()), "1.00000000000e0");

    let o =
        subrad(&["point", "--dim", "2", "--k0d", "1.6pi", "--n", "10", "10", "--k", "1.0", "0", "--method", "infinite,radial"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(gamma_of(rows[0]), "singular");
    assert!(gamma_of(rows[1]).starts_with("error: "));
}

#[test]
fn point_matches_direct_sum_oracle() {
    let o = subrad(&[
        "point",
        "--dim",
        "2",
        "--k0d",
        "1.2566",
        "--n",
        "10",
        "10",
        "--pol",
        "0",
        "0",
        "1",
        "--k",
        "0",
        "0",
        "--method",
        "direct_sum",
    ]);
    let g: f64 = gamma_of(stdout(&o).lines().nth(1).unwrap()).parse().unwrap();
    let l = subrad_core::LatticeSpec::square(10, 1.2566).unwrap();
    let k = subrad_core::ModeVector::new(subrad_core::Vec3::zeros(), &l).unwrap();
    let exact = subrad_core::lattice::gamma_direct_sum(&k, &l, &subrad_core::Polarization::Z).unwrap().gamma;
    assert!((g - exact).abs() < 1e-10 * exact);
}

#[test]
fn invalid_config_exits_2() {
    let o = subrad(&["point", "--dim", "2", "--k0d", "-1", "--n", "4", "4", "--k", "0", "0", "--method", "direct_sum"]);
    assert_eq!(o.status.code(), Some(2));
    let o = subrad(&["point", "--dim", "2", "--k0d", "1", "--n", "4", "4", "--k", "0", "0", "--method", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "dim = 2\nbogus = 1\n").unwrap();
    assert_eq!(subrad(&["sweep", cfg.to_str().unwrap()]).status.code(), Some(2));
}

fn write_config(dir: &Path, cache: &Path) -> String {
    let cfg = dir.join("sweep.cfg");
    let text = format!(
        "dim = 2\nk0d = 0.5pi\nnx = 6\nny = 6\npol = 0 0 1\nmethod[] = direct_sum\nmethod[] = infinite\n\
         kx_range = -1,1,9\nky_range = 0,0.5,3\ncache_dir = {}\n",
        cache.display()
    );
    fs::write(&cfg, text).unwrap();
    cfg.to_str().unwrap().to_string()
}

#[test]
fn sweep_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cfg = write_config(dir.path(), &cache);
    let out = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let a = subrad(&["sweep", &cfg, "--workers", "1", "--out", &out("a.csv")]);
    assert!(a.status.success(), "{a:?}");
    let b = subrad(&["sweep", &cfg, "--workers", "4", "--out", &out("b.csv")]);
    assert!(String::from_utf8_lossy(&b.stderr).contains("2 method(s) from cache"));
    let fresh = dir.path().join("fresh");
    let c = subrad(&["sweep", &cfg, "--workers", "4", "--cache-dir", fresh.to_str().unwrap(), "--out", &out("c.csv")]);
    assert!(String::from_utf8_lossy(&c.stderr).contains("0 method(s) from cache"));
    let read = |n: &str| fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.csv"), read("c.csv"));

    let text = String::from_utf8(read("a.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 27);
    // k_x slowest, then k_y, methods in config order
    assert!(rows[0].starts_with("-1.00000000000e0,0.00000000000e0,") && rows[0].contains(",direct_sum,"));
    assert!(rows[1].starts_with("-1.00000000000e0,0.00000000000e0,") && rows[1].contains(",infinite,"));
    assert!(rows[2].starts_with("-1.00000000000e0,2.50000000000e-1,"));
    assert!(fs::read_to_string(cache.join("manifest.tsv")).unwrap().lines().count() == 2);
}

#[test]
fn unwritable_targets_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let cfg = write_config(dir.path(), &blocker.join("cache"));
    assert_eq!(subrad(&["sweep", &cfg]).status.code(), Some(3));
    let good = write_config(dir.path(), &dir.path().join("cache"));
    let target = blocker.join("out.csv");
    assert_eq!(subrad(&["sweep", &good, "--out", target.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn validate_detects_perturbation() {
    let ok = subrad(&["validate", "--max-side-2d", "4", "--max-side-3d", "3"]);
    assert!(ok.status.success(), "{}", stdout(&ok));
    let bad = subrad(&["validate", "--max-side-2d", "4", "--max-side-3d", "3", "--perturb-pair-rate", "0.01"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).lines().any(|l| l.starts_with("FAIL") && l.contains("sum rule")));
    let capped = subrad(&["validate", "--max-side-2d", "70", "--max-side-3d", "2"]);
    assert!(capped.status.success());
    assert!(stdout(&capped).contains("capped"));
}

#[test]
fn figure_columns() {
    let o = subrad(&["figure", "fig4b"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("n,radial_kperp1.2,radial_kperp1.5,radial_kperp2"));
    let o = subrad(&["figure", "fig2a"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("k0d,direct_sum_n10,infinite"));
    assert_eq!(text.lines().count(), 200);
    assert_eq!(subrad(&["figure", "fig9"]).status.code(), Some(2));
}
