//! Flat `key = value` sweep configuration.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use subrad_core::{LatticeSpec, Method, ModeVector, Polarization, QuadratureSpec, Vec3};

use crate::error::CliError;

/// Stamp folded into every cache key, so results from another build are
/// never picked up.
pub const VERSION_STAMP: &str = concat!("subrad-", env!("CARGO_PKG_VERSION"), "-cache-1");

const KEYS: [&str; 15] = [
    "dim",
    "k0d",
    "nx",
    "ny",
    "nz",
    "pol",
    "method[]",
    "kx_range",
    "ky_range",
    "kz_range",
    "ntheta",
    "nphi",
    "tol",
    "cache_dir",
    "seed",
];

/// `count` evenly spaced values from `min` to `max`, in zone units `k·d/π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub const ZERO: AxisRange = AxisRange { min: 0.0, max: 0.0, count: 1 };

    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, CliError> {
        if count == 0 {
            return Err(CliError::config("grid counts must be at least 1"));
        }
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(CliError::config(format!("grid range needs finite min <= max, got {min}..{max}")));
        }
        Ok(Self { min, max, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lattice: LatticeSpec,
    pub polarization: Polarization,
    pub methods: Vec<Method>,
    pub k_grid: [AxisRange; 3],
    pub quadrature: QuadratureSpec,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
}

/// A k-grid point: zone units for output, `k` in units of `k₀` for evaluation.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub zone: [f64; 3],
    pub mode: ModeVector,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut seen = BTreeSet::new();
        let mut raw: Vec<(String, String)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| CliError::config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if key != "method[]" && !seen.insert(key.to_string()) {
                return Err(CliError::config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            raw.push((key.to_string(), value.to_string()));
        }
        let get = |k: &str| raw.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        let required = |k: &str| get(k).ok_or_else(|| CliError::config(format!("missing key `{k}`")));

        let dim: u8 = parse_scalar("dim", required("dim")?)?;
        let k0d = parse_number(required("k0d")?).map_err(|e| CliError::config(format!("k0d: {e}")))?;
        let mut counts = [1usize; 3];
        for (a, key) in ["nx", "ny", "nz"].into_iter().enumerate() {
            if let Some(v) = get(key) {
                counts[a] = parse_scalar(key, v)?;
            }
        }
        let lattice = LatticeSpec::new(dim, k0d, counts)?;
        let polarization = parse_polarization(required("pol")?)?;

        let mut methods = Vec::new();
        for (_, v) in raw.iter().filter(|(k, _)| k == "method[]") {
            for tag in v.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let m = Method::from_str(tag).map_err(|_| CliError::config(format!("unknown method `{tag}`")))?;
                if !methods.contains(&m) {
                    methods.push(m);
                }
            }
        }
        if methods.is_empty() {
            return Err(CliError::config("at least one method[] entry is required"));
        }

        let mut k_grid = [AxisRange::ZERO; 3];
        for (a, key) in ["kx_range", "ky_range", "kz_range"].into_iter().enumerate() {
            match get(key) {
                Some(v) => k_grid[a] = parse_range(key, v)?,
                None if a < dim as usize => return Err(CliError::config(format!("missing key `{key}`"))),
                None => {}
            }
            if a >= dim as usize && k_grid[a] != AxisRange::ZERO {
                return Err(CliError::config(format!("`{key}` must be 0,0,1 on an unused axis")));
            }
        }

        let mut quadrature = QuadratureSpec::finite_integral();
        if let Some(v) = get("ntheta") {
            quadrature.n_theta = parse_scalar("ntheta", v)?;
        }
        if let Some(v) = get("nphi") {
            quadrature.n_phi = parse_scalar("nphi", v)?;
        }
        if let Some(v) = get("tol") {
            quadrature.tol_rel = parse_number(v).map_err(|e| CliError::config(format!("tol: {e}")))?;
        }
        quadrature.validate()?;

        Ok(Self {
            lattice,
            polarization,
            methods,
            k_grid,
            quadrature,
            cache_dir: get("cache_dir").map(PathBuf::from),
            seed: get("seed").map(|v| parse_scalar("seed", v)).transpose()?.unwrap_or(0),
        })
    }

    /// Everything that affects the numbers, in a fixed textual form.
    /// `{:?}` on `f64` round-trips, so distinct configs never collide.
    pub fn canonical(&self) -> String {
        let q = &self.quadrature;
        let mut s = String::new();
        write!(
            s,
            "dim={} k0d={:?} n={:?} pol={:?} ntheta={} nphi={} tol={:?} window_tol={:?} refinements={} seed={}",
            self.lattice.dim(),
            self.lattice.k0d(),
            self.lattice.counts(),
            self.polarization.vector().as_slice(),
            q.n_theta,
            q.n_phi,
            q.tol_rel,
            q.window_tol,
            q.max_refinements,
            self.seed,
        )
        .unwrap();
        for (axis, r) in ["kx", "ky", "kz"].iter().zip(&self.k_grid) {
            write!(s, " {axis}={:?},{:?},{}", r.min, r.max, r.count).unwrap();
        }
        s
    }

    /// Cache key: hash of the version stamp and [`Self::canonical`]. The
    /// method list is not part of it; each method is cached separately.
    pub fn cache_key(&self) -> String {
        let mut h = Sha256::new();
        h.update(VERSION_STAMP.as_bytes());
        h.update([0]);
        h.update(self.canonical().as_bytes());
        hex::encode(h.finalize())
    }

    /// Grid points with `k_x` slowest and `k_z` fastest.
    pub fn grid(&self) -> Vec<GridPoint> {
        let [gx, gy, gz] = self.k_grid;
        let scale = std::f64::consts::PI / self.lattice.k0d();
        let mut out = Vec::with_capacity(gx.count * gy.count * gz.count);
        for i in 0..gx.count {
            for j in 0..gy.count {
                for l in 0..gz.count {
                    let zone = [gx.value(i), gy.value(j), gz.value(l)];
                    let k = Vec3::new(zone[0], zone[1], zone[2]) * scale;
                    let mode = ModeVector::extended(k, &self.lattice).expect("grid stays on the lattice axes");
                    out.push(GridPoint { zone, mode });
                }
            }
        }
        out
    }
}

fn parse_scalar<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::config(format!("`{key}`: cannot parse `{v}`")))
}

/// A float, optionally followed by `pi` (`0.4pi`, `pi`).
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (body, factor) = match s.strip_suffix("pi") {
        Some(b) => (b.trim(), std::f64::consts::PI),
        None => (s, 1.0),
    };
    let x = match body {
        "" => 1.0,
        "-" => -1.0,
        b => b.parse::<f64>().map_err(|_| format!("cannot parse `{s}`"))?,
    };
    let x = x * factor;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn split_list(v: &str) -> Vec<&str> {
    v.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect()
}

pub fn parse_polarization(v: &str) -> Result<Polarization, CliError> {
    let parts = split_list(v);
    if parts.len() != 3 {
        return Err(CliError::config(format!("`pol` needs three components, got `{v}`")));
    }
    let mut d = Vec3::zeros();
    for (a, p) in parts.iter().enumerate() {
        d[a] = parse_number(p).map_err(|e| CliError::config(format!("pol: {e}")))?;
    }
    Ok(Polarization::normalized(d)?)
}

fn parse_range(key: &str, v: &str) -> Result<AxisRange, CliError> {
    let parts = split_list(v);
    if parts.len() != 3 {
        return Err(CliError::config(format!("`{key}` needs min,max,count, got `{v}`")));
    }
    let num = |p: &str| parse_number(p).map_err(|e| CliError::config(format!("{key}: {e}")));
    AxisRange::new(num(parts[0])?, num(parts[1])?, parse_scalar(key, parts[2])?)
}
