//! One method at one mode vector, and the CSV row it becomes.

use std::fmt::Write as _;

use subrad_core::lattice::{gamma_direct_sum, gamma_structure_quadrature};
use subrad_core::spectra2d::{gamma2d_finite, gamma2d_infinite, gamma2d_large_n_axis, gamma2d_radial, RadialParams};
use subrad_core::spectra3d::{gamma3d_axis_approx, gamma3d_finite, gamma3d_infinite, ShellRate};
use subrad_core::{Error, LatticeSpec, Method, ModeVector, Polarization, QuadratureSpec};

pub const CSV_HEADER: &str = "kx,ky,kz,method,gamma,err,wall_time_ms";

/// Distance from a 3D light shell below which a mode counts as on it.
pub const SHELL_BAND: f64 = 1e-9;

/// Tolerance on `k_y = 0` and `d̂ = ẑ` for the axis-only formulas.
const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Value {
        gamma: f64,
        err: Option<f64>,
    },
    /// Infinite-lattice rate diverges at this mode.
    Singular,
    Failed(String),
}

impl Outcome {
    pub fn gamma(&self) -> Option<f64> {
        match self {
            Outcome::Value { gamma, .. } => Some(*gamma),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub lattice: &'a LatticeSpec,
    pub polarization: &'a Polarization,
    pub quadrature: &'a QuadratureSpec,
}

fn from_result(r: Result<(f64, Option<f64>), Error>) -> Outcome {
    match r {
        Ok((gamma, err)) => Outcome::Value { gamma, err },
        Err(Error::Singular) => Outcome::Singular,
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

fn is_z(d: &Polarization) -> bool {
    let v = d.vector();
    v.x.abs() < AXIS_TOL && v.y.abs() < AXIS_TOL
}

pub fn evaluate(method: Method, k: &ModeVector, ctx: &EvalContext) -> Outcome {
    let (l, d, q) = (ctx.lattice, ctx.polarization, ctx.quadrature);
    let dim = l.dim();
    let kv = k.k();
    let r = match method {
        Method::DirectSum => gamma_direct_sum(k, l, d).map(|p| (p.gamma, Some(p.err))),
        Method::AngularSf => gamma_structure_quadrature(k, l, d, q).map(|p| (p.gamma, Some(p.err))),
        Method::FiniteIntegral => match dim {
            2 => gamma2d_finite(k, l, d, q).map(|p| (p.gamma, Some(p.err))),
            3 => gamma3d_finite(k, l, d, q).map(|p| (p.gamma, Some(p.err))),
            _ => Err(Error::Domain("finite integral covers 2D and 3D arrays")),
        },
        Method::Infinite => match dim {
            2 => gamma2d_infinite(k, l.k0d(), d).map(|g| (g, None)),
            3 => match gamma3d_infinite(k, l.k0d(), d, SHELL_BAND) {
                ShellRate::Dark => Ok((0.0, None)),
                ShellRate::Singular(_) => Err(Error::Singular),
            },
            _ => Err(Error::Domain("infinite-lattice rate covers 2D and 3D arrays")),
        },
        Method::Asymptotic => {
            if !is_z(d) {
                Err(Error::Domain("axis asymptotics need d = z"))
            } else if kv.y.abs() > AXIS_TOL || kv.z.abs() > AXIS_TOL {
                Err(Error::Domain("axis asymptotics need k on the k_x axis"))
            } else {
                match dim {
                    2 => gamma2d_large_n_axis(kv.x.abs(), l.counts()[0], l.k0d()).map(|g| (g, None)),
                    3 => Ok((gamma3d_axis_approx(kv.x.abs(), l).value, None)),
                    _ => Err(Error::Domain("axis asymptotics cover 2D and 3D arrays")),
                }
            }
        }
        Method::Radial => {
            let [nx, ny, _] = l.counts();
            if dim != 2 || nx != ny {
                Err(Error::Domain("radial form needs a square N x N array"))
            } else if !is_z(d) {
                Err(Error::Domain("radial form needs d = z"))
            } else {
                RadialParams::new(kv.norm(), nx, l.k0d())
                    .and_then(|p| gamma2d_radial(&p, q))
                    .map(|r| (r.value, Some(r.err_estimate)))
            }
        }
    };
    from_result(r)
}

/// Fixed 12-significant-digit form used in every CSV.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        // no negative zero in the output
        return format!("{:.11e}", 0.0);
    }
    format!("{x:.11e}")
}

/// Free text for a CSV cell: no separators or line breaks.
pub fn csv_text(s: &str) -> String {
    s.chars().map(|c| if c == ',' || c == '\n' || c == '\r' { ';' } else { c }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// Zone units `k·d/π`.
    pub k: [f64; 3],
    pub method: Method,
    pub outcome: Outcome,
    pub wall_time_ms: Option<f64>,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for c in self.k {
            write!(s, "{},", fmt_num(c)).unwrap();
        }
        write!(s, "{},", self.method).unwrap();
        match &self.outcome {
            Outcome::Value { gamma, err } => {
                write!(s, "{},{}", fmt_num(*gamma), err.map(fmt_num).unwrap_or_default()).unwrap();
            }
            Outcome::Singular => s.push_str("singular,"),
            Outcome::Failed(msg) => write!(s, "error: {},", csv_text(msg)).unwrap(),
        }
        s.push(',');
        if let Some(t) = self.wall_time_ms {
            write!(s, "{t:.3}").unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use subrad_core::Vec3;

    #[test]
    fn row_formats() {
        let row = ResultRow {
            k: [0.5, -0.0, 0.0],
            method: Method::Infinite,
            outcome: Outcome::Value { gamma: 1.0 / 3.0, err: None },
            wall_time_ms: None,
        };
        assert_eq!(row.to_csv(), "5.00000000000e-1,0.00000000000e0,0.00000000000e0,infinite,3.33333333333e-1,,");
        let failed = ResultRow { outcome: Outcome::Failed("a, b".into()), ..row };
        assert!(failed.to_csv().contains("error: a; b,,"));
    }

    #[test]
    fn single_atom_is_one() {
        let l = LatticeSpec::square(1, 1.0).unwrap();
        let ctx = EvalContext { lattice: &l, polarization: &Polarization::Z, quadrature: &QuadratureSpec::default() };
        let k = ModeVector::new(Vec3::zeros(), &l).unwrap();
        assert_eq!(evaluate(Method::DirectSum, &k, &ctx).gamma(), Some(1.0));
    }

    #[test]
    fn boundary_is_singular() {
        let l = LatticeSpec::square(10, 1.6 * std::f64::consts::PI).unwrap();
        let ctx = EvalContext { lattice: &l, polarization: &Polarization::Z, quadrature: &QuadratureSpec::default() };
        let k = ModeVector::extended(Vec3::new(1.0, 0.0, 0.0), &l).unwrap();
        assert_eq!(evaluate(Method::Infinite, &k, &ctx), Outcome::Singular);
        assert!(matches!(evaluate(Method::Radial, &k, &ctx), Outcome::Failed(_)));
    }
}
