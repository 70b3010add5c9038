use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("coupling diverges at zero separation")]
    ZeroSeparation,
    #[error("polarization must be a unit vector, |d| = {0}")]
    InvalidPolarization(f64),
    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(&'static str),
    #[error("invalid lattice: {0}")]
    InvalidLattice(&'static str),
    #[error("mode vector outside the first Brillouin zone")]
    OutsideZone,
    #[error("lattice has {atoms} atoms, cap is {cap}; use the finite-integral method")]
    TooLarge { atoms: usize, cap: usize },
    #[error("mode lies on a light circle |k - g| = k0, the infinite-lattice rate diverges")]
    Singular,
    #[error("outside the formula's domain: {0}")]
    Domain(&'static str),
    #[error("imaginary part of the pair sum did not cancel ({imag:e} vs {real:e})")]
    SymmetryCheck { real: f64, imag: f64 },
    #[error("eigensolver did not converge")]
    EigenFailure,
}
