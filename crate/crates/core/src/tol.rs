//! Central tolerance constants. Every module pulls its thresholds from here
//! so a reviewer can audit the numeric contract in one place.

/// Maximum Hermiticity defect `max |a_ij - conj(a_ji)|` accepted by the
/// eigensolver and the density-matrix validator.
pub const HERM_TOL: f64 = 1e-10;

/// Eigendecomposition must reconstruct its input to this entrywise accuracy.
pub const RECON_TOL: f64 = 1e-10;

/// Default entrywise tolerance for matrix equality comparisons.
pub const EQ_TOL: f64 = 1e-10;

/// Trace of a density matrix must be within this of 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Smallest eigenvalue a density matrix may have (eigensolver noise floor).
pub const PSD_TOL: f64 = 1e-10;

/// Kraus completeness: `sum K^dag K` must match the identity to this.
pub const CPTP_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as exact zeros inside entropy code.
pub const SPECTRAL_FLOOR: f64 = 1e-12;

/// Weight of rho on a sigma-kernel eigenvector above which the relative
/// entropy is declared infinite. Paired asymmetrically with
/// [`SPECTRAL_FLOOR`] to avoid false infinities from eigensolver noise.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Rate denominators below this raise [`crate::Error::Degenerate`].
pub const DEGENERATE_TOL: f64 = 1e-12;

/// The Jacobi sweep stops once the off-diagonal Frobenius mass drops below
/// this (scaled by the matrix norm for inputs far from unit scale).
pub const JACOBI_OFF_TOL: f64 = 1e-14;
