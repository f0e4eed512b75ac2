//! Numerical tolerances shared by every module.

/// Max elementwise |A - A†| accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-10;
/// |tr ρ - 1| accepted for a density matrix.
pub const TRACE: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD: f64 = 1e-9;
/// Max elementwise |A - Aᵀ| for a real symmetric matrix.
pub const SYMMETRY: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius mass falls below this
/// fraction of the input's Frobenius norm.
pub const JACOBI_RELATIVE: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Imaginary part of tr(ρ O) tolerated for Hermitian O.
pub const IMAGINARY_RESIDUE: f64 = 1e-10;
/// Negative probabilities above -PROBABILITY_CLAMP are rounded to zero.
pub const PROBABILITY_CLAMP: f64 = 1e-12;
/// Default margin a statistic must clear past its bound to count as detected.
pub const DETECTION: f64 = 1e-12;
/// Default elementwise tolerance for F ρ F = ρ.
pub const SWAP: f64 = 1e-9;
/// Local variances below this are treated as zero by the LUR criterion.
pub const LUR_DEGENERATE_VARIANCE: f64 = 1e-12;
/// Partial-transpose eigenvalue below -PPT flags entanglement.
pub const PPT: f64 = 1e-9;
/// Slack on |c| <= 1 for Bloch components.
pub const BLOCH_COMPONENT: f64 = 1e-9;
/// Default bisection width for threshold searches.
pub const THRESHOLD: f64 = 1e-9;

pub const MAX_GRID_POINTS: u128 = 10_000_000;
