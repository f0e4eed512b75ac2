//! Pauli-measurement steering criteria for two-qubit quantum states.
//!
//! The crate evaluates a family of sufficient steering criteria on 4×4
//! density matrices: the correlation-tensor criteria (full and
//! swap-symmetric), their covariance-spectrum counterparts, and the local
//! uncertainty relation, linear and entropic criteria they are compared
//! against. Parameter sweeps and threshold searches over the Werner,
//! Bell-diagonal and Gisin families live in [`scan`]; [`cli`] wraps all of
//! it behind the `steerkit` binary.
//!
//! Conventions used throughout: basis ordering `|00>, |01>, |10>, |11>` with
//! subsystem A as the first tensor factor, and `σ1 = X`, `σ2 = Y`, `σ3 = Z`.

pub mod audit;
pub mod cli;
pub mod correlations;
pub mod criteria;
pub mod error;
pub mod linalg;
pub mod par;
pub mod qstate;
pub mod scan;
pub mod tol;

pub use correlations::{
    bloch_decompose, conditional_entropy, covariance_matrix, covariance_spectrum, expectation,
    joint_distribution, Axis, BlochForm, CovarianceMatrix, CovarianceSpectrum, JointDistribution,
    ObservableSet, Pauli,
};
pub use criteria::{
    classify_all, cov_criterion_full, cov_criterion_symmetric, entropic_criterion,
    linear_criterion, lur_criterion, nlc_full, nlc_symmetric, CriterionId, CriterionOptions,
    CriterionReport, Diagnostics, Direction,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, SymmetricMatrix};
pub use par::Execution;
pub use qstate::{DensityMatrix, FamilyKind, FamilySpec, ValidationReport};
pub use scan::{find_threshold, sweep, GridSpec, ParamRange, ScanRow, ThresholdQuery};
