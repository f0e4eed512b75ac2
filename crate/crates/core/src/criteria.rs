//! Sufficient steering criteria built from Pauli measurements.
//!
//! Every criterion reduces a state to one scalar statistic and compares it
//! with a fixed bound. Unsteerable states always satisfy the bound, so a
//! violation certifies steering; satisfying it says nothing. Ties at the
//! bound count as "not detected".
//!
//! | criterion  | statistic                                   | steerable if |
//! |------------|---------------------------------------------|--------------|
//! | `NLC_FULL` | Σ_ij T_ij²                                  | > 1          |
//! | `NLC_SYM`  | Σ_i T_ii² (swap-symmetric states)           | > 1          |
//! | `COV_FULL` | Σ λ_k of the 9×9 covariance matrix          | < 8          |
//! | `COV_SYM`  | Σ λ_k of the 3×3 covariance matrix          | < 2          |
//! | `LUR`      | Σ_i δ²(σ_i^B) - C²(σ_i^A, σ_i^B)/δ²(σ_i^A)  | < 2          |
//! | `LINEAR`   | max_ω \|Σ_i ω_i T_ii\|                      | > √3         |
//! | `ENTROPIC` | Σ_i H(σ_i^B \| σ_i^A) in bits               | < 2          |
//!
//! The two covariance criteria are the trace form of the correlation-norm
//! criteria: each observable squares to the identity, so the eigenvalue sum
//! equals `9 - Σ T_ij²` (resp. `3 - Σ T_ii²`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::correlations::{
    bloch_decompose, conditional_entropy, covariance_matrix, covariance_spectrum, Axis, BlochForm,
    ObservableSet,
};
use crate::error::{Error, Result};
use crate::qstate::{is_swap_symmetric, DensityMatrix};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CriterionId {
    NlcFull,
    NlcSym,
    CovFull,
    CovSym,
    Lur,
    Linear,
    Entropic,
}

impl CriterionId {
    /// Canonical evaluation order.
    pub const ALL: [CriterionId; 7] = [
        CriterionId::NlcFull,
        CriterionId::NlcSym,
        CriterionId::CovFull,
        CriterionId::CovSym,
        CriterionId::Lur,
        CriterionId::Linear,
        CriterionId::Entropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriterionId::NlcFull => "NLC_FULL",
            CriterionId::NlcSym => "NLC_SYM",
            CriterionId::CovFull => "COV_FULL",
            CriterionId::CovSym => "COV_SYM",
            CriterionId::Lur => "LUR",
            CriterionId::Linear => "LINEAR",
            CriterionId::Entropic => "ENTROPIC",
        }
    }

    /// Command-line spelling, e.g. `nlc-full`.
    pub fn flag_name(self) -> String {
        self.name().to_ascii_lowercase().replace('_', "-")
    }

    pub fn requires_symmetry(self) -> bool {
        matches!(self, CriterionId::NlcSym | CriterionId::CovSym)
    }

    pub fn bound(self) -> f64 {
        match self {
            CriterionId::NlcFull | CriterionId::NlcSym => 1.0,
            CriterionId::CovFull => 8.0,
            CriterionId::CovSym | CriterionId::Lur | CriterionId::Entropic => 2.0,
            CriterionId::Linear => 3f64.sqrt(),
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            CriterionId::NlcFull | CriterionId::NlcSym | CriterionId::Linear => {
                Direction::ViolatesAbove
            }
            _ => Direction::ViolatesBelow,
        }
    }

    pub fn evaluate(self, rho: &DensityMatrix, opts: &CriterionOptions) -> Result<CriterionReport> {
        match self {
            CriterionId::NlcFull => nlc_full(rho, opts),
            CriterionId::NlcSym => nlc_symmetric(rho, opts),
            CriterionId::CovFull => cov_criterion_full(rho, opts),
            CriterionId::CovSym => cov_criterion_symmetric(rho, opts),
            CriterionId::Lur => lur_criterion(rho, opts),
            CriterionId::Linear => linear_criterion(rho, opts),
            CriterionId::Entropic => entropic_criterion(rho, opts),
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        CriterionId::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown criterion `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    ViolatesAbove,
    ViolatesBelow,
}

impl Direction {
    /// Signed distance past the bound; positive means the bound is violated.
    pub fn margin(self, statistic: f64, bound: f64) -> f64 {
        match self {
            Direction::ViolatesAbove => statistic - bound,
            Direction::ViolatesBelow => bound - statistic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    None,
    Eigenvalues { eigenvalues: Vec<f64> },
    SignVector { omega: [i8; 3] },
    AxisEntropies { entropies: [f64; 3] },
    AxisTerms { terms: [f64; 3] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: CriterionId,
    pub statistic: f64,
    pub bound: f64,
    pub direction: Direction,
    pub steerable: bool,
    pub margin: f64,
    /// False when the criterion's hypothesis (swap symmetry) does not hold.
    /// Without the override such reports never claim steering.
    pub applicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionOptions {
    /// Margin a statistic must clear past its bound.
    pub tol: f64,
    /// Evaluate symmetric criteria on asymmetric states anyway.
    pub allow_asymmetric: bool,
    /// Tolerance of the swap-symmetry gate.
    pub swap_tol: f64,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        Self {
            tol: tol::DETECTION,
            allow_asymmetric: false,
            swap_tol: tol::SWAP,
        }
    }
}

fn report(
    criterion: CriterionId,
    statistic: f64,
    diagnostics: Diagnostics,
    opts: &CriterionOptions,
) -> CriterionReport {
    let bound = criterion.bound();
    let direction = criterion.direction();
    let margin = direction.margin(statistic, bound);
    CriterionReport {
        criterion,
        statistic,
        bound,
        direction,
        steerable: margin > opts.tol,
        margin,
        applicable: true,
        note: None,
        diagnostics,
    }
}

/// Swap-symmetry gate shared by the symmetric variants. Returns the note to
/// attach when the state is asymmetric but the override is set.
fn symmetry_gate(
    criterion: CriterionId,
    rho: &DensityMatrix,
    opts: &CriterionOptions,
) -> Result<Option<String>> {
    if is_swap_symmetric(rho, opts.swap_tol) {
        return Ok(None);
    }
    if opts.allow_asymmetric {
        Ok(Some("state is not swap-symmetric; evaluated by override".into()))
    } else {
        Err(Error::NotSymmetric {
            criterion: criterion.name(),
        })
    }
}

fn gated(mut r: CriterionReport, note: Option<String>) -> CriterionReport {
    if note.is_some() {
        r.applicable = false;
        r.note = note;
    }
    r
}

pub fn nlc_full(rho: &DensityMatrix, opts: &CriterionOptions) -> Result<CriterionReport> {
    let form = bloch_decompose(rho)?;
    Ok(nlc_full_from(&form, opts))
}

fn nlc_full_from(form: &BlochForm, opts: &CriterionOptions) -> CriterionReport {
    report(CriterionId::NlcFull, form.correlation_norm_sqr(), Diagnostics::None, opts)
}

pub fn nlc_symmetric(rho: &DensityMatrix, opts: &CriterionOptions) -> Result<CriterionReport> {
    let note = symmetry_gate(CriterionId::NlcSym, rho, opts)?;
    let form = bloch_decompose(rho)?;
    Ok(gated(nlc_symmetric_from(&form, opts), note))
}

fn nlc_symmetric_from(form: &BlochForm, opts: &CriterionOptions) -> CriterionReport {
    let stat = form.diagonal().iter().map(|x| x * x).sum();
    report(CriterionId::NlcSym, stat, Diagnostics::None, opts)
}

pub fn cov_criterion_full(rho: &DensityMatrix, opts: &CriterionOptions) -> Result<CriterionReport> {
    let spec = covariance_spectrum(&covariance_matrix(rho, ObservableSet::Full9)?)?;
    Ok(report(
        CriterionId::CovFull,
        spec.sum,
        Diagnostics::Eigenvalues {
            eigenvalues: spec.eigenvalues,
        },
        opts,
    ))
}

pub fn cov_criterion_symmetric(
    rho: &DensityMatrix,
    opts: &CriterionOptions,
) -> Result<CriterionReport> {
    let note = symmetry_gate(CriterionId::CovSym, rho, opts)?;
    let spec = covariance_spectrum(&covariance_matrix(rho, ObservableSet::Diag3)?)?;
    let r = report(
        CriterionId::CovSym,
        spec.sum,
        Diagnostics::Eigenvalues {
            eigenvalues: spec.eigenvalues,
        },
        opts,
    );
    Ok(gated(r, note))
}

pub fn lur_criterion(rho: &DensityMatrix, opts: &CriterionOptions) -> Result<CriterionReport> {
    let form = bloch_decompose(rho)?;
    Ok(lur_from(&form, opts))
}

fn lur_from(form: &BlochForm, opts: &CriterionOptions) -> CriterionReport {
    let terms: [f64; 3] = std::array::from_fn(|i| {
        let var_a = 1.0 - form.a[i] * form.a[i];
        let var_b = 1.0 - form.b[i] * form.b[i];
        let cov = form.t[i][i] - form.a[i] * form.b[i];
        if var_a < tol::LUR_DEGENERATE_VARIANCE {
            // zero variance on A forces zero covariance
            var_b
        } else {
            var_b - cov * cov / var_a
        }
    });
    report(
        CriterionId::Lur,
        terms.iter().sum(),
        Diagnostics::AxisTerms { terms },
        opts,
    )
}

pub fn linear_criterion(rho: &DensityMatrix, opts: &CriterionOptions) -> Result<CriterionReport> {
    let form = bloch_decompose(rho)?;
    Ok(linear_from(&form, opts))
}

fn linear_from(form: &BlochForm, opts: &CriterionOptions) -> CriterionReport {
    let diag = form.diagonal();
    let mut best = (f64::NEG_INFINITY, [1i8; 3]);
    for bits in 0..8u8 {
        let omega: [i8; 3] = std::array::from_fn(|i| if bits >> i & 1 == 0 { 1 } else { -1 });
        let value = omega
            .iter()
            .zip(&diag)
            .map(|(&w, &t)| f64::from(w) * t)
            .sum::<f64>()
            .abs();
        if value > best.0 {
            best = (value, omega);
        }
    }
    report(
        CriterionId::Linear,
        best.0,
        Diagnostics::SignVector { omega: best.1 },
        opts,
    )
}

pub fn entropic_criterion(rho: &DensityMatrix, opts: &CriterionOptions) -> Result<CriterionReport> {
    let mut entropies = [0.0; 3];
    for axis in Axis::ALL {
        entropies[axis.offset()] = conditional_entropy(rho, axis)?;
    }
    Ok(report(
        CriterionId::Entropic,
        entropies.iter().sum(),
        Diagnostics::AxisEntropies { entropies },
        opts,
    ))
}

/// Evaluates the chosen criteria in canonical order. Symmetric variants on
/// an asymmetric state come back with `applicable = false` and
/// `steerable = false` unless the override is set.
pub fn classify_selected(
    rho: &DensityMatrix,
    criteria: &[CriterionId],
    opts: &CriterionOptions,
) -> Result<Vec<CriterionReport>> {
    let mut selected = criteria.to_vec();
    selected.sort();
    selected.dedup();
    let mut out = Vec::with_capacity(selected.len());
    for id in selected {
        match id.evaluate(rho, opts) {
            Ok(r) => out.push(r),
            Err(Error::NotSymmetric { .. }) => {
                let forced = CriterionOptions {
                    allow_asymmetric: true,
                    ..*opts
                };
                let mut r = id.evaluate(rho, &forced)?;
                r.steerable = false;
                r.note = Some("state is not swap-symmetric; criterion not applicable".into());
                out.push(r);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn classify_all(rho: &DensityMatrix, opts: &CriterionOptions) -> Result<Vec<CriterionReport>> {
    classify_selected(rho, &CriterionId::ALL, opts)
}
