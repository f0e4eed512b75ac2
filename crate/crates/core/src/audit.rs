//! Randomized invariant checks over seeded Ginibre ensembles.

use std::fmt;

use crate::correlations::{bloch_decompose, covariance_matrix, covariance_spectrum, ObservableSet};
use crate::criteria::{classify_all, CriterionId, CriterionOptions};
use crate::error::Result;
use crate::par::{map_indexed, Execution};
use crate::qstate::{ensemble_seed, is_entangled_ppt, purity, random_mixed, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    BlochRoundTrip,
    PurityIdentity,
    PurePurity,
    PcaTraceIdentity,
    CovNlcEquivalence,
    SteerableImpliesEntangled,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::BlochRoundTrip,
        Check::PurityIdentity,
        Check::PurePurity,
        Check::PcaTraceIdentity,
        Check::CovNlcEquivalence,
        Check::SteerableImpliesEntangled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::BlochRoundTrip => "bloch_round_trip",
            Check::PurityIdentity => "purity_identity",
            Check::PurePurity => "pure_state_purity",
            Check::PcaTraceIdentity => "pca_trace_identity",
            Check::CovNlcEquivalence => "cov_nlc_equivalence",
            Check::SteerableImpliesEntangled => "steerable_implies_ppt_entangled",
        }
    }
}

/// Outcome of every applicable check on one state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateAudit {
    pub results: Vec<(Check, bool)>,
}

/// Runs every invariant check on `rho`. `PurePurity` only applies when
/// `expect_pure` is set.
pub fn audit_state(rho: &DensityMatrix, expect_pure: bool) -> Result<StateAudit> {
    let mut results = Vec::with_capacity(Check::ALL.len());
    let form = bloch_decompose(rho)?;

    let round_trip = form.reconstruct().max_abs_diff(rho.matrix()) <= 1e-12;
    results.push((Check::BlochRoundTrip, round_trip && form.within_unit_bounds()));

    let pur = purity(rho);
    results.push((
        Check::PurityIdentity,
        (form.total_weight() - (4.0 * pur - 1.0)).abs() <= 1e-9,
    ));
    if expect_pure {
        results.push((Check::PurePurity, (pur - 1.0).abs() <= 1e-10));
    }

    let cov = covariance_matrix(rho, ObservableSet::Full9)?;
    let spectrum = covariance_spectrum(&cov)?;
    let variance_sum: f64 = cov.gamma.diagonal().iter().sum();
    let pca = (spectrum.sum - variance_sum).abs() <= 1e-9
        && (variance_sum - (9.0 - form.correlation_norm_sqr())).abs() <= 1e-9;
    results.push((Check::PcaTraceIdentity, pca));

    let opts = CriterionOptions::default();
    let reports = classify_all(rho, &opts)?;
    let get = |id: CriterionId| reports.iter().find(|r| r.criterion == id).expect("all criteria run");
    let pair_ok = |cov_id: CriterionId, nlc_id: CriterionId, total: f64| {
        let (c, n) = (get(cov_id), get(nlc_id));
        !n.applicable || ((c.statistic - (total - n.statistic)).abs() <= 1e-9 && c.steerable == n.steerable)
    };
    let equivalence = pair_ok(CriterionId::CovFull, CriterionId::NlcFull, 9.0)
        && pair_ok(CriterionId::CovSym, CriterionId::NlcSym, 3.0);
    results.push((Check::CovNlcEquivalence, equivalence));

    let any_steerable = reports.iter().any(|r| r.steerable);
    results.push((
        Check::SteerableImpliesEntangled,
        !any_steerable || is_entangled_ppt(rho),
    ));
    Ok(StateAudit { results })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditSummary {
    pub states: usize,
    /// `(check, passed, failed)` in [`Check::ALL`] order.
    pub tallies: Vec<(Check, usize, usize)>,
}

impl AuditSummary {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|&(_, _, failed)| failed == 0)
    }
}

impl fmt::Display for AuditSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<34} {:>8} {:>8}", "check", "passed", "failed")?;
        for (check, passed, failed) in &self.tallies {
            writeln!(f, "{:<34} {:>8} {:>8}", check.name(), passed, failed)?;
        }
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        write!(f, "audit: {} states, {}", self.states, verdict)
    }
}

/// Audits `count` Ginibre states of the given rank, sample `i` seeded with
/// `seed ^ i`.
pub fn run_audit(count: usize, seed: u64, rank: usize, exec: Execution) -> Result<AuditSummary> {
    // validate rank up front so an empty run still rejects it
    random_mixed(seed, rank)?;
    let audits = map_indexed(count, exec, |i| {
        let rho = random_mixed(ensemble_seed(seed, i as u64), rank)?;
        audit_state(&rho, rank == 1)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let tallies = Check::ALL
        .iter()
        .filter(|&&c| c != Check::PurePurity || rank == 1)
        .map(|&check| {
            let (mut passed, mut failed) = (0, 0);
            for a in &audits {
                for &(c, ok) in &a.results {
                    if c == check {
                        if ok {
                            passed += 1;
                        } else {
                            failed += 1;
                        }
                    }
                }
            }
            (check, passed, failed)
        })
        .collect();
    Ok(AuditSummary {
        states: count,
        tallies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_audit_passes() {
        let s = run_audit(50, 42, 4, Execution::Sequential).unwrap();
        assert!(s.all_passed(), "{s}");
        assert_eq!(s.tallies[0].1, 50);
    }

    #[test]
    fn pure_audit_includes_purity() {
        let s = run_audit(1, 7, 1, Execution::Sequential).unwrap();
        assert!(s.tallies.iter().any(|t| t.0 == Check::PurePurity && t.1 == 1));
        assert!(s.all_passed());
    }

    #[test]
    fn empty_audit_is_vacuous() {
        let s = run_audit(0, 0, 4, Execution::Sequential).unwrap();
        assert!(s.all_passed());
        assert!(run_audit(0, 0, 9, Execution::Sequential).is_err());
    }
}
