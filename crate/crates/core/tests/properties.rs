use proptest::prelude::*;

use steerkit::correlations::{
    bloch_decompose, covariance_matrix, covariance_spectrum, joint_distribution, Axis,
    ObservableSet,
};
use steerkit::criteria::{
    cov_criterion_full, linear_criterion, nlc_full, nlc_symmetric, CriterionOptions, Diagnostics,
};
use steerkit::linalg::{hermitian_eigenvalues, kron, matmul, symmetric_eigenvalues, C64, ComplexMatrix};
use steerkit::qstate::{
    is_entangled_ppt, is_swap_symmetric, make_bell_diagonal, make_gisin, make_werner, purity,
    random_mixed, random_product_pure, random_pure,
};
use steerkit::tol;

fn complex_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        ComplexMatrix::new(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n).prop_map(|m| m.add(&m.adjoint()).unwrap().scale(C64::new(0.5, 0.0)))
}

/// Unitary from modified Gram–Schmidt on the columns of a random matrix.
fn unitary_from(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut q = m.clone();
    for j in 0..n {
        for k in 0..j {
            let dot: C64 = (0..n).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
            for i in 0..n {
                let qik = q[(i, k)];
                q[(i, j)] -= dot * qik;
            }
        }
        let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalue_sum_is_trace(m in hermitian(4)) {
        let e = hermitian_eigenvalues(&m).unwrap();
        prop_assert!((e.iter().sum::<f64>() - m.trace().re).abs() <= 1e-9 * 4.0);
        prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn spectrum_is_unitarily_invariant(m in hermitian(4), g in complex_matrix(4)) {
        let u = unitary_from(&g);
        let rotated = matmul(&matmul(&u, &m).unwrap(), &u.adjoint()).unwrap();
        let a = hermitian_eigenvalues(&m).unwrap();
        let b = hermitian_eigenvalues(&rotated).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn large_hermitian_converges(m in hermitian(16)) {
        let e = hermitian_eigenvalues(&m).unwrap();
        prop_assert!((e.iter().sum::<f64>() - m.trace().re).abs() <= 1e-9 * 16.0);
    }

    #[test]
    fn symmetric_eigenvalue_sum_is_trace(v in prop::collection::vec(-2.0..2.0f64, 81)) {
        let mut data = vec![0.0; 81];
        for i in 0..9 {
            for j in 0..9 {
                data[i * 9 + j] = 0.5 * (v[i * 9 + j] + v[j * 9 + i]);
            }
        }
        let m = steerkit::SymmetricMatrix::new(9, data).unwrap();
        let e = symmetric_eigenvalues(&m).unwrap();
        prop_assert!((e.iter().sum::<f64>() - m.trace()).abs() <= 1e-9 * 9.0);
    }

    #[test]
    fn kron_trace_and_associativity(
        a in complex_matrix(2),
        b in complex_matrix(2),
        c in complex_matrix(3),
    ) {
        let ab = kron(&a, &b).unwrap();
        prop_assert!((ab.trace() - a.trace() * b.trace()).norm() <= 1e-12);
        let left = kron(&ab, &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn bell_diagonal_closed_form_spectrum(c in prop::array::uniform3(-1.0..=1.0f64)) {
        let [c1, c2, c3] = c;
        let mut closed = [
            0.25 * (1.0 - c1 - c2 - c3),
            0.25 * (1.0 - c1 + c2 + c3),
            0.25 * (1.0 + c1 - c2 + c3),
            0.25 * (1.0 + c1 + c2 - c3),
        ];
        closed.sort_by(f64::total_cmp);
        match make_bell_diagonal(c) {
            Ok(rho) => {
                let e = rho.eigenvalues();
                for (x, y) in e.iter().zip(&closed) {
                    prop_assert!((x - y).abs() <= 1e-10);
                }
                prop_assert!(is_swap_symmetric(&rho, tol::SWAP));
            }
            Err(_) => prop_assert!(closed[0] < -tol::PSD),
        }
    }

    #[test]
    fn werner_equals_bell_diagonal(p in 0.0..=1.0f64) {
        let w = make_werner(p).unwrap();
        let bd = make_bell_diagonal([p, -p, p]).unwrap();
        prop_assert!(w.matrix().max_abs_diff(bd.matrix()) <= 1e-12);
    }

    #[test]
    fn gisin_symmetry_only_at_quarter_pi(theta in 0.0..std::f64::consts::FRAC_PI_2, p in 0.01..=1.0f64) {
        let g = make_gisin(theta, p).unwrap();
        let at_quarter = (theta - std::f64::consts::FRAC_PI_4).abs() <= 1e-9;
        prop_assert_eq!(is_swap_symmetric(&g, tol::SWAP), at_quarter);
    }

    #[test]
    fn bloch_round_trip_and_purity(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_mixed(seed, rank).unwrap();
        let f = bloch_decompose(&rho).unwrap();
        prop_assert!(f.reconstruct().max_abs_diff(rho.matrix()) <= 1e-12);
        prop_assert!(f.within_unit_bounds());
        prop_assert!((f.total_weight() - (4.0 * purity(&rho) - 1.0)).abs() <= 1e-9);
        let pur = purity(&rho);
        prop_assert!((0.25 - 1e-9..=1.0 + 1e-9).contains(&pur));
    }

    #[test]
    fn joint_marginals_reproduce_bloch(seed in any::<u64>()) {
        let rho = random_mixed(seed, 3).unwrap();
        let f = bloch_decompose(&rho).unwrap();
        for a in Axis::ALL {
            for b in Axis::ALL {
                let d = joint_distribution(&rho, a, b).unwrap();
                let ma = d.marginal_a();
                let mb = d.marginal_b();
                prop_assert!((ma[0] - ma[1] - f.a[a.offset()]).abs() <= 1e-10);
                prop_assert!((mb[0] - mb[1] - f.b[b.offset()]).abs() <= 1e-10);
                let corr = d.p[0][0] - d.p[0][1] - d.p[1][0] + d.p[1][1];
                prop_assert!((corr - f.t[a.offset()][b.offset()]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn covariance_invariants(seed in any::<u64>()) {
        let rho = random_mixed(seed, 4).unwrap();
        let f = bloch_decompose(&rho).unwrap();
        let cov = covariance_matrix(&rho, ObservableSet::Full9).unwrap();
        let spec = covariance_spectrum(&cov).unwrap();
        prop_assert!(spec.eigenvalues[0] >= -1e-9);
        prop_assert!((spec.sum - (9.0 - f.correlation_norm_sqr())).abs() <= 1e-9);
        prop_assert!((spec.sum - cov.gamma.trace()).abs() <= 1e-9);
    }

    #[test]
    fn cov_full_mirrors_nlc_full(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_mixed(seed, rank).unwrap();
        let opts = CriterionOptions::default();
        let n = nlc_full(&rho, &opts).unwrap();
        let c = cov_criterion_full(&rho, &opts).unwrap();
        prop_assert!((c.statistic - (9.0 - n.statistic)).abs() <= 1e-9);
        prop_assert_eq!(c.steerable, n.steerable);
    }

    #[test]
    fn symmetric_statistic_never_exceeds_full(seed in any::<u64>()) {
        let rho = random_mixed(seed, 2).unwrap();
        let opts = CriterionOptions { allow_asymmetric: true, ..Default::default() };
        let full = nlc_full(&rho, &opts).unwrap();
        let sym = nlc_symmetric(&rho, &opts).unwrap();
        prop_assert!(sym.statistic <= full.statistic + 1e-12);
    }

    #[test]
    fn linear_statistic_is_absolute_diagonal_sum(seed in any::<u64>()) {
        let rho = random_mixed(seed, 1).unwrap();
        let f = bloch_decompose(&rho).unwrap();
        let r = linear_criterion(&rho, &Default::default()).unwrap();
        let abs_sum: f64 = f.diagonal().iter().map(|x| x.abs()).sum();
        prop_assert!((r.statistic - abs_sum).abs() <= 1e-12);
        let Diagnostics::SignVector { omega } = r.diagnostics else { panic!() };
        let achieved: f64 = omega.iter().zip(f.diagonal()).map(|(&w, t)| f64::from(w) * t).sum::<f64>().abs();
        prop_assert!((achieved - r.statistic).abs() <= 1e-15);
    }

    #[test]
    fn reports_are_self_consistent(seed in any::<u64>()) {
        let rho = random_pure(seed);
        for r in steerkit::classify_all(&rho, &Default::default()).unwrap() {
            if r.applicable {
                prop_assert_eq!(r.steerable, r.margin > tol::DETECTION);
            }
        }
    }
}

#[test]
fn pure_states_purity_and_products() {
    for seed in 0..1000 {
        let rho = random_pure(seed);
        assert!((purity(&rho) - 1.0).abs() <= 1e-10);
        let prod = random_product_pure(seed);
        assert!(!is_entangled_ppt(&prod));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn threshold_ignores_bracket_order(theta in 0.2..1.3f64) {
        use steerkit::qstate::FamilyKind;
        use steerkit::scan::{find_threshold, ThresholdQuery};
        use steerkit::CriterionId;
        let opts = CriterionOptions::default();
        let q = ThresholdQuery::new(FamilyKind::Gisin, "p", CriterionId::NlcFull, 0.0, 1.0)
            .with_fixed("theta", theta)
            .with_tol(1e-8);
        let swapped = ThresholdQuery { lo: 1.0, hi: 0.0, ..q.clone() };
        let finer = q.clone().with_tol(5e-9);
        let t = find_threshold(&q, &opts).unwrap();
        prop_assert!((t - find_threshold(&swapped, &opts).unwrap()).abs() <= 1e-8);
        prop_assert!((t - find_threshold(&finer, &opts).unwrap()).abs() <= 1e-8);
        let s2 = (2.0 * theta).sin().powi(2);
        prop_assert!((t - 2.0 / (s2 + 2.0)).abs() <= 1e-8);
    }
}
