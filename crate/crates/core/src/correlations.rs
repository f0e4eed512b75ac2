//! Measurement statistics of Pauli observables on a two-qubit state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{matmul, symmetric_eigenvalues, C64, ComplexMatrix, SymmetricMatrix};
use crate::qstate::{pauli_matrix, pauli_product, DensityMatrix};
use crate::tol;

/// Single-qubit Pauli operator; `I` is index 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn matrix(self) -> ComplexMatrix {
        pauli_matrix(self.index())
    }
}

/// A measurement direction: one of the three non-trivial Paulis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Zero-based position among x, y, z.
    pub fn offset(self) -> usize {
        self as usize
    }

    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

impl From<Axis> for Pauli {
    fn from(a: Axis) -> Self {
        a.pauli()
    }
}

fn real_expectation(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<f64> {
    let z = rho.matrix().trace_product(op)?;
    if z.im.abs() > tol::IMAGINARY_RESIDUE {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// `tr(ρ σa ⊗ σb)`.
pub fn expectation(rho: &DensityMatrix, a: Pauli, b: Pauli) -> Result<f64> {
    real_expectation(rho, &pauli_product(a.index(), b.index()))
}

/// Pauli-basis coordinates of a two-qubit state:
/// `ρ = ¼(I + Σ a_i σ_i⊗I + Σ b_j I⊗σ_j + Σ T_ij σ_i⊗σ_j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochForm {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochForm {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(4);
        let mut add = |i: usize, j: usize, c: f64| {
            if c != 0.0 {
                m = m.add(&pauli_product(i, j).scale(C64::new(c, 0.0))).expect("4x4");
            }
        };
        for i in 0..3 {
            add(i + 1, 0, self.a[i]);
            add(0, i + 1, self.b[i]);
            for j in 0..3 {
                add(i + 1, j + 1, self.t[i][j]);
            }
        }
        m.scale(C64::new(0.25, 0.0))
    }

    /// ‖T‖²_F, the full-correlation statistic.
    pub fn correlation_norm_sqr(&self) -> f64 {
        self.t.iter().flatten().map(|x| x * x).sum()
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.t[0][0], self.t[1][1], self.t[2][2]]
    }

    /// |a|² + |b|² + ‖T‖²_F, equal to 4 tr(ρ²) - 1.
    pub fn total_weight(&self) -> f64 {
        let sq = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
        sq(&self.a) + sq(&self.b) + self.correlation_norm_sqr()
    }

    fn components(&self) -> impl Iterator<Item = f64> + '_ {
        self.a.iter().chain(&self.b).chain(self.t.iter().flatten()).copied()
    }

    pub fn within_unit_bounds(&self) -> bool {
        self.components().all(|c| c.abs() <= 1.0 + tol::BLOCH_COMPONENT)
    }
}

pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochForm> {
    let mut form = BlochForm {
        a: [0.0; 3],
        b: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for axis in Axis::ALL {
        let k = axis.offset();
        form.a[k] = expectation(rho, axis.pauli(), Pauli::I)?;
        form.b[k] = expectation(rho, Pauli::I, axis.pauli())?;
        for other in Axis::ALL {
            form.t[k][other.offset()] = expectation(rho, axis.pauli(), other.pauli())?;
        }
    }
    Ok(form)
}

/// Joint outcome probabilities for measuring `σa` on A and `σb` on B.
/// `p[0]` is outcome +1 and `p[1]` is -1 on each side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    pub p: [[f64; 2]; 2],
}

impl JointDistribution {
    pub const OUTCOMES: [f64; 2] = [1.0, -1.0];

    pub fn total(&self) -> f64 {
        self.p.iter().flatten().sum()
    }

    pub fn marginal_a(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]]
    }

    pub fn marginal_b(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]]
    }

    /// `H(B|A) = Σ_a p(a) H(B | A = a)` in bits.
    pub fn conditional_entropy_b_given_a(&self) -> f64 {
        let mut h = 0.0;
        for row in &self.p {
            let pa: f64 = row.iter().sum();
            if pa <= 0.0 {
                continue;
            }
            for &pab in row {
                if pab > 0.0 {
                    h -= pab * (pab / pa).log2();
                }
            }
        }
        h
    }
}

fn projector(axis: Axis, sign: f64) -> ComplexMatrix {
    ComplexMatrix::identity(2)
        .add(&axis.pauli().matrix().scale(C64::new(sign, 0.0)))
        .expect("2x2")
        .scale(C64::new(0.5, 0.0))
}

pub fn joint_distribution(rho: &DensityMatrix, a: Axis, b: Axis) -> Result<JointDistribution> {
    let mut p = [[0.0; 2]; 2];
    for (ia, &sa) in JointDistribution::OUTCOMES.iter().enumerate() {
        for (ib, &sb) in JointDistribution::OUTCOMES.iter().enumerate() {
            let proj = crate::linalg::kron(&projector(a, sa), &projector(b, sb))?;
            let v = real_expectation(rho, &proj)?;
            if v < -tol::PROBABILITY_CLAMP {
                return Err(Error::NegativeProbability(v));
            }
            p[ia][ib] = v.clamp(0.0, 1.0);
        }
    }
    Ok(JointDistribution { p })
}

/// `H(σ_axis^B | σ_axis^A)` in bits.
pub fn conditional_entropy(rho: &DensityMatrix, axis: Axis) -> Result<f64> {
    Ok(joint_distribution(rho, axis, axis)?.conditional_entropy_b_given_a())
}

/// Which product observables enter the covariance matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObservableSet {
    /// `O_m = σ_i ⊗ σ_j` with `m = 3(i-1) + j`.
    Full9,
    /// `O_i = σ_i ⊗ σ_i`.
    Diag3,
}

impl ObservableSet {
    pub fn observables(self) -> Vec<(Axis, Axis)> {
        match self {
            ObservableSet::Full9 => Axis::ALL
                .iter()
                .flat_map(|&i| Axis::ALL.iter().map(move |&j| (i, j)))
                .collect(),
            ObservableSet::Diag3 => Axis::ALL.iter().map(|&i| (i, i)).collect(),
        }
    }

    pub fn len(self) -> usize {
        match self {
            ObservableSet::Full9 => 9,
            ObservableSet::Diag3 => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    pub set: ObservableSet,
    pub gamma: SymmetricMatrix,
}

/// `γ_mm' = ½⟨O_m O_m' + O_m' O_m⟩ - ⟨O_m⟩⟨O_m'⟩`.
pub fn covariance_matrix(rho: &DensityMatrix, set: ObservableSet) -> Result<CovarianceMatrix> {
    let ops: Vec<ComplexMatrix> = set
        .observables()
        .into_iter()
        .map(|(a, b)| pauli_product(a.pauli().index(), b.pauli().index()))
        .collect();
    let means = ops
        .iter()
        .map(|o| real_expectation(rho, o))
        .collect::<Result<Vec<_>>>()?;
    let n = ops.len();
    let mut data = vec![0.0; n * n];
    for m in 0..n {
        for k in m..n {
            let anti = matmul(&ops[m], &ops[k])?.add(&matmul(&ops[k], &ops[m])?)?;
            let g = 0.5 * real_expectation(rho, &anti)? - means[m] * means[k];
            data[m * n + k] = g;
            data[k * n + m] = g;
        }
    }
    Ok(CovarianceMatrix {
        set,
        gamma: SymmetricMatrix::new(n, data)?,
    })
}

/// Eigenvalues of a covariance matrix, ascending, with their sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceSpectrum {
    pub eigenvalues: Vec<f64>,
    pub sum: f64,
}

pub fn covariance_spectrum(cov: &CovarianceMatrix) -> Result<CovarianceSpectrum> {
    spectrum_of(&cov.gamma)
}

pub(crate) fn spectrum_of(gamma: &SymmetricMatrix) -> Result<CovarianceSpectrum> {
    let eigenvalues = symmetric_eigenvalues(gamma)?;
    let sum = eigenvalues.iter().sum();
    Ok(CovarianceSpectrum { eigenvalues, sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{make_bell_diagonal, make_gisin, make_werner, random_mixed};
    use std::f64::consts::FRAC_PI_6;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn binary_entropy(x: f64) -> f64 {
        [x, 1.0 - x].iter().filter(|&&v| v > 0.0).map(|v| -v * v.log2()).sum()
    }

    #[test]
    fn expectation_values() {
        let mm = DensityMatrix::maximally_mixed();
        close(expectation(&mm, Pauli::Z, Pauli::Z).unwrap(), 0.0, 1e-15);
        close(expectation(&mm, Pauli::I, Pauli::I).unwrap(), 1.0, 1e-15);
        let bell = make_werner(1.0).unwrap();
        close(expectation(&bell, Pauli::X, Pauli::X).unwrap(), 1.0, 1e-15);
        for p in [0.3, 0.8] {
            let w = make_werner(p).unwrap();
            close(expectation(&w, Pauli::Y, Pauli::Y).unwrap(), -p, 1e-15);
        }
    }

    #[test]
    fn bloch_of_families() {
        let f = bloch_decompose(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(f.total_weight(), 0.0);

        let f = bloch_decompose(&make_bell_diagonal([0.3, -0.2, 0.5]).unwrap()).unwrap();
        assert_eq!(f.a, [0.0; 3]);
        assert_eq!(f.b, [0.0; 3]);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { [0.3, -0.2, 0.5][i] } else { 0.0 };
                close(f.t[i][j], want, 1e-15);
            }
        }

        let (theta, p) = (FRAC_PI_6, 0.7);
        let f = bloch_decompose(&make_gisin(theta, p).unwrap()).unwrap();
        let c2 = (2.0 * theta).cos();
        let s2 = (2.0 * theta).sin();
        let want_a = [0.0, 0.0, -p * c2];
        let want_b = [0.0, 0.0, p * c2];
        let want_t = [p * s2, p * s2, 1.0 - 2.0 * p];
        for i in 0..3 {
            close(f.a[i], want_a[i], 1e-14);
            close(f.b[i], want_b[i], 1e-14);
            for j in 0..3 {
                close(f.t[i][j], if i == j { want_t[i] } else { 0.0 }, 1e-14);
            }
        }
        assert!(f.within_unit_bounds());
    }

    #[test]
    fn bloch_reconstruction() {
        let rho = random_mixed(9, 2).unwrap();
        let f = bloch_decompose(&rho).unwrap();
        assert!(f.reconstruct().max_abs_diff(rho.matrix()) <= 1e-12);
        let purity = crate::qstate::purity(&rho);
        close(f.total_weight(), 4.0 * purity - 1.0, 1e-9);
    }

    #[test]
    fn joint_distributions() {
        let mm = DensityMatrix::maximally_mixed();
        let d = joint_distribution(&mm, Axis::Z, Axis::Z).unwrap();
        for row in d.p {
            for v in row {
                close(v, 0.25, 1e-15);
            }
        }

        let bell = make_werner(1.0).unwrap();
        let d = joint_distribution(&bell, Axis::Z, Axis::Z).unwrap();
        close(d.p[0][0], 0.5, 1e-15);
        close(d.p[1][1], 0.5, 1e-15);
        close(d.p[0][1], 0.0, 1e-15);
        close(d.p[1][0], 0.0, 1e-15);

        let w = make_werner(0.5).unwrap();
        let d = joint_distribution(&w, Axis::X, Axis::X).unwrap();
        for (ia, a) in JointDistribution::OUTCOMES.iter().enumerate() {
            for (ib, b) in JointDistribution::OUTCOMES.iter().enumerate() {
                close(d.p[ia][ib], 0.25 * (1.0 + 0.5 * a * b), 1e-15);
            }
        }
    }

    #[test]
    fn joint_distribution_matches_bloch() {
        let rho = random_mixed(21, 4).unwrap();
        let f = bloch_decompose(&rho).unwrap();
        for a in Axis::ALL {
            for b in Axis::ALL {
                let d = joint_distribution(&rho, a, b).unwrap();
                close(d.total(), 1.0, 1e-10);
                for (ia, sa) in JointDistribution::OUTCOMES.iter().enumerate() {
                    for (ib, sb) in JointDistribution::OUTCOMES.iter().enumerate() {
                        let want = 0.25
                            * (1.0 + sa * f.a[a.offset()] + sb * f.b[b.offset()]
                                + sa * sb * f.t[a.offset()][b.offset()]);
                        close(d.p[ia][ib], want, 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn conditional_entropies() {
        let mm = DensityMatrix::maximally_mixed();
        for axis in Axis::ALL {
            close(conditional_entropy(&mm, axis).unwrap(), 1.0, 1e-15);
        }
        close(conditional_entropy(&make_werner(1.0).unwrap(), Axis::X).unwrap(), 0.0, 1e-15);

        let c = [0.6, -0.3, 0.2];
        let bd = make_bell_diagonal(c).unwrap();
        for axis in Axis::ALL {
            let ci = c[axis.offset()];
            close(
                conditional_entropy(&bd, axis).unwrap(),
                binary_entropy((1.0 + ci) / 2.0),
                1e-10,
            );
        }
    }

    #[test]
    fn covariance_cases() {
        let mm = DensityMatrix::maximally_mixed();
        let cov = covariance_matrix(&mm, ObservableSet::Full9).unwrap();
        assert_eq!(cov.gamma, SymmetricMatrix::identity(9));
        close(covariance_spectrum(&cov).unwrap().sum, 9.0, 1e-12);

        let bell = make_werner(1.0).unwrap();
        let cov = covariance_matrix(&bell, ObservableSet::Diag3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                close(cov.gamma.get(i, j), 0.0, 1e-15);
            }
        }
        let full = covariance_matrix(&bell, ObservableSet::Full9).unwrap();
        close(covariance_spectrum(&full).unwrap().sum, 6.0, 1e-12);
    }

    #[test]
    fn covariance_diagonal_is_variance() {
        let rho = random_mixed(77, 4).unwrap();
        let cov = covariance_matrix(&rho, ObservableSet::Full9).unwrap();
        for (m, (a, b)) in ObservableSet::Full9.observables().into_iter().enumerate() {
            let mean = expectation(&rho, a.pauli(), b.pauli()).unwrap();
            close(cov.gamma.get(m, m), 1.0 - mean * mean, 1e-10);
        }
        let spec = covariance_spectrum(&cov).unwrap();
        assert!(spec.eigenvalues[0] >= -1e-9);
        close(spec.sum, cov.gamma.trace(), 1e-9);
    }

    #[test]
    fn observable_ordering() {
        let obs = ObservableSet::Full9.observables();
        assert_eq!(obs[0], (Axis::X, Axis::X));
        assert_eq!(obs[1], (Axis::X, Axis::Y));
        assert_eq!(obs[3], (Axis::Y, Axis::X));
        assert_eq!(obs[8], (Axis::Z, Axis::Z));
    }
}
