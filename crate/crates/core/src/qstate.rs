//! Two-qubit density matrices: construction, validation and structure.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron, C64, ComplexMatrix};
use crate::tol;

/// A validated 4×4 two-qubit density matrix in the basis
/// `|00>, |01>, |10>, |11>` (subsystem A first).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub dims: (usize, usize),
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dims != (4, 4) {
            return write!(f, "expected a 4x4 matrix, got {}x{}", self.dims.0, self.dims.1);
        }
        write!(
            f,
            "hermiticity deviation {:.3e}, trace deviation {:.3e}, min eigenvalue {:.3e}",
            self.hermiticity_deviation, self.trace_deviation, self.min_eigenvalue
        )
    }
}

/// Checks the density-matrix invariants without failing; the report says
/// which ones hold.
pub fn validate(m: &ComplexMatrix) -> ValidationReport {
    if m.dims() != (4, 4) {
        return ValidationReport {
            dims: m.dims(),
            hermiticity_deviation: f64::INFINITY,
            trace_deviation: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
            passed: false,
        };
    }
    let herm = m.hermiticity_deviation();
    let tr = m.trace();
    let trace_deviation = (tr - C64::new(1.0, 0.0)).norm();
    // Spectrum of the Hermitian part, so the report is defined for any input.
    let hermitian_part = m.add(&m.adjoint()).expect("same dims").scale(C64::new(0.5, 0.0));
    let min_eigenvalue = hermitian_eigenvalues(&hermitian_part)
        .map(|e| e[0])
        .unwrap_or(f64::NAN);
    let passed = herm <= tol::HERMITICITY && trace_deviation <= tol::TRACE && min_eigenvalue >= -tol::PSD;
    ValidationReport {
        dims: (4, 4),
        hermiticity_deviation: herm,
        trace_deviation,
        min_eigenvalue,
        passed,
    }
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let report = validate(&m);
        if !report.passed {
            return Err(Error::InvalidState(report.to_string()));
        }
        Ok(Self(m))
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(4).scale(C64::new(0.25, 0.0)))
    }

    /// |v><v| / <v|v> for a nonzero 4-vector.
    pub fn from_pure(v: &[C64; 4]) -> Result<Self> {
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let s = 1.0 / norm2.sqrt();
        let unit: Vec<C64> = v.iter().map(|z| z * s).collect();
        Self::new(ComplexMatrix::outer(&unit))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0).expect("validated density matrix is Hermitian")
    }
}

fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ParameterOutOfRange {
            name: name.into(),
            value,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

fn phi_plus() -> [C64; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    [h, z, z, h]
}

/// `p |ψ+><ψ+| + (1 - p) I/4` with `|ψ+> = (|00> + |11>)/√2`.
pub fn make_werner(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let bell = ComplexMatrix::outer(&phi_plus());
    let noise = ComplexMatrix::identity(4).scale(C64::new((1.0 - p) / 4.0, 0.0));
    let m = bell.scale(C64::new(p, 0.0)).add(&noise)?;
    DensityMatrix::new(m)
}

/// The unvalidated matrix `¼(I + Σ c_i σ_i ⊗ σ_i)`.
pub fn bell_diagonal_matrix(c: [f64; 3]) -> ComplexMatrix {
    let [c1, c2, c3] = c;
    let r = |x: f64| C64::new(x / 4.0, 0.0);
    // σx⊗σx and σy⊗σy only couple |00>↔|11> and |01>↔|10>.
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = r(1.0 + c3);
    m[(1, 1)] = r(1.0 - c3);
    m[(2, 2)] = r(1.0 - c3);
    m[(3, 3)] = r(1.0 + c3);
    m[(0, 3)] = r(c1 - c2);
    m[(3, 0)] = r(c1 - c2);
    m[(1, 2)] = r(c1 + c2);
    m[(2, 1)] = r(c1 + c2);
    m
}

pub fn make_bell_diagonal(c: [f64; 3]) -> Result<DensityMatrix> {
    for (i, &ci) in c.iter().enumerate() {
        if !(-1.0..=1.0).contains(&ci) {
            return Err(Error::ParameterOutOfRange {
                name: format!("c{}", i + 1),
                value: ci,
                lo: -1.0,
                hi: 1.0,
            });
        }
    }
    let m = bell_diagonal_matrix(c);
    let report = validate(&m);
    if !report.passed {
        return Err(Error::Unphysical(format!(
            "Bell-diagonal c = {c:?} has min eigenvalue {:.3e}",
            report.min_eigenvalue
        )));
    }
    Ok(DensityMatrix(m))
}

/// `p |ψθ><ψθ| + (1 - p) ρs` with `ψθ = sinθ|01> + cosθ|10>` and
/// `ρs = (|00><00| + |11><11|)/2`.
pub fn make_gisin(theta: f64, p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    if !theta.is_finite() {
        return Err(Error::Parse(format!("theta must be finite, got {theta}")));
    }
    let z = C64::new(0.0, 0.0);
    let psi = [z, C64::new(theta.sin(), 0.0), C64::new(theta.cos(), 0.0), z];
    let classical = ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.5]);
    let m = ComplexMatrix::outer(&psi)
        .scale(C64::new(p, 0.0))
        .add(&classical.scale(C64::new(1.0 - p, 0.0)))?;
    DensityMatrix::new(m)
}

fn gaussian_vector<const N: usize>(rng: &mut ChaCha8Rng) -> [C64; N] {
    std::array::from_fn(|_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Haar-random pure state from a normalized complex Gaussian 4-vector.
pub fn random_pure(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: [C64; 4] = gaussian_vector(&mut rng);
    DensityMatrix::from_pure(&v).expect("Gaussian vector is nonzero")
}

/// Product of two Haar-random single-qubit pure states.
pub fn random_product_pure(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: [C64; 2] = gaussian_vector(&mut rng);
    let b: [C64; 2] = gaussian_vector(&mut rng);
    DensityMatrix::from_pure(&[a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
        .expect("Gaussian vector is nonzero")
}

/// Ginibre ensemble: `G G† / tr(G G†)` with `G` a 4×rank complex Gaussian matrix.
pub fn random_mixed(seed: u64, rank: usize) -> Result<DensityMatrix> {
    if !(1..=4).contains(&rank) {
        return Err(Error::InvalidRank(rank));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = ComplexMatrix::zeros(4, rank);
    for i in 0..4 {
        for j in 0..rank {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            g[(i, j)] = C64::new(re, im);
        }
    }
    let ggd = crate::linalg::matmul(&g, &g.adjoint())?;
    let tr = ggd.trace().re;
    let mut m = ggd.scale(C64::new(1.0 / tr, 0.0));
    // exact Hermiticity; the product is Hermitian up to rounding
    for i in 0..4 {
        m[(i, i)].im = 0.0;
        for j in i + 1..4 {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    DensityMatrix::new(m)
}

/// Per-sample seed for ensemble member `index`.
pub fn ensemble_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

const SWAP_PERM: [usize; 4] = [0, 2, 1, 3];

/// `F ρ F` with `F` the qubit swap.
pub fn swap_conjugate(rho: &DensityMatrix) -> ComplexMatrix {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = m[(SWAP_PERM[i], SWAP_PERM[j])];
        }
    }
    out
}

pub fn is_swap_symmetric(rho: &DensityMatrix, tol: f64) -> bool {
    swap_conjugate(rho).max_abs_diff(rho.matrix()) <= tol
}

/// Transpose on subsystem B: `<a b|ρ^TB|a' b'> = <a b'|ρ|a' b>`.
pub fn partial_transpose_b(rho: &DensityMatrix) -> ComplexMatrix {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    out[(2 * a + b, 2 * a2 + b2)] = m[(2 * a + b2, 2 * a2 + b)];
                }
            }
        }
    }
    out
}

pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(&partial_transpose_b(rho)).expect("partial transpose is Hermitian")[0]
}

/// Peres–Horodecki test; necessary and sufficient for two qubits.
pub fn is_entangled_ppt(rho: &DensityMatrix) -> bool {
    min_partial_transpose_eigenvalue(rho) < -tol::PPT
}

/// tr(ρ²).
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().trace_product(rho.matrix()).expect("square").re
}

/// Parametric state families addressable by parameter name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Werner,
    BellDiagonal,
    Gisin,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "werner" => Ok(Self::Werner),
            "bell-diagonal" | "bell_diagonal" | "belldiagonal" | "bd" => Ok(Self::BellDiagonal),
            "gisin" => Ok(Self::Gisin),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Werner => "werner",
            Self::BellDiagonal => "bell-diagonal",
            Self::Gisin => "gisin",
        }
    }

    /// Parameter names in canonical order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Self::Werner => &["p"],
            Self::BellDiagonal => &["c1", "c2", "c3"],
            Self::Gisin => &["theta", "p"],
        }
    }

    pub fn param_index(self, name: &str) -> Result<usize> {
        self.param_names()
            .iter()
            .position(|&n| n == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    /// Values in canonical order.
    pub fn spec(self, values: &[f64]) -> FamilySpec {
        assert_eq!(values.len(), self.param_names().len());
        match self {
            Self::Werner => FamilySpec::Werner { p: values[0] },
            Self::BellDiagonal => FamilySpec::BellDiagonal {
                c: [values[0], values[1], values[2]],
            },
            Self::Gisin => FamilySpec::Gisin {
                theta: values[0],
                p: values[1],
            },
        }
    }

    /// Builds a spec from `name=value` pairs, requiring every parameter.
    pub fn spec_from_pairs(self, pairs: &[(String, f64)]) -> Result<FamilySpec> {
        let mut values = vec![None; self.param_names().len()];
        for (name, v) in pairs {
            values[self.param_index(name)?] = Some(*v);
        }
        let values = values
            .into_iter()
            .zip(self.param_names())
            .map(|(v, n)| v.ok_or_else(|| Error::MissingParameter(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.spec(&values))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Werner { p: f64 },
    BellDiagonal { c: [f64; 3] },
    Gisin { theta: f64, p: f64 },
    Custom(DensityMatrix),
}

impl FamilySpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            Self::Werner { p } => make_werner(*p),
            Self::BellDiagonal { c } => make_bell_diagonal(*c),
            Self::Gisin { theta, p } => make_gisin(*theta, *p),
            Self::Custom(rho) => Ok(rho.clone()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    rho: Vec<Vec<[f64; 2]>>,
}

/// Parses `{"rho": [[[re, im], ...], ...]}` and validates the result.
pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text)?;
    let rows: Vec<Vec<C64>> = file
        .rho
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::InvalidState("state file must hold a 4x4 matrix".into()));
    }
    DensityMatrix::new(ComplexMatrix::from_rows(&rows)?)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let rho = (0..4)
        .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::to_string(&StateFile { rho }).expect("finite floats serialize")
}

/// Single-qubit Pauli matrix by index, 0 being the identity.
pub(crate) fn pauli_matrix(i: usize) -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let im = C64::new(0.0, 1.0);
    let data = match i {
        0 => vec![one, z, z, one],
        1 => vec![z, one, one, z],
        2 => vec![z, -im, im, z],
        3 => vec![one, z, z, -one],
        _ => panic!("Pauli index {i} out of range"),
    };
    ComplexMatrix::new(2, 2, data).expect("2x2")
}

pub(crate) fn pauli_product(i: usize, j: usize) -> ComplexMatrix {
    kron(&pauli_matrix(i), &pauli_matrix(j)).expect("4x4")
}
