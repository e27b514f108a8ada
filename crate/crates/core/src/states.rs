//! Constructors for the state families under study and structural
//! predicates on them.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, partial_trace, projector, ComplexMatrix};
use crate::tol;

/// Density matrix: Hermitian, unit trace, positive semidefinite, carrying a
/// subsystem-dimension list whose product equals the matrix dimension.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Strict constructor: validates Hermiticity, trace and positivity and
    /// stores the matrix as-is.
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::check_dims(&mat, &dims)?;
        let defect = mat.hermiticity_defect();
        if defect > tol::HERM_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::TRACE_TOL || tr.im.abs() > tol::TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let eig = linalg::hermitian_eig(&mat)?;
        let min = eig.eigenvalues[0];
        if min < -tol::PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { mat, dims })
    }

    /// Lenient constructor for channel outputs that accumulate eigensolver
    /// noise: eigenvalues in `[-1e-8, 0)` are clipped to zero and the state
    /// renormalized. Anything worse is still rejected.
    pub fn new_lenient(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::check_dims(&mat, &dims)?;
        let defect = mat.hermiticity_defect();
        if defect > tol::HERM_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e}"
            )));
        }
        let eig = linalg::hermitian_eig(&mat)?;
        if eig.eigenvalues[0] < -1e-8 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e} beyond lenient floor",
                eig.eigenvalues[0]
            )));
        }
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidState("zero trace after clipping".into()));
        }
        let normalized: Vec<f64> = clipped.iter().map(|&l| l / total).collect();
        let v = &eig.eigenvectors;
        let mat = &(v * &ComplexMatrix::diag(&normalized)) * &v.dagger();
        Ok(Self { mat, dims })
    }

    /// Internal constructor for matrices that are valid by construction
    /// (unitary conjugations, Kraus sums over valid inputs, ...).
    pub(crate) fn from_parts_unchecked(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert!(mat.hermiticity_defect() <= 1e-8);
        debug_assert!((mat.trace().re - 1.0).abs() <= 1e-8);
        Self { mat, dims }
    }

    /// Pure state `|v><v|`; the vector is normalized first.
    pub fn from_pure(v: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let scaled: Vec<Complex64> = v.iter().map(|&z| z / norm).collect();
        let mat = projector(&scaled);
        Self::check_dims(&mat, &dims)?;
        Ok(Self { mat, dims })
    }

    fn check_dims(mat: &ComplexMatrix, dims: &[usize]) -> Result<()> {
        let product: usize = dims.iter().product();
        if dims.is_empty() || product != mat.dim() {
            return Err(Error::BadDims(format!(
                "subsystem dims {dims:?} incompatible with matrix dimension {}",
                mat.dim()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Reinterpret the same matrix with a different subsystem split.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::check_dims(&self.mat, &dims)?;
        Ok(Self {
            mat: self.mat.clone(),
            dims,
        })
    }

    /// Partial trace keeping the listed subsystems (strictly increasing).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let mat = partial_trace(&self.mat, &self.dims, keep)?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(Self { mat, dims })
    }

    /// `Tr rho^2`, 1 exactly on pure states.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// True when the state is diagonal in the computational basis.
    pub fn is_diagonal(&self, tolerance: f64) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.mat.get(i, j).norm() > tolerance {
                    return false;
                }
            }
        }
        true
    }
}

/// Hamiltonian spectrum, `k = 1` units. Energies are ascending and the
/// energy eigenbasis is the computational basis.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    energies: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.len() < 2 {
            return Err(Error::InvalidArgument(
                "a Hamiltonian needs at least two levels".into(),
            ));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument("non-finite energy".into()));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("energies must be ascending".into()));
        }
        Ok(Self { energies })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    /// Diagonal matrix of the energies in the energy basis.
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diag(&self.energies)
    }
}

/// `|psi> = cos(alpha)|00> + sin(alpha)|11>`, the two-qubit dilution family.
pub fn pure_two_qubit(alpha: f64) -> Result<DensityMatrix> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha {alpha} outside [0, pi/2]"
        )));
    }
    DensityMatrix::from_pure(&pure_two_qubit_vector(alpha), vec![2, 2])
}

/// State vector of [`pure_two_qubit`].
pub fn pure_two_qubit_vector(alpha: f64) -> Vec<Complex64> {
    vec![
        Complex64::new(alpha.cos(), 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(alpha.sin(), 0.0),
    ]
}

/// The singlet `(|01> - |10>)/sqrt(2)`.
pub fn singlet() -> DensityMatrix {
    DensityMatrix::from_pure(&singlet_vector(), vec![2, 2]).expect("singlet is a valid state")
}

/// State vector of the singlet.
pub fn singlet_vector() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        Complex64::ZERO,
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::ZERO,
    ]
}

/// Fixed local relabel between the `|phi+> = (|00>+|11>)/sqrt(2)` convention
/// used by the correlated closed forms and the singlet convention:
/// conjugation by `1 (x) sigma_y` maps one onto the other. All entropic
/// quantities are invariant under it.
pub fn singlet_relabel() -> ComplexMatrix {
    linalg::kron(&ComplexMatrix::identity(2), &linalg::sigma_y())
}

/// Coherence dilution families: the pure state `cos(alpha)|0> + sin(alpha)|1>`
/// and the mixed state `sin^2(alpha)|+><+| + cos^2(alpha) 1/2`.
pub fn coherence_states(alpha: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha {alpha} outside [0, pi/2]"
        )));
    }
    let (c, s) = (alpha.cos(), alpha.sin());
    let pure =
        DensityMatrix::from_pure(&[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], vec![2])?;
    let plus = projector(&plus_vector());
    let mixed_mat = &plus.scale_re(s * s) + &ComplexMatrix::identity(2).scale_re(c * c / 2.0);
    let mixed = DensityMatrix::new(mixed_mat, vec![2])?;
    Ok((pure, mixed))
}

/// Gibbs state `exp(-H/T) / Tr[exp(-H/T)]` in the energy eigenbasis.
pub fn gibbs(h: &Hamiltonian, temperature: f64) -> Result<DensityMatrix> {
    if temperature <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "temperature {temperature} must be positive"
        )));
    }
    // Shift by the ground energy before exponentiating to avoid overflow.
    let e0 = h.energies()[0];
    let weights: Vec<f64> = h
        .energies()
        .iter()
        .map(|&e| (-(e - e0) / temperature).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let populations: Vec<f64> = weights.iter().map(|&w| w / z).collect();
    DensityMatrix::new(ComplexMatrix::diag(&populations), vec![h.levels()])
}

/// `(1-q)|0><0| + q|1><1|`, the diagonal dilution target of the thermal and
/// purity scenarios (computational = energy basis).
pub fn diagonal_qubit(q: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!(
            "probability {q} outside [0, 1]"
        )));
    }
    DensityMatrix::new(ComplexMatrix::diag(&[1.0 - q, q]), vec![2])
}

/// Maximally mixed state on `d` levels.
pub fn maximally_mixed(d: usize) -> DensityMatrix {
    DensityMatrix::from_parts_unchecked(
        ComplexMatrix::identity(d).scale_re(1.0 / d as f64),
        vec![d],
    )
}

/// True when every entry outside the `|ii><jj|` block is below `tolerance`
/// in modulus. Requires a symmetric bipartite split `dims = [d, d]`.
pub fn is_maximally_correlated(rho: &DensityMatrix, tolerance: f64) -> Result<bool> {
    let dims = rho.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::BadDims(format!(
            "maximally correlated test needs dims [d, d], got {dims:?}"
        )));
    }
    let d = dims[0];
    let n = rho.dim();
    let on_block = |idx: usize| -> bool { idx / d == idx % d };
    for i in 0..n {
        for j in 0..n {
            if (!on_block(i) || !on_block(j)) && rho.mat().get(i, j).norm() > tolerance {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `n`-fold tensor power of a bipartite pure state on 2x2, laid out in the
/// grouped order (A_1..A_n, B_1..B_n) so the result is bipartite with dims
/// `[2^n, 2^n]`. The amplitude of `|a, b>` is the product of the per-copy
/// amplitudes `v[2 a_i + b_i]`.
pub fn grouped_pure_power(v: &[Complex64], n: usize) -> Result<DensityMatrix> {
    if v.len() != 4 {
        return Err(Error::BadDims(format!(
            "expected a two-qubit state vector, got length {}",
            v.len()
        )));
    }
    if n == 0 || n > 4 {
        return Err(Error::InvalidArgument(format!(
            "grouped power supports 1..=4 copies, got {n}"
        )));
    }
    let side = 1usize << n;
    let mut w = vec![Complex64::ZERO; side * side];
    for a in 0..side {
        for b in 0..side {
            let mut amp = Complex64::ONE;
            for copy in 0..n {
                let ai = (a >> (n - 1 - copy)) & 1;
                let bi = (b >> (n - 1 - copy)) & 1;
                amp *= v[2 * ai + bi];
            }
            w[a * side + b] = amp;
        }
    }
    DensityMatrix::from_pure(&w, vec![side, side])
}

/// Random density matrix from the Ginibre ensemble (`G G^dag` normalized).
pub fn random_density_matrix(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(d, |_, _| Complex64::new(normal(rng), normal(rng)));
    let gram = &g * &g.dagger();
    let tr = gram.trace().re;
    DensityMatrix::from_parts_unchecked(gram.scale_re(1.0 / tr), vec![d])
}

/// Random pure state, Haar distributed.
pub fn random_pure_state(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    let v = random_pure_vector(rng, d);
    DensityMatrix::from_pure(&v, vec![d]).expect("normalized vector is a valid state")
}

/// Random normalized state vector, Haar distributed.
pub fn random_pure_vector(rng: &mut impl Rng, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(normal(rng), normal(rng)))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Standard normal sample via Box-Muller; keeps the crate free of a
/// distributions dependency.
fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Product state `rho (x) sigma`; subsystem lists are concatenated.
pub fn product_state(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    let mat = linalg::kron(a.mat(), b.mat());
    let mut dims = a.dims().to_vec();
    dims.extend_from_slice(b.dims());
    DensityMatrix::from_parts_unchecked(mat, dims)
}

/// Computational basis vector `|index>` of dimension `d`.
pub fn basis_vector(d: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; d];
    v[index] = Complex64::ONE;
    v
}

/// `|+>` qubit vector.
pub fn plus_vector() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)]
}

/// `|->` qubit vector.
pub fn minus_vector() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]
}

/// `|psi+> = (|01> + |10>)/sqrt(2)`.
pub fn psi_plus_vector() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        Complex64::ZERO,
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::ZERO,
    ]
}
