//! Dense complex matrix arithmetic and decompositions for few-qubit problems.
//!
//! Everything here is self-contained: the Hermitian eigensolver is a cyclic
//! complex Jacobi iteration, which is robust and plenty fast for the matrix
//! sizes this crate works with (up to a few dozen rows). Operations are pure
//! functions on immutable values and safe to use from multiple threads.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::tol;

/// Dense square complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from row-major complex entries. Length must be a perfect square.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadDims(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// Build from row-major real entries (imaginary parts zero).
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Diagonal matrix from real entries.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// `u * self * u^dag`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.dagger())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "comparison dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise equality within an absolute tolerance (default [`tol::EQ_TOL`]).
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tolerance
    }

    /// Largest modulus of `a_ij - conj(a_ji)`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.hermiticity_defect() <= tolerance
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "matvec dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// `<v| self |v>` for a column vector v.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let mv = self.matvec(v);
        v.iter().zip(mv.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product: block (i, j) of the result is `a[i][j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for ia in 0..da {
        for ja in 0..da {
            let f = a.get(ia, ja);
            if f == Complex64::ZERO {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out.set(ia * db + ib, ja * db + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    assert!(!factors.is_empty(), "kron_all needs at least one factor");
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = kron(&acc, f);
    }
    acc
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Rank-1 projector `|v><v|`.
pub fn projector(v: &[Complex64]) -> ComplexMatrix {
    let n = v.len();
    ComplexMatrix::from_fn(n, |i, j| v[i] * v[j].conj())
}

// Pauli matrices and friends, used as building blocks everywhere.

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        2,
        vec![
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        ],
    )
    .unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, &[s, s, s, -s]).unwrap()
}

/// Eigendecomposition of a Hermitian matrix: real ascending eigenvalues and
/// a unitary whose columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigDecomposition {
    /// Rebuild `V diag(lambda) V^dag`; used by reconstruction checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let d = ComplexMatrix::diag(&self.eigenvalues);
        &(v * &d) * &v.dagger()
    }
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Sweeps run until the off-diagonal Frobenius mass is below
/// [`tol::JACOBI_OFF_TOL`] (scaled by the matrix norm).
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigDecomposition> {
    let defect = h.hermiticity_defect();
    if defect > tol::HERM_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.dim();
    // Work on the symmetrized copy so the defect below HERM_TOL cannot bias
    // the iteration.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (h.get(i, j) + h.get(j, i).conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let stop = tol::JACOBI_OFF_TOL * f64::max(1.0, a.frobenius_norm());

    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a.get(i, j).norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary rotation R: identity except
                //   R[p][p] = c, R[p][q] = s*phase,
                //   R[q][p] = -s*conj(phase), R[q][q] = c,
                // chosen so (R^dag A R)[p][q] = 0.
                let sp = phase.scale(s);
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * sp.conj());
                    a.set(k, q, akp * sp + akq * c);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * sp);
                    a.set(q, k, apk * sp.conj() + aqk * c);
                }
                // Pin the rotated pivot entries to their closed forms.
                a.set(p, p, Complex64::new(app - t * r, 0.0));
                a.set(q, q, Complex64::new(aqq + t * r, 0.0));
                a.set(p, q, Complex64::ZERO);
                a.set(q, p, Complex64::ZERO);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * sp.conj());
                    v.set(k, q, vkp * sp + vkq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let raw: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v.get(i, order[j]));
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Trace norm `||M||_1 = Tr sqrt(M^dag M)`, the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    // M^dag M is Hermitian PSD by construction, so the eigensolver applies.
    let gram = &m.dagger() * m;
    let eig = hermitian_eig(&gram).expect("gram matrix is Hermitian by construction");
    eig.eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .sum()
}

/// Partial trace over the complement of `keep`.
///
/// `dims` lists the subsystem dimensions (their product must equal the matrix
/// dimension) and `keep` the strictly increasing subsystem indices retained.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != m.dim() || dims.contains(&0) {
        return Err(Error::BadDims(format!(
            "subsystem dims {dims:?} do not match matrix dimension {}",
            m.dim()
        )));
    }
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || keep.iter().any(|&k| k >= dims.len())
    {
        return Err(Error::BadDims(format!(
            "keep set {keep:?} invalid for {} subsystems",
            dims.len()
        )));
    }

    let n_sub = dims.len();
    let traced: Vec<usize> = (0..n_sub).filter(|i| !keep.contains(i)).collect();
    let keep_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Row-major strides of each subsystem inside the full index.
    let mut strides = vec![1usize; n_sub];
    for i in (0..n_sub - 1).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    // Expand a flat index over the listed subsystems into a full index.
    let expand = |flat: usize, subs: &[usize]| -> usize {
        let mut rest = flat;
        let mut full = 0usize;
        for &s in subs.iter().rev() {
            let d = dims[s];
            full += (rest % d) * strides[s];
            rest /= d;
        }
        full
    };

    let mut out = ComplexMatrix::zeros(keep_dim);
    for i in 0..keep_dim {
        let bi = expand(i, keep);
        for j in 0..keep_dim {
            let bj = expand(j, keep);
            let mut acc = Complex64::ZERO;
            for t in 0..traced_dim {
                let bt = expand(t, &traced);
                acc += m.get(bi + bt, bj + bt);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(n);
        for i in 0..n {
            h.set(i, i, c(rng.random_range(-1.0..1.0), 0.0));
            for j in (i + 1)..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                h.set(i, j, z);
                h.set(j, i, z.conj());
            }
        }
        h
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert!(kron(&i2, &i2).approx_eq(&ComplexMatrix::identity(4), 0.0));
        let zz = kron(&sigma_z(), &sigma_z());
        assert!(zz.approx_eq(&ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]), 0.0));
    }

    #[test]
    fn kron_trace_multiplies() {
        // Oracle: Tr(A kron B) computed as Tr(A) * Tr(B) directly.
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 2);
            let b = random_hermitian(&mut rng, 2);
            let lhs = kron(&a, &b).trace();
            let rhs = a.trace() * b.trace();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn eig_diagonal_input() {
        let eig = hermitian_eig(&ComplexMatrix::diag(&[0.75, 0.25])).unwrap();
        assert!((eig.eigenvalues[0] - 0.25).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn eig_pauli_x_spectrum() {
        let eig = hermitian_eig(&sigma_x()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_8x8() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 8);
            let eig = hermitian_eig(&h).unwrap();
            assert!(eig.reconstruct().max_abs_diff(&h) < tol::RECON_TOL);
            let v = &eig.eigenvectors;
            let vvd = v * &v.dagger();
            assert!(vvd.max_abs_diff(&ComplexMatrix::identity(8)) < tol::RECON_TOL);
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m.set(0, 1, c(1.0, 0.0));
        match hermitian_eig(&m) {
            Err(Error::NotHermitian(_)) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn trace_norm_basics() {
        assert!((trace_norm(&ComplexMatrix::identity(2)) - 2.0).abs() < 1e-12);
        assert!((trace_norm(&sigma_z()) - 2.0).abs() < 1e-12);
        // rho = |0><0|, sigma = I/2: eigenvalues of the difference are +-1/2.
        let diff = &ComplexMatrix::diag(&[1.0, 0.0]) - &ComplexMatrix::diag(&[0.5, 0.5]);
        assert!((trace_norm(&diff) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        let mut rng = StdRng::seed_from_u64(3);
        let a = random_hermitian(&mut rng, 2);
        // Normalize traces to 1 so the marginal is exactly the factor.
        let a = a.scale(Complex64::ONE / a.trace());
        let b = random_hermitian(&mut rng, 3);
        let b = b.scale(Complex64::ONE / b.trace());
        let ab = kron(&a, &b);
        let ta = partial_trace(&ab, &[2, 3], &[0]).unwrap();
        let tb = partial_trace(&ab, &[2, 3], &[1]).unwrap();
        assert!(ta.approx_eq(&a, 1e-12));
        assert!(tb.approx_eq(&b, 1e-12));
    }

    #[test]
    fn partial_trace_basis_state() {
        // |01><01| traced over the first qubit leaves |1><1|.
        let v = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let rho = projector(&v);
        let tb = partial_trace(&rho, &[2, 2], &[1]).unwrap();
        assert!(tb.approx_eq(&ComplexMatrix::diag(&[0.0, 1.0]), 1e-14));
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let rho = ComplexMatrix::identity(4).scale_re(0.25);
        assert!(matches!(
            partial_trace(&rho, &[2, 3], &[0]),
            Err(Error::BadDims(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[2, 2], &[]),
            Err(Error::BadDims(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[2, 2], &[0, 2]),
            Err(Error::BadDims(_))
        ));
    }

    #[test]
    fn trace_norm_triangle_inequality() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..50 {
            let a = random_hermitian(&mut rng, 4);
            let b = random_hermitian(&mut rng, 4);
            let lhs = trace_norm(&(&a + &b));
            let rhs = trace_norm(&a) + trace_norm(&b);
            assert!(lhs <= rhs + 1e-9, "triangle violated: {lhs} > {rhs}");
        }
    }

    proptest! {
        // Associativity is exact on small integer matrices.
        #[test]
        fn kron_associative_on_integers(
            a in prop::collection::vec(-3i32..4, 4),
            b in prop::collection::vec(-3i32..4, 4),
            d in prop::collection::vec(-3i32..4, 4),
        ) {
            let to_m = |v: &Vec<i32>| {
                ComplexMatrix::from_real(2, &v.iter().map(|&x| x as f64).collect::<Vec<_>>())
                    .unwrap()
            };
            let (a, b, d) = (to_m(&a), to_m(&b), to_m(&d));
            let lhs = kron(&kron(&a, &b), &d);
            let rhs = kron(&a, &kron(&b, &d));
            prop_assert!(lhs == rhs);
        }

        #[test]
        fn eig_spectrum_matches_trace(seed in 0u64..500) {
            let mut rng = StdRng::seed_from_u64(seed);
            let n = 2 + (seed % 5) as usize;
            let h = random_hermitian(&mut rng, n);
            let eig = hermitian_eig(&h).unwrap();
            let sum: f64 = eig.eigenvalues.iter().sum();
            prop_assert!((sum - h.trace().re).abs() < 1e-10);
            prop_assert!(eig.reconstruct().max_abs_diff(&h) < tol::RECON_TOL);
        }
    }
}
