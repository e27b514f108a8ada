//! Entropic functionals: Shannon/binary/von Neumann entropy, quantum
//! relative entropy, the dephasing map, relative entropy of coherence, and
//! fidelity. Logs are base 2 throughout.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::tol;

/// Binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)` with the
/// `0 log 0 = 0` convention.
pub fn binary_entropy(x: f64) -> f64 {
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&x), "h(x) needs x in [0,1]");
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .map(|&x| if x > 0.0 { -x * x.log2() } else { 0.0 })
        .sum()
}

/// Von Neumann entropy `S(rho) = -Tr[rho log2 rho]`: the Shannon entropy of
/// the spectrum, with eigenvalues below [`tol::SPECTRAL_FLOOR`] treated as 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(rho.mat())
}

pub(crate) fn spectrum_entropy(m: &ComplexMatrix) -> f64 {
    let eig = linalg::hermitian_eig(m).expect("density matrices are Hermitian");
    let floored: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < tol::SPECTRAL_FLOOR { 0.0 } else { l })
        .collect();
    shannon_entropy(&floored)
}

/// Quantum relative entropy `S(rho || sigma) = Tr[rho log2 rho] -
/// Tr[rho log2 sigma]` in bits.
///
/// Returns `f64::INFINITY` when the support of `rho` leaks outside the
/// support of `sigma`: a sigma-eigenvalue below [`tol::SPECTRAL_FLOOR`]
/// carrying rho-weight above [`tol::SUPPORT_TOL`]. The thresholds are
/// asymmetric so eigensolver noise cannot produce false infinities.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let sig = linalg::hermitian_eig(sigma.mat())?;
    let mut cross = 0.0f64;
    for (j, &s) in sig.eigenvalues.iter().enumerate() {
        let v = sig.eigenvectors.column(j);
        let weight = rho.mat().expectation(&v).re.max(0.0);
        if s < tol::SPECTRAL_FLOOR {
            if weight > tol::SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
        } else {
            cross += weight * s.log2();
        }
    }
    let value = -von_neumann_entropy(rho) - cross;
    // Klein's inequality guarantees non-negativity; trim eigensolver noise.
    Ok(value.max(0.0))
}

/// Which basis the dephasing map projects onto.
pub enum DephasingBasis<'a> {
    /// Computational basis (equals the energy eigenbasis here, since
    /// Hamiltonians are stored diagonally).
    Computational,
    /// Columns of the given unitary.
    Custom(&'a ComplexMatrix),
}

/// Full dephasing `Delta[rho] = sum_i <i|rho|i> |i><i|`.
pub fn dephase(rho: &DensityMatrix, basis: DephasingBasis) -> Result<DensityMatrix> {
    match basis {
        DephasingBasis::Computational => {
            let n = rho.dim();
            let mat = ComplexMatrix::from_fn(n, |i, j| {
                if i == j {
                    Complex64::new(rho.mat().get(i, i).re, 0.0)
                } else {
                    Complex64::ZERO
                }
            });
            Ok(DensityMatrix::from_parts_unchecked(
                mat,
                rho.dims().to_vec(),
            ))
        }
        DephasingBasis::Custom(u) => {
            if u.dim() != rho.dim() {
                return Err(Error::DimMismatch {
                    expected: rho.dim(),
                    got: u.dim(),
                });
            }
            let n = rho.dim();
            let mut mat = ComplexMatrix::zeros(n);
            for i in 0..n {
                let col = u.column(i);
                let w = rho.mat().expectation(&col).re;
                let proj = linalg::projector(&col);
                mat = &mat + &proj.scale_re(w);
            }
            Ok(DensityMatrix::from_parts_unchecked(
                mat,
                rho.dims().to_vec(),
            ))
        }
    }
}

/// Computational-basis dephasing, the common case.
pub fn dephase_computational(rho: &DensityMatrix) -> DensityMatrix {
    dephase(rho, DephasingBasis::Computational).expect("computational dephasing cannot fail")
}

/// Relative entropy of coherence `C(rho) = S(Delta[rho]) - S(rho)`.
pub fn coherence_rel_entropy(rho: &DensityMatrix) -> f64 {
    let dephased = dephase_computational(rho);
    // The dephased spectrum is just the diagonal.
    let diag: Vec<f64> = (0..rho.dim())
        .map(|i| dephased.mat().get(i, i).re)
        .collect();
    shannon_entropy(&diag) - von_neumann_entropy(rho)
}

/// Quantum fidelity `F(rho, sigma) = Tr sqrt(rho^(1/2) sigma rho^(1/2))`,
/// clamped to [0, 1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let sqrt_rho = psd_sqrt(rho.mat())?;
    let inner = &(&sqrt_rho * sigma.mat()) * &sqrt_rho;
    let eig = linalg::hermitian_eig(&inner)?;
    let f: f64 = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Principal square root of a Hermitian PSD matrix via its spectrum.
fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = linalg::hermitian_eig(m)?;
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .collect();
    let v = &eig.eigenvectors;
    Ok(&(v * &ComplexMatrix::diag(&roots)) * &v.dagger())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_norm;
    use crate::states;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn binary_entropy_reference_points() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        // Direct high-precision evaluation of the formula at 0.25.
        let expect = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((binary_entropy(0.25) - expect).abs() < 1e-15);
        assert!((binary_entropy(0.25) - 0.8112781244591328).abs() < 1e-12);
    }

    #[test]
    fn shannon_entropy_reference_points() {
        assert!((shannon_entropy(&[0.25; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0]), 0.0);
        // The two-qubit correlated-noise distribution used by the figures.
        let p = [0.05, 0.03, 0.26, 0.66];
        let expect: f64 = p.iter().map(|&x: &f64| -x * x.log2()).sum();
        assert!((shannon_entropy(&p) - expect).abs() < 1e-15);
    }

    #[test]
    fn von_neumann_entropy_cases() {
        let pure = states::pure_two_qubit(0.7).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-10);

        let mixed = states::maximally_mixed(4);
        assert!((von_neumann_entropy(&mixed) - 2.0).abs() < 1e-12);

        let rho = states::diagonal_qubit(0.25).unwrap();
        assert!((von_neumann_entropy(&rho) - binary_entropy(0.25)).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_cases() {
        let rho = states::diagonal_qubit(0.3).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-10);

        // S(|0><0| || I/2) = 1: oracle is -0 - Tr[rho log2(I/2)] = 1.
        let ground = states::diagonal_qubit(0.0).unwrap();
        let mixed = states::maximally_mixed(2);
        assert!((relative_entropy(&ground, &mixed).unwrap() - 1.0).abs() < 1e-12);

        // Disjoint support.
        let excited = states::diagonal_qubit(1.0).unwrap();
        assert!(relative_entropy(&ground, &excited).unwrap().is_infinite());
    }

    #[test]
    fn dephasing_behaviour() {
        let diag = states::diagonal_qubit(0.3).unwrap();
        assert!(dephase_computational(&diag)
            .mat()
            .approx_eq(diag.mat(), 1e-14));

        let (plus, _) = states::coherence_states(std::f64::consts::FRAC_PI_4).unwrap();
        let dephased = dephase_computational(&plus);
        assert!(dephased
            .mat()
            .approx_eq(states::maximally_mixed(2).mat(), 1e-14));

        // Idempotence on random states.
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let rho = states::random_density_matrix(&mut rng, 4);
            let once = dephase_computational(&rho);
            let twice = dephase_computational(&once);
            assert!(once.mat().approx_eq(twice.mat(), 1e-14));
        }
    }

    #[test]
    fn dephasing_in_custom_basis_matches_computational() {
        let mut rng = StdRng::seed_from_u64(23);
        let rho = states::random_density_matrix(&mut rng, 3);
        let id = ComplexMatrix::identity(3);
        let a = dephase(&rho, DephasingBasis::Custom(&id)).unwrap();
        let b = dephase_computational(&rho);
        assert!(a.mat().approx_eq(b.mat(), 1e-12));
    }

    #[test]
    fn coherence_cases() {
        let diag = states::diagonal_qubit(0.2).unwrap();
        assert!(coherence_rel_entropy(&diag).abs() < 1e-10);

        let (plus, _) = states::coherence_states(std::f64::consts::FRAC_PI_4).unwrap();
        assert!((coherence_rel_entropy(&plus) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_cases() {
        let mut rng = StdRng::seed_from_u64(31);
        let rho = states::random_density_matrix(&mut rng, 3);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);

        let ground = states::diagonal_qubit(0.0).unwrap();
        let excited = states::diagonal_qubit(1.0).unwrap();
        assert!(fidelity(&ground, &excited).unwrap() < 1e-9);

        // Pure vs maximally mixed closed form: F = sqrt(<0| I/2 |0>) = 1/sqrt(2).
        let mixed = states::maximally_mixed(2);
        let f = fidelity(&ground, &mixed).unwrap();
        assert!((f - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn entropy_does_not_decrease_under_dephasing() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..50 {
            let rho = states::random_density_matrix(&mut rng, 4);
            let s = von_neumann_entropy(&rho);
            let sd = von_neumann_entropy(&dephase_computational(&rho));
            assert!(sd - s >= -1e-10, "dephasing lowered entropy: {s} -> {sd}");
        }
    }

    #[test]
    fn pinsker_inequality() {
        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..50 {
            let rho = states::random_density_matrix(&mut rng, 3);
            let sigma = states::random_density_matrix(&mut rng, 3);
            let d = relative_entropy(&rho, &sigma).unwrap();
            let t = trace_norm(&(rho.mat() - sigma.mat()));
            let bound = t * t / (2.0 * std::f64::consts::LN_2);
            assert!(d >= bound - 1e-9, "Pinsker violated: {d} < {bound}");
        }
    }

    #[test]
    fn dephasing_contracts_relative_entropy_to_diagonal_reference() {
        // S(Delta[mu] || gamma) <= S(mu || gamma) for diagonal gamma.
        let mut rng = StdRng::seed_from_u64(47);
        let h = states::Hamiltonian::new(vec![0.0, 1.0]).unwrap();
        let gamma = states::gibbs(&h, 0.5).unwrap();
        for _ in 0..50 {
            let mu = states::random_density_matrix(&mut rng, 2);
            let lhs = relative_entropy(&dephase_computational(&mu), &gamma).unwrap();
            let rhs = relative_entropy(&mu, &gamma).unwrap();
            assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
        }
    }

    #[test]
    fn relative_entropy_respects_support_thresholds() {
        // sigma with a tiny but above-floor eigenvalue stays finite.
        let sigma = DensityMatrix::new(ComplexMatrix::diag(&[1.0 - 1e-9, 1e-9]), vec![2]).unwrap();
        let rho = states::diagonal_qubit(0.5).unwrap();
        assert!(relative_entropy(&rho, &sigma).unwrap().is_finite());
    }
}
