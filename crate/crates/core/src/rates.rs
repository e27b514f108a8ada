//! Resource-theory conversion rates: the hashing bound on distillable
//! entanglement, closed forms for phase-damped states, correlated-noise
//! formulas, and the per-theory rates (coherence, thermal, purity) together
//! with the reversible-rate composition.

use crate::channels::{correlated_z_noise, QuantumMap};
use crate::error::{Error, Result};
use crate::functionals::{
    binary_entropy, coherence_rel_entropy, relative_entropy, shannon_entropy, von_neumann_entropy,
};
use crate::states::{self, gibbs, maximally_mixed, singlet_vector, DensityMatrix, Hamiltonian};
use crate::tol;

/// Which marginal the hashing bound keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
    /// Larger of the two bounds.
    Best,
}

/// Hashing bound on the distillable entanglement,
/// `E_d(rho^AB) >= S(rho^side) - S(rho^AB)`.
///
/// Exact on maximally correlated states. The value may be negative; callers
/// clamp where appropriate.
pub fn hashing_rate(rho: &DensityMatrix, side: Side) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::BadDims(format!(
            "hashing bound needs a bipartite state, got dims {:?}",
            rho.dims()
        )));
    }
    let joint = von_neumann_entropy(rho);
    let marginal =
        |keep: usize| -> Result<f64> { Ok(von_neumann_entropy(&rho.partial_trace(&[keep])?)) };
    let value = match side {
        Side::A => marginal(0)? - joint,
        Side::B => marginal(1)? - joint,
        Side::Best => (marginal(0)? - joint).max(marginal(1)? - joint),
    };
    Ok(value)
}

/// Distillable entanglement of the phase-damped singlet,
/// `1 - h((1 + sqrt(1-lambda))/2)`.
pub fn ed_phase_damped_singlet(lambda: f64) -> f64 {
    1.0 - binary_entropy(0.5 * (1.0 + (1.0 - lambda).sqrt()))
}

/// Distillable entanglement of the phase-damped pure state
/// `cos(alpha)|00> + sin(alpha)|11>`:
/// `h(cos^2 alpha) - h(1/2 + sqrt(2 lambda cos(4 alpha) - 2 lambda + 4)/4)`.
pub fn ed_phase_damped_pure(alpha: f64, lambda: f64) -> f64 {
    let c2 = alpha.cos().powi(2);
    let arg = 0.5 + (2.0 * lambda * (4.0 * alpha).cos() - 2.0 * lambda + 4.0).sqrt() / 4.0;
    binary_entropy(c2) - binary_entropy(arg)
}

/// Input family for the correlated-noise scenario.
#[derive(Clone, Copy, Debug)]
pub enum CorrelatedInput {
    /// `n` singlets, one per noise qubit.
    Singlets,
    /// `n` copies of `cos(alpha)|00> + sin(alpha)|11>`.
    Diluted(f64),
}

/// Distillable entanglement after correlated Z noise on Bob's `n` qubits.
///
/// The singlet branch uses the closed form `n - h(p)`; the diluted branch
/// simulates the noise on the grouped `2n`-qubit state and evaluates
/// `n h(cos^2 alpha) - S(Lambda_B[psi^(x)n])`. Both families stay maximally
/// correlated under Z-pattern noise, so the hashing bound is tight.
pub fn ed_correlated_noise(n: usize, input: CorrelatedInput, probs: &[f64]) -> Result<f64> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "correlated scenario supports n in 2..=4, got {n}"
        )));
    }
    match input {
        CorrelatedInput::Singlets => Ok(n as f64 - shannon_entropy(probs)),
        CorrelatedInput::Diluted(alpha) => {
            let noisy = correlated_noise_state(n, alpha, probs)?;
            let c2 = alpha.cos().powi(2);
            Ok(n as f64 * binary_entropy(c2) - von_neumann_entropy(&noisy))
        }
    }
}

/// The grouped state `1 (x) Lambda_B [psi(alpha)^(x)n]` with dims
/// `[2^n, 2^n]` (Alice's block first).
pub fn correlated_noise_state(n: usize, alpha: f64, probs: &[f64]) -> Result<DensityMatrix> {
    let psi = states::grouped_pure_power(&states::pure_two_qubit_vector(alpha), n)?;
    let noise = correlated_z_noise(n, probs)?.extend_id_tensor(1 << n, 1);
    noise.apply(&psi)
}

/// Same for `n` singlets.
pub fn correlated_noise_singlet_state(n: usize, probs: &[f64]) -> Result<DensityMatrix> {
    let psi = states::grouped_pure_power(&singlet_vector(), n)?;
    let noise = correlated_z_noise(n, probs)?.extend_id_tensor(1 << n, 1);
    noise.apply(&psi)
}

/// Overall coherence rate `C(Lambda[mu]) / C(mu)`.
pub fn coherence_rate(mu: &DensityMatrix, channel: &dyn QuantumMap) -> Result<f64> {
    let denom = coherence_rel_entropy(mu);
    if denom <= tol::DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "C(mu) = {denom:.3e} is below the rate floor"
        )));
    }
    Ok(coherence_rel_entropy(&channel.apply(mu)?) / denom)
}

/// Overall thermal rate `S(Lambda[mu] || gamma) / S(mu || gamma)`.
pub fn thermal_rate(
    mu: &DensityMatrix,
    noise: &dyn QuantumMap,
    gamma: &DensityMatrix,
) -> Result<f64> {
    let denom = relative_entropy(mu, gamma)?;
    if denom <= tol::DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "S(mu || gamma) = {denom:.3e} is below the rate floor"
        )));
    }
    Ok(relative_entropy(&noise.apply(mu)?, gamma)? / denom)
}

/// Overall purity rate `S(Lambda[mu] || 1/d) / S(mu || 1/d)`.
pub fn purity_rate(mu: &DensityMatrix, channel: &dyn QuantumMap) -> Result<f64> {
    let reference = maximally_mixed(mu.dim());
    thermal_rate(mu, channel, &reference)
}

/// A resource theory with its closed-form asymptotic measure.
#[derive(Clone, Debug)]
pub enum ResourceTheory {
    /// Bipartite pure-state entanglement; the measure is the marginal
    /// entropy `S(psi^A)`, distillation/dilution being reversible there.
    Entanglement,
    /// Coherence under maximally incoherent operations; measure `C(rho)`.
    Coherence,
    /// Thermodynamics at the given Hamiltonian and temperature; measure
    /// `S(rho || gamma)`.
    Thermo {
        hamiltonian: Hamiltonian,
        temperature: f64,
        gamma: DensityMatrix,
    },
    /// Purity (unital operations); measure `S(rho || 1/d)`.
    Purity { dim: usize },
}

impl ResourceTheory {
    pub fn thermo(hamiltonian: Hamiltonian, temperature: f64) -> Result<Self> {
        let gamma = gibbs(&hamiltonian, temperature)?;
        Ok(Self::Thermo {
            hamiltonian,
            temperature,
            gamma,
        })
    }

    /// The free reference state, where the theory has one.
    pub fn reference_state(&self) -> Option<DensityMatrix> {
        match self {
            Self::Entanglement | Self::Coherence => None,
            Self::Thermo { gamma, .. } => Some(gamma.clone()),
            Self::Purity { dim } => Some(maximally_mixed(*dim)),
        }
    }

    /// The closed-form resource measure the conversion rates divide.
    pub fn measure(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            Self::Entanglement => {
                if rho.dims().len() != 2 {
                    return Err(Error::BadDims(
                        "entanglement measure needs a bipartite state".into(),
                    ));
                }
                if (rho.purity() - 1.0).abs() > 1e-8 {
                    return Err(Error::InvalidState(
                        "pure-state entanglement measure on a mixed state".into(),
                    ));
                }
                Ok(von_neumann_entropy(&rho.partial_trace(&[0])?))
            }
            Self::Coherence => Ok(coherence_rel_entropy(rho)),
            Self::Thermo { gamma, .. } => relative_entropy(rho, gamma),
            Self::Purity { dim } => {
                if rho.dim() != *dim {
                    return Err(Error::DimMismatch {
                        expected: *dim,
                        got: rho.dim(),
                    });
                }
                relative_entropy(rho, &maximally_mixed(*dim))
            }
        }
    }
}

/// Asymptotic conversion rate `R(rho -> sigma)` as the ratio of the
/// theory's resource measure, valid in the reversible regime.
pub fn reversible_rate(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    theory: &ResourceTheory,
) -> Result<f64> {
    let num = theory.measure(rho)?;
    let denom = theory.measure(sigma)?;
    if denom <= tol::DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "target measure {denom:.3e} is below the rate floor"
        )));
    }
    Ok(num / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, phase_damping, Depolarizing, QuantumChannel};
    use crate::linalg::ComplexMatrix;
    use crate::states::{diagonal_qubit, is_maximally_correlated, pure_two_qubit, singlet};
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn phase_damped_two_qubit(alpha: f64, lambda: f64) -> DensityMatrix {
        phase_damping(lambda)
            .unwrap()
            .extend_id_tensor(2, 1)
            .apply(&pure_two_qubit(alpha).unwrap())
            .unwrap()
    }

    #[test]
    fn hashing_rate_reference_states() {
        assert!((hashing_rate(&singlet(), Side::A).unwrap() - 1.0).abs() < 1e-10);
        assert!(
            hashing_rate(&pure_two_qubit(0.0).unwrap(), Side::A)
                .unwrap()
                .abs()
                < 1e-10
        );

        // Phase-damped singlet at lambda = 1/2: 1 - h((1 + 1/sqrt(2))/2).
        let noisy = phase_damping(0.5)
            .unwrap()
            .extend_id_tensor(2, 1)
            .apply(&singlet())
            .unwrap();
        let expect = 1.0 - binary_entropy(0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2));
        let got = hashing_rate(&noisy, Side::A).unwrap();
        assert!((got - expect).abs() < 1e-10, "got {got}, expect {expect}");
        // Numeric anchor for the figure's dashed line.
        assert!((got - 0.399).abs() < 1e-3);
    }

    #[test]
    fn phase_damped_closed_form_limits() {
        // lambda = 0: no noise, E_d is the entanglement entropy.
        for &alpha in &[0.1, 0.4, std::f64::consts::FRAC_PI_4] {
            let e = ed_phase_damped_pure(alpha, 0.0);
            assert!((e - binary_entropy(alpha.cos().powi(2))).abs() < 1e-12);
        }
        // alpha = 0: product state, nothing to distill.
        assert!(ed_phase_damped_pure(0.0, 0.7).abs() < 1e-12);
        // Singlet case agrees with the dedicated closed form.
        let a = ed_phase_damped_pure(std::f64::consts::FRAC_PI_4, 0.3);
        let b = ed_phase_damped_singlet(0.3);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn central_oracle_closed_form_vs_simulation() {
        // The load-bearing check: the closed form must match the
        // hashing rate of the fully simulated state across a parameter grid.
        for i in 1..=20 {
            for j in 0..=20 {
                let alpha = i as f64 / 20.0 * std::f64::consts::FRAC_PI_2 * 0.98;
                let lambda = j as f64 / 20.0;
                let noisy = phase_damped_two_qubit(alpha, lambda);
                assert!(is_maximally_correlated(&noisy, 1e-10).unwrap());
                let simulated = hashing_rate(&noisy, Side::A).unwrap();
                let closed = ed_phase_damped_pure(alpha, lambda);
                assert!(
                    (simulated - closed).abs() < 1e-9,
                    "alpha={alpha} lambda={lambda}: {simulated} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn correlated_noise_singlet_branch_matches_simulation() {
        let cases: [(usize, Vec<f64>); 2] = [
            (2, vec![0.05, 0.03, 0.26, 0.66]),
            (3, vec![0.06, 0.03, 0.04, 0.01, 0.31, 0.42, 0.05, 0.08]),
        ];
        for (n, probs) in cases {
            let closed = ed_correlated_noise(n, CorrelatedInput::Singlets, &probs).unwrap();
            assert!((closed - (n as f64 - shannon_entropy(&probs))).abs() < 1e-15);
            let state = correlated_noise_singlet_state(n, &probs).unwrap();
            let simulated = hashing_rate(&state, Side::A).unwrap();
            assert!(
                (closed - simulated).abs() < 1e-9,
                "n={n}: closed {closed} vs simulated {simulated}"
            );
        }
    }

    #[test]
    fn correlated_noise_four_copies_via_simulation() {
        // The 8-qubit case runs through the same machinery (256x256
        // matrices); the closed form still matches the simulated hashing.
        let probs: Vec<f64> = (0..16).map(|i| (i as f64 + 1.0) / 136.0).collect();
        let closed = ed_correlated_noise(4, CorrelatedInput::Singlets, &probs).unwrap();
        let state = correlated_noise_singlet_state(4, &probs).unwrap();
        let simulated = hashing_rate(&state, Side::A).unwrap();
        assert!((closed - simulated).abs() < 1e-9);
    }

    #[test]
    fn correlated_noise_point_mass_is_noiseless() {
        let probs = [1.0, 0.0, 0.0, 0.0];
        let closed = ed_correlated_noise(2, CorrelatedInput::Singlets, &probs).unwrap();
        assert!((closed - 2.0).abs() < 1e-12);
    }

    #[test]
    fn correlated_noise_diluted_branch_matches_hashing() {
        let probs = [0.05, 0.03, 0.26, 0.66];
        for &alpha in &[0.1, 0.3, std::f64::consts::FRAC_PI_4] {
            let closed = ed_correlated_noise(2, CorrelatedInput::Diluted(alpha), &probs).unwrap();
            let state = correlated_noise_state(2, alpha, &probs).unwrap();
            let simulated = hashing_rate(&state, Side::A).unwrap();
            assert!(
                (closed - simulated).abs() < 1e-9,
                "alpha={alpha}: {closed} vs {simulated}"
            );
        }
    }

    #[test]
    fn coherence_rate_identity_and_anchor() {
        let (plus, _) = states::coherence_states(std::f64::consts::FRAC_PI_4).unwrap();
        let id = QuantumChannel::identity(2);
        assert!((coherence_rate(&plus, &id).unwrap() - 1.0).abs() < 1e-12);

        // Fig. 3 anchors for gamma = 0.9.
        let ad = amplitude_damping(0.9).unwrap();
        let no_dilution = coherence_rate(&plus, &ad).unwrap();
        assert!((no_dilution - 0.13).abs() < 0.005);

        let (psi, _) = states::coherence_states(0.34).unwrap();
        let diluted = coherence_rate(&psi, &ad).unwrap();
        assert!((diluted - 0.15).abs() < 0.01, "rate {diluted}");
    }

    #[test]
    fn coherence_rate_rejects_incoherent_input() {
        let diag = diagonal_qubit(0.4).unwrap();
        let ad = amplitude_damping(0.5).unwrap();
        assert!(matches!(
            coherence_rate(&diag, &ad),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn thermal_rate_cases() {
        let h = Hamiltonian::new(vec![0.0, 1.0]).unwrap();
        let gamma = gibbs(&h, 0.3).unwrap();
        let mu = diagonal_qubit(0.85).unwrap();

        let id = QuantumChannel::identity(2);
        assert!((thermal_rate(&mu, &id, &gamma).unwrap() - 1.0).abs() < 1e-12);

        assert!(matches!(
            thermal_rate(&gamma, &id, &gamma),
            Err(Error::Degenerate(_))
        ));

        // Fig. 4 working point: the rate is the ratio of binary KLs.
        let noise = crate::channels::ThermalDephasing::new(0.9, gamma.clone()).unwrap();
        let rate = thermal_rate(&mu, &noise, &gamma).unwrap();
        let g = gamma.mat().get(1, 1).re;
        let kl = |a: f64, b: f64| a * (a / b).log2() + (1.0 - a) * ((1.0 - a) / (1.0 - b)).log2();
        let oracle = kl(0.9 * g + 0.1 * 0.85, g) / kl(0.85, g);
        assert!((rate - oracle).abs() < 1e-10, "{rate} vs {oracle}");
    }

    #[test]
    fn thermal_rate_prefers_dephased_input() {
        let h = Hamiltonian::new(vec![0.0, 1.0]).unwrap();
        let gamma = gibbs(&h, 0.4).unwrap();
        let noise = crate::channels::ThermalDephasing::new(0.6, gamma.clone()).unwrap();
        let mut rng = StdRng::seed_from_u64(77);
        for _ in 0..40 {
            let mu = states::random_density_matrix(&mut rng, 2);
            let dephased = crate::functionals::dephase_computational(&mu);
            let r_mu = thermal_rate(&mu, &noise, &gamma);
            let r_de = thermal_rate(&dephased, &noise, &gamma);
            if let (Ok(r_mu), Ok(r_de)) = (r_mu, r_de) {
                assert!(r_mu <= r_de + 1e-10, "{r_mu} > {r_de}");
            }
        }
    }

    #[test]
    fn purity_rate_cases() {
        let mu = diagonal_qubit(0.3).unwrap();
        let id = QuantumChannel::identity(2);
        assert!((purity_rate(&mu, &id).unwrap() - 1.0).abs() < 1e-12);

        // Depolarizing on a diagonal qubit: rate = (1 - h(q')) / (1 - h(q)).
        let p = 0.4;
        let ch = Depolarizing::new(p, 2).unwrap();
        let q = 0.2;
        let rate = purity_rate(&diagonal_qubit(q).unwrap(), &ch).unwrap();
        let q_out = p / 2.0 + (1.0 - p) * q;
        let oracle = (1.0 - binary_entropy(q_out)) / (1.0 - binary_entropy(q));
        assert!((rate - oracle).abs() < 1e-10);

        // The rate grows toward the maximally mixed limit.
        let depol = Depolarizing::new(0.3, 2).unwrap();
        let low = purity_rate(&diagonal_qubit(0.10).unwrap(), &depol).unwrap();
        let high = purity_rate(&diagonal_qubit(0.49).unwrap(), &depol).unwrap();
        assert!(high > low);
    }

    #[test]
    fn coherence_rate_invariant_under_diagonal_unitaries() {
        // Amplitude damping commutes with diagonal phases, so the rate
        // cannot depend on them.
        let ad = amplitude_damping(0.9).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..25 {
            let alpha = rng.random_range(0.05..1.5);
            let (psi, _) = states::coherence_states(alpha).unwrap();
            let base = coherence_rate(&psi, &ad).unwrap();
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let u = ComplexMatrix::from_vec(
                2,
                vec![
                    Complex64::ONE,
                    Complex64::ZERO,
                    Complex64::ZERO,
                    Complex64::from_polar(1.0, theta),
                ],
            )
            .unwrap();
            let rotated = DensityMatrix::new(psi.mat().conjugate_by(&u), vec![2]).unwrap();
            let rate = coherence_rate(&rotated, &ad).unwrap();
            assert!((rate - base).abs() < 1e-9, "{rate} vs {base}");
        }
    }

    #[test]
    fn depolarizing_ratio_monotone_along_semigroup() {
        // Along rho_t = e^(-t) rho_0 + (1 - e^(-t)) 1/d, the purity rate of a
        // fixed depolarizing channel increases with t.
        let ch = Depolarizing::new(0.35, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(12);
        let rho0 = states::random_pure_state(&mut rng, 2);
        let state_at = |t: f64| -> DensityMatrix {
            let w = (-t).exp();
            let mat = &rho0.mat().scale_re(w) + &maximally_mixed(2).mat().scale_re(1.0 - w);
            DensityMatrix::from_parts_unchecked(mat, vec![2])
        };
        let delta = 0.05;
        for i in 0..20 {
            let t = 0.1 + 0.15 * i as f64;
            let r0 = purity_rate(&state_at(t), &ch).unwrap();
            let r1 = purity_rate(&state_at(t + delta), &ch).unwrap();
            assert!(r1 > r0, "ratio not increasing at t = {t}: {r0} -> {r1}");
        }
    }

    #[test]
    fn reversible_rate_cases() {
        let (psi, _) = states::coherence_states(0.4).unwrap();
        let (phi, _) = states::coherence_states(0.9).unwrap();
        let theory = ResourceTheory::Coherence;
        assert!((reversible_rate(&psi, &psi, &theory).unwrap() - 1.0).abs() < 1e-12);
        let forward = reversible_rate(&psi, &phi, &theory).unwrap();
        let back = reversible_rate(&phi, &psi, &theory).unwrap();
        assert!((forward * back - 1.0).abs() < 1e-9);

        // Pure-state entanglement: R(psi(pi/4) -> psi(alpha)) = 1/h(cos^2 a).
        let bell = pure_two_qubit(std::f64::consts::FRAC_PI_4).unwrap();
        let weak = pure_two_qubit(0.3).unwrap();
        let rate = reversible_rate(&bell, &weak, &ResourceTheory::Entanglement).unwrap();
        assert!((rate - 1.0 / binary_entropy(0.3f64.cos().powi(2))).abs() < 1e-9);
    }

    #[test]
    fn reversibility_products_in_purity_theory() {
        let theory = ResourceTheory::Purity { dim: 2 };
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..25 {
            let rho = states::random_density_matrix(&mut rng, 2);
            let sigma = states::random_density_matrix(&mut rng, 2);
            let f = reversible_rate(&rho, &sigma, &theory).unwrap();
            let b = reversible_rate(&sigma, &rho, &theory).unwrap();
            assert!((f * b - 1.0).abs() < 1e-9);
        }
    }
}
