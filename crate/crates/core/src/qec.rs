//! Full density-matrix simulation of the three-qubit phase-flip code
//! protecting one half of a singlet, its closed-form cross-checks, the
//! generalized repetition-code failure probability, and the comparison of
//! error correction against dilution for general Pauli noise.
//!
//! Register layout: four qubits ordered (A, B1, B2, B3), Alice first. The
//! parity observables X2X3 and X3X4 of the protocol act on (B1, B2) and
//! (B2, B3). Internally the protocol runs in the `|phi+>` convention the
//! encoding circuit produces; decoded states are relabeled to the singlet
//! convention by the fixed local unitary `1 (x) sigma_y` before they are
//! returned.

use num_complex::Complex64;

use crate::channels::{pauli_channel, phase_flip, QuantumChannel, QuantumMap};
use crate::error::{Error, Result};
use crate::functionals::binary_entropy;
use crate::linalg::{hadamard, kron, kron_all, kron_vec, sigma_x, sigma_z, ComplexMatrix};
use crate::opt::nelder_mead_max;
use crate::rates::{ed_phase_damped_singlet, hashing_rate, Side};
use crate::states::{minus_vector, plus_vector, singlet_relabel, DensityMatrix};

/// Probability vector of a single-qubit Pauli channel.
#[derive(Clone, Copy, Debug)]
pub struct PauliProbs {
    probs: [f64; 4],
}

impl PauliProbs {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "Pauli probabilities {probs:?} are not a distribution"
            )));
        }
        Ok(Self { probs })
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.probs
    }

    pub fn channel(&self) -> QuantumChannel {
        pauli_channel(self.probs).expect("validated on construction")
    }

    /// Pre-rotation bookkeeping: conjugating the noise by the right unitary
    /// permutes `(p1, p2, p3)` cyclically so the largest weight lands on the
    /// Z component, where the phase-flip code can fight it. `k` is the
    /// argmax over the non-identity weights (smallest index on ties) and the
    /// result is `(p_{k+1}, p_{k+2}, p_k)` with indices mod 3.
    pub fn cyclic_rotation(&self) -> Self {
        let [p0, p1, p2, p3] = self.probs;
        let weights = [p1, p2, p3];
        let mut k = 0usize;
        for i in 1..3 {
            if weights[i] > weights[k] {
                k = i;
            }
        }
        let rotated = [weights[(k + 1) % 3], weights[(k + 2) % 3], weights[k]];
        Self {
            probs: [p0, rotated[0], rotated[1], rotated[2]],
        }
    }
}

/// One projective outcome of the two parity measurements.
#[derive(Clone, Debug)]
pub struct SyndromeOutcome {
    /// Eigenvalue of X2X3 (on B1, B2).
    pub x23: i8,
    /// Eigenvalue of X3X4 (on B2, B3).
    pub x34: i8,
    pub probability: f64,
    /// Normalized post-measurement state (before recovery); `None` when the
    /// branch carries no weight.
    pub post_state: Option<DensityMatrix>,
}

const N_QUBITS: usize = 4;

fn op_on(op: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    let left = ComplexMatrix::identity(1 << qubit);
    let right = ComplexMatrix::identity(1 << (N_QUBITS - 1 - qubit));
    kron_all(&[&left, op, &right])
}

/// The encoded state `(|+ +++> + |- --->)/sqrt(2)`.
pub fn phase_flip_encode() -> DensityMatrix {
    let plus = plus_vector();
    let minus = minus_vector();
    let all_plus = kron_vec(&kron_vec(&kron_vec(&plus, &plus), &plus), &plus);
    let all_minus = kron_vec(&kron_vec(&kron_vec(&minus, &minus), &minus), &minus);
    let v: Vec<Complex64> = all_plus
        .iter()
        .zip(all_minus.iter())
        .map(|(a, b)| a + b)
        .collect();
    DensityMatrix::from_pure(&v, vec![2, 2, 2, 2]).expect("encoded state is valid")
}

/// The encoding circuit as a unitary: copies B1's X-basis value onto the
/// ancillas (CNOTs conjugated into the X basis). Self-inverse, so it also
/// decodes.
pub fn encode_unitary() -> ComplexMatrix {
    // Permutation on Bob's three qubits: (b1, b2, b3) -> (b1, b2^b1, b3^b1).
    let mut perm = ComplexMatrix::zeros(8);
    for b in 0..8usize {
        let b1 = (b >> 2) & 1;
        let b2 = (b >> 1) & 1;
        let b3 = b & 1;
        let target = (b1 << 2) | ((b2 ^ b1) << 1) | (b3 ^ b1);
        perm.set(target, b, Complex64::ONE);
    }
    let h3 = kron_all(&[&hadamard(), &hadamard(), &hadamard()]);
    let bob = &(&h3 * &perm) * &h3;
    kron(&ComplexMatrix::identity(2), &bob)
}

fn syndrome_projectors() -> Vec<(i8, i8, ComplexMatrix)> {
    let x = sigma_x();
    let o23 = &op_on(&x, 1) * &op_on(&x, 2);
    let o34 = &op_on(&x, 2) * &op_on(&x, 3);
    let id = ComplexMatrix::identity(16);
    let mut projectors = Vec::with_capacity(4);
    for &s in &[1i8, -1] {
        for &t in &[1i8, -1] {
            let p23 = (&id + &o23.scale_re(s as f64)).scale_re(0.5);
            let p34 = (&id + &o34.scale_re(t as f64)).scale_re(0.5);
            projectors.push((s, t, &p23 * &p34));
        }
    }
    projectors
}

/// Recovery unitary for a syndrome pair, per the protocol table:
/// (+,+) -> 1, (+,-) -> Z on B3, (-,+) -> Z on B1, (-,-) -> Z on B2.
pub fn recovery_operation(x23: i8, x34: i8) -> ComplexMatrix {
    let z = sigma_z();
    match (x23, x34) {
        (1, 1) => ComplexMatrix::identity(16),
        (1, -1) => op_on(&z, 3),
        (-1, 1) => op_on(&z, 1),
        (-1, -1) => op_on(&z, 2),
        _ => panic!("syndrome outcomes must be +-1"),
    }
}

/// Apply a single-qubit channel independently to Bob's three qubits.
fn apply_noise_to_bob(noise: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if noise.dim() != 2 {
        return Err(Error::DimMismatch {
            expected: 2,
            got: noise.dim(),
        });
    }
    let mut state = rho.clone();
    for qubit in 1..N_QUBITS {
        let extended = noise.extend_id_tensor(1 << qubit, 1 << (N_QUBITS - 1 - qubit));
        state = extended.apply(&state)?;
    }
    Ok(state)
}

/// Projective measurement of the two parity observables on a 4-qubit state.
/// Outcome probabilities sum to 1.
pub fn syndrome_measure(rho: &DensityMatrix) -> Result<Vec<SyndromeOutcome>> {
    if rho.dim() != 16 {
        return Err(Error::DimMismatch {
            expected: 16,
            got: rho.dim(),
        });
    }
    let mut outcomes = Vec::with_capacity(4);
    for (s, t, proj) in syndrome_projectors() {
        let branch = &(&proj * rho.mat()) * &proj;
        let probability = branch.trace().re;
        let post_state = if probability > 1e-14 {
            Some(DensityMatrix::from_parts_unchecked(
                branch.scale_re(1.0 / probability),
                rho.dims().to_vec(),
            ))
        } else {
            None
        };
        outcomes.push(SyndromeOutcome {
            x23: s,
            x34: t,
            probability,
            post_state,
        });
    }
    Ok(outcomes)
}

/// Noise, syndrome measurement and recovery, stopping before decoding:
/// a two-term mixture of the encoded state and its fully flipped image.
pub fn intermediate_post_recovery(p: f64) -> Result<DensityMatrix> {
    let noise = phase_flip(p)?;
    let noisy = apply_noise_to_bob(&noise, &phase_flip_encode())?;
    recover(&noisy)
}

fn recover(noisy: &DensityMatrix) -> Result<DensityMatrix> {
    let mut acc = ComplexMatrix::zeros(16);
    for (s, t, proj) in syndrome_projectors() {
        let branch = &(&proj * noisy.mat()) * &proj;
        let r = recovery_operation(s, t);
        acc = &acc + &branch.conjugate_by(&r);
    }
    Ok(DensityMatrix::from_parts_unchecked(
        acc,
        noisy.dims().to_vec(),
    ))
}

/// One full error-correction round: encode, apply `noise` to each of Bob's
/// qubits, measure the parities, recover, decode, discard the ancillas.
/// Returns the decoded two-qubit state in the singlet convention.
pub fn phase_flip_round(noise: &QuantumChannel) -> Result<DensityMatrix> {
    let noisy = apply_noise_to_bob(noise, &phase_flip_encode())?;
    let recovered = recover(&noisy)?;
    let decoded = recovered.mat().conjugate_by(&encode_unitary());
    let four = DensityMatrix::from_parts_unchecked(decoded, vec![2, 2, 2, 2]);
    let pair = four.partial_trace(&[0, 1])?;
    let relabeled = pair.mat().conjugate_by(&singlet_relabel());
    Ok(DensityMatrix::from_parts_unchecked(relabeled, vec![2, 2]))
}

/// Closed form of the decoded state for phase-flip noise:
/// `w |psi-><psi-| + (1-w) Z_B |psi-><psi-| Z_B` with
/// `w = (1-p)^3 + 3p(1-p)^2`.
pub fn phase_flip_decoded_closed_form(p: f64) -> DensityMatrix {
    let w = (1.0 - p).powi(3) + 3.0 * p * (1.0 - p) * (1.0 - p);
    let psi = crate::states::singlet();
    let zb = kron(&ComplexMatrix::identity(2), &sigma_z());
    let flipped = psi.mat().conjugate_by(&zb);
    let mat = &psi.mat().scale_re(w) + &flipped.scale_re(1.0 - w);
    DensityMatrix::from_parts_unchecked(mat, vec![2, 2])
}

/// Failure probability of the `2t+1`-qubit repetition code: the chance of
/// more than `t` flips, `sum_{k=t+1}^{2t+1} C(2t+1, k) p^k (1-p)^(2t+1-k)`.
pub fn p_fail(p: f64, t: usize) -> f64 {
    let n = 2 * t + 1;
    (t + 1..=n)
        .map(|k| binomial(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32))
        .sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Distillation rate of the error-correction strategy,
/// `1 - h((1-p)^3 + 3p(1-p)^2)`.
pub fn ed_qec_phase_flip(p: f64) -> f64 {
    let w = (1.0 - p).powi(3) + 3.0 * p * (1.0 - p) * (1.0 - p);
    1.0 - binary_entropy(w)
}

/// Distillation rate of the dilution strategy against phase-flip noise,
/// `1 - h((1 + sqrt(1 - 2p(1-p)(1 - cos 4 alpha)))/2) / h(cos^2 alpha)`.
/// The protocol fixes `alpha = 0.25` to match the three-qubit code's
/// two-ancillas-per-singlet budget.
pub fn ed_dil_phase_flip(p: f64, alpha: f64) -> f64 {
    let inner = 1.0 - 2.0 * p * (1.0 - p) * (1.0 - (4.0 * alpha).cos());
    let arg = 0.5 * (1.0 + inner.sqrt());
    1.0 - binary_entropy(arg) / binary_entropy(alpha.cos().powi(2))
}

/// Distillation rate with no pre-processing: the phase-damped singlet at
/// `lambda = 1 - (1-2p)^2`.
pub fn ed_nothing_phase_flip(p: f64) -> f64 {
    ed_phase_damped_singlet(1.0 - (1.0 - 2.0 * p) * (1.0 - 2.0 * p))
}

/// Run the full error-correction round under a general Pauli channel and
/// return the decoded two-qubit state (singlet convention).
pub fn pauli_qec_decoded(p: &PauliProbs) -> Result<DensityMatrix> {
    phase_flip_round(&p.channel())
}

/// Entrywise closed form of the decoded state under Pauli noise, built
/// in the `|++>, |+->, |-+>, |-->` basis and converted to the singlet
/// convention. Serves as the oracle for [`pauli_qec_decoded`].
pub fn pauli_decoded_closed_form(p: &PauliProbs) -> DensityMatrix {
    let [_, p1, p2, p3] = p.as_array();
    let t11 = 0.5 * (-1.0 + p2 + p3).powi(2) * (1.0 + 2.0 * p2 + 2.0 * p3);
    let t14 = 0.5 * (-1.0 + 2.0 * p1 + p2 + p3).powi(2) * (1.0 - 2.0 * p1 - 4.0 * p2 + 2.0 * p3);
    let t22 = -0.5 * (p2 + p3).powi(2) * (-3.0 + 2.0 * p2 + 2.0 * p3);
    let t23 = -0.5 * (p3 - p2).powi(2) * (-3.0 + 6.0 * p1 + 4.0 * p2 + 2.0 * p3);
    let mut pm_basis = ComplexMatrix::zeros(4);
    let entries = [
        (0, 0, t11),
        (0, 3, t14),
        (3, 0, t14),
        (3, 3, t11),
        (1, 1, t22),
        (2, 2, t22),
        (1, 2, t23),
        (2, 1, t23),
    ];
    for (i, j, v) in entries {
        pm_basis.set(i, j, Complex64::new(v, 0.0));
    }
    let h2 = kron(&hadamard(), &hadamard());
    let computational = pm_basis.conjugate_by(&h2);
    let relabeled = computational.conjugate_by(&singlet_relabel());
    DensityMatrix::from_parts_unchecked(relabeled, vec![2, 2])
}

/// Comparison of the three strategies for one Pauli noise vector.
#[derive(Clone, Debug)]
pub struct PauliCompareReport {
    /// Hashing bound after error correction with the cyclic pre-rotation.
    pub ed_qec_bound: f64,
    /// Best hashing-bound rate of the dilution protocol over the sampled
    /// local unitaries.
    pub ed_dil_bound: f64,
    /// Hashing bound with no pre-processing.
    pub ed_nothing_bound: f64,
    /// Euler angles (z, y, z) of the best dilution unitary found.
    pub best_angles: [f64; 3],
}

fn euler_unitary(a: f64, b: f64, c: f64) -> ComplexMatrix {
    let rz = |t: f64| {
        ComplexMatrix::from_vec(
            2,
            vec![
                Complex64::from_polar(1.0, -t / 2.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::from_polar(1.0, t / 2.0),
            ],
        )
        .unwrap()
    };
    let ry = ComplexMatrix::from_real(
        2,
        &[
            (b / 2.0).cos(),
            -(b / 2.0).sin(),
            (b / 2.0).sin(),
            (b / 2.0).cos(),
        ],
    )
    .unwrap();
    &(&rz(a) * &ry) * &rz(c)
}

/// Compare error correction, dilution and no pre-processing under the Pauli
/// channel `p`. All bounds are reported raw (they may be negative).
///
/// The dilution leg dilutes into `psi(alpha0 = 0.25)` (three copies per
/// singlet, matching the code's ancilla budget), lets Bob pre-rotate his
/// half by a unitary swept over a `u_grid^3` Euler-angle grid and refined by
/// Nelder-Mead, and divides the hashing bound by `S(psi^B) = h(cos^2 a0)`.
pub fn pauli_compare(p: &PauliProbs, u_grid: usize) -> Result<PauliCompareReport> {
    if u_grid < 8 {
        return Err(Error::InvalidArgument(
            "the Euler grid needs at least 8 points per angle".into(),
        ));
    }
    let alpha0 = 0.25f64;

    let decoded = pauli_qec_decoded(&p.cyclic_rotation())?;
    let ed_qec_bound = hashing_rate(&decoded, Side::A)?;

    let nothing = p
        .channel()
        .extend_id_tensor(2, 1)
        .apply(&crate::states::singlet())?;
    let ed_nothing_bound = hashing_rate(&nothing, Side::A)?;

    let psi = crate::states::pure_two_qubit(alpha0)?;
    let cost = binary_entropy(alpha0.cos().powi(2));
    let channel = p.channel();
    let mut dil_rate = |angles: &[f64]| -> f64 {
        let u = euler_unitary(angles[0], angles[1], angles[2]);
        let rotated = psi
            .mat()
            .conjugate_by(&kron(&ComplexMatrix::identity(2), &u));
        let state = DensityMatrix::from_parts_unchecked(rotated, vec![2, 2]);
        let noisy = channel
            .extend_id_tensor(2, 1)
            .apply(&state)
            .expect("dimensions match");
        hashing_rate(&noisy, Side::B).expect("bipartite by construction") / cost
    };

    let mut best_angles = [0.0f64; 3];
    let mut ed_dil_bound = f64::NEG_INFINITY;
    for ia in 0..u_grid {
        let a = std::f64::consts::TAU * ia as f64 / u_grid as f64;
        for ib in 0..u_grid {
            let b = std::f64::consts::PI * ib as f64 / (u_grid - 1) as f64;
            for ic in 0..u_grid {
                let c = std::f64::consts::TAU * ic as f64 / u_grid as f64;
                let r = dil_rate(&[a, b, c]);
                if r > ed_dil_bound {
                    ed_dil_bound = r;
                    best_angles = [a, b, c];
                }
            }
        }
    }
    let (refined_angles, refined) = nelder_mead_max(&mut dil_rate, &best_angles, 0.05, 1e-6, 200);
    if refined > ed_dil_bound {
        ed_dil_bound = refined;
        best_angles = [refined_angles[0], refined_angles[1], refined_angles[2]];
    }

    Ok(PauliCompareReport {
        ed_qec_bound,
        ed_dil_bound,
        ed_nothing_bound,
        best_angles,
    })
}
