//! Noise models: Kraus-operator channels plus the two affine maps the rate
//! computations need (Gibbs mixing and depolarizing). Channels are immutable
//! once built and application is pure.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functionals::dephase_computational;
use crate::linalg::{kron, kron_all, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::tol;

/// A completely positive trace-preserving map evaluated on density matrices.
///
/// `apply_linear` is the raw linear action on an arbitrary operator; it is
/// what extensional channel-equality checks probe. `apply` wraps it with
/// density-matrix bookkeeping.
pub trait QuantumMap {
    fn in_dim(&self) -> usize;

    fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix;

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.in_dim() {
            return Err(Error::DimMismatch {
                expected: self.in_dim(),
                got: rho.dim(),
            });
        }
        let mat = self.apply_linear(rho.mat());
        Ok(DensityMatrix::from_parts_unchecked(
            mat,
            rho.dims().to_vec(),
        ))
    }
}

/// A channel given by its Kraus operators, `rho -> sum_i K_i rho K_i^dag`.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    dim: usize,
}

impl QuantumChannel {
    /// Validates the completeness relation `sum K^dag K = 1` to
    /// [`tol::CPTP_TOL`].
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("empty Kraus list".into()));
        }
        let dim = kraus[0].dim();
        if kraus.iter().any(|k| k.dim() != dim) {
            return Err(Error::BadDims("Kraus operators of mixed dimension".into()));
        }
        let mut sum = ComplexMatrix::zeros(dim);
        for k in &kraus {
            sum = &sum + &(&k.dagger() * k);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > tol::CPTP_TOL {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { kraus, dim })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The identity channel on dimension `d`.
    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
            dim: d,
        }
    }

    /// Extend to `1_left (x) Lambda (x) 1_right`. Dimension factors of 1 are
    /// skipped.
    pub fn extend_id_tensor(&self, left_dim: usize, right_dim: usize) -> Self {
        let left = ComplexMatrix::identity(left_dim.max(1));
        let right = ComplexMatrix::identity(right_dim.max(1));
        let kraus = self
            .kraus
            .iter()
            .map(|k| {
                let mut factors: Vec<&ComplexMatrix> = Vec::new();
                if left_dim > 1 {
                    factors.push(&left);
                }
                factors.push(k);
                if right_dim > 1 {
                    factors.push(&right);
                }
                kron_all(&factors)
            })
            .collect();
        Self {
            kraus,
            dim: left_dim.max(1) * self.dim * right_dim.max(1),
        }
    }

    /// `Lambda^(x) n`, the channel applied independently to n copies.
    pub fn tensor_power(&self, n: usize) -> Self {
        assert!(n >= 1);
        let mut acc = self.clone();
        for _ in 1..n {
            let kraus: Vec<ComplexMatrix> = acc
                .kraus
                .iter()
                .flat_map(|a| self.kraus.iter().map(move |b| kron(a, b)))
                .collect();
            acc = Self {
                dim: acc.dim * self.dim,
                kraus,
            };
        }
        acc
    }
}

impl QuantumMap for QuantumChannel {
    fn in_dim(&self) -> usize {
        self.dim
    }

    fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            out = &out + &(&(k * m) * &k.dagger());
        }
        out
    }
}

/// Phase damping with Kraus operators `diag(1, sqrt(1-lambda))` and
/// `diag(0, sqrt(lambda))`.
pub fn phase_damping(lambda: f64) -> Result<QuantumChannel> {
    check_probability("lambda", lambda)?;
    let k0 = ComplexMatrix::diag(&[1.0, (1.0 - lambda).sqrt()]);
    let k1 = ComplexMatrix::diag(&[0.0, lambda.sqrt()]);
    QuantumChannel::new(vec![k0, k1])
}

/// Amplitude damping with Kraus operators `diag(1, sqrt(1-gamma))` and
/// `sqrt(gamma) |0><1|`.
pub fn amplitude_damping(gamma: f64) -> Result<QuantumChannel> {
    check_probability("gamma", gamma)?;
    let k0 = ComplexMatrix::diag(&[1.0, (1.0 - gamma).sqrt()]);
    let mut k1 = ComplexMatrix::zeros(2);
    k1.set(0, 1, Complex64::new(gamma.sqrt(), 0.0));
    QuantumChannel::new(vec![k0, k1])
}

/// Pauli channel `rho -> sum_i p_i sigma_i rho sigma_i`.
pub fn pauli_channel(probs: [f64; 4]) -> Result<QuantumChannel> {
    let total: f64 = probs.iter().sum();
    if probs.iter().any(|&p| !(0.0..=1.0 + 1e-12).contains(&p)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "Pauli probabilities {probs:?} are not a distribution"
        )));
    }
    let sigmas = [
        ComplexMatrix::identity(2),
        crate::linalg::sigma_x(),
        crate::linalg::sigma_y(),
        crate::linalg::sigma_z(),
    ];
    let kraus: Vec<ComplexMatrix> = probs
        .iter()
        .zip(sigmas.iter())
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, s)| s.scale_re(p.sqrt()))
        .collect();
    QuantumChannel::new(kraus)
}

/// Phase-flip channel `(1-p) rho + p Z rho Z`, the noise model the
/// error-correction round runs on. Equivalent to phase damping with
/// `lambda = 1 - (1-2p)^2`.
pub fn phase_flip(p: f64) -> Result<QuantumChannel> {
    check_probability("p", p)?;
    pauli_channel([1.0 - p, 0.0, 0.0, p])
}

/// Correlated Z noise on `n` qubits: Kraus operators
/// `sqrt(p_pattern) sigma_z^(k) (x) sigma_z^(l) (x) ...` for every bit
/// pattern. Pattern bits map most-significant-first to qubits 1..n, so for
/// n = 2 the vector is ordered `(p_00, p_01, p_10, p_11)`.
pub fn correlated_z_noise(n: usize, probs: &[f64]) -> Result<QuantumChannel> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidArgument(format!(
            "correlated noise supports 1..=4 qubits, got {n}"
        )));
    }
    let patterns = 1usize << n;
    if probs.len() != patterns {
        return Err(Error::BadDims(format!(
            "expected {patterns} pattern probabilities, got {}",
            probs.len()
        )));
    }
    let total: f64 = probs.iter().sum();
    if probs.iter().any(|&p| !(0.0..=1.0 + 1e-12).contains(&p)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "pattern probabilities are not a distribution".into(),
        ));
    }
    let id = ComplexMatrix::identity(2);
    let z = crate::linalg::sigma_z();
    let kraus: Vec<ComplexMatrix> = (0..patterns)
        .filter(|&pat| probs[pat] > 0.0)
        .map(|pat| {
            let factors: Vec<&ComplexMatrix> = (0..n)
                .map(|qubit| {
                    if (pat >> (n - 1 - qubit)) & 1 == 1 {
                        &z
                    } else {
                        &id
                    }
                })
                .collect();
            kron_all(&factors).scale_re(probs[pat].sqrt())
        })
        .collect();
    QuantumChannel::new(kraus)
}

/// The thermal noise `rho -> p gamma + (1-p) Delta[rho]` (Gibbs mixing plus
/// full dephasing). Evaluated directly as an affine map; the constant term
/// is scaled by `Tr rho` so the map stays linear and extensional equality
/// with its Kraus realization holds on all operators.
#[derive(Clone, Debug)]
pub struct ThermalDephasing {
    p: f64,
    gamma: DensityMatrix,
}

impl ThermalDephasing {
    pub fn new(p: f64, gamma: DensityMatrix) -> Result<Self> {
        check_probability("p", p)?;
        if !gamma.is_diagonal(1e-12) {
            return Err(Error::InvalidArgument(
                "thermal dephasing needs a diagonal Gibbs state".into(),
            ));
        }
        Ok(Self { p, gamma })
    }

    pub fn gamma(&self) -> &DensityMatrix {
        &self.gamma
    }

    pub fn mixing(&self) -> f64 {
        self.p
    }

    /// Explicit Kraus realization for the qubit case:
    /// `K_ij = sqrt(p g_i + (1-p) delta_ij) |i><j|`. Used by tests to keep
    /// the affine evaluator honest.
    pub fn kraus_realization(&self) -> Result<QuantumChannel> {
        let d = self.gamma.dim();
        let mut kraus = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let g = self.gamma.mat().get(i, i).re;
                let weight = self.p * g + if i == j { 1.0 - self.p } else { 0.0 };
                if weight <= 0.0 {
                    continue;
                }
                let mut k = ComplexMatrix::zeros(d);
                k.set(i, j, Complex64::new(weight.sqrt(), 0.0));
                kraus.push(k);
            }
        }
        QuantumChannel::new(kraus)
    }
}

impl QuantumMap for ThermalDephasing {
    fn in_dim(&self) -> usize {
        self.gamma.dim()
    }

    fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let n = m.dim();
        let tr = m.trace();
        let dephased =
            ComplexMatrix::from_fn(n, |i, j| if i == j { m.get(i, i) } else { Complex64::ZERO });
        &self.gamma.mat().scale(tr * self.p) + &dephased.scale_re(1.0 - self.p)
    }
}

/// Depolarizing noise `rho -> p 1/d + (1-p) rho` on a `d`-level system,
/// with the constant term scaled by `Tr rho` to keep the map linear.
#[derive(Clone, Debug)]
pub struct Depolarizing {
    p: f64,
    dim: usize,
}

impl Depolarizing {
    pub fn new(p: f64, dim: usize) -> Result<Self> {
        check_probability("p", p)?;
        if dim < 2 {
            return Err(Error::InvalidArgument(
                "dimension must be at least 2".into(),
            ));
        }
        Ok(Self { p, dim })
    }

    pub fn mixing(&self) -> f64 {
        self.p
    }

    /// Kraus realization for the qubit case via the Pauli channel
    /// `(1 - 3p/4, p/4, p/4, p/4)`.
    pub fn kraus_realization(&self) -> Result<QuantumChannel> {
        if self.dim != 2 {
            return Err(Error::InvalidArgument(
                "Kraus realization implemented for qubits only".into(),
            ));
        }
        pauli_channel([
            1.0 - 0.75 * self.p,
            0.25 * self.p,
            0.25 * self.p,
            0.25 * self.p,
        ])
    }
}

impl QuantumMap for Depolarizing {
    fn in_dim(&self) -> usize {
        self.dim
    }

    fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let tr = m.trace();
        let scale = tr * (self.p / self.dim as f64);
        &ComplexMatrix::identity(self.dim).scale(scale) + &m.scale_re(1.0 - self.p)
    }
}

/// Extensional equality of two maps on the full matrix-unit basis (Kraus
/// decompositions are not unique, so lists cannot be compared directly).
pub fn maps_agree(a: &dyn QuantumMap, b: &dyn QuantumMap, tolerance: f64) -> bool {
    if a.in_dim() != b.in_dim() {
        return false;
    }
    let d = a.in_dim();
    for i in 0..d {
        for j in 0..d {
            let mut unit = ComplexMatrix::zeros(d);
            unit.set(i, j, Complex64::ONE);
            if a.apply_linear(&unit).max_abs_diff(&b.apply_linear(&unit)) > tolerance {
                return false;
            }
        }
    }
    true
}

/// Dephasing as a Kraus channel (projectors onto the computational basis);
/// the `p = 0` limit of [`ThermalDephasing`].
pub fn dephasing_channel(d: usize) -> QuantumChannel {
    let kraus: Vec<ComplexMatrix> = (0..d)
        .map(|i| {
            let mut k = ComplexMatrix::zeros(d);
            k.set(i, i, Complex64::ONE);
            k
        })
        .collect();
    QuantumChannel::new(kraus).expect("basis projectors are trace preserving")
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "{name} = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Helper shared by tests and the thermal scenario: Gibbs invariance
/// `Lambda[gamma] = gamma` of the thermal noise.
pub fn thermal_noise_fixes_gibbs(noise: &ThermalDephasing, tolerance: f64) -> bool {
    let out = noise
        .apply(noise.gamma())
        .expect("dimensions match by construction");
    out.mat().max_abs_diff(noise.gamma().mat()) <= tolerance
        && dephase_computational(noise.gamma())
            .mat()
            .approx_eq(noise.gamma().mat(), tolerance)
}
