//! Asymptotic resource-conversion rates for noisy quantum states.
//!
//! This crate computes how well quantum resources (entanglement, coherence,
//! athermality, purity) survive local noise, and in particular when *diluting*
//! a strong resource state into many weaker ones before the noise acts beats
//! doing nothing. It ships:
//!
//! - [`linalg`]: dense complex matrices with a self-contained Jacobi
//!   eigensolver, sized for few-qubit problems.
//! - [`states`]: constructors for the state families under study
//!   (two-qubit pure states, singlets, Gibbs states, diagonal qubits).
//! - [`channels`]: Kraus-operator noise models (phase/amplitude damping,
//!   Pauli channels, correlated Z noise) plus affine Gibbs-mixing and
//!   depolarizing maps.
//! - [`functionals`]: von Neumann / relative entropy, dephasing, relative
//!   entropy of coherence, fidelity.
//! - [`rates`]: hashing-bound distillable entanglement, closed-form rates
//!   for phase-damped states, and the per-theory conversion rates.
//! - [`dilution`]: "does diluting help?" scenario evaluators and parameter
//!   sweeps.
//! - [`qec`]: full density-matrix simulation of the three-qubit phase-flip
//!   code and its comparison against dilution for Pauli noise.
//!
//! The flavor of the central question, in a few lines: a singlet sent
//! through one-sided phase damping keeps fewer distillable singlets than a
//! weakly entangled state, per unit of entanglement invested.
//!
//! ```
//! use qdil::channels::{phase_damping, QuantumMap};
//! use qdil::dilution::entanglement_advantage;
//! use qdil::rates::{hashing_rate, Side};
//! use qdil::states::singlet;
//!
//! // Do nothing: the noisy singlet is worth about 0.399 singlets per copy.
//! let noisy = phase_damping(0.5)?.extend_id_tensor(2, 1).apply(&singlet())?;
//! let baseline = hashing_rate(&noisy, Side::A)?;
//! assert!((baseline - 0.3991).abs() < 1e-3);
//!
//! // Dilute into cos(0.2)|00> + sin(0.2)|11> first: a better overall rate.
//! let (diluted, same_baseline) = entanglement_advantage(0.5, 0.2)?;
//! assert!((same_baseline - baseline).abs() < 1e-12);
//! assert!(diluted > baseline);
//! # Ok::<(), qdil::Error>(())
//! ```

pub mod channels;
pub mod dilution;
pub mod error;
pub mod functionals;
pub mod linalg;
pub mod opt;
pub mod qec;
pub mod rates;
pub mod rng;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigDecomposition};
pub use num_complex::Complex64;
pub use states::{DensityMatrix, Hamiltonian};
