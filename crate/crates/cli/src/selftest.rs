//! Built-in invariant suites, runnable in the field without the test
//! harness. Each check belongs to a module of the core library; the report
//! counts passes per module and names each failure as `module.check`.
//!
//! `fault` is a test hook: naming a check corrupts its numeric tolerance
//! (scales it to zero), which must surface as a failure naming exactly that
//! module and invariant.

use qdil::channels::{
    amplitude_damping, correlated_z_noise, maps_agree, pauli_channel, phase_damping, phase_flip,
    Depolarizing, QuantumChannel, QuantumMap, ThermalDephasing,
};
use qdil::dilution::{entanglement_advantage, sweep, thermal_advantage};
use qdil::functionals::{dephase_computational, relative_entropy, von_neumann_entropy};
use qdil::linalg::{hermitian_eig, trace_norm, ComplexMatrix};
use qdil::qec::{
    pauli_decoded_closed_form, pauli_qec_decoded, phase_flip_decoded_closed_form, phase_flip_round,
    PauliProbs,
};
use qdil::rates::{
    ed_correlated_noise, ed_phase_damped_pure, hashing_rate, reversible_rate, CorrelatedInput,
    ResourceTheory, Side,
};
use qdil::rng::named_rng;
use qdil::states::{
    diagonal_qubit, gibbs, maximally_mixed, pure_two_qubit, random_density_matrix, Hamiltonian,
};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub error: Option<String>,
}

pub struct SelftestReport {
    pub results: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.error.is_none())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut modules: Vec<&'static str> = Vec::new();
        for r in &self.results {
            if !modules.contains(&r.module) {
                modules.push(r.module);
            }
        }
        out.push_str("module        checks  passed\n");
        for m in &modules {
            let total = self.results.iter().filter(|r| r.module == *m).count();
            let passed = self
                .results
                .iter()
                .filter(|r| r.module == *m && r.error.is_none())
                .count();
            out.push_str(&format!("{m:<14}{total:>6}  {passed:>6}\n"));
        }
        for r in &self.results {
            if let Some(err) = &r.error {
                out.push_str(&format!("FAIL {}.{}: {err}\n", r.module, r.name));
            }
        }
        let passed = self.results.iter().filter(|r| r.error.is_none()).count();
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "selftest: {verdict} ({passed}/{} checks)\n",
            self.results.len()
        ));
        out
    }
}

type Check = (
    &'static str,
    &'static str,
    fn(&mut ChaCha12Rng, f64) -> Result<(), String>,
);

fn ensure(condition: bool, detail: String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(detail)
    }
}

fn random_hermitian(rng: &mut ChaCha12Rng, n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        h.set(i, i, qdil::Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        for j in (i + 1)..n {
            let z = qdil::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h.set(i, j, z);
            h.set(j, i, z.conj());
        }
    }
    h
}

fn check_eig_reconstruction(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let tol = 1e-10 * scale;
    for _ in 0..5 {
        let h = random_hermitian(rng, 8);
        let eig = hermitian_eig(&h).map_err(|e| e.to_string())?;
        let defect = eig.reconstruct().max_abs_diff(&h);
        ensure(
            defect <= tol,
            format!("reconstruction defect {defect:.3e} > {tol:.3e}"),
        )?;
        let v = &eig.eigenvectors;
        let unitarity = (v * &v.dagger()).max_abs_diff(&ComplexMatrix::identity(8));
        ensure(
            unitarity <= tol,
            format!("eigenvector unitarity {unitarity:.3e}"),
        )?;
    }
    Ok(())
}

fn check_trace_norm_triangle(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for _ in 0..20 {
        let a = random_hermitian(rng, 4);
        let b = random_hermitian(rng, 4);
        let lhs = trace_norm(&(&a + &b));
        let rhs = trace_norm(&a) + trace_norm(&b);
        ensure(
            lhs <= rhs + 1e-9 * scale,
            format!("triangle: {lhs} > {rhs}"),
        )?;
    }
    Ok(())
}

fn check_partial_trace_product(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let a = random_density_matrix(rng, 2);
    let b = random_density_matrix(rng, 3);
    let joint = qdil::states::product_state(&a, &b);
    let ta = joint.partial_trace(&[0]).map_err(|e| e.to_string())?;
    let defect = ta.mat().max_abs_diff(a.mat());
    ensure(
        defect <= 1e-12 * scale,
        format!("marginal defect {defect:.3e}"),
    )
}

fn check_state_constructors(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for i in 0..10 {
        let alpha = i as f64 / 9.0 * std::f64::consts::FRAC_PI_2;
        let psi = pure_two_qubit(alpha).map_err(|e| e.to_string())?;
        let tr = psi.mat().trace().re;
        ensure((tr - 1.0).abs() <= 1e-10 * scale, format!("trace {tr}"))?;
    }
    let h = Hamiltonian::new(vec![0.0, 1.0]).map_err(|e| e.to_string())?;
    let g = gibbs(&h, 0.3).map_err(|e| e.to_string())?;
    let excited = g.mat().get(1, 1).re;
    ensure(
        (excited - 0.03).abs() <= 0.005 * scale,
        format!("Gibbs excited weight {excited}"),
    )
}

fn check_marginal_entropy(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let h2 = |x: f64| {
        let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
        term(x) + term(1.0 - x)
    };
    for i in 1..12 {
        let alpha = i as f64 / 12.0 * std::f64::consts::FRAC_PI_2;
        let psi = pure_two_qubit(alpha).map_err(|e| e.to_string())?;
        let marginal = psi.partial_trace(&[0]).map_err(|e| e.to_string())?;
        let s = von_neumann_entropy(&marginal);
        let expect = h2(alpha.cos().powi(2));
        ensure(
            (s - expect).abs() <= 1e-10 * scale,
            format!("marginal entropy {s} vs {expect} at alpha {alpha}"),
        )?;
    }
    Ok(())
}

fn check_cptp(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let h = Hamiltonian::new(vec![0.0, 1.0]).map_err(|e| e.to_string())?;
    let gamma = gibbs(&h, 0.5).map_err(|e| e.to_string())?;
    let channels: Vec<QuantumChannel> = vec![
        phase_damping(0.4).map_err(|e| e.to_string())?,
        amplitude_damping(0.7).map_err(|e| e.to_string())?,
        pauli_channel([0.6, 0.2, 0.1, 0.1]).map_err(|e| e.to_string())?,
        correlated_z_noise(2, &[0.05, 0.03, 0.26, 0.66]).map_err(|e| e.to_string())?,
        ThermalDephasing::new(0.8, gamma)
            .map_err(|e| e.to_string())?
            .kraus_realization()
            .map_err(|e| e.to_string())?,
    ];
    for ch in &channels {
        let mut total = ComplexMatrix::zeros(ch.dim());
        for k in ch.kraus() {
            total = &total + &(&k.dagger() * k);
        }
        let defect = total.max_abs_diff(&ComplexMatrix::identity(ch.dim()));
        ensure(
            defect <= 1e-10 * scale,
            format!("completeness defect {defect:.3e}"),
        )?;
    }
    Ok(())
}

fn check_unital_fixed_points(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let mixed = maximally_mixed(2);
    for probs in [[0.7, 0.1, 0.1, 0.1], [0.25, 0.25, 0.25, 0.25]] {
        let ch = pauli_channel(probs).map_err(|e| e.to_string())?;
        let out = ch.apply(&mixed).map_err(|e| e.to_string())?;
        let defect = out.mat().max_abs_diff(mixed.mat());
        ensure(
            defect <= 1e-12 * scale,
            format!("Pauli fixed point {defect:.3e}"),
        )?;
    }
    let zz = correlated_z_noise(2, &[0.05, 0.03, 0.26, 0.66]).map_err(|e| e.to_string())?;
    let mixed4 = maximally_mixed(4);
    let out = zz.apply(&mixed4).map_err(|e| e.to_string())?;
    let defect = out.mat().max_abs_diff(mixed4.mat());
    ensure(
        defect <= 1e-12 * scale,
        format!("correlated-Z fixed point {defect:.3e}"),
    )
}

fn check_thermal_gibbs_invariance(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let h = Hamiltonian::new(vec![0.0, 1.0]).map_err(|e| e.to_string())?;
    let gamma = gibbs(&h, 0.3).map_err(|e| e.to_string())?;
    for p in [0.0, 0.5, 1.0] {
        let noise = ThermalDephasing::new(p, gamma.clone()).map_err(|e| e.to_string())?;
        let out = noise.apply(&gamma).map_err(|e| e.to_string())?;
        let defect = out.mat().max_abs_diff(gamma.mat());
        ensure(
            defect <= 1e-12 * scale,
            format!("Gibbs moved by {defect:.3e} at p {p}"),
        )?;
    }
    // And the affine evaluator matches its Kraus realization.
    let noise = ThermalDephasing::new(0.7, gamma).map_err(|e| e.to_string())?;
    let kraus = noise.kraus_realization().map_err(|e| e.to_string())?;
    ensure(
        maps_agree(&noise, &kraus, (1e-12 * scale).max(f64::MIN_POSITIVE)),
        "affine evaluator disagrees with Kraus realization".to_string(),
    )
}

fn check_dephasing_entropy(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for _ in 0..25 {
        let rho = random_density_matrix(rng, 3);
        let s = von_neumann_entropy(&rho);
        let sd = von_neumann_entropy(&dephase_computational(&rho));
        ensure(
            sd >= s - 1e-10 * scale,
            format!("dephasing lowered entropy {s} -> {sd}"),
        )?;
    }
    Ok(())
}

fn check_pinsker(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for _ in 0..25 {
        let rho = random_density_matrix(rng, 2);
        let sigma = random_density_matrix(rng, 2);
        let d = relative_entropy(&rho, &sigma).map_err(|e| e.to_string())?;
        let t = trace_norm(&(rho.mat() - sigma.mat()));
        let bound = t * t / (2.0 * std::f64::consts::LN_2);
        ensure(d >= bound - 1e-9 * scale, format!("Pinsker: {d} < {bound}"))?;
    }
    Ok(())
}

fn check_contractivity(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let maps: Vec<Box<dyn QuantumMap>> = vec![
        Box::new(phase_damping(0.4).map_err(|e| e.to_string())?),
        Box::new(amplitude_damping(0.7).map_err(|e| e.to_string())?),
        Box::new(Depolarizing::new(0.35, 2).map_err(|e| e.to_string())?),
    ];
    for m in &maps {
        for _ in 0..20 {
            let rho = random_density_matrix(rng, 2);
            let sigma = random_density_matrix(rng, 2);
            let before = relative_entropy(&rho, &sigma).map_err(|e| e.to_string())?;
            let after = relative_entropy(
                &m.apply(&rho).map_err(|e| e.to_string())?,
                &m.apply(&sigma).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            ensure(
                after <= before + 1e-9 * scale,
                format!("contractivity: {after} > {before}"),
            )?;
        }
    }
    Ok(())
}

fn check_central_oracle(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for i in 1..=6 {
        for j in 0..=6 {
            let alpha = i as f64 / 6.0 * std::f64::consts::FRAC_PI_2 * 0.95;
            let lambda = j as f64 / 6.0;
            let state = phase_damping(lambda)
                .map_err(|e| e.to_string())?
                .extend_id_tensor(2, 1)
                .apply(&pure_two_qubit(alpha).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let simulated = hashing_rate(&state, Side::A).map_err(|e| e.to_string())?;
            let closed = ed_phase_damped_pure(alpha, lambda);
            ensure(
                (simulated - closed).abs() <= 1e-9 * scale,
                format!("closed form vs simulation at ({alpha}, {lambda})"),
            )?;
        }
    }
    Ok(())
}

fn check_correlated_closed_forms(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let probs = [0.05, 0.03, 0.26, 0.66];
    let closed =
        ed_correlated_noise(2, CorrelatedInput::Singlets, &probs).map_err(|e| e.to_string())?;
    let state =
        qdil::rates::correlated_noise_singlet_state(2, &probs).map_err(|e| e.to_string())?;
    let simulated = hashing_rate(&state, Side::A).map_err(|e| e.to_string())?;
    ensure(
        (closed - simulated).abs() <= 1e-9 * scale,
        format!("singlet branch: {closed} vs {simulated}"),
    )
}

fn check_reversibility(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let theory = ResourceTheory::Purity { dim: 2 };
    for _ in 0..20 {
        let rho = random_density_matrix(rng, 2);
        let sigma = random_density_matrix(rng, 2);
        let f = reversible_rate(&rho, &sigma, &theory).map_err(|e| e.to_string())?;
        let b = reversible_rate(&sigma, &rho, &theory).map_err(|e| e.to_string())?;
        ensure(
            (f * b - 1.0).abs() <= 1e-9 * scale,
            format!("{f} * {b} != 1"),
        )?;
    }
    Ok(())
}

fn check_entanglement_advantage(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for i in 1..=20 {
        let alpha = i as f64 / 21.0 * std::f64::consts::FRAC_PI_4;
        let (lhs, rhs) = entanglement_advantage(0.5, alpha).map_err(|e| e.to_string())?;
        ensure(
            lhs - rhs >= -1e-12 * scale.max(1.0) && lhs > rhs - 1e-9 * scale,
            format!("no advantage at alpha {alpha}: {lhs} vs {rhs}"),
        )?;
    }
    Ok(())
}

fn check_thermal_argmax(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let result = sweep(1e-3, 1.0 - 1e-9, 150, &mut |q| {
        thermal_advantage(0.3, 0.9, q)
    })
    .map_err(|e| e.to_string())?;
    ensure(
        (result.argmax_param - 0.85).abs() <= 0.01 * scale.max(1e-12),
        format!("argmax {}", result.argmax_param),
    )
}

fn check_qec_decoded(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for p in [0.0, 0.1, 0.25, 0.5] {
        let simulated = phase_flip_round(&phase_flip(p).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let closed = phase_flip_decoded_closed_form(p);
        let defect = simulated.mat().max_abs_diff(closed.mat());
        ensure(
            defect <= 1e-10 * scale,
            format!("decoded defect {defect:.3e} at p {p}"),
        )?;
    }
    Ok(())
}

fn check_syndrome_normalization(_rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    let noise = phase_flip(0.2).map_err(|e| e.to_string())?;
    let mut enc = qdil::qec::phase_flip_encode();
    for qubit in 1..4usize {
        let ext = noise.extend_id_tensor(1 << qubit, 1 << (3 - qubit));
        enc = ext.apply(&enc).map_err(|e| e.to_string())?;
    }
    let outcomes = qdil::qec::syndrome_measure(&enc).map_err(|e| e.to_string())?;
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    ensure(
        (total - 1.0).abs() <= 1e-10 * scale,
        format!("syndrome probabilities sum to {total}"),
    )
}

fn check_pauli_theta_oracle(rng: &mut ChaCha12Rng, scale: f64) -> Result<(), String> {
    for _ in 0..5 {
        let raw: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.01..1.0));
        let total: f64 = raw.iter().sum();
        let p = PauliProbs::new(raw.map(|x| x / total)).map_err(|e| e.to_string())?;
        let simulated = pauli_qec_decoded(&p).map_err(|e| e.to_string())?;
        let oracle = pauli_decoded_closed_form(&p);
        let defect = simulated.mat().max_abs_diff(oracle.mat());
        ensure(
            defect <= 1e-9 * scale,
            format!("decoded matrix defect {defect:.3e}"),
        )?;
    }
    Ok(())
}

fn check_degenerate_reporting(_rng: &mut ChaCha12Rng, _scale: f64) -> Result<(), String> {
    // Degenerate denominators must be surfaced as errors, not infinities.
    let gamma = gibbs(&Hamiltonian::new(vec![0.0, 1.0]).unwrap(), 0.3).unwrap();
    let noise = ThermalDephasing::new(0.9, gamma.clone()).map_err(|e| e.to_string())?;
    match qdil::rates::thermal_rate(&gamma, &noise, &gamma) {
        Err(qdil::Error::Degenerate(_)) => Ok(()),
        other => Err(format!("expected Degenerate, got {other:?}")),
    }
    .and_then(|()| {
        match diagonal_qubit(0.5)
            .map_err(|e| e.to_string())
            .and_then(|mu| {
                qdil::rates::coherence_rate(&mu, &phase_damping(0.3).unwrap())
                    .map_err(|e| e.to_string())
            }) {
            Err(_) => Ok(()),
            Ok(v) => Err(format!("incoherent input produced rate {v}")),
        }
    })
}

const CHECKS: &[Check] = &[
    ("linalg", "eig-reconstruction", check_eig_reconstruction),
    ("linalg", "trace-norm-triangle", check_trace_norm_triangle),
    (
        "linalg",
        "partial-trace-product",
        check_partial_trace_product,
    ),
    ("states", "constructor-invariants", check_state_constructors),
    ("states", "marginal-entropy", check_marginal_entropy),
    ("channels", "cptp-completeness", check_cptp),
    ("channels", "unital-fixed-points", check_unital_fixed_points),
    (
        "channels",
        "thermal-gibbs-invariance",
        check_thermal_gibbs_invariance,
    ),
    ("functionals", "dephasing-entropy", check_dephasing_entropy),
    ("functionals", "pinsker", check_pinsker),
    ("functionals", "contractivity", check_contractivity),
    ("rates", "central-oracle", check_central_oracle),
    (
        "rates",
        "correlated-closed-forms",
        check_correlated_closed_forms,
    ),
    ("rates", "reversibility", check_reversibility),
    ("rates", "degenerate-reporting", check_degenerate_reporting),
    (
        "dilution",
        "entanglement-advantage",
        check_entanglement_advantage,
    ),
    ("dilution", "thermal-argmax", check_thermal_argmax),
    ("qec", "decoded-closed-form", check_qec_decoded),
    (
        "qec",
        "syndrome-normalization",
        check_syndrome_normalization,
    ),
    ("qec", "pauli-theta-oracle", check_pauli_theta_oracle),
];

/// Run every registered check. `fault`, when set to `module.check`, scales
/// that check's tolerance to zero to verify failures are reported.
pub fn run_selftest(seed: u64, fault: Option<&str>) -> SelftestReport {
    let mut results = Vec::with_capacity(CHECKS.len());
    for (module, name, check) in CHECKS {
        let id = format!("{module}.{name}");
        let scale = match fault {
            Some(target) if target == id => 0.0,
            _ => 1.0,
        };
        let mut rng = named_rng(seed, &format!("selftest.{id}"));
        let error = check(&mut rng, scale).err();
        results.push(CheckResult {
            module,
            name,
            error,
        });
    }
    SelftestReport { results }
}
