//! Figure reproduction and generic sweeps, emitted as CSV documents.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::PathBuf;

use qdil::dilution::{
    coherence_advantage, entanglement_advantage, sweep, thermal_advantage, CoherenceFamily,
};
use qdil::functionals::binary_entropy;
use qdil::qec::{ed_dil_phase_flip, ed_nothing_phase_flip, ed_qec_phase_flip};
use qdil::rates::{ed_correlated_noise, CorrelatedInput};
use qdil::Error;

use crate::config::RunConfig;
use crate::csv::CsvDocument;
use crate::CliError;

/// Correlated-noise pattern distributions of the figS2/figS3 scenarios.
pub const TWO_QUBIT_PATTERNS: [f64; 4] = [0.05, 0.03, 0.26, 0.66];
pub const THREE_QUBIT_PATTERNS: [f64; 8] = [0.06, 0.03, 0.04, 0.01, 0.31, 0.42, 0.05, 0.08];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    FigS2,
    FigS3,
    FigQec,
}

impl FigureName {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            "fig5" => Ok(Self::Fig5),
            "figS2" | "figs2" => Ok(Self::FigS2),
            "figS3" | "figs3" => Ok(Self::FigS3),
            "figQEC" | "figqec" => Ok(Self::FigQec),
            other => Err(CliError::Validation(format!(
                "unknown figure '{other}' (expected fig2|fig3|fig4|fig5|figS2|figS3|figQEC)"
            ))),
        }
    }

    pub fn default_out(&self) -> PathBuf {
        let name = match self {
            Self::Fig2 => "fig2.csv",
            Self::Fig3 => "fig3.csv",
            Self::Fig4 => "fig4.csv",
            Self::Fig5 => "fig5.csv",
            Self::FigS2 => "figS2.csv",
            Self::FigS3 => "figS3.csv",
            Self::FigQec => "figQEC.csv",
        };
        PathBuf::from(name)
    }
}

/// Evaluate a figure and return its CSV document plus the output path.
pub fn run_figure(
    name: FigureName,
    config: &RunConfig,
) -> Result<(CsvDocument, PathBuf), CliError> {
    let doc = match name {
        FigureName::Fig2 => fig2(config)?,
        FigureName::Fig3 => fig3(config)?,
        FigureName::Fig4 => fig4(config)?,
        FigureName::Fig5 => fig5(config)?,
        FigureName::FigS2 => fig_correlated(config, 2, &TWO_QUBIT_PATTERNS, "figS2")?,
        FigureName::FigS3 => fig_correlated(config, 3, &THREE_QUBIT_PATTERNS, "figS3")?,
        FigureName::FigQec => fig_qec(config)?,
    };
    let out = config.out.clone().unwrap_or_else(|| name.default_out());
    Ok((doc, out))
}

/// Grid helper: `n` equally spaced points over `[lo, hi]`, row closure may
/// skip points by returning a Degenerate error.
fn grid_rows(
    doc: &mut CsvDocument,
    lo: f64,
    hi: f64,
    n: usize,
    mut row: impl FnMut(f64) -> Result<Vec<f64>, Error>,
) -> Result<(), CliError> {
    let step = (hi - lo) / (n - 1) as f64;
    for i in 0..n {
        // Pin the endpoints exactly; accumulated rounding must not push the
        // last point outside a closed parameter domain.
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        match row(x) {
            Ok(cells) => doc.push_row(cells),
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(CliError::Numerical(e.to_string())),
        }
    }
    if doc.row_count() == 0 {
        return Err(CliError::Numerical(
            "every grid point was degenerate".into(),
        ));
    }
    Ok(())
}

fn fig2(config: &RunConfig) -> Result<CsvDocument, CliError> {
    let (lo, hi) = config.alpha_range.unwrap_or((1e-3, FRAC_PI_4));
    let mut doc = CsvDocument::new(
        "figure fig2",
        &config.echo(),
        &["alpha", "dilution_rate", "no_dilution_rate"],
    );
    grid_rows(&mut doc, lo, hi, config.grid, |alpha| {
        let (lhs, rhs) = entanglement_advantage(config.lambda, alpha)?;
        Ok(vec![alpha, lhs, rhs])
    })?;
    Ok(doc)
}

fn fig3(config: &RunConfig) -> Result<CsvDocument, CliError> {
    let (lo, hi) = config.alpha_range.unwrap_or((0.01, FRAC_PI_2 - 0.01));
    let mut doc = CsvDocument::new(
        "figure fig3",
        &config.echo(),
        &["alpha", "pure_rate", "mixed_rate", "no_dilution_rate"],
    );
    grid_rows(&mut doc, lo, hi, config.grid, |alpha| {
        let (pure, rhs) = coherence_advantage(config.gamma, alpha, CoherenceFamily::Pure)?;
        let (mixed, _) = coherence_advantage(config.gamma, alpha, CoherenceFamily::Mixed)?;
        Ok(vec![alpha, pure, mixed, rhs])
    })?;
    Ok(doc)
}

fn fig4(config: &RunConfig) -> Result<CsvDocument, CliError> {
    let (lo, hi) = config.q_range.unwrap_or((1e-3, 1.0 - 1e-9));
    let mut doc = CsvDocument::new(
        "figure fig4",
        &config.echo(),
        &["q", "dilution_rate", "no_dilution_rate"],
    );
    grid_rows(&mut doc, lo, hi, config.grid, |q| {
        let (lhs, rhs) = thermal_advantage(config.temperature, config.p, q)?;
        Ok(vec![q, lhs, rhs])
    })?;
    Ok(doc)
}

fn fig5(config: &RunConfig) -> Result<CsvDocument, CliError> {
    // Optimal q as a function of T for the figure's three mixing weights.
    let (lo, hi) = (0.05, 2.0);
    let mixings = [0.5, 0.9, 0.99];
    let mut doc = CsvDocument::new(
        "figure fig5",
        &config.echo(),
        &["T", "qmax_p0.5", "qmax_p0.9", "qmax_p0.99"],
    );
    grid_rows(&mut doc, lo, hi, config.grid, |t| {
        let mut cells = vec![t];
        for &p in &mixings {
            let inner = sweep(1e-3, 1.0, 200, &mut |q| {
                thermal_advantage(t, p, q).map(|(l, _)| (l, 0.0))
            })?;
            cells.push(inner.argmax_param);
        }
        Ok(cells)
    })?;
    Ok(doc)
}

fn fig_correlated(
    config: &RunConfig,
    n: usize,
    patterns: &[f64],
    label: &str,
) -> Result<CsvDocument, CliError> {
    let (lo, hi) = config.alpha_range.unwrap_or((0.01, FRAC_PI_4));
    let singlet_rate = ed_correlated_noise(n, CorrelatedInput::Singlets, patterns)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut doc = CsvDocument::new(
        &format!("figure {label}"),
        &config.echo(),
        &["alpha", "dilution_rate", "no_dilution_rate"],
    );
    grid_rows(&mut doc, lo, hi, config.grid, |alpha| {
        let cost = binary_entropy(alpha.cos().powi(2));
        if cost <= qdil::tol::DEGENERATE_TOL {
            return Err(Error::Degenerate("resource-free dilution state".into()));
        }
        let diluted = ed_correlated_noise(n, CorrelatedInput::Diluted(alpha), patterns)?;
        Ok(vec![alpha, diluted / cost, singlet_rate])
    })?;
    Ok(doc)
}

fn fig_qec(config: &RunConfig) -> Result<CsvDocument, CliError> {
    let (lo, hi) = config.q_range.unwrap_or((1e-3, 0.499));
    let mut doc = CsvDocument::new(
        "figure figQEC",
        &config.echo(),
        &["p", "ed_qec", "ed_dilution", "ed_nothing"],
    );
    grid_rows(&mut doc, lo, hi, config.grid, |p| {
        Ok(vec![
            p,
            ed_qec_phase_flip(p),
            ed_dil_phase_flip(p, config.alpha),
            ed_nothing_phase_flip(p),
        ])
    })?;
    Ok(doc)
}

/// Named rate families for the generic sweep command.
#[derive(Clone, Copy, Debug)]
pub enum SweepSpec {
    Entanglement,
    CoherencePure,
    CoherenceMixed,
    Thermal,
    Purity,
}

impl SweepSpec {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "entanglement" => Ok(Self::Entanglement),
            "coherence-pure" => Ok(Self::CoherencePure),
            "coherence-mixed" => Ok(Self::CoherenceMixed),
            "thermal" => Ok(Self::Thermal),
            "purity" => Ok(Self::Purity),
            other => Err(CliError::Validation(format!(
                "unknown sweep spec '{other}' \
                 (expected entanglement|coherence-pure|coherence-mixed|thermal|purity)"
            ))),
        }
    }

    pub fn default_out(&self) -> PathBuf {
        let name = match self {
            Self::Entanglement => "sweep_entanglement.csv",
            Self::CoherencePure => "sweep_coherence_pure.csv",
            Self::CoherenceMixed => "sweep_coherence_mixed.csv",
            Self::Thermal => "sweep_thermal.csv",
            Self::Purity => "sweep_purity.csv",
        };
        PathBuf::from(name)
    }
}

/// Sweep a named rate family over an explicit parameter range. The argmax
/// metadata lands in the CSV comments.
pub fn run_sweep(
    spec: SweepSpec,
    range: (f64, f64),
    config: &RunConfig,
) -> Result<(CsvDocument, PathBuf), CliError> {
    let (lo, hi) = range;
    let mut eval: Box<dyn FnMut(f64) -> qdil::Result<(f64, f64)>> = match spec {
        SweepSpec::Entanglement => {
            let lambda = config.lambda;
            Box::new(move |a| entanglement_advantage(lambda, a))
        }
        SweepSpec::CoherencePure => {
            let gamma = config.gamma;
            Box::new(move |a| coherence_advantage(gamma, a, CoherenceFamily::Pure))
        }
        SweepSpec::CoherenceMixed => {
            let gamma = config.gamma;
            Box::new(move |a| coherence_advantage(gamma, a, CoherenceFamily::Mixed))
        }
        SweepSpec::Thermal => {
            let (t, p) = (config.temperature, config.p);
            Box::new(move |q| thermal_advantage(t, p, q))
        }
        SweepSpec::Purity => {
            let channel = qdil::channels::Depolarizing::new(config.p, 2)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let baseline = qdil::rates::purity_rate(
                &qdil::states::diagonal_qubit(0.0)
                    .map_err(|e| CliError::Numerical(e.to_string()))?,
                &channel,
            )
            .map_err(|e| CliError::Numerical(e.to_string()))?;
            Box::new(move |q| {
                let mu = qdil::states::diagonal_qubit(q)?;
                let rate = qdil::rates::purity_rate(&mu, &channel)?;
                Ok((rate, baseline))
            })
        }
    };

    let result = sweep(lo, hi, config.grid, &mut *eval).map_err(|e| match e {
        Error::InvalidArgument(msg) => CliError::Validation(msg),
        other => CliError::Numerical(other.to_string()),
    })?;

    let spec_name = format!("{spec:?}").to_lowercase();
    let mut doc = CsvDocument::new(
        &format!("sweep {spec_name} range {lo}:{hi}"),
        &format!(
            "{} argmax={} max_rate={}",
            config.echo(),
            crate::csv::format_sig(result.argmax_param),
            crate::csv::format_sig(result.max_rate)
        ),
        &["parameter", "dilution_rate", "no_dilution_rate"],
    );
    for pt in &result.points {
        doc.push_row(vec![pt.param, pt.lhs, pt.rhs]);
    }
    let out = config.out.clone().unwrap_or_else(|| spec.default_out());
    Ok((doc, out))
}
