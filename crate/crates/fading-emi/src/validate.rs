//! The validation report: every invariant suite over the standard grid, each
//! reduced to one measured quantity compared with a bound.

use std::fmt;

use fading_emi_core::bpsk_mi::mi_awgn_approx_with;
use fading_emi_core::emi::{density_expectation, emi_approx_with};
use fading_emi_core::quadrature::Tolerance;
use fading_emi_core::sampling::ks_distance;
use fading_emi_core::{
    db_to_linear, emi_exact, emi_reduction_check, sample_snr, AwgnMi, EtaMuFormat, FadingModel,
    MiApproxConstant, QuadratureSpec, RngState,
};

use crate::grid;
use crate::sweep::Evaluator;
use crate::{derive_seed, Result};

/// Whether a suite passes when its measurement is below or above the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub metric: &'static str,
    pub value: f64,
    pub bound: f64,
    pub direction: Direction,
}

impl SuiteReport {
    fn new(
        name: &'static str,
        metric: &'static str,
        value: f64,
        bound: f64,
        direction: Direction,
    ) -> Self {
        SuiteReport {
            name,
            metric,
            value,
            bound,
            direction,
        }
    }

    pub fn passed(&self) -> bool {
        match self.direction {
            Direction::AtMost => self.value <= self.bound,
            Direction::AtLeast => self.value >= self.bound,
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}={} bound={} {}",
            self.name,
            self.metric,
            self.value,
            self.bound,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub quad: QuadratureSpec,
    pub seed: u64,
    /// Monte-Carlo samples per grid point in the agreement suite.
    pub mc_samples: usize,
    /// Samples per model in the Kolmogorov–Smirnov suite.
    pub ks_samples: usize,
    /// Exponent of the approximation under test.
    pub vartheta: MiApproxConstant,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            quad: QuadratureSpec::default(),
            seed: 1,
            mc_samples: 100_000,
            ks_samples: 100_000,
            vartheta: MiApproxConstant::DEFAULT,
        }
    }
}

fn normalization_tolerance() -> Tolerance {
    Tolerance {
        rel: 1e-11,
        abs: 1e-14,
        max_subdivisions: 4000,
    }
}

/// Largest |∫f − 1| over the grid models at every grid SNR.
pub fn pdf_normalization() -> Result<SuiteReport> {
    let mut worst = 0.0f64;
    for (model, _) in grid::points() {
        let total = density_expectation(&model, |_| 1.0, normalization_tolerance())?.value;
        worst = worst.max((total - 1.0).abs());
    }
    Ok(SuiteReport::new(
        "pdf_normalization",
        "max_abs_err",
        worst,
        1e-6,
        Direction::AtMost,
    ))
}

/// Largest |Ĉ − (1 − ∫e^{−ϑγ}f)| with the integral done numerically.
pub fn laplace_consistency(vartheta: MiApproxConstant) -> Result<SuiteReport> {
    let mut worst = 0.0f64;
    let s = vartheta.get();
    for (model, _) in grid::points() {
        let numeric =
            density_expectation(&model, |g| (-s * g).exp(), normalization_tolerance())?.value;
        let closed = emi_approx_with(&model, vartheta)?.value;
        worst = worst.max((closed - (1.0 - numeric)).abs());
    }
    Ok(SuiteReport::new(
        "laplace_consistency",
        "max_abs_err",
        worst,
        1e-6,
        Direction::AtMost,
    ))
}

/// Reduction cases and the bound each must meet.
pub fn reduction_cases() -> Vec<(FadingModel, f64)> {
    let s = 1.0;
    vec![
        (FadingModel::Nakagami { m: 1.0, snr_bar: s }, 1e-12),
        (
            FadingModel::KappaMu {
                kappa: 0.5,
                mu: 1.0,
                snr_bar: s,
            },
            1e-12,
        ),
        (
            FadingModel::KappaMu {
                kappa: 4.0,
                mu: 1.0,
                snr_bar: s,
            },
            1e-12,
        ),
        (
            FadingModel::Rician {
                k: 1e-9,
                snr_bar: s,
            },
            1e-6,
        ),
        (
            FadingModel::KappaMu {
                kappa: 1e-9,
                mu: 0.5,
                snr_bar: s,
            },
            1e-6,
        ),
        (
            FadingModel::KappaMu {
                kappa: 1e-9,
                mu: 2.5,
                snr_bar: s,
            },
            1e-6,
        ),
        (
            FadingModel::EtaMu {
                format: EtaMuFormat::Format1,
                eta: 1.0 - 1e-6,
                mu: 0.7,
                snr_bar: s,
            },
            1e-4,
        ),
        (
            FadingModel::EtaMu {
                format: EtaMuFormat::Format1,
                eta: 1e-6,
                mu: 0.7,
                snr_bar: s,
            },
            1e-4,
        ),
        (
            FadingModel::EtaMu {
                format: EtaMuFormat::Format2,
                eta: 1e-6,
                mu: 1.5,
                snr_bar: s,
            },
            1e-4,
        ),
        (
            FadingModel::EtaMu {
                format: EtaMuFormat::Format2,
                eta: 1.0 - 1e-6,
                mu: 1.5,
                snr_bar: s,
            },
            1e-4,
        ),
        (
            FadingModel::EtaMu {
                format: EtaMuFormat::Format2,
                eta: -1.0 + 1e-6,
                mu: 1.5,
                snr_bar: s,
            },
            1e-4,
        ),
    ]
}

/// Largest discrepancy divided by its bound, so the suite passes at ≤ 1.
pub fn reductions() -> Result<SuiteReport> {
    let mut worst = 0.0f64;
    for (model, bound) in reduction_cases() {
        let r = emi_reduction_check(&model)?;
        worst = worst.max(r.max_discrepancy / bound);
    }
    Ok(SuiteReport::new(
        "reductions",
        "max_err_over_bound",
        worst,
        1.0,
        Direction::AtMost,
    ))
}

/// Largest |I(γ) − (1 − e^{−ϑγ})| over 200 log-spaced γ in [1e-3, 1e3].
pub fn approx_fidelity(quad: &QuadratureSpec, vartheta: MiApproxConstant) -> Result<SuiteReport> {
    let mi = AwgnMi::new(quad)?;
    let mut worst = 0.0f64;
    for e in grid::linspace(-3.0, 3.0, 200) {
        let g = 10f64.powf(e);
        worst = worst.max((mi.mi(g)? - mi_awgn_approx_with(g, vartheta)?).abs());
    }
    Ok(SuiteReport::new(
        "approx_fidelity",
        "max_abs_err",
        worst,
        0.02,
        Direction::AtMost,
    ))
}

/// Largest |Ĉ − C| over the grid.
pub fn approx_vs_exact(quad: &QuadratureSpec, vartheta: MiApproxConstant) -> Result<SuiteReport> {
    let mut worst = 0.0f64;
    for (model, _) in grid::points() {
        let exact = emi_exact(&model, quad)?.value;
        let approx = emi_approx_with(&model, vartheta)?.value;
        worst = worst.max((exact - approx).abs());
    }
    Ok(SuiteReport::new(
        "approx_vs_exact",
        "max_abs_err",
        worst,
        0.02,
        Direction::AtMost,
    ))
}

/// Largest √n·KS over the grid models (at 0 dB), against the 1 % critical
/// value 1.63, and largest |z| of the empirical Laplace transform at ϑ.
pub fn samplers(n: usize, seed: u64) -> Result<(SuiteReport, SuiteReport)> {
    let theta = MiApproxConstant::DEFAULT.get();
    let mut worst_ks = 0.0f64;
    let mut worst_z = 0.0f64;
    for (i, model) in grid::models().into_iter().enumerate() {
        let batch = sample_snr(&model, n, &mut RngState::new(seed, i as u64))?;
        worst_ks = worst_ks.max(ks_distance(&batch)? * (n as f64).sqrt());
        let (mut mean, mut m2) = (0.0, 0.0);
        for (j, g) in batch.snr_samples.iter().enumerate() {
            let x = (-theta * g).exp();
            let d = x - mean;
            mean += d / (j + 1) as f64;
            m2 += d * (x - mean);
        }
        let stderr = (m2 / (n as f64 - 1.0) / n as f64).sqrt();
        worst_z = worst_z.max((mean - model.laplace_at(theta)?).abs() / stderr);
    }
    Ok((
        SuiteReport::new("ks", "max_sqrt_n_stat", worst_ks, 1.63, Direction::AtMost),
        SuiteReport::new(
            "empirical_laplace",
            "max_abs_z",
            worst_z,
            4.0,
            Direction::AtMost,
        ),
    ))
}

/// Fraction of grid points where |MC − exact| ≤ 3 standard errors.
pub fn mc_agreement(eval: &Evaluator, n: usize, seed: u64) -> Result<SuiteReport> {
    let points = grid::points();
    let mut hits = 0usize;
    for (i, (model, _)) in points.iter().enumerate() {
        let exact = emi_exact(model, &eval.quad)?.value;
        let mc = eval.mc.run(model, n, derive_seed(seed, i as u64))?;
        if (mc.value - exact).abs() <= 3.0 * mc.error {
            hits += 1;
        }
    }
    Ok(SuiteReport::new(
        "mc_agreement",
        "fraction_within_3sigma",
        hits as f64 / points.len() as f64,
        0.99,
        Direction::AtLeast,
    ))
}

/// |Ĉ − (1 − e^{−ϑ})| at unit mean SNR for Nakagami m = 1e4 and Rician K = 1e4.
pub fn awgn_trend(vartheta: MiApproxConstant) -> Result<SuiteReport> {
    let target = mi_awgn_approx_with(1.0, vartheta)?;
    let snr_bar = db_to_linear(0.0);
    let mut worst = 0.0f64;
    for model in [
        FadingModel::Nakagami { m: 1e4, snr_bar },
        FadingModel::Rician { k: 1e4, snr_bar },
    ] {
        worst = worst.max((emi_approx_with(&model, vartheta)?.value - target).abs());
    }
    Ok(SuiteReport::new(
        "awgn_trend",
        "max_abs_err",
        worst,
        1e-3,
        Direction::AtMost,
    ))
}

/// Runs every suite in order, calling `report` as each one finishes.
pub fn run_all(
    opts: &ValidateOptions,
    mut report: impl FnMut(&SuiteReport),
) -> Result<Vec<SuiteReport>> {
    let eval = Evaluator::new(opts.quad)?;
    let mut out = Vec::new();
    let mut push = |r: SuiteReport| {
        report(&r);
        out.push(r);
    };
    push(pdf_normalization()?);
    push(laplace_consistency(opts.vartheta)?);
    push(reductions()?);
    push(approx_fidelity(&opts.quad, opts.vartheta)?);
    push(approx_vs_exact(&opts.quad, opts.vartheta)?);
    let (ks, lap) = samplers(opts.ks_samples, opts.seed)?;
    push(ks);
    push(lap);
    push(mc_agreement(&eval, opts.mc_samples, opts.seed)?);
    push(awgn_trend(opts.vartheta)?);
    Ok(out)
}
