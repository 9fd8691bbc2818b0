//! Ergodic mutual information `C = ∫ I(γ) f(γ) dγ` of BPSK over a fading
//! channel: exact double quadrature, closed-form approximations, and the
//! truncated series that lead to those closed forms.

#[allow(unused_imports)]
use num_traits::Float;

use crate::bpsk_mi::{AwgnMi, MiApproxConstant, QuadratureSpec};
use crate::channels::{eta_mu_geometry, FadingModel};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, Integral, Tolerance};
use crate::special_fn::ln_gamma_unchecked;

/// How an [`EmiEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExactQuadrature,
    ClosedForm,
    Series,
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactQuadrature => "exact",
            Method::ClosedForm => "approx",
            Method::Series => "series",
            Method::MonteCarlo => "mc",
        }
    }
}

/// An ergodic mutual information value in bits per symbol.
///
/// `error` is the quadrature error estimate, the magnitude of the last series
/// term, or the Monte-Carlo standard error, depending on `method`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmiEstimate {
    pub value: f64,
    pub method: Method,
    pub error: f64,
    pub model: FadingModel,
}

/// `E[g(γ)]` under the model's SNR density, by adaptive quadrature on the
/// half line.
pub fn density_expectation<G: FnMut(f64) -> f64>(
    model: &FadingModel,
    mut g: G,
    tol: Tolerance,
) -> Result<Integral> {
    let model = model.validate()?;
    if let FadingModel::Awgn { snr_bar } = model {
        return Ok(Integral {
            value: g(snr_bar),
            abs_error: 0.0,
            intervals: 0,
        });
    }
    integrate_half_line(
        |gamma| {
            let lp = model.log_pdf_unchecked(gamma);
            if lp == f64::NEG_INFINITY {
                0.0
            } else {
                g(gamma) * lp.exp()
            }
        },
        model.snr_bar(),
        tol,
    )
}

fn outer_tolerance(quad: &QuadratureSpec) -> Tolerance {
    Tolerance {
        rel: quad.outer_rel_tol,
        abs: quad.outer_abs_tol,
        max_subdivisions: quad.max_subdivisions,
    }
}

/// Exact ergodic mutual information by double quadrature.
///
/// Whichever of `C` and `1 − C` is smaller is integrated directly, so the
/// tolerance applies relative to that quantity.
pub fn emi_exact(model: &FadingModel, quad: &QuadratureSpec) -> Result<EmiEstimate> {
    let model = model.validate()?;
    let mi = AwgnMi::new(quad)?;
    emi_exact_with(&model, &mi, quad)
}

pub(crate) fn emi_exact_with(
    model: &FadingModel,
    mi: &AwgnMi,
    quad: &QuadratureSpec,
) -> Result<EmiEstimate> {
    if let FadingModel::Awgn { snr_bar } = *model {
        return Ok(EmiEstimate {
            value: mi.mi(snr_bar)?,
            method: Method::ExactQuadrature,
            error: 0.0,
            model: *model,
        });
    }
    let tol = outer_tolerance(quad);
    let high_snr = 1.0 - model.laplace_unchecked(MiApproxConstant::DEFAULT.get()) > 0.5;
    let (value, error) = if high_snr {
        let r = density_expectation(model, |g| mi.deficit_unchecked(g), tol)?;
        (1.0 - r.value, r.abs_error)
    } else {
        let r = density_expectation(model, |g| 1.0 - mi.deficit_unchecked(g), tol)?;
        (r.value, r.abs_error)
    };
    Ok(EmiEstimate {
        value: value.clamp(0.0, 1.0),
        method: Method::ExactQuadrature,
        error,
        model: *model,
    })
}

/// Closed-form approximation `Ĉ = 1 − E[e^{−ϑγ}]` with the default `ϑ`.
pub fn emi_approx(model: &FadingModel) -> Result<EmiEstimate> {
    emi_approx_with(model, MiApproxConstant::DEFAULT)
}

pub fn emi_approx_with(model: &FadingModel, vartheta: MiApproxConstant) -> Result<EmiEstimate> {
    let value = 1.0 - model.laplace_at(vartheta.get())?;
    Ok(EmiEstimate {
        value: value.clamp(0.0, 1.0),
        method: Method::ClosedForm,
        error: 0.0,
        model: *model,
    })
}

/// Partial sums of the series that collapse into the Rician, η-μ and κ-μ
/// closed forms: the Poisson-weighted sum for Rician and κ-μ and the
/// negative-binomial sum in `x = H/(h + ϑγ̄/(2μ))` for η-μ. `error` is the
/// magnitude of the last included term.
pub fn emi_series_reference(model: &FadingModel, n_terms: usize) -> Result<EmiEstimate> {
    let model = model.validate()?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter("n_terms must be positive".into()));
    }
    let theta = MiApproxConstant::DEFAULT.get();
    // ln(prefactor) and a closure for ln(term n).
    let (ln_pref, ln_term): (f64, &dyn Fn(f64) -> f64) = match model {
        FadingModel::Rician { k, snr_bar } => {
            let a = theta * snr_bar / (k + 1.0);
            let x = k / (1.0 + a);
            (-k - a.ln_1p(), &move |n: f64| poisson_ln_term(x, n))
        }
        FadingModel::KappaMu { kappa, mu, snr_bar } => {
            let a = theta * snr_bar / (mu * (1.0 + kappa));
            let x = mu * kappa / (1.0 + a);
            (-mu * kappa - mu * a.ln_1p(), &move |n: f64| {
                poisson_ln_term(x, n)
            })
        }
        FadingModel::EtaMu {
            format,
            eta,
            mu,
            snr_bar,
        } => {
            let g = eta_mu_geometry(format, eta)?;
            let b = theta * snr_bar / (2.0 * mu);
            let x = g.cap_h / (g.h + b);
            if x.abs() >= 1.0 {
                return Err(Error::InvalidParameter(alloc::format!(
                    "series ratio |x| = {} must be < 1",
                    x.abs()
                )));
            }
            let ln_x2 = 2.0 * x.abs().ln();
            let ln_gamma_mu = ln_gamma_unchecked(mu);
            (mu * g.h.ln() - 2.0 * mu * (g.h + b).ln(), &move |n: f64| {
                if n == 0.0 {
                    0.0
                } else {
                    ln_gamma_unchecked(mu + n) - ln_gamma_unchecked(n + 1.0) - ln_gamma_mu
                        + n * ln_x2
                }
            })
        }
        _ => {
            return Err(Error::Unsupported {
                operation: "emi_series_reference",
                family: model.family(),
            })
        }
    };
    let mut sum = 0.0;
    let mut last = 0.0;
    for n in 0..n_terms {
        last = (ln_pref + ln_term(n as f64)).exp();
        sum += last;
    }
    Ok(EmiEstimate {
        value: (1.0 - sum).clamp(0.0, 1.0),
        method: Method::Series,
        error: last,
        model,
    })
}

/// ln(x^n / n!), with `0^0 = 1`.
fn poisson_ln_term(x: f64, n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        n * x.ln() - ln_gamma_unchecked(n + 1.0)
    }
}

/// Outcome of [`emi_reduction_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionReport {
    pub model: FadingModel,
    pub limit: FadingModel,
    pub max_discrepancy: f64,
}

/// The special case a generalized model collapses to:
///
/// * Nakagami with `m = 1` and Rician (`K → 0`) reduce to Rayleigh,
/// * κ-μ with `μ = 1` is Rician with `K = κ`; otherwise `κ → 0` gives
///   Nakagami with `m = μ`,
/// * η-μ near `H = 0` is Nakagami with `m = 2μ`; near `|H|/h → 1`
///   (η → 0 or ∞ in Format 1, η → ±1 in Format 2) it is Nakagami with `m = μ`.
pub fn reduction_target(model: &FadingModel) -> Result<FadingModel> {
    let model = model.validate()?;
    let snr_bar = model.snr_bar();
    match model {
        FadingModel::Nakagami { m, .. } if m == 1.0 => Ok(FadingModel::Rayleigh { snr_bar }),
        FadingModel::Rician { .. } => Ok(FadingModel::Rayleigh { snr_bar }),
        FadingModel::KappaMu { kappa, mu, .. } => Ok(if mu == 1.0 {
            FadingModel::Rician { k: kappa, snr_bar }
        } else {
            FadingModel::Nakagami { m: mu, snr_bar }
        }),
        FadingModel::EtaMu {
            format, eta, mu, ..
        } => {
            let g = eta_mu_geometry(format, eta)?;
            let m = if g.cap_h.abs() < 0.5 * g.h {
                2.0 * mu
            } else {
                mu
            };
            Ok(FadingModel::Nakagami { m, snr_bar })
        }
        _ => Err(Error::Unsupported {
            operation: "emi_reduction_check",
            family: model.family(),
        }),
    }
}

/// Mean SNR grid used by [`emi_reduction_check`]: 20 points from −10 to 20 dB.
pub fn reduction_grid() -> impl Iterator<Item = f64> {
    (0..20).map(|i| crate::db_to_linear(-10.0 + 30.0 * i as f64 / 19.0))
}

/// Largest |Ĉ(model) − Ĉ(limit)| over the mean-SNR grid.
pub fn emi_reduction_check(model: &FadingModel) -> Result<ReductionReport> {
    let limit = reduction_target(model)?;
    let mut worst = 0.0f64;
    for snr_bar in reduction_grid() {
        let a = emi_approx(&model.with_snr_bar(snr_bar))?.value;
        let b = emi_approx(&limit.with_snr_bar(snr_bar))?.value;
        worst = worst.max((a - b).abs());
    }
    Ok(ReductionReport {
        model: *model,
        limit,
        max_discrepancy: worst,
    })
}
