//! Fading models, their SNR densities and the Laplace transforms
//! `E[e^{−sγ}]` of those densities.

use core::f64::consts::{LN_2, PI};
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::special_fn::{ln_bessel_i_normalized_unchecked, ln_gamma_unchecked};

/// Correlation convention of the η-μ model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EtaMuFormat {
    /// η is the in-phase/quadrature power ratio, `0 < η < ∞`.
    Format1,
    /// η is the in-phase/quadrature correlation, `−1 < η < 1`.
    Format2,
}

impl EtaMuFormat {
    pub fn number(self) -> u8 {
        match self {
            EtaMuFormat::Format1 => 1,
            EtaMuFormat::Format2 => 2,
        }
    }
}

/// The `(h, H)` pair of the η-μ density. Both formats satisfy
/// `h² − H² = h` and `h > |H|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub h: f64,
    pub cap_h: f64,
}

/// `|H| / h` below which the η-μ density is evaluated as its Nakagami limit.
pub const ETA_MU_DEGENERATE_RATIO: f64 = 1e-8;

/// Maps η to `(h, H)` for the given format.
pub fn eta_mu_geometry(format: EtaMuFormat, eta: f64) -> Result<Geometry> {
    let (h, cap_h) = match format {
        EtaMuFormat::Format1 => {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "eta out of range for Format 1: need 0 < eta < inf (got {eta})"
                )));
            }
            ((2.0 + 1.0 / eta + eta) / 4.0, (1.0 / eta - eta) / 4.0)
        }
        EtaMuFormat::Format2 => {
            if !(eta > -1.0 && eta < 1.0) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "eta out of range for Format 2: need -1 < eta < 1 (got {eta})"
                )));
            }
            let d = 1.0 - eta * eta;
            (1.0 / d, eta / d)
        }
    };
    if !(h.is_finite() && h > cap_h.abs()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "eta = {eta} gives a degenerate geometry (h = {h}, H = {cap_h})"
        )));
    }
    Ok(Geometry { h, cap_h })
}

/// A fading channel family with its parameters and mean SNR `snr_bar`
/// (linear scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    Awgn {
        snr_bar: f64,
    },
    Rayleigh {
        snr_bar: f64,
    },
    Nakagami {
        m: f64,
        snr_bar: f64,
    },
    Rician {
        k: f64,
        snr_bar: f64,
    },
    EtaMu {
        format: EtaMuFormat,
        eta: f64,
        mu: f64,
        snr_bar: f64,
    },
    KappaMu {
        kappa: f64,
        mu: f64,
        snr_bar: f64,
    },
}

impl FadingModel {
    pub fn snr_bar(&self) -> f64 {
        match *self {
            FadingModel::Awgn { snr_bar }
            | FadingModel::Rayleigh { snr_bar }
            | FadingModel::Nakagami { snr_bar, .. }
            | FadingModel::Rician { snr_bar, .. }
            | FadingModel::EtaMu { snr_bar, .. }
            | FadingModel::KappaMu { snr_bar, .. } => snr_bar,
        }
    }

    /// Same family and shape parameters at another mean SNR.
    pub fn with_snr_bar(mut self, value: f64) -> Self {
        match &mut self {
            FadingModel::Awgn { snr_bar }
            | FadingModel::Rayleigh { snr_bar }
            | FadingModel::Nakagami { snr_bar, .. }
            | FadingModel::Rician { snr_bar, .. }
            | FadingModel::EtaMu { snr_bar, .. }
            | FadingModel::KappaMu { snr_bar, .. } => *snr_bar = value,
        }
        self
    }

    /// Short lowercase family tag, as used on the command line.
    pub fn family(&self) -> &'static str {
        match self {
            FadingModel::Awgn { .. } => "awgn",
            FadingModel::Rayleigh { .. } => "rayleigh",
            FadingModel::Nakagami { .. } => "nakagami",
            FadingModel::Rician { .. } => "rician",
            FadingModel::EtaMu { .. } => "eta-mu",
            FadingModel::KappaMu { .. } => "kappa-mu",
        }
    }

    /// Shape parameters without the mean SNR, e.g. `format=1;eta=0.5;mu=2`.
    pub fn params(&self) -> ParamsDisplay<'_> {
        ParamsDisplay(self)
    }

    /// Checks every parameter constraint and returns the model unchanged.
    pub fn validate(self) -> Result<Self> {
        let snr_bar = self.snr_bar();
        if !(snr_bar.is_finite() && snr_bar > 0.0) {
            return Err(invalid(alloc::format!(
                "snr_bar must be > 0 (got {snr_bar})"
            )));
        }
        match self {
            FadingModel::Awgn { .. } | FadingModel::Rayleigh { .. } => {}
            FadingModel::Nakagami { m, .. } => {
                if !(m.is_finite() && m >= 0.5) {
                    return Err(invalid(alloc::format!("m must be ≥ 0.5 (got {m})")));
                }
            }
            FadingModel::Rician { k, .. } => {
                if !(k.is_finite() && k >= 0.0) {
                    return Err(invalid(alloc::format!("K must be ≥ 0 (got {k})")));
                }
            }
            FadingModel::EtaMu {
                format, eta, mu, ..
            } => {
                check_mu(mu)?;
                eta_mu_geometry(format, eta)?;
            }
            FadingModel::KappaMu { kappa, mu, .. } => {
                check_mu(mu)?;
                if !(kappa.is_finite() && kappa >= 0.0) {
                    return Err(invalid(alloc::format!("kappa must be ≥ 0 (got {kappa})")));
                }
            }
        }
        Ok(self)
    }

    /// `(h, H)` for η-μ models.
    pub fn geometry(&self) -> Option<Geometry> {
        match *self {
            FadingModel::EtaMu { format, eta, .. } => eta_mu_geometry(format, eta).ok(),
            _ => None,
        }
    }

    /// Natural log of the SNR density at `gamma`. At `gamma = 0` the limit
    /// value is returned (possibly ±∞).
    pub fn log_pdf(&self, gamma: f64) -> Result<f64> {
        self.validate()?;
        if gamma.is_nan() || gamma < 0.0 {
            return Err(Error::domain("gamma", gamma, "gamma >= 0"));
        }
        if let FadingModel::Awgn { .. } = self {
            return Err(Error::Unsupported {
                operation: "log_pdf",
                family: "awgn",
            });
        }
        Ok(self.log_pdf_unchecked(gamma))
    }

    /// Density without validation; callers guarantee a validated, non-AWGN
    /// model and `gamma ≥ 0`.
    pub(crate) fn log_pdf_unchecked(&self, gamma: f64) -> f64 {
        match *self {
            FadingModel::Awgn { .. } => f64::NAN,
            FadingModel::Rayleigh { snr_bar } => -snr_bar.ln() - gamma / snr_bar,
            FadingModel::Nakagami { m, snr_bar } => ln_gamma_density(m, m / snr_bar, gamma),
            FadingModel::Rician { k, snr_bar } => ln_kappa_mu(k, 1.0, snr_bar, gamma),
            FadingModel::KappaMu { kappa, mu, snr_bar } => ln_kappa_mu(kappa, mu, snr_bar, gamma),
            FadingModel::EtaMu {
                format,
                eta,
                mu,
                snr_bar,
            } => {
                let g = match eta_mu_geometry(format, eta) {
                    Ok(g) => g,
                    Err(_) => return f64::NAN,
                };
                ln_eta_mu(g, mu, snr_bar, gamma)
            }
        }
    }

    /// The SNR density `f(γ)`.
    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        Ok(self.log_pdf(gamma)?.exp())
    }

    /// `E[e^{−sγ}]` in closed form.
    pub fn laplace_at(&self, s: f64) -> Result<f64> {
        self.validate()?;
        if s.is_nan() || s < 0.0 {
            return Err(Error::domain("s", s, "s >= 0"));
        }
        Ok(self.laplace_unchecked(s))
    }

    pub(crate) fn laplace_unchecked(&self, s: f64) -> f64 {
        match *self {
            FadingModel::Awgn { snr_bar } => (-s * snr_bar).exp(),
            FadingModel::Rayleigh { snr_bar } => 1.0 / (1.0 + s * snr_bar),
            FadingModel::Nakagami { m, snr_bar } => (-m * (s * snr_bar / m).ln_1p()).exp(),
            FadingModel::Rician { k, snr_bar } => kappa_mu_laplace(k, 1.0, snr_bar, s),
            FadingModel::KappaMu { kappa, mu, snr_bar } => kappa_mu_laplace(kappa, mu, snr_bar, s),
            FadingModel::EtaMu {
                format,
                eta,
                mu,
                snr_bar,
            } => {
                let Ok(Geometry { h, cap_h }) = eta_mu_geometry(format, eta) else {
                    return f64::NAN;
                };
                let b = s * snr_bar / (2.0 * mu);
                // Taylor-expansion condition of the series behind the closed form.
                debug_assert!(cap_h == 0.0 || ((h + b) / cap_h).abs() > 1.0);
                // (h + b)² − H² = h + b(2h + b), using h² − H² = h.
                (-mu * (b * (2.0 * h + b) / h).ln_1p()).exp()
            }
        }
    }
}

fn invalid(msg: alloc::string::String) -> Error {
    Error::InvalidParameter(msg)
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 {
        Ok(())
    } else {
        Err(invalid(alloc::format!("mu must be > 0 (got {mu})")))
    }
}

/// `a·ln(x)` with the convention `0·ln 0 = 0`.
fn xlogy(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * x.ln()
    }
}

/// Log density of a gamma variate with shape `m` and rate `rate`.
fn ln_gamma_density(m: f64, rate: f64, gamma: f64) -> f64 {
    m * rate.ln() - ln_gamma_unchecked(m) + xlogy(m - 1.0, gamma) - rate * gamma
}

/// κ-μ log density, written as
/// `μ^μ (1+κ)^μ / γ̄^μ · γ^{μ−1} e^{−μκ − μ(1+κ)γ/γ̄} · I_{μ−1}(z)/(z/2)^{μ−1}`
/// with `z = 2μ √(κ(1+κ)γ/γ̄)`, so that κ → 0 and γ → 0 stay finite.
fn ln_kappa_mu(kappa: f64, mu: f64, snr_bar: f64, gamma: f64) -> f64 {
    let z = 2.0 * mu * (kappa * (1.0 + kappa) * gamma / snr_bar).sqrt();
    mu * mu.ln() + mu * kappa.ln_1p() - mu * snr_bar.ln() + xlogy(mu - 1.0, gamma)
        - mu * kappa
        - mu * (1.0 + kappa) * gamma / snr_bar
        + ln_bessel_i_normalized_unchecked(mu - 1.0, z)
}

/// η-μ log density, written as
/// `2√π μ^{2μ} h^μ γ^{2μ−1} e^{−2μhγ/γ̄} / (Γ(μ) γ̄^{2μ}) · I_ν(z)/(z/2)^ν`
/// with `ν = μ − 1/2` and `z = 2μ|H|γ/γ̄`. The Bessel factor only depends on
/// `|H|`: `I_ν(z)/H^ν` is even in `H`.
fn ln_eta_mu(g: Geometry, mu: f64, snr_bar: f64, gamma: f64) -> f64 {
    if g.cap_h.abs() < ETA_MU_DEGENERATE_RATIO * g.h {
        let m = 2.0 * mu;
        return ln_gamma_density(m, m / snr_bar, gamma);
    }
    let z = 2.0 * mu * g.cap_h.abs() * gamma / snr_bar;
    LN_2 + 0.5 * PI.ln() + 2.0 * mu * mu.ln() + mu * g.h.ln()
        - ln_gamma_unchecked(mu)
        - 2.0 * mu * snr_bar.ln()
        + xlogy(2.0 * mu - 1.0, gamma)
        - 2.0 * mu * g.h * gamma / snr_bar
        + ln_bessel_i_normalized_unchecked(mu - 0.5, z)
}

fn kappa_mu_laplace(kappa: f64, mu: f64, snr_bar: f64, s: f64) -> f64 {
    let a = s * snr_bar / (mu * (1.0 + kappa));
    // μκ/(1+a) − μκ = −μκ·a/(1+a)
    (-mu * a.ln_1p() - mu * kappa * a / (1.0 + a)).exp()
}

pub struct ParamsDisplay<'a>(&'a FadingModel);

impl fmt::Display for ParamsDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.0 {
            FadingModel::Awgn { .. } | FadingModel::Rayleigh { .. } => Ok(()),
            FadingModel::Nakagami { m, .. } => write!(f, "m={m}"),
            FadingModel::Rician { k, .. } => write!(f, "k={k}"),
            FadingModel::EtaMu {
                format, eta, mu, ..
            } => {
                write!(f, "format={};eta={eta};mu={mu}", format.number())
            }
            FadingModel::KappaMu { kappa, mu, .. } => write!(f, "kappa={kappa};mu={mu}"),
        }
    }
}

impl fmt::Display for FadingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family())?;
        let mut params = alloc::string::String::new();
        fmt::write(&mut params, format_args!("{}", self.params()))?;
        if params.is_empty() {
            write!(f, "{{snr_bar={}}}", self.snr_bar())
        } else {
            write!(f, "{{{};snr_bar={}}}", params, self.snr_bar())
        }
    }
}
