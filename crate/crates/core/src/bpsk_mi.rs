//! Mutual information of equiprobable BPSK over an AWGN channel.
//!
//! With `Y ~ N(2γ, 4γ)` the log-likelihood ratio of the transmitted bit,
//!
//! ```text
//! I(γ) = 1 − E[log2(1 + e^{−Y})].
//! ```
//!
//! Folding the expectation onto `y > 0` with the symmetry
//! `φ(−y) = e^{−y} φ(y)` of the LLR density gives
//!
//! ```text
//! 1 − I(γ) = (1/ln 2) ∫₀^∞ [ y e^{−y} + ln(1 + e^{−y})(1 + e^{−y}) ] φ(y) dy
//! ```
//!
//! whose integrand is positive and smooth, so the deficit `1 − I(γ)` is
//! obtained with full relative accuracy even when it is far below machine
//! epsilon. The integral is evaluated with composite Gauss–Legendre panels.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, LOG2_E, PI};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// The exponent `ϑ` of the approximation `I(γ) ≈ 1 − e^{−ϑγ}`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MiApproxConstant(f64);

impl MiApproxConstant {
    pub const DEFAULT: MiApproxConstant = MiApproxConstant(0.6507);

    pub fn new(vartheta: f64) -> Result<Self> {
        if vartheta.is_finite() && vartheta > 0.0 {
            Ok(MiApproxConstant(vartheta))
        } else {
            Err(Error::domain("vartheta", vartheta, "vartheta > 0"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for MiApproxConstant {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Node counts and tolerances for the exact mutual-information integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel of the inner (LLR) integral.
    pub inner_nodes: usize,
    /// Relative tolerance of the outer integral over the SNR density.
    pub outer_rel_tol: f64,
    pub outer_abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            inner_nodes: 16,
            outer_rel_tol: 1e-8,
            outer_abs_tol: 1e-15,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(self) -> Result<Self> {
        if self.inner_nodes < 16 {
            return Err(Error::InvalidParameter(alloc::format!(
                "inner_nodes must be >= 16 (got {})",
                self.inner_nodes
            )));
        }
        for (name, tol) in [
            ("outer_rel_tol", self.outer_rel_tol),
            ("outer_abs_tol", self.outer_abs_tol),
        ] {
            if !(tol > 0.0 && tol <= 1e-3) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "{name} must lie in (0, 1e-3] (got {tol})"
                )));
            }
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be positive".into(),
            ));
        }
        Ok(self)
    }
}

/// `log2(1 + e^x)` without overflow or loss of the tiny tail.
pub fn log2_one_plus_exp(x: f64) -> f64 {
    if x > 36.0 {
        x * LOG2_E + (-x).exp().ln_1p() * LOG2_E
    } else if x < -36.0 {
        x.exp() * LOG2_E
    } else {
        x.exp().ln_1p() * LOG2_E
    }
}

fn check_snr(gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma < 0.0 {
        Err(Error::domain("gamma", gamma, "gamma >= 0"))
    } else {
        Ok(())
    }
}

/// Exact BPSK mutual information evaluator holding its quadrature rule.
#[derive(Debug, Clone)]
pub struct AwgnMi {
    rule: GaussLegendre,
}

/// Folded LLR integrand beyond which the contribution is below 1e-16 relative.
const LLR_CUTOFF: f64 = 90.0;

impl AwgnMi {
    pub fn new(quad: &QuadratureSpec) -> Result<Self> {
        let quad = quad.validate()?;
        Ok(AwgnMi {
            rule: GaussLegendre::new(quad.inner_nodes),
        })
    }

    /// `1 − I(γ)`, accurate relative to itself.
    pub fn deficit(&self, gamma: f64) -> Result<f64> {
        check_snr(gamma)?;
        Ok(self.deficit_unchecked(gamma))
    }

    pub(crate) fn deficit_unchecked(&self, gamma: f64) -> f64 {
        if gamma == 0.0 {
            return 1.0;
        }
        if gamma.is_infinite() {
            return 0.0;
        }
        let mean = 2.0 * gamma;
        let sigma = 2.0 * gamma.sqrt();
        let two_var = 8.0 * gamma;
        let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
        let upper = (mean + 9.0 * sigma).min(LLR_CUTOFF);
        let width = sigma.min(2.0);
        let panels = (upper / width).ceil().max(1.0) as usize;
        let step = upper / panels as f64;

        let integrand = |y: f64| {
            let e = (-y).exp();
            let g = y * e + e.ln_1p() * (1.0 + e);
            let d = y - mean;
            g * (-d * d / two_var).exp()
        };
        let mut acc = 0.0;
        for p in 0..panels {
            let a = p as f64 * step;
            acc += self.rule.integrate(integrand, a, a + step);
        }
        (acc * norm / LN_2).clamp(0.0, 1.0)
    }

    /// `I(γ)` in bits, clamped to `[0, 1]`.
    pub fn mi(&self, gamma: f64) -> Result<f64> {
        Ok(1.0 - self.deficit(gamma)?)
    }
}

/// Exact BPSK mutual information `I(γ)` over AWGN, in bits per symbol.
pub fn mi_awgn_exact(gamma: f64, quad: &QuadratureSpec) -> Result<f64> {
    AwgnMi::new(quad)?.mi(gamma)
}

/// `1 − e^{−ϑγ}` with the default `ϑ`.
pub fn mi_awgn_approx(gamma: f64) -> Result<f64> {
    mi_awgn_approx_with(gamma, MiApproxConstant::DEFAULT)
}

pub fn mi_awgn_approx_with(gamma: f64, vartheta: MiApproxConstant) -> Result<f64> {
    check_snr(gamma)?;
    Ok(-(-vartheta.0 * gamma).exp_m1())
}

/// Piecewise-Chebyshev interpolant of `ln(1 − I(γ))` in `s = √γ`, used where
/// millions of evaluations are needed (Monte-Carlo averaging). Relative error
/// of the deficit stays near 1e-12 across the table.
#[derive(Debug, Clone)]
pub struct MiTable {
    coeffs: Vec<[f64; TABLE_DEGREE + 1]>,
}

const TABLE_DEGREE: usize = 16;
const TABLE_PANEL: f64 = 0.25;
/// √γ beyond which the deficit is below 1e-280 and is reported as zero.
const TABLE_S_MAX: f64 = 36.0;

impl MiTable {
    pub fn new(exact: &AwgnMi) -> Self {
        let panels = (TABLE_S_MAX / TABLE_PANEL) as usize;
        let n = TABLE_DEGREE + 1;
        let nodes: Vec<f64> = (0..n)
            .map(|k| (PI * (k as f64 + 0.5) / n as f64).cos())
            .collect();
        let mut coeffs = Vec::with_capacity(panels);
        let mut values = [0.0; TABLE_DEGREE + 1];
        for p in 0..panels {
            let lo = p as f64 * TABLE_PANEL;
            for (v, &t) in values.iter_mut().zip(&nodes) {
                let s = lo + 0.5 * TABLE_PANEL * (t + 1.0);
                *v = exact.deficit_unchecked(s * s).ln();
            }
            let mut c = [0.0; TABLE_DEGREE + 1];
            for (j, cj) in c.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (k, v) in values.iter().enumerate() {
                    acc += v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos();
                }
                *cj = 2.0 * acc / n as f64;
            }
            c[0] *= 0.5;
            coeffs.push(c);
        }
        MiTable { coeffs }
    }

    /// Interpolated `1 − I(γ)`; `γ` must be nonnegative.
    pub fn deficit(&self, gamma: f64) -> f64 {
        debug_assert!(gamma >= 0.0);
        let s = gamma.sqrt();
        if s >= TABLE_S_MAX {
            return 0.0;
        }
        let idx = ((s / TABLE_PANEL) as usize).min(self.coeffs.len() - 1);
        let lo = idx as f64 * TABLE_PANEL;
        let t = 2.0 * (s - lo) / TABLE_PANEL - 1.0;
        let c = &self.coeffs[idx];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        (t * b1 - b2 + c[0]).exp().min(1.0)
    }

    pub fn mi(&self, gamma: f64) -> f64 {
        1.0 - self.deficit(gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log2_one_plus_exp_regimes() {
        assert_eq!(log2_one_plus_exp(0.0), 1.0);
        assert!(log2_one_plus_exp(-745.0) < 1e-300);
        assert!(log2_one_plus_exp(-745.0) >= 0.0);
        assert_relative_eq!(
            log2_one_plus_exp(100.0),
            100.0 * LOG2_E,
            max_relative = 1e-15
        );
        // continuity at the regime seams
        for &x in &[-36.0, 36.0] {
            let below = log2_one_plus_exp(x - 1e-9);
            let above = log2_one_plus_exp(x + 1e-9);
            assert_relative_eq!(below, above, max_relative = 1e-8);
        }
    }

    #[test]
    fn approx_values() {
        assert_eq!(mi_awgn_approx(0.0).unwrap(), 0.0);
        assert_relative_eq!(
            mi_awgn_approx(1.0).unwrap(),
            1.0 - (-0.6507f64).exp(),
            max_relative = 1e-15
        );
        assert!((1.0 - mi_awgn_approx(100.0).unwrap()) < 1e-28);
        assert!(mi_awgn_approx(-1.0).is_err());
    }

    #[test]
    fn exact_limits() {
        let q = QuadratureSpec::default();
        assert_eq!(mi_awgn_exact(0.0, &q).unwrap(), 0.0);
        assert!((1.0 - mi_awgn_exact(30.0, &q).unwrap()) < 1e-6);
        assert!(mi_awgn_exact(-0.1, &q).is_err());
    }

    #[test]
    fn rejects_bad_quadrature_spec() {
        let mut q = QuadratureSpec::default();
        q.inner_nodes = 8;
        assert!(AwgnMi::new(&q).is_err());
        let mut q = QuadratureSpec::default();
        q.outer_rel_tol = 0.1;
        assert!(q.validate().is_err());
        assert!(MiApproxConstant::new(0.0).is_err());
    }

    #[test]
    fn table_tracks_direct_evaluation() {
        let exact = AwgnMi::new(&QuadratureSpec::default()).unwrap();
        let table = MiTable::new(&exact);
        let mut g = 1e-6;
        while g < 1200.0 {
            let d = exact.deficit(g).unwrap();
            let t = table.deficit(g);
            assert!(((t - d) / d).abs() < 1e-11, "gamma={g}: {t} vs {d}");
            g *= 1.37;
        }
        assert_relative_eq!(table.deficit(0.0), 1.0, max_relative = 1e-13);
        assert_eq!(table.deficit(2000.0), 0.0);
    }
}
