//! Log-gamma and real-order modified Bessel functions of the first kind.
//!
//! Channel densities only ever consume these in scaled or logarithmic form:
//! `I_ν(x)` overflows a double near `x ≈ 709`, while the SNR densities feed it
//! arguments that grow linearly with the instantaneous SNR.
//!
//! The Bessel evaluation uses three regimes:
//!
//! * `x ≤ max(25, 2ν)`: the ascending power series, summed outward from its
//!   largest term in log space,
//! * `x ≥ max(25, ν²)`: the Hankel large-argument expansion,
//! * otherwise: Steed's continued fractions with a Wronskian normalisation
//!   (Temme's method), carried out on `e^{-x}`-scaled quantities.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ζ(k) for k = 2..=30, the Taylor coefficients of ln Γ(1 + z).
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
];

/// Real order of a modified Bessel function, restricted to `ν > −1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu > -1.0 {
            Ok(BesselOrder(nu))
        } else {
            Err(Error::domain("nu", nu, "nu > -1"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BesselOrder {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        BesselOrder::new(nu)
    }
}

/// ln Γ(x) for positive finite `x`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain("x", x, "x > 0 and finite"));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    // Taylor windows around the two zeros of ln Γ keep relative accuracy there.
    if (x - 1.0).abs() <= 0.2 {
        return ln_gamma_1p_small(x - 1.0);
    }
    if (x - 2.0).abs() <= 0.2 {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p_small(z);
    }
    if x >= 10.0 {
        return stirling(x);
    }
    let mut prod = 1.0;
    let mut y = x;
    while y < 10.0 {
        prod *= y;
        y += 1.0;
    }
    stirling(y) - prod.ln()
}

/// ln Γ(1 + z) for |z| ≤ 0.2.
fn ln_gamma_1p_small(z: f64) -> f64 {
    let mut acc = 0.0;
    let mut zk = z;
    for (i, zeta) in ZETA.iter().enumerate() {
        zk *= -z;
        let k = (i + 2) as f64;
        acc += zeta * zk / k;
    }
    -EULER_GAMMA * z - acc
}

fn stirling(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    let series = r
        * (1.0 / 12.0
            + r2 * (-1.0 / 360.0
                + r2 * (1.0 / 1260.0
                    + r2 * (-1.0 / 1680.0
                        + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 * (1.0 / 156.0)))))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

fn check_bessel_args(nu: f64, x: f64) -> Result<()> {
    if !(nu.is_finite() && nu > -1.0) {
        return Err(Error::domain("nu", nu, "nu > -1"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain("x", x, "x >= 0"));
    }
    Ok(())
}

/// `e^{-x} I_ν(x)`.
pub fn bessel_i_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_bessel_args(nu.0, x)?;
    Ok(ln_bessel_i_scaled_unchecked(nu.0, x).exp())
}

/// ln I_ν(x). At `x = 0` this is 0 for `ν = 0` and `−∞` otherwise.
pub fn log_bessel_i(nu: BesselOrder, x: f64) -> Result<f64> {
    check_bessel_args(nu.0, x)?;
    if x == 0.0 {
        return Ok(if nu.0 == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(x + ln_bessel_i_scaled_unchecked(nu.0, x))
}

/// ln [ I_ν(x) / (x/2)^ν ], which stays finite at `x = 0` where it equals
/// `−ln Γ(ν + 1)`. Densities use it to absorb the power prefactor of the
/// Bessel term without forming `0 · ∞`.
pub fn log_bessel_i_normalized(nu: BesselOrder, x: f64) -> Result<f64> {
    check_bessel_args(nu.0, x)?;
    Ok(ln_bessel_i_normalized_unchecked(nu.0, x))
}

pub(crate) fn ln_bessel_i_normalized_unchecked(nu: f64, x: f64) -> f64 {
    if x <= series_limit(nu) {
        ln_series_normalized(nu, x)
    } else {
        x + ln_bessel_i_scaled_unchecked(nu, x) - nu * (0.5 * x).ln()
    }
}

fn series_limit(nu: f64) -> f64 {
    25f64.max(2.0 * nu)
}

pub(crate) fn ln_bessel_i_scaled_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 {
            0.0
        } else if nu > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if x.is_infinite() {
        // e^{-x} I_ν(x) ~ (2πx)^{-1/2}
        return f64::NEG_INFINITY;
    }
    if x <= series_limit(nu) {
        nu * (0.5 * x).ln() + ln_series_normalized(nu, x) - x
    } else if x >= 25f64.max(nu * nu) {
        ln_hankel_scaled(nu, x)
    } else {
        ln_steed_scaled(nu, x)
    }
}

/// ln Σ_k (x²/4)^k / (k! Γ(ν+k+1)), summed outward from the dominant term.
fn ln_series_normalized(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return -ln_gamma_unchecked(nu + 1.0);
    }
    let q = 0.25 * x * x;
    let peak = (0.5 * ((nu * nu + x * x).sqrt() - nu)).floor().max(0.0);
    let ln_peak =
        peak * q.ln() - ln_gamma_unchecked(peak + 1.0) - ln_gamma_unchecked(nu + peak + 1.0);

    let mut sum = 1.0;
    let mut term = 1.0;
    let mut k = peak;
    loop {
        term *= q / ((k + 1.0) * (nu + k + 1.0));
        sum += term;
        k += 1.0;
        if term < 1e-17 * sum {
            break;
        }
    }
    let mut term = 1.0;
    let mut k = peak;
    while k > 0.0 {
        term *= k * (nu + k) / q;
        sum += term;
        k -= 1.0;
        if term < 1e-17 * sum {
            break;
        }
    }
    ln_peak + sum.ln()
}

/// Hankel expansion of e^{-x} I_ν(x) for x ≫ max(1, ν²).
fn ln_hankel_scaled(nu: f64, x: f64) -> f64 {
    let mu4 = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut term: f64 = 1.0;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu4 - odd * odd) / (8.0 * k * x);
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        sum += next;
        term = next;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    // Negative orders differ by (2/π) sin(−νπ) K_{−ν}(x), which is O(e^{-2x}) here.
    sum.ln() - 0.5 * (2.0 * PI * x).ln()
}

/// Temme's method: CF1 for I'_ν/I_ν, downward recurrence to |μ| ≤ 1/2,
/// Steed's CF2 for the scaled K_μ, K_{μ+1}, then the Wronskian.
/// Only reached for ν > 5 and x > 25.
fn ln_steed_scaled(nu: f64, x: f64) -> f64 {
    const EPS: f64 = 1e-16;
    const MAXIT: usize = 1_000_000;
    const FPMIN: f64 = 1e-300;

    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    // CF1, modified Lentz.
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // Downward recurrence for I and I' from ν to μ, with unit start.
    let ril1 = 1.0;
    let mut ril = ril1;
    let mut ripl = h * ril;
    let mut fact = nu * xi;
    let mut l = nl as u64;
    let mut ln_rescale = 0.0;
    while l > 0 {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > 1e250 {
            ril *= 1e-250;
            ripl *= 1e-250;
            ln_rescale += 250.0 * core::f64::consts::LN_10;
        }
        l -= 1;
    }
    let f = ripl / ril;

    // CF2 (Steed), scaled by e^{x}.
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAXIT {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let rkmu = (PI / (2.0 * x)).sqrt() / s;
    let rk1 = rkmu * (mu + x + 0.5 - h) * xi;
    let rkmup = mu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);

    rimu.ln() + ril1.ln() - ril.abs().ln() - ln_rescale
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn order(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    #[test]
    fn ln_gamma_small_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert_eq!(ln_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(ln_gamma(0.5).unwrap(), 0.5 * PI.ln(), max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(5.0).unwrap(), 24f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn ln_gamma_rejects_bad_input() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
        assert!(ln_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn bessel_at_origin() {
        assert_eq!(bessel_i_scaled(order(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i_scaled(order(1.0), 0.0).unwrap(), 0.0);
        assert_eq!(log_bessel_i(order(0.0), 0.0).unwrap(), 0.0);
        assert_eq!(log_bessel_i(order(2.0), 0.0).unwrap(), f64::NEG_INFINITY);
        assert_relative_eq!(
            log_bessel_i_normalized(order(1.5), 0.0).unwrap(),
            -ln_gamma(2.5).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn bessel_half_order_closed_form() {
        // I_{1/2}(x) = sqrt(2/(πx)) sinh x
        let expected = (-1f64).exp() * (2.0 / PI).sqrt() * 1f64.sinh();
        let got = bessel_i_scaled(order(0.5), 1.0).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-13);
        assert_relative_eq!(got, 0.344_98, max_relative = 1e-4);
        assert_relative_eq!(
            log_bessel_i(order(0.5), 1.0).unwrap(),
            1.0 + expected.ln(),
            max_relative = 1e-12
        );
        // I_{-1/2}(x) = sqrt(2/(πx)) cosh x, across the series/asymptotic seam
        for &x in &[0.3, 2.0, 24.9, 25.1, 80.0] {
            let expected = (2.0 / (PI * x)).sqrt() * 0.5 * (1.0 + (-2.0 * x).exp());
            assert_relative_eq!(
                bessel_i_scaled(order(-0.5), x).unwrap(),
                expected,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn bessel_rejects_bad_input() {
        assert!(BesselOrder::new(-1.0).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
        assert!(bessel_i_scaled(order(0.0), -1e-3).is_err());
        assert!(log_bessel_i(order(0.0), f64::NAN).is_err());
    }

    #[test]
    fn bessel_finite_for_huge_arguments() {
        for &x in &[1e3, 1e5, 1e6, 1e8] {
            let v = bessel_i_scaled(order(0.0), x).unwrap();
            assert!(v.is_finite() && v > 0.0);
            assert_relative_eq!(v, 1.0 / (2.0 * PI * x).sqrt(), max_relative = 1e-3);
        }
    }

    #[test]
    fn steed_regime_matches_series_on_overlap() {
        // Both routes are valid on x ∈ (25, 2ν]; compare them directly.
        for &(nu, x) in &[(15.0, 26.0), (40.0, 60.0), (120.5, 200.0), (200.0, 399.0)] {
            let series = nu * (0.5 * x).ln() + ln_series_normalized(nu, x) - x;
            let steed = ln_steed_scaled(nu, x);
            assert!(
                (series - steed).abs() < 1e-11,
                "nu={nu} x={x}: {series} vs {steed}"
            );
        }
    }

    #[test]
    fn steed_regime_matches_hankel_on_overlap() {
        for &(nu, x) in &[(6.0, 40.0), (8.0, 70.0), (12.0, 150.0)] {
            let hankel = ln_hankel_scaled(nu, x);
            let steed = ln_steed_scaled(nu, x);
            assert!(
                (hankel - steed).abs() < 1e-10,
                "nu={nu} x={x}: {hankel} vs {steed}"
            );
        }
    }
}
