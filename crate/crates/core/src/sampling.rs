//! Instantaneous-SNR variates for every fading family, a Kolmogorov–Smirnov
//! check against the analytic densities, and the Monte-Carlo EMI estimator.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Open01, Poisson, StandardNormal};

use crate::bpsk_mi::{AwgnMi, MiTable, QuadratureSpec};
use crate::channels::{eta_mu_geometry, FadingModel};
use crate::emi::{EmiEstimate, Method};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// A seeded random stream. Equal `(seed, stream)` pairs yield identical
/// sequences, and distinct streams of one seed do not overlap.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngState { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    fn uniform(&mut self) -> f64 {
        Open01.sample(&mut self.rng)
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Draws of instantaneous SNR (linear) together with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub model: FadingModel,
    pub seed: u64,
    pub snr_samples: Vec<f64>,
}

/// One gamma(shape, scale) draw.
pub fn sample_gamma_variate(shape: f64, scale: f64, rng: &mut RngState) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(Error::domain("shape", shape, "shape > 0"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain("scale", scale, "scale > 0"));
    }
    Ok(GammaSampler::new(shape).draw(rng) * scale)
}

/// Marsaglia–Tsang squeeze sampler for unit-scale gamma variates; shapes
/// below one are boosted by one and corrected with `U^{1/shape}`.
#[derive(Debug, Clone, Copy)]
struct GammaSampler {
    d: f64,
    c: f64,
    inv_shape: Option<f64>,
}

impl GammaSampler {
    fn new(shape: f64) -> Self {
        let (a, inv_shape) = if shape < 1.0 {
            (shape + 1.0, Some(1.0 / shape))
        } else {
            (shape, None)
        };
        let d = a - 1.0 / 3.0;
        GammaSampler {
            d,
            c: 1.0 / (9.0 * d).sqrt(),
            inv_shape,
        }
    }

    fn draw(&self, rng: &mut RngState) -> f64 {
        let g = loop {
            let x = rng.normal();
            let v = 1.0 + self.c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = rng.uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + self.d * (1.0 - v + v.ln()) {
                break self.d * v;
            }
        };
        match self.inv_shape {
            Some(inv) => g * (rng.uniform().ln() * inv).exp(),
            None => g,
        }
    }
}

/// Precomputed per-model sampler.
#[derive(Debug, Clone)]
enum SnrSampler {
    Constant(f64),
    Rayleigh {
        half_snr: f64,
    },
    Gamma {
        gamma: GammaSampler,
        scale: f64,
    },
    Rician {
        a: f64,
        c: f64,
    },
    KappaMu {
        mu: f64,
        poisson: Option<Poisson<f64>>,
        c: f64,
    },
    EtaMu {
        gamma: GammaSampler,
        scale1: f64,
        scale2: f64,
    },
}

impl SnrSampler {
    fn new(model: &FadingModel) -> Result<Self> {
        let model = model.validate()?;
        Ok(match model {
            FadingModel::Awgn { snr_bar } => SnrSampler::Constant(snr_bar),
            FadingModel::Rayleigh { snr_bar } => SnrSampler::Rayleigh {
                half_snr: 0.5 * snr_bar,
            },
            FadingModel::Nakagami { m, snr_bar } => SnrSampler::Gamma {
                gamma: GammaSampler::new(m),
                scale: snr_bar / m,
            },
            FadingModel::Rician { k, snr_bar } => SnrSampler::Rician {
                a: (2.0 * k).sqrt(),
                c: snr_bar / (2.0 * (k + 1.0)),
            },
            FadingModel::KappaMu { kappa, mu, snr_bar } => {
                let lambda = mu * kappa;
                let poisson =
                    if lambda > 0.0 {
                        Some(Poisson::new(lambda).map_err(|_| {
                            Error::domain("mu*kappa", lambda, "finite Poisson mean")
                        })?)
                    } else {
                        None
                    };
                SnrSampler::KappaMu {
                    mu,
                    poisson,
                    c: snr_bar / (2.0 * mu * (1.0 + kappa)),
                }
            }
            FadingModel::EtaMu {
                format,
                eta,
                mu,
                snr_bar,
            } => {
                let g = eta_mu_geometry(format, eta)?;
                let base = snr_bar / (2.0 * mu);
                SnrSampler::EtaMu {
                    gamma: GammaSampler::new(mu),
                    scale1: base / (g.h - g.cap_h),
                    scale2: base / (g.h + g.cap_h),
                }
            }
        })
    }

    fn draw(&self, rng: &mut RngState) -> f64 {
        match *self {
            SnrSampler::Constant(v) => v,
            SnrSampler::Rayleigh { half_snr } => {
                let (x, y) = (rng.normal(), rng.normal());
                half_snr * (x * x + y * y)
            }
            SnrSampler::Gamma { gamma, scale } => gamma.draw(rng) * scale,
            SnrSampler::Rician { a, c } => {
                let (x, y) = (rng.normal() + a, rng.normal());
                c * (x * x + y * y)
            }
            SnrSampler::KappaMu { mu, ref poisson, c } => {
                let n = poisson.as_ref().map_or(0.0, |p| p.sample(&mut rng.rng));
                GammaSampler::new(mu + n).draw(rng) * 2.0 * c
            }
            SnrSampler::EtaMu {
                gamma,
                scale1,
                scale2,
            } => gamma.draw(rng) * scale1 + gamma.draw(rng) * scale2,
        }
    }
}

/// `n` independent instantaneous-SNR draws from `model`.
pub fn sample_snr(model: &FadingModel, n: usize, rng: &mut RngState) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be positive".into(),
        ));
    }
    let sampler = SnrSampler::new(model)?;
    let snr_samples = (0..n).map(|_| sampler.draw(rng)).collect();
    Ok(SampleBatch {
        model: *model,
        seed: rng.seed(),
        snr_samples,
    })
}

/// Kolmogorov–Smirnov distance between the batch and its own model.
pub fn ks_distance(batch: &SampleBatch) -> Result<f64> {
    ks_statistic(&batch.snr_samples, &batch.model)
}

/// Kolmogorov–Smirnov distance between `samples` and the CDF of `model`,
/// with the CDF built by integrating the density between sorted samples.
pub fn ks_statistic(samples: &[f64], model: &FadingModel) -> Result<f64> {
    let model = model.validate()?;
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty sample batch".into()));
    }
    if samples.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidParameter(
            "samples must be finite and nonnegative".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;

    let tol = Tolerance {
        rel: 1e-10,
        abs: 1e-13,
        max_subdivisions: 200,
    };
    let density = |g: f64| {
        let lp = model.log_pdf_unchecked(g);
        if lp.is_finite() {
            lp.exp()
        } else {
            0.0
        }
    };

    let mut cdf = 0.0f64;
    let mut prev = 0.0;
    let mut stat = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        cdf = match model {
            FadingModel::Awgn { snr_bar } => f64::from(u8::from(x >= snr_bar)),
            _ if x > prev => (cdf + integrate(density, prev, x, &[], tol)?.value).min(1.0),
            _ => cdf,
        };
        prev = x;
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        stat = stat.max(hi - cdf).max(cdf - lo);
    }
    Ok(stat.clamp(0.0, 1.0))
}

/// Samples per independent random stream in [`emi_monte_carlo`]. Block `b`
/// always draws from stream `b`, so the estimate does not depend on how
/// blocks are distributed over workers.
pub const MC_BLOCK: usize = 1 << 16;

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pooled moments of two disjoint sample sets.
    pub fn combine(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Monte-Carlo EMI estimator holding an interpolation table of the BPSK
/// mutual information so repeated runs share its setup cost.
#[derive(Debug, Clone)]
pub struct MonteCarlo {
    exact: AwgnMi,
    table: MiTable,
}

impl MonteCarlo {
    pub fn new(quad: &QuadratureSpec) -> Result<Self> {
        let exact = AwgnMi::new(quad)?;
        let table = MiTable::new(&exact);
        Ok(MonteCarlo { exact, table })
    }

    /// Number of blocks needed for `n` samples.
    pub fn block_count(n: usize) -> usize {
        n.div_ceil(MC_BLOCK)
    }

    /// Moments of the mutual-information deficit `1 − I(γ)` over block
    /// `index` of an `n`-sample run.
    pub fn block(&self, model: &FadingModel, n: usize, seed: u64, index: usize) -> Result<Moments> {
        let sampler = SnrSampler::new(model)?;
        Ok(self.block_with(&sampler, n, seed, index))
    }

    fn block_with(&self, sampler: &SnrSampler, n: usize, seed: u64, index: usize) -> Moments {
        let start = index * MC_BLOCK;
        let len = MC_BLOCK.min(n.saturating_sub(start));
        let mut rng = RngState::new(seed, index as u64);
        let mut acc = Moments::default();
        for _ in 0..len {
            acc.push(self.table.deficit(sampler.draw(&mut rng)));
        }
        acc
    }

    /// Turns pooled deficit moments into an estimate.
    pub fn finish(model: &FadingModel, moments: Moments) -> EmiEstimate {
        let n = moments.count.max(1) as f64;
        EmiEstimate {
            value: (1.0 - moments.mean).clamp(0.0, 1.0),
            method: Method::MonteCarlo,
            error: (moments.sample_variance() / n).sqrt(),
            model: *model,
        }
    }

    fn check(model: &FadingModel, n: usize) -> Result<FadingModel> {
        let model = model.validate()?;
        if n < 100 {
            return Err(Error::InvalidParameter(alloc::format!(
                "Monte-Carlo sample count must be >= 100 (got {n})"
            )));
        }
        Ok(model)
    }

    pub fn run(&self, model: &FadingModel, n: usize, seed: u64) -> Result<EmiEstimate> {
        let model = Self::check(model, n)?;
        if let FadingModel::Awgn { snr_bar } = model {
            return Ok(EmiEstimate {
                value: self.exact.mi(snr_bar)?,
                method: Method::MonteCarlo,
                error: 0.0,
                model,
            });
        }
        let sampler = SnrSampler::new(&model)?;
        let moments = (0..Self::block_count(n))
            .map(|b| self.block_with(&sampler, n, seed, b))
            .fold(Moments::default(), Moments::combine);
        Ok(Self::finish(&model, moments))
    }
}

/// Monte-Carlo EMI: the mean of `I(γᵢ)` over `n` draws, with the sample
/// standard error.
pub fn emi_monte_carlo(
    model: &FadingModel,
    n: usize,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<EmiEstimate> {
    MonteCarlo::check(model, n)?;
    MonteCarlo::new(quad)?.run(model, n, seed)
}
