//! Ergodic mutual information of BPSK signalling over fading channels.
//!
//! The crate evaluates the average mutual information of a binary antipodal
//! input over Rayleigh, Nakagami-m, Rician, η-μ and κ-μ fading in three
//! independent ways:
//!
//! * double quadrature of the defining integral ([`emi::emi_exact`]),
//! * closed forms built on the exponential approximation
//!   `I(γ) ≈ 1 − exp(−ϑγ)` ([`emi::emi_approx`]), which reduce to one minus
//!   the Laplace transform of the SNR density evaluated at `ϑ`,
//! * Monte-Carlo averaging over simulated SNR draws
//!   ([`sampling::emi_monte_carlo`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel drivers live in the `fading-emi` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bpsk_mi;
pub mod channels;
pub mod emi;
mod error;
pub mod quadrature;
pub mod sampling;
pub mod special_fn;

pub use bpsk_mi::{
    mi_awgn_approx, mi_awgn_exact, AwgnMi, MiApproxConstant, MiTable, QuadratureSpec,
};
pub use channels::{EtaMuFormat, FadingModel, Geometry};
pub use emi::{
    emi_approx, emi_exact, emi_reduction_check, emi_series_reference, EmiEstimate, Method,
};
pub use error::{Error, Result};
pub use sampling::{
    emi_monte_carlo, ks_distance, sample_gamma_variate, sample_snr, RngState, SampleBatch,
};

/// Converts a level in decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    10f64.powf(db / 10.0)
}
