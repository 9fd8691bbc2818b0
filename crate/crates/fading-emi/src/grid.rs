//! The standard model grid shared by the validation report and the
//! acceptance suite.

use fading_emi_core::{db_to_linear, EtaMuFormat, FadingModel};

/// Mean SNR points of the standard grid, in dB.
pub fn snr_db_points() -> Vec<f64> {
    linspace(-10.0, 20.0, 20)
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Model templates of the standard grid, with unit mean SNR.
pub fn models() -> Vec<FadingModel> {
    use EtaMuFormat::*;
    let s = 1.0;
    let mut out = vec![FadingModel::Rayleigh { snr_bar: s }];
    out.extend([0.5, 0.75, 1.0, 2.0, 4.0, 8.0].map(|m| FadingModel::Nakagami { m, snr_bar: s }));
    out.extend([0.0, 0.5, 1.0, 3.0, 5.0, 10.0].map(|k| FadingModel::Rician { k, snr_bar: s }));
    out.extend(
        [
            (0.25, 0.3),
            (0.5, 1.0),
            (2.0, 1.5),
            (1.0, 0.75),
            (0.1, 2.0),
            (4.0, 0.5),
        ]
        .map(|(eta, mu)| FadingModel::EtaMu {
            format: Format1,
            eta,
            mu,
            snr_bar: s,
        }),
    );
    out.extend(
        [
            (-0.5, 1.0),
            (0.5, 0.3),
            (0.0, 1.0),
            (0.9, 2.0),
            (-0.9, 0.5),
            (0.3, 1.5),
        ]
        .map(|(eta, mu)| FadingModel::EtaMu {
            format: Format2,
            eta,
            mu,
            snr_bar: s,
        }),
    );
    out.extend(
        [
            (0.0, 1.5),
            (0.5, 0.5),
            (1.0, 1.0),
            (2.0, 1.5),
            (5.0, 2.0),
            (3.0, 0.3),
            (10.0, 3.0),
        ]
        .map(|(kappa, mu)| FadingModel::KappaMu {
            kappa,
            mu,
            snr_bar: s,
        }),
    );
    out
}

/// Every (model, mean SNR in dB) pair of the standard grid.
pub fn points() -> Vec<(FadingModel, f64)> {
    let snrs = snr_db_points();
    models()
        .into_iter()
        .flat_map(|m| {
            snrs.iter()
                .map(move |&db| (m.with_snr_bar(db_to_linear(db)), db))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let snrs = snr_db_points();
        assert_eq!(snrs.len(), 20);
        assert_eq!(snrs[0], -10.0);
        assert_eq!(snrs[19], 20.0);
        let models = models();
        for family in ["nakagami", "rician", "eta-mu", "kappa-mu"] {
            assert!(
                models.iter().filter(|m| m.family() == family).count() >= 6,
                "{family}"
            );
        }
        assert!(models.iter().all(|m| m.validate().is_ok()));
        assert_eq!(points().len(), models.len() * 20);
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(-10.0, 20.0, 31)[10], 0.0);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
