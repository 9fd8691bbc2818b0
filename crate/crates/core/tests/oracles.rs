//! Reference values computed with mpmath at 40 digits by
//! `tests/oracles/gen_constants.py`, frozen here.

use fading_emi_core::special_fn::{bessel_i_scaled, ln_gamma, log_bessel_i, BesselOrder};
use fading_emi_core::{emi_exact, AwgnMi, EtaMuFormat, FadingModel, QuadratureSpec};

fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

#[test]
fn ln_gamma_matches_reference() {
    let cases = [
        (0.001, 6.907_178_885_383_853_661_7),
        (0.5, 0.572_364_942_924_700_087_07),
        (1.0001, -0.000_057_713_342_220_471_268_005),
        (1.9999, -0.000_042_275_208_772_153_458_011),
        (2.5, 0.284_682_870_472_919_159_63),
        (5.0, 3.178_053_830_347_945_619_6),
        (10.5, 13.940_625_219_403_763_633),
        (100.3, 360.514_705_729_058_118_15),
        (170.0, 701.437_263_808_737_085_35),
    ];
    for (x, want) in cases {
        let got = ln_gamma(x).unwrap();
        assert!(
            rel_err(got, want) < 1e-13,
            "ln_gamma({x}) = {got}, want {want}"
        );
    }
}

#[test]
fn scaled_bessel_matches_reference() {
    let cases = [
        (0.0, 10.0, 0.127_833_337_163_428_607_32),
        (0.0, 50.0, 0.056_561_626_647_454_192_53),
        (2.5, 30.0, 0.065_795_694_375_656_317_359),
        (-0.3, 5.0, 0.181_682_074_129_865_362_31),
        (-0.3, 40.0, 0.063_206_218_254_847_370_47),
        (10.0, 60.0, 0.022_317_058_803_516_291_162),
        (200.0, 100.0, 5.191_015_816_987_435_327_7e-74),
        (200.0, 500.0, 1.215_754_362_334_146_165_3e-19),
        (200.0, 5000.0, 0.000_103_351_287_344_755_674_79),
        (50.5, 2000.0, 0.004_714_957_832_700_189_732_7),
        (3.0, 700.0, 0.014_984_586_661_719_438_65),
        (0.0, 1e6, 0.000_398_942_330_269_245_778_78),
        (0.7, 0.01, 0.026_702_455_451_353_018_129),
        (120.0, 1.0, 4.145_810_873_401_005_478_9e-236),
    ];
    for (nu, x, want) in cases {
        let got = bessel_i_scaled(BesselOrder::new(nu).unwrap(), x).unwrap();
        assert!(
            rel_err(got, want) < 1e-11,
            "I_scaled({nu}, {x}) = {got:e}, want {want:e}"
        );
    }
    let got = log_bessel_i(BesselOrder::new(2.0).unwrap(), 500.0).unwrap();
    assert!(rel_err(got, 495.970_003_664_777_403_02) < 1e-14);
}

#[test]
fn bpsk_deficit_matches_reference() {
    let cases = [
        (0.001, 0.999_279_012_913_166_505_17),
        (0.1, 0.931_256_686_555_049_119_72),
        (1.0, 0.514_055_845_867_064_679_89),
        (3.0, 0.154_668_204_878_635_375_61),
        (5.0, 0.049_647_175_132_799_354_179),
        (10.0, 0.003_243_672_009_970_331_151),
        (20.0, 0.000_016_671_759_597_422_833_565),
        (50.0, 3.405_837_067_648_313_377_5e-12),
        (100.0, 3.413_003_808_783_553_399e-23),
        (200.0, 4.704_409_922_568_115_761_7e-45),
    ];
    let mi = AwgnMi::new(&QuadratureSpec::default()).unwrap();
    for (g, want) in cases {
        let got = mi.deficit(g).unwrap();
        assert!(
            rel_err(got, want) < 1e-10,
            "deficit({g}) = {got:e}, want {want:e}"
        );
    }
    assert_eq!(mi.mi(100.0).unwrap(), 1.0);
}

#[test]
fn inner_quadrature_converges_with_node_count() {
    let coarse = AwgnMi::new(&QuadratureSpec::default()).unwrap();
    let fine = AwgnMi::new(&QuadratureSpec {
        inner_nodes: 32,
        ..QuadratureSpec::default()
    })
    .unwrap();
    let mut g = 1e-3;
    while g <= 1e3 {
        let (a, b) = (coarse.mi(g).unwrap(), fine.mi(g).unwrap());
        assert!((a - b).abs() < 1e-10, "gamma={g}: {a} vs {b}");
        g *= 1.5;
    }
}

#[test]
fn rayleigh_emi_matches_reference() {
    let got = emi_exact(
        &FadingModel::Rayleigh { snr_bar: 1.0 },
        &QuadratureSpec::default(),
    )
    .unwrap();
    assert!(
        (got.value - 0.399_116_439_517_559_923_47).abs() < 1e-9,
        "{}",
        got.value
    );
    assert!(got.error <= 1e-8);
}

#[test]
fn densities_match_reference() {
    use EtaMuFormat::*;
    let cases = [
        (
            FadingModel::Nakagami {
                m: 0.75,
                snr_bar: 2.0,
            },
            0.3,
            0.472_173_068_473_721_911_74,
        ),
        (
            FadingModel::Rician {
                k: 3.0,
                snr_bar: 1.5,
            },
            2.0,
            0.274_062_300_351_527_467_22,
        ),
        (
            FadingModel::Rician {
                k: 200.0,
                snr_bar: 1.0,
            },
            1.1,
            2.304_578_076_534_412_189_2,
        ),
        (
            FadingModel::KappaMu {
                kappa: 2.0,
                mu: 1.5,
                snr_bar: 1.0,
            },
            0.7,
            0.731_560_774_531_137_561_31,
        ),
        (
            FadingModel::KappaMu {
                kappa: 0.5,
                mu: 0.3,
                snr_bar: 4.0,
            },
            0.01,
            3.750_232_719_226_776_771_2,
        ),
        (
            FadingModel::KappaMu {
                kappa: 10.0,
                mu: 3.0,
                snr_bar: 1.0,
            },
            1.2,
            1.047_047_535_284_318_481_8,
        ),
        (
            FadingModel::EtaMu {
                format: Format1,
                eta: 0.5,
                mu: 1.0,
                snr_bar: 1.0,
            },
            0.8,
            0.631_428_775_868_368_779_81,
        ),
        (
            FadingModel::EtaMu {
                format: Format1,
                eta: 4.0,
                mu: 0.5,
                snr_bar: 2.0,
            },
            0.05,
            0.601_139_171_403_745_407_25,
        ),
        (
            FadingModel::EtaMu {
                format: Format2,
                eta: -0.5,
                mu: 1.0,
                snr_bar: 1.0,
            },
            1.3,
            0.342_355_762_671_671_934_21,
        ),
        (
            FadingModel::EtaMu {
                format: Format2,
                eta: 0.9,
                mu: 2.0,
                snr_bar: 10.0,
            },
            7.0,
            0.073_217_597_129_212_616_636,
        ),
    ];
    for (model, g, want) in cases {
        let got = model.pdf(g).unwrap();
        assert!(
            rel_err(got, want) < 1e-12,
            "{model}: pdf({g}) = {got}, want {want}"
        );
    }
}
