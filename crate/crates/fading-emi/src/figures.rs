//! Data sets for the four EMI-versus-mean-SNR figures: closed-form
//! approximation and Monte-Carlo simulation for representative parameter
//! sets of each family.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use fading_emi_core::{EtaMuFormat, FadingModel};
use rayon::prelude::*;

use crate::grid::linspace;
use crate::sweep::{write_csv, Evaluator, Methods, SweepResult};
use crate::{derive_seed, Error, Result};

/// One output file: a name and the curves it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: &'static str,
    pub title: &'static str,
    pub curves: Vec<FadingModel>,
}

/// The four figures. Parameter sets are representative choices and are
/// recorded in each file's metadata.
pub fn figure_set() -> Vec<Figure> {
    let s = 1.0;
    let cross = |format| {
        let mut v = Vec::new();
        for eta in [0.25, 0.5, 0.9] {
            for mu in [0.5, 1.0, 2.0] {
                v.push(FadingModel::EtaMu {
                    format,
                    eta,
                    mu,
                    snr_bar: s,
                });
            }
        }
        v
    };
    let mut fig1 = vec![
        FadingModel::Awgn { snr_bar: s },
        FadingModel::Rayleigh { snr_bar: s },
    ];
    fig1.extend([1.0, 2.0, 4.0, 8.0].map(|m| FadingModel::Nakagami { m, snr_bar: s }));
    let mut fig4 = Vec::new();
    for kappa in [0.5, 2.0, 5.0] {
        for mu in [0.5, 1.0, 2.0] {
            fig4.push(FadingModel::KappaMu {
                kappa,
                mu,
                snr_bar: s,
            });
        }
    }
    vec![
        Figure {
            name: "fig1",
            title: "AWGN, Rayleigh and Nakagami-m",
            curves: fig1,
        },
        Figure {
            name: "fig2",
            title: "Rician",
            curves: [0.0, 1.0, 5.0, 10.0]
                .map(|k| FadingModel::Rician { k, snr_bar: s })
                .to_vec(),
        },
        Figure {
            name: "fig3a",
            title: "eta-mu, format 1",
            curves: cross(EtaMuFormat::Format1),
        },
        Figure {
            name: "fig3b",
            title: "eta-mu, format 2",
            curves: cross(EtaMuFormat::Format2),
        },
        Figure {
            name: "fig4",
            title: "kappa-mu",
            curves: fig4,
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub points: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            snr_db_start: -10.0,
            snr_db_stop: 20.0,
            points: 31,
            mc_samples: 1_000_000,
            seed: 1,
        }
    }
}

/// Computes the rows of one figure. Curve `c`, point `i` of figure `f` uses
/// Monte-Carlo seed `derive_seed(derive_seed(derive_seed(seed, f), c), i)`.
pub fn compute_figure(
    index: usize,
    figure: &Figure,
    opts: &FigureOptions,
    eval: &Evaluator,
) -> Result<SweepResult> {
    let methods = Methods {
        exact: false,
        approx: true,
        mc: true,
    };
    let snrs = linspace(opts.snr_db_start, opts.snr_db_stop, opts.points);
    let fig_seed = derive_seed(opts.seed, index as u64);
    let jobs: Vec<(usize, usize)> = (0..figure.curves.len())
        .flat_map(|c| (0..snrs.len()).map(move |i| (c, i)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(c, i)| {
            let seed = derive_seed(derive_seed(fig_seed, c as u64), i as u64);
            eval.row(&figure.curves[c], snrs[i], methods, opts.mc_samples, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Metadata lines written at the top of a figure file.
pub fn figure_metadata(figure: &Figure, opts: &FigureOptions) -> Vec<(String, String)> {
    let curves: Vec<String> = figure
        .curves
        .iter()
        .map(|m| {
            let p = m.params().to_string();
            if p.is_empty() {
                m.family().to_string()
            } else {
                format!("{} {}", m.family(), p)
            }
        })
        .collect();
    vec![
        (
            "figure".into(),
            format!("{} ({})", figure.name, figure.title),
        ),
        ("curves".into(), curves.join(" | ")),
        (
            "parameter_note".into(),
            "parameter sets are representative choices, not recovered from a publication".into(),
        ),
        (
            "snr_db".into(),
            format!("{}:{}:{}", opts.snr_db_start, opts.snr_db_stop, opts.points),
        ),
        ("mc_samples".into(), opts.mc_samples.to_string()),
        ("seed".into(), opts.seed.to_string()),
    ]
}

/// Writes `<name>.csv` for every figure into `dir` and returns the paths.
pub fn write_figures(dir: &Path, opts: &FigureOptions, eval: &Evaluator) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths = Vec::new();
    for (index, figure) in figure_set().iter().enumerate() {
        let result = compute_figure(index, figure, opts, eval)?;
        let path = dir.join(format!("{}.csv", figure.name));
        let file = File::create(&path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        write_csv(
            BufWriter::new(file),
            &result,
            &figure_metadata(figure, opts),
        )?;
        paths.push(path);
    }
    Ok(paths)
}
