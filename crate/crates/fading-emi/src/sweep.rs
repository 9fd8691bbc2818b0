//! SNR sweeps and their CSV representation.

use std::io::{Read, Write};
use std::str::FromStr;

use fading_emi_core::sampling::MonteCarlo;
use fading_emi_core::{db_to_linear, emi_approx, emi_exact, FadingModel, QuadratureSpec};
use rayon::prelude::*;

use crate::config::ModelParams;
use crate::grid::linspace;
use crate::{derive_seed, Error, Result};

/// Exact header line of every sweep CSV.
pub const CSV_HEADER: [&str; 7] = [
    "family",
    "params",
    "snr_db",
    "emi_exact",
    "emi_approx",
    "emi_mc",
    "mc_stderr",
];

/// Which estimators a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Methods {
    pub exact: bool,
    pub approx: bool,
    pub mc: bool,
}

impl Methods {
    pub const ALL: Methods = Methods {
        exact: true,
        approx: true,
        mc: true,
    };
}

impl FromStr for Methods {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Methods {
            exact: false,
            approx: false,
            mc: false,
        };
        for item in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "exact" => out.exact = true,
                "approx" => out.approx = true,
                "mc" => out.mc = true,
                "all" => out = Methods::ALL,
                other => {
                    return Err(Error::Usage(format!(
                        "unknown method '{other}' (expected exact, approx or mc)"
                    )))
                }
            }
        }
        if !(out.exact || out.approx || out.mc) {
            return Err(Error::Usage("at least one method is required".into()));
        }
        Ok(out)
    }
}

/// Parses `A:B:N` into (start dB, stop dB, points).
pub fn parse_snr_range(s: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::Usage(format!("--snr-db-range expects A:B:N, got '{s}'"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a = parts[0].trim().parse().map_err(|_| bad())?;
    let b = parts[1].trim().parse().map_err(|_| bad())?;
    let n = parts[2].trim().parse().map_err(|_| bad())?;
    Ok((a, b, n))
}

/// A sweep of one model over a range of mean SNR values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Model template; its mean SNR is replaced at every point.
    pub model: FadingModel,
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub points: usize,
    pub methods: Methods,
    pub mc_samples: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !(self.snr_db_start.is_finite()
            && self.snr_db_stop.is_finite()
            && self.snr_db_start < self.snr_db_stop)
        {
            return Err(Error::Usage(format!(
                "SNR range must satisfy start < stop (got {}..{})",
                self.snr_db_start, self.snr_db_stop
            )));
        }
        if self.points < 2 {
            return Err(Error::Usage(format!(
                "a sweep needs at least 2 points (got {})",
                self.points
            )));
        }
        if self.methods.mc && self.mc_samples < 100 {
            return Err(Error::Usage(format!(
                "--mc-samples must be at least 100 (got {})",
                self.mc_samples
            )));
        }
        Ok(())
    }

    pub fn snr_db_values(&self) -> Vec<f64> {
        linspace(self.snr_db_start, self.snr_db_stop, self.points)
    }
}

/// One line of a sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub params: String,
    pub snr_db: f64,
    pub emi_exact: Option<f64>,
    pub emi_approx: Option<f64>,
    pub emi_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
}

impl SweepRow {
    /// The model this row was computed for.
    pub fn model(&self) -> Result<FadingModel> {
        ModelParams::from_columns(&self.family, &self.params)?.build(db_to_linear(self.snr_db))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Checks that every EMI value lies in [0, 1] and that rows of each curve
    /// are sorted by SNR.
    pub fn check_invariants(&self) -> Result<()> {
        let mut last: Option<(&str, &str, f64)> = None;
        for row in &self.rows {
            for v in [row.emi_exact, row.emi_approx, row.emi_mc]
                .into_iter()
                .flatten()
            {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Usage(format!("EMI value {v} outside [0, 1]")));
                }
            }
            if let Some((f, p, db)) = last {
                if f == row.family && p == row.params && row.snr_db <= db {
                    return Err(Error::Usage(format!(
                        "rows of {f} {p} not sorted by snr_db at {}",
                        row.snr_db
                    )));
                }
            }
            last = Some((&row.family, &row.params, row.snr_db));
        }
        Ok(())
    }
}

/// Shared evaluation state: quadrature settings and the Monte-Carlo table.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub quad: QuadratureSpec,
    pub mc: MonteCarlo,
}

impl Evaluator {
    pub fn new(quad: QuadratureSpec) -> Result<Self> {
        Ok(Evaluator {
            mc: MonteCarlo::new(&quad)?,
            quad,
        })
    }

    /// Evaluates one row. `seed` is used as is for the Monte-Carlo run.
    pub fn row(
        &self,
        model: &FadingModel,
        snr_db: f64,
        methods: Methods,
        mc_samples: usize,
        seed: u64,
    ) -> Result<SweepRow> {
        let model = model.with_snr_bar(db_to_linear(snr_db));
        let exact = if methods.exact {
            Some(emi_exact(&model, &self.quad)?.value)
        } else {
            None
        };
        let approx = if methods.approx {
            Some(emi_approx(&model)?.value)
        } else {
            None
        };
        let mc = if methods.mc {
            Some(self.mc.run(&model, mc_samples, seed)?)
        } else {
            None
        };
        Ok(SweepRow {
            family: model.family().to_string(),
            params: model.params().to_string(),
            snr_db,
            emi_exact: exact,
            emi_approx: approx,
            emi_mc: mc.map(|e| e.value),
            mc_stderr: mc.map(|e| e.error),
        })
    }
}

/// Runs a sweep. Row `i` uses the Monte-Carlo seed `derive_seed(seed, i)`,
/// so results do not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec, eval: &Evaluator) -> Result<SweepResult> {
    spec.validate()?;
    let rows = spec
        .snr_db_values()
        .into_par_iter()
        .enumerate()
        .map(|(i, db)| {
            eval.row(
                &spec.model,
                db,
                spec.methods,
                spec.mc_samples,
                derive_seed(spec.seed, i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `# key: value` metadata lines, the header and the rows.
pub fn write_csv<W: Write>(
    mut out: W,
    result: &SweepResult,
    metadata: &[(String, String)],
) -> Result<()> {
    let io = |source| Error::Io {
        path: "<csv output>".into(),
        source,
    };
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}").map_err(io)?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &result.rows {
        w.write_record([
            r.family.clone(),
            r.params.clone(),
            r.snr_db.to_string(),
            cell(r.emi_exact),
            cell(r.emi_approx),
            cell(r.emi_mc),
            cell(r.mc_stderr),
        ])?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// Parses a file produced by [`write_csv`], returning metadata and rows.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<(String, String)>, SweepResult)> {
    let mut text = String::new();
    let mut input = input;
    input
        .read_to_string(&mut text)
        .map_err(|source| Error::Io {
            path: "<csv input>".into(),
            source,
        })?;
    let mut metadata = Vec::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let body = line.trim_start_matches('#').trim();
        if let Some((k, v)) = body.split_once(':') {
            metadata.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Usage(format!("unexpected CSV header {header:?}")));
    }
    let num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse()
                .map(Some)
                .map_err(|_| Error::Usage(format!("not a number: '{s}'")))
        }
    };
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != CSV_HEADER.len() {
            return Err(Error::Usage(format!("row has {} fields", rec.len())));
        }
        rows.push(SweepRow {
            family: rec[0].to_string(),
            params: rec[1].to_string(),
            snr_db: num(&rec[2])?.ok_or_else(|| Error::Usage("missing snr_db".into()))?,
            emi_exact: num(&rec[3])?,
            emi_approx: num(&rec[4])?,
            emi_mc: num(&rec[5])?,
            mc_stderr: num(&rec[6])?,
        });
    }
    Ok((metadata, SweepResult { rows }))
}
