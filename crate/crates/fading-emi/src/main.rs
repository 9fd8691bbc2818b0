use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use fading_emi::config::{merge_config_args, ModelParams};
use fading_emi::figures::{write_figures, FigureOptions};
use fading_emi::sweep::{parse_snr_range, run_sweep, write_csv, Evaluator, Methods, SweepSpec};
use fading_emi::validate::{run_all, ValidateOptions};
use fading_emi::Error;
use fading_emi_core::emi::emi_approx_with;
use fading_emi_core::{
    db_to_linear, emi_exact, sample_snr, MiApproxConstant, QuadratureSpec, RngState,
};

/// Ergodic mutual information of BPSK over fading channels.
#[derive(Debug, Parser)]
#[command(name = "fading-emi", version, about)]
struct Cli {
    /// Read additional `key=value` settings; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one model at one mean SNR.
    Eval(EvalArgs),
    /// Sweep one model over a range of mean SNR and write CSV.
    Sweep(SweepArgs),
    /// Write the figure data sets as CSV files.
    Figures(FiguresArgs),
    /// Draw instantaneous SNR samples and write them as CSV.
    Sample(SampleArgs),
    /// Run every validation suite and report the measured discrepancies.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Fading family: awgn, rayleigh, nakagami, rician, eta-mu or kappa-mu.
    #[arg(long)]
    model: String,
    /// Nakagami shape parameter.
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    /// Rician factor K.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// η-μ parameter η.
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// η-μ or κ-μ parameter μ.
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// κ-μ parameter κ.
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// η-μ parameterization, 1 or 2.
    #[arg(long)]
    format: Option<u8>,
}

impl ModelArgs {
    fn params(&self) -> ModelParams {
        ModelParams {
            family: self.model.clone(),
            m: self.m,
            k: self.k,
            eta: self.eta,
            mu: self.mu,
            kappa: self.kappa,
            format: self.format,
        }
    }
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Gauss–Legendre nodes per panel of the inner integral.
    #[arg(long = "hermite-nodes", alias = "inner-nodes", default_value_t = 16)]
    inner_nodes: usize,
    /// Relative tolerance of the outer integral.
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
}

impl QuadArgs {
    fn spec(&self) -> anyhow::Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            inner_nodes: self.inner_nodes,
            outer_rel_tol: self.rel_tol,
            ..QuadratureSpec::default()
        };
        Ok(spec.validate().map_err(Error::from)?)
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Mean SNR in dB.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    snr_db: f64,
    /// Comma-separated subset of exact, approx, mc.
    #[arg(long, default_value = "exact,approx")]
    methods: String,
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, hide = true)]
    vartheta: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Mean SNR range in dB as START:STOP:POINTS.
    #[arg(long, allow_hyphen_values = true, default_value = "-10:20:31")]
    snr_db_range: String,
    #[arg(long, default_value = "exact,approx,mc")]
    methods: String,
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    quad: QuadArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FiguresArgs {
    /// Output directory.
    #[arg(long, default_value = "figures")]
    out: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, allow_hyphen_values = true, default_value = "-10:20:31")]
    snr_db_range: String,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    snr_db: f64,
    /// Number of draws.
    #[arg(long, alias = "mc-samples", default_value_t = 10_000)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random stream index.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte-Carlo samples per grid point in the agreement suite.
    #[arg(long, default_value_t = 100_000)]
    mc_samples: usize,
    /// Samples per model in the Kolmogorov–Smirnov suite.
    #[arg(long, default_value_t = 100_000)]
    ks_samples: usize,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, hide = true)]
    vartheta: Option<f64>,
}

fn vartheta(value: Option<f64>) -> anyhow::Result<MiApproxConstant> {
    Ok(match value {
        Some(v) => MiApproxConstant::new(v).map_err(Error::from)?,
        None => MiApproxConstant::DEFAULT,
    })
}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn eval(args: EvalArgs) -> anyhow::Result<ExitCode> {
    let methods: Methods = args.methods.parse()?;
    let quad = args.quad.spec()?;
    let model = args.model.params().build(db_to_linear(args.snr_db))?;
    let mut out = io::stdout().lock();
    if methods.exact {
        let e = emi_exact(&model, &quad).map_err(Error::from)?;
        writeln!(out, "exact  {:.9} {:.3e}", e.value, e.error)?;
    }
    if methods.approx {
        let e = emi_approx_with(&model, vartheta(args.vartheta)?).map_err(Error::from)?;
        writeln!(out, "approx {:.9} {:.3e}", e.value, e.error)?;
    }
    if methods.mc {
        let e = fading_emi_core::emi_monte_carlo(&model, args.mc_samples, args.seed, &quad)
            .map_err(Error::from)?;
        writeln!(out, "mc     {:.9} {:.3e}", e.value, e.error)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let (start, stop, points) = parse_snr_range(&args.snr_db_range)?;
    let spec = SweepSpec {
        model: args.model.params().build(1.0)?,
        snr_db_start: start,
        snr_db_stop: stop,
        points,
        methods: args.methods.parse()?,
        mc_samples: args.mc_samples,
        seed: args.seed,
    };
    spec.validate()?;
    let eval = Evaluator::new(args.quad.spec()?)?;
    let result = run_sweep(&spec, &eval)?;
    let metadata = vec![
        (
            "model".to_string(),
            format!("{} {}", spec.model.family(), spec.model.params()),
        ),
        ("snr_db".to_string(), args.snr_db_range.clone()),
        ("mc_samples".to_string(), spec.mc_samples.to_string()),
        ("seed".to_string(), spec.seed.to_string()),
    ];
    write_csv(output(&args.out)?, &result, &metadata)?;
    Ok(ExitCode::SUCCESS)
}

fn figures(args: FiguresArgs) -> anyhow::Result<ExitCode> {
    let (start, stop, points) = parse_snr_range(&args.snr_db_range)?;
    if !(start < stop && points >= 2) {
        return Err(Error::Usage(
            "figure SNR range needs start < stop and at least 2 points".into(),
        )
        .into());
    }
    if args.mc_samples < 100 {
        return Err(Error::Usage("--mc-samples must be at least 100".into()).into());
    }
    let opts = FigureOptions {
        snr_db_start: start,
        snr_db_stop: stop,
        points,
        mc_samples: args.mc_samples,
        seed: args.seed,
    };
    let eval = Evaluator::new(args.quad.spec()?)?;
    for path in write_figures(&args.out, &opts, &eval)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn sample(args: SampleArgs) -> anyhow::Result<ExitCode> {
    let model = args.model.params().build(db_to_linear(args.snr_db))?;
    let batch = sample_snr(
        &model,
        args.count,
        &mut RngState::new(args.seed, args.stream),
    )
    .map_err(Error::from)?;
    let mut out = output(&args.out)?;
    writeln!(out, "# model: {model}")?;
    writeln!(out, "# seed: {}", args.seed)?;
    writeln!(out, "# stream: {}", args.stream)?;
    writeln!(out, "snr")?;
    for g in &batch.snr_samples {
        writeln!(out, "{g}")?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn validate(args: ValidateArgs) -> anyhow::Result<ExitCode> {
    let opts = ValidateOptions {
        quad: args.quad.spec()?,
        seed: args.seed,
        mc_samples: args.mc_samples,
        ks_samples: args.ks_samples,
        vartheta: vartheta(args.vartheta)?,
    };
    if opts.mc_samples < 100 || opts.ks_samples < 2 {
        return Err(Error::Usage(
            "--mc-samples must be at least 100 and --ks-samples at least 2".into(),
        )
        .into());
    }
    let reports = run_all(&opts, |r| println!("{r}"))?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name)
        .collect();
    if failed.is_empty() {
        println!("all suites passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("failed suites: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let args = match merge_config_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
        Command::Figures(a) => figures(a),
        Command::Sample(a) => sample(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Error>()
                .is_some_and(|e| !matches!(e, Error::Io { .. }))
            {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
