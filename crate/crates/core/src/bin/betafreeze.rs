use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use betafreeze::bounds::{self, Tighter};
use betafreeze::error::{Error, Result};
use betafreeze::experiment::{
    self, fmt_f64, provenance_header, ExperimentConfig, SweepConfig, DEFAULT_CONFIDENCE,
    DEFAULT_TRIALS,
};
use betafreeze::hermite::{self, DEFAULT_ZERO_TOL};
use betafreeze::sampler::EnsembleSampler;
use betafreeze::spectral;
use betafreeze::streams::TrialStreams;

#[derive(Parser)]
#[command(
    name = "betafreeze",
    version,
    about = "Freezing limits of beta-Hermite ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hermite zeros and the residuals of their two identities.
    Zeros {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the spectral identities of the precision matrix.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact ensemble draws from the tridiagonal model.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long, env = "BETAFREEZE_SEED")]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SampleFormat::Csv)]
        format: SampleFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tail bound breakdown at one point.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: f64,
        #[command(flatten)]
        threshold: ThresholdArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo tail probability with an exact interval.
    Tail {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: f64,
        #[command(flatten)]
        threshold: ThresholdArg,
        #[arg(long, value_enum, default_value_t = Norm::L2)]
        norm: Norm,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, env = "BETAFREEZE_SEED")]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
        confidence: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical covariance of the centred ensemble against the limit.
    Clt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, env = "BETAFREEZE_SEED")]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound-versus-empirical grid from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ThresholdArg {
    /// Threshold; scaled for the l2 norm, unscaled for sup.
    #[arg(long)]
    eps: Option<f64>,
    /// Threshold through eps = c * sqrt(ln k / k).
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Csv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Norm {
    L2,
    Sup,
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut w = open_out(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn zeros(n: usize, tol: f64, format: Format) -> Result<String> {
    let z = hermite::compute_zeros(n, tol)?;
    let residual = hermite::fixed_point_residual(&z)?;
    let gap = hermite::potential_identity_gap(&z)?;
    Ok(match format {
        Format::Json => {
            let v = json!({
                "n": n,
                "zeros": z.zeros(),
                "fixed_point_residual": residual,
                "potential_gap": gap,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("serializable")
            )
        }
        Format::Csv => {
            let mut s = provenance_header(
                "zeros",
                &[
                    ("n", n.to_string()),
                    ("tol", tol.to_string()),
                    ("fixed_point_residual", fmt_f64(residual)),
                    ("potential_gap", fmt_f64(gap)),
                ],
            );
            s.push_str("index,zero\n");
            for (i, x) in z.zeros().iter().enumerate() {
                s.push_str(&format!("{},{}\n", i + 1, fmt_f64(*x)));
            }
            s
        }
    })
}

fn verify(n: usize) -> Result<(String, bool)> {
    let report = spectral::verify(n)?;
    let mut s = provenance_header("verify", &[("n", n.to_string())]);
    s.push_str("check,value,limit,status\n");
    for c in &report.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        s.push_str(&format!(
            "{},{},{},{status}\n",
            c.name,
            fmt_f64(c.value),
            fmt_f64(c.limit)
        ));
    }
    Ok((s, report.all_passed()))
}

fn sample(n: usize, k: f64, trials: u64, seed: u64) -> Result<String> {
    let sampler = EnsembleSampler::new(n, k)?;
    let streams = TrialStreams::new(seed);
    let mut s = provenance_header(
        "sample",
        &[
            ("n", n.to_string()),
            ("k", k.to_string()),
            ("beta", (2.0 * k).to_string()),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ],
    );
    s.push_str("trial,i,lambda_i\n");
    for t in 0..trials {
        let x = sampler.sample(&mut streams.for_trial(t))?;
        for (i, v) in x.values.iter().enumerate() {
            s.push_str(&format!("{t},{},{}\n", i + 1, fmt_f64(*v)));
        }
    }
    Ok(s)
}

fn bounds_report(n: usize, k: f64, t: &ThresholdArg, format: Format) -> Result<String> {
    let (c, eps) = match (t.eps, t.c) {
        (Some(e), _) => (None, e),
        (None, Some(c)) => {
            if !(k > 1.0) || !(c > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "--c needs c > 0 and k > 1, got c = {c}, k = {k}"
                )));
            }
            (Some(c), bounds::corollary_eps(k, c))
        }
        (None, None) => unreachable!("clap enforces one threshold"),
    };
    let b = bounds::prop_bound(n, k, eps)?;
    let cor = c.map(|c| bounds::cor_bound_raw(n, k, c));
    let di_eps = bounds::unscaled_eps(k, eps);
    let di = bounds::dette_imhof_bound(n, di_eps);
    let tighter = Tighter::compare(b.total, di);
    Ok(match format {
        Format::Json => {
            let v = json!({
                "n": n,
                "k": k,
                "beta": 2.0 * k,
                "c": c,
                "eps": eps,
                "prop": b,
                "cor_bound": cor,
                "di_eps_unscaled": di_eps,
                "di_bound": di,
                "tighter": tighter,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("serializable")
            )
        }
        Format::Csv => {
            let mut s = provenance_header("bounds", &[("beta", (2.0 * k).to_string())]);
            s.push_str(
                "N,k,c,eps,prop_term_quartic,prop_term_stirling,prop_e_factor,prop_term_gaussian,\
                 prop_total,prop_total_clamped,condition_ok,cor_bound,di_eps_unscaled,di_bound,tighter\n",
            );
            let fields = [
                n.to_string(),
                fmt_f64(k),
                c.map(fmt_f64).unwrap_or_default(),
                fmt_f64(eps),
                fmt_f64(b.term_quartic),
                fmt_f64(b.term_stirling),
                fmt_f64(b.e_factor),
                fmt_f64(b.term_gaussian),
                fmt_f64(b.total),
                fmt_f64(b.total_clamped),
                b.condition_ok.to_string(),
                cor.map(fmt_f64).unwrap_or_default(),
                fmt_f64(di_eps),
                fmt_f64(di),
                tighter.to_string(),
            ];
            s.push_str(&fields.join(","));
            s.push('\n');
            s
        }
    })
}

fn tail(cfg: &ExperimentConfig, norm: Norm) -> Result<String> {
    let (est, eps, label) = match norm {
        Norm::L2 => (experiment::estimate_tail_l2(cfg)?, cfg.scaled_eps()?, "l2"),
        Norm::Sup => (
            experiment::estimate_tail_sup(cfg)?,
            cfg.unscaled_eps()?,
            "sup",
        ),
    };
    let mut s = provenance_header(
        "tail",
        &[
            ("beta", (2.0 * cfg.k).to_string()),
            ("seed", cfg.seed.to_string()),
            ("workers", cfg.workers.to_string()),
            ("confidence", cfg.confidence.to_string()),
        ],
    );
    s.push_str("N,k,norm,eps,trials,hits,p_hat,ci_low,ci_high\n");
    s.push_str(&format!(
        "{},{},{label},{},{},{},{},{},{}\n",
        cfg.n,
        fmt_f64(cfg.k),
        fmt_f64(eps),
        est.trials,
        est.hits,
        fmt_f64(est.p_hat),
        fmt_f64(est.ci_low),
        fmt_f64(est.ci_high),
    ));
    Ok(s)
}

fn clt(cfg: &ExperimentConfig) -> Result<String> {
    let r = experiment::clt_covariance_test(cfg)?;
    let mut s = provenance_header(
        "clt",
        &[
            ("beta", (2.0 * cfg.k).to_string()),
            ("seed", cfg.seed.to_string()),
            ("workers", cfg.workers.to_string()),
        ],
    );
    s.push_str("N,k,trials,mean_norm,cov_rel_err,sigma_trace\n");
    s.push_str(&format!(
        "{},{},{},{},{},{}\n",
        r.n,
        fmt_f64(r.k),
        r.trials,
        fmt_f64(r.mean_norm),
        fmt_f64(r.cov_rel_err),
        fmt_f64(r.sigma_trace),
    ));
    Ok(s)
}

fn sweep(config: &PathBuf, out: &Option<PathBuf>) -> Result<()> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", config.display())))?;
    let mut cfg = SweepConfig::from_json(&text)?;
    if cfg.seed.is_none() {
        cfg.seed = std::env::var("BETAFREEZE_SEED")
            .ok()
            .and_then(|s| s.parse().ok());
    }
    let mut w = open_out(out)?;
    experiment::sweep(&cfg, &mut w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Zeros {
            n,
            tol,
            format,
            out,
        } => emit(&out, &zeros(n, tol, format)?)?,
        Command::Verify { n, out } => {
            let (text, ok) = verify(n)?;
            emit(&out, &text)?;
            return Ok(ok);
        }
        Command::Sample {
            n,
            k,
            trials,
            seed,
            format: SampleFormat::Csv,
            out,
        } => emit(&out, &sample(n, k, trials, seed)?)?,
        Command::Bounds {
            n,
            k,
            threshold,
            format,
            out,
        } => emit(&out, &bounds_report(n, k, &threshold, format)?)?,
        Command::Tail {
            n,
            k,
            threshold,
            norm,
            trials,
            seed,
            workers,
            confidence,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(n, k)
                .with_trials(trials)
                .with_seed(seed)
                .with_workers(workers)
                .with_confidence(confidence);
            cfg = match (threshold.eps, threshold.c) {
                (Some(e), _) => cfg.with_eps(e),
                (None, Some(c)) => cfg.with_c(c),
                (None, None) => unreachable!("clap enforces one threshold"),
            };
            emit(&out, &tail(&cfg, norm)?)?
        }
        Command::Clt {
            n,
            k,
            trials,
            seed,
            workers,
            out,
        } => {
            let cfg = ExperimentConfig::new(n, k)
                .with_trials(trials)
                .with_seed(seed)
                .with_workers(workers);
            emit(&out, &clt(&cfg)?)?
        }
        Command::Sweep { config, out } => sweep(&config, &out)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
