//! `qkit`: run tests of quantumness, certify classical ceilings, analyze
//! Phase-B devices, scan the soundness inequalities, run extractions, and
//! serve either side of the protocol over TCP.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qkit_cli::config::{ProverKind, RunConfig};
use qkit_cli::stats::{wilson_interval, Z99};
use qkit_cli::{certify, report, runner, wire};
use qkit_core::analysis::{main_inequality_slack, trig_scan};
use qkit_core::error::{Error, Result};
use qkit_core::extract::{
    claw_from_kcvy, claw_from_simplified, gl_extract, standard_predictor,
    trapdoor_kcvy_adversary, trapdoor_simplified_adversary, InnerProductQuery, PredictorNoise,
};
use qkit_core::protocol::ProtocolId;
use qkit_core::rng::experiment_rng;
use qkit_core::tcf::{self, TcfFamily};
use qkit_core::Bits;

#[derive(Parser)]
#[command(name = "qkit", version, about = "Tests of quantumness toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Protocol: kcvy | simplified | klvy_chsh
    #[arg(long)]
    protocol: ProtocolId,
    /// Prover: honest-quantum | optimal-classical | device:<path>
    #[arg(long, default_value = "honest-quantum")]
    prover: ProverKind,
    /// TCF family: rabin | toy
    #[arg(long, default_value = "toy")]
    tcf: TcfFamily,
    /// Security/width parameter: domain bits for toy, prime bits for rabin
    #[arg(long = "n-bits", default_value_t = 4)]
    n_bits: u32,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Master seed; transcripts are a pure function of (seed, config)
    #[arg(long)]
    seed: u64,
    /// JSONL transcript output path
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for trial execution
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl RunArgs {
    fn to_config(&self) -> RunConfig {
        RunConfig {
            protocol: self.protocol,
            prover: self.prover.clone(),
            tcf: self.tcf,
            n_bits: self.n_bits,
            trials: self.trials,
            seed: self.seed,
            output_path: self.output.clone(),
            jobs: self.jobs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded protocol trials and print a summary.
    Run(RunArgs),
    /// Exhaustively certify the classical Phase-B ceiling.
    CertifyClassical {
        #[arg(long)]
        protocol: ProtocolId,
        #[arg(long = "n-bits", default_value_t = 2)]
        n_bits: u32,
        /// Model the secret shift as part of the prover's view (sanity
        /// control; the ceiling jumps to 1).
        #[arg(long)]
        leak_shift: bool,
    },
    /// Analyze a device file: block report, bounds, qubit test.
    Analyze {
        #[arg(long)]
        device: PathBuf,
        #[arg(long = "c-hat0", default_value_t = 1, allow_hyphen_values = true)]
        c_hat0: i8,
        #[arg(long = "c-hat1", default_value_t = 1, allow_hyphen_values = true)]
        c_hat1: i8,
        /// JSON report output path
        #[arg(long)]
        output: Option<PathBuf>,
        /// CSV block table output path
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also measure the device empirically with this many trials
        #[arg(long = "empirical-trials")]
        empirical_trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scan the soundness inequalities over an angle grid.
    Bounds {
        #[arg(long = "grid-points", default_value_t = 1_000_000)]
        grid_points: usize,
    },
    /// Run extraction experiments.
    Extract(ExtractArgs),
    /// Serve the verifier side of a protocol over TCP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:0")]
        listen: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Connect a prover to a serving verifier.
    Prove {
        #[arg(long)]
        connect: String,
        #[arg(long, default_value = "honest-quantum")]
        prover: ProverKind,
    },
}

#[derive(Args)]
struct ExtractArgs {
    /// gl | claw-simplified | claw-kcvy
    #[arg(long, default_value = "gl")]
    mode: String,
    /// Secret width for gl mode
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// rotation | and-defect
    #[arg(long, default_value = "rotation")]
    noise: String,
    /// Bias of the rotation predictor
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// TCF family for claw modes
    #[arg(long, default_value = "toy")]
    tcf: TcfFamily,
    #[arg(long = "n-bits", default_value_t = 2)]
    n_bits: u32,
    /// Preimage-failure probability for claw-kcvy
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gate-list adversary file (gl mode); overrides the built-in predictor
    #[arg(long)]
    adversary: Option<PathBuf>,
    /// Secret to grade a file-based adversary against, as <hex>:<n_bits>
    #[arg(long)]
    secret: Option<String>,
}

fn parse_secret(s: &str) -> Result<Bits> {
    let (hex, bits) = s
        .split_once(':')
        .ok_or_else(|| Error::Validation("secret must be <hex>:<n_bits>".into()))?;
    let n: usize = bits
        .parse()
        .map_err(|e| Error::Validation(format!("bad n_bits: {e}")))?;
    Bits::from_hex(hex, n)
}

fn noise_of(args: &ExtractArgs) -> Result<PredictorNoise> {
    match args.noise.as_str() {
        "rotation" => Ok(PredictorNoise::Rotation {
            epsilon: args.epsilon,
        }),
        "and-defect" => Ok(PredictorNoise::AndDefect),
        other => Err(Error::Validation(format!("unknown noise model {other:?}"))),
    }
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let config = args.to_config();
    let summary = match &config.output_path {
        Some(path) => {
            let mut writer = BufWriter::new(File::create(path)?);
            let summary = runner::run_all(&config, Some(&mut writer))?;
            writer.flush()?;
            summary
        }
        None => runner::run_all(&config, None)?,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn cmd_extract(args: &ExtractArgs) -> Result<()> {
    match args.mode.as_str() {
        "gl" => {
            let (query, secret): (InnerProductQuery, Bits) = match (&args.adversary, &args.secret)
            {
                (Some(path), Some(secret)) => {
                    let text = std::fs::read_to_string(path)?;
                    (serde_json::from_str(&text)?, parse_secret(secret)?)
                }
                (Some(_), None) => {
                    return Err(Error::Validation(
                        "file-based adversaries need --secret <hex>:<n_bits>".into(),
                    ))
                }
                _ => {
                    let mut rng = experiment_rng(args.seed, u64::MAX);
                    let secret = Bits::uniform(args.n as usize, &mut rng);
                    (standard_predictor(&secret, noise_of(args)?)?, secret)
                }
            };
            query.validate()?;
            let mut bias_rng = experiment_rng(args.seed, u64::MAX - 1);
            let bias_trials = args.trials.max(1000);
            let hits = query.empirical_hits(&secret, bias_trials, &mut bias_rng)?;
            let (bias_lo, _) = wilson_interval(hits, bias_trials, Z99);
            let measured_eps = hits as f64 / bias_trials as f64 - 0.5;

            let mut successes = 0u64;
            for trial in 0..args.trials {
                let mut rng = experiment_rng(args.seed, trial);
                if gl_extract(&query, &mut rng)?.candidate == secret {
                    successes += 1;
                }
            }
            let freq = successes as f64 / args.trials as f64;
            let (lo, hi) = wilson_interval(successes, args.trials, Z99);
            println!(
                "{}",
                serde_json::json!({
                    "mode": "gl",
                    "secret": secret,
                    "trials": args.trials,
                    "measured_epsilon": measured_eps,
                    "epsilon_wilson_lo": bias_lo - 0.5,
                    "extraction_rate": freq,
                    "extraction_wilson_99": [lo, hi],
                    "four_eps_sq_floor": 4.0 * measured_eps * measured_eps,
                })
            );
            Ok(())
        }
        "claw-simplified" => {
            let mut rng = experiment_rng(args.seed, u64::MAX);
            let (key, td) = tcf::gen(args.n_bits, args.tcf, &mut rng)?;
            let adv = trapdoor_simplified_adversary(&key, &td, noise_of(args)?, &mut rng)?;
            let mut verified = 0u64;
            for trial in 0..args.trials {
                let mut rng = experiment_rng(args.seed, trial);
                verified += u64::from(claw_from_simplified(&adv, &key, &mut rng)?.verified);
            }
            let freq = verified as f64 / args.trials as f64;
            let (lo, hi) = wilson_interval(verified, args.trials, Z99);
            println!(
                "{}",
                serde_json::json!({
                    "mode": "claw-simplified",
                    "trials": args.trials,
                    "verified_rate": freq,
                    "wilson_99": [lo, hi],
                })
            );
            Ok(())
        }
        "claw-kcvy" => {
            let mut rng = experiment_rng(args.seed, u64::MAX);
            let (key, td) = tcf::gen(args.n_bits, args.tcf, &mut rng)?;
            let adv =
                trapdoor_kcvy_adversary(&key, &td, noise_of(args)?, args.kappa, &mut rng)?;
            let mut verified = 0u64;
            for trial in 0..args.trials {
                let mut rng = experiment_rng(args.seed, trial);
                verified += u64::from(claw_from_kcvy(&adv, &key, &mut rng)?.verified);
            }
            let freq = verified as f64 / args.trials as f64;
            println!(
                "{}",
                serde_json::json!({
                    "mode": "claw-kcvy",
                    "trials": args.trials,
                    "kappa": args.kappa,
                    "verified_rate": freq,
                })
            );
            Ok(())
        }
        other => Err(Error::Validation(format!("unknown extract mode {other:?}"))),
    }
}

fn real_main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QKIT_LOG", "warn")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::CertifyClassical {
            protocol,
            n_bits,
            leak_shift,
        } => {
            let report = certify::certify_classical_ceiling(*protocol, *n_bits, *leak_shift)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Analyze {
            device,
            c_hat0,
            c_hat1,
            output,
            csv,
            empirical_trials,
            seed,
        } => {
            let dev = report::load_device(device)?;
            let analysis = report::analyze_device(
                &dev,
                *c_hat0,
                *c_hat1,
                empirical_trials.map(|t| (t, *seed)),
            )?;
            let text = serde_json::to_string_pretty(&analysis)?;
            if let Some(path) = output {
                std::fs::write(path, &text)?;
            }
            if let Some(path) = csv {
                let mut file = File::create(path)?;
                report::write_blocks_csv(&analysis.jordan, &mut file)?;
            }
            println!("{text}");
            Ok(())
        }
        Command::Bounds { grid_points } => {
            let scan = trig_scan(*grid_points)?;
            let equality_point = main_inequality_slack(
                std::f64::consts::FRAC_PI_8,
                -std::f64::consts::FRAC_PI_8,
            );
            println!(
                "{}",
                serde_json::json!({
                    "min_slack_main": scan.min_slack_main,
                    "min_slack_ine2": scan.min_slack_ine2,
                    "grid_points": scan.grid_points,
                    "equality_point_slack": equality_point,
                })
            );
            Ok(())
        }
        Command::Extract(args) => cmd_extract(args),
        Command::Serve { listen, run } => {
            let config = run.to_config();
            let summary = match &config.output_path {
                Some(path) => {
                    let mut writer = BufWriter::new(File::create(path)?);
                    let summary = wire::serve_verifier(
                        listen,
                        &config,
                        Some(&mut writer),
                        &mut std::io::stdout(),
                    )?;
                    writer.flush()?;
                    summary
                }
                None => wire::serve_verifier(listen, &config, None, &mut std::io::stdout())?,
            };
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(())
        }
        Command::Prove { connect, prover } => wire::connect_prover(connect, prover),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(qkit_cli::exit_code(&err) as u8)
        }
    }
}
