use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rashomon::config::{Baseline, Overrides, ReferenceConfig, RunConfig};
use rashomon::data::{write_csv, LossKind};
use rashomon::models::save_bundle;
use rashomon::pipeline::{
    attribute_stage, build_report, emit_report, load_dataset, prepare_data, reference_metadata, reference_model,
    run_pipeline, sample_stage, timestamp, AttributionArtifact, SampleArtifact,
};
use rashomon::{Error, Result};

const SAMPLES_FILE: &str = "samples.json";
const SPACES_FILE: &str = "spaces.json";

/// Sample a generalized Rashomon set around a reference model and report
/// how feature attributions vary across it.
///
/// Settings come from built-in defaults, then the --config file, then the
/// flags below. Exit status: 0 success, 1 configuration error, 2 runtime
/// error.
#[derive(Debug, Parser)]
#[command(name = "rashomon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Rashomon tolerance; repeat for a nested list.
    #[arg(long = "epsilon", global = true, value_name = "FLOAT", allow_negative_numbers = true)]
    epsilons: Vec<f64>,
    /// Levels of the linear tolerance schedule.
    #[arg(long, global = true, value_name = "INT")]
    levels: Option<usize>,
    #[arg(long, global = true, value_parser = parse_loss)]
    loss: Option<LossKind>,
    /// Largest subset order for directions and attributions.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=2))]
    order: Option<u8>,
    /// Replaces every seed in the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Baseline sampler to run next to GRS; repeatable.
    #[arg(long = "baseline", global = true, value_parser = parse_baseline)]
    baselines: Vec<Baseline>,
    /// Cap on members per sampled set, reference included.
    #[arg(long, global = true, value_name = "INT")]
    max_models: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the configured dataset to data.csv.
    Synth,
    /// Fit (or construct) the reference and save it as model.json.
    Train,
    /// Sample every configured set and save samples.json.
    Sample {
        /// Use this model bundle as the reference.
        #[arg(long, value_name = "PATH")]
        model: Option<PathBuf>,
    },
    /// Build attribution spaces from samples.json into spaces.json.
    Attribute {
        #[arg(long, value_name = "PATH")]
        samples: Option<PathBuf>,
    },
    /// Write the report files from samples.json and spaces.json.
    Report {
        #[arg(long, value_name = "PATH")]
        samples: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        spaces: Option<PathBuf>,
    },
    /// Every stage in one go.
    Run,
}

fn parse_loss(s: &str) -> std::result::Result<LossKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_baseline(s: &str) -> std::result::Result<Baseline, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let overrides = Overrides {
            epsilons: self.epsilons.clone(),
            levels: self.levels,
            loss: self.loss,
            order: self.order.map(usize::from),
            seed: self.seed,
            baselines: (!self.baselines.is_empty()).then(|| self.baselines.clone()),
            max_models: self.max_models,
            out: self.out.clone(),
        };
        RunConfig::load(self.config.as_deref(), &overrides)
    }
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })?;
    Ok(path)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn execute(cli: Cli) -> Result<()> {
    let mut config = cli.common.load()?;
    let out = config.output.dir.clone();
    match cli.command {
        Command::Synth => {
            let d = load_dataset(&config)?;
            fs::create_dir_all(&out).map_err(|e| Error::Io {
                path: out.clone(),
                source: e,
            })?;
            let path = out.join("data.csv");
            write_csv(&d, &path)?;
            println!("{}", path.display());
        }
        Command::Train => {
            let split = prepare_data(&config)?;
            let model = reference_model(&config, &split)?;
            let meta = reference_metadata(&config, &split, &model)?;
            fs::create_dir_all(&out).map_err(|e| Error::Io {
                path: out.clone(),
                source: e,
            })?;
            let path = out.join("model.json");
            save_bundle(&model, meta, &path)?;
            println!("{}", path.display());
        }
        Command::Sample { model } => {
            if let Some(path) = model {
                config.reference = ReferenceConfig::LoadBundle { path };
                config.validate()?;
            }
            let split = prepare_data(&config)?;
            let reference = reference_model(&config, &split)?;
            let samples = sample_stage(&config, &split, &reference)?;
            let path = write_text(&out, SAMPLES_FILE, &serde_json::to_string(&samples)?)?;
            println!("{}", path.display());
        }
        Command::Attribute { samples } => {
            let samples: SampleArtifact = read_json(&samples.unwrap_or_else(|| out.join(SAMPLES_FILE)))?;
            let spaces = attribute_stage(&samples)?;
            let path = write_text(&out, SPACES_FILE, &serde_json::to_string(&spaces)?)?;
            println!("{}", path.display());
        }
        Command::Report { samples, spaces } => {
            let samples: SampleArtifact = read_json(&samples.unwrap_or_else(|| out.join(SAMPLES_FILE)))?;
            let spaces: AttributionArtifact = read_json(&spaces.unwrap_or_else(|| out.join(SPACES_FILE)))?;
            let report = build_report(&samples, &spaces, timestamp())?;
            for path in emit_report(&report, &out)? {
                println!("{}", path.display());
            }
        }
        Command::Run => {
            let report = run_pipeline(&config)?;
            for m in &report.metrics {
                println!(
                    "{}@{}: {} members, SER {}, FER first {} second {}",
                    m.method,
                    m.epsilon,
                    m.metrics.n_members,
                    m.metrics.ser,
                    m.metrics.fer_first_order,
                    m.metrics.fer_second_order
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(if e.is_config_error() { 1 } else { 2 })
        }
    }
}
