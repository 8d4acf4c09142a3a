use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gqhan::commands::{self, PrepareArgs, QhasArgs, SweepArgs, TrainArgs};
use gqhan::config::{self, layered, ConfigFile, TrainOverrides};
use gqhan::data::DatasetOptions;
use gqhan::Result;
use gqhan_core::qhas::DEFAULT_EPSILON;
use gqhan_core::{GradientMethod, NoiseKind};

/// Grover-inspired quantum hard attention network: data preparation,
/// training, noise sweeps and attention reports.
#[derive(Parser, Debug)]
#[command(name = "gqhan", version)]
struct Cli {
    /// Flat `key = value` file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the 1000/100 PCA dataset from gzipped IDX files.
    PrepareData {
        /// Directory with train-images-idx3-ubyte.gz and train-labels-idx1-ubyte.gz.
        #[arg(long, env = "GQHAN_DATA_DIR")]
        data_dir: Option<PathBuf>,
        #[arg(long)]
        images: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value = "runs/data")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Divide pixel values by 255 before PCA.
        #[arg(long)]
        scale_pixels: bool,
        /// Subtract the training mean before projecting. By default raw
        /// images are projected onto the (mean-centered) components.
        #[arg(long)]
        centered: bool,
    },
    /// Train the classifier on a prepared dataset.
    Train {
        #[arg(long, default_value = "runs/data/dataset.cache")]
        dataset: PathBuf,
        #[arg(long, default_value = "runs/train")]
        out: PathBuf,
        #[command(flatten)]
        train: TrainFlags,
    },
    /// Noiseless run plus every channel at every probability.
    NoiseSweep {
        #[arg(long, default_value = "runs/data/dataset.cache")]
        dataset: PathBuf,
        #[arg(long, default_value = "runs/noise-sweep")]
        out: PathBuf,
        #[command(flatten)]
        train: TrainFlags,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3")]
        probabilities: Vec<f64>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Hard attention scores of a params file.
    Qhas {
        #[arg(long, default_value = "runs/train/params.json")]
        params: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value = "runs/qhas")]
        out: PathBuf,
    },
    /// Textbook Grover search as an amplitude-amplification sanity check.
    GroverDemo {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        marked: usize,
        /// Defaults to floor(pi/4 * sqrt(2^n)).
        #[arg(long)]
        iterations: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
struct TrainFlags {
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    /// Nesterov momentum.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// bit-flip or amplitude-damping.
    #[arg(long)]
    noise_kind: Option<NoiseKind>,
    #[arg(long)]
    noise_p: Option<f64>,
    /// parameter-shift or finite-difference.
    #[arg(long)]
    grad_method: Option<GradientMethod>,
}

impl From<TrainFlags> for TrainOverrides {
    fn from(f: TrainFlags) -> Self {
        TrainOverrides {
            lr: f.lr,
            batch: f.batch,
            steps: f.steps,
            gamma: f.gamma,
            seed: f.seed,
            noise_kind: f.noise_kind,
            noise_p: f.noise_p,
            grad_method: f.grad_method,
        }
    }
}

fn run(cli: Cli, out: &mut (impl Write + Send)) -> Result<()> {
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let file = file.as_ref();
    match cli.command {
        Command::PrepareData { data_dir, images, labels, out: out_dir, seed, scale_pixels, centered } => {
            let dir = config::data_dir(data_dir);
            let options = DatasetOptions {
                seed: layered(seed, file, "seed", 0)?,
                scale_pixels: scale_pixels || layered(None, file, "scale-pixels", false)?,
                center_features: centered || layered(None, file, "center-features", false)?,
                ..Default::default()
            };
            let mut args = PrepareArgs::from_dir(&dir, out_dir, options);
            args.images = images.unwrap_or(args.images);
            args.labels = labels.unwrap_or(args.labels);
            commands::prepare_data(&args, out)?;
        }
        Command::Train { dataset, out: out_dir, train } => {
            let config = TrainOverrides::from(train).resolve(file)?;
            commands::train(&TrainArgs { dataset, out_dir, config }, out)?;
        }
        Command::NoiseSweep { dataset, out: out_dir, train, probabilities, threads } => {
            let mut overrides = TrainOverrides::from(train);
            if overrides.noise_kind.is_some() || overrides.noise_p.is_some() {
                return Err(gqhan::Error::Config(
                    "noise-sweep chooses its own channels; drop --noise-kind/--noise-p".into(),
                ));
            }
            overrides.noise_kind = None;
            let mut base = overrides.resolve(file.map(strip_noise).as_ref())?;
            base.noise = None;
            let threads = threads
                .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
                .unwrap_or(1);
            let args = SweepArgs {
                dataset,
                out_dir,
                base,
                kinds: vec![NoiseKind::BitFlip, NoiseKind::AmplitudeDamping],
                probabilities,
                threads,
            };
            commands::noise_sweep(&args, out)?;
        }
        Command::Qhas { params, epsilon, out: out_dir } => {
            let epsilon = layered(epsilon, file, "epsilon", DEFAULT_EPSILON)?;
            commands::qhas(&QhasArgs { params, epsilon, out_dir }, out)?;
        }
        Command::GroverDemo { n, marked, iterations } => {
            commands::grover_demo(n, marked, iterations, out)?;
        }
    }
    Ok(())
}

/// A sweep ignores noise keys in a shared config file.
fn strip_noise(file: &ConfigFile) -> ConfigFile {
    let mut text = String::new();
    for key in config::KNOWN_KEYS {
        if *key == "noise-kind" || *key == "noise-p" {
            continue;
        }
        if let Ok(Some(v)) = file.get::<String>(key) {
            text.push_str(&format!("{key} = {v}\n"));
        }
    }
    ConfigFile::parse(&text).expect("keys come from a parsed file")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
