//! The experiment commands behind the CLI. Each takes plain arguments,
//! writes its artifacts, and logs progress to the given writer.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use gqhan_core::gates::{grover_search, optimal_grover_iterations};
use gqhan_core::qhas::qhas_for_angles;
use gqhan_core::train::{self, Dataset};
use gqhan_core::{NoiseKind, NoiseSpec, ParamVector, QhasReport, RunRecord, TrainConfig};

use crate::data::cache::{dataset_hash, read_cache, write_atomic, write_cache, write_csv};
use crate::data::{build_dataset, load_images, DatasetOptions, PcaModel};
use crate::error::{Error, Result};
use crate::manifest::RunManifest;
use crate::svg::{self, AttentionRow, Panel, Series, PALETTE};

pub const IMAGES_FILE: &str = "train-images-idx3-ubyte.gz";
pub const LABELS_FILE: &str = "train-labels-idx1-ubyte.gz";
pub const CACHE_FILE: &str = "dataset.cache";
pub const CSV_FILE: &str = "dataset.csv";
pub const TAIL_WINDOW: usize = 10;

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn log(out: &mut impl Write, msg: std::fmt::Arguments) {
    // progress output is best effort
    let _ = out.write_fmt(msg);
    let _ = out.write_all(b"\n");
}

// ---------------------------------------------------------------- prepare-data

#[derive(Clone, Debug)]
pub struct PrepareArgs {
    pub images: PathBuf,
    pub labels: PathBuf,
    pub out_dir: PathBuf,
    pub options: DatasetOptions,
}

impl PrepareArgs {
    /// Standard file names inside `data_dir`.
    pub fn from_dir(data_dir: &Path, out_dir: PathBuf, options: DatasetOptions) -> Self {
        PrepareArgs {
            images: data_dir.join(IMAGES_FILE),
            labels: data_dir.join(LABELS_FILE),
            out_dir,
            options,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrepareReport {
    pub dataset_hash: String,
    pub train_counts: [usize; 2],
    pub test_counts: [usize; 2],
    pub explained_variance_ratio: Vec<f64>,
    pub pca: PcaModel,
    pub cache: PathBuf,
    pub manifest: PathBuf,
}

pub fn prepare_data(args: &PrepareArgs, out: &mut impl Write) -> Result<PrepareReport> {
    let mut manifest = RunManifest::new("prepare-data", serde_json::to_value(&args.options)?);
    manifest.seed = Some(args.options.seed);

    let images = load_images(&args.images, &args.labels)?;
    let prepared = build_dataset(&images, &args.options)?;
    let split = prepared.to_split();
    let hash = dataset_hash(&split)?;
    let (train_counts, test_counts) = prepared.class_counts();
    let evr = prepared.pca.explained_variance_ratio();

    create_dir(&args.out_dir)?;
    let cache = args.out_dir.join(CACHE_FILE);
    let csv = args.out_dir.join(CSV_FILE);
    let pca_path = args.out_dir.join("pca.json");
    write_cache(&cache, &split)?;
    write_csv(&csv, &split)?;
    write_atomic(&pca_path, serde_json::to_string(&prepared.pca)?.as_bytes())?;

    log(out, format_args!("read {} images", images.len()));
    log(
        out,
        format_args!(
            "train={} (class0={}, class1={})  test={} (class0={}, class1={})",
            split.train.len(),
            train_counts[0],
            train_counts[1],
            split.test.len(),
            test_counts[0],
            test_counts[1]
        ),
    );
    let ratios: Vec<String> = evr.iter().map(|r| format!("{r:.4}")).collect();
    log(
        out,
        format_args!(
            "explained variance ratio: [{}] (sum {:.4})",
            ratios.join(", "),
            evr.iter().sum::<f64>()
        ),
    );
    log(out, format_args!("dataset hash {hash}"));

    manifest.dataset_hash = Some(hash.clone());
    manifest.outputs = vec![cache.clone(), csv, pca_path];
    let manifest = manifest.finish(&args.out_dir)?;
    Ok(PrepareReport {
        dataset_hash: hash,
        train_counts,
        test_counts,
        explained_variance_ratio: evr,
        pca: prepared.pca,
        cache,
        manifest,
    })
}

// ----------------------------------------------------------------------- train

/// Angles written by `train` and read by `qhas`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub n_data: usize,
    #[serde(default)]
    pub initial: Option<Vec<f64>>,
    #[serde(rename = "final")]
    pub final_params: Vec<f64>,
}

impl ParamsFile {
    pub fn from_record(record: &RunRecord) -> Self {
        ParamsFile {
            n_data: record.final_params.n_data(),
            initial: Some(record.initial_params.values().to_vec()),
            final_params: record.final_params.values().to_vec(),
        }
    }

    /// Accepts the object written by `train` or a bare JSON array of angles.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |e: String| Error::Config(format!("malformed params file: {e}"));
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let parsed = if value.is_array() {
            let angles: Vec<f64> = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
            let n_data = (1..24)
                .find(|&n| ParamVector::len_for(n) == angles.len())
                .ok_or_else(|| bad(format!("{} angles match no register width", angles.len())))?;
            ParamsFile { n_data, initial: None, final_params: angles }
        } else {
            serde_json::from_value(value).map_err(|e| bad(e.to_string()))?
        };
        ParamVector::from_values(parsed.n_data, parsed.final_params.clone())?;
        if let Some(init) = &parsed.initial {
            ParamVector::from_values(parsed.n_data, init.clone())?;
        }
        if parsed.final_params.iter().chain(parsed.initial.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(bad("non-finite angle".into()));
        }
        Ok(parsed)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

#[derive(Clone, Debug)]
pub struct TrainArgs {
    pub dataset: PathBuf,
    pub out_dir: PathBuf,
    pub config: TrainConfig,
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    pub record: RunRecord,
    pub dataset_hash: String,
    pub outputs: Vec<PathBuf>,
}

fn check_finite(record: &RunRecord) -> Result<()> {
    for m in &record.steps {
        if !(m.train_loss.is_finite() && m.train_accuracy.is_finite() && m.test_accuracy.is_finite()) {
            return Err(Error::Numerical(format!("non-finite metrics at step {}", m.step)));
        }
    }
    if record.final_params.values().iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("parameters diverged".into()));
    }
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<(Dataset, String)> {
    let data = read_cache(path)?;
    let hash = dataset_hash(&data)?;
    Ok((data, hash))
}

pub fn metrics_csv(record: &RunRecord) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for m in &record.steps {
        w.serialize(m)?;
    }
    w.into_inner().map_err(|e| Error::io("metrics.csv", e.into_error()))
}

fn curve_panels(record: &RunRecord) -> Vec<Panel> {
    let pts = |f: fn(&gqhan_core::StepMetrics) -> f64| -> Vec<(f64, f64)> {
        record.steps.iter().map(|m| (m.step as f64, f(m))).collect()
    };
    vec![
        Panel {
            title: "Training loss".into(),
            x_label: "step".into(),
            y_label: "loss".into(),
            series: vec![Series { name: "train loss".into(), color: PALETTE[0].into(), points: pts(|m| m.train_loss) }],
            y_range: None,
        },
        Panel {
            title: "Accuracy".into(),
            x_label: "step".into(),
            y_label: "accuracy".into(),
            series: vec![
                Series { name: "train".into(), color: PALETTE[0].into(), points: pts(|m| m.train_accuracy) },
                Series { name: "test".into(), color: PALETTE[1].into(), points: pts(|m| m.test_accuracy) },
            ],
            y_range: Some((0.0, 1.0)),
        },
    ]
}

pub fn train(args: &TrainArgs, out: &mut impl Write) -> Result<TrainReport> {
    let config = &args.config;
    config.validate()?;
    let mut manifest = RunManifest::new("train", serde_json::to_value(config)?);
    manifest.seed = Some(config.seed);
    manifest.noise_policy = config.noise.map(|n| n.placement().name().to_string());

    let (data, hash) = load_dataset(&args.dataset)?;
    create_dir(&args.out_dir)?;
    log(
        out,
        format_args!(
            "training on {} samples ({} test), lr={} batch={} steps={} gamma={} seed={} grad={}{}",
            data.train.len(),
            data.test.len(),
            config.learning_rate,
            config.batch_size,
            config.steps,
            config.momentum,
            config.seed,
            config.gradient_method.name(),
            config
                .noise
                .map(|n| format!(" noise={}:{}", n.kind().name(), n.p()))
                .unwrap_or_default()
        ),
    );
    let record = train::train(&data, config, |m| {
        if m.step % 10 == 0 || m.step == 1 || m.step == config.steps {
            log(
                out,
                format_args!(
                    "step {:4}  loss {:.4}  train acc {:.4}  test acc {:.4}",
                    m.step, m.train_loss, m.train_accuracy, m.test_accuracy
                ),
            );
        }
    })?;
    check_finite(&record)?;

    let metrics = args.out_dir.join("metrics.csv");
    let params = args.out_dir.join("params.json");
    let curves = args.out_dir.join("curves.svg");
    write_atomic(&metrics, &metrics_csv(&record)?)?;
    write_atomic(&params, serde_json::to_string_pretty(&ParamsFile::from_record(&record))?.as_bytes())?;
    write_atomic(&curves, svg::render_panels(&curve_panels(&record)).as_bytes())?;
    log(
        out,
        format_args!(
            "final loss {:.4}; mean test accuracy over the last {TAIL_WINDOW} steps {:.4}",
            record.final_loss(),
            record.tail_mean(TAIL_WINDOW, |m| m.test_accuracy)
        ),
    );

    manifest.dataset_hash = Some(hash.clone());
    let mut outputs = vec![metrics, params, curves];
    manifest.outputs = outputs.clone();
    outputs.push(manifest.finish(&args.out_dir)?);
    Ok(TrainReport { record, dataset_hash: hash, outputs })
}

// ----------------------------------------------------------------- noise-sweep

#[derive(Clone, Debug)]
pub struct SweepArgs {
    pub dataset: PathBuf,
    pub out_dir: PathBuf,
    /// Shared settings; its `noise` field is ignored.
    pub base: TrainConfig,
    pub kinds: Vec<NoiseKind>,
    pub probabilities: Vec<f64>,
    pub threads: usize,
}

impl SweepArgs {
    /// The noiseless cell followed by every (kind, p) pair with `p > 0`.
    pub fn cells(&self) -> Result<Vec<Option<NoiseSpec>>> {
        let mut cells = vec![None];
        for &kind in &self.kinds {
            for &p in &self.probabilities {
                if p > 0.0 {
                    cells.push(Some(NoiseSpec::new(kind, p)?));
                }
            }
        }
        Ok(cells)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub channel: String,
    pub p: f64,
    pub mean_test_accuracy: f64,
    pub mean_train_accuracy: f64,
    pub final_loss: f64,
    pub mean_loss: f64,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub records: Vec<RunRecord>,
    pub dataset_hash: String,
    pub summary: PathBuf,
}

fn cell_name(noise: Option<&NoiseSpec>) -> (String, f64) {
    match noise {
        None => ("none".into(), 0.0),
        Some(n) => (n.kind().name().into(), n.p()),
    }
}

/// Runs every cell with the same seed, so all cells share initial angles and
/// batch order and differ only in the channel. Cells run on `threads`
/// workers; each cell's metrics file is written atomically when it finishes.
pub fn noise_sweep(args: &SweepArgs, out: &mut (impl Write + Send)) -> Result<SweepReport> {
    let cells = args.cells()?;
    let mut manifest = RunManifest::new(
        "noise-sweep",
        serde_json::json!({
            "base": args.base,
            "kinds": args.kinds,
            "probabilities": args.probabilities,
            "tail_window": TAIL_WINDOW,
        }),
    );
    manifest.seed = Some(args.base.seed);
    manifest.noise_policy = Some(gqhan_core::NoisePlacement::AfterEachStage.name().into());

    let (data, hash) = load_dataset(&args.dataset)?;
    create_dir(&args.out_dir)?;
    log(out, format_args!("noise sweep: {} cells on {} threads", cells.len(), args.threads.max(1)));

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<(RunRecord, PathBuf)>>>> =
        Mutex::new((0..cells.len()).map(|_| None).collect());
    let out = Mutex::new(out);
    std::thread::scope(|scope| {
        for _ in 0..args.threads.max(1).min(cells.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(noise) = cells.get(i) else { break };
                let config = TrainConfig { noise: *noise, ..args.base.clone() };
                let (name, p) = cell_name(noise.as_ref());
                let run = train::train(&data, &config, |_| {})
                    .map_err(Error::from)
                    .and_then(|record| {
                        check_finite(&record)?;
                        let path = args.out_dir.join(format!("cell_{name}_{p}.csv"));
                        write_atomic(&path, &metrics_csv(&record)?)?;
                        Ok((record, path))
                    });
                if let Ok((record, _)) = &run {
                    log(
                        *out.lock().unwrap(),
                        format_args!(
                            "{name:>17} p={p:.2}: test acc {:.4}, final loss {:.4}",
                            record.tail_mean(TAIL_WINDOW, |m| m.test_accuracy),
                            record.final_loss()
                        ),
                    );
                }
                results.lock().unwrap()[i] = Some(run);
            });
        }
    });

    let mut rows = Vec::with_capacity(cells.len());
    let mut records = Vec::with_capacity(cells.len());
    let mut outputs = Vec::new();
    for (noise, result) in cells.iter().zip(results.into_inner().unwrap()) {
        let (record, path) = result.expect("every cell is claimed by a worker")?;
        let (channel, p) = cell_name(noise.as_ref());
        rows.push(SweepRow {
            channel,
            p,
            mean_test_accuracy: record.tail_mean(TAIL_WINDOW, |m| m.test_accuracy),
            mean_train_accuracy: record.tail_mean(TAIL_WINDOW, |m| m.train_accuracy),
            final_loss: record.final_loss(),
            mean_loss: record.tail_mean(TAIL_WINDOW, |m| m.train_loss),
        });
        records.push(record);
        outputs.push(path);
    }

    let summary = args.out_dir.join("noise_sweep.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row)?;
    }
    write_atomic(&summary, &w.into_inner().map_err(|e| Error::io(&summary, e.into_error()))?)?;
    let plot = args.out_dir.join("noise_sweep.svg");
    write_atomic(&plot, svg::render_panels(&sweep_panels(&rows, &records)).as_bytes())?;

    let out = out.into_inner().unwrap();
    log(out, format_args!("{:>17} {:>5} {:>9} {:>9} {:>10}", "channel", "p", "test acc", "train acc", "final loss"));
    for r in &rows {
        log(
            out,
            format_args!(
                "{:>17} {:>5.2} {:>9.4} {:>9.4} {:>10.4}",
                r.channel, r.p, r.mean_test_accuracy, r.mean_train_accuracy, r.final_loss
            ),
        );
    }

    manifest.dataset_hash = Some(hash.clone());
    outputs.push(summary.clone());
    outputs.push(plot);
    manifest.outputs = outputs;
    manifest.finish(&args.out_dir)?;
    Ok(SweepReport { rows, records, dataset_hash: hash, summary })
}

fn sweep_panels(rows: &[SweepRow], records: &[RunRecord]) -> Vec<Panel> {
    let series = |f: fn(&gqhan_core::StepMetrics) -> f64| -> Vec<Series> {
        rows.iter()
            .zip(records)
            .enumerate()
            .map(|(i, (row, rec))| Series {
                name: if row.channel == "none" { "noiseless".into() } else { format!("{} {}", row.channel, row.p) },
                color: PALETTE[i % PALETTE.len()].into(),
                points: rec.steps.iter().map(|m| (m.step as f64, f(m))).collect(),
            })
            .collect()
    };
    vec![
        Panel {
            title: "Training loss under noise".into(),
            x_label: "step".into(),
            y_label: "loss".into(),
            series: series(|m| m.train_loss),
            y_range: None,
        },
        Panel {
            title: "Test accuracy under noise".into(),
            x_label: "step".into(),
            y_label: "accuracy".into(),
            series: series(|m| m.test_accuracy),
            y_range: Some((0.0, 1.0)),
        },
    ]
}

// ------------------------------------------------------------------------ qhas

#[derive(Clone, Debug)]
pub struct QhasArgs {
    pub params: PathBuf,
    pub epsilon: f64,
    pub out_dir: PathBuf,
}

#[derive(Clone, Debug)]
pub struct QhasOutcome {
    pub initial: Option<QhasReport>,
    pub final_report: QhasReport,
    pub outputs: Vec<PathBuf>,
}

pub fn qhas(args: &QhasArgs, out: &mut impl Write) -> Result<QhasOutcome> {
    let params = ParamsFile::load(&args.params)?;
    let oracle_len = 1usize << params.n_data;
    let report = |angles: &[f64]| qhas_for_angles(&angles[..oracle_len], args.epsilon);
    let final_report = report(&params.final_params)?;
    let initial = params.initial.as_deref().map(report).transpose()?;

    let mut manifest = RunManifest::new(
        "qhas",
        serde_json::json!({ "params": args.params, "epsilon": args.epsilon }),
    );
    create_dir(&args.out_dir)?;
    let mut labelled: Vec<(&str, &QhasReport)> = Vec::new();
    if let Some(r) = &initial {
        labelled.push(("initial", r));
    }
    labelled.push(("final", &final_report));

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["row", "dp_index", "theta", "distance_to_selection", "hard_score"])?;
    for (label, r) in &labelled {
        for e in &r.entries {
            w.write_record([
                label.to_string(),
                e.dp_index.to_string(),
                e.theta.to_string(),
                e.distance_to_selection.to_string(),
                e.hard_score.to_string(),
            ])?;
        }
    }
    let csv_path = args.out_dir.join("qhas.csv");
    write_atomic(&csv_path, &w.into_inner().map_err(|e| Error::io(&csv_path, e.into_error()))?)?;
    let rows: Vec<AttentionRow> = labelled
        .iter()
        .map(|(label, r)| AttentionRow {
            label: label.to_string(),
            cells: r.entries.iter().map(|e| (e.theta, e.hard_score == 1)).collect(),
        })
        .collect();
    let svg_path = args.out_dir.join("qhas.svg");
    write_atomic(&svg_path, svg::render_attention_map(&rows).as_bytes())?;

    for (label, r) in &labelled {
        let sel: Vec<String> = r.selected().map(|e| format!("DP{} ({:.6})", e.dp_index, e.theta)).collect();
        log(
            out,
            format_args!(
                "{label}: {} of {} primitives selected at epsilon {}{}",
                sel.len(),
                r.entries.len(),
                args.epsilon,
                if sel.is_empty() { String::new() } else { format!(": {}", sel.join(", ")) }
            ),
        );
    }
    let mut outputs = vec![csv_path, svg_path];
    manifest.outputs = outputs.clone();
    outputs.push(manifest.finish(&args.out_dir)?);
    Ok(QhasOutcome { initial, final_report, outputs })
}

// ----------------------------------------------------------------- grover-demo

/// Prints `P(marked)` after each Grover iteration and returns the column.
/// `iterations` defaults to `floor(π/4 √N)`.
pub fn grover_demo(n: usize, marked: usize, iterations: Option<usize>, out: &mut impl Write) -> Result<Vec<f64>> {
    if n < 2 || n > 20 {
        return Err(Error::Config(format!("n must lie in 2..=20, got {n}")));
    }
    if marked >= 1 << n {
        return Err(Error::Config(format!("marked index {marked} out of range for {n} qubits")));
    }
    let k = iterations.unwrap_or_else(|| optimal_grover_iterations(n));
    let probs = grover_search(n, marked, k)?;
    log(out, format_args!("Grover search, n={n}, N={}, marked={marked}, iterations={k}", 1usize << n));
    log(out, format_args!("{:>9}  {:>12}", "iteration", "P(marked)"));
    for (i, p) in probs.iter().enumerate() {
        log(out, format_args!("{i:>9}  {p:>12.9}"));
    }
    Ok(probs)
}
