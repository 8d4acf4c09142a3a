//! Acceptance suite: one PASS/FAIL line per criterion, with the tolerance
//! and runtime budget of each. Exits nonzero if any criterion fails.
//!
//! The dataset criteria read the gzipped IDX files from `$GQHAN_DATA_DIR`,
//! falling back to `data/fashion-mnist` at the workspace root.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gqhan::commands::{self, PrepareArgs, PrepareReport, SweepArgs, SweepRow};
use gqhan::data::DatasetOptions;
use gqhan_core::ansatz::{adaptive_diffusion, flexible_oracle, forward};
use gqhan_core::gates::{self, data_register, DiscretePrimitiveSpec};
use gqhan_core::noise::noisy_forward;
use gqhan_core::qhas::{hard_score, DEFAULT_EPSILON};
use gqhan_core::train::{gradient, train, Dataset};
use gqhan_core::{
    CMatrix, Circuit, FeatureVector, GateOp, GradientMethod, Label, NoiseKind, NoiseSpec, ParamVector,
    Sample, StateVector, TrainConfig, C64,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Unitary of a gate list, assembled column by column through the
/// state-vector kernels.
fn unitary_of(gates: &[GateOp], n_qubits: usize) -> CMatrix {
    let dim = 1 << n_qubits;
    let mut u = CMatrix::zeros(dim);
    for col in 0..dim {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[col] = C64::new(1.0, 0.0);
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        s.apply_all(gates).unwrap();
        for (row, a) in s.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    u
}

fn random_params(n: usize, rng: &mut impl Rng) -> ParamVector {
    let values = (0..ParamVector::len_for(n)).map(|_| rng.gen_range(-TAU..TAU)).collect();
    ParamVector::from_values(n, values).unwrap()
}

// 1
fn unitarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for _ in 0..100 {
        let t = rng.gen_range(-4.0 * PI..4.0 * PI);
        for n_qubits in 1..=4usize {
            let q = rng.gen_range(0..n_qubits);
            let mut list = vec![gates::pauli_x(q), gates::rx(t, q), gates::hadamard(q)];
            let qubits: Vec<usize> = (0..n_qubits).collect();
            list.push(gates::mcz(&qubits).unwrap());
            list.push(gates::lambda_diag(rng.gen_range(0..1 << n_qubits), &qubits).unwrap());
            if n_qubits >= 2 {
                let c = (q + 1) % n_qubits;
                list.push(gates::cry(t, c, q).unwrap());
                let n_data = n_qubits - 1;
                let spec = DiscretePrimitiveSpec::new(rng.gen_range(0..1 << n_data), n_data).unwrap();
                list.push(gates::discrete_primitive(spec));
            }
            for g in &list {
                worst = worst.max(unitary_of(std::slice::from_ref(g), n_qubits).unitarity_error());
                checked += 1;
            }
        }
        for n_data in 1..=4usize {
            let p = random_params(n_data, &mut rng);
            worst = worst.max(unitary_of(&flexible_oracle(&p), n_data + 1).unitarity_error());
            checked += 1;
            if n_data >= 2 {
                worst = worst.max(unitary_of(&adaptive_diffusion(&p).unwrap(), n_data + 1).unitarity_error());
                let circuit = Circuit::new(&p).unwrap();
                worst = worst.max(unitary_of(circuit.gates(), n_data + 1).unitarity_error());
                checked += 2;
            }
        }
    }
    check(worst < 1e-10, format!("{checked} operators, max |UU†-I| = {worst:.2e} (tol 1e-10)"))
}

// 2
fn oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut settings = 0usize;
    for n in 1..=3usize {
        let dim_data = 1usize << n;
        for mask in 0u32..(1 << dim_data) {
            let mut values: Vec<f64> = (0..dim_data)
                .map(|b| if mask >> b & 1 == 1 { PI } else { 0.0 })
                .collect();
            values.resize(ParamVector::len_for(n), 0.0);
            let u = unitary_of(&flexible_oracle(&ParamVector::from_values(n, values).unwrap()), n + 1);
            let toggles = mask.count_ones() as usize;
            let phase = [C64::new(1.0, 0.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)][toggles % 4];
            for a0 in 0..2usize {
                let a_end = a0 ^ (toggles & 1);
                for d in 0..dim_data {
                    // primitive d fires iff the ancilla is excited right after block d's rotation
                    let prefix = (mask & ((2u32 << d) - 1)).count_ones() as usize;
                    let sign = if (a0 + prefix) % 2 == 1 { -1.0 } else { 1.0 };
                    let col = a0 | (d << 1);
                    for row in 0..2 * dim_data {
                        let want = if row == (a_end | (d << 1)) { phase * sign } else { C64::new(0.0, 0.0) };
                        worst = worst.max((u[(row, col)] - want).norm());
                    }
                }
            }
            settings += 1;
        }
        // toggle on at i, off at j: the phase oracle U_S marking i..j
        let data = data_register(n);
        for i in 0..dim_data {
            for j in i + 1..dim_data {
                let mut values = vec![0.0; ParamVector::len_for(n)];
                values[i] = PI;
                values[j] = PI;
                let u = unitary_of(&flexible_oracle(&ParamVector::from_values(n, values).unwrap()), n + 1);
                let marks: Vec<GateOp> = (i..j).map(|b| gates::lambda_diag(b, &data).unwrap()).collect();
                let us = unitary_of(&marks, n + 1);
                for d in 0..dim_data {
                    let col = d << 1;
                    for row in 0..2 * dim_data {
                        worst = worst.max((u[(row, col)] + us[(row, col)]).norm());
                    }
                }
                settings += 1;
            }
        }
    }
    check(worst < 1e-10, format!("{settings} settings, max deviation {worst:.2e} (tol 1e-10)"))
}

// 3
fn grover() -> Outcome {
    let closed_form_3 = (3.0 * (1.0 / 8.0f64.sqrt()).asin()).sin().powi(2);
    let mut sink = Vec::new();
    let mut worst: f64 = 0.0;
    for marked in 0..8 {
        let p = commands::grover_demo(3, marked, Some(1), &mut sink).map_err(|e| e.to_string())?;
        worst = worst.max((p[1] - closed_form_3).abs()).max((p[1] - 0.78125).abs());
    }
    for marked in 0..4 {
        let p = commands::grover_demo(2, marked, Some(1), &mut sink).map_err(|e| e.to_string())?;
        worst = worst.max((p[1] - 1.0).abs());
    }
    let rejects = commands::grover_demo(3, 8, Some(1), &mut sink).is_err();
    check(
        worst < 1e-9 && rejects,
        format!("P(marked): n=3 -> 0.78125, n=2 -> 1.0, max error {worst:.2e} (tol 1e-9); marked >= 2^n rejected: {rejects}"),
    )
}

// 4
fn gradient_gate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let p = random_params(3, &mut rng);
        let batch: Vec<Sample> = (0..6)
            .map(|i| {
                let f = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Sample::new(f, if i % 2 == 0 { Label::Zero } else { Label::One }).unwrap()
            })
            .collect();
        let ps = gradient(&batch, &p, GradientMethod::ParameterShift, None).map_err(|e| e.to_string())?;
        let fd = gradient(&batch, &p, GradientMethod::FiniteDifference, None).map_err(|e| e.to_string())?;
        if ps.len() != 14 {
            return Err(format!("gradient has {} entries, expected 14", ps.len()));
        }
        for (a, b) in ps.iter().zip(&fd) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst < 1e-4, format!("10 configurations x 14 parameters, max |PS - FD| = {worst:.2e} (tol 1e-4)"))
}

// 5
fn classification(data: &Dataset) -> Outcome {
    let mut good = 0;
    let mut cells = Vec::new();
    for seed in 0..5 {
        let cfg = TrainConfig { seed, ..Default::default() };
        let r = train(data, &cfg, |_| {}).map_err(|e| e.to_string())?;
        let acc = r.tail_mean(10, |m| m.test_accuracy);
        let loss = r.final_loss();
        if acc >= 0.90 && loss <= 0.5 {
            good += 1;
        }
        cells.push(format!("seed {seed}: acc {acc:.3} loss {loss:.3}"));
    }
    check(
        good >= 3,
        format!("{good}/5 seeds with tail-10 test accuracy >= 0.90 and final loss <= 0.5 (need 3) [{}]", cells.join("; ")),
    )
}

// 6
fn noise_trends(cache: &Path, out_dir: &Path) -> Outcome {
    let args = SweepArgs {
        dataset: cache.to_path_buf(),
        out_dir: out_dir.to_path_buf(),
        base: TrainConfig::default(),
        kinds: vec![NoiseKind::BitFlip, NoiseKind::AmplitudeDamping],
        probabilities: vec![0.1, 0.2, 0.3],
        threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let mut sink = Vec::new();
    let report = commands::noise_sweep(&args, &mut sink).map_err(|e| e.to_string())?;
    if report.rows.len() != 7 {
        return Err(format!("{} rows, expected 7", report.rows.len()));
    }
    let column = |kind: &str| -> Vec<&SweepRow> {
        std::iter::once(&report.rows[0])
            .chain(report.rows.iter().filter(|r| r.channel == kind))
            .collect()
    };
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for kind in ["bit-flip", "amplitude-damping"] {
        let col = column(kind);
        let accs: Vec<String> = col.iter().map(|r| format!("{:.3}", r.mean_test_accuracy)).collect();
        let losses: Vec<String> = col.iter().map(|r| format!("{:.3}", r.final_loss)).collect();
        summary.push(format!("{kind} acc [{}] loss [{}]", accs.join(", "), losses.join(", ")));
        for w in col.windows(2) {
            if w[1].mean_test_accuracy > w[0].mean_test_accuracy + 0.02 {
                problems.push(format!("{kind} accuracy rises {:.3} -> {:.3} at p={}", w[0].mean_test_accuracy, w[1].mean_test_accuracy, w[1].p));
            }
            if kind == "bit-flip" && w[1].final_loss <= w[0].final_loss {
                problems.push(format!("bit-flip loss not increasing at p={}", w[1].p));
            }
        }
    }
    let bf = column("bit-flip")[3].final_loss;
    let ad = column("amplitude-damping")[3].final_loss;
    if bf < ad {
        problems.push(format!("bit-flip loss {bf:.3} < amplitude-damping loss {ad:.3} at p=0.3"));
    }
    let detail = format!("{}{}", summary.join("; "), if problems.is_empty() { String::new() } else { format!(" | {}", problems.join("; ")) });
    check(problems.is_empty(), detail)
}

// 7
fn cross_backend() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let p = random_params(3, &mut rng);
        let v = FeatureVector::new((0..8).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let sv = forward(&v, &p).map_err(|e| e.to_string())?;
        let kind = if i % 2 == 0 { NoiseKind::BitFlip } else { NoiseKind::AmplitudeDamping };
        let dm = noisy_forward(&v, &p, &NoiseSpec::new(kind, 0.0).unwrap()).map_err(|e| e.to_string())?;
        worst = worst.max((sv - dm).abs());
    }
    check(worst < 1e-9, format!("100 pairs, max |E_dm - E_sv| = {worst:.2e} (tol 1e-9)"))
}

// 8
fn qhas_values() -> Outcome {
    let cases = [
        (PI, 1e-9, 1u8),
        (5.0 * PI, 1e-9, 1),
        (0.0, 1e-9, 0),
        (3.0 * PI, 1e-9, 0),
        (2.0 * PI, 1e-9, 0),
        (3.12689563, DEFAULT_EPSILON, 1),
    ];
    let wrong: Vec<String> = cases
        .iter()
        .filter(|(t, e, want)| hard_score(*t, *e) != *want)
        .map(|(t, e, want)| format!("theta={t} eps={e} expected {want}"))
        .collect();
    check(wrong.is_empty(), if wrong.is_empty() { "pi, 5pi -> 1; 0, 3pi, 2pi -> 0 (eps 1e-9); 3.12689563 -> 1 (eps 0.05)".into() } else { wrong.join("; ") })
}

// 9
fn data_pipeline(first: &PrepareReport, data_dir: &Path, scratch: &Path) -> Outcome {
    let args = PrepareArgs::from_dir(data_dir, scratch.join("again"), DatasetOptions::default());
    let second = commands::prepare_data(&args, &mut Vec::new()).map_err(|e| e.to_string())?;
    let bytes = |r: &PrepareReport| std::fs::read(&r.cache).map_err(|e| e.to_string());
    let same = first.dataset_hash == second.dataset_hash && bytes(first)? == bytes(&second)?;
    let ortho = first.pca.orthonormality_error();
    let train = first.train_counts.iter().sum::<usize>();
    let test = first.test_counts.iter().sum::<usize>();
    check(
        same && ortho < 1e-8 && train == 1000 && test == 100,
        format!(
            "hashes equal: {same} ({}...); PCA orthonormality error {ortho:.2e} (tol 1e-8); train/test {train}/{test}",
            &first.dataset_hash[..12]
        ),
    )
}

fn data_dir() -> PathBuf {
    std::env::var_os("GQHAN_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fashion-mnist"))
}

fn main() {
    let scratch = tempfile::tempdir().expect("temporary directory");
    let data_dir = data_dir();
    let prepared = commands::prepare_data(
        &PrepareArgs::from_dir(&data_dir, scratch.path().join("data"), DatasetOptions::default()),
        &mut Vec::new(),
    );
    let dataset = prepared
        .as_ref()
        .map_err(|e| format!("dataset unavailable under {}: {e}", data_dir.display()))
        .and_then(|r| commands::load_dataset(&r.cache).map(|(d, _)| d).map_err(|e| e.to_string()));

    type Criterion<'a> = (&'a str, Duration, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("unitarity suite", Duration::from_secs(5), Box::new(unitarity)),
        ("oracle equivalence", Duration::from_secs(10), Box::new(oracle_equivalence)),
        ("Grover sanity", Duration::from_secs(1), Box::new(grover)),
        ("gradient gate", Duration::from_secs(30), Box::new(gradient_gate)),
        (
            "classification reproduction",
            Duration::from_secs(600),
            Box::new(|| classification(dataset.as_ref().map_err(Clone::clone)?)),
        ),
        (
            "noise trend reproduction",
            Duration::from_secs(3600),
            Box::new(|| {
                let r = prepared.as_ref().map_err(|e| e.to_string())?;
                noise_trends(&r.cache, &scratch.path().join("sweep"))
            }),
        ),
        ("cross-backend agreement", Duration::from_secs(10), Box::new(cross_backend)),
        ("QHAS determinism", Duration::from_secs(1), Box::new(qhas_values)),
        (
            "data pipeline determinism",
            Duration::from_secs(600),
            Box::new(|| {
                let r = prepared.as_ref().map_err(|e| e.to_string())?;
                data_pipeline(r, &data_dir, scratch.path())
            }),
        ),
    ];

    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (mut ok, mut detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if elapsed > *budget {
            ok = false;
            detail = format!("{detail} | over the {budget:?} budget");
        }
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} {:<30} {}  ({:.2}s)  {detail}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
