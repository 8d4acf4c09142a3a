use alloc::vec::Vec;

use core::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{Circuit, ParamVector};
use crate::error::{config_err, Result};

use super::loss::evaluate_circuit;
use super::{gradient, lookahead, nesterov_step, Label, OptimizerState, Sample, TrainConfig};

/// Train and test splits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
}

/// Metrics recorded after the update of one step.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepMetrics {
    /// 1-based.
    pub step: usize,
    /// Surrogate loss over the full training split.
    pub train_loss: f64,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub config: TrainConfig,
    pub initial_params: ParamVector,
    pub final_params: ParamVector,
    pub steps: Vec<StepMetrics>,
}

impl RunRecord {
    /// Mean of `metric` over the last `window` steps.
    pub fn tail_mean(&self, window: usize, metric: impl Fn(&StepMetrics) -> f64) -> f64 {
        let tail = &self.steps[self.steps.len().saturating_sub(window)..];
        tail.iter().map(metric).sum::<f64>() / tail.len() as f64
    }

    pub fn final_loss(&self) -> f64 {
        self.steps.last().map_or(f64::NAN, |s| s.train_loss)
    }
}

/// Angles drawn uniformly from `[0, 2π)`.
pub fn initial_params(n_data: usize, rng: &mut impl Rng) -> Result<ParamVector> {
    let values = (0..ParamVector::len_for(n_data))
        .map(|_| rng.gen_range(0.0..TAU))
        .collect();
    ParamVector::from_values(n_data, values)
}

/// Runs `config.steps` Nesterov steps on random batches of the training
/// split. Batches are drawn without replacement from a per-epoch shuffle;
/// an epoch ends when fewer than `batch_size` unused samples remain.
///
/// `on_step` sees each step's metrics as soon as they are recorded.
pub fn train(
    data: &Dataset,
    config: &TrainConfig,
    mut on_step: impl FnMut(&StepMetrics),
) -> Result<RunRecord> {
    config.validate()?;
    let has = |label| data.train.iter().any(|s| s.label == label);
    if !has(Label::Zero) || !has(Label::One) {
        return Err(config_err!("training split must contain both classes"));
    }
    if data.test.is_empty() {
        return Err(config_err!("test split is empty"));
    }
    if config.batch_size > data.train.len() {
        return Err(config_err!(
            "batch size {} exceeds the {} training samples",
            config.batch_size,
            data.train.len()
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial = initial_params(config.n_data, &mut rng)?;
    let mut params = initial.clone();
    let mut opt = OptimizerState::new(params.len());
    let noise = config.noise.as_ref();

    let mut order: Vec<usize> = (0..data.train.len()).collect();
    order.shuffle(&mut rng);
    let mut cursor = 0;

    let mut steps = Vec::with_capacity(config.steps);
    let mut batch = Vec::with_capacity(config.batch_size);
    for step in 1..=config.steps {
        if cursor + config.batch_size > order.len() {
            order.shuffle(&mut rng);
            cursor = 0;
        }
        batch.clear();
        batch.extend(
            order[cursor..cursor + config.batch_size]
                .iter()
                .map(|&i| data.train[i].clone()),
        );
        cursor += config.batch_size;

        let ahead = ParamVector::from_values(
            config.n_data,
            lookahead(params.values(), &opt, config.momentum),
        )?;
        let grad = gradient(&batch, &ahead, config.gradient_method, noise)?;
        let (next, next_opt) = nesterov_step(params.values(), &opt, &grad, config)?;
        params = ParamVector::from_values(config.n_data, next)?;
        opt = next_opt;

        let circuit = Circuit::new(&params)?;
        let train_eval = evaluate_circuit(&circuit, &data.train, noise)?;
        let test_eval = evaluate_circuit(&circuit, &data.test, noise)?;
        let metrics = StepMetrics {
            step,
            train_loss: train_eval.loss,
            train_accuracy: train_eval.accuracy,
            test_accuracy: test_eval.accuracy,
        };
        on_step(&metrics);
        steps.push(metrics);
    }

    Ok(RunRecord {
        config: config.clone(),
        initial_params: initial,
        final_params: params,
        steps,
    })
}
