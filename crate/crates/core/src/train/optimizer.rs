use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config_err, Result};

use super::TrainConfig;

/// Nesterov accumulator `a` and step counter `t`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizerState {
    pub accumulator: Vec<f64>,
    pub step: usize,
}

impl OptimizerState {
    pub fn new(n_params: usize) -> Self {
        OptimizerState {
            accumulator: vec![0.0; n_params],
            step: 0,
        }
    }
}

/// Point at which the gradient is taken: `θ - γ a`.
pub fn lookahead(params: &[f64], state: &OptimizerState, momentum: f64) -> Vec<f64> {
    params
        .iter()
        .zip(&state.accumulator)
        .map(|(p, a)| p - momentum * a)
        .collect()
}

/// One Nesterov update:
/// `a' = γ a + η ∇f(θ - γ a)`, `θ' = θ - a'`.
///
/// `grad_at_lookahead` must already be evaluated at [`lookahead`].
pub fn nesterov_step(
    params: &[f64],
    state: &OptimizerState,
    grad_at_lookahead: &[f64],
    config: &TrainConfig,
) -> Result<(Vec<f64>, OptimizerState)> {
    if params.len() != state.accumulator.len() || params.len() != grad_at_lookahead.len() {
        return Err(config_err!(
            "shape mismatch: {} params, {} accumulator entries, {} gradient entries",
            params.len(),
            state.accumulator.len(),
            grad_at_lookahead.len()
        ));
    }
    let (gamma, eta) = (config.momentum, config.learning_rate);
    let accumulator: Vec<f64> = state
        .accumulator
        .iter()
        .zip(grad_at_lookahead)
        .map(|(a, g)| gamma * a + eta * g)
        .collect();
    let next = params
        .iter()
        .zip(&accumulator)
        .map(|(p, a)| p - a)
        .collect();
    Ok((
        next,
        OptimizerState {
            accumulator,
            step: state.step + 1,
        },
    ))
}
