//! Loss, gradients, Nesterov momentum and the training loop.
//!
//! The trained loss is the smooth surrogate `mean (y' - E)²` with the class
//! map `0 → +1`, `1 → -1`; `sgn(E)` (with `sgn(0) = +1`) is only used to
//! score accuracy.

mod gradient;
mod loss;
mod optimizer;
mod run;

use alloc::vec::Vec;

use crate::ansatz::ParamVector;
use crate::encoding::FeatureVector;
use crate::error::{config_err, Result};
use crate::noise::NoiseSpec;

pub use gradient::{gradient, CRY_SHIFT_COEFFS};
pub use loss::{accuracy, evaluate, loss, Evaluation};
pub use optimizer::{lookahead, nesterov_step, OptimizerState};
pub use run::{initial_params, train, Dataset, RunRecord, StepMetrics};

/// Binary class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn from_class(class: u8) -> Result<Self> {
        match class {
            0 => Ok(Label::Zero),
            1 => Ok(Label::One),
            other => Err(config_err!("label {other} is not binary")),
        }
    }

    pub fn class(self) -> u8 {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }

    /// Regression target: `+1` for class 0, `-1` for class 1.
    pub fn target(self) -> f64 {
        match self {
            Label::Zero => 1.0,
            Label::One => -1.0,
        }
    }

    /// Inverse of [`Label::target`], using `sgn(0) = +1`.
    pub fn from_expectation(e: f64) -> Self {
        if e >= 0.0 {
            Label::Zero
        } else {
            Label::One
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sample {
    pub features: FeatureVector,
    pub label: Label,
}

impl Sample {
    pub fn new(features: Vec<f64>, label: Label) -> Result<Self> {
        Ok(Sample {
            features: FeatureVector::new(features)?,
            label,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GradientMethod {
    /// Exact shift rules: two terms for R_X, four terms for CR_Y.
    #[default]
    ParameterShift,
    /// Central differences with step [`FINITE_DIFFERENCE_STEP`].
    FiniteDifference,
}

impl GradientMethod {
    pub fn name(self) -> &'static str {
        match self {
            GradientMethod::ParameterShift => "parameter-shift",
            GradientMethod::FiniteDifference => "finite-difference",
        }
    }
}

impl core::str::FromStr for GradientMethod {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parameter-shift" | "ps" => Ok(GradientMethod::ParameterShift),
            "finite-difference" | "fd" => Ok(GradientMethod::FiniteDifference),
            other => Err(config_err!("unknown gradient method {other:?}")),
        }
    }
}

pub const FINITE_DIFFERENCE_STEP: f64 = 1e-4;

/// Optimiser and loop settings. Defaults follow the reference experiment:
/// η = 0.09, γ = 0.9, batches of 30, 120 steps.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub steps: usize,
    pub seed: u64,
    pub gradient_method: GradientMethod,
    pub noise: Option<NoiseSpec>,
    /// Data-register width of the ansatz.
    pub n_data: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.09,
            momentum: 0.9,
            batch_size: 30,
            steps: 120,
            seed: 0,
            gradient_method: GradientMethod::ParameterShift,
            noise: None,
            n_data: 3,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(config_err!("learning rate must be positive, got {}", self.learning_rate));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(config_err!("momentum must lie in [0, 1), got {}", self.momentum));
        }
        if self.batch_size == 0 {
            return Err(config_err!("batch size must be at least 1"));
        }
        if self.steps == 0 {
            return Err(config_err!("steps must be at least 1"));
        }
        if self.n_data < 2 {
            return Err(config_err!("the ansatz needs at least 2 data qubits, got {}", self.n_data));
        }
        ParamVector::zeros(self.n_data).map(|_| ())
    }
}
