use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::{FRAC_PI_2, SQRT_2};

use crate::ansatz::{Circuit, ParamVector};
use crate::error::{config_err, Result};
use crate::noise::NoiseSpec;

use super::loss::{expectations, squared_error};
use super::{GradientMethod, Sample, FINITE_DIFFERENCE_STEP};

/// Coefficients `(c₁, c₂)` of the four-term shift rule for controlled
/// rotations: `∂E = c₁[E(θ+π/2) - E(θ-π/2)] - c₂[E(θ+3π/2) - E(θ-3π/2)]`.
pub const CRY_SHIFT_COEFFS: (f64, f64) = (
    (SQRT_2 + 1.0) / (4.0 * SQRT_2),
    (SQRT_2 - 1.0) / (4.0 * SQRT_2),
);

/// Gradient of `mean (y' - E)²` with respect to every angle.
pub fn gradient(
    batch: &[Sample],
    params: &ParamVector,
    method: GradientMethod,
    noise: Option<&NoiseSpec>,
) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(config_err!("gradient of an empty batch"));
    }
    match method {
        GradientMethod::ParameterShift => parameter_shift(batch, params, noise),
        GradientMethod::FiniteDifference => finite_difference(batch, params, noise),
    }
}

fn expectations_at(
    batch: &[Sample],
    params: &ParamVector,
    noise: Option<&NoiseSpec>,
) -> Result<Vec<f64>> {
    expectations(&Circuit::new(params)?, batch, noise)
}

/// Per-sample `∂E/∂θ_i` for every `i`, chained through the squared loss.
fn parameter_shift(
    batch: &[Sample],
    params: &ParamVector,
    noise: Option<&NoiseSpec>,
) -> Result<Vec<f64>> {
    let base = expectations_at(batch, params, noise)?;
    // dL/dE_j = -2 (y_j - E_j) / m
    let m = batch.len() as f64;
    let weights: Vec<f64> = batch
        .iter()
        .zip(&base)
        .map(|(s, e)| -2.0 * (s.label.target() - e) / m)
        .collect();

    let mut grad = vec![0.0; params.len()];
    for (i, g) in grad.iter_mut().enumerate() {
        let de = if params.is_diffusion_index(i) {
            let (c1, c2) = CRY_SHIFT_COEFFS;
            let near = shifted_difference(batch, params, i, FRAC_PI_2, noise)?;
            let far = shifted_difference(batch, params, i, 3.0 * FRAC_PI_2, noise)?;
            near.iter()
                .zip(&far)
                .map(|(a, b)| c1 * a - c2 * b)
                .collect::<Vec<_>>()
        } else {
            shifted_difference(batch, params, i, FRAC_PI_2, noise)?
                .into_iter()
                .map(|d| 0.5 * d)
                .collect()
        };
        *g = weights.iter().zip(&de).map(|(w, d)| w * d).sum();
    }
    Ok(grad)
}

/// `E(θ_i + s) - E(θ_i - s)` per sample.
fn shifted_difference(
    batch: &[Sample],
    params: &ParamVector,
    i: usize,
    shift: f64,
    noise: Option<&NoiseSpec>,
) -> Result<Vec<f64>> {
    let plus = expectations_at(batch, &params.shifted(i, shift), noise)?;
    let minus = expectations_at(batch, &params.shifted(i, -shift), noise)?;
    Ok(plus.iter().zip(&minus).map(|(p, q)| p - q).collect())
}

fn finite_difference(
    batch: &[Sample],
    params: &ParamVector,
    noise: Option<&NoiseSpec>,
) -> Result<Vec<f64>> {
    let h = FINITE_DIFFERENCE_STEP;
    let loss_at = |p: &ParamVector| -> Result<f64> {
        Ok(squared_error(batch, &expectations_at(batch, p, noise)?))
    };
    (0..params.len())
        .map(|i| {
            let up = loss_at(&params.shifted(i, h))?;
            let down = loss_at(&params.shifted(i, -h))?;
            Ok((up - down) / (2.0 * h))
        })
        .collect()
}
