//! Hard attention scores of the discrete primitives.
//!
//! Primitive `b` counts as selected when its control angle sits on
//! `(4k + 1)π`, where `R_X(θ)` equals `X` up to a global phase.

use alloc::vec::Vec;

use crate::ansatz::ParamVector;
use crate::error::{config_err, Result};

/// Default tolerance, in radians, for calling an angle "on" `(4k + 1)π`.
pub const DEFAULT_EPSILON: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QhasEntry {
    pub dp_index: usize,
    pub theta: f64,
    /// 1 when selected, else 0.
    pub hard_score: u8,
    pub distance_to_selection: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QhasReport {
    pub epsilon: f64,
    pub entries: Vec<QhasEntry>,
}

impl QhasReport {
    pub fn selected(&self) -> impl Iterator<Item = &QhasEntry> {
        self.entries.iter().filter(|e| e.hard_score == 1)
    }
}

/// `min_k |θ - (4k + 1)π|` over integers `k`.
pub fn selection_distance(theta: f64) -> f64 {
    use core::f64::consts::PI;
    let k = libm::round((theta / PI - 1.0) / 4.0);
    [k - 1.0, k, k + 1.0]
        .iter()
        .map(|k| (theta - (4.0 * k + 1.0) * PI).abs())
        .fold(f64::INFINITY, f64::min)
}

pub fn hard_score(theta: f64, epsilon: f64) -> u8 {
    u8::from(selection_distance(theta) <= epsilon)
}

/// Scores every oracle angle of `params`. `epsilon = 0` keeps only exact hits.
pub fn qhas(params: &ParamVector, epsilon: f64) -> Result<QhasReport> {
    qhas_for_angles(params.oracle(), epsilon)
}

/// Same as [`qhas`] for a bare list of oracle angles.
pub fn qhas_for_angles(angles: &[f64], epsilon: f64) -> Result<QhasReport> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(config_err!("epsilon must be a finite non-negative angle, got {epsilon}"));
    }
    let entries = angles
        .iter()
        .enumerate()
        .map(|(dp_index, &theta)| {
            let distance_to_selection = selection_distance(theta);
            QhasEntry {
                dp_index,
                theta,
                hard_score: u8::from(distance_to_selection <= epsilon),
                distance_to_selection,
            }
        })
        .collect();
    Ok(QhasReport { epsilon, entries })
}
