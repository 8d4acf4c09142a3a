//! Amplitude encoding of real feature vectors.
//!
//! The encoding is realised as a direct amplitude write rather than a gate
//! sequence; the resulting state is the same.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gate::ZERO;
use crate::state::StateVector;
use crate::C64;

/// A non-empty vector of finite reals with at least one nonzero entry.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Encoding("empty feature vector".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Encoding("feature vector contains NaN or Inf".into()));
        }
        if values.iter().all(|v| *v == 0.0) {
            return Err(Error::Encoding(
                "all-zero feature vector has no amplitude encoding".into(),
            ));
        }
        Ok(FeatureVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Qubits needed to hold the vector: `ceil(log2 l)`, at least one.
    pub fn register_width(&self) -> usize {
        let l = self.0.len();
        (l.next_power_of_two().trailing_zeros() as usize).max(1)
    }

    fn normalized(&self) -> impl Iterator<Item = f64> + '_ {
        let norm = libm::sqrt(self.0.iter().map(|a| a * a).sum::<f64>());
        self.0.iter().map(move |a| a / norm)
    }
}

/// Data-register state with `α_b = a_b / ‖a‖` for `b < l` and zero padding
/// up to `2^ceil(log2 l)`.
pub fn amplitude_encode(v: &FeatureVector) -> Result<StateVector> {
    let width = v.register_width();
    let mut amps = vec![ZERO; 1 << width];
    for (a, x) in amps.iter_mut().zip(v.normalized()) {
        *a = C64::new(x, 0.0);
    }
    StateVector::from_amplitudes(amps)
}

/// `|0⟩_ancilla ⊗ |In⟩` on `1 + ceil(log2 l)` qubits.
pub fn prepare_initial(v: &FeatureVector) -> Result<StateVector> {
    prepare_register(v, v.register_width())
}

/// Like [`prepare_initial`] but with an explicit data-register width, which
/// must be able to hold all `l` features.
pub fn prepare_register(v: &FeatureVector, n_data: usize) -> Result<StateVector> {
    if v.len() > 1 << n_data {
        return Err(Error::Encoding(alloc::format!(
            "{} features do not fit {n_data} data qubits",
            v.len()
        )));
    }
    let mut amps = vec![ZERO; 1 << (n_data + 1)];
    for (d, x) in v.normalized().enumerate() {
        // ancilla is bit 0 and stays |0⟩
        amps[d << 1] = C64::new(x, 0.0);
    }
    StateVector::from_amplitudes(amps)
}
