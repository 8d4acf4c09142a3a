//! The classifier circuit: flexible oracle followed by adaptive diffusion.
//!
//! The flexible oracle is the interleaving, for `b = 0 .. 2^n - 1`, of an
//! `R_X(θ_b)` rotation on the ancilla and the discrete primitive C-Λ(b).
//! The ancilla is never reset between blocks, so whether primitive `b` fires
//! depends on the cumulative rotation applied so far: at angles in `{0, π}`
//! each `π` toggles the ancilla, and primitive `b` fires iff an odd number of
//! toggles happened in blocks `0..=b`.
//!
//! The adaptive diffusion acts on the data register only:
//! `H^⊗n`, the CR_Y ring `CR_Y(θ_{2^n + b})[b → (b+1) mod n]` for ascending
//! `b`, MCZ, the mirrored ring with the second half of the diffusion angles
//! for descending `b`, and `H^⊗n` again. The two rings carry independent
//! angles, so the second half is the structural, not the numerical, adjoint
//! of the first.

use alloc::vec::Vec;

use crate::encoding::{prepare_register, FeatureVector};
use crate::error::{config_err, Result};
use crate::gate::GateOp;
use crate::gates::{self, DiscretePrimitiveSpec, ANCILLA};
use crate::noise::NoiseSpec;
use crate::state::{DensityMatrix, Measurable, StateVector, MAX_QUBITS};

/// Trainable angles, in radians: `2^n` oracle angles followed by `2n`
/// diffusion angles.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamVector {
    n_data: usize,
    values: Vec<f64>,
}

impl ParamVector {
    /// Number of angles for an `n`-qubit data register.
    pub fn len_for(n_data: usize) -> usize {
        (1 << n_data) + 2 * n_data
    }

    pub fn zeros(n_data: usize) -> Result<Self> {
        Self::from_values(n_data, alloc::vec![0.0; Self::len_for(n_data)])
    }

    pub fn from_values(n_data: usize, values: Vec<f64>) -> Result<Self> {
        if n_data == 0 || n_data + 1 > MAX_QUBITS {
            return Err(config_err!(
                "data register of {n_data} qubits is unsupported (need 1..={})",
                MAX_QUBITS - 1
            ));
        }
        let want = Self::len_for(n_data);
        if values.len() != want {
            return Err(config_err!(
                "{} parameters given, {want} needed for {n_data} data qubits",
                values.len()
            ));
        }
        Ok(ParamVector { n_data, values })
    }

    pub fn n_data(&self) -> usize {
        self.n_data
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// θ_0 .. θ_{2^n - 1}.
    pub fn oracle(&self) -> &[f64] {
        &self.values[..1 << self.n_data]
    }

    /// θ_{2^n} .. θ_{2^n + 2n - 1}.
    pub fn diffusion(&self) -> &[f64] {
        &self.values[1 << self.n_data..]
    }

    /// True for the angles that drive a CR_Y in the diffusion operator.
    pub fn is_diffusion_index(&self, i: usize) -> bool {
        i >= 1 << self.n_data
    }

    /// Copy with `values[i] += delta`.
    pub fn shifted(&self, i: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.values[i] += delta;
        out
    }
}

/// Order of the two gates inside each flexible-oracle block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum OracleOrder {
    /// `R_X(θ_b)` prepares the control, then C-Λ(b) reads it.
    #[default]
    RotationFirst,
    /// C-Λ(b) first, then `R_X(θ_b)`; the literal operator-product reading.
    PrimitiveFirst,
}

/// Flexible oracle gates, in time order.
pub fn flexible_oracle(params: &ParamVector) -> Vec<GateOp> {
    flexible_oracle_with_order(params, OracleOrder::RotationFirst)
}

pub fn flexible_oracle_with_order(params: &ParamVector, order: OracleOrder) -> Vec<GateOp> {
    let n = params.n_data;
    let mut out = Vec::with_capacity(2 << n);
    for (b, &theta) in params.oracle().iter().enumerate() {
        let rotation = gates::rx(theta, ANCILLA);
        let dp = gates::discrete_primitive(
            DiscretePrimitiveSpec::new(b, n).expect("b < 2^n by construction"),
        );
        match order {
            OracleOrder::RotationFirst => out.extend([rotation, dp]),
            OracleOrder::PrimitiveFirst => out.extend([dp, rotation]),
        }
    }
    out
}

/// Ring target of data qubit `b`: `b + 1`, wrapping `n - 1` to `0`.
fn ring_target(b: usize, n: usize) -> usize {
    if b == n - 1 {
        0
    } else {
        b + 1
    }
}

/// Adaptive diffusion gates on the data register, in time order.
pub fn adaptive_diffusion(params: &ParamVector) -> Result<Vec<GateOp>> {
    let n = params.n_data;
    if n < 2 {
        return Err(config_err!("adaptive diffusion needs n >= 2, got {n}"));
    }
    let data = gates::data_register(n);
    let angles = params.diffusion();
    let mut out = Vec::with_capacity(4 * n + 1);
    out.extend(data.iter().map(|&q| gates::hadamard(q)));
    for b in 0..n {
        out.push(gates::cry(angles[b], data[b], data[ring_target(b, n)])?);
    }
    out.push(gates::mcz(&data)?);
    for b in (0..n).rev() {
        out.push(gates::cry(angles[b + n], data[b], data[ring_target(b, n)])?);
    }
    out.extend(data.iter().map(|&q| gates::hadamard(q)));
    Ok(out)
}

/// Flexible oracle followed by adaptive diffusion. Encoding is applied
/// separately, as state preparation.
pub fn build_circuit(params: &ParamVector) -> Result<Vec<GateOp>> {
    Ok(Circuit::new(params)?.gates)
}

/// A compiled ansatz for fixed parameters, reusable across samples.
#[derive(Clone, Debug)]
pub struct Circuit {
    n_data: usize,
    gates: Vec<GateOp>,
    oracle_len: usize,
}

impl Circuit {
    pub fn new(params: &ParamVector) -> Result<Self> {
        Self::with_order(params, OracleOrder::RotationFirst)
    }

    pub fn with_order(params: &ParamVector, order: OracleOrder) -> Result<Self> {
        let mut gates = flexible_oracle_with_order(params, order);
        let oracle_len = gates.len();
        gates.extend(adaptive_diffusion(params)?);
        Ok(Circuit {
            n_data: params.n_data,
            gates,
            oracle_len,
        })
    }

    pub fn n_data(&self) -> usize {
        self.n_data
    }

    /// Total register width, ancilla included.
    pub fn n_qubits(&self) -> usize {
        self.n_data + 1
    }

    /// The measured qubit `q_n`.
    pub fn readout_qubit(&self) -> usize {
        self.n_data
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn oracle_gates(&self) -> &[GateOp] {
        &self.gates[..self.oracle_len]
    }

    pub fn diffusion_gates(&self) -> &[GateOp] {
        &self.gates[self.oracle_len..]
    }

    /// Final state for one sample.
    pub fn final_state(&self, v: &FeatureVector) -> Result<StateVector> {
        let mut state = prepare_register(v, self.n_data)?;
        state.apply_all(&self.gates)?;
        Ok(state)
    }

    /// `E = p(q_n = 0) - p(q_n = 1)` on the noiseless final state.
    pub fn expectation(&self, v: &FeatureVector) -> Result<f64> {
        self.final_state(v)?.expectation_z(self.readout_qubit())
    }

    /// Density-matrix evolution with `spec` applied to every qubit after the
    /// encoding, the oracle and the diffusion stage.
    pub fn noisy_final_state(&self, v: &FeatureVector, spec: &NoiseSpec) -> Result<DensityMatrix> {
        let mut rho = DensityMatrix::from_statevector(&prepare_register(v, self.n_data)?);
        spec.apply_to_all(&mut rho)?;
        rho.apply_all(self.oracle_gates())?;
        spec.apply_to_all(&mut rho)?;
        rho.apply_all(self.diffusion_gates())?;
        spec.apply_to_all(&mut rho)?;
        Ok(rho)
    }

    pub fn noisy_expectation(&self, v: &FeatureVector, spec: &NoiseSpec) -> Result<f64> {
        self.noisy_final_state(v, spec)?
            .expectation_z(self.readout_qubit())
    }

    /// Noiseless when `noise` is `None`.
    pub fn evaluate(&self, v: &FeatureVector, noise: Option<&NoiseSpec>) -> Result<f64> {
        match noise {
            None => self.expectation(v),
            Some(spec) => self.noisy_expectation(v, spec),
        }
    }
}

/// Encodes `v`, runs the circuit and returns `⟨Z_{q_n}⟩ ∈ [-1, 1]`.
pub fn forward(v: &FeatureVector, params: &ParamVector) -> Result<f64> {
    Circuit::new(params)?.expectation(v)
}
