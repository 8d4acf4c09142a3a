//! Single-qubit Kraus channels for the noisy-evaluation experiments.

use alloc::vec::Vec;

use crate::ansatz::{Circuit, ParamVector};
use crate::encoding::FeatureVector;
use crate::error::{config_err, Result};
use crate::gate::{Mat2, ONE, ZERO};
use crate::gates::x_matrix;
use crate::state::DensityMatrix;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum NoiseKind {
    BitFlip,
    AmplitudeDamping,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::BitFlip => "bit-flip",
            NoiseKind::AmplitudeDamping => "amplitude-damping",
        }
    }
}

impl core::str::FromStr for NoiseKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bit-flip" | "bitflip" | "bit_flip" => Ok(NoiseKind::BitFlip),
            "amplitude-damping" | "amplitude_damping" | "ad" => Ok(NoiseKind::AmplitudeDamping),
            other => Err(config_err!("unknown noise kind {other:?}")),
        }
    }
}

/// Where channels are inserted. Only one policy exists.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum NoisePlacement {
    /// The channel hits every qubit after encoding, oracle and diffusion.
    #[default]
    AfterEachStage,
}

impl NoisePlacement {
    pub fn name(self) -> &'static str {
        "after-each-stage"
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpec {
    kind: NoiseKind,
    p: f64,
    placement: NoisePlacement,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(config_err!("noise probability {p} outside [0, 1]"));
        }
        Ok(NoiseSpec {
            kind,
            p,
            placement: NoisePlacement::AfterEachStage,
        })
    }

    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::new(NoiseKind::BitFlip, p)
    }

    pub fn amplitude_damping(p: f64) -> Result<Self> {
        Self::new(NoiseKind::AmplitudeDamping, p)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn placement(&self) -> NoisePlacement {
        self.placement
    }

    /// Applies the channel to every qubit of `rho`.
    pub fn apply_to_all(&self, rho: &mut DensityMatrix) -> Result<()> {
        let ops = kraus_ops(self);
        for q in 0..rho.n_qubits() {
            rho.apply_kraus(q, &ops)?;
        }
        Ok(())
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Kraus operators of the channel, zero-weight terms dropped.
///
/// * bit flip: `{√(1-p) I, √p X}`
/// * amplitude damping: `{[[1, 0], [0, √(1-p)]], [[0, √p], [0, 0]]}`
pub fn kraus_ops(spec: &NoiseSpec) -> Vec<Mat2> {
    let p = spec.p;
    let mut ops = Vec::with_capacity(2);
    match spec.kind {
        NoiseKind::BitFlip => {
            if p < 1.0 {
                let s = real(libm::sqrt(1.0 - p));
                ops.push([[s, ZERO], [ZERO, s]]);
            }
            if p > 0.0 {
                let x = x_matrix();
                let s = real(libm::sqrt(p));
                ops.push([[x[0][0] * s, x[0][1] * s], [x[1][0] * s, x[1][1] * s]]);
            }
        }
        NoiseKind::AmplitudeDamping => {
            ops.push([[ONE, ZERO], [ZERO, real(libm::sqrt(1.0 - p))]]);
            if p > 0.0 {
                ops.push([[ZERO, real(libm::sqrt(p))], [ZERO, ZERO]]);
            }
        }
    }
    ops
}

/// `max |Σ K†K - I|`.
pub fn completeness_error(ops: &[Mat2]) -> f64 {
    let mut sum = [[ZERO; 2]; 2];
    for k in ops {
        for r in 0..2 {
            for c in 0..2 {
                sum[r][c] += k[0][r].conj() * k[0][c] + k[1][r].conj() * k[1][c];
            }
        }
    }
    let id = [[ONE, ZERO], [ZERO, ONE]];
    let mut worst: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            worst = worst.max((sum[r][c] - id[r][c]).norm());
        }
    }
    worst
}

/// `ρ ↦ Σ_k K_k ρ K_k†` with the channel on `qubit`.
pub fn apply_channel(rho: &DensityMatrix, spec: &NoiseSpec, qubit: usize) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_kraus(qubit, &kraus_ops(spec))?;
    Ok(out)
}

/// Density-matrix forward pass with the channel after every stage.
pub fn noisy_forward(v: &FeatureVector, params: &ParamVector, spec: &NoiseSpec) -> Result<f64> {
    Circuit::new(params)?.noisy_expectation(v, spec)
}
