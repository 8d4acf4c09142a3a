//! State-vector and density-matrix representations.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{circuit_err, config_err, Error, Result};
use crate::gate::{GateOp, ONE, ZERO};
use crate::matrix::CMatrix;
use crate::C64;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

const NORM_TOL: f64 = 1e-10;

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(config_err!(
            "register of {n_qubits} qubits is outside 1..={MAX_QUBITS}"
        ));
    }
    Ok(())
}

/// Pure state over `n_qubits` qubits, `2^n_qubits` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new_zero(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the vector
    /// normalised within 1e-10.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(config_err!("{len} amplitudes is not a power of two"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let state = StateVector { n_qubits, amps };
        let norm = state.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Numerical(alloc::format!(
                "state norm {norm} is not 1"
            )));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        gate.apply_strided(&mut self.amps, self.n_qubits, 0, 1, false);
        Ok(())
    }

    /// Applies `gates` in order.
    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Value-returning form of [`StateVector::apply`].
    pub fn apply_gate(&self, gate: &GateOp) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply(gate)?;
        Ok(out)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `1 - |⟨self|other⟩|`, zero iff the states agree up to a global phase.
    pub fn phase_insensitive_distance(&self, other: &StateVector) -> f64 {
        1.0 - self.inner(other).norm()
    }
}

/// Mixed state as a row-major `2^n × 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    rho: Vec<C64>,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|`.
    pub fn from_statevector(state: &StateVector) -> Self {
        let a = &state.amps;
        let dim = a.len();
        let mut rho = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                rho.push(a[r] * a[c].conj());
            }
        }
        DensityMatrix {
            n_qubits: state.n_qubits,
            rho,
        }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut rho = vec![ZERO; dim * dim];
        for i in 0..dim {
            rho[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { n_qubits, rho })
    }

    /// Wraps a matrix after checking unit trace and Hermiticity (1e-10).
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let dim = m.dim();
        if !dim.is_power_of_two() {
            return Err(config_err!("density matrix dimension {dim} is not a power of two"));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let out = DensityMatrix {
            n_qubits,
            rho: m.as_slice().to_vec(),
        };
        let tr = out.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::Numerical(alloc::format!("trace {tr} is not 1")));
        }
        if out.hermiticity_error() > NORM_TOL {
            return Err(Error::Numerical("matrix is not Hermitian".into()));
        }
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.rho[row * self.dim() + col]
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_row_major(self.dim(), self.rho.clone())
    }

    pub fn trace(&self) -> C64 {
        let dim = self.dim();
        (0..dim).map(|i| self.rho[i * dim + i]).sum()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let dim = self.dim();
        let mut acc = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                // ρ Hermitian: (ρ²)_rr = Σ_c ρ_rc ρ_cr = Σ_c |ρ_rc|²
                acc += self.rho[r * dim + c].norm_sqr();
            }
        }
        acc
    }

    /// `max |ρ - ρ†|` elementwise.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.rho[r * dim + c] - self.rho[c * dim + r].conj()).norm());
            }
        }
        worst
    }

    /// `ρ ↦ U ρ U†` in place.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.sandwich(gate);
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Value-returning form of [`DensityMatrix::apply`].
    pub fn apply_gate(&self, gate: &GateOp) -> Result<DensityMatrix> {
        let mut out = self.clone();
        out.apply(gate)?;
        Ok(out)
    }

    /// `ρ ↦ Σ_k K_k ρ K_k†` for operators acting on a single qubit.
    pub fn apply_kraus(&mut self, qubit: usize, ops: &[crate::gate::Mat2]) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(circuit_err!(
                "channel on qubit {qubit} but the register has {} qubits",
                self.n_qubits
            ));
        }
        match ops {
            [] => Err(config_err!("empty Kraus set")),
            [only] => {
                self.sandwich(&GateOp::single(qubit, *only));
                Ok(())
            }
            _ => {
                let mut acc = vec![ZERO; self.rho.len()];
                for k in ops {
                    let mut term = self.clone();
                    term.sandwich(&GateOp::single(qubit, *k));
                    for (a, t) in acc.iter_mut().zip(&term.rho) {
                        *a += t;
                    }
                }
                self.rho = acc;
                Ok(())
            }
        }
    }

    fn sandwich(&mut self, gate: &GateOp) {
        let n = self.n_qubits;
        let dim = self.dim();
        // U ρ: act on every column.
        for col in 0..dim {
            gate.apply_strided(&mut self.rho, n, col, dim, false);
        }
        // (U ρ) U†: act with conj(U) on every row.
        for row in 0..dim {
            gate.apply_strided(&mut self.rho, n, row * dim, 1, true);
        }
    }
}

/// Exact single-qubit measurement statistics.
pub trait Measurable {
    fn n_qubits(&self) -> usize;

    /// Probability of reading `outcome` on `qubit`.
    fn probability(&self, qubit: usize, outcome: u8) -> Result<f64>;

    /// `⟨Z_qubit⟩ = p(0) - p(1)`.
    fn expectation_z(&self, qubit: usize) -> Result<f64> {
        Ok(self.probability(qubit, 0)? - self.probability(qubit, 1)?)
    }
}

fn check_measurement(n_qubits: usize, qubit: usize, outcome: u8) -> Result<()> {
    if qubit >= n_qubits {
        return Err(circuit_err!(
            "measured qubit {qubit} but the register has {n_qubits} qubits"
        ));
    }
    if outcome > 1 {
        return Err(config_err!("outcome must be 0 or 1, got {outcome}"));
    }
    Ok(())
}

impl Measurable for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probability(&self, qubit: usize, outcome: u8) -> Result<f64> {
        check_measurement(self.n_qubits, qubit, outcome)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> qubit) & 1 == outcome as usize)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }
}

impl Measurable for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `tr(P ρ)` with `P` the projector on `outcome`.
    fn probability(&self, qubit: usize, outcome: u8) -> Result<f64> {
        check_measurement(self.n_qubits, qubit, outcome)?;
        let dim = self.dim();
        Ok((0..dim)
            .filter(|i| (i >> qubit) & 1 == outcome as usize)
            .map(|i| self.rho[i * dim + i].re)
            .sum())
    }
}

/// Probability of `outcome` on `qubit` for either backend.
pub fn expectation_projector<S: Measurable>(state: &S, qubit: usize, outcome: u8) -> Result<f64> {
    state.probability(qubit, outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn zero_state() {
        let s = StateVector::new_zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO]);
        let s = StateVector::new_zero(4).unwrap();
        assert_eq!(s.amplitudes().len(), 16);
        assert_eq!(s.amplitudes()[0], ONE);
        assert!(matches!(StateVector::new_zero(0), Err(Error::Config(_))));
        assert!(StateVector::new_zero(25).is_err());
    }

    #[test]
    fn single_qubit_gate_examples() {
        let s = StateVector::new_zero(1).unwrap();
        let rx = s.apply_gate(&gates::rx(PI, 0)).unwrap();
        assert!(close(rx.amplitudes()[0], ZERO));
        assert!(close(rx.amplitudes()[1], C64::new(0.0, -1.0)));

        let h = s.apply_gate(&gates::hadamard(0)).unwrap();
        assert!(close(h.amplitudes()[0], C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(h.amplitudes()[1], C64::new(FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn mcz_flips_all_ones() {
        let mut amps = vec![ZERO; 8];
        amps[7] = ONE;
        let s = StateVector::from_amplitudes(amps).unwrap();
        let out = s.apply_gate(&gates::mcz(&[0, 1, 2]).unwrap()).unwrap();
        assert!(close(out.amplitudes()[7], -ONE));
    }

    #[test]
    fn out_of_range_gate_is_rejected() {
        let mut s = StateVector::new_zero(2).unwrap();
        assert!(matches!(s.apply(&gates::hadamard(2)), Err(Error::Circuit(_))));
    }

    #[test]
    fn density_matrix_gate_examples() {
        let zero = DensityMatrix::from_statevector(&StateVector::new_zero(1).unwrap());
        let one = zero.apply_gate(&gates::pauli_x(0)).unwrap();
        assert!(close(one.get(1, 1), ONE));
        assert!(close(one.get(0, 0), ZERO));

        let plus = zero.apply_gate(&gates::hadamard(0)).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(plus.get(r, c), C64::new(0.5, 0.0)));
            }
        }

        let same = zero.apply_gate(&gates::rx(0.0, 0)).unwrap();
        assert_eq!(same.to_matrix().max_abs_diff(&zero.to_matrix()), 0.0);
    }

    #[test]
    fn from_statevector_examples() {
        let dm = DensityMatrix::from_statevector(&StateVector::new_zero(1).unwrap());
        assert_eq!(dm.to_matrix(), CMatrix::from_diagonal(&[ONE, ZERO]));

        let plus = StateVector::from_amplitudes(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let dm = DensityMatrix::from_statevector(&plus);
        assert!((0..4).all(|i| close(dm.to_matrix().as_slice()[i], C64::new(0.5, 0.0))));
        assert!((dm.purity() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn projector_expectations() {
        let s = StateVector::new_zero(4).unwrap();
        assert_eq!(expectation_projector(&s, 3, 0).unwrap(), 1.0);

        let mut s = StateVector::new_zero(3).unwrap();
        s.apply(&gates::hadamard(1)).unwrap();
        assert!((expectation_projector(&s, 1, 1).unwrap() - 0.5).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((expectation_projector(&mixed, 0, 0).unwrap() - 0.5).abs() < 1e-12);
        assert!(expectation_projector(&mixed, 1, 0).is_err());
    }

    #[test]
    fn from_matrix_checks_trace() {
        assert!(DensityMatrix::from_matrix(&CMatrix::identity(2)).is_err());
        assert!(DensityMatrix::from_matrix(&CMatrix::identity(2).scale(C64::new(0.5, 0.0))).is_ok());
    }
}
