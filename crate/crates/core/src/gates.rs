//! Constructors for the gate set: X, R_X, H, CR_Y, MCZ, the sign-flip
//! diagonal Λ(b), the discrete primitive C-Λ(b), and the textbook Grover
//! diffusion used as a correctness reference.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{circuit_err, config_err, Result};
use crate::gate::{GateOp, Mat2, ONE, ZERO};
use crate::state::{Measurable, StateVector};
use crate::C64;

/// Qubit index of the ancilla.
pub const ANCILLA: usize = 0;

/// Global indices of an `n`-qubit data register: `1..=n`.
pub fn data_register(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

pub fn x_matrix() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn rx_matrix(theta: f64) -> Mat2 {
    let (s, c) = libm::sincos(theta / 2.0);
    [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ]
}

pub fn ry_matrix(theta: f64) -> Mat2 {
    let (s, c) = libm::sincos(theta / 2.0);
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}

pub fn h_matrix() -> Mat2 {
    let r = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[r, r], [r, -r]]
}

pub fn pauli_x(target: usize) -> GateOp {
    GateOp::single(target, x_matrix())
}

pub fn rx(theta: f64, target: usize) -> GateOp {
    GateOp::single(target, rx_matrix(theta))
}

pub fn hadamard(target: usize) -> GateOp {
    GateOp::single(target, h_matrix())
}

/// Controlled R_Y: identity while `control` is `|0⟩`.
pub fn cry(theta: f64, control: usize, target: usize) -> Result<GateOp> {
    GateOp::controlled(control, target, ry_matrix(theta))
}

/// Multi-controlled Z over `qubits`: a single `-1` on the all-ones entry.
pub fn mcz(qubits: &[usize]) -> Result<GateOp> {
    if qubits.is_empty() {
        return Err(circuit_err!("MCZ needs at least one qubit"));
    }
    let mut diag = vec![ONE; 1 << qubits.len()];
    *diag.last_mut().unwrap() = -ONE;
    GateOp::diagonal(qubits.to_vec(), diag)
}

fn sign_flip(b: usize, width: usize) -> Result<Vec<C64>> {
    let dim = 1usize << width;
    if b >= dim {
        return Err(config_err!("basis index {b} out of range for {width} qubits"));
    }
    let mut diag = vec![ONE; dim];
    diag[b] = -ONE;
    Ok(diag)
}

/// Λ(b): identity except a `-1` at basis index `b` of the register `qubits`.
pub fn lambda_diag(b: usize, qubits: &[usize]) -> Result<GateOp> {
    GateOp::diagonal(qubits.to_vec(), sign_flip(b, qubits.len())?)
}

/// Which basis state of an `n`-qubit data register a discrete primitive flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscretePrimitiveSpec {
    b: usize,
    n: usize,
}

impl DiscretePrimitiveSpec {
    pub fn new(b: usize, n: usize) -> Result<Self> {
        if n == 0 || n >= crate::state::MAX_QUBITS {
            return Err(config_err!("data register of {n} qubits is out of range"));
        }
        if b >= 1 << n {
            return Err(config_err!("basis index {b} out of range for {n} data qubits"));
        }
        Ok(DiscretePrimitiveSpec { b, n })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// C-Λ(b): Λ(b) on the data register `1..=n`, controlled by the ancilla.
/// In block form `diag(I, Λ(b))` with the ancilla as the selecting bit.
pub fn discrete_primitive(spec: DiscretePrimitiveSpec) -> GateOp {
    let diag = sign_flip(spec.b, spec.n).expect("spec validated on construction");
    GateOp::ControlledDiagonal {
        control: ANCILLA,
        qubits: data_register(spec.n),
        diag,
    }
}

/// `H^⊗n X^⊗n MCZ X^⊗n H^⊗n` over `qubits` (gates listed in time order).
/// Equals `2|s⟩⟨s| - I` up to a global sign.
pub fn grover_diffusion_reference(qubits: &[usize]) -> Result<Vec<GateOp>> {
    if qubits.len() < 2 {
        return Err(config_err!("Grover diffusion needs at least 2 qubits"));
    }
    let mut gates = Vec::with_capacity(4 * qubits.len() + 1);
    gates.extend(qubits.iter().map(|&q| hadamard(q)));
    gates.extend(qubits.iter().map(|&q| pauli_x(q)));
    gates.push(mcz(qubits)?);
    gates.extend(qubits.iter().map(|&q| pauli_x(q)));
    gates.extend(qubits.iter().map(|&q| hadamard(q)));
    Ok(gates)
}

/// `floor(π/4 · √(2^n))`, the usual iteration count for one marked item.
pub fn optimal_grover_iterations(n: usize) -> usize {
    let n_items = (1u64 << n) as f64;
    libm::floor(core::f64::consts::FRAC_PI_4 * libm::sqrt(n_items)) as usize
}

/// Textbook Grover search for one `marked` item on `n` qubits.
///
/// Returns the probability of measuring `marked` after `0..=iterations`
/// rounds of oracle + reference diffusion, starting from the uniform state.
pub fn grover_search(n: usize, marked: usize, iterations: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(config_err!("Grover search needs n >= 2, got {n}"));
    }
    let qubits: Vec<usize> = (0..n).collect();
    let oracle = lambda_diag(marked, &qubits)?;
    let diffusion = grover_diffusion_reference(&qubits)?;

    let mut state = StateVector::new_zero(n)?;
    for &q in &qubits {
        state.apply(&hadamard(q))?;
    }
    let p_marked = |s: &StateVector| s.amplitudes()[marked].norm_sqr();
    let mut probs = vec![p_marked(&state)];
    for _ in 0..iterations {
        state.apply(&oracle)?;
        state.apply_all(&diffusion)?;
        probs.push(p_marked(&state));
    }
    debug_assert!((state.probability(0, 0)? + state.probability(0, 1)? - 1.0).abs() < 1e-9);
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::CMatrix;
    use core::f64::consts::PI;

    fn composite(gates: &[GateOp], n: usize) -> CMatrix {
        gates.iter().fold(CMatrix::identity(1 << n), |acc, g| {
            &g.embedded(n).unwrap() * &acc
        })
    }

    #[test]
    fn rx_zero_is_identity() {
        assert_eq!(rx(0.0, 0).payload_matrix(), CMatrix::identity(2));
    }

    #[test]
    fn cry_is_identity_on_control_zero() {
        let g = cry(1.234, 0, 1).unwrap();
        let mut s = StateVector::new_zero(2).unwrap();
        s.apply(&hadamard(1)).unwrap();
        let before = s.clone();
        s.apply(&g).unwrap();
        assert_eq!(s, before);
        assert!(cry(0.3, 2, 2).is_err());
    }

    #[test]
    fn mcz_three_diagonal() {
        let GateOp::Diagonal { diag, .. } = mcz(&[1, 2, 3]).unwrap() else {
            panic!("MCZ must be diagonal")
        };
        let expected = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0];
        assert_eq!(diag.iter().map(|d| d.re).collect::<Vec<_>>(), expected);
        assert!(diag.iter().all(|d| d.im == 0.0));
    }

    #[test]
    fn lambda_diag_examples() {
        let GateOp::Diagonal { diag, .. } = lambda_diag(0, &[1]).unwrap() else {
            unreachable!()
        };
        assert_eq!(diag, vec![-ONE, ONE]);

        let GateOp::Diagonal { diag, .. } = lambda_diag(2, &[1, 2, 3]).unwrap() else {
            unreachable!()
        };
        let mut expected = vec![ONE; 8];
        expected[2] = -ONE;
        assert_eq!(diag, expected);

        assert!(lambda_diag(8, &[1, 2, 3]).is_err());
    }

    #[test]
    fn discrete_primitive_on_excited_ancilla() {
        let n = 3;
        let dp = discrete_primitive(DiscretePrimitiveSpec::new(2, n).unwrap());
        let mut s = StateVector::new_zero(n + 1).unwrap();
        for q in data_register(n) {
            s.apply(&hadamard(q)).unwrap();
        }
        let idle = s.apply_gate(&dp).unwrap();
        assert_eq!(idle, s, "ancilla |0> leaves the data untouched");

        s.apply(&pauli_x(ANCILLA)).unwrap();
        let fired = s.apply_gate(&dp).unwrap();
        for d in 0..8 {
            let idx = 1 | (d << 1);
            let sign = if d == 2 { -1.0 } else { 1.0 };
            assert!((fired.amplitudes()[idx] - s.amplitudes()[idx] * sign).norm() < 1e-15);
        }
    }

    #[test]
    fn discrete_primitive_spec_validation() {
        assert!(DiscretePrimitiveSpec::new(8, 3).is_err());
        assert!(DiscretePrimitiveSpec::new(7, 3).is_ok());
        assert!(DiscretePrimitiveSpec::new(0, 0).is_err());
    }

    #[test]
    fn grover_diffusion_matches_reflection_for_two_qubits() {
        let n = 2;
        let gates = grover_diffusion_reference(&[0, 1]).unwrap();
        let u = composite(&gates, n);
        let s = 0.5;
        let reflection = CMatrix::from_fn(4, |r, c| {
            C64::new(2.0 * s * s - if r == c { 1.0 } else { 0.0 }, 0.0)
        });
        assert!(u.max_abs_diff_up_to_phase(&reflection) < 1e-12);
        assert!(grover_diffusion_reference(&[0]).is_err());
    }

    #[test]
    fn grover_diffusion_fixes_uniform_state() {
        let mut s = StateVector::new_zero(3).unwrap();
        for q in 0..3 {
            s.apply(&hadamard(q)).unwrap();
        }
        let mut t = s.clone();
        t.apply_all(&grover_diffusion_reference(&[0, 1, 2]).unwrap()).unwrap();
        assert!(s.phase_insensitive_distance(&t) < 1e-12);
    }

    #[test]
    fn grover_three_qubits_one_iteration() {
        // sin²(3φ) with sin φ = 1/√8
        let phi = (1.0 / 8.0f64.sqrt()).asin();
        let closed_form = (3.0 * phi).sin().powi(2);
        assert!((closed_form - 0.78125).abs() < 1e-12);
        for marked in 0..8 {
            let probs = grover_search(3, marked, 1).unwrap();
            assert!((probs[1] - 0.78125).abs() < 1e-12);
        }
        assert!((grover_search(2, 3, 1).unwrap()[1] - 1.0).abs() < 1e-12);
        assert_eq!(optimal_grover_iterations(2), 1);
        assert_eq!(optimal_grover_iterations(3), 2);
        assert!(grover_search(3, 8, 1).is_err());
    }

    #[test]
    fn fo_angle_pi_excites_ancilla_up_to_phase() {
        let s = StateVector::new_zero(1).unwrap().apply_gate(&rx(PI, 0)).unwrap();
        assert!((s.amplitudes()[1] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
