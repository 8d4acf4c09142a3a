//! Gate representation and the bit-masked application kernels.

use alloc::vec::Vec;

use crate::error::{circuit_err, Result};
use crate::matrix::CMatrix;
use crate::C64;

/// A 2x2 complex matrix, `m[row][col]`.
pub type Mat2 = [[C64; 2]; 2];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A gate plus the qubits it acts on.
///
/// Diagonal payloads are indexed by the listed qubits, LSB first: entry `d`
/// applies to basis states whose bit `qubits[k]` equals bit `k` of `d`.
#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    /// Dense single-qubit gate.
    Single { target: usize, matrix: Mat2 },
    /// Dense single-qubit gate applied when `control` is `|1⟩`.
    Controlled { control: usize, target: usize, matrix: Mat2 },
    /// Diagonal gate over a list of qubits.
    Diagonal { qubits: Vec<usize>, diag: Vec<C64> },
    /// Diagonal gate over `qubits`, applied when `control` is `|1⟩`.
    ControlledDiagonal {
        control: usize,
        qubits: Vec<usize>,
        diag: Vec<C64>,
    },
}

impl GateOp {
    pub fn single(target: usize, matrix: Mat2) -> Self {
        GateOp::Single { target, matrix }
    }

    pub fn controlled(control: usize, target: usize, matrix: Mat2) -> Result<Self> {
        if control == target {
            return Err(circuit_err!("control and target are both qubit {control}"));
        }
        Ok(GateOp::Controlled {
            control,
            target,
            matrix,
        })
    }

    pub fn diagonal(qubits: Vec<usize>, diag: Vec<C64>) -> Result<Self> {
        check_diagonal(&qubits, &diag)?;
        Ok(GateOp::Diagonal { qubits, diag })
    }

    pub fn controlled_diagonal(control: usize, qubits: Vec<usize>, diag: Vec<C64>) -> Result<Self> {
        check_diagonal(&qubits, &diag)?;
        if qubits.contains(&control) {
            return Err(circuit_err!("control qubit {control} is also a target"));
        }
        Ok(GateOp::ControlledDiagonal {
            control,
            qubits,
            diag,
        })
    }

    /// Every qubit the gate touches, control first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Single { target, .. } => alloc::vec![*target],
            GateOp::Controlled {
                control, target, ..
            } => alloc::vec![*control, *target],
            GateOp::Diagonal { qubits, .. } => qubits.clone(),
            GateOp::ControlledDiagonal {
                control, qubits, ..
            } => {
                let mut all = alloc::vec![*control];
                all.extend_from_slice(qubits);
                all
            }
        }
    }

    /// Checks that every index fits a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(circuit_err!(
                    "gate touches qubit {q} but the register has {n_qubits} qubits"
                ));
            }
        }
        Ok(())
    }

    /// The gate's own payload as a matrix over the qubits it touches
    /// (control, if any, as the low bit).
    pub fn payload_matrix(&self) -> CMatrix {
        match self {
            GateOp::Single { matrix, .. } => mat2(matrix),
            GateOp::Controlled { matrix, .. } => {
                // local index = control | target << 1
                CMatrix::from_fn(4, |r, c| {
                    let (rc, rt, cc, ct) = (r & 1, r >> 1, c & 1, c >> 1);
                    if rc != cc {
                        ZERO
                    } else if rc == 0 {
                        if rt == ct {
                            ONE
                        } else {
                            ZERO
                        }
                    } else {
                        matrix[rt][ct]
                    }
                })
            }
            GateOp::Diagonal { diag, .. } => CMatrix::from_diagonal(diag),
            GateOp::ControlledDiagonal { diag, .. } => {
                let mut full = Vec::with_capacity(2 * diag.len());
                for d in diag {
                    full.push(ONE);
                    full.push(*d);
                }
                CMatrix::from_diagonal(&full)
            }
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.payload_matrix().is_unitary(tol)
    }

    /// Reference embedding of the gate into the full `2^n` space, built from
    /// Kronecker products with identities. Independent of the kernels.
    pub fn embedded(&self, n_qubits: usize) -> Result<CMatrix> {
        self.validate(n_qubits)?;
        let dim = 1usize << n_qubits;
        Ok(match self {
            GateOp::Single { target, matrix } => kron_embed(n_qubits, |q| {
                if q == *target {
                    mat2(matrix)
                } else {
                    CMatrix::identity(2)
                }
            }),
            GateOp::Controlled {
                control,
                target,
                matrix,
            } => {
                let p0 = mat2(&[[ONE, ZERO], [ZERO, ZERO]]);
                let p1 = mat2(&[[ZERO, ZERO], [ZERO, ONE]]);
                let idle = kron_embed(n_qubits, |q| {
                    if q == *control {
                        p0.clone()
                    } else {
                        CMatrix::identity(2)
                    }
                });
                let active = kron_embed(n_qubits, |q| {
                    if q == *control {
                        p1.clone()
                    } else if q == *target {
                        mat2(matrix)
                    } else {
                        CMatrix::identity(2)
                    }
                });
                idle.add(&active)
            }
            GateOp::Diagonal { qubits, diag } => CMatrix::from_fn(dim, |r, c| {
                if r == c {
                    diag[gather(r, qubits)]
                } else {
                    ZERO
                }
            }),
            GateOp::ControlledDiagonal {
                control,
                qubits,
                diag,
            } => CMatrix::from_fn(dim, |r, c| {
                if r != c {
                    ZERO
                } else if (r >> control) & 1 == 0 {
                    ONE
                } else {
                    diag[gather(r, qubits)]
                }
            }),
        })
    }

    /// Applies the gate in place to `2^n_qubits` amplitudes stored at
    /// `buf[offset + i * stride]`. With `conjugate` the complex conjugate of
    /// the payload is used (needed for `ρ U†`). The payload need not be
    /// unitary, which lets Kraus operators reuse the kernel.
    pub(crate) fn apply_strided(
        &self,
        buf: &mut [C64],
        n_qubits: usize,
        offset: usize,
        stride: usize,
        conjugate: bool,
    ) {
        let dim = 1usize << n_qubits;
        let at = |i: usize| offset + i * stride;
        match self {
            GateOp::Single { target, matrix } => {
                let m = maybe_conj(matrix, conjugate);
                let mask = 1usize << target;
                for i in (0..dim).filter(|i| i & mask == 0) {
                    rotate_pair(buf, at(i), at(i | mask), &m);
                }
            }
            GateOp::Controlled {
                control,
                target,
                matrix,
            } => {
                let m = maybe_conj(matrix, conjugate);
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in (0..dim).filter(|i| i & cmask != 0 && i & tmask == 0) {
                    rotate_pair(buf, at(i), at(i | tmask), &m);
                }
            }
            GateOp::Diagonal { qubits, diag } => {
                for i in 0..dim {
                    let d = diag[gather(i, qubits)];
                    buf[at(i)] *= if conjugate { d.conj() } else { d };
                }
            }
            GateOp::ControlledDiagonal {
                control,
                qubits,
                diag,
            } => {
                let cmask = 1usize << control;
                for i in (0..dim).filter(|i| i & cmask != 0) {
                    let d = diag[gather(i, qubits)];
                    buf[at(i)] *= if conjugate { d.conj() } else { d };
                }
            }
        }
    }
}

fn check_diagonal(qubits: &[usize], diag: &[C64]) -> Result<()> {
    if qubits.is_empty() {
        return Err(circuit_err!("diagonal gate on an empty qubit list"));
    }
    if diag.len() != 1usize << qubits.len() {
        return Err(circuit_err!(
            "diagonal of length {} does not match {} qubits",
            diag.len(),
            qubits.len()
        ));
    }
    for (k, q) in qubits.iter().enumerate() {
        if qubits[..k].contains(q) {
            return Err(circuit_err!("qubit {q} listed twice"));
        }
    }
    Ok(())
}

/// Collects the bits of `index` at `qubits` into a local index, LSB first.
#[inline]
fn gather(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, q)| acc | (((index >> q) & 1) << k))
}

#[inline]
fn rotate_pair(buf: &mut [C64], i0: usize, i1: usize, m: &Mat2) {
    let (a, b) = (buf[i0], buf[i1]);
    buf[i0] = m[0][0] * a + m[0][1] * b;
    buf[i1] = m[1][0] * a + m[1][1] * b;
}

fn maybe_conj(m: &Mat2, conjugate: bool) -> Mat2 {
    if conjugate {
        [
            [m[0][0].conj(), m[0][1].conj()],
            [m[1][0].conj(), m[1][1].conj()],
        ]
    } else {
        *m
    }
}

pub(crate) fn mat2(m: &Mat2) -> CMatrix {
    CMatrix::from_row_major(2, alloc::vec![m[0][0], m[0][1], m[1][0], m[1][1]])
}

/// `M_{n-1} ⊗ … ⊗ M_0` with `factor(q)` on qubit `q`.
fn kron_embed(n_qubits: usize, factor: impl Fn(usize) -> CMatrix) -> CMatrix {
    (0..n_qubits)
        .rev()
        .fold(CMatrix::identity(1), |acc, q| acc.kron(&factor(q)))
}
