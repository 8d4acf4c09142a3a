//! Dense reference constructions built from bit arithmetic, independent of the
//! simulator kernels and of `GateOp::embedded`.

#![allow(dead_code)]

use gqhan_core::gate::Mat2;
use gqhan_core::C64;
use rand::Rng;

pub type Dense = Vec<Vec<C64>>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(dim: usize) -> Dense {
    (0..dim)
        .map(|r| (0..dim).map(|k| if r == k { c(1.0) } else { c(0.0) }).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == c(0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Dense, v: &[C64]) -> Vec<C64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn adjoint(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn bit(x: usize, q: usize) -> usize {
    (x >> q) & 1
}

/// `m` on qubit `q` of an `n`-qubit register, identity elsewhere.
pub fn single(n: usize, q: usize, m: &Mat2) -> Dense {
    let dim = 1 << n;
    let mask = !(1usize << q);
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|k| {
                    if r & mask == k & mask {
                        m[bit(r, q)][bit(k, q)]
                    } else {
                        c(0.0)
                    }
                })
                .collect()
        })
        .collect()
}

/// `m` on `target` when `control` is set.
pub fn controlled(n: usize, control: usize, target: usize, m: &Mat2) -> Dense {
    let dim = 1 << n;
    let u = single(n, target, m);
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|k| {
                    if bit(k, control) == 1 {
                        u[r][k]
                    } else if r == k {
                        c(1.0)
                    } else {
                        c(0.0)
                    }
                })
                .collect()
        })
        .collect()
}

/// Local index of basis state `x` on `qubits`, first listed qubit lowest.
pub fn local_index(x: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .map(|(i, &q)| bit(x, q) << i)
        .sum()
}

pub fn diagonal(n: usize, qubits: &[usize], diag: &[C64], control: Option<usize>) -> Dense {
    let dim = 1 << n;
    let mut out = identity(dim);
    for (x, row) in out.iter_mut().enumerate() {
        if control.map_or(true, |cq| bit(x, cq) == 1) {
            row[x] = diag[local_index(x, qubits)];
        }
    }
    out
}

pub fn rx(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [[c(co), C64::new(0.0, -s)], [C64::new(0.0, -s), c(co)]]
}

pub fn ry(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [[c(co), c(-s)], [c(s), c(co)]]
}

pub fn h() -> Mat2 {
    let r = c(std::f64::consts::FRAC_1_SQRT_2);
    [[r, r], [r, -r]]
}

pub fn x() -> Mat2 {
    [[c(0.0), c(1.0)], [c(1.0), c(0.0)]]
}

pub fn random_mat2(rng: &mut impl Rng) -> Mat2 {
    let mut z = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    [[z(), z()], [z(), z()]]
}

/// A Haar-ish random unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary2(rng: &mut impl Rng) -> Mat2 {
    let m = random_mat2(rng);
    let a = [m[0][0], m[1][0]];
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let a = [a[0] / na, a[1] / na];
    let b = [m[0][1], m[1][1]];
    let proj = a[0].conj() * b[0] + a[1].conj() * b[1];
    let b = [b[0] - proj * a[0], b[1] - proj * a[1]];
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    [[a[0], b[0] / nb], [a[1], b[1] / nb]]
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..1 << n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

pub fn random_phase_diag(len: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..len)
        .map(|_| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Smallest eigenvalue of a Hermitian matrix, via cyclic Jacobi on the real
/// symmetric embedding `[[A, -B], [B, A]]` of `A + iB`.
pub fn min_eigenvalue_hermitian(m: &Dense) -> f64 {
    let n = m.len();
    let size = 2 * n;
    let mut a = vec![vec![0.0; size]; size];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = m[i][j].re;
            a[i + n][j + n] = m[i][j].re;
            a[i][j + n] = -m[i][j].im;
            a[i + n][j] = m[i][j].im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..size)
            .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..size {
            for q in p + 1..size {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..size {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..size {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..size).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// Dense matrix of any gate, from the bit-level definitions above.
pub fn dense_of(gate: &gqhan_core::GateOp, n: usize) -> Dense {
    use gqhan_core::GateOp;
    match gate {
        GateOp::Single { target, matrix } => single(n, *target, matrix),
        GateOp::Controlled {
            control,
            target,
            matrix,
        } => controlled(n, *control, *target, matrix),
        GateOp::Diagonal { qubits, diag } => diagonal(n, qubits, diag, None),
        GateOp::ControlledDiagonal {
            control,
            qubits,
            diag,
        } => diagonal(n, qubits, diag, Some(*control)),
    }
}

/// Time-ordered gate list to a single dense unitary.
pub fn dense_circuit(gates: &[gqhan_core::GateOp], n: usize) -> Dense {
    gates
        .iter()
        .fold(identity(1 << n), |acc, g| matmul(&dense_of(g, n), &acc))
}

pub fn to_dense(m: &gqhan_core::CMatrix) -> Dense {
    let d = m.dim();
    (0..d).map(|i| (0..d).map(|j| m[(i, j)]).collect()).collect()
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
