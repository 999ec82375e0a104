//! Dense complex linear algebra used by the oracles: Kronecker products,
//! the matrix exponential, Hermitian spectra and qubit partial operations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{domain, Result};

/// Square complex matrix over qubit computational bases; site 1 is the most
/// significant bit of the row/column index.
pub type DenseMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> DenseMatrix {
    DenseMatrix::identity(dim, dim)
}

/// Number of qubits `k` such that the matrix is `2^k x 2^k`.
pub fn qubit_count(m: &DenseMatrix) -> Result<usize> {
    let d = m.nrows();
    if m.ncols() != d || d == 0 || !d.is_power_of_two() {
        return domain(format!("matrix of shape {}x{} is not a qubit operator", d, m.ncols()));
    }
    Ok(d.trailing_zeros() as usize)
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &DenseMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn trace(m: &DenseMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn one_norm(m: &DenseMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with the degree-13 Padé
/// approximant.
pub fn expm(a: &DenseMatrix) -> DenseMatrix {
    let n = a.nrows();
    let theta13 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > theta13 { (norm / theta13).log2().ceil() as i32 } else { 0 };
    let a = a * C64::new(0.5f64.powi(s), 0.0);
    let b = |k: usize| C64::new(PADE13[k], 0.0);
    let id = identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
    let u = &a * (u_inner + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1));
    let v_inner = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8));
    let v = v_inner + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is singular");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Partial transpose over the first `split` qubits of a `2^n x 2^n` matrix.
pub fn partial_transpose(rho: &DenseMatrix, split: usize) -> Result<DenseMatrix> {
    let n = qubit_count(rho)?;
    if split > n {
        return domain(format!("split {split} exceeds {n} qubits"));
    }
    let low = n - split;
    let low_mask = (1usize << low) - 1;
    let dim = rho.nrows();
    Ok(DenseMatrix::from_fn(dim, dim, |r, c| {
        let (ra, rb) = (r >> low, r & low_mask);
        let (ca, cb) = (c >> low, c & low_mask);
        rho[((ca << low) | rb, (ra << low) | cb)]
    }))
}

/// Reduced matrix on `keep` (1-based qubit labels, output in the given order).
pub fn partial_trace(rho: &DenseMatrix, keep: &[usize]) -> Result<DenseMatrix> {
    let n = qubit_count(rho)?;
    if keep.is_empty() {
        return domain("partial trace needs at least one kept qubit");
    }
    for (i, &s) in keep.iter().enumerate() {
        if s == 0 || s > n || keep[..i].contains(&s) {
            return domain(format!("invalid kept qubit {s} for {n} qubits"));
        }
    }
    let traced: Vec<usize> = (1..=n).filter(|s| !keep.contains(s)).collect();
    let k = keep.len();
    let dk = 1usize << k;
    let mut out = DenseMatrix::zeros(dk, dk);
    let compose = |sub: usize, env: usize| {
        let mut idx = 0usize;
        for (p, &s) in keep.iter().enumerate() {
            idx |= ((sub >> (k - 1 - p)) & 1) << (n - s);
        }
        for (p, &s) in traced.iter().enumerate() {
            idx |= ((env >> (traced.len() - 1 - p)) & 1) << (n - s);
        }
        idx
    };
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = ZERO;
            for e in 0..(1usize << traced.len()) {
                acc += rho[(compose(r, e), compose(c, e))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Outer product `|v><v|`.
pub fn projector(v: &DVector<C64>) -> DenseMatrix {
    v * v.adjoint()
}
