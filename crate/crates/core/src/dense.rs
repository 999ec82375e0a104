//! Brute-force reference: the Lindblad generator as an explicit
//! superoperator on `2^N x 2^N` density matrices, exact propagation by matrix
//! exponentials, and dense extraction of observables, reduced matrices and
//! the operator-space entanglement entropy.
//!
//! Density matrices are vectorized by row stacking, `vec(rho)[r * 2^N + c] =
//! rho[r, c]`. Without a Hamiltonian the generator is a sum of commuting
//! single-site terms; with an Ising pair the two coupled sites form one joint
//! term. [`Liouvillian`] keeps those terms separately so that propagation
//! factorizes into small exact exponentials, while [`Liouvillian::matrix`]
//! assembles the full `4^N x 4^N` generator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, resource, Result};
use crate::linalg::{expm, hermitian_eigenvalues, hermiticity_defect, partial_trace, qubit_count, trace, DenseMatrix, ONE, ZERO};
use crate::mps::sorted_svd;
use crate::oracle::Rates;
use crate::pauli::{PauliAxis, PauliWord};
use crate::vectorized::entropy_of_spectrum;

/// Largest system handled by the dense oracle.
pub const DENSE_LIOUVILLE_MAX_SITES: usize = 6;

/// Optional coherent part `H = J Z_a Z_b`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianSpec {
    #[default]
    None,
    IsingPair { a: usize, b: usize, coupling: f64 },
}

impl HamiltonianSpec {
    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if let HamiltonianSpec::IsingPair { a, b, coupling } = *self {
            if a == b || a == 0 || b == 0 || a > n_sites || b > n_sites {
                return domain(format!("Ising pair ({a}, {b}) is invalid for {n_sites} sites"));
            }
            if !coupling.is_finite() {
                return domain("Ising coupling must be finite");
            }
        }
        Ok(())
    }

    /// The pair ordered as `(min, max)` with its coupling.
    pub fn ordered_pair(&self) -> Option<(usize, usize, f64)> {
        match *self {
            HamiltonianSpec::None => None,
            HamiltonianSpec::IsingPair { a, b, coupling } => Some((a.min(b), a.max(b), coupling)),
        }
    }
}

/// `d rho / dt` for the basis element `|r><c|` on `n` qubits, as a list of
/// `(r', c', amplitude)` contributions.
fn generator_column(n: usize, rates: &Rates, ham: &HamiltonianSpec, r: usize, c: usize) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    let mut diag = ZERO;
    for k in 1..=n {
        let bit = 1usize << (n - k);
        let (rk, ck) = (r & bit != 0, c & bit != 0);
        // g0: L = sigma^+ = |0><1|, L^dag L = |1><1|
        if rates.g0 != 0.0 {
            if rk && ck {
                out.push((r ^ bit, c ^ bit, ONE * rates.g0));
            }
            diag -= ONE * (0.5 * rates.g0 * (rk as u8 + ck as u8) as f64);
        }
        // g1: L = sigma^- = |1><0|, L^dag L = |0><0|
        if rates.g1 != 0.0 {
            if !rk && !ck {
                out.push((r | bit, c | bit, ONE * rates.g1));
            }
            diag -= ONE * (0.5 * rates.g1 * (!rk as u8 + !ck as u8) as f64);
        }
        // g2: Z rho Z - rho
        if rates.g2 != 0.0 && rk != ck {
            diag -= ONE * (2.0 * rates.g2);
        }
    }
    if let Some((a, b, j)) = ham.ordered_pair() {
        let zz = |x: usize| {
            let pa = (x >> (n - a)) & 1;
            let pb = (x >> (n - b)) & 1;
            if pa == pb {
                1.0
            } else {
                -1.0
            }
        };
        // -i [H, |r><c|]
        diag += C64::new(0.0, -j * (zz(r) - zz(c)));
    }
    if diag != ZERO {
        out.push((r, c, diag));
    }
    out
}

/// Full generator on `n` qubits in the row-stacking convention.
fn assemble(n: usize, rates: &Rates, ham: &HamiltonianSpec) -> DenseMatrix {
    let d = 1usize << n;
    let mut m = DenseMatrix::zeros(d * d, d * d);
    for r in 0..d {
        for c in 0..d {
            for (r2, c2, v) in generator_column(n, rates, ham, r, c) {
                m[(r2 * d + c2, r * d + c)] += v;
            }
        }
    }
    m
}

/// Reorders a row-stacked superoperator on `s` qubits into the per-site
/// grouping `(r_1 c_1)(r_2 c_2)...` with each pair encoded as `2 r_k + c_k`.
fn to_site_grouping(s: usize, m: &DenseMatrix) -> DenseMatrix {
    let d = 1usize << s;
    let grouped = |rc: usize| {
        let (r, c) = (rc / d, rc % d);
        let mut g = 0;
        for k in 0..s {
            let rb = (r >> (s - 1 - k)) & 1;
            let cb = (c >> (s - 1 - k)) & 1;
            g = g * 4 + 2 * rb + cb;
        }
        g
    };
    let mut out = DenseMatrix::zeros(d * d, d * d);
    for i in 0..d * d {
        for j in 0..d * d {
            out[(grouped(i), grouped(j))] = m[(i, j)];
        }
    }
    out
}

/// A commuting term of the generator acting on `sites` (1-based).
#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub sites: Vec<usize>,
    /// Generator in the per-site grouping of [`to_site_grouping`].
    pub generator: DenseMatrix,
}

#[derive(Clone, Debug)]
pub struct Liouvillian {
    n: usize,
    rates: Rates,
    hamiltonian: HamiltonianSpec,
    terms: Vec<LocalTerm>,
}

pub fn build_liouvillian(n: usize, rates: &Rates, h: &HamiltonianSpec) -> Result<Liouvillian> {
    Liouvillian::new(n, rates, h)
}

impl Liouvillian {
    pub fn new(n: usize, rates: &Rates, h: &HamiltonianSpec) -> Result<Self> {
        if n == 0 {
            return domain("the dense oracle needs at least one qubit");
        }
        if n > DENSE_LIOUVILLE_MAX_SITES {
            return resource(format!("dense Liouvillian on {n} qubits exceeds the {DENSE_LIOUVILLE_MAX_SITES}-qubit guard"));
        }
        h.validate(n)?;
        let single = to_site_grouping(1, &assemble(1, rates, &HamiltonianSpec::None));
        let pair = h.ordered_pair();
        let mut terms = Vec::new();
        for k in 1..=n {
            match pair {
                Some((a, b, _)) if k == a || k == b => {}
                _ => terms.push(LocalTerm { sites: vec![k], generator: single.clone() }),
            }
        }
        if let Some((a, b, j)) = pair {
            let local = HamiltonianSpec::IsingPair { a: 1, b: 2, coupling: j };
            terms.push(LocalTerm { sites: vec![a, b], generator: to_site_grouping(2, &assemble(2, rates, &local)) });
        }
        Ok(Liouvillian { n, rates: *rates, hamiltonian: *h, terms })
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn rates(&self) -> &Rates {
        &self.rates
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    /// The full `4^N x 4^N` generator in the row-stacking convention.
    pub fn matrix(&self) -> DenseMatrix {
        assemble(self.n, &self.rates, &self.hamiltonian)
    }

    /// `exp(t L) vec(rho)` through the factorized exponential.
    pub fn propagate(&self, rho: &DenseMatrix, t: f64) -> DenseMatrix {
        let mut out = rho.clone();
        for term in &self.terms {
            let p = expm(&(&term.generator * C64::new(t, 0.0)));
            apply_local_superoperator(&mut out, self.n, &term.sites, &p);
        }
        out
    }
}

/// Applies a superoperator given in per-site grouping on `sites` to `rho`.
pub fn apply_local_superoperator(rho: &mut DenseMatrix, n: usize, sites: &[usize], op: &DenseMatrix) {
    let s = sites.len();
    let dim = 1usize << n;
    let local = 1usize << (2 * s);
    assert_eq!(op.nrows(), local);
    let mask: usize = sites.iter().map(|&k| 1usize << (n - k)).sum();
    let place = |g: usize, rbase: usize, cbase: usize| {
        let (mut r, mut c) = (rbase, cbase);
        for (p, &k) in sites.iter().enumerate() {
            let pair = (g >> (2 * (s - 1 - p))) & 3;
            if pair & 2 != 0 {
                r |= 1 << (n - k);
            }
            if pair & 1 != 0 {
                c |= 1 << (n - k);
            }
        }
        (r, c)
    };
    let mut v = DVector::from_element(local, ZERO);
    for rbase in (0..dim).filter(|r| r & mask == 0) {
        for cbase in (0..dim).filter(|c| c & mask == 0) {
            for g in 0..local {
                let (r, c) = place(g, rbase, cbase);
                v[g] = rho[(r, c)];
            }
            let w = op * &v;
            for g in 0..local {
                let (r, c) = place(g, rbase, cbase);
                rho[(r, c)] = w[g];
            }
        }
    }
}

pub fn vectorize(rho: &DenseMatrix) -> DVector<C64> {
    let d = rho.nrows();
    DVector::from_fn(d * d, |i, _| rho[(i / d, i % d)])
}

pub fn unvectorize(v: &DVector<C64>) -> DenseMatrix {
    let d = (v.len() as f64).sqrt().round() as usize;
    DenseMatrix::from_fn(d, d, |r, c| v[r * d + c])
}

/// Checks that `rho` is a density matrix within `tol`.
pub fn check_physical(rho: &DenseMatrix, tol: f64) -> Result<()> {
    qubit_count(rho)?;
    if hermiticity_defect(rho) > tol {
        return domain("density matrix is not Hermitian");
    }
    if (trace(rho) - ONE).norm() > tol {
        return domain("density matrix does not have unit trace");
    }
    if hermitian_eigenvalues(rho)[0] < -tol {
        return domain("density matrix is not positive semidefinite");
    }
    Ok(())
}

/// `rho(t) = exp(t L) rho0`.
pub fn evolve_dense(rho0: &DenseMatrix, l: &Liouvillian, t: f64) -> Result<DenseMatrix> {
    if rho0.nrows() != 1usize << l.n_sites() {
        return domain("density matrix does not match the Liouvillian size");
    }
    if !(t >= 0.0) {
        return domain(format!("time {t} must be nonnegative"));
    }
    check_physical(rho0, 1e-12)?;
    Ok(l.propagate(rho0, t))
}

/// Propagation through the exponential of the assembled full generator.
/// Slow; intended for cross-checking the factorized route on small systems.
pub fn evolve_dense_full(rho0: &DenseMatrix, l: &Liouvillian, t: f64) -> Result<DenseMatrix> {
    if rho0.nrows() != 1usize << l.n_sites() {
        return domain("density matrix does not match the Liouvillian size");
    }
    let p = expm(&(l.matrix() * C64::new(t, 0.0)));
    Ok(unvectorize(&(p * vectorize(rho0))))
}

/// `Re Tr(rho W)`.
pub fn dense_expectation(rho: &DenseMatrix, w: &PauliWord) -> Result<f64> {
    let n = qubit_count(rho)?;
    if w.n_sites() != n {
        return domain("word size does not match the density matrix");
    }
    let (x, z, phase) = w.masks();
    let mut acc = ZERO;
    // W_{b^x, b} = phase (-1)^{|b & z|}; Tr(rho W) = sum_b rho[b, b^x] W[b^x, b]
    for b in 0..(1usize << n) {
        let sign = if (b & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        acc += rho[(b, b ^ x)] * phase * sign;
    }
    Ok(acc.re)
}

pub fn dense_partial_trace(rho: &DenseMatrix, keep: &[usize]) -> Result<DenseMatrix> {
    partial_trace(rho, keep)
}

fn local_pauli_entry(alpha: usize, i: usize, j: usize) -> C64 {
    PauliAxis::from_index(alpha).matrix()[(i, j)] * std::f64::consts::FRAC_1_SQRT_2
}

/// Applies the same 4x4 map to every site axis of a grouped `4^n` vector.
fn per_site_transform(v: &mut [C64], n: usize, m: &[[C64; 4]; 4]) {
    let mut tmp = [ZERO; 4];
    for k in 0..n {
        let stride = 4usize.pow((n - 1 - k) as u32);
        let block = stride * 4;
        for base in (0..v.len()).step_by(block) {
            for off in 0..stride {
                for (a, t) in tmp.iter_mut().enumerate() {
                    *t = (0..4).map(|b| m[a][b] * v[base + b * stride + off]).sum();
                }
                for (a, t) in tmp.iter().enumerate() {
                    v[base + a * stride + off] = *t;
                }
            }
        }
    }
}

/// Coefficients `c_alpha = Tr(E_alpha rho)` in the orthonormal basis
/// `E = sigma^{alpha_1}/sqrt2 (x) ... (x) sigma^{alpha_N}/sqrt2`, site 1 most significant.
pub fn pauli_coefficients(rho: &DenseMatrix) -> Result<Vec<f64>> {
    let n = qubit_count(rho)?;
    let d = 1usize << n;
    let mut v = vec![ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            let mut g = 0;
            for k in 0..n {
                g = g * 4 + 2 * ((r >> (n - 1 - k)) & 1) + ((c >> (n - 1 - k)) & 1);
            }
            v[g] = rho[(r, c)];
        }
    }
    // c_alpha = sum_{ij} (E_alpha)_{ji} rho_{ij}
    let mut m = [[ZERO; 4]; 4];
    for (a, row) in m.iter_mut().enumerate() {
        for (ij, e) in row.iter_mut().enumerate() {
            *e = local_pauli_entry(a, ij & 1, ij >> 1);
        }
    }
    per_site_transform(&mut v, n, &m);
    Ok(v.into_iter().map(|z| z.re).collect())
}

/// Inverse of [`pauli_coefficients`].
pub fn density_from_pauli_coefficients(coeffs: &[f64]) -> Result<DenseMatrix> {
    let len = coeffs.len();
    if len == 0 || !len.is_power_of_two() || len.trailing_zeros() % 2 != 0 {
        return domain("coefficient vector length must be a power of 4");
    }
    let n = (len.trailing_zeros() / 2) as usize;
    let mut v: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
    let mut m = [[ZERO; 4]; 4];
    for (ij, row) in m.iter_mut().enumerate() {
        for (a, e) in row.iter_mut().enumerate() {
            *e = local_pauli_entry(a, ij >> 1, ij & 1);
        }
    }
    per_site_transform(&mut v, n, &m);
    let d = 1usize << n;
    let mut rho = DenseMatrix::zeros(d, d);
    for (g, z) in v.into_iter().enumerate() {
        let (mut r, mut c) = (0, 0);
        for k in 0..n {
            let pair = (g >> (2 * (n - 1 - k))) & 3;
            r = r * 2 + (pair >> 1);
            c = c * 2 + (pair & 1);
        }
        rho[(r, c)] = z;
    }
    Ok(rho)
}

/// OSEE of `rho` between sites `1..=cut` and the rest.
pub fn dense_osee(rho: &DenseMatrix, cut: usize) -> Result<f64> {
    let n = qubit_count(rho)?;
    if cut == 0 || cut >= n {
        return domain(format!("cut {cut} leaves an empty subsystem of {n} qubits"));
    }
    let c = pauli_coefficients(rho)?;
    let cols = 4usize.pow((n - cut) as u32);
    let rows = 4usize.pow(cut as u32);
    let m = DMatrix::from_fn(rows, cols, |r, col| c[r * cols + col]);
    let (_, s, _) = sorted_svd(m);
    Ok(entropy_of_spectrum(&s))
}
