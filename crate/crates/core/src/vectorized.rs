//! Density matrices as matrix product states over the orthonormal local basis
//! `E_alpha = sigma^alpha / sqrt2`, `alpha in (I, X, Y, Z)`.
//!
//! A state stores the real coefficients `c = Tr(E_{alpha_1..alpha_N} rho)`, so
//! the Euclidean norm of the MPS is the Hilbert-Schmidt norm of `rho` and
//! `Tr(rho W)` for a Pauli word `W` is a contraction against `sqrt2 e_{w_k}`.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{domain, resource, Error, Result};
use crate::graph::{build_pure_mps, GraphSpec, PureMps};
use crate::linalg::DenseMatrix;
use crate::mps::{Mpo, Mps, SiteTensor, TruncationPolicy, TruncationReport};
use crate::pauli::{word_to_dense, PauliAxis, PauliWord};

/// Largest subsystem [`VectorizedState::extract_reduced`] returns.
pub const REDUCED_MAX_SITES: usize = 4;
/// Largest system [`VectorizedState::to_density`] expands.
pub const DENSITY_MAX_SITES: usize = 8;

pub const BASIS_TAG: &str = "pauli-orthonormal-v1";
const CHECKPOINT_MAGIC: &[u8; 4] = b"GLVS";
const CHECKPOINT_VERSION: u32 = 1;

/// Singular values across one bond, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    pub cut: usize,
    pub values: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn weight(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum()
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(&self.values)
    }
}

/// `-sum p ln p` with `p_k = s_k^2 / sum s^2`.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let total: f64 = values.iter().map(|s| s * s).sum();
    if total == 0.0 {
        return 0.0;
    }
    values
        .iter()
        .map(|s| s * s / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorizedState {
    mps: Mps,
}

fn sqrt2_unit(axis: PauliAxis) -> [f64; 4] {
    let mut v = [0.0; 4];
    v[axis.index()] = std::f64::consts::SQRT_2;
    v
}

/// Orthogonal change of basis on `D^2` splitting `(a, a')` into the
/// symmetric and antisymmetric subspaces of the swap, symmetric first.
/// Returns the matrix (columns are the new basis) and the symmetric count.
fn swap_basis(d: usize) -> (DMatrix<f64>, usize) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for a in 0..d {
        for b in a..d {
            let mut v = vec![0.0; d * d];
            if a == b {
                v[a * d + a] = 1.0;
                sym.push(v);
            } else {
                v[a * d + b] = h;
                v[b * d + a] = h;
                sym.push(v.clone());
                v[b * d + a] = -h;
                anti.push(v);
            }
        }
    }
    let n_sym = sym.len();
    let cols: Vec<Vec<f64>> = sym.into_iter().chain(anti).collect();
    (DMatrix::from_fn(d * d, d * d, |r, c| cols[c][r]), n_sym)
}

impl VectorizedState {
    pub fn from_mps(mps: Mps) -> Result<Self> {
        if mps.phys() != 4 {
            return domain("vectorized states have local dimension 4");
        }
        Ok(VectorizedState { mps })
    }

    /// Product density matrix from per-site coefficient vectors `(c_I, c_X, c_Y, c_Z)`.
    pub fn product(local: &[[f64; 4]]) -> Result<Self> {
        let v: Vec<Vec<f64>> = local.iter().map(|c| c.to_vec()).collect();
        VectorizedState::from_mps(Mps::product(4, &v)?)
    }

    /// `|rho>>` for `rho = |psi><psi|`.
    ///
    /// With `A` the real pure-state tensors, the raw site tensor is
    /// `B^alpha[(a a'), (b b')] = sum A[a', s', b'] (E_alpha)_{s' s} A[a, s, b]`.
    /// For `alpha = Y` this is `i` times a real tensor `R` that is odd under
    /// the simultaneous swap `a <-> a'`, `b <-> b'`, while the other three are
    /// even. In the swap eigenbasis `R` only couples symmetric to
    /// antisymmetric bond vectors, so the diagonal gauge `(1 on sym, i on
    /// anti)` turns every tensor real; the net effect is a sign flip of the
    /// sym-row, anti-column block of `R`.
    pub fn vectorize_pure(psi: &PureMps) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // real 2x2 kernels K[s'][s]; Y uses R with E_Y = i R
        let kernels: [[[f64; 2]; 2]; 4] = [
            [[h, 0.0], [0.0, h]],
            [[0.0, h], [h, 0.0]],
            [[0.0, -h], [h, 0.0]],
            [[h, 0.0], [0.0, -h]],
        ];
        let src = psi.mps();
        let n = src.n_sites();
        let mut tensors = Vec::with_capacity(n);
        for k in 0..n {
            let a = src.tensor(k);
            let (dl, dr) = (a.left, a.right);
            let (ol, sl) = swap_basis(dl);
            let (or, sr) = swap_basis(dr);
            let mut out = SiteTensor::zeros(dl * dl, 4, dr * dr);
            for (alpha, kern) in kernels.iter().enumerate() {
                let raw = DMatrix::from_fn(dl * dl, dr * dr, |row, col| {
                    let (l, lp) = (row / dl, row % dl);
                    let (r, rp) = (col / dr, col % dr);
                    let mut acc = 0.0;
                    for (sp, krow) in kern.iter().enumerate() {
                        for (s, kv) in krow.iter().enumerate() {
                            if *kv != 0.0 {
                                acc += a.get(lp, sp, rp) * kv * a.get(l, s, r);
                            }
                        }
                    }
                    acc
                });
                let rotated = ol.transpose() * raw * &or;
                for row in 0..dl * dl {
                    for col in 0..dr * dr {
                        let mut v = rotated[(row, col)];
                        if alpha == 2 && row < sl && col >= sr {
                            v = -v;
                        }
                        out.set(row, alpha, col, v);
                    }
                }
            }
            tensors.push(out);
        }
        VectorizedState::from_mps(Mps::from_tensors(4, tensors)?)
    }

    /// Vectorized graph state `|g><g|`.
    /// Complete graphs use the exact construction of [`Self::complete_graph`];
    /// other graphs are vectorized from the compressed pure-state MPS.
    pub fn from_graph(g: &GraphSpec, policy: &TruncationPolicy) -> Result<Self> {
        let n = g.n_vertices();
        if n >= 2 && g.n_edges() == n * (n - 1) / 2 {
            return VectorizedState::complete_graph(n);
        }
        let (psi, _) = build_pure_mps(g, policy)?;
        VectorizedState::vectorize_pure(&psi)
    }

    /// `|rho>>` of the complete-graph state, built without any decomposition.
    ///
    /// `rho = 2^-N sum_S prod_{v in S} K_v`, and the product over a subset of
    /// size `s` carries `X` (s odd) or `Y` (s even) on `S` and `Z^s` elsewhere,
    /// with sign `prod_{j in S} (-1)^{#(S before j)}` for odd `s` and `+1` for
    /// even `s`. The bond carries (parity of `S` so far, parity of `s`), so
    /// every entry is `0` or `+-2^-1/2` and structurally vanishing
    /// coefficients are exact zeros.
    pub fn complete_graph(n: usize) -> Result<Self> {
        if n < 2 {
            return domain("complete graph needs N >= 2");
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut tensors = Vec::with_capacity(n);
        for j in 0..n {
            let (dl, dr) = (if j == 0 { 1 } else { 4 }, if j + 1 == n { 1 } else { 4 });
            let mut t = SiteTensor::zeros(dl, 4, dr);
            for total in 0..2usize {
                for p in 0..2usize {
                    if j == 0 && p == 1 {
                        continue;
                    }
                    let l = if j == 0 { 0 } else { 2 * p + total };
                    for x in 0..2usize {
                        let q = p ^ x;
                        if j + 1 == n && q != total {
                            continue;
                        }
                        let r = if j + 1 == n { 0 } else { 2 * q + total };
                        let (alpha, sign) = match (x, total) {
                            (0, 0) => (0, 1.0),
                            (0, _) => (3, 1.0),
                            (_, 1) => (1, if p == 1 { -1.0 } else { 1.0 }),
                            _ => (2, 1.0),
                        };
                        t.set(l, alpha, r, sign * h);
                    }
                }
            }
            tensors.push(t);
        }
        VectorizedState::from_mps(Mps::from_tensors(4, tensors)?)
    }

    pub fn mps(&self) -> &Mps {
        &self.mps
    }

    pub fn n_sites(&self) -> usize {
        self.mps.n_sites()
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.mps.bond_dims()
    }

    pub fn max_bond(&self) -> usize {
        self.mps.max_bond()
    }

    /// Orthogonality center as a 1-based site.
    pub fn center(&self) -> Option<usize> {
        self.mps.center().map(|c| c + 1)
    }

    pub fn canonicalize(&mut self, center: usize) -> Result<()> {
        if center == 0 || center > self.n_sites() {
            return domain(format!("center {center} outside 1..={}", self.n_sites()));
        }
        self.mps.canonicalize(center - 1);
        Ok(())
    }

    pub fn schmidt(&mut self, cut: usize) -> Result<SchmidtSpectrum> {
        let values = self.mps.schmidt_values(cut)?;
        Ok(SchmidtSpectrum { cut, values })
    }

    pub fn osee(&mut self, cut: usize) -> Result<f64> {
        Ok(self.schmidt(cut)?.entropy())
    }

    /// `Tr(rho W)`.
    pub fn measure_word(&self, w: &PauliWord) -> Result<f64> {
        if w.n_sites() != self.n_sites() {
            return domain(format!("word on {} sites measured on a {}-site state", w.n_sites(), self.n_sites()));
        }
        let vecs: Vec<[f64; 4]> = (1..=self.n_sites()).map(|k| sqrt2_unit(w.axis(k))).collect();
        let refs: Vec<&[f64]> = vecs.iter().map(|v| &v[..]).collect();
        Ok(self.mps.contract_with(&refs))
    }

    pub fn trace(&self) -> f64 {
        self.measure_word(&PauliWord::identity(self.n_sites())).expect("matching size")
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.mps.norm_sq()
    }

    /// Reduced density matrix on `sites` (1-based, output in the given order).
    pub fn extract_reduced(&self, sites: &[usize]) -> Result<DenseMatrix> {
        let n = self.n_sites();
        let k = sites.len();
        if k > REDUCED_MAX_SITES {
            return resource(format!("reduced matrices are limited to {REDUCED_MAX_SITES} sites"));
        }
        if k == 0 {
            return domain("empty site list");
        }
        for (i, &s) in sites.iter().enumerate() {
            if s == 0 || s > n {
                return domain(format!("site {s} outside 1..={n}"));
            }
            if sites[..i].contains(&s) {
                return domain(format!("site {s} listed twice"));
            }
        }
        let dim = 1usize << k;
        let mut rho = DenseMatrix::zeros(dim, dim);
        for code in 0..4usize.pow(k as u32) {
            let mut global = PauliWord::identity(n);
            let mut local = PauliWord::identity(k);
            for p in 0..k {
                let axis = PauliAxis::from_index((code >> (2 * (k - 1 - p))) & 3);
                global.set(sites[p], axis)?;
                local.set(p + 1, axis)?;
            }
            let value = self.measure_word(&global)?;
            if value != 0.0 {
                rho += word_to_dense(&local)? * C64::new(value / dim as f64, 0.0);
            }
        }
        Ok(rho)
    }

    /// Full coefficient vector (site 1 most significant, length `4^N`).
    pub fn coefficients(&self) -> Result<Vec<f64>> {
        if self.n_sites() > DENSITY_MAX_SITES {
            return resource(format!("dense expansion is limited to {DENSITY_MAX_SITES} sites"));
        }
        Ok(self.mps.to_dense())
    }

    pub fn to_density(&self) -> Result<DenseMatrix> {
        crate::dense::density_from_pauli_coefficients(&self.coefficients()?)
    }

    /// Contracts a 4x4 row-major matrix into the physical leg of 1-based `site`.
    pub fn apply_single_site(&mut self, site: usize, m: &[f64; 16]) -> Result<()> {
        if site == 0 || site > self.n_sites() {
            return domain(format!("site {site} outside 1..={}", self.n_sites()));
        }
        self.mps.apply_local(site - 1, m);
        Ok(())
    }

    pub fn apply_spanning_operator(&mut self, mpo: &Mpo, policy: &TruncationPolicy) -> Result<TruncationReport> {
        if mpo.phys != 4 {
            return domain("spanning operator must act on dimension-4 sites");
        }
        self.mps.apply_mpo(mpo, policy)
    }

    pub fn compress(&mut self, policy: &TruncationPolicy) -> TruncationReport {
        self.mps.compress(policy)
    }

    /// Binary checkpoint: magic, version, basis tag, N, center, bond
    /// dimensions, then every site tensor, all little-endian.
    pub fn write_checkpoint<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CHECKPOINT_MAGIC)?;
        w.write_u32::<LittleEndian>(CHECKPOINT_VERSION)?;
        w.write_u32::<LittleEndian>(BASIS_TAG.len() as u32)?;
        w.write_all(BASIS_TAG.as_bytes())?;
        w.write_u64::<LittleEndian>(self.n_sites() as u64)?;
        w.write_i64::<LittleEndian>(self.mps.center().map_or(-1, |c| c as i64))?;
        for b in self.bond_dims() {
            w.write_u64::<LittleEndian>(b as u64)?;
        }
        for t in self.mps.tensors() {
            for &x in &t.data {
                w.write_f64::<LittleEndian>(x)?;
            }
        }
        Ok(())
    }

    pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Self> {
        let bad = |msg: &str| Error::Checkpoint(msg.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(bad("not a vectorized-state checkpoint"));
        }
        let version = r.read_u32::<LittleEndian>()?;
        if version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported checkpoint version {version}")));
        }
        let tag_len = r.read_u32::<LittleEndian>()? as usize;
        if tag_len > 256 {
            return Err(bad("basis tag too long"));
        }
        let mut tag = vec![0u8; tag_len];
        r.read_exact(&mut tag)?;
        if tag != BASIS_TAG.as_bytes() {
            return Err(Error::Checkpoint(format!("unknown basis tag {:?}", String::from_utf8_lossy(&tag))));
        }
        let n = r.read_u64::<LittleEndian>()? as usize;
        if n == 0 || n > 1 << 20 {
            return Err(bad("implausible site count"));
        }
        let center = r.read_i64::<LittleEndian>()?;
        let mut bonds = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            bonds.push(r.read_u64::<LittleEndian>()? as usize);
        }
        if bonds.iter().any(|&b| b == 0 || b > 1 << 16) {
            return Err(bad("implausible bond dimension"));
        }
        let mut tensors = Vec::with_capacity(n);
        for k in 0..n {
            let mut t = SiteTensor::zeros(bonds[k], 4, bonds[k + 1]);
            for x in t.data.iter_mut() {
                *x = r.read_f64::<LittleEndian>()?;
            }
            tensors.push(t);
        }
        let mut mps = Mps::from_tensors(4, tensors).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if center >= 0 {
            if center as usize >= n {
                return Err(bad("center outside the chain"));
            }
            // restores the recorded gauge flag; tensors are already in that gauge
            mps.canonicalize(center as usize);
        }
        Ok(VectorizedState { mps })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_checkpoint(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        VectorizedState::read_checkpoint(std::io::BufReader::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{dense_osee, dense_partial_trace, pauli_coefficients};
    use crate::graph::{build_state_vector, make_complete, make_ring, make_star};
    use crate::linalg::{max_abs_diff, projector};
    use crate::mps::tests::random_mps;
    use crate::oracle::{reduced_density, Rates, Time};
    use proptest::prelude::*;

    fn graph_state(g: &GraphSpec) -> VectorizedState {
        VectorizedState::from_graph(g, &TruncationPolicy::default()).unwrap()
    }

    #[test]
    fn single_qubit_zero_state() {
        let mps = Mps::product(2, &[vec![1.0, 0.0]]).unwrap();
        let v = VectorizedState::vectorize_pure(&PureMps::from_mps(mps).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = v.coefficients().unwrap();
        for (x, e) in c.iter().zip([h, 0.0, 0.0, h]) {
            assert!((x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn vectorize_matches_dense_coefficients() {
        for g in [make_complete(4).unwrap(), make_ring(5).unwrap(), make_star(4).unwrap()] {
            let v = graph_state(&g);
            let rho = projector(&build_state_vector(&g).unwrap());
            let reference = pauli_coefficients(&rho).unwrap();
            let c = v.coefficients().unwrap();
            let diff = c.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-13, "{g}: {diff}");
            assert!((v.trace() - 1.0).abs() < 1e-13);
            assert!((v.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_complete_graph_matches_decomposition() {
        for n in 2..=6 {
            let g = make_complete(n).unwrap();
            let exact = VectorizedState::complete_graph(n).unwrap().coefficients().unwrap();
            let (psi, _) = build_pure_mps(&g, &TruncationPolicy::default()).unwrap();
            let svd = VectorizedState::vectorize_pure(&psi).unwrap().coefficients().unwrap();
            let reference = pauli_coefficients(&projector(&build_state_vector(&g).unwrap())).unwrap();
            for ((a, b), r) in exact.iter().zip(&svd).zip(&reference) {
                assert!((a - r).abs() < 1e-14 && (b - r).abs() < 1e-13, "N={n}");
                // structural zeros survive exactly
                assert!(r.abs() > 1e-3 || *a == 0.0);
            }
        }
        assert!(VectorizedState::complete_graph(1).is_err());
    }

    #[test]
    fn vectorized_bond_is_square_of_pure() {
        let v = graph_state(&make_complete(16).unwrap());
        assert_eq!(v.max_bond(), 4);
        let v = graph_state(&GraphSpec::edgeless(5).unwrap());
        assert_eq!(v.max_bond(), 1);
    }

    #[test]
    fn osee_of_graph_states() {
        let ln2 = std::f64::consts::LN_2;
        let mut k = graph_state(&make_complete(8).unwrap());
        for cut in 1..8 {
            assert!((k.osee(cut).unwrap() - 2.0 * ln2).abs() < 1e-10);
        }
        let mut ring = graph_state(&make_ring(8).unwrap());
        assert!((ring.osee(4).unwrap() - 4.0 * ln2).abs() < 1e-10);
        let spectrum = ring.schmidt(4).unwrap();
        assert!((spectrum.weight() - 1.0).abs() < 1e-10);
        assert!(spectrum.values.windows(2).all(|w| w[0] >= w[1]));
        assert!(ring.osee(0).is_err());
        assert!(ring.osee(8).is_err());
        let mut p = VectorizedState::product(&[[0.5f64.sqrt(), 0.0, 0.0, 0.5f64.sqrt()]; 4]).unwrap();
        assert!(p.osee(2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn measurement_examples() {
        let n = 6;
        let v = graph_state(&make_complete(n).unwrap());
        assert!((v.trace() - 1.0).abs() < 1e-13);
        let xz = crate::pauli::symmetric_word(1, 0, n - 1, n).unwrap();
        assert!((v.measure_word(&xz).unwrap() - 1.0).abs() < 1e-12);
        assert!(v.measure_word(&PauliWord::parse("Z1", n).unwrap()).unwrap().abs() < 1e-13);
        assert!(v.measure_word(&PauliWord::identity(3)).is_err());
    }

    #[test]
    fn reduced_matrices_match_oracle_and_dense() {
        let n = 6;
        let g = make_complete(n).unwrap();
        let v = graph_state(&g);
        let r = Rates::new(1.0, 0.0, 0.0).unwrap();
        let rho2 = reduced_density(2, Time::At(0.0), &r, n).unwrap();
        assert!(max_abs_diff(&v.extract_reduced(&[1, 2]).unwrap(), &rho2) < 1e-12);
        let rho = projector(&build_state_vector(&make_ring(n).unwrap()).unwrap());
        let ring = graph_state(&make_ring(n).unwrap());
        for sites in [vec![1, 2, 3], vec![2, 5], vec![6, 1, 3, 4]] {
            let a = ring.extract_reduced(&sites).unwrap();
            let b = dense_partial_trace(&rho, &sites).unwrap();
            assert!(max_abs_diff(&a, &b) < 1e-12);
        }
        assert!(v.extract_reduced(&[1, 2, 3, 4, 5]).is_err());
        assert!(v.extract_reduced(&[1, 1]).is_err());
        assert!(v.extract_reduced(&[7]).is_err());
    }

    #[test]
    fn local_and_spanning_operations() {
        let mut s = VectorizedState::from_mps(random_mps(4, 4, 3, 21)).unwrap();
        let before = s.clone();
        let mut id = [0.0; 16];
        (0..4).for_each(|k| id[k * 5] = 1.0);
        s.apply_single_site(2, &id).unwrap();
        assert_eq!(s, before);
        assert!(s.apply_single_site(5, &id).is_err());
        let report = s.apply_spanning_operator(&Mpo::identity(4, 4), &TruncationPolicy::default()).unwrap();
        assert!(!report.flagged);
        let fid = s.mps().inner(before.mps()).unwrap() / before.purity();
        assert!((fid - 1.0).abs() < 1e-12);
        s.apply_single_site(3, &[0.0; 16]).unwrap();
        assert_eq!(s.purity(), 0.0);
    }

    #[test]
    fn checkpoint_round_trip() {
        let mut s = graph_state(&make_ring(6).unwrap());
        s.canonicalize(3).unwrap();
        let mut buf = Vec::new();
        s.write_checkpoint(&mut buf).unwrap();
        let back = VectorizedState::read_checkpoint(&buf[..]).unwrap();
        assert_eq!(back.bond_dims(), s.bond_dims());
        assert_eq!(back.center(), Some(3));
        let a = s.coefficients().unwrap();
        let b = back.coefficients().unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-14));
        let mut corrupt = buf.clone();
        corrupt[0] = b'X';
        assert!(VectorizedState::read_checkpoint(&corrupt[..]).is_err());
        assert!(VectorizedState::read_checkpoint(&buf[..buf.len() - 3]).is_err());
        let mut wrong_version = buf;
        wrong_version[4] = 9;
        assert!(VectorizedState::read_checkpoint(&wrong_version[..]).is_err());
    }

    #[test]
    fn dense_osee_agrees_on_random_states() {
        let s = VectorizedState::from_mps(random_mps(4, 4, 3, 2)).unwrap();
        let rho = s.to_density().unwrap();
        let mut s2 = s.clone();
        for cut in 1..4 {
            assert!((s2.osee(cut).unwrap() - dense_osee(&rho, cut).unwrap()).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn vectorization_is_real_for_random_graphs(n in 2usize..6, mask in 0u32..1024) {
            let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| *e).collect();
            let g = GraphSpec::new(n, edges).unwrap();
            let v = graph_state(&g);
            let rho = projector(&build_state_vector(&g).unwrap());
            let back = v.to_density().unwrap();
            prop_assert!(max_abs_diff(&rho, &back) < 1e-12);
        }
    }
}
