//! Real-valued matrix product states with an arbitrary local dimension,
//! together with the gauge fixing, truncation and MPO machinery shared by the
//! pure-state (d = 2) and vectorized density-matrix (d = 4) representations.
//!
//! Site tensors carry the axis signature `[left bond, physical, right bond]`
//! and are stored row-major. Boundary bonds always have dimension 1.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Controls every SVD truncation: the smallest number of singular values is
/// kept such that the normalized discarded weight stays below
/// `max_discarded_weight`, capped at `max_bond`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_discarded_weight: f64,
    pub max_bond: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { max_discarded_weight: 1e-16, max_bond: 64 }
    }
}

/// Relative floor below which singular values are treated as numerical noise.
pub const SINGULAR_VALUE_FLOOR: f64 = 1e-14;

/// Outcome of one or more truncations.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    /// Sum of the normalized discarded weights of every truncation.
    pub discarded_weight: f64,
    /// Largest single normalized discarded weight.
    pub max_discarded: f64,
    /// Set when `max_bond` forced a discarded weight above the policy bound.
    pub flagged: bool,
    pub max_bond: usize,
}

impl TruncationReport {
    pub fn merge(&mut self, other: &TruncationReport) {
        self.discarded_weight += other.discarded_weight;
        self.max_discarded = self.max_discarded.max(other.max_discarded);
        self.flagged |= other.flagged;
        self.max_bond = self.max_bond.max(other.max_bond);
    }
}

/// Number of singular values to keep and the discarded weight that results.
/// `values` must be sorted in nonincreasing order.
pub fn truncation_rank(values: &[f64], policy: &TruncationPolicy) -> (usize, f64, bool) {
    let total: f64 = values.iter().map(|s| s * s).sum();
    if values.is_empty() || total == 0.0 {
        return (1.min(values.len()), 0.0, false);
    }
    let floor = SINGULAR_VALUE_FLOOR * values[0];
    let mut keep = values.iter().take_while(|&&s| s > floor).count().max(1);
    let mut dropped: f64 = values[keep..].iter().map(|s| s * s).sum();
    while keep > 1 {
        let s = values[keep - 1];
        if dropped + s * s <= policy.max_discarded_weight * total {
            dropped += s * s;
            keep -= 1;
        } else {
            break;
        }
    }
    let mut flagged = false;
    if keep > policy.max_bond {
        dropped += values[policy.max_bond..keep].iter().map(|s| s * s).sum::<f64>();
        keep = policy.max_bond.max(1);
        flagged = dropped / total > policy.max_discarded_weight;
    }
    (keep, dropped / total, flagged)
}

/// Thin SVD with singular values sorted in nonincreasing order.
///
/// One-sided Jacobi on the columns of the taller orientation; it keeps high
/// relative accuracy on the rank-deficient matrices that truncation sweeps
/// produce (nalgebra's bidiagonal SVD loses accuracy on some of them).
pub fn sorted_svd(m: DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    if rows < cols {
        let (u, s, vt) = sorted_svd(m.transpose());
        return (vt.transpose(), s, u.transpose());
    }
    let (a, v) = jacobi_columns(&m);
    let norms: Vec<f64> = a.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = DMatrix::from_fn(rows, cols, |r, c| {
        let j = order[c];
        if norms[j] > 0.0 {
            a[j][r] / norms[j]
        } else {
            0.0
        }
    });
    let vt = DMatrix::from_fn(cols, cols, |r, c| v[order[r]][c]);
    (u, s, vt)
}

/// Rotates the columns of `m` until they are mutually orthogonal. Returns the
/// rotated columns `A V` and the columns of the accumulated rotation `V`.
fn jacobi_columns(m: &DMatrix<f64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j).iter().copied().collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            let mut e = vec![0.0; cols];
            e[j] = 1.0;
            e
        })
        .collect();
    let tol = f64::EPSILON * rows.max(1) as f64;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&a[p], &a[q]);
                    let mut al = 0.0;
                    let mut be = 0.0;
                    let mut ga = 0.0;
                    for k in 0..rows {
                        al += cp[k] * cp[k];
                        be += cq[k] * cq[k];
                        ga += cp[k] * cq[k];
                    }
                    (al, be, ga)
                };
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    // rows of V^T are the columns of V read across
    let vt_rows: Vec<Vec<f64>> = (0..cols).map(|j| (0..cols).map(|i| v[j][i]).collect()).collect();
    (a, vt_rows)
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor {
    pub left: usize,
    pub phys: usize,
    pub right: usize,
    pub data: Vec<f64>,
}

impl SiteTensor {
    pub fn zeros(left: usize, phys: usize, right: usize) -> Self {
        SiteTensor { left, phys, right, data: vec![0.0; left * phys * right] }
    }

    #[inline]
    pub fn idx(&self, l: usize, p: usize, r: usize) -> usize {
        (l * self.phys + p) * self.right + r
    }

    #[inline]
    pub fn get(&self, l: usize, p: usize, r: usize) -> f64 {
        self.data[self.idx(l, p, r)]
    }

    #[inline]
    pub fn set(&mut self, l: usize, p: usize, r: usize, v: f64) {
        let i = self.idx(l, p, r);
        self.data[i] = v;
    }

    /// `(left * phys) x right` view.
    pub fn left_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.left * self.phys, self.right, |lp, r| self.data[lp * self.right + r])
    }

    pub fn from_left_matrix(m: &DMatrix<f64>, left: usize, phys: usize) -> Self {
        let right = m.ncols();
        let mut t = SiteTensor::zeros(left, phys, right);
        for lp in 0..left * phys {
            for r in 0..right {
                t.data[lp * right + r] = m[(lp, r)];
            }
        }
        t
    }

    /// `left x (phys * right)` view.
    pub fn right_matrix(&self) -> DMatrix<f64> {
        let pr = self.phys * self.right;
        DMatrix::from_fn(self.left, pr, |l, c| self.data[l * pr + c])
    }

    pub fn from_right_matrix(m: &DMatrix<f64>, phys: usize, right: usize) -> Self {
        let left = m.nrows();
        let mut t = SiteTensor::zeros(left, phys, right);
        let pr = phys * right;
        for l in 0..left {
            for c in 0..pr {
                t.data[l * pr + c] = m[(l, c)];
            }
        }
        t
    }

    /// Local matrix for physical index `p`, shape `left x right`.
    pub fn slice(&self, p: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.left, self.right, |l, r| self.get(l, p, r))
    }
}

/// Multiplies `m` (k x left) into the left bond of `t`.
fn absorb_left(m: &DMatrix<f64>, t: &SiteTensor) -> SiteTensor {
    let rm = t.right_matrix();
    SiteTensor::from_right_matrix(&(m * rm), t.phys, t.right)
}

/// Multiplies `m` (right x k) into the right bond of `t`.
fn absorb_right(t: &SiteTensor, m: &DMatrix<f64>) -> SiteTensor {
    let lm = t.left_matrix();
    SiteTensor::from_left_matrix(&(lm * m), t.left, t.phys)
}

/// A finite open-boundary MPS with real entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Mps {
    phys: usize,
    tensors: Vec<SiteTensor>,
    /// 0-based orthogonality center, when known.
    center: Option<usize>,
}

impl Mps {
    /// Product state with `local[k]` on site `k + 1`.
    pub fn product(phys: usize, local: &[Vec<f64>]) -> Result<Self> {
        if local.is_empty() {
            return domain("an MPS needs at least one site");
        }
        let mut tensors = Vec::with_capacity(local.len());
        for v in local {
            if v.len() != phys {
                return domain("local vector length does not match the physical dimension");
            }
            tensors.push(SiteTensor { left: 1, phys, right: 1, data: v.clone() });
        }
        Ok(Mps { phys, tensors, center: None })
    }

    pub fn from_tensors(phys: usize, tensors: Vec<SiteTensor>) -> Result<Self> {
        if tensors.is_empty() {
            return domain("an MPS needs at least one site");
        }
        if tensors[0].left != 1 || tensors[tensors.len() - 1].right != 1 {
            return domain("boundary bonds must have dimension 1");
        }
        for (k, t) in tensors.iter().enumerate() {
            if t.phys != phys || t.data.len() != t.left * t.phys * t.right {
                return domain(format!("site tensor {} has an inconsistent shape", k + 1));
            }
            if k + 1 < tensors.len() && t.right != tensors[k + 1].left {
                return domain(format!("bond mismatch between sites {} and {}", k + 1, k + 2));
            }
        }
        Ok(Mps { phys, tensors, center: None })
    }

    pub fn n_sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn phys(&self) -> usize {
        self.phys
    }

    pub fn tensors(&self) -> &[SiteTensor] {
        &self.tensors
    }

    pub fn tensor(&self, site0: usize) -> &SiteTensor {
        &self.tensors[site0]
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    /// Bond dimensions including both unit boundary bonds (`n_sites + 1` values).
    pub fn bond_dims(&self) -> Vec<usize> {
        let mut b = vec![1];
        b.extend(self.tensors.iter().map(|t| t.right));
        b
    }

    pub fn max_bond(&self) -> usize {
        self.tensors.iter().map(|t| t.right).max().unwrap_or(1)
    }

    pub fn scale(&mut self, factor: f64) {
        let site = self.center.unwrap_or(0);
        self.tensors[site].data.iter_mut().for_each(|x| *x *= factor);
    }

    /// Replaces site tensor `site0`; bond shapes must be preserved.
    pub fn set_tensor(&mut self, site0: usize, t: SiteTensor) {
        let old = &self.tensors[site0];
        assert_eq!((old.left, old.phys, old.right), (t.left, t.phys, t.right));
        self.tensors[site0] = t;
    }

    /// Contracts a `phys x phys` matrix into the physical leg of `site0`.
    /// Leaves the orthogonality center intact only when applied at the center.
    pub fn apply_local(&mut self, site0: usize, m: &[f64]) {
        let d = self.phys;
        assert_eq!(m.len(), d * d);
        let t = &self.tensors[site0];
        let mut out = SiteTensor::zeros(t.left, d, t.right);
        for l in 0..t.left {
            for p in 0..d {
                for q in 0..d {
                    let w = m[p * d + q];
                    if w == 0.0 {
                        continue;
                    }
                    let src = t.idx(l, q, 0);
                    let dst = out.idx(l, p, 0);
                    for r in 0..t.right {
                        out.data[dst + r] += w * t.data[src + r];
                    }
                }
            }
        }
        self.tensors[site0] = out;
        if self.center != Some(site0) {
            self.center = None;
        }
    }

    fn left_orthogonalize_site(&mut self, k: usize) {
        let t = &self.tensors[k];
        let (left, phys) = (t.left, t.phys);
        let qr = t.left_matrix().qr();
        let (q, r) = (qr.q(), qr.r());
        self.tensors[k] = SiteTensor::from_left_matrix(&q, left, phys);
        self.tensors[k + 1] = absorb_left(&r, &self.tensors[k + 1]);
    }

    fn right_orthogonalize_site(&mut self, k: usize) {
        let t = &self.tensors[k];
        let (phys, right) = (t.phys, t.right);
        // LQ through the QR of the transpose.
        let qr = t.right_matrix().transpose().qr();
        let (q, r) = (qr.q(), qr.r());
        self.tensors[k] = SiteTensor::from_right_matrix(&q.transpose(), phys, right);
        self.tensors[k - 1] = absorb_right(&self.tensors[k - 1], &r.transpose());
    }

    /// Brings the state into mixed canonical form around 0-based `center`.
    pub fn canonicalize(&mut self, center: usize) {
        assert!(center < self.n_sites());
        for k in 0..center {
            self.left_orthogonalize_site(k);
        }
        for k in (center + 1..self.n_sites()).rev() {
            self.right_orthogonalize_site(k);
        }
        self.center = Some(center);
    }

    /// Moves an existing center to `target` with the minimal number of steps.
    pub fn move_center(&mut self, target: usize) {
        match self.center {
            None => self.canonicalize(target),
            Some(c) if c <= target => {
                for k in c..target {
                    self.left_orthogonalize_site(k);
                }
                self.center = Some(target);
            }
            Some(c) => {
                for k in (target + 1..=c).rev() {
                    self.right_orthogonalize_site(k);
                }
                self.center = Some(target);
            }
        }
    }

    /// `|| A^T A - 1 ||_max` for the left matrix of `site0`.
    pub fn left_isometry_residual(&self, site0: usize) -> f64 {
        let m = self.tensors[site0].left_matrix();
        let g = m.transpose() * &m;
        (g - DMatrix::identity(m.ncols(), m.ncols())).abs().max()
    }

    pub fn right_isometry_residual(&self, site0: usize) -> f64 {
        let m = self.tensors[site0].right_matrix();
        let g = &m * m.transpose();
        (g - DMatrix::identity(m.nrows(), m.nrows())).abs().max()
    }

    /// Schmidt values across the bond to the right of 1-based site `cut`.
    pub fn schmidt_values(&mut self, cut: usize) -> Result<Vec<f64>> {
        let n = self.n_sites();
        if cut == 0 || cut >= n {
            return domain(format!("cut {cut} outside 1..={}", n.saturating_sub(1)));
        }
        self.move_center(cut - 1);
        let (_, s, _) = sorted_svd(self.tensors[cut - 1].left_matrix());
        Ok(s)
    }

    /// SVD sweep from the right end that truncates every bond under `policy`.
    pub fn compress(&mut self, policy: &TruncationPolicy) -> TruncationReport {
        let n = self.n_sites();
        let mut report = TruncationReport::default();
        if n == 1 {
            report.max_bond = 1;
            return report;
        }
        self.move_center(n - 1);
        for k in (1..n).rev() {
            let t = &self.tensors[k];
            let (phys, right) = (t.phys, t.right);
            let (u, s, vt) = sorted_svd(t.right_matrix());
            let (keep, dw, flagged) = truncation_rank(&s, policy);
            let vt_k = vt.rows(0, keep).into_owned();
            let us = DMatrix::from_fn(u.nrows(), keep, |r, c| u[(r, c)] * s[c]);
            self.tensors[k] = SiteTensor::from_right_matrix(&vt_k, phys, right);
            self.tensors[k - 1] = absorb_right(&self.tensors[k - 1], &us);
            report.discarded_weight += dw;
            report.max_discarded = report.max_discarded.max(dw);
            report.flagged |= flagged;
        }
        self.center = Some(0);
        report.max_bond = self.max_bond();
        report
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Mps) -> Result<f64> {
        if self.n_sites() != other.n_sites() || self.phys != other.phys {
            return domain("MPS shapes differ");
        }
        let mut env = DMatrix::from_element(1, 1, 1.0);
        for (a, b) in self.tensors.iter().zip(&other.tensors) {
            let mut next = DMatrix::zeros(a.right, b.right);
            for p in 0..self.phys {
                next += a.slice(p).transpose() * &env * b.slice(p);
            }
            env = next;
        }
        Ok(env[(0, 0)])
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).expect("same shape")
    }

    /// Contracts every site against `vectors[k]` (length `phys`).
    pub fn contract_with(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.n_sites());
        let mut env = vec![1.0];
        for (t, v) in self.tensors.iter().zip(vectors) {
            let mut next = vec![0.0; t.right];
            for (l, e) in env.iter().enumerate() {
                if *e == 0.0 {
                    continue;
                }
                for (p, w) in v.iter().enumerate() {
                    if *w == 0.0 {
                        continue;
                    }
                    let base = t.idx(l, p, 0);
                    let f = e * w;
                    for (r, x) in next.iter_mut().enumerate() {
                        *x += f * t.data[base + r];
                    }
                }
            }
            env = next;
        }
        env[0]
    }

    /// Full coefficient vector of length `phys^n`, site 1 most significant.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut acc: Vec<f64> = vec![1.0];
        let mut rows = 1usize;
        let mut bond = 1usize;
        for t in &self.tensors {
            let mut next = vec![0.0; rows * t.phys * t.right];
            for i in 0..rows {
                for l in 0..bond {
                    let a = acc[i * bond + l];
                    if a == 0.0 {
                        continue;
                    }
                    for p in 0..t.phys {
                        for r in 0..t.right {
                            next[(i * t.phys + p) * t.right + r] += a * t.get(l, p, r);
                        }
                    }
                }
            }
            acc = next;
            rows *= t.phys;
            bond = t.right;
        }
        acc
    }

    /// Contracts `mpo` into the state without compressing.
    pub fn apply_mpo_exact(&mut self, mpo: &Mpo) -> Result<()> {
        if mpo.n_sites() != self.n_sites() || mpo.phys != self.phys {
            return domain("MPO does not match the state");
        }
        for (t, w) in self.tensors.iter_mut().zip(&mpo.tensors) {
            let left = t.left * w.left;
            let right = t.right * w.right;
            let mut out = SiteTensor::zeros(left, self.phys, right);
            for l in 0..t.left {
                for wl in 0..w.left {
                    for o in 0..self.phys {
                        for i in 0..self.phys {
                            for wr in 0..w.right {
                                let wv = w.get(wl, o, i, wr);
                                if wv == 0.0 {
                                    continue;
                                }
                                for r in 0..t.right {
                                    let v = wv * t.get(l, i, r);
                                    let idx = out.idx(l * w.left + wl, o, r * w.right + wr);
                                    out.data[idx] += v;
                                }
                            }
                        }
                    }
                }
            }
            *t = out;
        }
        self.center = None;
        Ok(())
    }

    /// MPO–MPS contraction followed by a compression sweep.
    pub fn apply_mpo(&mut self, mpo: &Mpo, policy: &TruncationPolicy) -> Result<TruncationReport> {
        self.apply_mpo_exact(mpo)?;
        Ok(self.compress(policy))
    }
}

/// MPO tensor with signature `[left, out, in, right]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoTensor {
    pub left: usize,
    pub phys: usize,
    pub right: usize,
    pub data: Vec<f64>,
}

impl MpoTensor {
    pub fn zeros(left: usize, phys: usize, right: usize) -> Self {
        MpoTensor { left, phys, right, data: vec![0.0; left * phys * phys * right] }
    }

    #[inline]
    fn idx(&self, l: usize, o: usize, i: usize, r: usize) -> usize {
        ((l * self.phys + o) * self.phys + i) * self.right + r
    }

    #[inline]
    pub fn get(&self, l: usize, o: usize, i: usize, r: usize) -> f64 {
        self.data[self.idx(l, o, i, r)]
    }

    #[inline]
    pub fn set(&mut self, l: usize, o: usize, i: usize, r: usize, v: f64) {
        let k = self.idx(l, o, i, r);
        self.data[k] = v;
    }

    /// Bond-diagonal identity of bond dimension `bond`.
    pub fn identity(phys: usize, bond: usize) -> Self {
        let mut t = MpoTensor::zeros(bond, phys, bond);
        for b in 0..bond {
            for p in 0..phys {
                t.set(b, p, p, b, 1.0);
            }
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mpo {
    pub phys: usize,
    pub tensors: Vec<MpoTensor>,
}

impl Mpo {
    pub fn identity(phys: usize, n_sites: usize) -> Self {
        Mpo { phys, tensors: (0..n_sites).map(|_| MpoTensor::identity(phys, 1)).collect() }
    }

    pub fn n_sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn max_bond(&self) -> usize {
        self.tensors.iter().map(|t| t.right).max().unwrap_or(1)
    }

    /// Operator acting as `op` (a `d^2 x d^2` row-major matrix, first factor on
    /// the smaller site) on 0-based sites `a < b` and as the identity elsewhere.
    /// The operator-Schmidt decomposition of `op` sets the bond dimension.
    pub fn two_site(phys: usize, n_sites: usize, a: usize, b: usize, op: &[f64]) -> Result<Self> {
        let d = phys;
        if a >= b || b >= n_sites {
            return domain(format!("invalid site pair ({a}, {b}) for {n_sites} sites"));
        }
        if op.len() != d.pow(4) {
            return domain("two-site operator has the wrong size");
        }
        // op[(oa ob), (ia ib)] -> M[(oa ia), (ob ib)]
        let m = DMatrix::from_fn(d * d, d * d, |r, c| {
            let (oa, ia) = (r / d, r % d);
            let (ob, ib) = (c / d, c % d);
            op[(oa * d + ob) * d * d + ia * d + ib]
        });
        let (u, s, vt) = sorted_svd(m);
        let smax = s.first().copied().unwrap_or(0.0);
        let rank = s.iter().take_while(|&&x| x > 1e-14 * smax).count().max(1);
        let mut tensors: Vec<MpoTensor> = (0..n_sites).map(|_| MpoTensor::identity(d, 1)).collect();
        let mut wa = MpoTensor::zeros(1, d, rank);
        let mut wb = MpoTensor::zeros(rank, d, 1);
        for k in 0..rank {
            let f = s[k].sqrt();
            for o in 0..d {
                for i in 0..d {
                    wa.set(0, o, i, k, u[(o * d + i, k)] * f);
                    wb.set(k, o, i, 0, vt[(k, o * d + i)] * f);
                }
            }
        }
        tensors[a] = wa;
        tensors[b] = wb;
        for t in tensors.iter_mut().take(b).skip(a + 1) {
            *t = MpoTensor::identity(d, rank);
        }
        Ok(Mpo { phys, tensors })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Deterministic pseudo-random MPS with the given interior bond.
    pub(crate) fn random_mps(n: usize, phys: usize, bond: usize, seed: u64) -> Mps {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let tensors = (0..n)
            .map(|k| {
                let l = if k == 0 { 1 } else { bond };
                let r = if k == n - 1 { 1 } else { bond };
                let mut t = SiteTensor::zeros(l, phys, r);
                t.data.iter_mut().for_each(|x| *x = next());
                t
            })
            .collect();
        Mps::from_tensors(phys, tensors).unwrap()
    }

    #[test]
    fn svd_reconstructs_rank_deficient_blocks() {
        // two rank-one blocks with entries at the rounding level elsewhere
        let mut m = DMatrix::from_fn(8, 4, |r, c| 1e-16 * ((r * 5 + c * 3) % 7) as f64 - 3e-16);
        m[(1, 1)] = 0.5;
        m[(1, 2)] = -0.5;
        m[(2, 0)] = -0.0828;
        m[(2, 3)] = 0.0828;
        m[(3, 0)] = -0.4931;
        m[(3, 3)] = 0.4931;
        for a in [m.clone(), m.transpose(), super::tests::random_mps(3, 4, 5, 1).tensor(1).left_matrix()] {
            let (u, s, vt) = sorted_svd(a.clone());
            let sd = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.clone()));
            assert!((&u * sd * &vt - &a).abs().max() < 1e-14);
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
            let k = vt.nrows();
            assert!((&vt * vt.transpose() - DMatrix::identity(k, k)).abs().max() < 1e-13);
        }
    }

    #[test]
    fn truncation_rank_policy() {
        let p = TruncationPolicy::default();
        assert_eq!(truncation_rank(&[1.0, 0.5, 1e-9], &p).0, 2);
        assert_eq!(truncation_rank(&[1.0, 0.5, 1e-7], &p).0, 3);
        let tight = TruncationPolicy { max_discarded_weight: 1e-16, max_bond: 1 };
        let (keep, dw, flagged) = truncation_rank(&[1.0, 1.0], &tight);
        assert_eq!(keep, 1);
        assert!((dw - 0.5).abs() < 1e-15);
        assert!(flagged);
        assert_eq!(truncation_rank(&[0.0, 0.0], &p), (1, 0.0, false));
    }

    #[test]
    fn canonicalize_makes_isometries() {
        let mut m = random_mps(6, 4, 4, 7);
        let before = m.clone();
        let n2 = before.norm_sq();
        m.canonicalize(2);
        for k in 0..2 {
            assert!(m.left_isometry_residual(k) < 1e-12);
        }
        for k in 3..6 {
            assert!(m.right_isometry_residual(k) < 1e-12);
        }
        assert!((m.inner(&before).unwrap() - n2).abs() < 1e-12 * n2);
        let once = m.clone();
        m.canonicalize(2);
        assert!((m.inner(&once).unwrap() - n2).abs() < 1e-12 * n2);
        let a = once.to_dense();
        let b = m.to_dense();
        let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn product_state_canonicalization_keeps_content() {
        let mut m = Mps::product(2, &[vec![0.6, 0.8], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let dense = m.to_dense();
        m.canonicalize(1);
        let after = m.to_dense();
        for (x, y) in dense.iter().zip(&after) {
            assert!((x - y).abs() < 1e-14);
        }
        assert_eq!(m.bond_dims(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn compress_preserves_state_and_schmidt_matches_dense() {
        let mut m = random_mps(5, 2, 3, 11);
        let dense = m.to_dense();
        let report = m.compress(&TruncationPolicy::default());
        assert!(!report.flagged);
        let after = m.to_dense();
        let diff = dense.iter().zip(&after).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        // Schmidt values at cut 2 from a direct SVD of the reshaped vector.
        let mat = DMatrix::from_fn(4, 8, |r, c| dense[r * 8 + c]);
        let (_, s_ref, _) = sorted_svd(mat);
        let s = m.schmidt_values(2).unwrap();
        for (a, b) in s.iter().zip(&s_ref) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(m.schmidt_values(0).is_err());
        assert!(m.schmidt_values(5).is_err());
    }

    #[test]
    fn two_site_mpo_matches_dense_application() {
        let d = 2;
        // CZ on sites 1 and 4 of a 4-site chain
        let mut op = vec![0.0; 16];
        for k in 0..4 {
            op[k * 4 + k] = if k == 3 { -1.0 } else { 1.0 };
        }
        let mpo = Mpo::two_site(d, 4, 0, 3, &op).unwrap();
        assert_eq!(mpo.max_bond(), 2);
        let mut m = random_mps(4, d, 2, 3);
        let dense = m.to_dense();
        m.apply_mpo(&mpo, &TruncationPolicy::default()).unwrap();
        let after = m.to_dense();
        for (idx, (x, y)) in dense.iter().zip(&after).enumerate() {
            let b1 = (idx >> 3) & 1;
            let b4 = idx & 1;
            let sign = if b1 == 1 && b4 == 1 { -1.0 } else { 1.0 };
            assert!((sign * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_mpo_is_noop() {
        let mut m = random_mps(5, 4, 3, 5);
        let before = m.clone();
        m.apply_mpo(&Mpo::identity(4, 5), &TruncationPolicy::default()).unwrap();
        let fid = m.inner(&before).unwrap() / before.norm_sq();
        assert!((fid - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_local_identity_and_zero() {
        let mut m = random_mps(3, 4, 2, 9);
        let before = m.clone();
        let mut id = vec![0.0; 16];
        (0..4).for_each(|k| id[k * 5] = 1.0);
        m.apply_local(1, &id);
        assert_eq!(m, before);
        m.apply_local(1, &[0.0; 16]);
        assert_eq!(m.norm_sq(), 0.0);
    }
}
