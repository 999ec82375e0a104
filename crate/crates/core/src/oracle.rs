//! Closed-form dynamics of the complete-graph state under the three local
//! dissipators: derived rates, expectation values of every Pauli word,
//! reduced density matrices and a partial-transpose separability probe.
//!
//! Expectation values depend only on the word's signature `(n, m, l)`, the
//! number of X, Y and Z factors, because the model is invariant under any
//! permutation of the qubits.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, partial_transpose, qubit_count, trace, DenseMatrix};
use crate::pauli::PauliWord;

/// Dissipation rates `g0` (decay to |0>), `g1` (excitation to |1>), `g2`
/// (dephasing) and the derived transverse rate `alpha`, longitudinal rate
/// `beta` and drive `gamma`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Rates {
    pub fn new(g0: f64, g1: f64, g2: f64) -> Result<Self> {
        for (name, g) in [("g0", g0), ("g1", g1), ("g2", g2)] {
            if !(g >= 0.0) || !g.is_finite() {
                return domain(format!("{name} = {g} must be a finite nonnegative rate"));
            }
        }
        Ok(Rates {
            g0,
            g1,
            g2,
            alpha: (g0 + g1) / 2.0 + 2.0 * g2,
            beta: g0 + g1,
            gamma: g0 - g1,
        })
    }

    /// Steady-state `<Z>`; zero when `beta = 0` (which forces `gamma = 0`).
    pub fn z_steady(&self) -> f64 {
        if self.beta == 0.0 {
            0.0
        } else {
            self.gamma / self.beta
        }
    }
}

pub fn rates_from_g(g0: f64, g1: f64, g2: f64) -> Result<Rates> {
    Rates::new(g0, g1, g2)
}

/// The five reference parameter sets, numbered 1 to 5.
pub const BUILTIN_CASES: [(&str, f64, f64, f64); 5] = [
    ("spontaneous emission only", 1.0, 0.0, 0.0),
    ("pure dephasing", 0.0, 0.0, 1.0),
    ("low temperature, low dephasing", 0.9, 0.1, 0.1),
    ("generic dissipative rates", 0.6, 0.4, 0.25),
    ("infinite temperature with dephasing", 1.0, 1.0, 1.0),
];

pub fn builtin_case(k: usize) -> Result<Rates> {
    match k {
        1..=5 => {
            let (_, g0, g1, g2) = BUILTIN_CASES[k - 1];
            Rates::new(g0, g1, g2)
        }
        _ => domain(format!("built-in cases are numbered 1..=5, got {k}")),
    }
}

/// Counts of X, Y and Z factors in a word on `n_sites` qubits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordSignature {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub n_sites: usize,
}

impl WordSignature {
    pub fn new(n: usize, m: usize, l: usize, n_sites: usize) -> Result<Self> {
        if n + m + l > n_sites {
            return domain(format!("signature ({n}, {m}, {l}) does not fit {n_sites} sites"));
        }
        Ok(WordSignature { n, m, l, n_sites })
    }

    pub fn of(word: &PauliWord) -> Self {
        let (n, m, l) = word.counts();
        WordSignature { n, m, l, n_sites: word.n_sites() }
    }

    pub fn is_identity(&self) -> bool {
        self.n + self.m + self.l == 0
    }

    /// Every signature with `n + m + l <= max_weight`.
    pub fn enumerate(n_sites: usize, max_weight: usize) -> Vec<WordSignature> {
        let w = max_weight.min(n_sites);
        let mut out = Vec::new();
        for n in 0..=w {
            for m in 0..=w - n {
                for l in 0..=w - n - m {
                    out.push(WordSignature { n, m, l, n_sites });
                }
            }
        }
        out
    }
}

/// A finite time or the `t -> infinity` limit.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Time {
    At(f64),
    SteadyState,
}

impl Time {
    fn check(self) -> Result<Self> {
        match self {
            Time::At(t) if !(t >= 0.0) => domain(format!("time {t} must be nonnegative")),
            other => Ok(other),
        }
    }

    /// `exp(-rate * t)`, with the limit taken for the steady state.
    fn decay(self, rate: f64) -> f64 {
        match self {
            Time::At(t) => (-rate * t).exp(),
            Time::SteadyState if rate > 0.0 => 0.0,
            Time::SteadyState => 1.0,
        }
    }
}

impl From<f64> for Time {
    fn from(t: f64) -> Self {
        Time::At(t)
    }
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Expectation value in the complete-graph state.
pub fn initial_expectation(sig: WordSignature) -> f64 {
    let WordSignature { n, m, l, n_sites } = sig;
    if n % 2 == 1 && m == 0 && n + l == n_sites {
        sign((n - 1) / 2)
    } else if n == 0 && m % 2 == 0 && l == 0 {
        1.0
    } else {
        0.0
    }
}

/// `<Z>(t) = (gamma / beta) (1 - exp(-beta t))`.
pub fn z_expectation(time: Time, r: &Rates) -> f64 {
    if r.beta == 0.0 {
        return 0.0;
    }
    r.gamma / r.beta * (1.0 - time.decay(r.beta))
}

/// `<X^n Y^m Z^l>` at `time` for the complete-graph initial state.
pub fn expectation(sig: WordSignature, time: impl Into<Time>, r: &Rates) -> Result<f64> {
    let time = time.into().check()?;
    let WordSignature { n, m, l, n_sites } = sig;
    if sig.is_identity() {
        return Ok(1.0);
    }
    if n == 0 && m % 2 == 0 {
        let yy = time.decay(r.alpha * m as f64);
        return Ok(yy * z_expectation(time, r).powi(l as i32));
    }
    if n % 2 == 1 && m == 0 && n + l == n_sites {
        let rate = n as f64 * (r.alpha - r.beta) + n_sites as f64 * r.beta;
        return Ok(sign((n - 1) / 2) * time.decay(rate));
    }
    Ok(0.0)
}

/// Expectation of an explicit word; only its signature matters.
pub fn word_expectation(word: &PauliWord, time: impl Into<Time>, r: &Rates) -> Result<f64> {
    expectation(WordSignature::of(word), time, r)
}

/// Reduced density matrix of `k` qubits (2 or 3) of an `n_sites` system, in
/// closed form.
pub fn reduced_density(k: usize, time: impl Into<Time>, r: &Rates, n_sites: usize) -> Result<DenseMatrix> {
    let time = time.into().check()?;
    if !(k == 2 || k == 3) {
        return domain(format!("closed-form reduced matrices exist for k = 2 or 3, got {k}"));
    }
    if n_sites <= k {
        return domain(format!("k = {k} requires N > {k}, got N = {n_sites}"));
    }
    let z = z_expectation(time, r);
    let (zp, zm) = (1.0 + z, 1.0 - z);
    let y2 = time.decay(2.0 * r.alpha);
    let c = |x: f64| C64::new(x, 0.0);
    if k == 2 {
        #[rustfmt::skip]
        let e = [
            zp * zp, 0.0,     0.0,     -y2,
            0.0,     zp * zm, y2,      0.0,
            0.0,     y2,      zp * zm, 0.0,
            -y2,     0.0,     0.0,     zm * zm,
        ];
        return Ok(DenseMatrix::from_row_slice(4, 4, &e.map(|x| c(x / 4.0))));
    }
    let (a, b) = (y2 * zp, y2 * zm);
    #[rustfmt::skip]
    let e = [
        zp*zp*zp, 0.0,      0.0,      -a,       0.0,      -a,       -a,       0.0,
        0.0,      zm*zp*zp, a,        0.0,      a,        0.0,      0.0,      -b,
        0.0,      a,        zm*zp*zp, 0.0,      a,        0.0,      0.0,      -b,
        -a,       0.0,      0.0,      zm*zm*zp, 0.0,      b,        b,        0.0,
        0.0,      a,        a,        0.0,      zm*zp*zp, 0.0,      0.0,      -b,
        -a,       0.0,      0.0,      b,        0.0,      zm*zm*zp, b,        0.0,
        -a,       0.0,      0.0,      b,        0.0,      b,        zm*zm*zp, 0.0,
        0.0,      -b,       -b,       0.0,      -b,       0.0,      0.0,      zm*zm*zm,
    ];
    Ok(DenseMatrix::from_row_slice(8, 8, &e.map(|x| c(x / 8.0))))
}

/// Largest subsystem accepted by [`general_reduced_element`].
pub const GENERAL_REDUCED_MAX: usize = 6;

/// `<row| rho_k |col>` for `k` qubits, computed by expanding `|col><row|`
/// into Pauli words and summing their expectation values. Bit `k - 1` of
/// `row`/`col` is the first qubit.
pub fn general_reduced_element(
    k: usize,
    row: usize,
    col: usize,
    time: impl Into<Time>,
    r: &Rates,
    n_sites: usize,
) -> Result<f64> {
    let time = time.into().check()?;
    if k == 0 || k > GENERAL_REDUCED_MAX {
        return domain(format!("subsystem size {k} outside 1..={GENERAL_REDUCED_MAX}"));
    }
    if n_sites <= k {
        return domain(format!("subsystem of {k} qubits requires N > {k}, got N = {n_sites}"));
    }
    if row >> k != 0 || col >> k != 0 {
        return domain("basis index out of range");
    }
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    // per qubit: two (coefficient, factor) options, factor 0=I 1=X 2=Y 3=Z
    let factors: Vec<[(C64, u8); 2]> = (0..k)
        .map(|q| {
            let rb = (row >> (k - 1 - q)) & 1;
            let cb = (col >> (k - 1 - q)) & 1;
            match (rb, cb) {
                (0, 0) => [(half, 0), (half, 3)],
                (1, 1) => [(half, 0), (-half, 3)],
                // |0><1| = sigma^+ = (X + iY)/2
                (1, 0) => [(half, 1), (ihalf, 2)],
                // |1><0| = sigma^- = (X - iY)/2
                _ => [(half, 1), (-ihalf, 2)],
            }
        })
        .collect();
    let mut acc = C64::new(0.0, 0.0);
    for choice in 0..(1usize << k) {
        let mut coef = C64::new(1.0, 0.0);
        let (mut n, mut m, mut l) = (0, 0, 0);
        for (q, f) in factors.iter().enumerate() {
            let (c, axis) = f[(choice >> q) & 1];
            coef *= c;
            match axis {
                1 => n += 1,
                2 => m += 1,
                3 => l += 1,
                _ => {}
            }
        }
        let e = expectation(WordSignature { n, m, l, n_sites }, time, r)?;
        acc += coef * e;
    }
    Ok(acc.re)
}

/// Full `2^k x 2^k` reduced matrix through [`general_reduced_element`].
pub fn general_reduced_density(k: usize, time: impl Into<Time>, r: &Rates, n_sites: usize) -> Result<DenseMatrix> {
    let time = time.into();
    let d = 1usize << k;
    let mut out = DenseMatrix::zeros(d, d);
    for row in 0..d {
        for col in 0..d {
            out[(row, col)] = C64::new(general_reduced_element(k, row, col, time, r, n_sites)?, 0.0);
        }
    }
    Ok(out)
}

/// Minimum eigenvalue of the partial transpose over the first `split` qubits.
pub fn min_ppt_eigenvalue(rho: &DenseMatrix, split: usize) -> Result<f64> {
    qubit_count(rho)?;
    if hermiticity_defect(rho) > 1e-10 {
        return domain("density matrix is not Hermitian");
    }
    if (trace(rho) - C64::new(1.0, 0.0)).norm() > 1e-8 {
        return domain("density matrix does not have unit trace");
    }
    let pt = partial_transpose(rho, split)?;
    Ok(hermitian_eigenvalues(&pt)[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, max_abs_diff, projector};
    use nalgebra::DVector;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn builtin_rates_table() {
        let expect = [(0.5, 1.0, 1.0), (2.0, 0.0, 0.0), (0.7, 1.0, 0.8), (1.0, 1.0, 0.2), (3.0, 2.0, 0.0)];
        for (k, (a, b, g)) in expect.into_iter().enumerate() {
            let r = builtin_case(k + 1).unwrap();
            assert!(close(r.alpha, a, 1e-15), "case {}", k + 1);
            assert!(close(r.beta, b, 1e-15));
            assert!(close(r.gamma, g, 1e-15));
        }
        assert!(builtin_case(0).is_err());
        assert!(builtin_case(6).is_err());
    }

    #[test]
    fn rates_invariants_and_errors() {
        let r = rates_from_g(0.6, 0.4, 0.25).unwrap();
        assert!(r.gamma.abs() <= r.beta && r.alpha >= r.beta / 2.0);
        assert!(rates_from_g(-1.0, 0.0, 0.0).is_err());
        assert!(rates_from_g(0.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn initial_values() {
        let s = |n, m, l| WordSignature::new(n, m, l, 6).unwrap();
        assert_eq!(initial_expectation(s(1, 0, 5)), 1.0);
        assert_eq!(initial_expectation(s(3, 0, 3)), -1.0);
        assert_eq!(initial_expectation(s(5, 0, 1)), 1.0);
        assert_eq!(initial_expectation(s(0, 0, 2)), 0.0);
        assert_eq!(initial_expectation(s(0, 0, 0)), 1.0);
        assert_eq!(initial_expectation(s(0, 4, 0)), 1.0);
        assert_eq!(initial_expectation(s(0, 3, 0)), 0.0);
        assert_eq!(initial_expectation(s(1, 0, 4)), 0.0);
        assert_eq!(initial_expectation(s(2, 0, 4)), 0.0);
    }

    /// Brute force: expectation values in the dense complete-graph state.
    #[test]
    fn initial_values_match_dense_state() {
        use crate::graph::{build_state_vector, make_complete};
        use crate::pauli::symmetric_word;
        for n_sites in 2..=6 {
            let psi = build_state_vector(&make_complete(n_sites).unwrap()).unwrap();
            for sig in WordSignature::enumerate(n_sites, n_sites) {
                let w = symmetric_word(sig.n, sig.m, sig.l, n_sites).unwrap();
                let v = psi.dotc(&w.apply_to_vector(&psi).unwrap());
                assert!(v.im.abs() < 1e-12);
                assert!(close(v.re, initial_expectation(sig), 1e-12), "{sig:?}");
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let c1 = builtin_case(1).unwrap();
        let s = |n, m, l, ns| WordSignature::new(n, m, l, ns).unwrap();
        assert!(close(expectation(s(0, 2, 0, 4), 2.0, &c1).unwrap(), 0.1353352832366127, 1e-15));
        for k in 1..=5 {
            let r = builtin_case(k).unwrap();
            assert_eq!(expectation(s(0, 0, 1, 4), 0.0, &r).unwrap(), 0.0);
        }
        assert_eq!(expectation(s(0, 0, 1, 4), Time::SteadyState, &c1).unwrap(), 1.0);
        assert!(close(expectation(s(1, 0, 3, 4), 1.0, &c1).unwrap(), (-3.5f64).exp(), 1e-16));
        assert!(close((-3.5f64).exp(), 0.0301974, 1e-7));
        let yyz = expectation(s(0, 2, 1, 4), 1.0, &c1).unwrap();
        assert!(close(yyz, (-1.0f64).exp() * (1.0 - (-1.0f64).exp()), 1e-16));
        assert!(close(yyz, 0.2325442, 1e-7));
        assert!(expectation(s(0, 2, 0, 4), -1.0, &c1).is_err());
    }

    #[test]
    fn zero_decay_steady_state() {
        let r = rates_from_g(0.0, 0.0, 0.0).unwrap();
        let s = WordSignature::new(0, 2, 0, 4).unwrap();
        assert_eq!(expectation(s, Time::SteadyState, &r).unwrap(), 1.0);
        let s = WordSignature::new(0, 0, 1, 4).unwrap();
        assert_eq!(expectation(s, Time::SteadyState, &r).unwrap(), 0.0);
    }

    #[test]
    fn factorization_of_y_z_family() {
        let times = [0.0, 0.05, 0.3, 1.0, 2.5, 7.0];
        for k in 1..=5 {
            let r = builtin_case(k).unwrap();
            for &t in &times {
                let yy = expectation(WordSignature::new(0, 2, 0, 12).unwrap(), t, &r).unwrap();
                let z = expectation(WordSignature::new(0, 0, 1, 12).unwrap(), t, &r).unwrap();
                for n in 0..=3 {
                    for l in 0..=3 {
                        let v = expectation(WordSignature::new(0, 2 * n, l, 12).unwrap(), t, &r).unwrap();
                        assert!(close(v, yy.powi(n as i32) * z.powi(l as i32), 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn stabilizer_family_log_slope() {
        let n_sites = 8;
        for k in 1..=5 {
            let r = builtin_case(k).unwrap();
            for n in [1usize, 3, 5] {
                let sig = WordSignature::new(n, 0, n_sites - n, n_sites).unwrap();
                let rate = n as f64 * (r.alpha - r.beta) + n_sites as f64 * r.beta;
                let h = 1e-3;
                let mut prev = expectation(sig, 0.0, &r).unwrap().abs();
                for step in 1..200 {
                    let t = step as f64 * h;
                    let v = expectation(sig, t, &r).unwrap().abs();
                    assert!(v < prev);
                    let slope = -(v.ln() - prev.ln()) / h;
                    assert!(((slope - rate) / rate).abs() < 1e-6);
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn vanishing_drive_kills_z_words() {
        for k in [2, 5] {
            let r = builtin_case(k).unwrap();
            for sig in WordSignature::enumerate(6, 6) {
                if sig.l > 0 && sig.n == 0 {
                    for t in [0.1, 1.0, 3.0] {
                        assert_eq!(expectation(sig, t, &r).unwrap(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn time_zero_matches_initial_state() {
        for ns in 1..=8 {
            for sig in WordSignature::enumerate(ns, 6) {
                for k in 1..=5 {
                    let r = builtin_case(k).unwrap();
                    assert_eq!(expectation(sig, 0.0, &r).unwrap(), initial_expectation(sig));
                }
            }
        }
    }

    #[test]
    fn rho2_at_time_zero() {
        let r = builtin_case(3).unwrap();
        let rho = reduced_density(2, 0.0, &r, 5).unwrap();
        #[rustfmt::skip]
        let e = [1.0, 0.0, 0.0, -1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, -1.0, 0.0, 0.0, 1.0];
        let expect = DenseMatrix::from_row_slice(4, 4, &e.map(|x| C64::new(x / 4.0, 0.0)));
        assert!(max_abs_diff(&rho, &expect) < 1e-15);
    }

    #[test]
    fn rho2_relaxes_to_ground_state() {
        let r = builtin_case(1).unwrap();
        let rho = reduced_density(2, Time::SteadyState, &r, 5).unwrap();
        let mut expect = DenseMatrix::zeros(4, 4);
        expect[(0, 0)] = C64::new(1.0, 0.0);
        assert!(max_abs_diff(&rho, &expect) < 1e-15);
        let late = reduced_density(2, 60.0, &r, 5).unwrap();
        assert!(max_abs_diff(&late, &expect) < 1e-12);
    }

    #[test]
    fn rho3_trace_and_domain() {
        let r = builtin_case(4).unwrap();
        let rho = reduced_density(3, 0.0, &r, 6).unwrap();
        assert!((trace(&rho).re - 1.0).abs() < 1e-15);
        assert!(reduced_density(3, 0.0, &r, 3).is_err());
        assert!(reduced_density(2, 0.0, &r, 2).is_err());
        assert!(reduced_density(4, 0.0, &r, 9).is_err());
    }

    #[test]
    fn general_rule_matches_closed_forms() {
        let times = [0.0, 0.1, 0.7, 2.0];
        for k in 1..=5 {
            let r = builtin_case(k).unwrap();
            for &t in &times {
                for sub in [2usize, 3] {
                    let a = reduced_density(sub, t, &r, 7).unwrap();
                    let b = general_reduced_density(sub, t, &r, 7).unwrap();
                    assert!(max_abs_diff(&a, &b) < 1e-14, "k={sub} case {k} t={t}");
                }
            }
        }
    }

    #[test]
    fn general_rule_examples() {
        let r = builtin_case(4).unwrap();
        let t = 0.4;
        let z = z_expectation(Time::At(t), &r);
        let y2 = (-2.0 * r.alpha * t).exp();
        let e00 = general_reduced_element(2, 0, 0, t, &r, 5).unwrap();
        assert!(close(e00, (1.0 + z).powi(2) / 4.0, 1e-15));
        let e03 = general_reduced_element(2, 0, 3, t, &r, 5).unwrap();
        assert!(close(e03, -y2 / 4.0, 1e-15));
        assert!(general_reduced_element(7, 0, 0, t, &r, 9).is_err());
        assert!(general_reduced_element(4, 0, 0, t, &r, 4).is_err());
        assert!(general_reduced_element(2, 4, 0, t, &r, 5).is_err());
    }

    #[test]
    fn reduced_matrices_remain_ppt() {
        for k in 1..=5 {
            let r = builtin_case(k).unwrap();
            for t in [0.0, 0.1, 1.0, 10.0] {
                let r2 = reduced_density(2, t, &r, 6).unwrap();
                assert!(min_ppt_eigenvalue(&r2, 1).unwrap() >= -1e-12);
                let r3 = reduced_density(3, t, &r, 6).unwrap();
                assert!(min_ppt_eigenvalue(&r3, 1).unwrap() >= -1e-12);
                let r4 = general_reduced_density(4, t, &r, 6).unwrap();
                assert!(min_ppt_eigenvalue(&r4, 2).unwrap() >= -1e-12);
                // positive semidefinite and unit trace
                assert!(hermitian_eigenvalues(&r3)[0] >= -1e-12);
                assert!((trace(&r3).re - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ppt_reference_states() {
        let s = 0.5f64.sqrt();
        let bell = projector(&DVector::from_vec(vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)]));
        assert!(close(min_ppt_eigenvalue(&bell, 1).unwrap(), -0.5, 1e-14));
        let a = DenseMatrix::from_row_slice(2, 2, &[0.8, 0.1, 0.1, 0.2].map(|x| C64::new(x, 0.0)));
        let product = kron(&a, &a);
        assert!(min_ppt_eigenvalue(&product, 1).unwrap() >= 0.0);
        let mut bad = bell.clone();
        bad[(0, 1)] = C64::new(0.3, 0.0);
        assert!(min_ppt_eigenvalue(&bad, 1).is_err());
    }
}
