//! Time evolution of vectorized states.
//!
//! Without a Hamiltonian the propagator over one step is a product of exact
//! single-site channels. With `H = J Z_a Z_b` a step is Strang split as
//! `ZZ(tau/2) . channels(tau) . ZZ(tau/2)`, the ZZ conjugation being applied
//! as a spanning operator of bond dimension at most 4.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dense::HamiltonianSpec;
use crate::error::{domain, Result};
use crate::linalg::{hermitian_eigenvalues, kron, DenseMatrix, ZERO};
use crate::mps::{Mpo, TruncationPolicy, TruncationReport};
use crate::oracle::Rates;
use crate::pauli::{PauliAxis, PauliWord};
use crate::vectorized::VectorizedState;

pub const DEFAULT_TAU: f64 = 0.004;

/// Exact one-site propagator over `tau`, acting on `(c_I, c_X, c_Y, c_Z)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Channel {
    pub matrix: [f64; 16],
    pub rates: Rates,
    pub tau: f64,
}

pub fn make_channel(r: &Rates, tau: f64) -> Result<Channel> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return domain(format!("step {tau} must be finite and nonnegative"));
    }
    let transverse = (-r.alpha * tau).exp();
    let longitudinal = (-r.beta * tau).exp();
    let source = if r.beta == 0.0 { 0.0 } else { r.gamma / r.beta * (1.0 - longitudinal) };
    #[rustfmt::skip]
    let matrix = [
        1.0,    0.0,        0.0,        0.0,
        0.0,    transverse, 0.0,        0.0,
        0.0,    0.0,        transverse, 0.0,
        source, 0.0,        0.0,        longitudinal,
    ];
    Ok(Channel { matrix, rates: *r, tau })
}

impl Channel {
    /// Smallest eigenvalue of the Choi matrix `sum |i><j| (x) Phi(|i><j|)`.
    pub fn choi_min_eigenvalue(&self) -> f64 {
        let paulis: Vec<DenseMatrix> = PauliAxis::ALL.iter().map(|a| a.matrix()).collect();
        let mut choi = DenseMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                // |i><j| = sum_b c_b sigma^b with c_b = (sigma^b)_{ji} / 2
                let c: Vec<C64> = paulis.iter().map(|p| p[(j, i)] * 0.5).collect();
                let mut image = DenseMatrix::zeros(2, 2);
                for (a, pa) in paulis.iter().enumerate() {
                    let coeff: C64 = (0..4).map(|b| c[b] * self.matrix[a * 4 + b]).sum();
                    if coeff != ZERO {
                        image += pa * coeff;
                    }
                }
                let mut unit = DenseMatrix::zeros(2, 2);
                unit[(i, j)] = C64::new(1.0, 0.0);
                choi += kron(&unit, &image);
            }
        }
        hermitian_eigenvalues(&choi)[0]
    }
}

/// Superoperator of `rho -> U rho U^dag`, `U = exp(-i J dt Z (x) Z)`, in the
/// two-site orthonormal Pauli basis (first factor on the smaller site).
pub fn zz_superoperator(coupling: f64, dt: f64) -> [f64; 256] {
    let theta = coupling * dt;
    let (c, s) = (theta.cos(), theta.sin());
    let zz = kron(&PauliAxis::Z.matrix(), &PauliAxis::Z.matrix());
    let u = DenseMatrix::identity(4, 4) * C64::new(c, 0.0) + &zz * C64::new(0.0, -s);
    let ud = u.adjoint();
    let basis: Vec<DenseMatrix> = (0..16)
        .map(|k| kron(&PauliAxis::from_index(k / 4).matrix(), &PauliAxis::from_index(k % 4).matrix()) * C64::new(0.5, 0.0))
        .collect();
    let mut out = [0.0; 256];
    for (a, ea) in basis.iter().enumerate() {
        let image = &u * ea * &ud;
        for (b, eb) in basis.iter().enumerate() {
            out[b * 16 + a] = (eb * &image).trace().re;
        }
    }
    out
}

/// Pair `(N/2, N/2 + 1)`, adjacent across the middle cut.
pub fn default_ising_pair(n_sites: usize, coupling: f64) -> HamiltonianSpec {
    HamiltonianSpec::IsingPair { a: n_sites / 2, b: n_sites / 2 + 1, coupling }
}

/// Everything needed to advance a state by one step.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub n_sites: usize,
    pub tau: f64,
    pub channel: Channel,
    pub hamiltonian: HamiltonianSpec,
    half_step: Option<Mpo>,
}

impl Propagator {
    pub fn new(n_sites: usize, r: &Rates, h: &HamiltonianSpec, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return domain(format!("step {tau} must be positive"));
        }
        h.validate(n_sites)?;
        let channel = make_channel(r, tau)?;
        // a zero coupling is a zero Hamiltonian: the half steps are the
        // identity and are skipped so that no compression sweep runs
        let half_step = match h.ordered_pair() {
            Some((a, b, j)) if j != 0.0 => Some(Mpo::two_site(4, n_sites, a - 1, b - 1, &zz_superoperator(j, 0.5 * tau))?),
            _ => None,
        };
        Ok(Propagator { n_sites, tau, channel, hamiltonian: *h, half_step })
    }

    pub fn half_step_mpo(&self) -> Option<&Mpo> {
        self.half_step.as_ref()
    }
}

/// Advances `state` by one step.
pub fn step(state: &mut VectorizedState, prop: &Propagator, policy: &TruncationPolicy) -> Result<TruncationReport> {
    if state.n_sites() != prop.n_sites {
        return domain("propagator and state sizes differ");
    }
    let mut report = TruncationReport { max_bond: state.max_bond(), ..Default::default() };
    if let Some(mpo) = &prop.half_step {
        report.merge(&state.apply_spanning_operator(mpo, policy)?);
    }
    for site in 1..=state.n_sites() {
        state.apply_single_site(site, &prop.channel.matrix)?;
    }
    if let Some(mpo) = &prop.half_step {
        report.merge(&state.apply_spanning_operator(mpo, policy)?);
    }
    report.max_bond = report.max_bond.max(state.max_bond());
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub tau: f64,
    pub t_final: f64,
    /// Steps between records.
    pub sample_every: usize,
    pub observables: Vec<PauliWord>,
    /// OSEE cuts, `1..N-1`.
    pub cuts: Vec<usize>,
}

impl Schedule {
    /// Schedule sampling every `dt_sample` (rounded to a whole number of steps).
    pub fn sampled(tau: f64, t_final: f64, dt_sample: f64, observables: Vec<PauliWord>, cuts: Vec<usize>) -> Result<Self> {
        if !(tau > 0.0) || !(dt_sample > 0.0) {
            return domain("step and sample interval must be positive");
        }
        let sample_every = ((dt_sample / tau).round() as usize).max(1);
        let s = Schedule { tau, t_final, sample_every, observables, cuts };
        s.n_steps()?;
        Ok(s)
    }

    pub fn n_steps(&self) -> Result<usize> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return domain(format!("step {} must be positive", self.tau));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return domain(format!("final time {} must be nonnegative", self.t_final));
        }
        if self.sample_every == 0 {
            return domain("sample_every must be at least 1");
        }
        let ratio = self.t_final / self.tau;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-6 * ratio.max(1.0) {
            return domain(format!("final time {} is not a multiple of the step {}", self.t_final, self.tau));
        }
        Ok(steps as usize)
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        self.n_steps()?;
        for w in &self.observables {
            if w.n_sites() != n_sites {
                return domain(format!("observable {w} is defined on {} sites, not {n_sites}", w.n_sites()));
            }
        }
        for &c in &self.cuts {
            if c == 0 || c >= n_sites {
                return domain(format!("cut {c} outside 1..={}", n_sites.saturating_sub(1)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub labels: Vec<String>,
    pub cuts: Vec<usize>,
    pub times: Vec<f64>,
    /// `values[sample][observable]`.
    pub values: Vec<Vec<f64>>,
    /// `osee[sample][cut]`.
    pub osee: Vec<Vec<f64>>,
    pub trace: Vec<f64>,
    pub max_bond: Vec<usize>,
    /// Cumulative discarded weight up to each sample.
    pub discarded_weight: Vec<f64>,
    pub flagged: bool,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[k]).collect()
    }

    pub fn osee_column(&self, k: usize) -> Vec<f64> {
        self.osee.iter().map(|row| row[k]).collect()
    }

    pub fn overall_max_bond(&self) -> usize {
        self.max_bond.iter().copied().max().unwrap_or(0)
    }
}

/// Runs the schedule, calling `observer(t, state)` at every sample time
/// (starting with `t = 0`).
pub fn run_observed<F>(
    state0: &VectorizedState,
    r: &Rates,
    h: &HamiltonianSpec,
    sched: &Schedule,
    policy: &TruncationPolicy,
    mut observer: F,
) -> Result<TruncationReport>
where
    F: FnMut(f64, &mut VectorizedState, &TruncationReport) -> Result<()>,
{
    let n = state0.n_sites();
    sched.validate(n)?;
    let steps = sched.n_steps()?;
    let prop = Propagator::new(n, r, h, sched.tau)?;
    let mut state = state0.clone();
    let mut total = TruncationReport { max_bond: state.max_bond(), ..Default::default() };
    observer(0.0, &mut state, &total)?;
    for k in 1..=steps {
        let rep = step(&mut state, &prop, policy)?;
        total.merge(&rep);
        if k % sched.sample_every == 0 {
            total.max_bond = state.max_bond();
            observer(k as f64 * sched.tau, &mut state, &total)?;
        }
    }
    Ok(total)
}

pub fn run(
    state0: &VectorizedState,
    r: &Rates,
    h: &HamiltonianSpec,
    sched: &Schedule,
    policy: &TruncationPolicy,
) -> Result<TimeSeries> {
    let mut ts = TimeSeries {
        labels: sched.observables.iter().map(|w| w.to_string()).collect(),
        cuts: sched.cuts.clone(),
        ..Default::default()
    };
    let total = run_observed(state0, r, h, sched, policy, |t, state, rep| {
        ts.times.push(t);
        let row = sched.observables.iter().map(|w| state.measure_word(w)).collect::<Result<Vec<_>>>()?;
        ts.values.push(row);
        ts.trace.push(state.trace());
        ts.max_bond.push(state.max_bond());
        ts.discarded_weight.push(rep.discarded_weight);
        let osee = sched.cuts.iter().map(|&c| state.osee(c)).collect::<Result<Vec<_>>>()?;
        ts.osee.push(osee);
        Ok(())
    })?;
    ts.flagged = total.flagged;
    Ok(ts)
}

/// Channel matrix obtained from the dense one-site generator, as a cross-check.
pub fn channel_from_generator(r: &Rates, tau: f64) -> Result<[f64; 16]> {
    use crate::dense::{build_liouvillian, density_from_pauli_coefficients, pauli_coefficients};
    let l = build_liouvillian(1, r, &HamiltonianSpec::None)?;
    let mut out = [0.0; 16];
    for b in 0..4 {
        let mut c = vec![0.0; 4];
        c[b] = 1.0;
        let rho = density_from_pauli_coefficients(&c)?;
        let image = pauli_coefficients(&l.propagate(&rho, tau))?;
        for a in 0..4 {
            out[a * 4 + b] = image[a];
        }
    }
    Ok(out)
}

pub fn max_entry_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
