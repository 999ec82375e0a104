//! Graph specifications and graph states: dense state vectors, stabilizers
//! and exact pure-state MPS constructed gate by gate.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{domain, resource, Error, Result};
use crate::mps::{Mpo, MpoTensor, Mps, TruncationPolicy, TruncationReport};
use crate::pauli::{PauliAxis, PauliWord};

/// Largest graph for which [`build_state_vector`] allocates the dense vector.
pub const DENSE_STATE_MAX_SITES: usize = 20;

/// Undirected simple graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphSpec {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n < 1 {
            return domain("a graph needs at least one vertex");
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return domain(format!("self-loop on vertex {i}"));
            }
            if i == 0 || j == 0 || i > n || j > n {
                return domain(format!("edge ({i}, {j}) references a vertex outside 1..={n}"));
            }
            if !set.insert((i.min(j), i.max(j))) {
                return domain(format!("duplicate edge ({i}, {j})"));
            }
        }
        Ok(GraphSpec { n, edges: set })
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        GraphSpec::new(n, [])
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Edges as ordered pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (1..=self.n).filter(|&j| j != i && self.has_edge(i, j)).collect()
    }

    /// Parses `"N"` on the first line followed by one `"i j"` edge per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("graph file is empty".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the vertex count".into()))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace().map(str::parse::<usize>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(i)), Some(Ok(j)), None) => edges.push((i, j)),
                _ => return Err(Error::Parse(format!("bad edge line {line:?}"))),
            }
        }
        GraphSpec::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (i, j) in self.edges() {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }

    /// Resolves a named family (`complete`, `ring`, `star`, `edgeless`) at
    /// size `n`, or reads a graph file.
    pub fn from_name_or_path(name: &str, n: usize) -> Result<Self> {
        match name {
            "complete" => make_complete(n),
            "ring" => make_ring(n),
            "star" => make_star(n),
            "edgeless" | "empty" => GraphSpec::edgeless(n),
            path => {
                let text = std::fs::read_to_string(Path::new(path))?;
                let g = GraphSpec::parse(&text)?;
                if g.n_vertices() != n {
                    return Err(Error::Config(format!(
                        "graph file {path} has {} vertices but N = {n} was requested",
                        g.n_vertices()
                    )));
                }
                Ok(g)
            }
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn make_complete(n: usize) -> Result<GraphSpec> {
    if n < 2 {
        return domain("complete graph needs N >= 2");
    }
    GraphSpec::new(n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))))
}

pub fn make_ring(n: usize) -> Result<GraphSpec> {
    if n < 3 {
        return domain("ring graph needs N >= 3");
    }
    GraphSpec::new(n, (1..=n).map(|i| (i, i % n + 1)))
}

pub fn make_star(n: usize) -> Result<GraphSpec> {
    if n < 2 {
        return domain("star graph needs N >= 2");
    }
    GraphSpec::new(n, (2..=n).map(|j| (1, j)))
}

/// Dense amplitudes over the computational basis, site 1 most significant.
pub type StateVector = DVector<C64>;

/// `prod CZ(i, j) |+...+>` built by applying each gate to the dense vector.
pub fn build_state_vector(g: &GraphSpec) -> Result<StateVector> {
    let n = g.n_vertices();
    if n > DENSE_STATE_MAX_SITES {
        return resource(format!("dense state on {n} qubits exceeds the {DENSE_STATE_MAX_SITES}-qubit guard"));
    }
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let mut psi = DVector::from_element(dim, C64::new(amp, 0.0));
    for (i, j) in g.edges() {
        let mask = (1usize << (n - i)) | (1usize << (n - j));
        for (b, a) in psi.iter_mut().enumerate() {
            if b & mask == mask {
                *a = -*a;
            }
        }
    }
    Ok(psi)
}

/// `S_i = X_i prod_{j ~ i} Z_j`.
pub fn stabilizer(g: &GraphSpec, i: usize) -> Result<PauliWord> {
    let n = g.n_vertices();
    if i == 0 || i > n {
        return domain(format!("vertex {i} outside 1..={n}"));
    }
    let mut w = PauliWord::identity(n);
    w.set(i, PauliAxis::X)?;
    for j in g.neighbors(i) {
        w.set(j, PauliAxis::Z)?;
    }
    Ok(w)
}

/// Real pure-state MPS (local dimension 2, basis `|0>`, `|1>`).
#[derive(Clone, Debug, PartialEq)]
pub struct PureMps {
    mps: Mps,
}

impl PureMps {
    pub fn from_mps(mps: Mps) -> Result<Self> {
        if mps.phys() != 2 {
            return domain("pure-state MPS must have local dimension 2");
        }
        Ok(PureMps { mps })
    }

    pub fn mps(&self) -> &Mps {
        &self.mps
    }

    pub fn n_sites(&self) -> usize {
        self.mps.n_sites()
    }

    pub fn max_bond(&self) -> usize {
        self.mps.max_bond()
    }

    pub fn to_state_vector(&self) -> StateVector {
        DVector::from_iterator(
            1usize << self.n_sites(),
            self.mps.to_dense().into_iter().map(|x| C64::new(x, 0.0)),
        )
    }

    /// `|<psi|self>|^2` against a dense vector.
    pub fn fidelity(&self, psi: &StateVector) -> f64 {
        self.to_state_vector().dotc(psi).norm_sqr()
    }
}

/// CZ as a row-major 4x4 matrix on `(first, second)` qubit pairs.
pub fn cz_matrix() -> [f64; 16] {
    let mut m = [0.0; 16];
    m[0] = 1.0;
    m[5] = 1.0;
    m[10] = 1.0;
    m[15] = -1.0;
    m
}

/// Product of `CZ(control, t)` over `targets` (all 1-based and larger than
/// `control`): `|0><0| (x) 1 + |1><1| (x) prod Z_t`, an operator of bond
/// dimension 2 spanning `control..=max(targets)`.
pub fn cz_fan(n: usize, control: usize, targets: &[usize]) -> Result<Mpo> {
    let last = match targets.iter().max() {
        Some(&m) => m,
        None => return Ok(Mpo::identity(2, n)),
    };
    if control == 0 || last > n || targets.iter().any(|&t| t <= control) {
        return domain(format!("invalid CZ fan from {control} to {targets:?} on {n} sites"));
    }
    let mut tensors: Vec<MpoTensor> = (0..n).map(|_| MpoTensor::identity(2, 1)).collect();
    let mut head = MpoTensor::zeros(1, 2, 2);
    head.set(0, 0, 0, 0, 1.0);
    head.set(0, 1, 1, 1, 1.0);
    tensors[control - 1] = head;
    for site in control + 1..=last {
        let z = targets.contains(&site);
        let right = if site == last { 1 } else { 2 };
        let mut w = MpoTensor::zeros(2, 2, right);
        for p in 0..2 {
            w.set(0, p, p, 0, 1.0);
            let sign = if z && p == 1 { -1.0 } else { 1.0 };
            w.set(1, p, p, right - 1, sign);
        }
        tensors[site - 1] = w;
    }
    Ok(Mpo { phys: 2, tensors })
}

/// Applies every CZ gate of `g` to the `|+>` product MPS, grouped by the
/// smaller endpoint into [`cz_fan`] operators; each is followed by a
/// compression sweep under `policy`.
pub fn build_pure_mps(g: &GraphSpec, policy: &TruncationPolicy) -> Result<(PureMps, TruncationReport)> {
    let n = g.n_vertices();
    let plus = vec![0.5f64.sqrt(); 2];
    let mut mps = Mps::product(2, &vec![plus; n])?;
    let mut report = TruncationReport { max_bond: 1, ..Default::default() };
    for control in 1..=n {
        let targets: Vec<usize> = g.neighbors(control).into_iter().filter(|&j| j > control).collect();
        if targets.is_empty() {
            continue;
        }
        let r = mps.apply_mpo(&cz_fan(n, control, &targets)?, policy)?;
        report.merge(&r);
    }
    if report.flagged {
        return Err(Error::Truncation(format!(
            "graph state needs more than bond {} (discarded weight {:.3e})",
            policy.max_bond, report.discarded_weight
        )));
    }
    Ok((PureMps::from_mps(mps)?, report))
}
