//! Pauli algebra: single-qubit axes, sparse Pauli words and their dense
//! realizations.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{domain, resource, Error, Result};
use crate::linalg::{DenseMatrix, I, ONE, ZERO};

/// Largest system for which [`word_to_dense`] builds a matrix.
pub const DENSE_WORD_MAX_SITES: usize = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// Position in the local basis ordering (I, X, Y, Z).
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> PauliAxis {
        Self::ALL[i]
    }

    pub fn letter(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<PauliAxis> {
        match c {
            'I' => Some(PauliAxis::I),
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> DenseMatrix {
        let e = match self {
            PauliAxis::I => [ONE, ZERO, ZERO, ONE],
            PauliAxis::X => [ZERO, ONE, ONE, ZERO],
            PauliAxis::Y => [ZERO, -I, I, ZERO],
            PauliAxis::Z => [ONE, ZERO, ZERO, -ONE],
        };
        DenseMatrix::from_row_slice(2, 2, &e)
    }

    /// `self * other = i^phase * axis`.
    pub fn mul(self, other: PauliAxis) -> (Phase, PauliAxis) {
        use PauliAxis::*;
        match (self, other) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase(1), Z),
            (Y, Z) => (Phase(1), X),
            (Z, X) => (Phase(1), Y),
            (Y, X) => (Phase(3), Z),
            (Z, Y) => (Phase(3), X),
            (X, Z) => (Phase(3), Y),
            _ => unreachable!(),
        }
    }
}

/// A fourth root of unity stored as the exponent `k` of `i^k`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);

    pub fn compose(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn value(self) -> C64 {
        match self.0 % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        }
    }
}

/// Product of single-site Pauli operators on `n_sites` qubits. Sites are
/// 1-based; sites absent from the assignment carry the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n_sites: usize,
    assignments: BTreeMap<usize, PauliAxis>,
}

impl PauliWord {
    pub fn identity(n_sites: usize) -> Self {
        PauliWord { n_sites, assignments: BTreeMap::new() }
    }

    pub fn new<I>(n_sites: usize, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, PauliAxis)>,
    {
        let mut w = PauliWord::identity(n_sites);
        for (site, axis) in assignments {
            w.set(site, axis)?;
        }
        Ok(w)
    }

    /// Assigns `axis` to `site`, replacing any previous assignment.
    pub fn set(&mut self, site: usize, axis: PauliAxis) -> Result<()> {
        if site == 0 || site > self.n_sites {
            return domain(format!("site {site} outside 1..={}", self.n_sites));
        }
        if axis == PauliAxis::I {
            self.assignments.remove(&site);
        } else {
            self.assignments.insert(site, axis);
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn axis(&self, site: usize) -> PauliAxis {
        self.assignments.get(&site).copied().unwrap_or(PauliAxis::I)
    }

    /// Non-identity factors in increasing site order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, PauliAxis)> + '_ {
        self.assignments.iter().map(|(&s, &a)| (s, a))
    }

    pub fn weight(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_identity(&self) -> bool {
        self.assignments.is_empty()
    }

    /// `(X count, Y count, Z count)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for a in self.assignments.values() {
            match a {
                PauliAxis::X => c.0 += 1,
                PauliAxis::Y => c.1 += 1,
                PauliAxis::Z => c.2 += 1,
                PauliAxis::I => {}
            }
        }
        c
    }

    /// Relabels sites through `perm`, where `perm[k-1]` is the new label of site `k`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n_sites {
            return domain("permutation length does not match the word size");
        }
        PauliWord::new(self.n_sites, self.iter().map(|(s, a)| (perm[s - 1], a)))
    }

    /// Parses the textual form `"X1 Z2 Z3"`; `"I"` (or an empty string) is the identity.
    pub fn parse(text: &str, n_sites: usize) -> Result<Self> {
        let mut w = PauliWord::identity(n_sites);
        for tok in text.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let axis = chars
                .next()
                .and_then(PauliAxis::from_letter)
                .ok_or_else(|| Error::Parse(format!("bad Pauli factor {tok:?}")))?;
            let site: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad site index in {tok:?}")))?;
            if w.axis(site) != PauliAxis::I {
                return Err(Error::Parse(format!("site {site} assigned twice")));
            }
            w.set(site, axis)?;
        }
        Ok(w)
    }

    /// Bit masks `(x, z)` and global phase such that the word maps basis
    /// state `|b>` to `phase * (-1)^{|b & z|} |b ^ x>`.
    pub fn masks(&self) -> (usize, usize, C64) {
        let n = self.n_sites;
        let mut x_mask = 0usize;
        let mut z_mask = 0usize;
        let mut n_y = 0u8;
        for (s, a) in self.iter() {
            let bit = 1usize << (n - s);
            match a {
                PauliAxis::X => x_mask |= bit,
                PauliAxis::Z => z_mask |= bit,
                PauliAxis::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    n_y += 1;
                }
                PauliAxis::I => {}
            }
        }
        // Y = i X Z, so the word is i^{#Y} X^x Z^z.
        (x_mask, z_mask, Phase(n_y % 4).value())
    }

    /// Applies the word to a state vector over `n_sites` qubits.
    pub fn apply_to_vector(&self, psi: &DVector<C64>) -> Result<DVector<C64>> {
        if psi.len() != 1usize << self.n_sites {
            return domain("state vector length does not match the word size");
        }
        let (x_mask, z_mask, global) = self.masks();
        let mut out = DVector::from_element(psi.len(), ZERO);
        for (b, amp) in psi.iter().enumerate() {
            let sign = if (b & z_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ x_mask] += amp * global * sign;
        }
        Ok(out)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for (s, a) in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", a.letter(), s)?;
            first = false;
        }
        Ok(())
    }
}

/// Canonical word with X on sites `1..=n`, Y on the next `m`, Z on the next `l`.
pub fn symmetric_word(n: usize, m: usize, l: usize, n_sites: usize) -> Result<PauliWord> {
    if n + m + l > n_sites {
        return domain(format!("counts {n}+{m}+{l} exceed {n_sites} sites"));
    }
    let axes = std::iter::repeat(PauliAxis::X)
        .take(n)
        .chain(std::iter::repeat(PauliAxis::Y).take(m))
        .chain(std::iter::repeat(PauliAxis::Z).take(l));
    PauliWord::new(n_sites, axes.enumerate().map(|(k, a)| (k + 1, a)))
}

pub fn word_to_dense(w: &PauliWord) -> Result<DenseMatrix> {
    if w.n_sites() > DENSE_WORD_MAX_SITES {
        return resource(format!(
            "dense word on {} sites exceeds the {DENSE_WORD_MAX_SITES}-site guard",
            w.n_sites()
        ));
    }
    let mut m = DenseMatrix::identity(1, 1);
    for s in 1..=w.n_sites() {
        m = m.kronecker(&w.axis(s).matrix());
    }
    Ok(m)
}

/// Sitewise product `a * b = phase * word`.
pub fn multiply_words(a: &PauliWord, b: &PauliWord) -> Result<(Phase, PauliWord)> {
    if a.n_sites() != b.n_sites() {
        return domain(format!("word sizes differ: {} vs {}", a.n_sites(), b.n_sites()));
    }
    let mut phase = Phase::ONE;
    let mut out = PauliWord::identity(a.n_sites());
    for s in 1..=a.n_sites() {
        let (p, axis) = a.axis(s).mul(b.axis(s));
        phase = phase.compose(p);
        out.set(s, axis)?;
    }
    Ok((phase, out))
}
