//! Experiment configuration: a TOML file with one `[[run]]` table per case.
//!
//! ```toml
//! out_dir = "results"
//!
//! [[run]]
//! name = "case1"
//! case = 1
//! graph = "complete"
//! n = [8, 16, 32]
//! observables = ["YY", "Z", "YYZ", "XZ^(N-1)"]
//! t_final = 5.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dense::HamiltonianSpec;
use crate::engine::{default_ising_pair, Schedule, DEFAULT_TAU};
use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::mps::TruncationPolicy;
use crate::oracle::{builtin_case, Rates};
use crate::pauli::{symmetric_word, PauliAxis, PauliWord};

fn default_graph() -> String {
    "complete".into()
}
fn default_tau() -> f64 {
    DEFAULT_TAU
}
fn default_sample_dt() -> f64 {
    0.1
}
fn default_cuts() -> Vec<CutSpec> {
    vec![CutSpec::Named("mid".into())]
}
fn default_discarded() -> f64 {
    TruncationPolicy::default().max_discarded_weight
}
fn default_max_bond() -> usize {
    TruncationPolicy::default().max_bond
}
fn default_bond_cap() -> usize {
    16
}
fn default_delta_tolerance() -> f64 {
    0.15
}
fn default_coupling() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HamiltonianConfig {
    #[default]
    None,
    Ising {
        a: Option<usize>,
        b: Option<usize>,
        #[serde(default = "default_coupling")]
        coupling: f64,
    },
}

impl HamiltonianConfig {
    pub fn resolve(&self, n: usize) -> Result<HamiltonianSpec> {
        let h = match *self {
            HamiltonianConfig::None => HamiltonianSpec::None,
            HamiltonianConfig::Ising { a, b, coupling } => match (a, b) {
                (None, None) => default_ising_pair(n, coupling),
                (Some(a), Some(b)) => HamiltonianSpec::IsingPair { a, b, coupling },
                _ => return Err(Error::Config("give both ising sites a and b, or neither".into())),
            },
        };
        h.validate(n).map_err(|e| Error::Config(e.to_string()))?;
        Ok(h)
    }
}

/// An OSEE cut: a site index or `"mid"` (`N/2`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutSpec {
    Site(usize),
    Named(String),
}

impl CutSpec {
    pub fn resolve(&self, n: usize) -> Result<usize> {
        let cut = match self {
            CutSpec::Site(c) => *c,
            CutSpec::Named(s) if s == "mid" => n / 2,
            CutSpec::Named(s) => return Err(Error::Config(format!("unknown cut {s:?}"))),
        };
        if cut == 0 || cut >= n {
            return Err(Error::Config(format!("cut {cut} outside 1..={} for N = {n}", n - 1)));
        }
        Ok(cut)
    }
}

/// One `[[run]]` section.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub name: Option<String>,
    /// Built-in rate set 1..=5.
    pub case: Option<usize>,
    pub g0: Option<f64>,
    pub g1: Option<f64>,
    pub g2: Option<f64>,
    #[serde(default = "default_graph")]
    pub graph: String,
    pub n: Vec<usize>,
    #[serde(default)]
    pub hamiltonian: HamiltonianConfig,
    #[serde(default = "default_tau")]
    pub tau: f64,
    pub t_final: f64,
    #[serde(default = "default_sample_dt")]
    pub sample_dt: f64,
    #[serde(default)]
    pub observables: Vec<String>,
    #[serde(default = "default_cuts")]
    pub cuts: Vec<CutSpec>,
    #[serde(default = "default_discarded")]
    pub max_discarded_weight: f64,
    #[serde(default = "default_max_bond")]
    pub max_bond: usize,
    /// compare: also check against the dense oracle (N <= 6).
    #[serde(default)]
    pub dense_check: bool,
    /// ising: largest acceptable bond dimension.
    #[serde(default = "default_bond_cap")]
    pub bond_cap: usize,
    /// ising: optional window the OSEE peak must fall in.
    pub peak_window: Option<[f64; 2]>,
    /// plateau: relative tolerance on the fitted shift.
    #[serde(default = "default_delta_tolerance")]
    pub delta_tolerance: f64,
    /// compare: offset added to every numeric value, for exercising the
    /// failure path.
    #[serde(default)]
    pub inject_error: f64,
}

impl CaseConfig {
    pub fn label(&self, index: usize) -> String {
        match (&self.name, self.case) {
            (Some(n), _) => n.clone(),
            (None, Some(k)) => format!("case{k}"),
            (None, None) => format!("run{}", index + 1),
        }
    }

    pub fn rates(&self) -> Result<Rates> {
        let explicit = (self.g0, self.g1, self.g2);
        let r = match (self.case, explicit) {
            (Some(k), (None, None, None)) => builtin_case(k).map_err(|e| Error::Config(e.to_string()))?,
            (Some(k), (g0, g1, g2)) => {
                let b = builtin_case(k).map_err(|e| Error::Config(e.to_string()))?;
                let same = |given: Option<f64>, v: f64| given.map_or(true, |x| x == v);
                if !(same(g0, b.g0) && same(g1, b.g1) && same(g2, b.g2)) {
                    return Err(Error::Config(format!("rates given for case {k} differ from the built-in values")));
                }
                b
            }
            (None, (g0, g1, g2)) => Rates::new(g0.unwrap_or(0.0), g1.unwrap_or(0.0), g2.unwrap_or(0.0))
                .map_err(|e| Error::Config(e.to_string()))?,
        };
        Ok(r)
    }

    pub fn policy(&self) -> Result<TruncationPolicy> {
        if !(self.max_discarded_weight >= 0.0) || self.max_bond == 0 {
            return Err(Error::Config("truncation policy needs max_discarded_weight >= 0 and max_bond >= 1".into()));
        }
        Ok(TruncationPolicy { max_discarded_weight: self.max_discarded_weight, max_bond: self.max_bond })
    }

    pub fn is_complete_graph(&self) -> bool {
        self.graph == "complete"
    }

    pub fn validate(&self, index: usize) -> Result<()> {
        let label = self.label(index);
        let err = |m: String| Err(Error::Config(format!("run {label}: {m}")));
        if self.n.is_empty() {
            return err("empty N list".into());
        }
        if let Some(&bad) = self.n.iter().find(|&&n| n < 2) {
            return err(format!("N = {bad} is below 2"));
        }
        if !(self.tau > 0.0) || !(self.sample_dt > 0.0) {
            return err("tau and sample_dt must be positive".into());
        }
        if !(self.t_final >= 0.0) {
            return err("t_final must be nonnegative".into());
        }
        self.rates()?;
        self.policy()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub out_dir: Option<String>,
    #[serde(default)]
    pub run: Vec<CaseConfig>,
    /// Directory of the file, for resolving graph paths.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.run.is_empty() {
            return Err(Error::Config("config has no [[run]] sections".into()));
        }
        for (i, r) in cfg.run.iter().enumerate() {
            r.validate(i)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = ConfigFile::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn graph(&self, run: &CaseConfig, n: usize) -> Result<GraphSpec> {
        let name = match run.graph.as_str() {
            "complete" | "ring" | "star" | "edgeless" | "empty" => run.graph.clone(),
            path => {
                let p = Path::new(path);
                match (&self.base_dir, p.is_relative()) {
                    (Some(base), true) => base.join(p).to_string_lossy().into_owned(),
                    _ => path.to_string(),
                }
            }
        };
        GraphSpec::from_name_or_path(&name, n).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("graph {name}: {io}")),
            Error::Config(m) => Error::Config(m),
            other => Error::Config(other.to_string()),
        })
    }
}

/// Observable syntax. Explicit words list sites (`"X1 Z2 Z3"`); signature
/// words list letters with optional exponents and are placed on the first
/// sites as X's, then Y's, then Z's (`"YY"`, `"Y^4Z^2"`, `"XZ^(N-1)"`).
pub fn parse_observable(spec: &str, n: usize) -> Result<PauliWord> {
    let text = spec.trim();
    let explicit = text
        .as_bytes()
        .windows(2)
        .any(|w| matches!(w[0], b'I' | b'X' | b'Y' | b'Z') && w[1].is_ascii_digit());
    if explicit || text == "I" {
        return PauliWord::parse(text, n);
    }
    let mut counts = [0usize; 4];
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let bad = |m: &str| Error::Parse(format!("observable {spec:?}: {m}"));
    while i < chars.len() {
        let axis = PauliAxis::from_letter(chars[i]).ok_or_else(|| bad("expected I, X, Y or Z"))?;
        i += 1;
        let mut power = 1usize;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let (expr, next) = if i < chars.len() && chars[i] == '(' {
                let close = chars[i..].iter().position(|&c| c == ')').ok_or_else(|| bad("unclosed parenthesis"))?;
                (chars[i + 1..i + close].iter().collect::<String>(), i + close + 1)
            } else {
                let start = i;
                let digits = |mut k: usize| {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    k
                };
                let mut k = start;
                if k < chars.len() && chars[k] == 'N' {
                    k += 1;
                    if k < chars.len() && (chars[k] == '-' || chars[k] == '+') {
                        k = digits(k + 1);
                    }
                } else {
                    k = digits(k);
                }
                (chars[start..k].iter().collect::<String>(), k)
            };
            power = eval_exponent(&expr, n).ok_or_else(|| bad("bad exponent"))?;
            i = next;
        }
        counts[axis.index()] += power;
    }
    let [_, x, y, z] = counts;
    symmetric_word(x, y, z, n).map_err(|_| bad(&format!("needs more than {n} sites")))
}

/// `k`, `N`, `N-k` or `N+k`.
fn eval_exponent(expr: &str, n: usize) -> Option<usize> {
    let e = expr.trim();
    if let Ok(k) = e.parse::<usize>() {
        return Some(k);
    }
    let rest = e.strip_prefix('N')?.trim();
    if rest.is_empty() {
        return Some(n);
    }
    let k: usize = rest[1..].trim().parse().ok()?;
    match rest.as_bytes()[0] {
        b'-' => n.checked_sub(k),
        b'+' => Some(n + k),
        _ => None,
    }
}

/// A fully resolved `(run, N)` pair.
#[derive(Clone, Debug)]
pub struct Job {
    pub run_index: usize,
    pub name: String,
    pub n: usize,
    pub rates: Rates,
    pub graph: GraphSpec,
    pub hamiltonian: HamiltonianSpec,
    pub schedule: Schedule,
    pub policy: TruncationPolicy,
}

impl Job {
    pub fn stem(&self) -> String {
        let safe: String = self
            .name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        format!("{safe}_N{}", self.n)
    }
}

pub fn expand_jobs(cfg: &ConfigFile) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for (i, run) in cfg.run.iter().enumerate() {
        let rates = run.rates()?;
        let policy = run.policy()?;
        for &n in &run.n {
            let observables = run.observables.iter().map(|o| parse_observable(o, n)).collect::<Result<Vec<_>>>()?;
            let cuts = run.cuts.iter().map(|c| c.resolve(n)).collect::<Result<Vec<_>>>()?;
            let schedule = Schedule::sampled(run.tau, run.t_final, run.sample_dt, observables, cuts)
                .map_err(|e| Error::Config(format!("run {}: {e}", run.label(i))))?;
            jobs.push(Job {
                run_index: i,
                name: run.label(i),
                n,
                rates,
                graph: cfg.graph(run, n)?,
                hamiltonian: run.hamiltonian.resolve(n)?,
                schedule,
                policy,
            });
        }
    }
    Ok(jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observable_syntax() {
        let w = |s: &str, n: usize| parse_observable(s, n).unwrap().to_string();
        assert_eq!(w("YY", 4), "Y1 Y2");
        assert_eq!(w("Z", 4), "Z1");
        assert_eq!(w("YYZ", 5), "Y1 Y2 Z3");
        assert_eq!(w("XZ^(N-1)", 4), "X1 Z2 Z3 Z4");
        assert_eq!(w("Y^4Z^2", 8), "Y1 Y2 Y3 Y4 Z5 Z6");
        assert_eq!(w("ZY", 3), "Y1 Z2");
        assert_eq!(w("X3 Z1", 3), "Z1 X3");
        assert_eq!(w("I", 3), "I");
        assert!(parse_observable("Q", 3).is_err());
        assert!(parse_observable("Z^(N+1)", 3).is_err());
        assert!(parse_observable("Y^", 3).is_err());
    }

    #[test]
    fn parse_minimal_config() {
        let cfg = ConfigFile::parse(
            r#"
            [[run]]
            case = 1
            n = [4, 6]
            observables = ["YY", "XZ^(N-1)"]
            t_final = 1.0
            "#,
        )
        .unwrap();
        let jobs = expand_jobs(&cfg).unwrap();
        assert_eq!(jobs.len(), 2);
        assert_eq!(jobs[1].stem(), "case1_N6");
        assert_eq!(jobs[1].schedule.cuts, vec![3]);
        assert_eq!(jobs[0].schedule.sample_every, 25);
        assert_eq!(jobs[0].rates, builtin_case(1).unwrap());
    }

    #[test]
    fn config_errors() {
        let bad = [
            "",
            "[[run]]\nn = [1]\nt_final = 1.0\n",
            "[[run]]\nn = [4]\nt_final = 1.0\ncase = 9\n",
            "[[run]]\nn = [4]\nt_final = 1.0\ncase = 1\ng0 = 0.5\n",
            "[[run]]\nn = [4]\nt_final = 1.0\ng0 = -1.0\n",
            "[[run]]\nn = [4]\nt_final = 1.0\nbogus = 3\n",
            "[[run]]\nn = [4]\nt_final = -1.0\n",
        ];
        for text in bad {
            assert!(ConfigFile::parse(text).is_err(), "{text}");
        }
        let cfg = ConfigFile::parse("[[run]]\nn = [4]\nt_final = 1.0\ncuts = [4]\n").unwrap();
        assert!(expand_jobs(&cfg).is_err());
        let cfg = ConfigFile::parse("[[run]]\nn = [4]\nt_final = 1.0\ngraph = \"/no/such/file\"\n").unwrap();
        assert!(matches!(expand_jobs(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn hamiltonian_sections() {
        let cfg = ConfigFile::parse(
            "[[run]]\ncase = 1\nn = [8]\nt_final = 1.0\n[run.hamiltonian]\nkind = \"ising\"\ncoupling = 0.5\n",
        )
        .unwrap();
        let jobs = expand_jobs(&cfg).unwrap();
        assert_eq!(jobs[0].hamiltonian, HamiltonianSpec::IsingPair { a: 4, b: 5, coupling: 0.5 });
        let cfg = ConfigFile::parse(
            "[[run]]\ncase = 1\nn = [4]\nt_final = 1.0\n[run.hamiltonian]\nkind = \"ising\"\na = 2\nb = 2\n",
        )
        .unwrap();
        assert!(expand_jobs(&cfg).is_err());
    }
}
