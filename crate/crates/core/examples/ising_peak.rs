//! A ZZ coupling across the middle cut produces a transient entropy peak.
use graphlind::experiment::commands::{ising_summaries, CommandOptions};
use graphlind::experiment::ConfigFile;

const CONFIG: &str = r#"
[[run]]
name = "zz"
case = 1
n = [16]
t_final = 2.0
sample_dt = 0.02

[run.hamiltonian]
kind = "ising"
"#;

fn main() -> graphlind::Result<()> {
    let cfg = ConfigFile::parse(CONFIG)?;
    for (_, ts, s) in ising_summaries(&cfg, &CommandOptions::default())? {
        for (t, v) in ts.times.iter().zip(ts.osee_column(0)).step_by(10) {
            println!("t {t:.2}  OSEE {v:.4}");
        }
        println!("pair {:?} across cut {}: peak {:?} at t = {:?}, max bond {}", s.pair, s.cut, s.peak_osee, s.peak_time, s.max_bond);
    }
    Ok(())
}
