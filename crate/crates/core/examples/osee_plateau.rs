//! Plateau of the operator-space entanglement entropy and its ln N drift.
use graphlind::experiment::commands::{plateau_fits, CommandOptions};
use graphlind::experiment::ConfigFile;

const CONFIG: &str = r#"
[[run]]
case = 2
n = [8, 16, 32]
t_final = 5.0
sample_dt = 0.02
"#;

fn main() -> graphlind::Result<()> {
    let cfg = ConfigFile::parse(CONFIG)?;
    let (fits, series) = plateau_fits(&cfg, &CommandOptions::default())?;
    for (job, ts) in &series {
        let osee = ts.osee_column(0);
        let mid = ts.times.iter().position(|&t| t >= 1.0).unwrap_or(0);
        println!("N={:<3} OSEE(0) {:.4}  OSEE(1) {:.4}  OSEE(end) {:.4}", job.n, osee[0], osee[mid], osee[osee.len() - 1]);
    }
    for f in fits {
        println!("t* = {:?}", f.t_star);
        println!("fitted shift {:.4}, expected {:.4} ({:.1}% off)", f.delta_hat, f.delta_reference, 100.0 * f.relative_error);
    }
    Ok(())
}
