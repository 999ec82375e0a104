//! Engine output checked against the closed form and the dense solver.
use graphlind::experiment::commands::{comparison_report, CommandOptions};
use graphlind::experiment::ConfigFile;

const CONFIG: &str = r#"
[[run]]
case = 3
n = [4, 12]
observables = ["YY", "Z", "YYZ", "XZ^(N-1)"]
t_final = 2.0
dense_check = true
"#;

fn main() -> graphlind::Result<()> {
    let mut cfg = ConfigFile::parse(CONFIG)?;
    // the dense solver only handles N <= 6
    let mut dense_free = cfg.run[0].clone();
    dense_free.n = vec![12];
    dense_free.dense_check = false;
    cfg.run[0].n = vec![4];
    cfg.run.push(dense_free);
    let report = comparison_report(&cfg, &CommandOptions::default())?;
    for e in &report.entries {
        println!("N={:<3} {:<28} vs {:<11} max dev {:.2e} at t = {:.2}", e.n, e.observable, e.reference, e.max_abs_deviation, e.time_of_max);
    }
    println!("within {:.0e}: {}", report.tolerance, report.pass);
    Ok(())
}
