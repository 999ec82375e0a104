//! Graph-state preparation as an MPS and stabilizer checks.
use graphlind::graph::{build_pure_mps, make_complete, make_ring, make_star, stabilizer, GraphSpec};
use graphlind::mps::TruncationPolicy;
use graphlind::pauli::word_to_dense;

fn main() -> graphlind::Result<()> {
    let policy = TruncationPolicy::default();
    let n = 8;
    for g in [make_complete(n)?, make_ring(n)?, make_star(n)?, GraphSpec::parse("8\n1 2\n2 3\n3 4\n4 5\n")?] {
        let (psi, report) = build_pure_mps(&g, &policy)?;
        let v = psi.to_state_vector();
        let mut worst = 0.0f64;
        for i in 1..=n {
            let k = word_to_dense(&stabilizer(&g, i)?)?;
            let kv = &k * &v;
            worst = worst.max((kv - &v).norm());
        }
        println!(
            "{} edges: bonds {:?}, discarded {:.1e}, max |K_i psi - psi| = {worst:.1e}",
            g.n_edges(),
            psi.mps().bond_dims(),
            report.discarded_weight
        );
    }
    Ok(())
}
