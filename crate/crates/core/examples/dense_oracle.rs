//! Exact Lindblad evolution of a small graph state on the full density matrix.
use graphlind::dense::{build_liouvillian, dense_expectation, dense_osee, evolve_dense, HamiltonianSpec};
use graphlind::graph::{build_state_vector, make_complete};
use graphlind::linalg::projector;
use graphlind::oracle::{builtin_case, word_expectation};
use graphlind::pauli::PauliWord;

fn main() -> graphlind::Result<()> {
    let n = 4;
    let rho0 = projector(&build_state_vector(&make_complete(n)?)?);
    let r = builtin_case(3)?;
    let free = build_liouvillian(n, &r, &HamiltonianSpec::None)?;
    let ising = build_liouvillian(n, &r, &HamiltonianSpec::IsingPair { a: 2, b: 3, coupling: 1.0 })?;
    let yyz = PauliWord::parse("Y1 Y2 Z3", n)?;
    println!("t     <YYZ> dense    <YYZ> closed form  OSEE(2)   OSEE(2) with ZZ");
    for k in 0..=5 {
        let t = 0.4 * k as f64;
        let rho = evolve_dense(&rho0, &free, t)?;
        let rho_h = evolve_dense(&rho0, &ising, t)?;
        println!(
            "{t:.1}   {:+.10}  {:+.10}     {:.6}  {:.6}",
            dense_expectation(&rho, &yyz)?,
            word_expectation(&yyz, t, &r)?,
            dense_osee(&rho, 2)?,
            dense_osee(&rho_h, 2)?
        );
    }
    Ok(())
}
