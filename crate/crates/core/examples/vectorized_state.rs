//! The vectorized density matrix: measurements, reduced matrices, checkpoints.
use graphlind::graph::make_complete;
use graphlind::mps::TruncationPolicy;
use graphlind::pauli::PauliWord;
use graphlind::vectorized::VectorizedState;

fn main() -> graphlind::Result<()> {
    let n = 12;
    let mut state = VectorizedState::from_graph(&make_complete(n)?, &TruncationPolicy::default())?;
    println!("bonds {:?}", state.bond_dims());
    println!("trace {:.3}, purity {:.3}", state.trace(), state.purity());
    for w in ["X1 Z2 Z3 Z4 Z5 Z6 Z7 Z8 Z9 Z10 Z11 Z12", "Y1 Y2", "Z5"] {
        println!("<{w}> = {:+.3}", state.measure_word(&PauliWord::parse(w, n)?)?);
    }
    let spectrum = state.schmidt(n / 2)?;
    println!("Schmidt values at the middle cut {:?}, OSEE {:.6}", spectrum.values, spectrum.entropy());
    println!("rho_2 ={:.3}", state.extract_reduced(&[1, 2])?);

    let path = std::env::temp_dir().join("graphlind_example.glvs");
    state.save(&path)?;
    let back = VectorizedState::load(&path)?;
    println!("checkpoint round trip: bonds {:?}, trace {:.3}", back.bond_dims(), back.trace());
    std::fs::remove_file(&path).ok();
    Ok(())
}
