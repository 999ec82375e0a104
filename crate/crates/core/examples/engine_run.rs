//! Time evolution with the MPS engine against the closed-form curves.
use graphlind::dense::HamiltonianSpec;
use graphlind::engine::{run, Schedule};
use graphlind::graph::make_complete;
use graphlind::mps::TruncationPolicy;
use graphlind::oracle::{builtin_case, word_expectation};
use graphlind::pauli::symmetric_word;
use graphlind::vectorized::VectorizedState;

fn main() -> graphlind::Result<()> {
    let n = 16;
    let policy = TruncationPolicy::default();
    let r = builtin_case(4)?;
    let words = vec![symmetric_word(0, 2, 0, n)?, symmetric_word(0, 0, 1, n)?, symmetric_word(0, 2, 1, n)?];
    let sched = Schedule::sampled(0.004, 3.0, 0.5, words.clone(), vec![n / 2])?;
    let state = VectorizedState::from_graph(&make_complete(n)?, &policy)?;
    let ts = run(&state, &r, &HamiltonianSpec::None, &sched, &policy)?;
    println!("t     {:>12} {:>12} {:>12}   OSEE     max dev", ts.labels[0], ts.labels[1], ts.labels[2]);
    for k in 0..ts.len() {
        let t = ts.times[k];
        let mut dev = 0.0f64;
        for (w, v) in words.iter().zip(&ts.values[k]) {
            dev = dev.max((v - word_expectation(w, t, &r)?).abs());
        }
        let v = &ts.values[k];
        println!("{t:.1}   {:+.9} {:+.9} {:+.9}   {:.4}   {dev:.1e}", v[0], v[1], v[2], ts.osee[k][0]);
    }
    println!("max bond {}", ts.overall_max_bond());
    Ok(())
}
