//! Ring versus complete graph under amplitude damping.
use graphlind::dense::HamiltonianSpec;
use graphlind::engine::{run, Schedule};
use graphlind::experiment::fits::crossing_time;
use graphlind::graph::{make_complete, make_ring};
use graphlind::mps::TruncationPolicy;
use graphlind::oracle::rates_from_g;
use graphlind::vectorized::VectorizedState;

fn main() -> graphlind::Result<()> {
    let policy = TruncationPolicy::default();
    let r = rates_from_g(1.0, 0.0, 0.0)?;
    for n in [8, 16, 24] {
        let sched = Schedule::sampled(0.01, 3.0, 0.05, vec![], vec![n / 2])?;
        let ring = run(&VectorizedState::from_graph(&make_ring(n)?, &policy)?, &r, &HamiltonianSpec::None, &sched, &policy)?;
        let full = run(&VectorizedState::from_graph(&make_complete(n)?, &policy)?, &r, &HamiltonianSpec::None, &sched, &policy)?;
        let (ro, fo) = (ring.osee_column(0), full.osee_column(0));
        println!(
            "N={n:<3} ring OSEE(0) {:.4}, complete OSEE(0) {:.4}, ring below 0.1 at t = {:?}",
            ro[0],
            fo[0],
            crossing_time(&ring.times, &ro, 0.1)
        );
    }
    Ok(())
}
