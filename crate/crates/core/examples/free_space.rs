//! Bound states of the pair without the trap.
use trapdet::freespace::{bound_states_free, pair_branches, threshold_half_separation};
use trapdet::solver::{Parity, SystemSpec};

fn main() -> trapdet::Result<()> {
    for a in [0.4, -0.4] {
        println!("a = {a}");
        let ds: Vec<f64> = (1..=8).map(|i| 0.05 * i as f64).collect();
        for b in pair_branches(a, &ds)? {
            for s in &b.samples {
                println!("  {:>4} 2d = {:.2}  E = {:.8}", b.parity.as_str(), 2.0 * s.d, s.energy);
            }
        }
    }
    let d = threshold_half_separation(-0.4, Parity::Even)?.expect("a < 0 has an even threshold");
    println!("even branch of a = −0.4 reaches E = 0 at 2d = {:.12}", 2.0 * d);
    let far = bound_states_free(&SystemSpec::symmetric_pair(6.0, 0.4)?)?;
    println!("2d = 12: {:?} (dimer limit −1/(2a²) = −3.125)", far.iter().map(|s| s.energy).collect::<Vec<_>>());
    Ok(())
}
