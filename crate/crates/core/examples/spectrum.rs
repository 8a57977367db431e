//! Energy levels of a symmetric impurity pair, labelled by parity.
use trapdet::solver::{find_roots, RootOptions, SystemSpec};

fn main() -> trapdet::Result<()> {
    let (d, a) = (3.0, 0.4);
    let spec = SystemSpec::symmetric_pair(d, a)?;
    let s = find_roots(&spec, -5.0, 6.0, &RootOptions::default())?;
    println!("a = {a}, 2d = {}", 2.0 * d);
    for r in &s.roots {
        let note = if r.near_pole { " (on an oscillator level)" } else { "" };
        println!("  {:>4} #{}  E = {:.10}{note}", r.parity.as_str(), r.index, r.energy);
    }
    for u in &s.unaffected {
        println!("  unaffected level {} ({}) x{}", u.energy, u.parity.as_str(), u.multiplicity);
    }
    Ok(())
}
