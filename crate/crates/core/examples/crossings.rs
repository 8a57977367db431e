//! Avoided crossings along a separation sweep, for a symmetric pair and for
//! one impurity nudged along z.
use trapdet::scan::{detect_crossings, run_scan, CrossingOptions, ScanSpec, SweepVar};
use trapdet::solver::RootOptions;

fn main() -> trapdet::Result<()> {
    let opts = RootOptions::default();
    for dz in [0.0, 0.025] {
        let mut s = ScanSpec::new(SweepVar::Separation2d, 5.5, 6.7, 121);
        s.dz = dz;
        s.e_max = 3.0;
        let table = run_scan(&s, &opts)?;
        println!("Δz = {dz}");
        for c in detect_crossings(&table, &s, &opts, &CrossingOptions::default())? {
            println!("  2d = {:.5}  gap {:.5}  levels {}–{} ({})", c.value, c.gap, c.lower, c.upper, c.parity.as_str());
        }
    }
    Ok(())
}
