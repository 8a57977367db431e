//! A small scan written as CSV and JSON, then read back.
use trapdet::export::{table_from_csv, table_to_csv, table_to_json};
use trapdet::scan::{run_scan, ScanSpec, SweepVar};
use trapdet::solver::RootOptions;

fn main() -> trapdet::Result<()> {
    let mut s = ScanSpec::new(SweepVar::ScatteringA, 0.3, 0.5, 3);
    s.e_max = 2.0;
    s.free_branches = true;
    let table = run_scan(&s, &RootOptions::default())?;
    let csv = table_to_csv(&table);
    print!("{csv}");
    println!("{}", table_to_json(&table)?);
    assert_eq!(table_from_csv(&csv)?, table);
    Ok(())
}
