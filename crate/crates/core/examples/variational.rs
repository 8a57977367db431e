//! Two- and three-state variational energies next to the exact levels.
use trapdet::solver::{find_roots, Parity, RootOptions, SystemSpec};
use trapdet::variational::{solve_variational, VariationalBasis};

fn main() -> trapdet::Result<()> {
    let a = 0.4;
    println!("  2d   two-state (even, odd)   three-state even    exact even");
    for i in 0..=8 {
        let sep = 5.6 + 0.1 * i as f64;
        let spec = SystemSpec::symmetric_pair(sep / 2.0, a)?;
        let two = solve_variational(&VariationalBasis::two_state(&spec)?, &spec)?;
        let three = solve_variational(&VariationalBasis::three_state(&spec)?, &spec)?;
        let even3: Vec<f64> =
            three.energies.iter().zip(&three.parities).filter(|(_, &p)| p == Parity::Even).map(|(e, _)| *e).collect();
        let exact = find_roots(&spec, -5.0, 3.0, &RootOptions::default())?.of_parity(Parity::Even);
        println!(
            "{sep:.2}   {:.4} {:.4}          {:.4} {:.4}     {:.4} {:.4}",
            two.energies[0], two.energies[1], even3[0], even3[1], exact[0], exact[1]
        );
    }
    Ok(())
}
