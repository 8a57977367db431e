//! Kummer M and Tricomi U on the parameters the Green's function uses.
use trapdet::specfn::{f_shorthand, kummer_m, tricomi_u, FKind};

fn main() -> trapdet::Result<()> {
    for (a, b, x) in [(-0.25, 1.5, 3.7), (0.75, 1.5, 1.0), (0.5, 1.5, 40.0), (-2.0, 2.5, 0.8)] {
        println!("a={a:>6} b={b} x={x:>5}  M = {:.15e}  U = {:.15e}", kummer_m(a, b, x)?, tricomi_u(a, b, x)?);
    }
    // U((4n−1)/4 − E/2, (2n+1)/2, x) at E = 0.9
    for n in 1..=3 {
        println!("n={n}  U = {:.15e}", f_shorthand(FKind::U, n, 0.9, 2.0)?);
    }
    Ok(())
}
