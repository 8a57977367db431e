//! The trap Green's function against its eigenbasis sum, and its
//! behaviour at coincidence.
use trapdet::green::{green_expansion, green_ho, green_reg_diag, green_spectral_oracle, ORACLE_DEFAULT_NMAX};
use trapdet::oscillator::Vec3;

fn main() -> trapdet::Result<()> {
    let r = Vec3::new(0.1, 0.2, 0.7);
    let rp = Vec3::new(-0.3, 0.5, -0.4);
    for e in [-2.3, 0.9, 3.1] {
        let g = green_ho(&r, &rp, e)?.value;
        let o = green_spectral_oracle(&r, &rp, e, ORACLE_DEFAULT_NMAX)?.value;
        println!("E = {e:>4}: closed form {g:.12}, eigenbasis sum {o:.12}");
    }
    let d = Vec3::new(0.0, 0.0, 1.3);
    let exp = green_expansion(d.norm(), 0.9, 1.0)?;
    println!("at d = 1.3: G ≈ {:.6}/Δr + {:.12}", exp.g1, exp.g0);
    println!("regular diagonal G_r = {:.12}", green_reg_diag(&d, 0.9)?);
    Ok(())
}
