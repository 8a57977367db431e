//! A normalized eigenstate: amplitudes, contact behaviour and a cut along z.
use trapdet::scan::{wavefunction_cut, CutGeometry, Rendering};
use trapdet::solver::{find_roots, norm_quadrature, solve_state, RootOptions, SystemSpec};

fn main() -> trapdet::Result<()> {
    let (d, a) = (1.5, 0.4);
    let spec = SystemSpec::symmetric_pair(d, a)?;
    let root = find_roots(&spec, -5.0, 3.0, &RootOptions::default())?.roots[0];
    let st = solve_state(&spec, root.energy, root.parity)?;
    println!("E = {:.10} ({}), u = {:?}, norm = {:.8}", st.energy, st.parity.as_str(), st.amplitudes, st.norm);
    let (_, inv_a) = st.contact_fit(&spec, 0, 1e-3)?;
    println!("scattering length from the contact fit: {:.6}", 1.0 / inv_a);
    println!("∫|Ψ|² by quadrature: {:.8}", norm_quadrature(&st, &spec, 1e-7)?);
    for p in wavefunction_cut(&st, &spec, CutGeometry::ZAxis { steps: 13 }, -3.0, 3.0, Rendering::PoleTamed)? {
        println!("  z = {:>5.2}  |z²−d²|Ψ = {:.6}", p.z, p.value);
    }
    Ok(())
}
