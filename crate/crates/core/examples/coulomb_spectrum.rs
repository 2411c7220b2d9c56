//! Closed-form Coulomb levels on S^n checked against the shooting oracle.

use sphere_twobody::oracle::ShootingConfig;
use sphere_twobody::radial::{PhysicalParams, PotentialKind};
use sphere_twobody::spectra::spectrum;

fn main() -> sphere_twobody::Result<()> {
    let params = PhysicalParams::new(2.0, 2.0, 1.0, 1.0)?;
    let cfg = ShootingConfig::default();
    for (n, case_id, mk) in [(3usize, 1u8, 0i64), (4, 4, 2), (2, 5, 2)] {
        let s = spectrum(PotentialKind::Coulomb, n, case_id, mk, &params, 1..=4, &cfg)?;
        println!("S^{n}, case {case_id}, m_k={mk}: a={} b={} c={} on {}", s.coeffs.a, s.coeffs.b, s.coeffs.c, s.carrier.describe());
        for l in &s.levels {
            let o = l.oracle.expect("reducible channel");
            println!(
                "  k={} E={:<22} shooting={:<22} rel={:.1e} nodes={} mult={}",
                l.level.k,
                l.level.energy,
                o.shooting.unwrap_or(f64::NAN),
                o.relative_error,
                o.nodes,
                l.level.multiplicity
            );
        }
    }
    Ok(())
}
