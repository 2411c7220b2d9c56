//! Oscillator levels, their flat-space limit and a sampled eigenfunction.

use sphere_twobody::oracle::ShootingConfig;
use sphere_twobody::radial::{radial_coefficients, PhysicalParams, PotentialKind};
use sphere_twobody::spectra::{oscillator_energy_value, radial_eigenfunction, spectrum};

fn main() -> sphere_twobody::Result<()> {
    let params = PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0)?;
    let s = spectrum(PotentialKind::Oscillator, 2, 1, 0, &params, 0..=4, &ShootingConfig::default())?;
    for l in &s.levels {
        println!("k={} E={} verified={}", l.level.k, l.level.energy, l.verified);
    }

    // large radius at fixed ω approaches ω(4k + n)/(2√m)
    let co = radial_coefficients(4, 1, 0)?;
    println!("\nS^4 ground level as R grows (flat value 2):");
    for r in [1.0, 10.0, 100.0, 1000.0] {
        let p = PhysicalParams::with_reduced_mass(1.0, r, 1.0)?;
        println!("  R={r:<6} E0={}", oscillator_energy_value(0, 4, co.a_f64(), co.b_f64(), &p));
    }

    let f = radial_eigenfunction(PotentialKind::Oscillator, 2, 2, &s.coeffs, &params)?;
    println!("\nf_2 on S^2 (residual {:.1e}):", f.residual(&f.default_points(100))?);
    for r in [0.1, 0.3, 0.5, 0.7, 0.9] {
        println!("  r={r} f={:.6}", f.value(r)?.re);
    }
    Ok(())
}
