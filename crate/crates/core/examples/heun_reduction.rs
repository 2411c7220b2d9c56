//! Characteristic exponents, the Heun form of the radial equation and its
//! reduction to the Gauss equation.

use sphere_twobody::fuchsian::{coulomb_exponents, maier_classify, oscillator_exponents, pullback_residual, reduce_case1, to_heun};
use sphere_twobody::radial::{radial_coefficients, PhysicalParams, PotentialKind};
use sphere_twobody::spectra::{coulomb_energy, oscillator_energy};

fn main() -> sphere_twobody::Result<()> {
    let params = PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0)?;
    let co = radial_coefficients(3, 1, 1)?;
    for kind in [PotentialKind::Coulomb, PotentialKind::Oscillator] {
        let (eq, e) = match kind {
            PotentialKind::Coulomb => {
                let e = coulomb_energy(2, 3, &co, &params)?.energy;
                (coulomb_exponents(3, &co, &params, e), e)
            }
            PotentialKind::Oscillator => {
                let e = oscillator_energy(1, 3, &co, &params)?.energy;
                (oscillator_exponents(3, &co, &params, e), e)
            }
        };
        println!("{kind} at E={e}");
        println!("  {}", eq.p_symbol());
        println!("  exponent sum {} (Fuchs: {})", eq.exponent_sum(), eq.fuchs_expected());
        let h = to_heun(kind, 3, &co, &params, e);
        println!("  Heun: {}", h.p_symbol());
        let m = maier_classify(&h)?;
        println!("  Maier case {:?} via {}", m.case.map(|c| c.number()), m.map);
        for c in &m.constraints {
            println!("    {} residual {:.1e}", c.name, c.residual);
        }
        if let Ok(g) = reduce_case1(&m.normalized) {
            println!("  2F1({}, {}; {}) with pullback residual {:.1e}", g.alpha_t, g.beta_t, g.gamma_t, pullback_residual(&m.normalized, &g, &m.polynomial));
        }
    }
    Ok(())
}
