//! The independent numeric routes: shooting by node count for a channel
//! without closed forms, and brute-force joint eigenvectors.

use sphere_twobody::exact::to_c64;
use sphere_twobody::ladder::{build_ladder_rep, operator_matrices};
use sphere_twobody::liealg::{AlgebraLabel, HighestWeight};
use sphere_twobody::oracle::{common_eigenvectors, eigenvalue_by_nodes, RadialProblem, ShootingConfig};
use sphere_twobody::radial::{radial_coefficients, PhysicalParams, PotentialKind};

fn main() -> sphere_twobody::Result<()> {
    let params = PhysicalParams::new(2.0, 2.0, 1.0, 1.0)?;
    let co = radial_coefficients(4, 2, 1)?;
    println!("S^4 case 2 (a={}, c={}): no closed form", co.a, co.c);
    let cfg = ShootingConfig::default();
    for kind in [PotentialKind::Coulomb, PotentialKind::Oscillator] {
        let prob = RadialProblem::new(kind, 4, &co, &params)?;
        for nodes in 0..3 {
            let r = eigenvalue_by_nodes(&prob, nodes, &cfg)?;
            println!("  {kind}: {nodes} nodes at E = {} ({} Wronskian evaluations)", r.energy, r.evaluations);
        }
    }

    let rep = build_ladder_rep(AlgebraLabel::b(2), &HighestWeight::new(vec![2, 4]))?;
    let ops = operator_matrices(&rep);
    let mats = vec![to_c64(&ops.d0_squared()), to_c64(&ops.d1), to_c64(&ops.d2)];
    println!("\njoint eigenspaces of D0², D1, D2 on B_2 (2,4):");
    for s in common_eigenvectors(&mats, 1e-10)? {
        let v: Vec<String> = s.values.iter().map(|z| format!("{:.6}", z.re)).collect();
        println!("  dim {} with eigenvalues ({})", s.dim(), v.join(", "));
    }
    Ok(())
}
