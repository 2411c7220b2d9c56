//! Ladder representation of a two-row module and its structure relations in
//! exact rational arithmetic.

use sphere_twobody::ladder::{build_ladder_rep, ladder_q, ladder_q_from_casimir, verify_structure_relations};
use sphere_twobody::liealg::{AlgebraLabel, HighestWeight};

fn main() -> sphere_twobody::Result<()> {
    for (alg, w) in [(AlgebraLabel::b(3), "0,1,4"), (AlgebraLabel::d(3), "0,0,3"), (AlgebraLabel::b(1), "2")] {
        let lambda = HighestWeight::parse(w)?;
        let rep = build_ladder_rep(alg, &lambda)?;
        println!("{alg} {lambda}: invariant subspace of dimension {}, Casimir {}", rep.dim(), rep.casimir);
        println!("F =\n{}", rep.f);
        println!("D+ =\n{}", rep.dplus);
        if !rep.is_rank_one() {
            println!("q = {} (from the Casimir: {})", ladder_q(&rep), ladder_q_from_casimir(&rep));
        }
        let report = verify_structure_relations(&rep)?;
        for r in &report.relations {
            println!("  {:<28} {}", r.name, if r.holds() { "holds" } else { "FAILS" });
        }
        println!();
    }
    Ok(())
}
