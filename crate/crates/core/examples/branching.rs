//! Weyl dimensions, Casimir eigenvalues and the B/D branching chain.

use sphere_twobody::liealg::{branch_b_to_d, branch_d_to_b, casimir_eigenvalue, invariant_subspace_dim, weyl_dim, AlgebraLabel, HighestWeight};

fn main() -> sphere_twobody::Result<()> {
    let b3 = AlgebraLabel::b(3);
    for w in ["0,0,1", "0,1,3", "1,1,3", "0,0,5"] {
        let l = HighestWeight::parse(w)?;
        println!("{b3} {l}: dim {}, Casimir {}, so(6)-invariants {}", weyl_dim(b3, &l)?, casimir_eigenvalue(b3, &l)?, invariant_subspace_dim(b3, &l)?);
    }

    let l = HighestWeight::parse("1,2,3")?;
    println!("\nrestriction of {b3} {l} (dim {}):", weyl_dim(b3, &l)?);
    let d3 = AlgebraLabel::d(3);
    let mut total = num_bigint::BigInt::from(0);
    for mu in branch_b_to_d(&l, 3)? {
        let d = weyl_dim(d3, &mu)?;
        total += &d;
        println!("  {d3} {mu}: {d}");
    }
    println!("  sum {total}");

    let d2 = AlgebraLabel::d(2);
    let l = HighestWeight::parse("-2,5")?;
    let parts: Vec<String> = branch_d_to_b(&l, 2)?.iter().map(|mu| mu.to_string()).collect();
    println!("\n{d2} {l} -> B_1: {}", parts.join(" "));
    Ok(())
}
