//! Common eigenvectors of D0², D1 and D2 on the invariant subspace, with the
//! radial coefficients they induce.

use sphere_twobody::ladder::{build_ladder_rep, classify_common_eigenvectors};
use sphere_twobody::liealg::{AlgebraLabel, HighestWeight};
use sphere_twobody::radial::coefficients_from_record;

fn main() -> sphere_twobody::Result<()> {
    // (n, m_k, m_{k-1})
    for (n, mk, mk1) in [(2usize, 2i64, 0i64), (3, 2, -1), (4, 1, 1), (5, 3, 1)] {
        let alg = AlgebraLabel::for_sphere(n)?;
        let lambda = if alg.rank == 1 { HighestWeight::new(vec![mk]) } else { HighestWeight::two_row(alg.rank, mk, mk1) };
        let rep = build_ladder_rep(alg, &lambda)?;
        println!("S^{n}: {alg} {lambda}, dim {}", rep.dim());
        for rec in classify_common_eigenvectors(&rep, n)? {
            let (a, b, c) = coefficients_from_record(&rec);
            println!("  case {}: {}  a={a} b={b} c={c}", rec.case_id, rec.describe());
        }
    }
    Ok(())
}
