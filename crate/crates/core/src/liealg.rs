//! Root systems, weights, dimensions and branching for `B_k = so(2k+1)` and `D_k = so(2k)`.
//!
//! Weights are written in the orthonormal basis `ε_1, …, ε_k` and stored as
//! `(m_1, …, m_k)`, so `coeffs[k-1]` is the leading entry `m_k`.

use crate::error::{invalid, Result};
use crate::exact::{q, qf, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    B,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraLabel {
    pub series: Series,
    pub rank: usize,
}

impl AlgebraLabel {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        match series {
            Series::B if rank >= 1 => Ok(AlgebraLabel { series, rank }),
            Series::D if rank >= 2 => Ok(AlgebraLabel { series, rank }),
            Series::B => invalid("B_k requires rank k >= 1"),
            Series::D => invalid("D_k requires rank k >= 2"),
        }
    }

    pub fn b(rank: usize) -> Self {
        Self::new(Series::B, rank).expect("B rank >= 1")
    }

    pub fn d(rank: usize) -> Self {
        Self::new(Series::D, rank).expect("D rank >= 2")
    }

    /// The complexified isometry algebra `so(n+1)` of the sphere `S^n`.
    pub fn for_sphere(n: usize) -> Result<Self> {
        if n < 2 {
            return invalid(format!("sphere dimension n must be >= 2, got {n}"));
        }
        if n.is_multiple_of(2) {
            Self::new(Series::B, n / 2)
        } else {
            Self::new(Series::D, n.div_ceil(2))
        }
    }

    pub fn sphere_dim(&self) -> usize {
        match self.series {
            Series::B => 2 * self.rank,
            Series::D => 2 * self.rank - 1,
        }
    }

    /// Positive roots as integer coordinate vectors in the ε basis.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let k = self.rank;
        let mut roots = Vec::new();
        for i in 0..k {
            for j in 0..i {
                for s in [1, -1] {
                    let mut r = vec![0; k];
                    r[i] = 1;
                    r[j] = s;
                    roots.push(r);
                }
            }
            if self.series == Series::B {
                let mut r = vec![0; k];
                r[i] = 1;
                roots.push(r);
            }
        }
        roots
    }

    /// Half-sum of positive roots: `Σ(i-½)ε_i` for B, `Σ(i-1)ε_i` for D.
    pub fn delta(&self) -> Vec<Q> {
        (1..=self.rank as i64)
            .map(|i| match self.series {
                Series::B => qf(2 * i - 1, 2),
                Series::D => q(i - 1),
            })
            .collect()
    }
}

impl fmt::Display for AlgebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.series {
            Series::B => "B",
            Series::D => "D",
        };
        write!(f, "{}_{}", s, self.rank)
    }
}

/// Integral weight `(m_1, …, m_k)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HighestWeight {
    pub coeffs: Vec<i64>,
}

impl HighestWeight {
    pub fn new(coeffs: Vec<i64>) -> Self {
        HighestWeight { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        HighestWeight { coeffs: vec![0; rank] }
    }

    /// `m_k ε_k + m_{k-1} ε_{k-1}`, the only weights with a nonzero invariant subspace.
    pub fn two_row(rank: usize, m_k: i64, m_k1: i64) -> Self {
        let mut c = vec![0; rank];
        c[rank - 1] = m_k;
        if rank >= 2 {
            c[rank - 2] = m_k1;
        }
        HighestWeight { coeffs: c }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `m_i` with the paper-style 1-based index.
    pub fn m(&self, i: usize) -> i64 {
        self.coeffs[i - 1]
    }

    /// Parse `"0,1,3"` (whitespace and brackets tolerated). Fractions are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !matches!(c, '(' | ')' | '[' | ']')).collect();
        let mut coeffs = Vec::new();
        for tok in cleaned.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            if tok.contains('/') || tok.contains('.') {
                return invalid(format!("weight entry '{tok}' is not an integer; half-integer (spinor) weights are not supported"));
            }
            match tok.parse::<i64>() {
                Ok(v) => coeffs.push(v),
                Err(_) => return invalid(format!("cannot parse weight entry '{tok}'")),
            }
        }
        if coeffs.is_empty() {
            return invalid("empty weight");
        }
        Ok(HighestWeight { coeffs })
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn is_dominant(alg: AlgebraLabel, lambda: &HighestWeight) -> bool {
    let m = &lambda.coeffs;
    if m.len() != alg.rank {
        return false;
    }
    let skip = match alg.series {
        Series::B => 0,
        Series::D => 1,
    };
    let chain_ok = m.windows(2).skip(skip).all(|w| w[1] >= w[0]);
    match alg.series {
        Series::B => m[0] >= 0 && chain_ok,
        Series::D => m[1] >= m[0].abs() && chain_ok,
    }
}

pub fn validate(alg: AlgebraLabel, lambda: &HighestWeight) -> Result<()> {
    if lambda.rank() != alg.rank {
        return invalid(format!("weight {lambda} has {} entries but {alg} has rank {}", lambda.rank(), alg.rank));
    }
    if !is_dominant(alg, lambda) {
        let rule = match alg.series {
            Series::B => "m_k >= ... >= m_1 >= 0",
            Series::D => "m_k >= ... >= m_2 >= |m_1|",
        };
        return invalid(format!("weight {lambda} is not dominant for {alg} ({rule})"));
    }
    Ok(())
}

fn pairing(x: &[Q], root: &[i64]) -> Q {
    x.iter().zip(root).fold(Q::zero(), |acc, (a, &r)| acc + a * q(r))
}

fn shifted(alg: AlgebraLabel, lambda: &HighestWeight) -> Vec<Q> {
    alg.delta().into_iter().zip(&lambda.coeffs).map(|(d, &m)| d + q(m)).collect()
}

/// Weyl dimension formula, evaluated exactly.
pub fn weyl_dim(alg: AlgebraLabel, lambda: &HighestWeight) -> Result<BigInt> {
    validate(alg, lambda)?;
    let delta = alg.delta();
    let ld = shifted(alg, lambda);
    let mut num = Q::one();
    let mut den = Q::one();
    for root in alg.positive_roots() {
        num *= pairing(&ld, &root);
        den *= pairing(&delta, &root);
    }
    let dim = num / den;
    assert!(dim.is_integer(), "Weyl product is not integral for {alg} {lambda}");
    Ok(dim.to_integer())
}

/// `⟨λ+δ, λ+δ⟩ − ⟨δ, δ⟩` in the orthonormal ε basis.
pub fn casimir_eigenvalue(alg: AlgebraLabel, lambda: &HighestWeight) -> Result<Q> {
    validate(alg, lambda)?;
    let norm = |v: &[Q]| v.iter().fold(Q::zero(), |acc, x| acc + x * x);
    Ok(norm(&shifted(alg, lambda)) - norm(&alg.delta()))
}

/// Casimir value on `m_k ε_k + m_{k-1} ε_{k-1}` via the two-row closed forms.
pub fn casimir_two_row(alg: AlgebraLabel, m_k: i64, m_k1: i64) -> Q {
    let k = alg.rank as i64;
    let sq = |x: Q| &x * &x;
    match alg.series {
        Series::B if k == 1 => q(m_k * (m_k + 1)),
        Series::B => sq(q(k + m_k) - qf(1, 2)) + sq(q(k + m_k1) - qf(3, 2)) - sq(q(k) - qf(1, 2)) - sq(q(k) - qf(3, 2)),
        Series::D => sq(q(m_k + k - 1)) + sq(q(m_k1 + k - 2)) - sq(q(k - 1)) - sq(q(k - 2)),
    }
}

fn cartesian(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for prefix in &out {
            for v in lo..=hi {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Restriction of a `B_k` module to `D_k`.
///
/// For `k = 1` the target is the abelian `so(2)` and the result lists its
/// one-dimensional weights `(m'_1)` with `|m'_1| <= m_1`.
pub fn branch_b_to_d(lambda: &HighestWeight, k: usize) -> Result<Vec<HighestWeight>> {
    validate(AlgebraLabel::new(Series::B, k)?, lambda)?;
    let m = &lambda.coeffs;
    let mut ranges = vec![(-m[0], m[0])];
    for i in 1..k {
        ranges.push((m[i - 1], m[i]));
    }
    let mut out: Vec<HighestWeight> = cartesian(&ranges).into_iter().map(HighestWeight::new).collect();
    out.sort();
    Ok(out)
}

/// Restriction of a `D_k` module to `B_{k-1}`.
pub fn branch_d_to_b(lambda: &HighestWeight, k: usize) -> Result<Vec<HighestWeight>> {
    validate(AlgebraLabel::new(Series::D, k)?, lambda)?;
    let m = &lambda.coeffs;
    let mut ranges = vec![(m[0].abs(), m[1])];
    for i in 1..k - 1 {
        ranges.push((m[i], m[i + 1]));
    }
    let mut out: Vec<HighestWeight> = cartesian(&ranges).into_iter().map(HighestWeight::new).collect();
    out.sort();
    Ok(out)
}

/// Dimension of the subspace of `V(λ)` fixed by `so(n-1)`.
pub fn invariant_subspace_dim(alg: AlgebraLabel, lambda: &HighestWeight) -> Result<u64> {
    validate(alg, lambda)?;
    let k = alg.rank;
    if alg.series == Series::B && k == 1 {
        // so(1) is trivial: the whole module is invariant
        return Ok((2 * lambda.m(1) + 1) as u64);
    }
    if k >= 3 && (1..=k - 2).any(|j| lambda.m(j) != 0) {
        return Ok(0);
    }
    let mk = lambda.m(k);
    let mk1 = lambda.m(k - 1);
    Ok(match alg.series {
        Series::B => (mk - mk1 + 1) as u64,
        Series::D => (mk - mk1.abs() + 1) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(v: &[i64]) -> HighestWeight {
        HighestWeight::new(v.to_vec())
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(weyl_dim(AlgebraLabel::b(2), &hw(&[0, 0])).unwrap(), BigInt::from(1));
        assert_eq!(weyl_dim(AlgebraLabel::b(2), &hw(&[0, 1])).unwrap(), BigInt::from(5));
        assert_eq!(weyl_dim(AlgebraLabel::d(2), &hw(&[0, 1])).unwrap(), BigInt::from(4));
        // adjoint modules: so(7) has dimension 21, so(8) has 28
        assert_eq!(weyl_dim(AlgebraLabel::b(3), &hw(&[0, 1, 1])).unwrap(), BigInt::from(21));
        assert_eq!(weyl_dim(AlgebraLabel::d(4), &hw(&[0, 0, 1, 1])).unwrap(), BigInt::from(28));
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimir_eigenvalue(AlgebraLabel::b(3), &hw(&[0, 0, 0])).unwrap(), q(0));
        assert_eq!(casimir_eigenvalue(AlgebraLabel::b(2), &hw(&[0, 1])).unwrap(), q(4));
        assert_eq!(casimir_eigenvalue(AlgebraLabel::d(2), &hw(&[0, 1])).unwrap(), q(3));
        assert_eq!(casimir_two_row(AlgebraLabel::b(1), 3, 0), q(12));
    }

    #[test]
    fn branching_examples() {
        assert_eq!(branch_b_to_d(&hw(&[0, 1]), 2).unwrap(), vec![hw(&[0, 0]), hw(&[0, 1])]);
        assert_eq!(branch_b_to_d(&hw(&[0, 0]), 2).unwrap(), vec![hw(&[0, 0])]);
        assert_eq!(branch_b_to_d(&hw(&[0, 0, 2]), 3).unwrap(), vec![hw(&[0, 0, 0]), hw(&[0, 0, 1]), hw(&[0, 0, 2])]);
        assert_eq!(branch_d_to_b(&hw(&[0, 1]), 2).unwrap(), vec![hw(&[0]), hw(&[1])]);
        assert_eq!(branch_d_to_b(&hw(&[0, 0]), 2).unwrap(), vec![hw(&[0])]);
        assert_eq!(branch_d_to_b(&hw(&[-1, 1, 1]), 3).unwrap(), vec![hw(&[1, 1])]);
    }

    #[test]
    fn invariant_dims() {
        assert_eq!(invariant_subspace_dim(AlgebraLabel::b(3), &hw(&[0, 1, 3])).unwrap(), 3);
        assert_eq!(invariant_subspace_dim(AlgebraLabel::b(3), &hw(&[1, 1, 3])).unwrap(), 0);
        assert_eq!(invariant_subspace_dim(AlgebraLabel::d(2), &hw(&[-2, 5])).unwrap(), 4);
        assert_eq!(invariant_subspace_dim(AlgebraLabel::b(1), &hw(&[2])).unwrap(), 5);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(weyl_dim(AlgebraLabel::b(2), &hw(&[1, 0])).is_err());
        assert!(weyl_dim(AlgebraLabel::b(2), &hw(&[-1, 2])).is_err());
        assert!(weyl_dim(AlgebraLabel::d(2), &hw(&[-2, 1])).is_err());
        assert!(weyl_dim(AlgebraLabel::d(2), &hw(&[-1, 1])).is_ok());
        assert!(HighestWeight::parse("1/2, 3/2").is_err());
        assert!(HighestWeight::parse("0.5").is_err());
        assert_eq!(HighestWeight::parse("(0, 1,3)").unwrap(), hw(&[0, 1, 3]));
        assert!(AlgebraLabel::new(Series::D, 1).is_err());
        assert!(AlgebraLabel::for_sphere(1).is_err());
    }

    #[test]
    fn sphere_labels() {
        assert_eq!(AlgebraLabel::for_sphere(2).unwrap(), AlgebraLabel::b(1));
        assert_eq!(AlgebraLabel::for_sphere(3).unwrap(), AlgebraLabel::d(2));
        assert_eq!(AlgebraLabel::for_sphere(6).unwrap(), AlgebraLabel::b(3));
        for n in 2..12 {
            assert_eq!(AlgebraLabel::for_sphere(n).unwrap().sphere_dim(), n);
        }
    }
}
