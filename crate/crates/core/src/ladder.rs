//! Ladder realization of `F_kk`, `D⁺`, `D⁻` on the `so(n-1)`-invariant subspace
//! of a module, the derived operators `D₀…D₃`, exact relation checks and the
//! classification of their common eigenvectors.

use crate::error::{invalid, Error, Result};
use crate::exact::{anticommutator, commutator, complexify, fmt_qc, q, qc_i, qc_real, qf, rational_sqrt, Mat, Q, QC};
use crate::liealg::{casimir_two_row, invariant_subspace_dim, validate, AlgebraLabel, HighestWeight, Series};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exact matrices of `F_kk`, `D⁺`, `D⁻` in the basis `χ_j`.
///
/// For `k >= 2` the weights are `j ∈ {-ν, -ν+2, …, ν}`. For `B_1` the whole
/// module is invariant and the weights are `-m, …, m` in unit steps; then
/// `nu` holds `m`.
#[derive(Clone, Debug)]
pub struct LadderRep {
    pub alg: AlgebraLabel,
    pub lambda: HighestWeight,
    pub nu: i64,
    pub weights: Vec<i64>,
    pub f: Mat<Q>,
    pub dplus: Mat<Q>,
    pub dminus: Mat<Q>,
    pub casimir: Q,
}

impl LadderRep {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn index_of(&self, j: i64) -> Option<usize> {
        self.weights.iter().position(|&w| w == j)
    }

    pub fn m_k(&self) -> i64 {
        self.lambda.m(self.alg.rank)
    }

    /// `|m_{k-1}|`; zero for `B_1`.
    pub fn m_k1_abs(&self) -> i64 {
        if self.alg.rank >= 2 {
            self.lambda.m(self.alg.rank - 1).abs()
        } else {
            0
        }
    }

    pub fn is_rank_one(&self) -> bool {
        self.alg.series == Series::B && self.alg.rank == 1
    }
}

pub fn build_ladder_rep(alg: AlgebraLabel, lambda: &HighestWeight) -> Result<LadderRep> {
    validate(alg, lambda)?;
    let k = alg.rank as i64;
    if invariant_subspace_dim(alg, lambda)? == 0 {
        return invalid(format!("{alg} {lambda}: invariant subspace is zero; need m_j = 0 for j = 1..k-2"));
    }
    let mk = lambda.m(alg.rank);
    let mk1 = if k >= 2 { lambda.m(alg.rank - 1) } else { 0 };
    let a = mk1.abs();

    let (nu, weights): (i64, Vec<i64>) = if k == 1 {
        (mk, (-mk..=mk).collect())
    } else {
        let nu = mk - a;
        (nu, (0..=nu).map(|p| -nu + 2 * p).collect())
    };
    let dim = weights.len();
    let mut f = Mat::zeros(dim);
    let mut dp = Mat::zeros(dim);
    let mut dm = Mat::zeros(dim);
    let shift = match alg.series {
        Series::B => 2 * k - 3,
        Series::D => 2 * k - 4,
    };
    for (p, &j) in weights.iter().enumerate() {
        f.set(p, p, q(j));
        let up = weights.iter().position(|&w| w == j + 2);
        let down = weights.iter().position(|&w| w == j - 2);
        if k == 1 {
            // rational rescaling of the su(2) basis, see `su2_ladder_f64`
            if let Some(u) = up {
                dp.set(u, p, qf((mk - j) * (mk - j - 1), 4));
            }
            if let Some(d) = down {
                dm.set(d, p, qf((mk + j) * (mk + j - 1), 4));
            }
        } else {
            if let Some(u) = up {
                dp.set(u, p, qf((j - mk - a - shift) * (j - nu), 4));
            }
            if let Some(d) = down {
                dm.set(d, p, qf((j + mk + a + shift) * (j + nu), 4));
            }
        }
    }
    let casimir = casimir_two_row(alg, mk, mk1);
    Ok(LadderRep { alg, lambda: lambda.clone(), nu, weights, f, dplus: dp, dminus: dm, casimir })
}

/// The `k = 1` ladder in the unitary su(2) basis (square-root entries).
///
/// The exact `LadderRep` for `B_1` is conjugate to this by a diagonal matrix
/// with `c_j = c_{-j}`, so vectors `χ_j ± χ_{-j}` keep their form.
pub fn su2_ladder_f64(m: i64) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let dim = (2 * m + 1) as usize;
    let idx = |j: i64| (j + m) as usize;
    let mut f = DMatrix::zeros(dim, dim);
    let mut dp = DMatrix::zeros(dim, dim);
    let mut dm = DMatrix::zeros(dim, dim);
    for j in -m..=m {
        f[(idx(j), idx(j))] = j as f64;
        if j + 2 <= m {
            let s = ((m - j) * (m + j + 1) * (m - j - 1) * (m + j + 2)) as f64;
            dp[(idx(j + 2), idx(j))] = 0.25 * s.sqrt();
        }
        if j - 2 >= -m {
            let s = ((m + j) * (m - j + 1) * (m + j - 1) * (m - j + 2)) as f64;
            dm[(idx(j - 2), idx(j))] = 0.25 * s.sqrt();
        }
    }
    (f, dp, dm)
}

#[derive(Clone, Debug)]
pub struct OperatorMatrices {
    pub d0: Mat<QC>,
    pub d1: Mat<QC>,
    pub d2: Mat<QC>,
    pub d3: Mat<QC>,
    /// `C̃` times the identity.
    pub ctilde: Mat<QC>,
}

impl OperatorMatrices {
    pub fn d0_squared(&self) -> Mat<QC> {
        &self.d0 * &self.d0
    }
}

pub fn operator_matrices(rep: &LadderRep) -> OperatorMatrices {
    let n = rep.dim();
    let f = complexify(&rep.f);
    let dp = complexify(&rep.dplus);
    let dm = complexify(&rep.dminus);
    let i = qc_i();
    let half = qc_real(qf(1, 2));
    let ctilde = Mat::identity(n).scale(&qc_real(rep.casimir.clone()));
    let diag = (&(&f * &f) - &ctilde).scale(&half);
    let sum = &dp + &dm;
    OperatorMatrices { d0: f.scale(&-i.clone()), d1: &sum + &diag, d2: &diag - &sum, d3: (&dp - &dm).scale(&i), ctilde }
}

/// The scalar `q` in `[D⁺, D⁻] = -½F³ + qF`, from the two-row weight.
pub fn ladder_q(rep: &LadderRep) -> Q {
    let k = rep.alg.rank as i64;
    let mk = q(rep.m_k());
    let a = q(rep.m_k1_abs());
    match rep.alg.series {
        Series::B if k == 1 => (&mk * &mk + &mk) / q(2) - qf(1, 4),
        Series::B => (&mk * &mk + &a * &a + q(2 * k - 1) * &mk + q(2 * k - 3) * &a) / q(2) + qf((2 * k - 1) * (2 * k - 3), 4),
        Series::D => (&mk * &mk + &a * &a + q(2 * (k - 1)) * &mk + q(2 * (k - 2)) * &a) / q(2) + q((k - 1) * (k - 2)),
    }
}

/// The same scalar written as `½C̃ + const`, the form of the commutator display.
pub fn ladder_q_from_casimir(rep: &LadderRep) -> Q {
    let k = rep.alg.rank as i64;
    let c = match rep.alg.series {
        Series::B => qf((2 * k - 1) * (2 * k - 3), 4),
        Series::D => q((k - 1) * (k - 2)),
    };
    &rep.casimir / q(2) + c
}

#[derive(Clone, Debug)]
pub struct RelationResidual {
    pub name: String,
    pub residual: Mat<QC>,
}

impl RelationResidual {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub relations: Vec<RelationResidual>,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds())
    }

    pub fn failures(&self) -> Vec<&str> {
        self.relations.iter().filter(|r| !r.holds()).map(|r| r.name.as_str()).collect()
    }
}

fn diag_qc(values: &[Q]) -> Mat<QC> {
    let mut m = Mat::zeros(values.len());
    for (i, v) in values.iter().enumerate() {
        m.set(i, i, qc_real(v.clone()));
    }
    m
}

/// Root `μ` of `μ² + 2μ + ν² + 2ν − 4q = 0`, when rational.
pub fn mu_root(nu: i64, qv: &Q) -> Option<Q> {
    let disc = q(1) - q(nu * nu + 2 * nu) + q(4) * qv;
    rational_sqrt(&disc).map(|s| s - q(1))
}

/// Exact residual matrices of every structure relation.
pub fn structure_residuals(rep: &LadderRep) -> StructureReport {
    let ops = operator_matrices(rep);
    let n_sphere = rep.alg.sphere_dim() as i64;
    let coef = qc_real(qf((n_sphere - 1) * (n_sphere - 3), 2));
    let two = qc_real(q(2));
    let (d0, d1, d2, d3) = (&ops.d0, &ops.d1, &ops.d2, &ops.d3);
    let f = complexify(&rep.f);
    let dp = complexify(&rep.dplus);
    let dm = complexify(&rep.dminus);
    let qv = ladder_q(rep);
    let mut rel = Vec::new();
    let mut push = |name: &str, m: Mat<QC>| rel.push(RelationResidual { name: name.to_string(), residual: m });

    push("[D0,D1] = -2 D3", &commutator(d0, d1) + &d3.scale(&two));
    push("[D0,D2] = 2 D3", &commutator(d0, d2) - &d3.scale(&two));
    push("[D0,D3] = D1 - D2", &commutator(d0, d3) - &(d1 - d2));
    push("[D1,D2] = -2 {D0,D3}", &commutator(d1, d2) + &anticommutator(d0, d3).scale(&two));
    push("[D1,D3] = -{D0,D1} + (n-1)(n-3)/2 D0", &(&commutator(d1, d3) + &anticommutator(d0, d1)) - &d0.scale(&coef));
    push("[D2,D3] = {D0,D2} - (n-1)(n-3)/2 D0", &(&commutator(d2, d3) - &anticommutator(d0, d2)) + &d0.scale(&coef));
    push("C = -D0^2 - D1 - D2", &(&(&ops.ctilde + &(d0 * d0)) + d1) + d2);
    push("[F,D+] = 2 D+", &commutator(&f, &dp) - &dp.scale(&two));
    push("[F,D-] = -2 D-", &commutator(&f, &dm) + &dm.scale(&two));
    let f3 = &(&f * &f) * &f;
    let rhs = &f.scale(&qc_real(qv.clone())) - &f3.scale(&qc_real(qf(1, 2)));
    push("[D+,D-] = -F^3/2 + qF", &commutator(&dp, &dm) - &rhs);
    let mut qdiff = Mat::zeros(1);
    qdiff.set(0, 0, qc_real(&qv - ladder_q_from_casimir(rep)));
    push("q = C/2 + const", qdiff);

    // D+D- on χ_{η+2} equals (η-μ)(η-ν)(η+μ+2)(η+ν+2)/16, one irreducible
    // sector at a time (B_1 has an even and an odd sector)
    let prod = &dp * &dm;
    let mut expected = vec![Q::zero(); rep.dim()];
    let mut mu_missing = false;
    let sectors: Vec<i64> = if rep.is_rank_one() && rep.nu >= 1 { vec![rep.nu, rep.nu - 1] } else { vec![rep.nu] };
    for top in sectors {
        match mu_root(top, &qv) {
            Some(mu) => {
                for (p, &j) in rep.weights.iter().enumerate() {
                    if (top - j) % 2 != 0 {
                        continue;
                    }
                    let eta = q(j - 2);
                    let nuq = q(top);
                    expected[p] = (&eta - &mu) * (&eta - &nuq) * (&eta + &mu + q(2)) * (&eta + &nuq + q(2)) / q(16);
                }
            }
            None => mu_missing = true,
        }
    }
    let mut fact = &prod.map(|x| x.clone()) - &diag_qc(&expected);
    if mu_missing {
        fact.set(0, 0, qc_real(q(1)) + fact.get(0, 0).clone());
    }
    push("D+D- factorization (root mu)", fact);
    StructureReport { relations: rel }
}

pub fn verify_structure_relations(rep: &LadderRep) -> Result<StructureReport> {
    let report = structure_residuals(rep);
    if report.all_hold() {
        Ok(report)
    } else {
        Err(Error::Verification(format!("{} {}: nonzero residual in {}", rep.alg, rep.lambda, report.failures().join("; "))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassMode {
    Arbitrary,
    Equal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvectorRecord {
    pub case_id: u8,
    /// Sparse `(weight j, coefficient)` pairs over the `χ_j` basis.
    pub coeffs: Vec<(i64, Q)>,
    pub delta0: Q,
    pub delta1: Q,
    pub delta2: Q,
    pub delta3: Option<QC>,
    pub mass_mode: MassMode,
}

impl EigenvectorRecord {
    pub fn dense(&self, rep: &LadderRep) -> Vec<QC> {
        let mut v = vec![QC::zero(); rep.dim()];
        for (j, c) in &self.coeffs {
            if let Some(p) = rep.index_of(*j) {
                v[p] = qc_real(c.clone());
            }
        }
        v
    }

    pub fn describe(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(j, c)| {
                let sign = if c.is_negative() { "-" } else { "+" };
                let mag = c.abs();
                let coef = if mag.is_one() { String::new() } else { format!("{mag}·") };
                format!("{sign}{coef}χ{j}")
            })
            .collect();
        let joined = terms.join("");
        joined.strip_prefix('+').unwrap_or(&joined).to_string()
    }

    pub fn delta3_text(&self) -> String {
        self.delta3.as_ref().map(fmt_qc).unwrap_or_else(|| "-".into())
    }
}

fn pm(j: i64, sign: i64) -> Vec<(i64, Q)> {
    if j == 0 {
        vec![(0, q(1))]
    } else {
        vec![(j, q(1)), (-j, q(sign))]
    }
}

fn is_multiple(v: &[QC], w: &[QC]) -> Option<QC> {
    // returns λ with w = λ v, if any
    let p = v.iter().position(|x| !x.is_zero())?;
    let lam = w[p].clone() / v[p].clone();
    v.iter().zip(w).all(|(a, b)| a.clone() * lam.clone() == *b).then_some(lam)
}

/// Common eigenvectors of `D₀², D₁, D₂` on the invariant subspace.
///
/// Each candidate is checked by exact multiplication against
/// [`operator_matrices`]; a mismatch is reported as a verification error.
pub fn classify_common_eigenvectors(rep: &LadderRep, n: usize) -> Result<Vec<EigenvectorRecord>> {
    if rep.alg.sphere_dim() != n {
        return invalid(format!("n = {n} does not match {} (sphere dimension {})", rep.alg, rep.alg.sphere_dim()));
    }
    let k = rep.alg.rank as i64;
    let mk = rep.m_k();
    let mut out = Vec::new();
    let rec = |case_id, coeffs, d0: i64, d1: Q, d2: Q, mode| EigenvectorRecord {
        case_id,
        coeffs,
        delta0: q(d0),
        delta1: d1,
        delta2: d2,
        delta3: None,
        mass_mode: mode,
    };
    use MassMode::*;
    if rep.is_rank_one() {
        let table: &[(u8, i64, i64, i64, i64, i64, i64, MassMode)] = &[
            // case, m, j, sign, δ0, δ1, δ2
            (1, 0, 0, 1, 0, 0, 0, Arbitrary),
            (2, 1, 0, 1, 0, -1, -1, Arbitrary),
            (3, 1, 1, 1, -1, 0, -1, Equal),
            (4, 1, 1, -1, -1, -1, 0, Equal),
            (5, 2, 2, -1, -4, -1, -1, Equal),
            (6, 2, 1, 1, -1, -1, -4, Equal),
            (7, 2, 1, -1, -1, -4, -1, Equal),
            (8, 3, 2, -1, -4, -4, -4, Equal),
        ];
        for &(case, m, j, s, d0, d1, d2, mode) in table {
            if m == mk {
                out.push(rec(case, pm(j, s), d0, q(d1), q(d2), mode));
            }
        }
    } else {
        let (p, qv) = match rep.alg.series {
            Series::B => (-mk * (mk + 2 * k - 2), -mk * mk - 2 * (k - 2) * mk + 2 * k - 3),
            Series::D => (-mk * (mk + 2 * k - 3), -mk * mk + (5 - 2 * k) * mk + 2 * k - 4),
        };
        match rep.nu {
            0 => out.push(rec(1, pm(0, 1), 0, q(p), q(p), Arbitrary)),
            1 => {
                out.push(rec(2, pm(1, 1), -1, q(qv), q(p), Equal));
                out.push(rec(3, pm(1, -1), -1, q(p), q(qv), Equal));
            }
            2 => out.push(rec(4, pm(2, -1), -4, q(qv), q(qv), Equal)),
            _ => {}
        }
    }
    let ops = operator_matrices(rep);
    let d0sq = ops.d0_squared();
    for r in &mut out {
        let v = r.dense(rep);
        for (name, mat, want) in [("D0^2", &d0sq, &r.delta0), ("D1", &ops.d1, &r.delta1), ("D2", &ops.d2, &r.delta2)] {
            let got = mat.apply(&v);
            if is_multiple(&v, &got) != Some(qc_real(want.clone())) {
                return Err(Error::Verification(format!(
                    "{} {}: case {} vector {} is not a {name}-eigenvector with eigenvalue {want}",
                    rep.alg,
                    rep.lambda,
                    r.case_id,
                    r.describe()
                )));
            }
        }
        r.delta3 = is_multiple(&v, &ops.d3.apply(&v));
    }
    Ok(out)
}

fn cmat(n: usize) -> DMatrix<Complex64> {
    DMatrix::zeros(n, n)
}

fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn antidiag(n: usize) -> DMatrix<Complex64> {
    let mut s = cmat(n);
    for i in 0..n {
        s[(i, n - 1 - i)] = Complex64::new(1.0, 0.0);
    }
    s
}

/// The matrix `J_{2k+1}` taking the antidiagonal form to the identity.
pub fn j_matrix(k: usize) -> DMatrix<Complex64> {
    let n = 2 * k + 1;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut j = cmat(n);
    let s = antidiag(k);
    for a in 0..k {
        for b in 0..k {
            let e = if a == b { 1.0 } else { 0.0 };
            j[(a, b)] = Complex64::new(e * r, 0.0);
            j[(a, k + 1 + b)] = s[(a, b)] * r;
            j[(k + 1 + a, b)] = s[(a, b)] * Complex64::new(0.0, r);
            j[(k + 1 + a, k + 1 + b)] = Complex64::new(0.0, -e * r);
        }
    }
    j[(k, k)] = Complex64::new(1.0, 0.0);
    j
}

/// `max |J S Jᵀ − E|`.
pub fn j_orthogonality_deviation(k: usize) -> f64 {
    let n = 2 * k + 1;
    let j = j_matrix(k);
    max_dev(&(&j * antidiag(n) * j.transpose()), &DMatrix::identity(n, n))
}

/// Checks the correspondence between the real skew generators `Ψ_ij` and the
/// root vectors `F_ij` in the defining representation, then the resulting
/// quadratic expressions for `D₀…D₃`.
///
/// Returns the maximal entrywise deviation; fails above `1e-12` naming the
/// first offending formula (numbered in the order they are checked).
pub fn verify_embedding(k: usize) -> Result<f64> {
    if !(2..=5).contains(&k) {
        return invalid(format!("embedding check supports 2 <= k <= 5, got {k}"));
    }
    let n = 2 * k + 1;
    let ki = k as i64;
    let one = Complex64::new(1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);
    let r2 = std::f64::consts::SQRT_2;
    let psi = |a: usize, b: usize| {
        let mut m = cmat(n);
        m[(a - 1, b - 1)] = one;
        m[(b - 1, a - 1)] = -one;
        m
    };
    // move the second row and column to the end, then conjugate by Jᵀ
    let mut order: Vec<usize> = vec![0];
    order.extend(2..n);
    order.push(1);
    let mut p = cmat(n);
    for (row, &src) in order.iter().enumerate() {
        p[(row, src)] = one;
    }
    let jt = j_matrix(k).transpose();
    let jt_inv = jt.clone().try_inverse().ok_or_else(|| Error::Numeric("J is singular".into()))?;
    let phi = |c: &DMatrix<Complex64>| &jt * (&p * c * p.transpose()) * &jt_inv;
    let idx = |i: i64| (i + ki) as usize;
    let fm = |i: i64, j: i64| {
        let mut m = cmat(n);
        m[(idx(i), idx(j))] += one;
        m[(idx(-j), idx(-i))] -= one;
        m
    };

    let mut checks: Vec<(DMatrix<Complex64>, DMatrix<Complex64>)> = Vec::new();
    checks.push((phi(&psi(1, 2)), fm(ki, ki) * im));
    checks.push((phi(&psi(1, k + 2)), (fm(ki, 0) - fm(0, ki)) / Complex64::new(r2, 0.0)));
    checks.push((phi(&psi(2, k + 2)), (fm(ki, 0) + fm(0, ki)) * (-im / r2)));
    let half = Complex64::new(0.5, 0.0);
    for i in 3..=k + 1 {
        let j = i as i64 - ki - 2;
        checks.push((phi(&psi(1, i)), (fm(ki, j) + fm(ki, -j) + fm(-ki, j) + fm(-ki, -j)) * half));
        checks.push((phi(&psi(2, i)), (fm(-ki, j) + fm(-ki, -j) - fm(ki, j) - fm(ki, -j)) * (im * 0.5)));
    }
    for i in k + 3..=2 * k + 1 {
        let j = i as i64 - ki - 2;
        checks.push((phi(&psi(1, i)), (fm(ki, j) - fm(ki, -j) + fm(-ki, j) - fm(-ki, -j)) * (im * 0.5)));
        checks.push((phi(&psi(2, i)), (fm(ki, j) - fm(ki, -j) + fm(-ki, -j) - fm(-ki, j)) * half));
    }

    // D_i from the Ψ generators against their F-expressions
    let anti = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b + b * a;
    let mut d1 = cmat(n);
    let mut d2 = cmat(n);
    let mut d3 = cmat(n);
    for i in 3..=n {
        let (p1, p2) = (phi(&psi(1, i)), phi(&psi(2, i)));
        d1 += &p1 * &p1;
        d2 += &p2 * &p2;
        d3 -= anti(&p1, &p2) * half;
    }
    let d0 = -phi(&psi(1, 2));
    let (fk0, f0k) = (fm(ki, 0), fm(0, ki));
    let mut e1 = (&fk0 - &f0k) * (&fk0 - &f0k) * half;
    let mut e2 = -(&fk0 + &f0k) * (&fk0 + &f0k) * half;
    let mut e3 = (&fk0 * &fk0 - &f0k * &f0k) * (im * 0.5);
    for j in 1..ki {
        let (a, b, c, d) = (fm(-ki, j), fm(ki, j), fm(ki, -j), fm(-ki, -j));
        e1 += anti(&(&a + &b), &(&c + &d)) * half;
        e2 += anti(&(&a - &b), &(&c - &d)) * half;
        e3 += (&b * &c - &a * &d) * im;
    }
    checks.push((d0, fm(ki, ki) * (-im)));
    checks.push((d1, e1));
    checks.push((d2, e2));
    checks.push((d3, e3));

    let mut worst = 0.0f64;
    for (idx, (lhs, rhs)) in checks.iter().enumerate() {
        let dev = max_dev(lhs, rhs);
        if dev > 1e-12 {
            return Err(Error::Verification(format!("embedding formula {} deviates by {dev:.3e} at k = {k}", idx + 1)));
        }
        worst = worst.max(dev);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(alg: AlgebraLabel, w: &[i64]) -> LadderRep {
        build_ladder_rep(alg, &HighestWeight::new(w.to_vec())).unwrap()
    }

    #[test]
    fn trivial_rep() {
        let r = rep(AlgebraLabel::b(2), &[1, 1]);
        assert_eq!(r.dim(), 1);
        assert!(r.f.is_zero() && r.dplus.is_zero() && r.dminus.is_zero());
        assert!(verify_structure_relations(&r).is_ok());
    }

    #[test]
    fn ladder_entries() {
        let r = rep(AlgebraLabel::b(2), &[0, 2]);
        assert_eq!(r.weights, vec![-2, 0, 2]);
        assert_eq!(r.dplus.get(1, 0), &q(5));
        let r = rep(AlgebraLabel::d(2), &[0, 1]);
        assert_eq!(r.weights, vec![-1, 1]);
        assert_eq!(r.dplus.get(1, 0), &q(1));
    }

    #[test]
    fn zero_invariant_subspace_is_an_error() {
        let e = build_ladder_rep(AlgebraLabel::b(3), &HighestWeight::new(vec![1, 1, 3])).unwrap_err();
        assert!(matches!(e, Error::Validation(_)));
    }

    #[test]
    fn relation_examples() {
        for (alg, w) in
            [(AlgebraLabel::b(3), vec![0, 1, 4]), (AlgebraLabel::d(3), vec![0, 0, 3]), (AlgebraLabel::b(1), vec![3]), (AlgebraLabel::d(2), vec![-2, 5])]
        {
            let r = build_ladder_rep(alg, &HighestWeight::new(w)).unwrap();
            let rep = structure_residuals(&r);
            assert!(rep.all_hold(), "{alg} {}: {:?}", r.lambda, rep.failures());
        }
    }

    #[test]
    fn relation_failure_is_named() {
        let mut r = rep(AlgebraLabel::b(2), &[0, 2]);
        r.dplus.set(1, 0, q(6));
        let err = verify_structure_relations(&r).unwrap_err().to_string();
        assert!(err.contains("[D+,D-]"), "{err}");
    }

    #[test]
    fn operator_examples() {
        let r = rep(AlgebraLabel::b(2), &[0, 1]);
        let ops = operator_matrices(&r);
        assert_eq!(r.casimir, q(4));
        assert_eq!(ops.d0.get(0, 0), &qc(q(0), q(1)));
        // D1 = D⁺ + D⁻ + ½(F² − 4): diagonal ½(1 − 4) = -3/2
        assert_eq!(ops.d1.get(0, 0), &qc_real(qf(-3, 2)));
        let r = rep(AlgebraLabel::d(2), &[0, 1]);
        assert_eq!(r.casimir, q(3));
    }

    fn qc(re: Q, im: Q) -> QC {
        crate::exact::qc(re, im)
    }

    #[test]
    fn classification_examples() {
        let r = rep(AlgebraLabel::b(2), &[1, 1]);
        let recs = classify_common_eigenvectors(&r, 4).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].case_id, 1);
        assert_eq!((recs[0].delta1.clone(), recs[0].delta2.clone()), (q(-3), q(-3)));
        assert_eq!(recs[0].delta3, Some(QC::zero()));

        let r = rep(AlgebraLabel::b(1), &[1]);
        let recs = classify_common_eigenvectors(&r, 2).unwrap();
        let ids: Vec<u8> = recs.iter().map(|r| r.case_id).collect();
        assert_eq!(ids, vec![2, 3, 4]);
        assert_eq!(recs[0].delta3, Some(QC::zero()));
        assert_eq!(recs[1].delta3, None);

        let r = rep(AlgebraLabel::d(2), &[0, 2]);
        let recs = classify_common_eigenvectors(&r, 3).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].case_id, 4);
        assert_eq!(recs[0].delta0, q(-4));
        // -(m² + (2k-5)m - 2k + 4) at m = 2, k = 2
        assert_eq!(recs[0].delta1, q(-2));
        assert_eq!(recs[0].delta2, q(-2));
        assert!(classify_common_eigenvectors(&r, 4).is_err());
        assert!(classify_common_eigenvectors(&rep(AlgebraLabel::b(2), &[0, 3]), 4).unwrap().is_empty());
    }

    #[test]
    fn embedding() {
        for k in 2..=5 {
            assert!(j_orthogonality_deviation(k) <= 1e-14);
            assert!(verify_embedding(k).unwrap() <= 1e-12);
        }
        assert!(verify_embedding(1).is_err());
    }
}
