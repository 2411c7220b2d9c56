//! Verification suites, one per acceptance criterion.
//!
//! Each suite returns a [`CriterionReport`]; the CLI `verify` subcommand and
//! the acceptance test both print these.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64 as C;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::to_c64;
use crate::fuchsian::{self, coulomb_exponents, maier_classify, oscillator_exponents, pullback_residual, reduce_case1, to_heun, MaierCase};
use crate::hyperfun::{gauss_2f1, gauss_connection, gauss_series, limit_near_one, GaussParams};
use crate::ladder::{build_ladder_rep, classify_common_eigenvectors, operator_matrices, verify_structure_relations, EigenvectorRecord, LadderRep};
use crate::liealg::{branch_b_to_d, branch_d_to_b, invariant_subspace_dim, weyl_dim, AlgebraLabel, HighestWeight, Series};
use crate::oracle::{common_eigenvectors, JointSpace, ShootingConfig};
use crate::radial::{case_count, radial_coefficients, PhysicalParams, PotentialKind, RadialCoefficients};
use crate::spectra::{coulomb_energy_value, expected_nodes, oracle_check, oscillator_energy_value, radial_eigenfunction};

/// Tolerances of the suites.
pub mod tol {
    pub const STRUCTURE_SECONDS: f64 = 10.0;
    pub const JOINT_EIGENVALUE: f64 = 1e-10;
    pub const JOINT_VECTOR: f64 = 1e-10;
    /// Kernel threshold for the brute-force joint eigenvectors, relative to the family norm.
    pub const JOINT_KERNEL: f64 = 1e-10;
    pub const ORACLE_REL: f64 = 1e-6;
    pub const CLOSED_FORM: f64 = 1e-12;
    pub const SPECTRUM_SECONDS: f64 = 60.0;
    pub const ODE_RESIDUAL: f64 = 1e-9;
    pub const RESIDUAL_POINTS: usize = 100;
    /// Relative change of `∫|f|² dν` between the coarse and fine quadratures.
    pub const NORM_REFINEMENT: f64 = 1e-6;
    pub const HEUN_CONSTRAINT: f64 = 1e-12;
    pub const HEUN_IDENTITY: f64 = 1e-10;
    pub const PULLBACK: f64 = 1e-12;
    pub const DUAL_PATH: f64 = 1e-10;
    pub const LIMIT: f64 = 1e-6;
    pub const GAUSS_RESIDUAL: f64 = 1e-9;
    pub const FUCHS: f64 = 1e-12;
    pub const FUCHS_DRAWS: usize = 1000;
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub summary: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}. {} ({} checks, {:.2} s): {}", self.id, self.title, self.checks, self.seconds, self.summary)?;
        for msg in self.failures.iter().take(8) {
            write!(f, "\n       - {msg}")?;
        }
        if self.failures.len() > 8 {
            write!(f, "\n       ... {} more", self.failures.len() - 8)?;
        }
        Ok(())
    }
}

/// Collects checks for one criterion.
struct Tally {
    id: u8,
    title: &'static str,
    start: Instant,
    checks: usize,
    failures: Vec<String>,
    worst: Vec<(&'static str, f64)>,
}

impl Tally {
    fn new(id: u8, title: &'static str) -> Self {
        Tally { id, title, start: Instant::now(), checks: 0, failures: vec![], worst: vec![] }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    /// Records `value <= bound` and keeps the largest value seen under `name`.
    fn bound(&mut self, name: &'static str, value: f64, bound: f64, ctx: impl FnOnce() -> String) {
        match self.worst.iter_mut().find(|(n, _)| *n == name) {
            Some(w) => w.1 = if value.is_nan() || w.1.is_nan() { f64::NAN } else { w.1.max(value) },
            None => self.worst.push((name, value)),
        }
        self.check(value <= bound, || format!("{}: {name} = {value:.3e} > {bound:.0e}", ctx()));
    }

    fn error(&mut self, ctx: String, e: Error) {
        self.checks += 1;
        self.failures.push(format!("{ctx}: {e}"));
    }

    fn finish(self, extra: &str) -> CriterionReport {
        let seconds = self.start.elapsed().as_secs_f64();
        let mut parts: Vec<String> = self.worst.iter().map(|(n, v)| format!("max {n} {v:.2e}")).collect();
        if !extra.is_empty() {
            parts.push(extra.to_string());
        }
        CriterionReport {
            id: self.id,
            title: self.title.to_string(),
            passed: self.failures.is_empty(),
            checks: self.checks,
            failures: self.failures,
            summary: parts.join(", "),
            seconds,
        }
    }
}

/// Two-row weights of rank `k` with `m_k <= max_mk`; signed `m_1` for `D_2`.
pub fn two_row_weights(alg: AlgebraLabel, max_mk: i64) -> Vec<HighestWeight> {
    let k = alg.rank;
    let mut out = Vec::new();
    for mk in 0..=max_mk {
        if k == 1 {
            out.push(HighestWeight::new(vec![mk]));
            continue;
        }
        // m_{k-1} carries a sign only for D_2, where it is m_1
        let lo = if alg.series == Series::D && k == 2 { -mk } else { 0 };
        for mk1 in lo..=mk {
            out.push(HighestWeight::two_row(k, mk, mk1));
        }
    }
    out
}

/// All dominant weights of `alg` with entries bounded by `max` in absolute value.
pub fn dominant_weights(alg: AlgebraLabel, max: i64) -> Vec<HighestWeight> {
    let k = alg.rank;
    let mut out = Vec::new();
    let mut cur = vec![0i64; k];
    fn rec(i: usize, k: usize, max: i64, d: bool, cur: &mut Vec<i64>, out: &mut Vec<HighestWeight>) {
        if i == k {
            out.push(HighestWeight::new(cur.clone()));
            return;
        }
        let lo = if i == 0 {
            if d {
                -max
            } else {
                0
            }
        } else {
            cur[i - 1].abs()
        };
        for v in lo..=max {
            cur[i] = v;
            rec(i + 1, k, max, d, cur, out);
        }
    }
    rec(0, k, max, alg.series == Series::D, &mut cur, &mut out);
    out
}

fn algebras(max_rank: usize) -> Vec<AlgebraLabel> {
    let mut out: Vec<AlgebraLabel> = (1..=max_rank).map(AlgebraLabel::b).collect();
    out.extend((2..=max_rank).map(AlgebraLabel::d));
    out
}

/// Structure relations in exact arithmetic for `B_k`, `D_k` with `k <= 6`, `m_k <= 8`.
pub fn structure_relations() -> CriterionReport {
    let mut t = Tally::new(1, "exact structure relations");
    let mut reps = 0;
    for alg in algebras(6) {
        for lam in two_row_weights(alg, 8) {
            let ctx = || format!("{alg} {lam}");
            match build_ladder_rep(alg, &lam).and_then(|rep| verify_structure_relations(&rep)) {
                Ok(report) => {
                    reps += 1;
                    let failed = report.failures().join(", ");
                    t.check(report.all_hold(), || format!("{}: nonzero residual in {failed}", ctx()));
                }
                Err(e) => t.error(ctx(), e),
            }
        }
    }
    let secs = t.start.elapsed().as_secs_f64();
    t.check(secs < tol::STRUCTURE_SECONDS, || format!("runtime {secs:.1} s exceeds {} s", tol::STRUCTURE_SECONDS));
    t.finish(&format!("{reps} modules, all residuals exactly zero"))
}

fn family(rep: &LadderRep, with_d3: bool) -> Vec<DMatrix<C>> {
    let ops = operator_matrices(rep);
    let mut mats = vec![to_c64(&ops.d0_squared()), to_c64(&ops.d1), to_c64(&ops.d2)];
    if with_d3 {
        mats.push(to_c64(&ops.d3));
    }
    mats
}

fn record_tuple(r: &EigenvectorRecord, with_d3: bool) -> Option<Vec<C>> {
    let f = |x: &BigRational| C::new(crate::exact::to_f64(x), 0.0);
    let mut v = vec![f(&r.delta0), f(&r.delta1), f(&r.delta2)];
    if with_d3 {
        let d3 = r.delta3.as_ref()?;
        v.push(C::new(crate::exact::to_f64(&d3.re), crate::exact::to_f64(&d3.im)));
    }
    Some(v)
}

fn tuple_distance(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Compares brute-force joint eigenspaces with the classified records.
/// Returns failure messages.
pub fn compare_joint_spaces(rep: &LadderRep, records: &[EigenvectorRecord], spaces: &[JointSpace], with_d3: bool) -> (Vec<String>, f64) {
    let mut errs = Vec::new();
    let mut worst: f64 = 0.0;
    let expected: Vec<(&EigenvectorRecord, Vec<C>)> = records.iter().filter_map(|r| record_tuple(r, with_d3).map(|t| (r, t))).collect();
    let mut claimed = vec![0usize; spaces.len()];
    for (r, tuple) in &expected {
        let v = r.dense(rep);
        let v = DVector::from_iterator(v.len(), v.iter().map(|z| C::new(crate::exact::to_f64(&z.re), crate::exact::to_f64(&z.im))));
        let hit = spaces.iter().enumerate().find(|(_, s)| tuple_distance(&s.values, tuple) <= tol::JOINT_EIGENVALUE);
        match hit {
            Some((i, s)) => {
                claimed[i] += 1;
                worst = worst.max(tuple_distance(&s.values, tuple));
                let d = s.distance(&v);
                if d > tol::JOINT_VECTOR {
                    errs.push(format!("case {} vector {} lies {d:.2e} off its joint eigenspace", r.case_id, r.describe()));
                }
            }
            None => errs.push(format!("case {} eigenvalues {tuple:?} not found by brute force", r.case_id)),
        }
    }
    for (s, &n) in spaces.iter().zip(&claimed) {
        if s.dim() != n {
            errs.push(format!("extra joint eigenvectors: dimension {} with eigenvalues {:?}, {n} classified", s.dim(), s.values));
        }
    }
    (errs, worst)
}

/// Brute-force joint eigenvectors of `{D₀², D₁, D₂}` (and with `D₃`) against the classification.
pub fn classification_vs_brute_force() -> CriterionReport {
    let mut t = Tally::new(2, "classification vs brute force");
    let mut records_seen = 0;
    for alg in algebras(4) {
        for lam in two_row_weights(alg, 6) {
            let ctx = || format!("{alg} {lam}");
            let rep = match build_ladder_rep(alg, &lam) {
                Ok(r) => r,
                Err(e) => {
                    t.error(ctx(), e);
                    continue;
                }
            };
            let records = match classify_common_eigenvectors(&rep, alg.sphere_dim()) {
                Ok(r) => r,
                Err(e) => {
                    t.error(ctx(), e);
                    continue;
                }
            };
            records_seen += records.len();
            for with_d3 in [false, true] {
                match common_eigenvectors(&family(&rep, with_d3), tol::JOINT_KERNEL) {
                    Ok(spaces) => {
                        let (errs, worst) = compare_joint_spaces(&rep, &records, &spaces, with_d3);
                        t.bound("eigenvalue deviation", worst, tol::JOINT_EIGENVALUE, ctx);
                        let label = if with_d3 { " with D3" } else { "" };
                        for e in errs {
                            t.check(false, || format!("{}{label}: {e}", ctx()));
                        }
                    }
                    Err(e) => t.error(ctx(), e),
                }
            }
        }
    }
    t.finish(&format!("{records_seen} classified vectors"))
}

/// Zero weights along the chain `so(n+1) ⊃ so(n) ⊃ so(n-1)`.
pub fn chain_count(alg: AlgebraLabel, lambda: &HighestWeight) -> Result<u64> {
    let k = alg.rank;
    let zero = |w: &HighestWeight| w.coeffs.iter().all(|&x| x == 0);
    let mut count = 0u64;
    match alg.series {
        Series::B if k == 1 => count = branch_b_to_d(lambda, 1)?.len() as u64,
        Series::B => {
            for mu in branch_b_to_d(lambda, k)? {
                count += branch_d_to_b(&mu, k)?.iter().filter(|w| zero(w)).count() as u64;
            }
        }
        Series::D => {
            for mu in branch_d_to_b(lambda, k)? {
                count += branch_b_to_d(&mu, k - 1)?.iter().filter(|w| zero(w)).count() as u64;
            }
        }
    }
    Ok(count)
}

fn restriction_dim(alg: AlgebraLabel, lambda: &HighestWeight) -> Result<BigInt> {
    let k = alg.rank;
    let mut total = BigInt::from(0);
    match alg.series {
        Series::B if k == 1 => total += branch_b_to_d(lambda, 1)?.len(),
        Series::B => {
            for mu in branch_b_to_d(lambda, k)? {
                total += weyl_dim(AlgebraLabel::d(k), &mu)?;
            }
        }
        Series::D => {
            for mu in branch_d_to_b(lambda, k)? {
                total += weyl_dim(AlgebraLabel::b(k - 1), &mu)?;
            }
        }
    }
    Ok(total)
}

/// Branching sums against Weyl dimensions and the invariant dimension against the chain count.
pub fn branching_consistency() -> CriterionReport {
    let mut t = Tally::new(3, "branching and dimensions");
    let mut weights = 0;
    for alg in algebras(4) {
        for lam in dominant_weights(alg, 5) {
            weights += 1;
            let ctx = || format!("{alg} {lam}");
            match (weyl_dim(alg, &lam), restriction_dim(alg, &lam)) {
                (Ok(d), Ok(s)) => t.check(d == s, || format!("{}: restrictions sum to {s}, Weyl dimension {d}", ctx())),
                (Err(e), _) | (_, Err(e)) => t.error(ctx(), e),
            }
            match (invariant_subspace_dim(alg, &lam), chain_count(alg, &lam)) {
                (Ok(a), Ok(b)) => t.check(a == b, || format!("{}: invariant dimension {a}, chain count {b}", ctx())),
                (Err(e), _) | (_, Err(e)) => t.error(ctx(), e),
            }
        }
    }
    t.finish(&format!("{weights} dominant weights"))
}

/// Reducible (`a = c`) channels with `m_k <= max_mk` for the given sphere dimensions.
pub fn reducible_channels(ns: &[usize], max_mk: i64) -> Vec<(usize, u8, i64, RadialCoefficients)> {
    let mut out = Vec::new();
    for &n in ns {
        for case in 1..=case_count(n) {
            for mk in 0..=max_mk {
                if let Ok(co) = radial_coefficients(n, case, mk) {
                    if co.symmetric() {
                        out.push((n, case, mk, co));
                    }
                }
            }
        }
    }
    out
}

pub const SPECTRUM_DIMS: [usize; 4] = [2, 3, 4, 5];

fn levels(kind: PotentialKind) -> std::ops::RangeInclusive<u32> {
    match kind {
        PotentialKind::Coulomb => 1..=3,
        PotentialKind::Oscillator => 0..=3,
    }
}

fn unit_params() -> PhysicalParams {
    PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).expect("unit parameters are valid")
}

/// Closed-form levels against the shooting oracle on the desk grid.
pub fn spectrum_vs_oracle(kind: PotentialKind) -> CriterionReport {
    let (id, title) = match kind {
        PotentialKind::Coulomb => (4, "Coulomb spectrum vs shooting"),
        PotentialKind::Oscillator => (5, "oscillator spectrum vs shooting"),
    };
    let mut t = Tally::new(id, title);
    let params = unit_params();
    let cfg = ShootingConfig::default();
    let channels = reducible_channels(&SPECTRUM_DIMS, 2);
    for (n, case, mk, co) in &channels {
        for k in levels(kind) {
            let ctx = || format!("n={n} case {case} m_k={mk} k={k}");
            match oracle_check(kind, k, *n, co, &params, &cfg) {
                Ok(c) => {
                    t.bound("relative error", c.relative_error, tol::ORACLE_REL, ctx);
                    t.check(c.roots_in_bracket == 1, || format!("{}: {} roots in bracket {:?}", ctx(), c.roots_in_bracket, c.bracket));
                    let want = expected_nodes(kind, k);
                    t.check(c.nodes == want, || format!("{}: {} nodes, expected {want}", ctx(), c.nodes));
                }
                Err(e) => t.error(ctx(), e),
            }
        }
    }
    let extra = match kind {
        PotentialKind::Coulomb => {
            let zero = radial_coefficients(3, 1, 0).expect("n=3 case 1 exists");
            for k in 1..=3u32 {
                let e = coulomb_energy_value(k, 3, zero.a_f64(), zero.b_f64(), &params);
                let kf = k as f64;
                let want = (kf * kf - 1.0) / 2.0 - 1.0 / (2.0 * kf * kf);
                t.bound("closed-form deviation", (e - want).abs(), tol::CLOSED_FORM, || format!("n=3 free channel k={k}"));
            }
            "n=3 free values (k²-1)/2 - 1/(2k²)".to_string()
        }
        PotentialKind::Oscillator => {
            let zero = radial_coefficients(2, 1, 0).expect("n=2 case 1 exists");
            let e = oscillator_energy_value(0, 2, zero.a_f64(), zero.b_f64(), &params);
            let want = 0.5 + 5f64.sqrt() / 2.0;
            t.bound("closed-form deviation", (e - want).abs(), tol::CLOSED_FORM, || "n=2 free channel k=0".into());
            match oracle_check(kind, 0, 2, &zero, &params, &cfg) {
                Ok(c) => t.bound("relative error", c.relative_error, tol::ORACLE_REL, || "n=2 free channel k=0".into()),
                Err(e) => t.error("n=2 free channel k=0".into(), e),
            }
            format!("n=2 ground level {want:.15}")
        }
    };
    let secs = t.start.elapsed().as_secs_f64();
    t.check(secs < tol::SPECTRUM_SECONDS, || format!("runtime {secs:.1} s exceeds {} s", tol::SPECTRUM_SECONDS));
    t.finish(&format!("{} channels, {extra}", channels.len()))
}

/// ODE residuals and norm stability of the closed-form eigenfunctions.
pub fn eigenfunction_residuals(kinds: &[PotentialKind]) -> CriterionReport {
    let mut t = Tally::new(6, "eigenfunction residuals");
    let params = unit_params();
    let mut count = 0;
    for &kind in kinds {
        for (n, case, mk, co) in reducible_channels(&SPECTRUM_DIMS, 2) {
            for k in levels(kind) {
                let ctx = || format!("{kind} n={n} case {case} m_k={mk} k={k}");
                let f = match radial_eigenfunction(kind, k, n, &co, &params) {
                    Ok(f) => f,
                    Err(e) => {
                        t.error(ctx(), e);
                        continue;
                    }
                };
                count += 1;
                match f.residual(&f.default_points(tol::RESIDUAL_POINTS)) {
                    Ok(r) => t.bound("ODE residual", r, tol::ODE_RESIDUAL, ctx),
                    Err(e) => t.error(ctx(), e),
                }
                match f.norm_check() {
                    Ok(nc) => {
                        t.check(nc.fine.is_finite() && nc.fine > 0.0, || format!("{}: norm {}", ctx(), nc.fine));
                        t.bound("norm refinement change", nc.relative_change, tol::NORM_REFINEMENT, ctx);
                    }
                    Err(e) => t.error(ctx(), e),
                }
            }
        }
    }
    t.finish(&format!("{count} eigenfunctions"))
}

const HEUN_ENERGIES: [f64; 5] = [-2.7, -0.4, 0.9, 2.1, 6.3];

fn heun_params_grid() -> Vec<PhysicalParams> {
    vec![unit_params(), PhysicalParams::with_reduced_mass(0.7, 1.3, 0.8).expect("valid"), PhysicalParams::with_reduced_mass(1.6, 0.6, 2.2).expect("valid")]
}

/// Heun parameters, the reduction identities and Maier's classification.
pub fn heun_pipeline(kinds: &[PotentialKind]) -> CriterionReport {
    let mut t = Tally::new(7, "Heun pipeline");
    let mut reduced = 0;
    let mut obstructed = 0;
    for &kind in kinds {
        for n in 2..=6usize {
            for case in 1..=case_count(n) {
                for mk in 0..=3 {
                    let Ok(co) = radial_coefficients(n, case, mk) else { continue };
                    for params in heun_params_grid() {
                        if co.check_masses(&params).is_err() {
                            continue;
                        }
                        for e in HEUN_ENERGIES {
                            let ctx = || format!("{kind} n={n} case {case} m_k={mk} E={e}");
                            heun_point(&mut t, kind, n, &co, &params, e, ctx, &mut reduced, &mut obstructed);
                        }
                    }
                }
            }
        }
    }
    t.finish(&format!("{reduced} reductions, {obstructed} obstructed channels"))
}

#[allow(clippy::too_many_arguments)]
fn heun_point(
    t: &mut Tally,
    kind: PotentialKind,
    n: usize,
    co: &RadialCoefficients,
    params: &PhysicalParams,
    e: f64,
    ctx: impl Fn() -> String,
    reduced: &mut usize,
    obstructed: &mut usize,
) {
    let h = to_heun(kind, n, co, params, e);
    t.bound("Heun constraint", h.constraint_residual(), tol::HEUN_CONSTRAINT, &ctx);
    let scale = 1.0 + h.alpha.norm() * h.beta.norm();
    t.bound("construction residual", fuchsian::heun_construction_residual(kind, n, co, params, e), tol::HEUN_IDENTITY, &ctx);
    let report = match maier_classify(&h) {
        Ok(r) => r,
        Err(err) => {
            t.error(ctx(), err);
            return;
        }
    };
    if !co.symmetric() {
        *obstructed += 1;
        t.check(report.case.is_none(), || format!("{}: a ≠ c classified as case {:?}", ctx(), report.case.map(|c| c.number())));
        return;
    }
    match kind {
        PotentialKind::Coulomb => {
            t.bound("q - αβ", (h.q - h.alpha * h.beta).norm() / scale, tol::HEUN_IDENTITY, &ctx);
            t.bound("γ - ε", (h.gamma - h.epsilon).norm(), tol::HEUN_IDENTITY, &ctx);
        }
        PotentialKind::Oscillator => {
            let ex = oscillator_exponents(n, co, params, e);
            let (r0, r1, rf) = (ex.singular_points[0].exponents.0, ex.singular_points[1].exponents.0, ex.singular_points[5].exponents.0);
            let dev = (h.alpha * h.beta - h.q - r1 * (rf - r0)).norm() / scale;
            t.bound("αβ - q - ρ₁(ρ∞ - ρ₀)", dev, tol::HEUN_IDENTITY, &ctx);
        }
    }
    t.check(report.case == Some(MaierCase::One), || format!("{}: a = c not in case 1 ({:?})", ctx(), report.case.map(|c| c.number())));
    match reduce_case1(&h) {
        Ok(g) => {
            *reduced += 1;
            t.bound("pullback residual", pullback_residual(&h, &g, &report.polynomial), tol::PULLBACK, &ctx);
        }
        Err(err) => t.error(ctx(), err),
    }
}

fn gauss_param_sets() -> Vec<(C, C, C)> {
    vec![
        (C::new(0.3, 0.1), C::new(-0.45, 0.0), C::new(1.35, 0.0)),
        (C::new(0.7, -0.2), C::new(-1.3, 0.0), C::new(0.45, 0.0)),
        (C::new(1.25, 0.0), C::new(0.6, 0.0), C::new(2.1, 0.0)),
        (C::new(0.5, 0.8), C::new(0.5, -0.8), C::new(1.7, 0.0)),
        (C::new(-0.35, 0.0), C::new(2.2, 0.4), C::new(0.8, 0.3)),
        (C::new(1.9, 0.0), C::new(1.1, 0.0), C::new(2.55, 0.0)),
    ]
}

/// `|f(x) - g(x)|` relative to `|g(x)|`.
fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Residual of the Gauss equation from seven-point differences, with the
/// step scaled to the distance from the singular points.
pub fn gauss_equation_residual(a: C, b: C, g: C, z: C) -> Result<f64> {
    let h = 0.02 * z.norm().min((1.0 - z).norm()).min(0.5);
    let mut v = Vec::with_capacity(7);
    for j in -3..=3 {
        v.push(gauss_2f1(&GaussParams::new(a, b, g, z + h * j as f64))?);
    }
    let d1 = (v[6] - v[0] - 9.0 * (v[5] - v[1]) + 45.0 * (v[4] - v[2])) / (60.0 * h);
    let d2 = (2.0 * (v[6] + v[0]) - 27.0 * (v[5] + v[1]) + 270.0 * (v[4] + v[2]) - 490.0 * v[3]) / (180.0 * h * h);
    let t1 = z * (1.0 - z) * d2;
    let t2 = (g - (a + b + 1.0) * z) * d1;
    let t3 = a * b * v[3];
    Ok((t1 + t2 - t3).norm() / (t1.norm() + t2.norm() + t3.norm()))
}

/// Series against connection formula, the limit at `z = 1`, and the Gauss equation.
pub fn hypergeometric_kernel() -> CriterionReport {
    let mut t = Tally::new(8, "hypergeometric kernel");
    // overlap band: |z| <= 0.75 and |1 - z| <= 0.75
    let band: Vec<C> = (0..12)
        .flat_map(|i| (0..5).map(move |j| C::new(0.3 + 0.04 * i as f64, -0.4 + 0.2 * j as f64)))
        .filter(|z| z.norm() <= 0.75 && (1.0 - z).norm() <= 0.75)
        .collect();
    for (a, b, g) in gauss_param_sets() {
        for &z in &band {
            let p = GaussParams::new(a, b, g, z);
            let ctx = || format!("F({a}, {b}; {g}; {z})");
            match (gauss_series(&p), gauss_connection(&p)) {
                (Ok(s), Ok(c)) => t.bound("series vs connection", rel(c, s), tol::DUAL_PATH, ctx),
                (Err(e), _) | (_, Err(e)) => t.error(ctx(), e),
            }
        }
        for z in [C::new(0.3, 0.2), C::new(0.8, 0.4), C::new(-2.0, 0.7), C::new(1.2, 0.6), C::new(0.95, -0.1), C::new(-0.6, -0.3)] {
            match gauss_equation_residual(a, b, g, z) {
                Ok(r) => t.bound("Gauss residual", r, tol::GAUSS_RESIDUAL, || format!("F({a}, {b}; {g}; {z})")),
                Err(e) => t.error(format!("F({a}, {b}; {g}; {z})"), e),
            }
        }
    }
    // Re(γ - α - β) < -1: corrections are O(ε) and O(ε^{α+β-γ}), removed by one Richardson step
    let limit_sets = [
        (C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.5, 0.0)),
        (C::new(0.8, 0.3), C::new(1.1, 0.0), C::new(0.4, 0.3)),
        (C::new(1.6, 0.0), C::new(1.2, -0.2), C::new(0.55, -0.2)),
        (C::new(2.3, 0.1), C::new(0.9, 0.0), C::new(0.9, 0.1)),
    ];
    for (a, b, g) in limit_sets {
        let ctx = || format!("limit of F({a}, {b}; {g}; z)");
        let s = a + b - g;
        let scaled = |eps: f64| gauss_2f1(&GaussParams::new(a, b, g, C::new(1.0 - eps, 0.0))).map(|f| f * C::new(eps, 0.0).powc(s));
        match (scaled(1e-5), scaled(1e-6), limit_near_one(a, b, g)) {
            (Ok(f5), Ok(f6), Ok(lim)) => {
                let extrapolated = (10.0 * f6 - f5) / 9.0;
                t.bound("limit deviation", rel(extrapolated, lim), tol::LIMIT, ctx);
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => t.error(ctx(), e),
        }
    }
    t.finish(&format!("{} band points per parameter set", band.len()))
}

/// Fuchs relation over random channels, parameters and energies.
pub fn fuchs_identities(kinds: &[PotentialKind], seed: u64) -> CriterionReport {
    let mut t = Tally::new(9, "Fuchs identities");
    let mut rng = StdRng::seed_from_u64(seed);
    let q = |x: f64| BigRational::from_float(x).expect("finite");
    for &kind in kinds {
        for _ in 0..tol::FUCHS_DRAWS {
            let n = rng.random_range(2..=9usize);
            let (a, b, c) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
            let co = RadialCoefficients::custom(q(a), q(b), q(c), n);
            let params =
                match PhysicalParams::new(rng.random_range(0.1..4.0), rng.random_range(0.1..4.0), rng.random_range(0.2..3.0), rng.random_range(0.01..3.0)) {
                    Ok(p) => p,
                    Err(e) => {
                        t.error("random parameters".into(), e);
                        continue;
                    }
                };
            let e = rng.random_range(-20.0..20.0);
            let (eq, want) = match kind {
                PotentialKind::Coulomb => (coulomb_exponents(n, &co, &params, e), 2.0),
                PotentialKind::Oscillator => (oscillator_exponents(n, &co, &params, e), 4.0),
            };
            let ctx = || format!("{kind} n={n} a={a} b={b} c={c} E={e}");
            t.check(eq.fuchs_expected() == want, || format!("{}: expected sum {} instead of {want}", ctx(), eq.fuchs_expected()));
            t.bound("exponent sum defect", (eq.exponent_sum() - want).norm(), tol::FUCHS, ctx);
        }
    }
    t.finish(&format!("{} draws per potential, seed {seed}", tol::FUCHS_DRAWS))
}

pub const FUCHS_SEED: u64 = 0x5EED_F0C5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ladder,
    Branching,
    Coulomb,
    Oscillator,
    Hyperfun,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ladder" => Suite::Ladder,
            "branching" => Suite::Branching,
            "coulomb" => Suite::Coulomb,
            "oscillator" => Suite::Oscillator,
            "hyperfun" => Suite::Hyperfun,
            "all" => Suite::All,
            other => return invalid(format!("unknown suite '{other}' (ladder, branching, coulomb, oscillator, hyperfun, all)")),
        })
    }
}

/// Runs one criterion by number with both potentials.
pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    use PotentialKind::*;
    Ok(match id {
        1 => structure_relations(),
        2 => classification_vs_brute_force(),
        3 => branching_consistency(),
        4 => spectrum_vs_oracle(Coulomb),
        5 => spectrum_vs_oracle(Oscillator),
        6 => eigenfunction_residuals(&[Coulomb, Oscillator]),
        7 => heun_pipeline(&[Coulomb, Oscillator]),
        8 => hypergeometric_kernel(),
        9 => fuchs_identities(&[Coulomb, Oscillator], FUCHS_SEED),
        _ => return invalid(format!("criteria are numbered 1..9, got {id}")),
    })
}

/// Runs a suite; the potential suites include the eigenfunction, Heun and Fuchs checks for that potential.
pub fn run_suite(suite: Suite) -> Vec<CriterionReport> {
    use PotentialKind::*;
    match suite {
        Suite::Ladder => vec![structure_relations(), classification_vs_brute_force()],
        Suite::Branching => vec![branching_consistency()],
        Suite::Coulomb | Suite::Oscillator => {
            let kind = if suite == Suite::Coulomb { Coulomb } else { Oscillator };
            vec![spectrum_vs_oracle(kind), eigenfunction_residuals(&[kind]), heun_pipeline(&[kind]), fuchs_identities(&[kind], FUCHS_SEED)]
        }
        Suite::Hyperfun => vec![hypergeometric_kernel()],
        Suite::All => (1..=9).map(|id| run_criterion(id).expect("ids 1..9 exist")).collect(),
    }
}
