//! Closed-form energy levels, multiplicities and radial eigenfunctions for the
//! reducible channels (`a = c`), and the numeric fallback for the others.

use crate::error::{invalid, Error, Result};
use crate::liealg::{weyl_dim, AlgebraLabel, HighestWeight, Series};
use crate::oracle::{self, Jet, RadialProblem, ShootingConfig};
use crate::radial::{circle_carrier, radial_coefficients, spectral_ode, PhysicalParams, PotentialKind, Provenance, RadialCoefficients, SpectralOde};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Relative tolerance for the branch-independence checks.
pub const BRANCH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelSource {
    Formula,
    NumericOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyLevel {
    pub k: u32,
    pub energy: f64,
    pub multiplicity: BigInt,
    /// The opposite branch of `s` reproduces the level and the eigenfunction.
    pub branch_check: bool,
    pub branch_deviation: f64,
    pub source: LevelSource,
}

/// Carrier module of a channel with its dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Carrier {
    pub algebra: AlgebraLabel,
    /// Highest weights whose modules carry the level (two for `D_2` with `m₁ ≠ 0`).
    pub weights: Vec<HighestWeight>,
    pub dim: BigInt,
}

impl Carrier {
    pub fn describe(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        format!("{} {}", self.algebra, ws.join(" + "))
    }
}

/// Offset `m_k - m_{k-1}` of the carrier for each channel of `n >= 3`.
fn carrier_offset(case_id: u8) -> Result<i64> {
    match case_id {
        1 => Ok(0),
        2 | 3 => Ok(1),
        4 => Ok(2),
        _ => invalid(format!("channels for n >= 3 are 1..4, got {case_id}")),
    }
}

pub fn carrier(prov: &Provenance) -> Result<Carrier> {
    if prov.case_id == 0 {
        return invalid("custom coefficients carry no representation, so no multiplicity");
    }
    let alg = AlgebraLabel::for_sphere(prov.n)?;
    if prov.n == 2 {
        let m = circle_carrier(prov.case_id).ok_or_else(|| Error::Validation(format!("n=2 has channels 1..8, got {}", prov.case_id)))?;
        return Ok(Carrier { algebra: alg, weights: vec![HighestWeight::new(vec![m])], dim: BigInt::from(2 * m + 1) });
    }
    let m1 = prov.m_k - carrier_offset(prov.case_id)?;
    let mut weights = vec![HighestWeight::two_row(alg.rank, prov.m_k, m1)];
    if alg.series == Series::D && alg.rank == 2 && m1 != 0 {
        weights.push(HighestWeight::two_row(2, prov.m_k, -m1));
    }
    let mut dim = BigInt::from(0);
    for w in &weights {
        dim += weyl_dim(alg, w)?;
    }
    Ok(Carrier { algebra: alg, weights, dim })
}

fn require_reducible(coeffs: &RadialCoefficients) -> Result<()> {
    if !coeffs.symmetric() {
        return invalid(format!(
            "channel n={} case {} is not reducible: a={} differs from c={}, so only numeric levels exist",
            coeffs.provenance.n, coeffs.provenance.case_id, coeffs.a, coeffs.c
        ));
    }
    Ok(())
}

fn s0(n: usize, a: f64) -> f64 {
    ((n as f64 - 2.0).powi(2) + 32.0 * a).sqrt()
}

fn scale(params: &PhysicalParams) -> (f64, f64, f64) {
    (params.reduced_mass(), params.radius, params.coupling)
}

/// Coulomb `E_k` from the closed form, `k >= 1`.
pub fn coulomb_energy_value(k: u32, n: usize, a: f64, b: f64, params: &PhysicalParams) -> f64 {
    let (m, r, g) = scale(params);
    let (kf, nf, sq) = (k as f64, n as f64, s0(n, a));
    (0.5 * (kf * kf - kf + 1.0) - nf / 4.0 + 2.0 * a + b + (2.0 * kf - 1.0) / 4.0 * sq) / (m * r * r) - 2.0 * m * g * g / (sq + 2.0 * kf - 1.0).powi(2)
}

/// Oscillator `E_k` from the closed form, `k >= 0`.
pub fn oscillator_energy_value(k: u32, n: usize, a: f64, b: f64, params: &PhysicalParams) -> f64 {
    let (m, r, w) = scale(params);
    let x = 4.0 * k as f64 + 2.0 + s0(n, a);
    let nf = n as f64;
    let ww = (1.0 + 4.0 * r.powi(4) * m * w * w).sqrt();
    (x * x - (nf - 1.0).powi(2) - 16.0 * a + 8.0 * b + 1.0) / (8.0 * m * r * r) + x * ww / (4.0 * m * r * r)
}

/// The quantized `s` of the Coulomb reduction, branch `Re s < 0`.
fn coulomb_s(k: u32, n: usize, a: f64, params: &PhysicalParams) -> C {
    let (m, r, g) = scale(params);
    let x = 1.0 - 2.0 * k as f64 - s0(n, a);
    C::new(x, 4.0 * m * r * g / x)
}

/// The quantized `s` of the oscillator reduction (`β̃ = -k`).
fn oscillator_s(k: u32, n: usize, a: f64, params: &PhysicalParams) -> C {
    let (m, r, w) = scale(params);
    re(4.0 * k as f64 + 2.0 + s0(n, a) + (1.0 + 4.0 * r.powi(4) * m * w * w).sqrt())
}

/// Energy recovered from the definition of `s`, for either branch.
fn energy_from_s(kind: PotentialKind, s: C, n: usize, a: f64, b: f64, params: &PhysicalParams) -> C {
    let (m, r, g) = scale(params);
    let nf = n as f64;
    match kind {
        PotentialKind::Coulomb => (s * s - (nf - 1.0).powi(2) - 16.0 * a + 8.0 * b - I * 8.0 * m * r * g) / (8.0 * m * r * r),
        PotentialKind::Oscillator => (s * s - (nf - 1.0).powi(2) - 4.0 * m * r.powi(4) * g * g - 16.0 * a + 8.0 * b) / (8.0 * m * r * r),
    }
}

/// Lowest level index: `k = 1` for Coulomb, `k = 0` for the oscillator.
pub fn first_k(kind: PotentialKind) -> u32 {
    match kind {
        PotentialKind::Coulomb => 1,
        PotentialKind::Oscillator => 0,
    }
}

fn check_k(kind: PotentialKind, k: u32) -> Result<()> {
    if k < first_k(kind) {
        return invalid(format!("{kind} levels start at k={}, got k={k}", first_k(kind)));
    }
    Ok(())
}

fn closed_form_level(kind: PotentialKind, k: u32, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams) -> Result<EnergyLevel> {
    require_reducible(coeffs)?;
    coeffs.check_masses(params)?;
    check_k(kind, k)?;
    let (a, b) = (coeffs.a_f64(), coeffs.b_f64());
    let (energy, s) = match kind {
        PotentialKind::Coulomb => (coulomb_energy_value(k, n, a, b, params), coulomb_s(k, n, a, params)),
        PotentialKind::Oscillator => (oscillator_energy_value(k, n, a, b, params), oscillator_s(k, n, a, params)),
    };
    let mut dev: f64 = 0.0;
    for branch in [s, -s] {
        let e = energy_from_s(kind, branch, n, a, b, params);
        dev = dev.max((e.re - energy).abs() / energy.abs().max(f64::MIN_POSITIVE)).max(e.im.abs() / energy.abs().max(1.0));
    }
    let f = radial_eigenfunction(kind, k, n, coeffs, params)?;
    dev = dev.max(f.branch_deviation(&f.default_points(25))?);
    Ok(EnergyLevel {
        k,
        energy,
        multiplicity: carrier(&coeffs.provenance)?.dim,
        branch_check: dev <= BRANCH_TOL,
        branch_deviation: dev,
        source: LevelSource::Formula,
    })
}

pub fn coulomb_energy(k: u32, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams) -> Result<EnergyLevel> {
    closed_form_level(PotentialKind::Coulomb, k, n, coeffs, params)
}

pub fn oscillator_energy(k: u32, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams) -> Result<EnergyLevel> {
    closed_form_level(PotentialKind::Oscillator, k, n, coeffs, params)
}

/// Closed-form `f_k`: prefactor times a terminating hypergeometric sum in
/// `z = 4ir/(r+i)²` (Coulomb) or `z = 4r²/(r²+1)²` (oscillator).
#[derive(Clone, Debug)]
pub struct RadialEigenfunction {
    pub kind: PotentialKind,
    pub n: usize,
    pub k: u32,
    pub energy: f64,
    /// `ρ⁽⁰⁾₊`
    pub rho_zero: f64,
    /// `ρ⁽ⁱ⁾₊` (Coulomb) or `ρ⁽¹⁾₊` (oscillator).
    pub rho_mid: C,
    /// `ρ⁽∞⁾₊`
    pub rho_inf: f64,
    pub alpha_t: C,
    pub beta_t: C,
    pub gamma_t: C,
    /// Coefficients of `zʲ` in the finite sum.
    pub coefficients: Vec<C>,
    s: C,
    ode: SpectralOde,
}

fn factorial(j: u32) -> f64 {
    (1..=j).map(f64::from).product()
}

fn pochhammer(a: C, j: usize) -> C {
    crate::hyperfun::pochhammer(a, j)
}

pub fn radial_eigenfunction(kind: PotentialKind, k: u32, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams) -> Result<RadialEigenfunction> {
    require_reducible(coeffs)?;
    coeffs.check_masses(params)?;
    check_k(kind, k)?;
    let (a, b) = (coeffs.a_f64(), coeffs.b_f64());
    let nf = n as f64;
    let sq = s0(n, a);
    let rho_zero = 0.5 * (2.0 - nf + sq);
    match kind {
        PotentialKind::Coulomb => {
            let s = coulomb_s(k, n, a, params);
            let energy = coulomb_energy_value(k, n, a, b, params);
            let alpha_t = 0.5 + 0.5 * sq + 0.25 * (s + s.conj());
            let beta_t = 0.5 + 0.5 * sq + 0.25 * (s.conj() - s);
            let gamma_t = re(1.0 + sq);
            let coefficients = (0..k)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign / (factorial(j) * factorial(k - 1 - j)) * pochhammer(beta_t, j as usize) / pochhammer(gamma_t, j as usize)
                })
                .collect();
            Ok(RadialEigenfunction {
                kind,
                n,
                k,
                energy,
                rho_zero,
                rho_mid: 0.5 * (nf - 1.0 + s.conj()),
                rho_inf: rho_zero,
                alpha_t,
                beta_t,
                gamma_t,
                coefficients,
                s,
                ode: spectral_ode(n, coeffs, params, kind, energy),
            })
        }
        PotentialKind::Oscillator => {
            let (m, r, w) = scale(params);
            let ww = (1.0 + 4.0 * r.powi(4) * m * w * w).sqrt();
            let s = oscillator_s(k, n, a, params);
            let energy = oscillator_energy_value(k, n, a, b, params);
            let alpha_t = 0.25 * (2.0 + sq + ww + s);
            let beta_t = 0.25 * (2.0 + sq + ww - s);
            let gamma_t = re(1.0 + 0.5 * sq);
            let coefficients = (0..=k)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign / (factorial(j) * factorial(k - j)) * pochhammer(alpha_t, j as usize) / pochhammer(gamma_t, j as usize)
                })
                .collect();
            Ok(RadialEigenfunction {
                kind,
                n,
                k,
                energy,
                rho_zero,
                rho_mid: re(0.5 * (1.0 + ww)),
                rho_inf: rho_zero,
                alpha_t,
                beta_t,
                gamma_t,
                coefficients,
                s,
                ode: spectral_ode(n, coeffs, params, kind, energy),
            })
        }
    }
}

fn horner(coeffs: &[C], z: Jet) -> Jet {
    coeffs.iter().rev().fold(Jet::constant(re(0.0)), |acc, c| acc * z + *c)
}

impl RadialEigenfunction {
    pub fn ode(&self) -> &SpectralOde {
        &self.ode
    }

    fn check_point(&self, r: f64) -> Result<()> {
        if !(r > 0.0 && r < self.ode.r_max()) {
            return invalid(format!("f_k is evaluated on the open interval (0, {}), got r = {r}", self.ode.r_max()));
        }
        Ok(())
    }

    /// `z` as a jet in `r`.
    fn z_jet(&self, x: Jet) -> Jet {
        match self.kind {
            PotentialKind::Coulomb => {
                let d = x + I;
                x * (4.0 * I) / (d * d)
            }
            PotentialKind::Oscillator => {
                let d = x * x + re(1.0);
                x * x * 4.0 / (d * d)
            }
        }
    }

    /// Value with first and second `r`-derivatives.
    pub fn jet(&self, r: f64) -> Result<Jet> {
        self.check_point(r)?;
        let x = Jet::var_real(r);
        let z = self.z_jet(x);
        let sum = horner(&self.coefficients, z);
        let pre = match self.kind {
            PotentialKind::Coulomb => {
                let total = self.rho_zero + self.rho_mid + self.rho_inf;
                x.powc(re(self.rho_zero)) * (x - I).powc(self.rho_mid) * (x + I).powc(-total)
            }
            PotentialKind::Oscillator => {
                let total = 0.5 * self.rho_zero + self.rho_mid + 0.5 * self.rho_inf;
                let one = Jet::constant(re(1.0));
                x.powc(re(self.rho_zero)) * (one - x * x).powc(self.rho_mid) * (x * x + re(1.0)).powc(-total)
            }
        };
        Ok(pre * sum)
    }

    pub fn value(&self, r: f64) -> Result<C> {
        self.jet(r).map(|j| j.v)
    }

    /// The same eigenfunction assembled from the opposite branch `-s`.
    ///
    /// Coulomb: exponents at `±i` swap and the sum comes back through Euler's
    /// transformation with `1 - z = ((r-i)/(r+i))²`. Oscillator: `α̃` and `β̃` swap.
    /// The result is a constant multiple of [`Self::jet`].
    pub fn alternative_jet(&self, r: f64) -> Result<Jet> {
        self.check_point(r)?;
        let nf = self.n as f64;
        let sq = 2.0 * self.rho_zero + nf - 2.0;
        let sp = -self.s;
        let x = Jet::var_real(r);
        let z = self.z_jet(x);
        let series = |a: C, b: C, c: C, terms: usize| -> Vec<C> {
            (0..terms).map(|j| pochhammer(a, j) * pochhammer(b, j) / (pochhammer(c, j) * factorial(j as u32))).collect()
        };
        match self.kind {
            PotentialKind::Coulomb => {
                let alpha = 0.5 + 0.5 * sq + 0.25 * (sp + sp.conj());
                let beta = 0.5 + 0.5 * sq + 0.25 * (sp.conj() - sp);
                let gamma = self.gamma_t;
                let rho_mid = 0.5 * (nf - 1.0 + sp.conj());
                let total = self.rho_zero + rho_mid + self.rho_inf;
                let (lm, lp) = ((x - I).ln(), (x + I).ln());
                let euler = ((lm - lp) * (2.0 * (gamma - alpha - beta))).exp();
                let pre = x.powc(re(self.rho_zero)) * (lm * rho_mid - lp * total).exp();
                let sum = horner(&series(gamma - alpha, gamma - beta, gamma, self.k as usize), z);
                Ok(pre * euler * sum)
            }
            PotentialKind::Oscillator => {
                let ww = 2.0 * self.rho_mid - 1.0;
                let alpha = 0.25 * (2.0 + sq + ww + sp);
                let beta = 0.25 * (2.0 + sq + ww - sp);
                let total = 0.5 * self.rho_zero + self.rho_mid + 0.5 * self.rho_inf;
                let one = Jet::constant(re(1.0));
                let pre = x.powc(re(self.rho_zero)) * (one - x * x).powc(self.rho_mid) * (x * x + re(1.0)).powc(-total);
                let sum = horner(&series(alpha, beta, self.gamma_t, self.k as usize + 1), z);
                Ok(pre * sum)
            }
        }
    }

    /// Interior points spread over the physical interval in `θ = 2 arctan r`.
    pub fn default_points(&self, count: usize) -> Vec<f64> {
        let top = match self.kind {
            PotentialKind::Coulomb => std::f64::consts::PI,
            PotentialKind::Oscillator => std::f64::consts::FRAC_PI_2,
        };
        (1..=count).map(|i| (0.5 * top * i as f64 / (count + 1) as f64).tan()).collect()
    }

    /// `max |f_alt - c f| / max |f|` with `c` fitted at the largest `|f|`.
    pub fn branch_deviation(&self, points: &[f64]) -> Result<f64> {
        let mut pairs = Vec::with_capacity(points.len());
        for &r in points {
            pairs.push((self.value(r)?, self.alternative_jet(r)?.v));
        }
        let (fmax, amax) =
            pairs.iter().copied().max_by(|x, y| x.0.norm().total_cmp(&y.0.norm())).ok_or_else(|| Error::Validation("no sample points".into()))?;
        if fmax.norm() == 0.0 {
            return Err(Error::Numeric("eigenfunction vanishes on all sample points".into()));
        }
        let c = amax / fmax;
        Ok(pairs.iter().map(|(f, g)| (g - c * f).norm()).fold(0.0, f64::max) / (c.norm() * fmax.norm()))
    }

    pub fn residual(&self, points: &[f64]) -> Result<f64> {
        oracle::ode_residual(|r| self.jet(r), &self.ode, points)
    }

    pub fn norm_check(&self) -> Result<oracle::NormCheck> {
        oracle::norm_refinement(self.kind, self.n, |r| self.value(r))
    }
}

/// Agreement of a closed-form level with the shooting oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleCheck {
    pub formula: f64,
    pub shooting: Option<f64>,
    pub relative_error: f64,
    /// Roots of the matching Wronskian in the scanned bracket.
    pub roots_in_bracket: usize,
    pub nodes: usize,
    pub bracket: (f64, f64),
}

impl OracleCheck {
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.shooting.is_some() && self.roots_in_bracket == 1 && self.relative_error <= rel_tol
    }
}

/// Expected interior zeros of `f_k`.
pub fn expected_nodes(kind: PotentialKind, k: u32) -> usize {
    (k - first_k(kind)) as usize
}

/// Shoots inside a bracket reaching 40% of the way to the neighbouring closed-form levels.
pub fn oracle_check(kind: PotentialKind, k: u32, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, cfg: &ShootingConfig) -> Result<OracleCheck> {
    let level = closed_form_level(kind, k, n, coeffs, params)?;
    let (a, b) = (coeffs.a_f64(), coeffs.b_f64());
    let value = |j: u32| match kind {
        PotentialKind::Coulomb => coulomb_energy_value(j, n, a, b, params),
        PotentialKind::Oscillator => oscillator_energy_value(j, n, a, b, params),
    };
    let e = level.energy;
    let up = value(k + 1) - e;
    let down = if k > first_k(kind) { e - value(k - 1) } else { up };
    let bracket = (e - 0.4 * down, e + 0.4 * up);
    let prob = RadialProblem::new(kind, n, coeffs, params)?;
    let found = oracle::shooting_eigenvalue(&prob, bracket, cfg)?;
    Ok(match found {
        Some(r) => OracleCheck {
            formula: e,
            shooting: Some(r.energy),
            relative_error: (r.energy - e).abs() / e.abs(),
            roots_in_bracket: r.sign_changes,
            nodes: r.nodes,
            bracket,
        },
        None => OracleCheck { formula: e, shooting: None, relative_error: f64::INFINITY, roots_in_bracket: 0, nodes: 0, bracket },
    })
}

/// Level of a channel without a closed form, located by node count.
pub fn numeric_level(kind: PotentialKind, k: u32, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, cfg: &ShootingConfig) -> Result<EnergyLevel> {
    check_k(kind, k)?;
    let prob = RadialProblem::new(kind, n, coeffs, params)?;
    let r = oracle::eigenvalue_by_nodes(&prob, expected_nodes(kind, k), cfg)?;
    Ok(EnergyLevel {
        k,
        energy: r.energy,
        multiplicity: carrier(&coeffs.provenance)?.dim,
        branch_check: false,
        branch_deviation: f64::NAN,
        source: LevelSource::NumericOnly,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumLevel {
    pub level: EnergyLevel,
    /// Shooting agreement for closed-form levels; `None` for numeric-only ones.
    pub oracle: Option<OracleCheck>,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub kind: PotentialKind,
    pub n: usize,
    pub coeffs: RadialCoefficients,
    pub params: PhysicalParams,
    pub carrier: Carrier,
    pub reducible: bool,
    pub levels: Vec<SpectrumLevel>,
    pub eigenfunctions: Vec<RadialEigenfunction>,
}

/// Relative tolerance for formula/oracle agreement.
pub const ORACLE_REL_TOL: f64 = 1e-6;

/// Levels `k_range` of one channel, each checked against the shooting oracle.
pub fn spectrum(
    kind: PotentialKind,
    n: usize,
    case_id: u8,
    m_k: i64,
    params: &PhysicalParams,
    k_range: std::ops::RangeInclusive<u32>,
    cfg: &ShootingConfig,
) -> Result<Spectrum> {
    let coeffs = radial_coefficients(n, case_id, m_k)?;
    coeffs.check_masses(params)?;
    if k_range.is_empty() {
        return invalid(format!("empty level range {}..={}", k_range.start(), k_range.end()));
    }
    check_k(kind, *k_range.start())?;
    let carrier = carrier(&coeffs.provenance)?;
    let reducible = coeffs.symmetric();
    let mut levels = Vec::new();
    let mut eigenfunctions = Vec::new();
    for k in k_range {
        if reducible {
            let level = closed_form_level(kind, k, n, &coeffs, params)?;
            let check = oracle_check(kind, k, n, &coeffs, params, cfg)?;
            let verified = level.branch_check && check.passes(ORACLE_REL_TOL) && check.nodes == expected_nodes(kind, k);
            levels.push(SpectrumLevel { level, oracle: Some(check), verified });
            eigenfunctions.push(radial_eigenfunction(kind, k, n, &coeffs, params)?);
        } else {
            let level = numeric_level(kind, k, n, &coeffs, params, cfg)?;
            levels.push(SpectrumLevel { level, oracle: None, verified: false });
        }
    }
    Ok(Spectrum { kind, n, coeffs, params: *params, carrier, reducible, levels, eigenfunctions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalParams {
        PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn coulomb_three_sphere_values() {
        let co = radial_coefficients(3, 1, 0).unwrap();
        let l = coulomb_energy(2, 3, &co, &unit()).unwrap();
        assert!((l.energy - 1.375).abs() < 1e-14);
        assert!(l.branch_check, "{}", l.branch_deviation);
        assert_eq!(l.multiplicity, BigInt::from(1));
        assert!((coulomb_energy(1, 3, &co, &unit()).unwrap().energy + 0.5).abs() < 1e-14);
        assert!(coulomb_energy(0, 3, &co, &unit()).is_err());
    }

    #[test]
    fn oscillator_circle_ground_level() {
        let co = radial_coefficients(2, 1, 0).unwrap();
        let l = oscillator_energy(0, 2, &co, &unit()).unwrap();
        assert!((l.energy - (0.5 + 5f64.sqrt() / 2.0)).abs() < 1e-14);
        assert_eq!(l.multiplicity, BigInt::from(1));
    }

    #[test]
    fn irreducible_channel_is_rejected() {
        let co = radial_coefficients(4, 2, 1).unwrap();
        let err = coulomb_energy(1, 4, &co, &unit()).unwrap_err();
        assert!(err.to_string().contains("not reducible"));
    }

    #[test]
    fn eigenfunctions_solve_the_equation() {
        let p = PhysicalParams::with_reduced_mass(0.8, 1.3, 0.7).unwrap();
        for (n, case, mk) in [(3usize, 1u8, 1i64), (4, 4, 2), (2, 5, 2)] {
            let co = radial_coefficients(n, case, mk).unwrap();
            for kind in [PotentialKind::Coulomb, PotentialKind::Oscillator] {
                for k in first_k(kind)..first_k(kind) + 3 {
                    let f = radial_eigenfunction(kind, k, n, &co, &p).unwrap();
                    let res = f.residual(&f.default_points(100)).unwrap();
                    assert!(res < 1e-9, "{kind} n={n} case {case} k={k}: {res}");
                    let dev = f.branch_deviation(&f.default_points(25)).unwrap();
                    assert!(dev < BRANCH_TOL, "{kind} n={n} k={k}: {dev}");
                }
            }
        }
    }

    #[test]
    fn multiplicities_follow_the_carrier() {
        // n = 5: D_3 with (0, 0, 2) in case 4
        let c = carrier(&radial_coefficients(5, 4, 2).unwrap().provenance).unwrap();
        assert_eq!(c.weights, vec![HighestWeight::new(vec![0, 0, 2])]);
        assert_eq!(c.dim, weyl_dim(AlgebraLabel::new(Series::D, 3).unwrap(), &HighestWeight::new(vec![0, 0, 2])).unwrap());
        // D_2 sums both signs of m_1; so(4) = su(2) + su(2) gives spins ((m_2 ± m_1)/2),
        // so (2, ±2) contributes 5·1 twice
        let c = carrier(&radial_coefficients(3, 1, 2).unwrap().provenance).unwrap();
        assert_eq!(c.weights.len(), 2);
        assert_eq!(c.dim, BigInt::from(10));
        let c = carrier(&radial_coefficients(2, 5, 2).unwrap().provenance).unwrap();
        assert_eq!(c.dim, BigInt::from(5));
    }

    #[test]
    fn shooting_confirms_closed_forms() {
        let cfg = ShootingConfig::default();
        let co = radial_coefficients(4, 1, 1).unwrap();
        for k in 1..=3 {
            let c = oracle_check(PotentialKind::Coulomb, k, 4, &co, &unit(), &cfg).unwrap();
            assert!(c.passes(ORACLE_REL_TOL), "{c:?}");
            assert_eq!(c.nodes, expected_nodes(PotentialKind::Coulomb, k));
        }
        for k in 0..=2 {
            let c = oracle_check(PotentialKind::Oscillator, k, 4, &co, &unit(), &cfg).unwrap();
            assert!(c.passes(ORACLE_REL_TOL), "{c:?}");
            assert_eq!(c.nodes, expected_nodes(PotentialKind::Oscillator, k));
        }
    }

    #[test]
    fn numeric_only_channel() {
        let s = spectrum(PotentialKind::Coulomb, 4, 2, 1, &unit(), 1..=2, &ShootingConfig::default()).unwrap();
        assert!(!s.reducible);
        assert!(s.levels.iter().all(|l| l.level.source == LevelSource::NumericOnly && !l.verified));
        assert!(s.levels[0].level.energy < s.levels[1].level.energy);
    }
}
