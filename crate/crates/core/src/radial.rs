//! The radial spectral problem `f'' + p f' + q f = 0` on `0 < r < ∞` (or
//! `0 < r < 1` for the oscillator), with `r = tan(ρ/2R)`.

use crate::error::{invalid, Error, Result};
use crate::exact::{q, to_f64, Q};
use crate::ladder::{EigenvectorRecord, MassMode};
use num_complex::Complex64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Coulomb,
    Oscillator,
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PotentialKind::Coulomb => "coulomb",
            PotentialKind::Oscillator => "oscillator",
        })
    }
}

impl std::str::FromStr for PotentialKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coulomb" => Ok(PotentialKind::Coulomb),
            "oscillator" => Ok(PotentialKind::Oscillator),
            other => invalid(format!("unknown potential kind '{other}' (expected coulomb or oscillator)")),
        }
    }
}

/// Masses, curvature radius and coupling (`γ` for Coulomb, `ω` for the oscillator).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m1: f64,
    pub m2: f64,
    pub radius: f64,
    pub coupling: f64,
}

impl PhysicalParams {
    pub fn new(m1: f64, m2: f64, radius: f64, coupling: f64) -> Result<Self> {
        for (name, v) in [("m1", m1), ("m2", m2), ("radius", radius), ("coupling", coupling)] {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("{name} must be a positive finite number, got {v}"));
            }
        }
        Ok(PhysicalParams { m1, m2, radius, coupling })
    }

    /// Equal masses `2m` each, so the reduced mass is `m`.
    pub fn with_reduced_mass(m: f64, radius: f64, coupling: f64) -> Result<Self> {
        Self::new(2.0 * m, 2.0 * m, radius, coupling)
    }

    pub fn reduced_mass(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }

    /// The mass-weighted angle split `α = m₂/(m₁+m₂)` that removes the mixed term.
    pub fn alpha(&self) -> f64 {
        self.m2 / (self.m1 + self.m2)
    }

    pub fn equal_masses(&self) -> bool {
        (self.m1 - self.m2).abs() <= 1e-12 * self.m1.max(self.m2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub n: usize,
    pub case_id: u8,
    pub m_k: i64,
    pub table: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialCoefficients {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub mass_mode: MassMode,
    pub provenance: Provenance,
}

impl RadialCoefficients {
    pub fn a_f64(&self) -> f64 {
        to_f64(&self.a)
    }
    pub fn b_f64(&self) -> f64 {
        to_f64(&self.b)
    }
    pub fn c_f64(&self) -> f64 {
        to_f64(&self.c)
    }
    pub fn symmetric(&self) -> bool {
        self.a == self.c
    }

    /// Ad hoc coefficients, for experiments outside the tables.
    pub fn custom(a: Q, b: Q, c: Q, n: usize) -> Self {
        RadialCoefficients { a, b, c, mass_mode: MassMode::Arbitrary, provenance: Provenance { n, case_id: 0, m_k: 0, table: "custom".into() } }
    }

    /// Rejects unequal masses for the equal-mass channels.
    pub fn check_masses(&self, params: &PhysicalParams) -> Result<()> {
        if self.mass_mode == MassMode::Equal && !params.equal_masses() {
            return invalid(format!("n={} case {} requires equal masses (got m1={}, m2={})", self.provenance.n, self.provenance.case_id, params.m1, params.m2));
        }
        Ok(())
    }
}

/// `(c₂ m² + (c₁ₖ k + c₁) m + c₀ₖ k + c₀) / den` for a table entry.
#[derive(Clone, Copy, Debug)]
struct Entry {
    m2: i64,
    m1: (i64, i64),
    m0: (i64, i64),
    den: i64,
}

const fn e(m2: i64, m1: (i64, i64), m0: (i64, i64), den: i64) -> Entry {
    Entry { m2, m1, m0, den }
}

impl Entry {
    fn eval(&self, k: i64, m: i64) -> Q {
        let num = self.m2 * m * m + (self.m1.0 * k + self.m1.1) * m + self.m0.0 * k + self.m0.1;
        Q::new(num.into(), self.den.into())
    }
}

struct Row {
    case_id: u8,
    a: Entry,
    b: Entry,
    c: Entry,
    m_min: i64,
    mode: MassMode,
}

use MassMode::{Arbitrary, Equal};

// n = 2k, k >= 2
const EVEN: [Row; 4] = [
    Row { case_id: 1, a: e(1, (2, -2), (0, 0), 8), b: e(2, (4, -4), (0, 0), 8), c: e(1, (2, -2), (0, 0), 8), m_min: 0, mode: Arbitrary },
    Row { case_id: 2, a: e(1, (2, -2), (0, 0), 8), b: e(2, (4, -6), (-2, 4), 8), c: e(1, (2, -4), (-2, 3), 8), m_min: 1, mode: Equal },
    Row { case_id: 3, a: e(1, (2, -4), (-2, 3), 8), b: e(2, (4, -6), (-2, 4), 8), c: e(1, (2, -2), (0, 0), 8), m_min: 1, mode: Equal },
    Row { case_id: 4, a: e(1, (2, -4), (-2, 3), 8), b: e(2, (4, -8), (-4, 10), 8), c: e(1, (2, -4), (-2, 3), 8), m_min: 2, mode: Equal },
];

// n = 2k-1, k >= 2
const ODD: [Row; 4] = [
    Row { case_id: 1, a: e(1, (2, -3), (0, 0), 8), b: e(2, (4, -6), (0, 0), 8), c: e(1, (2, -3), (0, 0), 8), m_min: 0, mode: Arbitrary },
    Row { case_id: 2, a: e(1, (2, -3), (0, 0), 8), b: e(2, (4, -8), (-2, 5), 8), c: e(1, (2, -5), (-2, 4), 8), m_min: 1, mode: Equal },
    Row { case_id: 3, a: e(1, (2, -5), (-2, 4), 8), b: e(2, (4, -8), (-2, 5), 8), c: e(1, (2, -3), (0, 0), 8), m_min: 1, mode: Equal },
    Row { case_id: 4, a: e(1, (2, -5), (-2, 4), 8), b: e(2, (4, -10), (-4, 12), 8), c: e(1, (2, -5), (-2, 4), 8), m_min: 2, mode: Equal },
];

/// n = 2: (case, carrier m, 8a, 8b, 8c, mode).
const CIRCLE: [(u8, i64, i64, i64, i64, MassMode); 8] = [
    (1, 0, 0, 0, 0, Arbitrary),
    (2, 1, 1, 2, 1, Arbitrary),
    (3, 1, 1, 2, 0, Equal),
    (4, 1, 0, 2, 1, Equal),
    (5, 2, 1, 6, 1, Equal),
    (6, 2, 4, 6, 1, Equal),
    (7, 2, 1, 6, 4, Equal),
    (8, 3, 4, 12, 4, Equal),
];

/// Number of channels for the parity class of `n`.
pub fn case_count(n: usize) -> u8 {
    if n == 2 {
        8
    } else {
        4
    }
}

/// Carrier weight `m` of an `n = 2` channel.
pub fn circle_carrier(case_id: u8) -> Option<i64> {
    CIRCLE.iter().find(|row| row.0 == case_id).map(|row| row.1)
}

/// `(a, b, c)` for channel `case_id` of the sphere `S^n` with leading weight `m_k`.
///
/// For `n = 2` the carrier weight is fixed by the channel and `m_k` must match it.
pub fn radial_coefficients(n: usize, case_id: u8, m_k: i64) -> Result<RadialCoefficients> {
    if n < 2 {
        return invalid(format!("sphere dimension n must be >= 2, got {n}"));
    }
    if n == 2 {
        let Some(&(_, m, a, b, c, mode)) = CIRCLE.iter().find(|row| row.0 == case_id) else {
            return invalid(format!("n=2 table has cases 1..8, got case {case_id}"));
        };
        if m_k != m {
            return invalid(format!("n=2 table case {case_id} is carried by m={m}, got m_k={m_k}"));
        }
        return Ok(RadialCoefficients {
            a: Q::new(a.into(), 8.into()),
            b: Q::new(b.into(), 8.into()),
            c: Q::new(c.into(), 8.into()),
            mass_mode: mode,
            provenance: Provenance { n, case_id, m_k, table: "n=2".into() },
        });
    }
    let (rows, k, label) = if n.is_multiple_of(2) { (&EVEN, (n / 2) as i64, "n=2k") } else { (&ODD, n.div_ceil(2) as i64, "n=2k-1") };
    let Some(row) = rows.iter().find(|r| r.case_id == case_id) else {
        return invalid(format!("{label} table has cases 1..4, got case {case_id}"));
    };
    if m_k < row.m_min {
        return invalid(format!("{label} table case {case_id} requires m_k >= {}, got {m_k}", row.m_min));
    }
    let out = RadialCoefficients {
        a: row.a.eval(k, m_k),
        b: row.b.eval(k, m_k),
        c: row.c.eval(k, m_k),
        mass_mode: row.mode,
        provenance: Provenance { n, case_id, m_k, table: label.into() },
    };
    debug_assert!(!out.a.is_negative() && !out.b.is_negative() && !out.c.is_negative());
    Ok(out)
}

/// `(a, b, c)` obtained by inserting the eigenvalues of `D₀², D₁, D₂` into the
/// radial reduction of the Hamiltonian: `a = -δ₂/8`, `b = -(δ₀+δ₁+δ₂)/8`, `c = -δ₁/8`.
pub fn coefficients_from_record(rec: &EigenvectorRecord) -> (Q, Q, Q) {
    let eight = q(8);
    (-&rec.delta2 / &eight, -(&rec.delta0 + &rec.delta1 + &rec.delta2) / &eight, -&rec.delta1 / &eight)
}

pub fn potential(kind: PotentialKind, params: &PhysicalParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return invalid(format!("potential needs r > 0, got {r}"));
    }
    match kind {
        PotentialKind::Coulomb => Ok(params.coupling / (2.0 * params.radius) * (r - 1.0 / r)),
        PotentialKind::Oscillator => {
            if r == 1.0 {
                return Err(Error::Numeric("oscillator potential has a pole at r = 1".into()));
            }
            Ok(potential_c(kind, params, Complex64::new(r, 0.0)).re)
        }
    }
}

pub(crate) fn potential_c(kind: PotentialKind, params: &PhysicalParams, r: Complex64) -> Complex64 {
    let rr = params.radius;
    let g = params.coupling;
    match kind {
        PotentialKind::Coulomb => (r - 1.0 / r) * (g / (2.0 * rr)),
        PotentialKind::Oscillator => {
            let d = Complex64::new(1.0, 0.0) - r * r;
            r * r * (2.0 * rr * rr * g * g) / (d * d)
        }
    }
}

/// `f'' + p f' + q f = 0` at fixed energy.
#[derive(Clone, Debug)]
pub struct SpectralOde {
    pub kind: PotentialKind,
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub params: PhysicalParams,
    pub energy: f64,
}

impl SpectralOde {
    pub fn p_c(&self, r: Complex64) -> Complex64 {
        let n = self.n as f64;
        let r2 = r * r;
        ((3.0 - n) * r2 + (n - 1.0)) / ((r2 + 1.0) * r)
    }

    pub fn q_c(&self, r: Complex64) -> Complex64 {
        let m = self.params.reduced_mass();
        let rr = self.params.radius;
        let r2 = r * r;
        let v = potential_c(self.kind, &self.params, r);
        let s = r2 + 1.0;
        (8.0 / (s * s)) * ((self.energy - v) * (m * rr * rr) - self.a / r2 - self.b - self.c * r2)
    }

    pub fn p(&self, r: f64) -> f64 {
        self.p_c(Complex64::new(r, 0.0)).re
    }

    pub fn q(&self, r: f64) -> f64 {
        self.q_c(Complex64::new(r, 0.0)).re
    }

    /// Right end of the physical interval.
    pub fn r_max(&self) -> f64 {
        match self.kind {
            PotentialKind::Coulomb => f64::INFINITY,
            PotentialKind::Oscillator => 1.0,
        }
    }
}

pub fn spectral_ode(n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, kind: PotentialKind, energy: f64) -> SpectralOde {
    SpectralOde { kind, n, a: coeffs.a_f64(), b: coeffs.b_f64(), c: coeffs.c_f64(), params: *params, energy }
}

/// The oscillator equation in `ζ = r²`, a Fuchsian equation with singular
/// points `0, ±1, -1, ∞` and `ζ = -1` doubled into `±i` in `r`.
#[derive(Clone, Debug)]
pub struct ZetaOde {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub params: PhysicalParams,
    pub energy: f64,
}

impl ZetaOde {
    pub fn p_c(&self, z: Complex64) -> Complex64 {
        let n = self.n as f64;
        ((4.0 - n) * z + n) / (2.0 * z * (z + 1.0))
    }

    pub fn q_c(&self, z: Complex64) -> Complex64 {
        let m = self.params.reduced_mass();
        let rr = self.params.radius;
        let w = self.params.coupling;
        let zm = z - 1.0;
        let pot = 2.0 * rr * rr * w * w * z / (zm * zm);
        let zp = z + 1.0;
        2.0 / (z * zp * zp) * ((self.energy - pot) * (m * rr * rr) - self.a / z - self.b - self.c * z)
    }
}

pub fn oscillator_zeta_form(n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, energy: f64) -> ZetaOde {
    ZetaOde { n, a: coeffs.a_f64(), b: coeffs.b_f64(), c: coeffs.c_f64(), params: *params, energy }
}

/// Coefficients `A, B, C` of `D₂, D₃, D₁` in the two-body Hamiltonian.
pub fn hamiltonian_abc(params: &PhysicalParams, r: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    if !(r > 0.0) {
        return invalid(format!("hamiltonian coefficients need r > 0, got {r}"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return invalid(format!("alpha must lie in (0,1), got {alpha}"));
    }
    let (m1, m2, rr) = (params.m1, params.m2, params.radius);
    let beta = 1.0 - alpha;
    let th = r.atan();
    let s = 1.0 + r * r;
    let pre = s * s / (4.0 * m1 * m2 * rr * rr * r * r);
    let a = pre * (m1 * (2.0 * alpha * th).cos().powi(2) + m2 * (2.0 * beta * th).cos().powi(2));
    let b = pre / 2.0 * (m1 * (4.0 * alpha * th).sin() - m2 * (4.0 * beta * th).sin());
    let c = pre * (m1 * (2.0 * alpha * th).sin().powi(2) + m2 * (2.0 * beta * th).sin().powi(2));
    Ok((a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;

    #[test]
    fn table_examples() {
        let c = radial_coefficients(4, 1, 2).unwrap();
        assert_eq!((c.a.clone(), c.b.clone(), c.c.clone()), (q(1), q(2), q(1)));
        assert_eq!(c.mass_mode, MassMode::Arbitrary);
        let c = radial_coefficients(2, 1, 0).unwrap();
        assert_eq!((c.a, c.b, c.c), (q(0), q(0), q(0)));
        let c = radial_coefficients(3, 1, 0).unwrap();
        assert_eq!((c.a, c.b, c.c), (q(0), q(0), q(0)));
        let c = radial_coefficients(5, 4, 2).unwrap();
        // k = 3, m = 2: a = (4 + 2 - 6 + 4)/8, b = (4 + 2 - 6 + 6)/4
        assert_eq!((c.a, c.b), (qf(1, 2), qf(3, 2)));
    }

    #[test]
    fn table_rejections() {
        assert!(radial_coefficients(4, 5, 2).is_err());
        assert!(radial_coefficients(4, 4, 1).is_err());
        assert!(radial_coefficients(2, 9, 0).is_err());
        assert!(radial_coefficients(2, 5, 1).is_err());
        assert!(radial_coefficients(1, 1, 0).is_err());
    }

    #[test]
    fn potentials() {
        let p = PhysicalParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(potential(PotentialKind::Coulomb, &p, 1.0).unwrap(), 0.0);
        assert!((potential(PotentialKind::Coulomb, &p, 2.0).unwrap() - 0.75).abs() < 1e-15);
        assert!(potential(PotentialKind::Oscillator, &p, 1.0).is_err());
        let r = 1e-4;
        let v = potential(PotentialKind::Oscillator, &p, r).unwrap();
        assert!((v / (2.0 * r * r) - 1.0).abs() < 1e-7);
        assert!(PhysicalParams::new(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn ode_examples() {
        let p = PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).unwrap();
        let z = radial_coefficients(3, 1, 0).unwrap();
        let ode = spectral_ode(3, &z, &p, PotentialKind::Coulomb, 0.0);
        assert!((ode.p(1.0) - 1.0).abs() < 1e-15);
        let ode = spectral_ode(2, &radial_coefficients(2, 1, 0).unwrap(), &p, PotentialKind::Oscillator, 0.7);
        let r: f64 = 0.3;
        let want = 8.0 / (1.0 + r * r).powi(2) * (0.7 - 2.0 * r * r / (1.0 - r * r).powi(2));
        assert!((ode.q(r) - want).abs() < 1e-13);
    }

    #[test]
    fn equal_mass_guard() {
        let c = radial_coefficients(4, 2, 1).unwrap();
        assert!(c.check_masses(&PhysicalParams::new(1.0, 2.0, 1.0, 1.0).unwrap()).is_err());
        assert!(c.check_masses(&PhysicalParams::new(2.0, 2.0, 1.0, 1.0).unwrap()).is_ok());
    }

    #[test]
    fn abc_coefficients() {
        let p = PhysicalParams::new(3.0, 3.0, 1.3, 1.0).unwrap();
        let m = p.reduced_mass();
        for i in 1..=20 {
            let r = 0.17 * i as f64;
            let (a, b, c) = hamiltonian_abc(&p, r, 0.5).unwrap();
            assert!(b.abs() < 1e-13);
            let s = 1.0 + r * r;
            let want = s * s / (4.0 * m * 1.69 * r * r);
            assert!(((a + c) - want).abs() <= 1e-12 * want);
            assert!((a - s / (4.0 * m * 1.69 * r * r)).abs() <= 1e-12 * a);
        }
        let p = PhysicalParams::new(1.0, 4.0, 2.0, 1.0).unwrap();
        let (a, _, _) = hamiltonian_abc(&p, 1e-5, p.alpha()).unwrap();
        let lead = 1.0 / (4.0 * p.reduced_mass() * 4.0);
        assert!((a * 1e-10 - lead).abs() < 1e-8 * lead);
    }
}
